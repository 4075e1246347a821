use std::collections::HashMap;

use crate::kernel::value::RcValue;
use crate::syntax::{Decl, Name, Plicity, Term};

#[derive(Debug)]
pub struct GlobalEntry {
    pub decl: Decl,
    pub ty: RcValue,
    pub body: Option<RcValue>,
}

/// Checked declarations in admission order. Entries are only added through
/// [`crate::kernel::check_decl`], so every entry is well-typed and refers only
/// to earlier entries.
#[derive(Debug, Default)]
pub struct GlobalEnv {
    entries: Vec<GlobalEntry>,
    index: HashMap<Name, usize>,
}

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&GlobalEntry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GlobalEntry> {
        self.entries.iter()
    }

    pub(crate) fn insert(&mut self, entry: GlobalEntry) {
        self.index.insert(entry.decl.name.clone(), self.entries.len());
        self.entries.push(entry);
    }

    /// Plicities of the leading Π binders of a global's declared type.
    pub fn binder_plicities(&self, name: &str) -> Vec<Plicity> {
        let mut out = Vec::new();
        if let Some(entry) = self.get(name) {
            let mut ty: &Term = &entry.decl.ty;
            while let Term::Pi(_, p, _, cod) = ty {
                out.push(*p);
                ty = cod;
            }
        }
        out
    }
}
