use std::cell::RefCell;

use crate::kernel::{MetaLookup, RcValue};
use crate::surface::SourceSpan;
use crate::syntax::MetaId;

#[derive(Clone, Debug)]
pub struct MetaVar {
    pub id: MetaId,
    /// Number of bound variables the meta abstracts over.
    pub depth: usize,
    /// Type of the meta in its context, when known.
    pub expected_type: Option<RcValue>,
    pub span: SourceSpan,
    /// A closed value: a function of the `depth` context variables.
    pub solution: Option<RcValue>,
}

/// Metavariables of one elaboration session. Interior mutability lets the
/// evaluator read solutions while the unifier adds new ones.
#[derive(Debug, Default)]
pub struct MetaStore {
    metas: RefCell<Vec<MetaVar>>,
}

/// Saved solution state, for speculative unification.
pub struct Snapshot(Vec<MetaVar>);

impl MetaStore {
    pub fn new() -> MetaStore {
        MetaStore::default()
    }

    pub fn fresh(&self, depth: usize, expected_type: Option<RcValue>, span: SourceSpan) -> MetaId {
        let mut metas = self.metas.borrow_mut();
        let id = MetaId(metas.len());
        metas.push(MetaVar { id, depth, expected_type, span, solution: None });
        id
    }

    pub fn solve(&self, m: MetaId, value: RcValue) {
        let mut metas = self.metas.borrow_mut();
        debug_assert!(metas[m.0].solution.is_none(), "meta {m} solved twice");
        metas[m.0].solution = Some(value);
    }

    pub fn get(&self, m: MetaId) -> MetaVar {
        self.metas.borrow()[m.0].clone()
    }

    pub fn solution_of(&self, m: MetaId) -> RcValue {
        self.metas.borrow()[m.0].solution.clone().expect("meta is unsolved")
    }

    pub fn len(&self) -> usize {
        self.metas.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn unsolved(&self) -> Vec<MetaId> {
        self.metas.borrow().iter().filter(|m| m.solution.is_none()).map(|m| m.id).collect()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot(self.metas.borrow().clone())
    }

    pub fn restore(&self, s: Snapshot) {
        *self.metas.borrow_mut() = s.0;
    }
}

impl MetaLookup for MetaStore {
    fn solution(&self, meta: MetaId) -> Option<RcValue> {
        self.metas.borrow().get(meta.0).and_then(|m| m.solution.clone())
    }
}
