//! The bundled proof corpus: `.hpt` sources in dependency order, the
//! manifest mapping declarations to their place in the development, and the
//! definitional assertions the sources carry.

use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;

use crate::surface::{parse_file_named, DeclKind};

/// Environment variable that points the corpus loader at another directory.
pub const CORPUS_DIR_VAR: &str = "HPT_CORPUS_DIR";

pub const MANIFEST_FILE: &str = "MANIFEST.tsv";

const BUNDLED: &[(&str, &str)] = &[
    ("01-base.hpt", include_str!("../corpus/01-base.hpt")),
    ("02-whisker.hpt", include_str!("../corpus/02-whisker.hpt")),
    ("03-squash.hpt", include_str!("../corpus/03-squash.hpt")),
    ("04-eckmann-hilton.hpt", include_str!("../corpus/04-eckmann-hilton.hpt")),
    ("05-eh-refl.hpt", include_str!("../corpus/05-eh-refl.hpt")),
    ("06-squares.hpt", include_str!("../corpus/06-squares.hpt")),
    ("07-eh-naturality.hpt", include_str!("../corpus/07-eh-naturality.hpt")),
    ("08-syllepsis.hpt", include_str!("../corpus/08-syllepsis.hpt")),
];

/// The two axioms every development starts from.
pub const BASE_AXIOMS: &str = "axiom A : Type\naxiom star : A\n";

const BUNDLED_MANIFEST: &str = include_str!("../corpus/MANIFEST.tsv");

/// The bundled sources as `(file name, text)`, in dependency order.
pub fn prelude_sources() -> Vec<(String, String)> {
    BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
}

/// Corpus sources honoring [`CORPUS_DIR_VAR`]: every `*.hpt` file of that
/// directory sorted by name, or the bundled sources when it is unset.
pub fn load_sources() -> io::Result<Vec<(String, String)>> {
    match std::env::var_os(CORPUS_DIR_VAR) {
        Some(dir) => read_dir_sources(Path::new(&dir)),
        None => Ok(prelude_sources()),
    }
}

pub fn read_dir_sources(dir: &Path) -> io::Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "hpt") {
            let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            files.push((name, std::fs::read_to_string(&path)?));
        }
    }
    files.sort();
    Ok(files)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Definition,
    Lemma,
    Theorem,
    Axiom,
    Assertion,
}

impl FromStr for EntryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "definition" => EntryKind::Definition,
            "lemma" => EntryKind::Lemma,
            "theorem" => EntryKind::Theorem,
            "axiom" => EntryKind::Axiom,
            "assertion" => EntryKind::Assertion,
            _ => return Err(format!("unknown entry kind `{s}`")),
        })
    }
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryKind::Definition => "definition",
            EntryKind::Lemma => "lemma",
            EntryKind::Theorem => "theorem",
            EntryKind::Axiom => "axiom",
            EntryKind::Assertion => "assertion",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: EntryKind,
    pub anchor: String,
    pub summary: String,
}

#[derive(Clone, Debug)]
pub struct CorpusManifest {
    pub entries: Vec<CorpusEntry>,
    pub assertion_count: usize,
}

impl CorpusManifest {
    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Parses a manifest table: one `name<TAB>kind<TAB>anchor<TAB>summary`
/// record per line; blank lines and `#` comments are skipped.
pub fn parse_manifest(text: &str) -> Result<Vec<CorpusEntry>, String> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [name, kind, anchor, summary] = fields[..] else {
            return Err(format!("manifest line {}: expected 4 tab-separated fields", i + 1));
        };
        let kind = kind.parse().map_err(|e| format!("manifest line {}: {e}", i + 1))?;
        entries.push(CorpusEntry {
            name: name.to_string(),
            kind,
            anchor: anchor.to_string(),
            summary: summary.to_string(),
        });
    }
    Ok(entries)
}

/// The bundled manifest.
pub fn manifest() -> CorpusManifest {
    let entries = parse_manifest(BUNDLED_MANIFEST).expect("bundled manifest is well formed");
    CorpusManifest { entries, assertion_count: required_assertions().len() }
}

/// Manifest honoring [`CORPUS_DIR_VAR`] when that directory has its own
/// manifest table.
pub fn load_manifest() -> io::Result<CorpusManifest> {
    let Some(dir) = std::env::var_os(CORPUS_DIR_VAR) else { return Ok(manifest()) };
    let path = Path::new(&dir).join(MANIFEST_FILE);
    if !path.exists() {
        return Ok(manifest());
    }
    let text = std::fs::read_to_string(&path)?;
    let entries = parse_manifest(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    Ok(CorpusManifest { entries, assertion_count: required_assertions().len() })
}

/// A definitional equation `lhs ~ rhs : ty`, as source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub file: String,
    pub lhs: String,
    pub rhs: String,
    pub ty: String,
}

/// Every `#assert defeq` directive of the bundled sources.
pub fn required_assertions() -> Vec<Assertion> {
    let mut out = Vec::new();
    for (file, text) in BUNDLED {
        let decls = parse_file_named(file, text).expect("bundled corpus parses");
        for d in decls {
            if let DeclKind::AssertDefeq { lhs: l, rhs: r, ty: t } = &d.kind {
                let slice = |s: &crate::surface::SourceSpan| text[s.start..s.end].to_string();
                out.push(Assertion { file: file.to_string(), lhs: slice(&l.span), rhs: slice(&r.span), ty: slice(&t.span) });
            }
        }
    }
    out
}
