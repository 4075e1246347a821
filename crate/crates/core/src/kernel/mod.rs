//! The trusted core: evaluation, readback, conversion and type checking of
//! core terms.
//!
//! Nothing produced by the elaborator is trusted; every declaration is
//! re-checked here from its core form.

mod check;
mod conv;
mod eval;
mod globals;
mod readback;
pub mod value;

use std::fmt;

use thiserror::Error;

pub use check::{assert_defeq, check_decl, check_decl_with_budget, infer_type, Checker};
pub use eval::{EvalResult, Evaluator, MetaLookup, DEFAULT_STEP_BUDGET};
pub use globals::{GlobalEntry, GlobalEnv};
pub use readback::Unfold;
pub use value::{Closure, Elim, Env, Head, RcValue, Value};

use crate::syntax::{MetaId, Name};

/// One step from a term to one of its immediate subterms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Fun,
    Arg,
    LamBody,
    PiDomain,
    PiCodomain,
    IdType,
    IdLhs,
    IdRhs,
    ReflPoint,
    JMotive,
    JBase,
    JEndpoint,
    JPath,
}

impl Step {
    fn label(self) -> &'static str {
        match self {
            Step::Fun => "fun",
            Step::Arg => "arg",
            Step::LamBody => "body",
            Step::PiDomain => "domain",
            Step::PiCodomain => "codomain",
            Step::IdType => "id-type",
            Step::IdLhs => "lhs",
            Step::IdRhs => "rhs",
            Step::ReflPoint => "refl-point",
            Step::JMotive => "J-motive",
            Step::JBase => "J-base",
            Step::JEndpoint => "J-endpoint",
            Step::JPath => "J-path",
        }
    }
}

/// Position of a subterm, as the sequence of steps from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermPath(pub Vec<Step>);

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "<root>");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", s.label())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error)]
pub enum KernelError {
    #[error("type error at {path}: expected {expected}, found {found}")]
    Type { path: TermPath, expected: String, found: String },
    #[error("duplicate declaration `{0}`")]
    DuplicateName(Name),
    #[error("unknown global `{0}`")]
    UnknownGlobal(Name),
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("unsolved metavariable {0} reached the kernel")]
    UnsolvedMeta(MetaId),
    #[error("evaluation step budget of {0} exhausted")]
    BudgetExhausted(u64),
    #[error("ill-formed elimination: {0}")]
    IllFormedElimination(String),
    #[error("declaration `{0}` has free variables")]
    NotClosed(Name),
}
