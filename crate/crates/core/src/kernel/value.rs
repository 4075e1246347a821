//! Semantic domain for normalization by evaluation.

use std::cell::OnceCell;
use std::rc::Rc;

use crate::syntax::{Level, MetaId, Name, Plicity, RcTerm};

pub type RcValue = Rc<Value>;

/// Evaluation environment, innermost binder last. Persistent so that closures
/// can share prefixes.
#[derive(Clone, Debug, Default)]
pub struct Env {
    node: Option<Rc<EnvNode>>,
    len: usize,
}

#[derive(Debug)]
struct EnvNode {
    value: RcValue,
    rest: Option<Rc<EnvNode>>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&self, value: RcValue) -> Env {
        Env {
            node: Some(Rc::new(EnvNode { value, rest: self.node.clone() })),
            len: self.len + 1,
        }
    }

    /// Looks up a de Bruijn index.
    pub fn get(&self, ix: usize) -> Option<&RcValue> {
        let mut node = self.node.as_ref();
        for _ in 0..ix {
            node = node?.rest.as_ref();
        }
        node.map(|n| &n.value)
    }

    /// Environment of fresh variables `0 .. depth`, used when checking under
    /// binders.
    pub fn fresh(depth: usize) -> Env {
        (0..depth).fold(Env::new(), |env, lvl| env.push(Value::var(lvl)))
    }
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub env: Env,
    pub body: RcTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    /// Bound variable as a de Bruijn level.
    Var(usize),
    /// A global without a body.
    Axiom(Name),
}

#[derive(Clone, Debug)]
pub enum Elim {
    App(RcValue),
    J { motive: RcValue, base: RcValue, endpoint: RcValue },
}

pub type Spine = Vec<Elim>;

#[derive(Debug)]
pub enum Value {
    Lam(Name, Plicity, Closure),
    Pi(Name, Plicity, RcValue, Closure),
    Type(Level),
    Id(RcValue, RcValue, RcValue),
    Refl(RcValue),
    /// Stuck on a bound variable or an axiom.
    Rigid(Head, Spine),
    /// Stuck on an unsolved metavariable (elaboration only).
    Flex(MetaId, Spine),
    /// A defined global applied to a spine, with its unfolding computed on
    /// demand.
    Glued(Glued),
}

#[derive(Debug)]
pub struct Glued {
    pub name: Name,
    pub spine: Spine,
    pub(crate) unfolding: Unfolding,
}

#[derive(Debug)]
pub(crate) struct Unfolding {
    pub(crate) source: UnfoldSource,
    pub(crate) cell: OnceCell<RcValue>,
}

#[derive(Debug)]
pub(crate) enum UnfoldSource {
    /// The global's own body value.
    Body(RcValue),
    /// Eliminating the (glued) value by one more spine entry.
    Elim(RcValue, Elim),
}

impl Value {
    pub fn var(level: usize) -> RcValue {
        Rc::new(Value::Rigid(Head::Var(level), Vec::new()))
    }

    pub fn universe(level: u32) -> RcValue {
        Rc::new(Value::Type(Level(level)))
    }

    pub fn glued_global(name: Name, body: RcValue) -> RcValue {
        Rc::new(Value::Glued(Glued {
            name,
            spine: Vec::new(),
            unfolding: Unfolding { source: UnfoldSource::Body(body), cell: OnceCell::new() },
        }))
    }

    pub(crate) fn glued_elim(glued: &RcValue, elim: Elim) -> RcValue {
        let Value::Glued(g) = &**glued else { unreachable!("glued_elim on non-glued value") };
        let mut spine = g.spine.clone();
        spine.push(elim.clone());
        Rc::new(Value::Glued(Glued {
            name: g.name.clone(),
            spine,
            unfolding: Unfolding {
                source: UnfoldSource::Elim(glued.clone(), elim),
                cell: OnceCell::new(),
            },
        }))
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self, Value::Rigid(..) | Value::Flex(..) | Value::Glued(..))
    }
}
