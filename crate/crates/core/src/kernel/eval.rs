//! Evaluation of core terms into values.

use std::cell::Cell;
use std::rc::Rc;

use crate::kernel::globals::GlobalEnv;
use crate::kernel::value::{Closure, Elim, Env, Head, RcValue, UnfoldSource, Value};
use crate::kernel::KernelError;
use crate::syntax::{MetaId, Term};

pub const DEFAULT_STEP_BUDGET: u64 = 100_000_000;

/// Read access to metavariable solutions. The kernel proper never sees metas;
/// the elaborator plugs its store in here.
pub trait MetaLookup {
    fn solution(&self, meta: MetaId) -> Option<RcValue>;
}

/// Evaluation context: frozen globals, optional meta solutions and a step
/// budget shared by everything evaluated through it.
pub struct Evaluator<'a> {
    pub globals: &'a GlobalEnv,
    metas: Option<&'a dyn MetaLookup>,
    steps: Cell<u64>,
    budget: u64,
}

pub type EvalResult<T> = Result<T, KernelError>;

impl<'a> Evaluator<'a> {
    pub fn new(globals: &'a GlobalEnv, budget: u64) -> Evaluator<'a> {
        Evaluator { globals, metas: None, steps: Cell::new(0), budget }
    }

    pub fn with_metas(globals: &'a GlobalEnv, metas: &'a dyn MetaLookup, budget: u64) -> Evaluator<'a> {
        Evaluator { globals, metas: Some(metas), steps: Cell::new(0), budget }
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    fn tick(&self) -> EvalResult<()> {
        let n = self.steps.get() + 1;
        if n > self.budget {
            return Err(KernelError::BudgetExhausted(self.budget));
        }
        self.steps.set(n);
        Ok(())
    }

    pub fn eval(&self, env: &Env, t: &Term) -> EvalResult<RcValue> {
        self.tick()?;
        Ok(match t {
            Term::Var(ix) => env.get(*ix).cloned().ok_or(KernelError::UnboundVariable(*ix))?,
            Term::Global(name) => {
                let entry = self
                    .globals
                    .get(name)
                    .ok_or_else(|| KernelError::UnknownGlobal(name.clone()))?;
                match &entry.body {
                    Some(body) => Value::glued_global(name.clone(), body.clone()),
                    None => Rc::new(Value::Rigid(Head::Axiom(name.clone()), Vec::new())),
                }
            }
            Term::Lam(x, p, body) => {
                Rc::new(Value::Lam(x.clone(), *p, Closure { env: env.clone(), body: body.clone() }))
            }
            Term::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(&f, a)?
            }
            Term::Pi(x, p, dom, cod) => Rc::new(Value::Pi(
                x.clone(),
                *p,
                self.eval(env, dom)?,
                Closure { env: env.clone(), body: cod.clone() },
            )),
            Term::Type(l) => Rc::new(Value::Type(*l)),
            Term::Id(ty, l, r) => {
                Rc::new(Value::Id(self.eval(env, ty)?, self.eval(env, l)?, self.eval(env, r)?))
            }
            Term::Refl(a) => Rc::new(Value::Refl(self.eval(env, a)?)),
            Term::J(motive, base, endpoint, path) => {
                let path = self.eval(env, path)?;
                let elim = Elim::J {
                    motive: self.eval(env, motive)?,
                    base: self.eval(env, base)?,
                    endpoint: self.eval(env, endpoint)?,
                };
                self.eliminate(&path, elim)?
            }
            Term::Meta(m) => match self.metas.and_then(|s| s.solution(*m)) {
                Some(v) => v,
                None => Rc::new(Value::Flex(*m, Vec::new())),
            },
        })
    }

    pub fn apply_closure(&self, c: &Closure, arg: RcValue) -> EvalResult<RcValue> {
        self.eval(&c.env.push(arg), &c.body)
    }

    pub fn apply(&self, f: &RcValue, arg: RcValue) -> EvalResult<RcValue> {
        self.eliminate(f, Elim::App(arg))
    }

    pub fn apply_many(&self, f: &RcValue, args: &[RcValue]) -> EvalResult<RcValue> {
        let mut v = f.clone();
        for a in args {
            v = self.apply(&v, a.clone())?;
        }
        Ok(v)
    }

    /// Applies one elimination. J on `refl` returns the base case; anything
    /// else that is stuck extends the neutral's spine.
    pub fn eliminate(&self, head: &RcValue, elim: Elim) -> EvalResult<RcValue> {
        match (&**head, elim) {
            (Value::Lam(_, _, c), Elim::App(a)) => self.apply_closure(c, a),
            (Value::Refl(_), Elim::J { base, .. }) => Ok(base),
            (Value::Rigid(h, sp), elim) => {
                let mut sp = sp.clone();
                sp.push(elim);
                Ok(Rc::new(Value::Rigid(h.clone(), sp)))
            }
            (Value::Flex(m, sp), elim) => {
                if let Some(sol) = self.metas.and_then(|s| s.solution(*m)) {
                    let forced = self.apply_spine(&sol, sp)?;
                    return self.eliminate(&forced, elim);
                }
                let mut sp = sp.clone();
                sp.push(elim);
                Ok(Rc::new(Value::Flex(*m, sp)))
            }
            (Value::Glued(_), elim @ Elim::App(_)) => Ok(Value::glued_elim(head, elim)),
            (Value::Glued(_), elim @ Elim::J { .. }) => {
                // J must see whether the path unfolds to refl.
                let forced = self.force(head)?;
                match &*forced {
                    Value::Refl(_) => {
                        let Elim::J { base, .. } = elim else { unreachable!() };
                        Ok(base)
                    }
                    Value::Rigid(..) | Value::Flex(..) => Ok(Value::glued_elim(head, elim)),
                    _ => Err(KernelError::IllFormedElimination("J applied to a non-path value".into())),
                }
            }
            (_, Elim::App(_)) => {
                Err(KernelError::IllFormedElimination("application of a non-function value".into()))
            }
            (_, Elim::J { .. }) => {
                Err(KernelError::IllFormedElimination("J applied to a non-path value".into()))
            }
        }
    }

    pub fn apply_spine(&self, head: &RcValue, spine: &[Elim]) -> EvalResult<RcValue> {
        let mut v = head.clone();
        for e in spine {
            v = self.eliminate(&v, e.clone())?;
        }
        Ok(v)
    }

    /// Resolves solved metas at the head, leaving glued globals folded.
    pub fn force_metas(&self, v: &RcValue) -> EvalResult<RcValue> {
        let mut v = v.clone();
        while let Value::Flex(m, sp) = &*v {
            match self.metas.and_then(|s| s.solution(*m)) {
                Some(sol) => v = self.apply_spine(&sol, sp)?,
                None => break,
            }
        }
        Ok(v)
    }

    /// Weak head normal form: unfolds glued globals and solved metas.
    pub fn force(&self, v: &RcValue) -> EvalResult<RcValue> {
        let mut v = self.force_metas(v)?;
        while let Value::Glued(g) = &*v {
            let next = self.unfold(g)?;
            v = self.force_metas(&next)?;
        }
        Ok(v)
    }

    /// One step of global unfolding, memoised in the glued value.
    pub fn unfold(&self, g: &crate::kernel::value::Glued) -> EvalResult<RcValue> {
        if let Some(v) = g.unfolding.cell.get() {
            return Ok(v.clone());
        }
        self.tick()?;
        let v = match &g.unfolding.source {
            UnfoldSource::Body(body) => body.clone(),
            UnfoldSource::Elim(prev, elim) => {
                let prev = self.force(prev)?;
                self.eliminate(&prev, elim.clone())?
            }
        };
        let _ = g.unfolding.cell.set(v.clone());
        Ok(v)
    }
}
