//! Reading values back into terms.
//!
//! [`Evaluator::quote`] is untyped and produces β-normal terms. It is what the
//! elaborator uses for zonking and diagnostics. [`Evaluator::readback`] is
//! type-directed and produces β-normal, η-long terms.

use std::rc::Rc;

use crate::kernel::eval::{EvalResult, Evaluator};
use crate::kernel::value::{Elim, Head, RcValue, Spine, Value};
use crate::kernel::KernelError;
use crate::syntax::{Name, RcTerm, Term};

/// Whether defined globals are unfolded during readback.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unfold {
    /// Keep stuck applications of defined globals folded.
    None,
    /// Unfold every defined global.
    Full,
}

fn index_of(depth: usize, level: usize) -> usize {
    depth - 1 - level
}

fn ill_formed(msg: &str) -> KernelError {
    KernelError::IllFormedElimination(msg.into())
}

impl Evaluator<'_> {
    fn prepare(&self, v: &RcValue, mode: Unfold) -> EvalResult<RcValue> {
        match mode {
            Unfold::None => self.force_metas(v),
            Unfold::Full => self.force(v),
        }
    }

    pub fn quote(&self, depth: usize, v: &RcValue, mode: Unfold) -> EvalResult<RcTerm> {
        let v = self.prepare(v, mode)?;
        Ok(match &*v {
            Value::Lam(x, p, c) => {
                let body = self.apply_closure(c, Value::var(depth))?;
                Rc::new(Term::Lam(x.clone(), *p, self.quote(depth + 1, &body, mode)?))
            }
            Value::Pi(x, p, dom, c) => {
                let cod = self.apply_closure(c, Value::var(depth))?;
                Rc::new(Term::Pi(
                    x.clone(),
                    *p,
                    self.quote(depth, dom, mode)?,
                    self.quote(depth + 1, &cod, mode)?,
                ))
            }
            Value::Type(l) => Rc::new(Term::Type(*l)),
            Value::Id(t, a, b) => Term::id(
                self.quote(depth, t, mode)?,
                self.quote(depth, a, mode)?,
                self.quote(depth, b, mode)?,
            ),
            Value::Refl(a) => Term::refl(self.quote(depth, a, mode)?),
            Value::Rigid(h, sp) => {
                let head = match h {
                    Head::Var(l) => Term::var(index_of(depth, *l)),
                    Head::Axiom(n) => Rc::new(Term::Global(n.clone())),
                };
                self.quote_spine(depth, head, sp, mode)?
            }
            Value::Flex(m, sp) => self.quote_spine(depth, Rc::new(Term::Meta(*m)), sp, mode)?,
            Value::Glued(g) => {
                self.quote_spine(depth, Rc::new(Term::Global(g.name.clone())), &g.spine, mode)?
            }
        })
    }

    fn quote_spine(&self, depth: usize, head: RcTerm, sp: &Spine, mode: Unfold) -> EvalResult<RcTerm> {
        let mut t = head;
        for e in sp {
            t = match e {
                Elim::App(a) => Term::app(t, self.quote(depth, a, mode)?),
                Elim::J { motive, base, endpoint } => Term::j(
                    self.quote(depth, motive, mode)?,
                    self.quote(depth, base, mode)?,
                    self.quote(depth, endpoint, mode)?,
                    t,
                ),
            };
        }
        Ok(t)
    }

    /// Type-directed readback. `ctx` holds the types of the bound variables,
    /// outermost first; its length is the binder depth of `v`.
    pub fn readback(&self, ctx: &mut Vec<RcValue>, v: &RcValue, ty: &RcValue, mode: Unfold) -> EvalResult<RcTerm> {
        let depth = ctx.len();
        let ty = self.force(ty)?;
        match &*ty {
            Value::Pi(x, p, dom, cod) => {
                let var = Value::var(depth);
                let body = self.apply(v, var.clone())?;
                let body_ty = self.apply_closure(cod, var)?;
                ctx.push(dom.clone());
                let body = self.readback(ctx, &body, &body_ty, mode);
                ctx.pop();
                Ok(Rc::new(Term::Lam(binder_name(v, x), *p, body?)))
            }
            Value::Type(_) => self.readback_type(ctx, v, mode),
            _ => {
                let v = self.prepare(v, mode)?;
                match &*v {
                    Value::Refl(a) => {
                        let Value::Id(a_ty, _, _) = &*ty else {
                            return Err(ill_formed("refl read back at a non-identity type"));
                        };
                        Ok(Term::refl(self.readback(ctx, a, a_ty, mode)?))
                    }
                    Value::Rigid(..) | Value::Glued(..) => Ok(self.readback_neutral(ctx, &v, mode)?.0),
                    Value::Flex(m, _) => Err(KernelError::UnsolvedMeta(*m)),
                    _ => Err(ill_formed("value does not inhabit its type")),
                }
            }
        }
    }

    pub fn readback_type(&self, ctx: &mut Vec<RcValue>, v: &RcValue, mode: Unfold) -> EvalResult<RcTerm> {
        let depth = ctx.len();
        let v = self.prepare(v, mode)?;
        match &*v {
            Value::Pi(x, p, dom, cod) => {
                let dom_t = self.readback_type(ctx, dom, mode)?;
                let body = self.apply_closure(cod, Value::var(depth))?;
                ctx.push(dom.clone());
                let cod_t = self.readback_type(ctx, &body, mode);
                ctx.pop();
                Ok(Rc::new(Term::Pi(x.clone(), *p, dom_t, cod_t?)))
            }
            Value::Type(l) => Ok(Rc::new(Term::Type(*l))),
            Value::Id(t, a, b) => Ok(Term::id(
                self.readback_type(ctx, t, mode)?,
                self.readback(ctx, a, t, mode)?,
                self.readback(ctx, b, t, mode)?,
            )),
            Value::Rigid(..) | Value::Glued(..) => Ok(self.readback_neutral(ctx, &v, mode)?.0),
            Value::Flex(m, _) => Err(KernelError::UnsolvedMeta(*m)),
            _ => Err(ill_formed("value is not a type")),
        }
    }

    /// Reads back a neutral, returning the term and its type.
    fn readback_neutral(&self, ctx: &mut Vec<RcValue>, v: &RcValue, mode: Unfold) -> EvalResult<(RcTerm, RcValue)> {
        let depth = ctx.len();
        let (mut term, mut ty, mut cur, spine) = match &**v {
            Value::Rigid(Head::Var(l), sp) => {
                let ty = ctx.get(*l).cloned().ok_or(KernelError::UnboundVariable(*l))?;
                (Term::var(index_of(depth, *l)), ty, Value::var(*l), sp)
            }
            Value::Rigid(Head::Axiom(n), sp) => {
                let ty = self.global_type(n)?;
                (Rc::new(Term::Global(n.clone())), ty, Rc::new(Value::Rigid(Head::Axiom(n.clone()), Vec::new())), sp)
            }
            Value::Glued(g) => {
                let ty = self.global_type(&g.name)?;
                let start = self.eval(&Default::default(), &Term::Global(g.name.clone()))?;
                (Rc::new(Term::Global(g.name.clone())), ty, start, &g.spine)
            }
            _ => return Err(ill_formed("expected a neutral value")),
        };
        for elim in spine {
            let fty = self.force(&ty)?;
            match elim {
                Elim::App(a) => {
                    let Value::Pi(_, _, dom, cod) = &*fty else {
                        return Err(ill_formed("application of a non-function neutral"));
                    };
                    term = Term::app(term, self.readback(ctx, a, dom, mode)?);
                    ty = self.apply_closure(cod, a.clone())?;
                }
                Elim::J { motive, base, endpoint } => {
                    let Value::Id(a_ty, x, _) = &*fty else {
                        return Err(ill_formed("J on a neutral that is not a path"));
                    };
                    let motive_t = self.readback_motive(ctx, motive, a_ty, x, mode)?;
                    let base_ty = self.apply_many(motive, &[x.clone(), Rc::new(Value::Refl(x.clone()))])?;
                    let base_t = self.readback(ctx, base, &base_ty, mode)?;
                    let endpoint_t = self.readback(ctx, endpoint, a_ty, mode)?;
                    term = Term::j(motive_t, base_t, endpoint_t, term);
                    ty = self.apply_many(motive, &[endpoint.clone(), cur.clone()])?;
                }
            }
            cur = self.eliminate(&cur, elim.clone())?;
        }
        Ok((term, ty))
    }

    fn readback_motive(
        &self,
        ctx: &mut Vec<RcValue>,
        motive: &RcValue,
        a_ty: &RcValue,
        x: &RcValue,
        mode: Unfold,
    ) -> EvalResult<RcTerm> {
        let depth = ctx.len();
        let y = Value::var(depth);
        let e = Value::var(depth + 1);
        let path_ty = Rc::new(Value::Id(a_ty.clone(), x.clone(), y.clone()));
        let body = self.apply_many(motive, &[y, e])?;
        ctx.push(a_ty.clone());
        ctx.push(path_ty);
        let body_t = self.readback_type(ctx, &body, mode);
        ctx.pop();
        ctx.pop();
        let (n1, n2) = motive_names(motive);
        Ok(Term::lam(&n1, Term::lam(&n2, body_t?)))
    }

    fn global_type(&self, name: &Name) -> EvalResult<RcValue> {
        self.globals
            .get(name)
            .map(|e| e.ty.clone())
            .ok_or_else(|| KernelError::UnknownGlobal(name.clone()))
    }
}

fn binder_name(v: &RcValue, fallback: &Name) -> Name {
    match &**v {
        Value::Lam(x, _, _) => x.clone(),
        _ => fallback.clone(),
    }
}

fn motive_names(motive: &RcValue) -> (String, String) {
    match &**motive {
        Value::Lam(x, _, c) => {
            let second = match &*c.body {
                Term::Lam(y, _, _) => y.to_string(),
                _ => "e".to_string(),
            };
            (x.to_string(), second)
        }
        _ => ("y".to_string(), "e".to_string()),
    }
}
