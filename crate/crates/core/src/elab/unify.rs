//! Pattern unification.
//!
//! A meta applied to distinct bound variables is solved by inverting that
//! spine and renaming the other side into the meta's own context. Anything
//! else is decomposed structurally; applications of the same defined global
//! are first compared argument-wise and unfolded only if that fails.

use std::collections::HashMap;
use std::rc::Rc;

use crate::elab::Elaborator;
use crate::kernel::{Elim, Head, KernelError, RcValue, Value};
use crate::syntax::{MetaId, RcTerm, Term};

#[derive(Clone, Debug)]
pub enum UnifyError {
    Mismatch,
    Occurs(MetaId),
    /// The solution would mention a variable the meta cannot see.
    Scope,
    /// A meta applied to something other than distinct bound variables.
    NotPattern,
    Kernel(KernelError),
}

impl From<KernelError> for UnifyError {
    fn from(e: KernelError) -> Self {
        UnifyError::Kernel(e)
    }
}

type UResult<T> = Result<T, UnifyError>;

/// Maps variables of the current context (levels) to variables of the
/// meta's context.
struct Renaming {
    meta: MetaId,
    dom: usize,
    cod: usize,
    map: HashMap<usize, usize>,
}

impl Renaming {
    fn lift(&self) -> Renaming {
        let mut map = self.map.clone();
        map.insert(self.cod, self.dom);
        Renaming { meta: self.meta, dom: self.dom + 1, cod: self.cod + 1, map }
    }
}

impl Elaborator<'_> {
    pub(crate) fn unify_at(&self, depth: usize, l: &RcValue, r: &RcValue) -> UResult<()> {
        let l = self.ev.force_metas(l)?;
        let r = self.ev.force_metas(r)?;
        if Rc::ptr_eq(&l, &r) {
            return Ok(());
        }
        match (&*l, &*r) {
            (Value::Lam(_, _, c1), Value::Lam(_, _, c2)) => {
                let x = Value::var(depth);
                let b1 = self.ev.apply_closure(c1, x.clone())?;
                let b2 = self.ev.apply_closure(c2, x)?;
                self.unify_at(depth + 1, &b1, &b2)
            }
            (Value::Lam(_, _, c), _) => {
                let x = Value::var(depth);
                let b1 = self.ev.apply_closure(c, x.clone())?;
                let b2 = self.ev.apply(&r, x)?;
                self.unify_at(depth + 1, &b1, &b2)
            }
            (_, Value::Lam(_, _, c)) => {
                let x = Value::var(depth);
                let b1 = self.ev.apply(&l, x.clone())?;
                let b2 = self.ev.apply_closure(c, x)?;
                self.unify_at(depth + 1, &b1, &b2)
            }
            (Value::Flex(m1, s1), Value::Flex(m2, s2)) if m1 == m2 => self.unify_spine(depth, s1, s2),
            (Value::Flex(m, sp), _) => match self.solve(depth, *m, sp, &r) {
                Err(UnifyError::NotPattern) if matches!(&*r, Value::Flex(..)) => {
                    let Value::Flex(m2, sp2) = &*r else { unreachable!() };
                    self.solve(depth, *m2, sp2, &l)
                }
                res => res,
            },
            (_, Value::Flex(m, sp)) => self.solve(depth, *m, sp, &l),
            (Value::Glued(g1), Value::Glued(g2)) => {
                if g1.name == g2.name {
                    let snap = self.metas.snapshot();
                    match self.unify_spine(depth, &g1.spine, &g2.spine) {
                        Ok(()) => return Ok(()),
                        Err(UnifyError::Kernel(e)) => return Err(UnifyError::Kernel(e)),
                        Err(_) => self.metas.restore(snap),
                    }
                }
                let l = self.ev.unfold(g1)?;
                let r = self.ev.unfold(g2)?;
                self.unify_at(depth, &l, &r)
            }
            (Value::Glued(g), _) => {
                let l = self.ev.unfold(g)?;
                self.unify_at(depth, &l, &r)
            }
            (_, Value::Glued(g)) => {
                let r = self.ev.unfold(g)?;
                self.unify_at(depth, &l, &r)
            }
            (Value::Pi(_, _, d1, c1), Value::Pi(_, _, d2, c2)) => {
                self.unify_at(depth, d1, d2)?;
                let x = Value::var(depth);
                let b1 = self.ev.apply_closure(c1, x.clone())?;
                let b2 = self.ev.apply_closure(c2, x)?;
                self.unify_at(depth + 1, &b1, &b2)
            }
            (Value::Type(i), Value::Type(j)) if i == j => Ok(()),
            (Value::Id(t1, a1, b1), Value::Id(t2, a2, b2)) => {
                self.unify_at(depth, t1, t2)?;
                self.unify_at(depth, a1, a2)?;
                self.unify_at(depth, b1, b2)
            }
            (Value::Refl(a), Value::Refl(b)) => self.unify_at(depth, a, b),
            (Value::Rigid(h1, s1), Value::Rigid(h2, s2)) if h1 == h2 => self.unify_spine(depth, s1, s2),
            _ => Err(UnifyError::Mismatch),
        }
    }

    fn unify_spine(&self, depth: usize, s1: &[Elim], s2: &[Elim]) -> UResult<()> {
        if s1.len() != s2.len() {
            return Err(UnifyError::Mismatch);
        }
        for (e1, e2) in s1.iter().zip(s2) {
            match (e1, e2) {
                (Elim::App(a), Elim::App(b)) => self.unify_at(depth, a, b)?,
                (
                    Elim::J { motive: m1, base: b1, endpoint: x1 },
                    Elim::J { motive: m2, base: b2, endpoint: x2 },
                ) => {
                    self.unify_at(depth, m1, m2)?;
                    self.unify_at(depth, b1, b2)?;
                    self.unify_at(depth, x1, x2)?;
                }
                _ => return Err(UnifyError::Mismatch),
            }
        }
        Ok(())
    }

    /// Solves `?m spine = rhs`.
    fn solve(&self, depth: usize, m: MetaId, spine: &[Elim], rhs: &RcValue) -> UResult<()> {
        let mut map = HashMap::new();
        for (i, e) in spine.iter().enumerate() {
            let Elim::App(a) = e else { return Err(UnifyError::NotPattern) };
            match &*self.ev.force_metas(a)? {
                Value::Rigid(Head::Var(l), sp) if sp.is_empty() && !map.contains_key(l) => {
                    map.insert(*l, i);
                }
                _ => return Err(UnifyError::NotPattern),
            }
        }
        let ren = Renaming { meta: m, dom: spine.len(), cod: depth, map };
        let body = self.rename(&ren, rhs)?;
        let solution = (0..spine.len()).fold(body, |t, i| Term::lam(&format!("x{}", spine.len() - 1 - i), t));
        let value = self.ev.eval(&Default::default(), &solution)?;
        self.metas.solve(m, value);
        Ok(())
    }

    fn rename(&self, ren: &Renaming, v: &RcValue) -> UResult<RcTerm> {
        let v = self.ev.force_metas(v)?;
        Ok(match &*v {
            Value::Flex(m, sp) => {
                if *m == ren.meta {
                    return Err(UnifyError::Occurs(*m));
                }
                match self.rename_spine(ren, Rc::new(Term::Meta(*m)), sp) {
                    Err(UnifyError::Scope) => {
                        self.prune(ren, *m, sp)?;
                        self.rename(ren, &v)?
                    }
                    res => res?,
                }
            }
            Value::Rigid(Head::Var(l), sp) => {
                let Some(target) = ren.map.get(l) else { return Err(UnifyError::Scope) };
                self.rename_spine(ren, Term::var(ren.dom - 1 - target), sp)?
            }
            Value::Rigid(Head::Axiom(n), sp) => self.rename_spine(ren, Rc::new(Term::Global(n.clone())), sp)?,
            Value::Glued(g) => match self.rename_spine(ren, Rc::new(Term::Global(g.name.clone())), &g.spine) {
                Ok(t) => t,
                Err(UnifyError::Kernel(e)) => return Err(UnifyError::Kernel(e)),
                Err(_) => {
                    let unfolded = self.ev.unfold(g)?;
                    self.rename(ren, &unfolded)?
                }
            },
            Value::Lam(x, p, c) => {
                let body = self.ev.apply_closure(c, Value::var(ren.cod))?;
                Rc::new(Term::Lam(x.clone(), *p, self.rename(&ren.lift(), &body)?))
            }
            Value::Pi(x, p, dom, c) => {
                let cod = self.ev.apply_closure(c, Value::var(ren.cod))?;
                Rc::new(Term::Pi(x.clone(), *p, self.rename(ren, dom)?, self.rename(&ren.lift(), &cod)?))
            }
            Value::Type(l) => Rc::new(Term::Type(*l)),
            Value::Id(t, a, b) => Term::id(self.rename(ren, t)?, self.rename(ren, a)?, self.rename(ren, b)?),
            Value::Refl(a) => Term::refl(self.rename(ren, a)?),
        })
    }

    /// Solves `?m` with a fresh meta that ignores the arguments the renaming
    /// cannot see. Only applies when every argument is a bound variable.
    fn prune(&self, ren: &Renaming, m: MetaId, sp: &[Elim]) -> UResult<()> {
        let mut keep = Vec::new();
        for (i, e) in sp.iter().enumerate() {
            let Elim::App(a) = e else { return Err(UnifyError::Scope) };
            match &*self.ev.force_metas(a)? {
                Value::Rigid(Head::Var(l), s) if s.is_empty() => {
                    if ren.map.contains_key(l) {
                        keep.push(i);
                    }
                }
                _ => return Err(UnifyError::Scope),
            }
        }
        if keep.len() == sp.len() {
            return Err(UnifyError::Scope);
        }
        let old = self.metas.get(m);
        let ty = old.expected_type.filter(|t| matches!(&**t, Value::Type(_)));
        let fresh = self.metas.fresh(keep.len(), ty, old.span);
        let n = sp.len();
        let body = Term::apps(Rc::new(Term::Meta(fresh)), keep.iter().map(|&i| Term::var(n - 1 - i)));
        let solution = (0..n).fold(body, |t, i| Term::lam(&format!("x{}", n - 1 - i), t));
        let value = self.ev.eval(&Default::default(), &solution)?;
        self.metas.solve(m, value);
        Ok(())
    }

    fn rename_spine(&self, ren: &Renaming, head: RcTerm, sp: &[Elim]) -> UResult<RcTerm> {
        let mut t = head;
        for e in sp {
            t = match e {
                Elim::App(a) => Term::app(t, self.rename(ren, a)?),
                Elim::J { motive, base, endpoint } => Term::j(
                    self.rename(ren, motive)?,
                    self.rename(ren, base)?,
                    self.rename(ren, endpoint)?,
                    t,
                ),
            };
        }
        Ok(t)
    }
}
