//! Kernel term language.
//!
//! Terms are nameless: variables are de Bruijn indices counting outward from
//! the innermost binder. Binder names and plicities are display hints only and
//! are ignored by [`alpha_eq`] and by evaluation.

use std::fmt;
use std::rc::Rc;

pub type Name = Rc<str>;

/// Universe index. `Type 0 : Type 1 : ...`, no cumulativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(pub u32);

impl Level {
    pub fn succ(self) -> Level {
        Level(self.0 + 1)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plicity {
    Explicit,
    Implicit,
}

/// Metavariable identifier. Only the elaborator creates terms mentioning
/// metas; the kernel rejects them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaId(pub usize);

impl fmt::Display for MetaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

pub type RcTerm = Rc<Term>;

#[derive(Clone, Debug)]
pub enum Term {
    Var(usize),
    Global(Name),
    Lam(Name, Plicity, RcTerm),
    App(RcTerm, RcTerm),
    Pi(Name, Plicity, RcTerm, RcTerm),
    Type(Level),
    Id(RcTerm, RcTerm, RcTerm),
    Refl(RcTerm),
    /// `J motive base endpoint path`. The motive binds the free endpoint and
    /// then the path.
    J(RcTerm, RcTerm, RcTerm, RcTerm),
    Meta(MetaId),
}

impl Term {
    pub fn var(ix: usize) -> RcTerm {
        Rc::new(Term::Var(ix))
    }

    pub fn global(name: &str) -> RcTerm {
        Rc::new(Term::Global(name.into()))
    }

    pub fn lam(name: &str, body: RcTerm) -> RcTerm {
        Rc::new(Term::Lam(name.into(), Plicity::Explicit, body))
    }

    pub fn app(fun: RcTerm, arg: RcTerm) -> RcTerm {
        Rc::new(Term::App(fun, arg))
    }

    pub fn apps(fun: RcTerm, args: impl IntoIterator<Item = RcTerm>) -> RcTerm {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn pi(name: &str, domain: RcTerm, codomain: RcTerm) -> RcTerm {
        Rc::new(Term::Pi(name.into(), Plicity::Explicit, domain, codomain))
    }

    pub fn universe(level: u32) -> RcTerm {
        Rc::new(Term::Type(Level(level)))
    }

    pub fn id(ty: RcTerm, lhs: RcTerm, rhs: RcTerm) -> RcTerm {
        Rc::new(Term::Id(ty, lhs, rhs))
    }

    pub fn refl(point: RcTerm) -> RcTerm {
        Rc::new(Term::Refl(point))
    }

    pub fn j(motive: RcTerm, base: RcTerm, endpoint: RcTerm, path: RcTerm) -> RcTerm {
        Rc::new(Term::J(motive, base, endpoint, path))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&RcTerm>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Number of nodes, used for mutation sampling and diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Global(_) | Term::Type(_) | Term::Meta(_) => 1,
            Term::Lam(_, _, b) | Term::Refl(b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Pi(_, _, a, b) => 1 + a.size() + b.size(),
            Term::Id(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Term::J(a, b, c, d) => 1 + a.size() + b.size() + c.size() + d.size(),
        }
    }

    pub fn has_metas(&self) -> bool {
        match self {
            Term::Meta(_) => true,
            Term::Var(_) | Term::Global(_) | Term::Type(_) => false,
            Term::Lam(_, _, b) | Term::Refl(b) => b.has_metas(),
            Term::App(f, a) => f.has_metas() || a.has_metas(),
            Term::Pi(_, _, a, b) => a.has_metas() || b.has_metas(),
            Term::Id(a, b, c) => a.has_metas() || b.has_metas() || c.has_metas(),
            Term::J(a, b, c, d) => a.has_metas() || b.has_metas() || c.has_metas() || d.has_metas(),
        }
    }

    /// True when no free index reaches past `depth` enclosing binders.
    pub fn is_closed_at(&self, depth: usize) -> bool {
        match self {
            Term::Var(ix) => *ix < depth,
            Term::Global(_) | Term::Type(_) | Term::Meta(_) => true,
            Term::Lam(_, _, b) => b.is_closed_at(depth + 1),
            Term::Refl(b) => b.is_closed_at(depth),
            Term::App(f, a) => f.is_closed_at(depth) && a.is_closed_at(depth),
            Term::Pi(_, _, a, b) => a.is_closed_at(depth) && b.is_closed_at(depth + 1),
            Term::Id(a, b, c) => a.is_closed_at(depth) && b.is_closed_at(depth) && c.is_closed_at(depth),
            Term::J(a, b, c, d) => {
                a.is_closed_at(depth) && b.is_closed_at(depth) && c.is_closed_at(depth) && d.is_closed_at(depth)
            }
        }
    }
}

/// A checked or to-be-checked top-level declaration. Axioms have no body.
#[derive(Clone, Debug)]
pub struct Decl {
    pub name: Name,
    pub ty: RcTerm,
    pub body: Option<RcTerm>,
}

/// Structural equality ignoring binder names and plicity hints.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Var(i), Term::Var(j)) => i == j,
        (Term::Global(x), Term::Global(y)) => x == y,
        (Term::Lam(_, _, x), Term::Lam(_, _, y)) => alpha_eq(x, y),
        (Term::App(f, x), Term::App(g, y)) => alpha_eq(f, g) && alpha_eq(x, y),
        (Term::Pi(_, _, a1, b1), Term::Pi(_, _, a2, b2)) => alpha_eq(a1, a2) && alpha_eq(b1, b2),
        (Term::Type(i), Term::Type(j)) => i == j,
        (Term::Id(a1, l1, r1), Term::Id(a2, l2, r2)) => {
            alpha_eq(a1, a2) && alpha_eq(l1, l2) && alpha_eq(r1, r2)
        }
        (Term::Refl(x), Term::Refl(y)) => alpha_eq(x, y),
        (Term::J(m1, b1, e1, p1), Term::J(m2, b2, e2, p2)) => {
            alpha_eq(m1, m2) && alpha_eq(b1, b2) && alpha_eq(e1, e2) && alpha_eq(p1, p2)
        }
        (Term::Meta(m), Term::Meta(n)) => m == n,
        _ => false,
    }
}

/// Adds `amount` to every free index at or above `cutoff`.
pub fn shift(t: &Term, cutoff: usize, amount: usize) -> RcTerm {
    Rc::new(shift_inner(t, cutoff, amount))
}

fn shift_inner(t: &Term, c: usize, d: usize) -> Term {
    let go = |t: &RcTerm, c: usize| Rc::new(shift_inner(t, c, d));
    match t {
        Term::Var(ix) if *ix >= c => Term::Var(ix + d),
        Term::Var(_) | Term::Global(_) | Term::Type(_) | Term::Meta(_) => t.clone(),
        Term::Lam(x, p, b) => Term::Lam(x.clone(), *p, go(b, c + 1)),
        Term::App(f, a) => Term::App(go(f, c), go(a, c)),
        Term::Pi(x, p, a, b) => Term::Pi(x.clone(), *p, go(a, c), go(b, c + 1)),
        Term::Id(a, l, r) => Term::Id(go(a, c), go(l, c), go(r, c)),
        Term::Refl(a) => Term::Refl(go(a, c)),
        Term::J(m, b, e, p) => Term::J(go(m, c), go(b, c), go(e, c), go(p, c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_eq_ignores_hints() {
        assert!(alpha_eq(&Term::lam("a", Term::var(0)), &Term::lam("b", Term::var(0))));
        assert!(!alpha_eq(&Term::Var(0), &Term::Var(1)));
        assert!(alpha_eq(&Term::Refl(Term::var(0)), &Term::Refl(Term::var(0))));
        let implicit = Term::Lam("a".into(), Plicity::Implicit, Term::var(0));
        assert!(alpha_eq(&implicit, &Term::lam("a", Term::var(0))));
    }

    #[test]
    fn shift_examples() {
        assert!(alpha_eq(&shift(&Term::Var(0), 0, 1), &Term::Var(1)));
        let bound = Term::lam("x", Term::var(0));
        assert!(alpha_eq(&shift(&bound, 0, 5), &bound));
        let free = Term::lam("x", Term::var(1));
        assert!(alpha_eq(&shift(&free, 0, 2), &Term::lam("x", Term::var(3))));
    }

    #[test]
    fn closedness() {
        assert!(Term::lam("x", Term::var(0)).is_closed_at(0));
        assert!(!Term::lam("x", Term::var(1)).is_closed_at(0));
        assert!(Term::pi("x", Term::var(0), Term::var(1)).is_closed_at(1));
    }
}
