//! Rendering core terms as surface syntax.
//!
//! Core terms are first converted to surface trees (restoring names, the
//! `=`/`*`/`**` notation and hiding implicit arguments of globals) and then
//! printed with [`print_surface`].

use crate::kernel::GlobalEnv;
use crate::surface::ast::{Binder, BinderPlicity, SourceSpan, SurfaceTerm, TermKind};
use crate::surface::lexer::is_ident_start;
use crate::surface::print::print_surface;
use crate::syntax::{Name, Plicity, Term};

/// What the printer needs to know about globals.
pub trait Signatures {
    fn is_global(&self, name: &str) -> bool;
    /// Plicities of the leading Π binders of the global's type.
    fn plicities(&self, name: &str) -> Vec<Plicity>;
}

impl Signatures for GlobalEnv {
    fn is_global(&self, name: &str) -> bool {
        self.contains(name)
    }

    fn plicities(&self, name: &str) -> Vec<Plicity> {
        self.binder_plicities(name)
    }
}

/// No globals known: every application is printed in full.
pub struct NoSignatures;

impl Signatures for NoSignatures {
    fn is_global(&self, _: &str) -> bool {
        false
    }

    fn plicities(&self, _: &str) -> Vec<Plicity> {
        Vec::new()
    }
}

/// Renders `t` in a context whose variables are named `names`, outermost
/// first.
pub fn pretty(t: &Term, names: &[Name], sigs: &dyn Signatures) -> String {
    print_surface(&to_surface(t, names, sigs))
}

pub fn to_surface(t: &Term, names: &[Name], sigs: &dyn Signatures) -> SurfaceTerm {
    let mut cx = Cx { names: names.iter().map(|n| n.to_string()).collect(), sigs };
    cx.term(t)
}

const KEYWORDS: &[&str] = &["def", "axiom", "fun", "Type", "refl", "J"];

fn span() -> SourceSpan {
    SourceSpan::whole_file("<pretty>")
}

fn node(kind: TermKind) -> SurfaceTerm {
    SurfaceTerm::new(span(), kind)
}

fn name(x: &str) -> SurfaceTerm {
    node(TermKind::Name(x.to_string()))
}

fn app(f: SurfaceTerm, a: SurfaceTerm) -> SurfaceTerm {
    node(TermKind::App(Box::new(f), Box::new(a)))
}

fn valid_ident(x: &str) -> bool {
    let mut chars = x.chars();
    chars.next().is_some_and(is_ident_start)
        && x.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '-'))
        && !x.ends_with('-')
        && !x.contains("--")
        && !KEYWORDS.contains(&x)
}

/// Whether de Bruijn index `ix` occurs free in `t`.
pub(crate) fn mentions(t: &Term, ix: usize) -> bool {
    match t {
        Term::Var(i) => *i == ix,
        Term::Global(_) | Term::Type(_) | Term::Meta(_) => false,
        Term::Lam(_, _, b) => mentions(b, ix + 1),
        Term::Refl(a) => mentions(a, ix),
        Term::App(f, a) => mentions(f, ix) || mentions(a, ix),
        Term::Pi(_, _, a, b) => mentions(a, ix) || mentions(b, ix + 1),
        Term::Id(a, b, c) => mentions(a, ix) || mentions(b, ix) || mentions(c, ix),
        Term::J(a, b, c, d) => mentions(a, ix) || mentions(b, ix) || mentions(c, ix) || mentions(d, ix),
    }
}

struct Cx<'a> {
    names: Vec<String>,
    sigs: &'a dyn Signatures,
}

impl Cx<'_> {
    fn fresh(&self, hint: &str) -> String {
        let base = if valid_ident(hint) { hint.to_string() } else { "x".to_string() };
        let taken = |x: &str| self.names.iter().any(|n| n == x) || self.sigs.is_global(x) || !valid_ident(x);
        if !taken(&base) {
            return base;
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.ends_with('-') || stem.is_empty() { base.as_str() } else { stem };
        (1..).map(|i| format!("{stem}{i}")).find(|x| !taken(x)).unwrap()
    }

    fn var(&self, ix: usize) -> SurfaceTerm {
        match self.names.len().checked_sub(ix + 1) {
            Some(level) => name(&self.names[level]),
            None => name(&format!("free{}", ix - self.names.len())),
        }
    }

    fn under<T>(&mut self, x: String, f: impl FnOnce(&mut Self) -> T) -> T {
        self.names.push(x);
        let r = f(self);
        self.names.pop();
        r
    }

    fn term(&mut self, t: &Term) -> SurfaceTerm {
        match t {
            Term::Var(ix) => self.var(*ix),
            Term::Global(x) => name(x),
            Term::Type(l) => node(TermKind::TypeU(l.0)),
            Term::Meta(m) => name(&m.to_string()),
            Term::Lam(..) => {
                let mut binders = Vec::new();
                let mut t = t;
                let depth = self.names.len();
                while let Term::Lam(x, p, body) = t {
                    let x = self.fresh(x);
                    binders.push(Binder {
                        names: vec![(x.clone(), span())],
                        annotation: None,
                        plicity: plicity(*p),
                        span: span(),
                    });
                    self.names.push(x);
                    t = body;
                }
                let body = self.term(t);
                self.names.truncate(depth);
                node(TermKind::Lam(binders, Box::new(body)))
            }
            Term::Pi(x, p, dom, cod) => {
                let dom_s = self.term(dom);
                if *p == Plicity::Explicit && !mentions(cod, 0) {
                    let cod_s = self.under("_".to_string(), |c| c.term(cod));
                    return node(TermKind::Arrow(Box::new(dom_s), Box::new(cod_s)));
                }
                let x = self.fresh(x);
                let binder = Binder {
                    names: vec![(x.clone(), span())],
                    annotation: Some(Box::new(dom_s)),
                    plicity: plicity(*p),
                    span: span(),
                };
                let cod_s = self.under(x, |c| c.term(cod));
                node(TermKind::Pi(vec![binder], Box::new(cod_s)))
            }
            Term::Id(_, l, r) => node(TermKind::IdSugar(Box::new(self.term(l)), Box::new(self.term(r)))),
            Term::Refl(a) => node(TermKind::ReflSugar(Some(Box::new(self.term(a))))),
            Term::J(m, b, _, p) => {
                node(TermKind::JSugar(Box::new(self.term(m)), Box::new(self.term(b)), Box::new(self.term(p))))
            }
            Term::App(..) => self.application(t),
        }
    }

    fn application(&mut self, t: &Term) -> SurfaceTerm {
        let (head, args) = t.spine();
        let Term::Global(g) = head else {
            let mut out = self.term(head);
            for a in args {
                out = app(out, self.term(a));
            }
            return out;
        };
        let plicities = self.sigs.plicities(g);
        let implicit = |i: usize| plicities.get(i) == Some(&Plicity::Implicit);
        // Implicit arguments can be hidden only if an explicit argument
        // follows them; otherwise fall back to `@g` with every argument.
        let hidden_ok = match args.len() {
            0 => !implicit(0),
            n => !implicit(n - 1),
        };
        if !hidden_ok {
            let mut out = node(TermKind::ExplicitName(g.to_string()));
            for a in args {
                out = app(out, self.term(a));
            }
            return out;
        }
        let explicit: Vec<SurfaceTerm> =
            args.iter().enumerate().filter(|(i, _)| !implicit(*i)).map(|(_, a)| self.term(a)).collect();
        // `concat l r` and `par-concat l r` come out as infix via the printer.
        let mut out = name(g);
        for a in explicit {
            out = app(out, a);
        }
        out
    }
}

fn plicity(p: Plicity) -> BinderPlicity {
    match p {
        Plicity::Explicit => BinderPlicity::Explicit,
        Plicity::Implicit => BinderPlicity::Implicit,
    }
}
