#![allow(dead_code)]

use std::rc::Rc;

use hpt::corpus::prelude_sources;
use hpt::elab::{elaborate_decl, Elaborated};
use hpt::kernel::{check_decl, GlobalEnv, DEFAULT_STEP_BUDGET};
use hpt::session::Session;
use hpt::surface::{parse_file_named, Binder, BinderPlicity, SourceSpan, SurfaceTerm, TermKind};
use hpt::syntax::{Decl, Level, Plicity, Term};
use proptest::prelude::*;
use rand::Rng;

pub fn corpus_session() -> Session {
    let mut s = Session::new();
    for (file, text) in prelude_sources() {
        s.load_source(&file, &text).unwrap_or_else(|e| panic!("{file}: {e}"));
    }
    s
}

/// Every corpus declaration as elaborated core, in order, together with the
/// environment they were checked into.
pub fn corpus_core() -> (Vec<Decl>, GlobalEnv) {
    let mut env = GlobalEnv::new();
    let mut out = Vec::new();
    for (file, text) in prelude_sources() {
        for d in parse_file_named(&file, &text).expect("corpus parses") {
            if let Elaborated::Decl(decl) = elaborate_decl(&env, &d, DEFAULT_STEP_BUDGET).expect("corpus elaborates") {
                out.push(decl.clone());
                check_decl(&mut env, decl).expect("corpus checks");
            }
        }
    }
    (out, env)
}

// Random core terms with free variables below a given depth.

pub fn arb_core(depth: usize) -> impl Strategy<Value = Rc<Term>> {
    let leaf = prop_oneof![
        (0..depth.max(1) + 2).prop_map(|i| Rc::new(Term::Var(i))),
        prop::sample::select(vec!["A", "star", "concat", "inv"]).prop_map(Term::global),
        (0u32..3).prop_map(|l| Rc::new(Term::Type(Level(l)))),
    ];
    leaf.prop_recursive(5, 48, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|b| Rc::new(Term::Lam("x".into(), Plicity::Explicit, b))),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (inner.clone(), inner.clone(), any::<bool>()).prop_map(|(a, b, imp)| {
                let p = if imp { Plicity::Implicit } else { Plicity::Explicit };
                Rc::new(Term::Pi("y".into(), p, a, b))
            }),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(t, l, r)| Term::id(t, l, r)),
            inner.clone().prop_map(Term::refl),
            (inner.clone(), inner.clone(), inner.clone(), inner).prop_map(|(m, b, e, p)| Term::j(m, b, e, p)),
        ]
    })
}

// Random surface terms drawn from the grammar.

fn sp() -> SourceSpan {
    SourceSpan::whole_file("<gen>")
}

fn mk(kind: TermKind) -> SurfaceTerm {
    SurfaceTerm::new(sp(), kind)
}

const IDENTS: &[&str] = &["a", "b", "x", "p", "q'", "whisk-L", "EH-1-R", "a_1", "star", "f"];

fn arb_binder(ty: BoxedStrategy<SurfaceTerm>) -> impl Strategy<Value = Binder> {
    (prop::collection::vec(prop::sample::select(IDENTS), 1..3), ty, any::<bool>()).prop_map(|(names, ty, imp)| {
        Binder {
            names: names.into_iter().map(|n| (n.to_string(), sp())).collect(),
            annotation: Some(Box::new(ty)),
            plicity: if imp { BinderPlicity::Implicit } else { BinderPlicity::Explicit },
            span: sp(),
        }
    })
}

fn binop(name: &str, l: SurfaceTerm, r: SurfaceTerm) -> SurfaceTerm {
    let head = mk(TermKind::Name(name.to_string()));
    mk(TermKind::App(Box::new(mk(TermKind::App(Box::new(head), Box::new(l)))), Box::new(r)))
}

pub fn arb_surface() -> impl Strategy<Value = SurfaceTerm> {
    let leaf = prop_oneof![
        prop::sample::select(IDENTS).prop_map(|n| mk(TermKind::Name(n.into()))),
        prop::sample::select(IDENTS).prop_map(|n| mk(TermKind::ExplicitName(n.into()))),
        Just(mk(TermKind::Hole)),
        (0u32..3).prop_map(|l| mk(TermKind::TypeU(l))),
        Just(mk(TermKind::ReflSugar(None))),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        let boxed = inner.clone().boxed();
        prop_oneof![
            (prop::collection::vec(arb_binder(boxed.clone()), 1..3), inner.clone())
                .prop_map(|(bs, b)| mk(TermKind::Lam(bs, Box::new(b)))),
            (arb_binder(boxed), inner.clone()).prop_map(|(b, c)| mk(TermKind::Pi(vec![b], Box::new(c)))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| mk(TermKind::Arrow(Box::new(a), Box::new(b)))),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| mk(TermKind::App(Box::new(f), Box::new(a)))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| mk(TermKind::IdSugar(Box::new(a), Box::new(b)))),
            inner.clone().prop_map(|a| mk(TermKind::ReflSugar(Some(Box::new(a))))),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(m, b, p)| mk(TermKind::JSugar(Box::new(m), Box::new(b), Box::new(p)))),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| binop("concat", l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| binop("par-concat", l, r)),
        ]
    })
}

// Single-node corruption of core terms.

/// Replaces the `target`-th node (preorder) of `t` using `f`.
pub fn replace_at(t: &Rc<Term>, target: usize, f: &mut dyn FnMut(&Rc<Term>) -> Rc<Term>) -> Rc<Term> {
    fn go(t: &Rc<Term>, k: &mut i64, f: &mut dyn FnMut(&Rc<Term>) -> Rc<Term>) -> Rc<Term> {
        if *k < 0 {
            return t.clone();
        }
        if *k == 0 {
            *k = -1;
            return f(t);
        }
        *k -= 1;
        let mut g = |s: &Rc<Term>| go(s, k, f);
        Rc::new(match &**t {
            Term::Var(_) | Term::Global(_) | Term::Type(_) | Term::Meta(_) => return t.clone(),
            Term::Lam(x, p, b) => Term::Lam(x.clone(), *p, g(b)),
            Term::App(a, b) => Term::App(g(a), g(b)),
            Term::Pi(x, p, a, b) => Term::Pi(x.clone(), *p, g(a), g(b)),
            Term::Id(a, b, c) => Term::Id(g(a), g(b), g(c)),
            Term::Refl(a) => Term::Refl(g(a)),
            Term::J(m, b, e, p) => Term::J(g(m), g(b), g(e), g(p)),
        })
    }
    let mut k = target as i64;
    go(t, &mut k, f)
}

/// A random single-node corruption of `t`, with a description.
pub fn mutate(t: &Rc<Term>, globals: &[String], rng: &mut impl Rng) -> (Rc<Term>, String) {
    let target = rng.gen_range(0..t.size());
    let choice = rng.gen_range(0..6);
    let mut what = String::new();
    let out = replace_at(t, target, &mut |s| {
        let (new, desc) = match choice {
            0 => (Term::var(rng.gen_range(0..4)), "variable"),
            1 => (Term::global(&globals[rng.gen_range(0..globals.len())]), "global"),
            2 => (Term::universe(rng.gen_range(0..2)), "universe"),
            3 => (Term::refl(s.clone()), "refl wrap"),
            4 => (Term::app(s.clone(), s.clone()), "self application"),
            _ => match &**s {
                Term::App(f, _) => (f.clone(), "argument drop"),
                Term::Lam(_, _, b) | Term::Refl(b) => (b.clone(), "unwrap"),
                _ => (Term::global("star"), "star"),
            },
        };
        what = format!("{desc} at node {target}");
        new
    });
    (out, what)
}
