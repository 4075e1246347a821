mod common;

use std::rc::Rc;

use hpt::corpus::BASE_AXIOMS;
use hpt::elab::{elaborate_term, ElabError, Elaborator, MetaStore};
use hpt::kernel::{Env, GlobalEnv, Value, DEFAULT_STEP_BUDGET};
use hpt::session::Session;
use hpt::surface::{parse_term, SourceSpan};
use hpt::syntax::{alpha_eq, MetaId, RcTerm, Term};

fn span() -> SourceSpan {
    SourceSpan::whole_file("<test>")
}

fn base() -> Session {
    let mut s = Session::new();
    s.load_source("<base>", BASE_AXIOMS).unwrap();
    s
}

fn meta_term(m: MetaId, depth: usize) -> RcTerm {
    Term::apps(Rc::new(Term::Meta(m)), (0..depth).rev().map(Term::var))
}

#[test]
fn solves_a_type_meta() {
    let s = base();
    let metas = MetaStore::new();
    let e = Elaborator::new(&s.globals, &metas, DEFAULT_STEP_BUDGET);
    let m = metas.fresh(0, Some(Value::universe(1)), span());
    let star = Term::global("star");
    let l = e.eval(&Term::id(meta_term(m, 0), star.clone(), star.clone()), &span()).unwrap();
    let r = e.eval(&Term::id(Term::global("A"), star.clone(), star), &span()).unwrap();
    e.unify(&span(), &l, &r).unwrap();
    let sol = e.zonk(&meta_term(m, 0)).unwrap();
    assert!(alpha_eq(&sol, &Term::global("A")));
}

#[test]
fn occurs_check() {
    let s = base();
    let metas = MetaStore::new();
    let e = Elaborator::new(&s.globals, &metas, DEFAULT_STEP_BUDGET);
    let m = metas.fresh(0, None, span());
    let l = e.eval(&meta_term(m, 0), &span()).unwrap();
    let r = e.eval(&Term::refl(meta_term(m, 0)), &span()).unwrap();
    assert!(matches!(e.unify(&span(), &l, &r), Err(ElabError::OccursCheck { .. })));
}

#[test]
fn distinct_universes_do_not_unify() {
    let s = base();
    let metas = MetaStore::new();
    let e = Elaborator::new(&s.globals, &metas, DEFAULT_STEP_BUDGET);
    let err = e.unify(&span(), &Value::universe(0), &Value::universe(1)).unwrap_err();
    assert!(matches!(err, ElabError::UnifyFailure { .. }), "{err}");
}

#[test]
fn prunes_out_of_scope_arguments() {
    // ?n x =?= ?m x y, where ?n cannot see y: ?m must drop y.
    let s = base();
    let metas = MetaStore::new();
    let mut e = Elaborator::new(&s.globals, &metas, DEFAULT_STEP_BUDGET);
    let a = e.eval(&Term::global("A"), &span()).unwrap();
    e.bind("x", a.clone(), true);
    let n = metas.fresh(1, Some(a.clone()), span());
    e.bind("y", a.clone(), true);
    let m = metas.fresh(2, Some(a), span());
    let nx = Term::app(Rc::new(Term::Meta(n)), Term::var(1));
    let l = e.eval(&nx, &span()).unwrap();
    let r = e.eval(&meta_term(m, 2), &span()).unwrap();
    e.unify(&span(), &l, &r).unwrap();
    assert!(metas.get(m).solution.is_some());
    assert!(metas.get(n).solution.is_some());
    // The pruned solution ignores its second argument.
    let y_free = e.eval(&Term::apps(Rc::new(Term::Meta(m)), [Term::var(1), Term::var(1)]), &span()).unwrap();
    let l = e.eval(&meta_term(m, 2), &span()).unwrap();
    assert!(e.ev.conv(2, &l, &y_free).unwrap());
}

#[test]
fn non_pattern_spines_are_rejected() {
    // ?m x x is not a pattern and cannot be solved against y.
    let s = base();
    let metas = MetaStore::new();
    let mut e = Elaborator::new(&s.globals, &metas, DEFAULT_STEP_BUDGET);
    let a = e.eval(&Term::global("A"), &span()).unwrap();
    e.bind("x", a.clone(), true);
    e.bind("y", a.clone(), true);
    let m = metas.fresh(2, None, span());
    let l = e.eval(&Term::apps(Rc::new(Term::Meta(m)), [Term::var(1), Term::var(1)]), &span()).unwrap();
    let r = Value::var(1);
    assert!(e.unify(&span(), &l, &r).is_err());
}

#[test]
fn implicit_arguments_are_inferred() {
    let s = common::corpus_session();
    for (src, ty) in [
        ("concat (refl star) (refl star)", "star = star"),
        ("inv (refl star)", "star = star"),
        ("EH (refl (refl star)) (refl (refl star))", "refl (refl star) * refl (refl star) = refl (refl star) * refl (refl star)"),
    ] {
        let (term, t) = elaborate_term(&s.globals, &parse_term(src).unwrap(), DEFAULT_STEP_BUDGET).unwrap();
        assert!(!term.has_metas() && !t.has_metas());
        assert_eq!(s.show(&t), ty, "{src}");
    }
    let err = elaborate_term(&s.globals, &parse_term("concat").unwrap(), DEFAULT_STEP_BUDGET).unwrap_err();
    assert!(matches!(err, ElabError::UnsolvedMeta { .. }), "{err}");
}

#[test]
fn elaborated_corpus_is_meta_free() {
    let (decls, _) = common::corpus_core();
    for d in decls {
        assert!(!d.ty.has_metas(), "{}", d.name);
        assert!(!d.body.as_ref().is_some_and(|b| b.has_metas()), "{}", d.name);
    }
}

#[test]
fn zonk_is_idempotent() {
    let s = common::corpus_session();
    for src in ["concat (refl star) (refl star)", "whisk-L (refl star) (refl (refl star))", "fun (p : star = star) => p * p"] {
        let metas = MetaStore::new();
        let mut e = Elaborator::new(&s.globals, &metas, DEFAULT_STEP_BUDGET);
        let (t, ty) = e.infer(&parse_term(src).unwrap()).unwrap();
        let once = e.zonk(&t).unwrap();
        assert!(alpha_eq(&once, &e.zonk(&once).unwrap()), "{src}");
        let ty = e.quote(&ty, &span()).unwrap();
        let once = e.zonk(&ty).unwrap();
        assert!(alpha_eq(&once, &e.zonk(&once).unwrap()), "{src}");
    }
}

/// Replaces the `target`-th node (preorder) by a fresh meta applied to the
/// variables in scope there.
fn hole_at(t: &RcTerm, target: usize, metas: &MetaStore) -> Option<RcTerm> {
    fn go(t: &RcTerm, depth: usize, k: &mut i64, metas: &MetaStore) -> RcTerm {
        if *k < 0 {
            return t.clone();
        }
        if *k == 0 {
            *k = -1;
            return meta_term(metas.fresh(depth, None, span()), depth);
        }
        *k -= 1;
        Rc::new(match &**t {
            Term::Var(_) | Term::Global(_) | Term::Type(_) | Term::Meta(_) => return t.clone(),
            Term::Lam(x, p, b) => Term::Lam(x.clone(), *p, go(b, depth + 1, k, metas)),
            Term::App(f, a) => Term::App(go(f, depth, k, metas), go(a, depth, k, metas)),
            Term::Pi(x, p, a, b) => Term::Pi(x.clone(), *p, go(a, depth, k, metas), go(b, depth + 1, k, metas)),
            Term::Id(a, l, r) => Term::Id(go(a, depth, k, metas), go(l, depth, k, metas), go(r, depth, k, metas)),
            Term::Refl(a) => Term::Refl(go(a, depth, k, metas)),
            Term::J(m, b, e, p) => {
                Term::J(go(m, depth, k, metas), go(b, depth, k, metas), go(e, depth, k, metas), go(p, depth, k, metas))
            }
        })
    }
    (target > 0).then(|| go(t, 0, &mut (target as i64), metas))
}

/// `None` if unification fails, otherwise the zonked holed term when every
/// hole was determined.
fn unify_outcome(
    globals: &GlobalEnv,
    holed: impl Fn(&MetaStore) -> RcTerm,
    other: &RcTerm,
    flip: bool,
) -> Option<Option<RcTerm>> {
    let metas = MetaStore::new();
    let e = Elaborator::new(globals, &metas, DEFAULT_STEP_BUDGET);
    let h = holed(&metas);
    let hv = e.ev.eval(&Env::new(), &h).unwrap();
    let ov = e.ev.eval(&Env::new(), other).unwrap();
    let r = if flip { e.unify(&span(), &ov, &hv) } else { e.unify(&span(), &hv, &ov) };
    // A hole in an argument that unfolding discards stays unsolved.
    r.ok().map(|_| e.zonk(&h).ok())
}

/// Unifying a corpus type with a holed copy of itself, or of another corpus
/// type, gives the same outcome in either order.
#[test]
fn unification_is_symmetric_on_corpus_constraints() {
    let (decls, env) = common::corpus_core();
    let ev = hpt::kernel::Evaluator::new(&env, DEFAULT_STEP_BUDGET);
    let mut solved = 0;
    for (i, d) in decls.iter().enumerate() {
        let other = &decls[(i + 7) % decls.len()].ty;
        for target in (1..d.ty.size()).step_by(5) {
            let rhss: &[&RcTerm] = if target % 2 == 1 { &[&d.ty, other] } else { &[&d.ty] };
            for &rhs in rhss {
                let holed = |m: &MetaStore| hole_at(&d.ty, target, m).unwrap();
                let a = unify_outcome(&env, holed, rhs, false);
                let b = unify_outcome(&env, holed, rhs, true);
                assert_eq!(a.is_some(), b.is_some(), "{} node {target}", d.name);
                if let (Some(Some(a)), Some(Some(b))) = (a, b) {
                    let (av, bv) = (ev.eval(&Env::new(), &a).unwrap(), ev.eval(&Env::new(), &b).unwrap());
                    assert!(ev.conv(0, &av, &bv).unwrap(), "{} node {target}", d.name);
                    let rv = ev.eval(&Env::new(), rhs).unwrap();
                    assert!(ev.conv(0, &av, &rv).unwrap(), "{} node {target}", d.name);
                    solved += 1;
                }
            }
        }
    }
    assert!(solved > 100, "only {solved} constraints solved");
}
