mod common;

use hpt::elab::elaborate_check;
use hpt::kernel::{Evaluator, Unfold, DEFAULT_STEP_BUDGET};
use hpt::pretty::pretty;
use hpt::surface::parse_term;
use hpt::syntax::{alpha_eq, shift, Plicity, Term};
use proptest::prelude::*;

proptest! {
    #[test]
    fn alpha_eq_is_reflexive(t in common::arb_core(2)) {
        prop_assert!(alpha_eq(&t, &t));
    }

    #[test]
    fn alpha_eq_is_symmetric(a in common::arb_core(2), b in common::arb_core(2)) {
        prop_assert_eq!(alpha_eq(&a, &b), alpha_eq(&b, &a));
    }

    #[test]
    fn alpha_eq_is_transitive(a in common::arb_core(1)) {
        // Renaming binders and flipping plicity hints gives equal terms.
        let b = rename(&a, "u", false);
        let c = rename(&b, "w", true);
        prop_assert!(alpha_eq(&a, &b) && alpha_eq(&b, &c));
        prop_assert!(alpha_eq(&a, &c));
    }

    #[test]
    fn shift_by_zero_is_identity(t in common::arb_core(3), c in 0usize..4) {
        prop_assert!(alpha_eq(&shift(&t, c, 0), &t));
    }

    #[test]
    fn shifts_compose(t in common::arb_core(3), c in 0usize..4, m in 0usize..5, n in 0usize..5) {
        prop_assert!(alpha_eq(&shift(&shift(&t, c, m), c, n), &shift(&t, c, m + n)));
    }

    #[test]
    fn shift_preserves_closedness(t in common::arb_core(0)) {
        if t.is_closed_at(0) {
            prop_assert!(alpha_eq(&shift(&t, 0, 7), &t));
        }
    }
}

fn rename(t: &Term, name: &str, flip: bool) -> std::rc::Rc<Term> {
    let p = |p: Plicity| match (flip, p) {
        (true, Plicity::Explicit) => Plicity::Implicit,
        (true, Plicity::Implicit) => Plicity::Explicit,
        (false, p) => p,
    };
    let go = |t: &Term| rename(t, name, flip);
    std::rc::Rc::new(match t {
        Term::Lam(_, pl, b) => Term::Lam(name.into(), p(*pl), go(b)),
        Term::Pi(_, pl, a, b) => Term::Pi(name.into(), p(*pl), go(a), go(b)),
        Term::App(f, a) => Term::App(go(f), go(a)),
        Term::Id(a, l, r) => Term::Id(go(a), go(l), go(r)),
        Term::Refl(a) => Term::Refl(go(a)),
        Term::J(m, b, e, q) => Term::J(go(m), go(b), go(e), go(q)),
        other => other.clone(),
    })
}

#[test]
fn pretty_examples() {
    let none = hpt::pretty::NoSignatures;
    assert_eq!(pretty(&Term::refl(Term::global("star")), &[], &none), "refl star");
    let names = ["a".into(), "b".into()];
    assert_eq!(pretty(&Term::id(Term::global("A"), Term::var(1), Term::var(0)), &names, &none), "a = b");
    assert_eq!(pretty(&Term::lam("a", Term::var(0)), &[], &none), "fun a => a");
}

/// Printing every corpus type and every normal form of a corpus body, then
/// parsing and elaborating the text against its type, gives back the same
/// core term.
#[test]
fn corpus_pretty_round_trip() {
    let (decls, env) = common::corpus_core();
    let ev = Evaluator::new(&env, DEFAULT_STEP_BUDGET);
    let empty = Default::default();
    for d in &decls {
        let text = pretty(&d.ty, &[], &env);
        let parsed = parse_term(&text).unwrap_or_else(|e| panic!("{}: {text}: {e}", d.name));
        let back = elaborate_check(&env, &parsed, &Term::Type(hpt::syntax::Level(0)), DEFAULT_STEP_BUDGET)
            .or_else(|_| elaborate_check(&env, &parsed, &Term::Type(hpt::syntax::Level(1)), DEFAULT_STEP_BUDGET))
            .unwrap_or_else(|e| panic!("{}: {text}: {e}", d.name));
        assert!(alpha_eq(&back, &d.ty), "type of {} printed as {text}", d.name);

        let Some(body) = &d.body else { continue };
        let v = ev.eval(&empty, body).unwrap();
        let ty = ev.eval(&empty, &d.ty).unwrap();
        let nf = ev.readback(&mut Vec::new(), &v, &ty, Unfold::None).unwrap();
        let text = pretty(&nf, &[], &env);
        let parsed = parse_term(&text).unwrap_or_else(|e| panic!("{}: {text}: {e}", d.name));
        let back = elaborate_check(&env, &parsed, &d.ty, DEFAULT_STEP_BUDGET)
            .unwrap_or_else(|e| panic!("normal form of {}: {e}\n{text}", d.name));
        assert!(alpha_eq(&back, &nf), "normal form of {} printed as {text}", d.name);
    }
}
