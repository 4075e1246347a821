use super::*;
use crate::kernel::check_decl;
use crate::session::{Outcome, Session};
use crate::surface::{parse_file, parse_term};
use crate::syntax::alpha_eq;

fn base() -> Session {
    let mut s = Session::new();
    s.load_source("base", "axiom A : Type\naxiom star : A").unwrap();
    s
}

fn elab_one(s: &Session, src: &str) -> ElabResult<Elaborated> {
    let d = parse_file(src).unwrap();
    elaborate_decl(&s.globals, &d[0], 1_000_000)
}

#[test]
fn identity_function() {
    let s = Session::new();
    let Elaborated::Decl(d) = elab_one(&s, "def id (A : Type) (a : A) : A := a").unwrap() else { panic!() };
    let ty = Term::pi("A", Term::universe(0), Term::pi("a", Term::var(0), Term::var(1)));
    assert!(alpha_eq(&d.ty, &ty));
    assert!(alpha_eq(d.body.as_ref().unwrap(), &Term::lam("A", Term::lam("a", Term::var(0)))));
    let mut g = GlobalEnv::new();
    check_decl(&mut g, d).unwrap();
}

#[test]
fn element_is_not_a_type() {
    let s = Session::new();
    let err = elab_one(&s, "def bad (A : Type) : A := A").unwrap_err();
    assert!(matches!(err, ElabError::TypeMismatch { .. }), "{err}");
}

#[test]
fn unbound_name() {
    let s = base();
    let err = elab_one(&s, "def f : A := nope").unwrap_err();
    assert!(matches!(&err, ElabError::UnboundName { name, .. } if name == "nope"));
    assert_eq!(err.span().start_col, 14);
}

#[test]
fn refl_of_star() {
    let s = base();
    let t = parse_term("refl star").unwrap();
    let (term, ty) = elaborate_term(&s.globals, &t, 1000).unwrap();
    assert!(alpha_eq(&term, &Term::refl(Term::global("star"))));
    let star = Term::global("star");
    assert!(alpha_eq(&ty, &Term::id(Term::global("A"), star.clone(), star)));
}

#[test]
fn implicit_endpoints_are_inserted() {
    let mut s = base();
    s.load_source(
        "concat",
        "def concat {X : Type} {a b c : X} (p : a = b) (q : b = c) : a = c :=\n  J (fun y e => a = y) p q",
    )
    .unwrap();
    let src = "def t (a b c : A) (p : a = b) (q : b = c) : a = c := concat p q";
    let Elaborated::Decl(d) = elab_one(&s, src).unwrap() else { panic!() };
    s.process(&parse_file(src).unwrap()[0]).unwrap();
    let body = d.body.unwrap();
    let mut inner: &Term = &body;
    for _ in 0..5 {
        let Term::Lam(_, _, b) = inner else { panic!() };
        inner = b;
    }
    let (head, args) = inner.spine();
    assert!(matches!(head, Term::Global(n) if &**n == "concat"));
    assert_eq!(args.len(), 6);
    assert!(alpha_eq(args[0], &Term::Global("A".into())));
    assert!(alpha_eq(args[1], &Term::Var(4)));
    assert!(alpha_eq(args[3], &Term::Var(2)));
}

#[test]
fn bare_j_is_underdetermined() {
    let s = base();
    let t = parse_term("J").unwrap();
    let err = elaborate_term(&s.globals, &t, 1000).unwrap_err();
    assert!(matches!(err, ElabError::UnsolvedMeta { .. }), "{err}");
}

#[test]
fn hole_solved_by_unification() {
    // The hole has type `a = a`; the body forces it to be `refl a`.
    let s = base();
    let Elaborated::Decl(d) = elab_one(&s, "def r (a : A) : _ = refl a := refl (refl a)").unwrap() else { panic!() };
    let Term::Pi(_, _, _, cod) = &*d.ty else { panic!() };
    let Term::Id(_, lhs, _) = &**cod else { panic!() };
    assert!(alpha_eq(lhs, &Term::Refl(Term::var(0))));
}

#[test]
fn lambda_checking() {
    let s = base();
    let a_to_a = Term::pi("x", Term::global("A"), Term::global("A"));
    let t = parse_term("fun (a : A) => a").unwrap();
    let core = elaborate_check(&s.globals, &t, &a_to_a, 1000).unwrap();
    assert!(alpha_eq(&core, &Term::lam("a", Term::var(0))));
    let err = elaborate_check(&s.globals, &t, &Term::Global("A".into()), 1000).unwrap_err();
    assert!(matches!(err, ElabError::TypeMismatch { .. }));
}

#[test]
fn unify_examples() {
    let s = base();
    let store = MetaStore::new();
    let e = Elaborator::new(&s.globals, &store, 10_000);
    let span = SourceSpan::whole_file("test");
    let a = e.eval(&Term::Global("A".into()), &span).unwrap();
    let star = e.eval(&Term::Global("star".into()), &span).unwrap();
    let m = e.eval(&e.fresh_meta(&span, None), &span).unwrap();
    let lhs = Rc::new(Value::Id(m, star.clone(), star.clone()));
    let rhs = Rc::new(Value::Id(a.clone(), star.clone(), star));
    e.unify(&span, &lhs, &rhs).unwrap();
    let sol = store.solution_of(MetaId(0));
    assert!(e.ev.conv(0, &sol, &a).unwrap());

    let m2 = e.eval(&e.fresh_meta(&span, None), &span).unwrap();
    let pi = Rc::new(Value::Pi(
        "x".into(),
        Plicity::Explicit,
        a,
        Closure { env: Env::new(), body: Rc::new(Term::Meta(MetaId(1))) },
    ));
    assert!(matches!(e.unify(&span, &m2, &pi), Err(ElabError::OccursCheck { .. })));

    let err = e.unify(&span, &Value::universe(0), &Value::universe(1)).unwrap_err();
    assert!(matches!(err, ElabError::UnifyFailure { .. }));
}

#[test]
fn check_and_eval_directives() {
    let mut s = base();
    let out = s.load_source("d", "#check refl star\n#eval Type").unwrap();
    assert!(matches!(&out[0], Outcome::Checked { ty, .. } if ty == "star = star"));
    assert!(matches!(&out[1], Outcome::Evaluated { value, ty } if value == "Type" && ty == "Type 1"));
}
