//! Builds core terms by hand and runs them through the kernel.

use hpt::kernel::{assert_defeq, check_decl, infer_type, Env, Evaluator, GlobalEnv, Unfold, DEFAULT_STEP_BUDGET};
use hpt::pretty::pretty;
use hpt::syntax::{Decl, Term};

fn main() {
    let mut env = GlobalEnv::new();
    let a = Term::global("A");
    let star = Term::global("star");
    check_decl(&mut env, Decl { name: "A".into(), ty: Term::universe(0), body: None }).unwrap();
    check_decl(&mut env, Decl { name: "star".into(), ty: a.clone(), body: None }).unwrap();

    // transport along a path in a constant family
    let motive = Term::lam("y", Term::lam("e", a.clone()));
    let t = Term::j(motive, star.clone(), star.clone(), Term::refl(star.clone()));
    let ty = infer_type(&env, &[], &t).unwrap();

    let ev = Evaluator::new(&env, DEFAULT_STEP_BUDGET);
    let v = ev.eval(&Env::new(), &t).unwrap();
    let nf = ev.readback(&mut Vec::new(), &v, &ty, Unfold::Full).unwrap();
    println!("{}  ~>  {}", pretty(&t, &[], &env), pretty(&nf, &[], &env));
    println!("steps used: {}", ev.steps());

    // η: a variable of function type reads back as a lambda
    let fty = ev.eval(&Env::new(), &Term::pi("x", a.clone(), a.clone())).unwrap();
    let eta = ev.readback(&mut vec![fty.clone()], &hpt::kernel::Value::var(0), &fty, Unfold::Full).unwrap();
    println!("f  ~>  {}", pretty(&eta, &["f".into()], &env));

    let same = assert_defeq(&env, &t, &star, &a, DEFAULT_STEP_BUDGET).unwrap();
    println!("J β holds: {same}");

    let bad = Decl { name: "bad".into(), ty: a, body: Some(Term::refl(star)) };
    println!("{}", check_decl(&mut env, bad).unwrap_err());
}
