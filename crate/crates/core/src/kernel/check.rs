//! Bidirectional type checking of core terms.
//!
//! Lambdas carry no domain annotation, so they are only accepted in checking
//! position or at the head of a redex, where the arguments are inferred and
//! bound as definitions. Everything else is inferable; J infers its path
//! first and reads the motive's domains off the path's type.

use std::rc::Rc;

use crate::kernel::eval::{EvalResult, Evaluator, DEFAULT_STEP_BUDGET};
use crate::kernel::globals::{GlobalEntry, GlobalEnv};
use crate::kernel::readback::Unfold;
use crate::kernel::value::{Env, RcValue, Value};
use crate::kernel::{KernelError, Step, TermPath};
use crate::pretty::pretty;
use crate::syntax::{shift, Decl, Level, Name, Term};

pub struct Checker<'a> {
    pub ev: Evaluator<'a>,
    names: Vec<Name>,
    types: Vec<RcValue>,
    env: Env,
    /// Environments in force before each binder, restored on unbind.
    saved: Vec<Env>,
    path: Vec<Step>,
}

impl<'a> Checker<'a> {
    pub fn new(globals: &'a GlobalEnv, budget: u64) -> Checker<'a> {
        Checker {
            ev: Evaluator::new(globals, budget),
            names: Vec::new(),
            types: Vec::new(),
            env: Env::new(),
            saved: Vec::new(),
            path: Vec::new(),
        }
    }

    /// A checker whose context already binds variables of the given types,
    /// outermost first.
    pub fn with_context(globals: &'a GlobalEnv, budget: u64, types: &[RcValue]) -> Checker<'a> {
        let mut c = Checker::new(globals, budget);
        for (i, ty) in types.iter().enumerate() {
            c.bind(&format!("x{i}").into(), ty.clone());
        }
        c
    }

    pub fn depth(&self) -> usize {
        self.types.len()
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn context_types(&self) -> &[RcValue] {
        &self.types
    }

    pub fn bind(&mut self, name: &Name, ty: RcValue) -> RcValue {
        let var = Value::var(self.depth());
        self.define(name, ty, var.clone());
        var
    }

    /// Binds a variable that evaluates to `value`.
    fn define(&mut self, name: &Name, ty: RcValue, value: RcValue) {
        self.names.push(name.clone());
        self.types.push(ty);
        let env = self.env.push(value);
        self.saved.push(std::mem::replace(&mut self.env, env));
    }

    fn unbind(&mut self, n: usize) {
        for _ in 0..n {
            self.names.pop();
            self.types.pop();
            self.env = self.saved.pop().expect("unbind without bind");
        }
    }

    pub fn eval(&self, t: &Term) -> EvalResult<RcValue> {
        self.ev.eval(&self.env, t)
    }

    /// Renders a value in the current context for diagnostics.
    pub fn render(&self, v: &RcValue) -> String {
        match self.ev.quote(self.depth(), v, Unfold::None) {
            Ok(t) => pretty(&t, &self.names, self.ev.globals),
            Err(_) => "<unprintable value>".to_string(),
        }
    }

    fn mismatch(&self, expected: impl Into<String>, found: impl Into<String>) -> KernelError {
        KernelError::Type { path: TermPath(self.path.clone()), expected: expected.into(), found: found.into() }
    }

    fn at<T>(&mut self, step: Step, f: impl FnOnce(&mut Self) -> EvalResult<T>) -> EvalResult<T> {
        self.path.push(step);
        let r = f(self)?;
        self.path.pop();
        Ok(r)
    }

    fn conv_or_mismatch(&self, expected: &RcValue, found: &RcValue) -> EvalResult<()> {
        if self.ev.conv(self.depth(), expected, found)? {
            Ok(())
        } else {
            Err(self.mismatch(self.render(expected), self.render(found)))
        }
    }

    pub fn infer_universe(&mut self, t: &Term) -> EvalResult<Level> {
        let ty = self.infer(t)?;
        match &*self.ev.force(&ty)? {
            Value::Type(l) => Ok(*l),
            _ => Err(self.mismatch("a type", self.render(&ty))),
        }
    }

    pub fn check(&mut self, t: &Term, expected: &RcValue) -> EvalResult<()> {
        if let Term::Lam(x, _, body) = t {
            let forced = self.ev.force(expected)?;
            let Value::Pi(_, _, dom, cod) = &*forced else {
                return Err(self.mismatch(self.render(expected), "a function"));
            };
            let var = self.bind(x, dom.clone());
            let cod = self.ev.apply_closure(cod, var)?;
            self.at(Step::LamBody, |c| c.check(body, &cod))?;
            self.unbind(1);
            return Ok(());
        }
        if let Term::Refl(a) = t {
            let forced = self.ev.force(expected)?;
            if let Value::Id(ty, _, _) = &*forced {
                self.at(Step::ReflPoint, |c| c.check(a, ty))?;
                let a_v = self.eval(a)?;
                let found = Rc::new(Value::Id(ty.clone(), a_v.clone(), a_v));
                return self.conv_or_mismatch(expected, &found);
            }
        }
        let found = self.infer(t)?;
        self.conv_or_mismatch(expected, &found)
    }

    pub fn infer(&mut self, t: &Term) -> EvalResult<RcValue> {
        match t {
            Term::Var(ix) => {
                let depth = self.depth();
                if *ix >= depth {
                    return Err(KernelError::UnboundVariable(*ix));
                }
                Ok(self.types[depth - 1 - ix].clone())
            }
            Term::Global(name) => self
                .ev
                .globals
                .get(name)
                .map(|e| e.ty.clone())
                .ok_or_else(|| KernelError::UnknownGlobal(name.clone())),
            Term::Type(l) => Ok(Rc::new(Value::Type(l.succ()))),
            Term::Pi(x, _, dom, cod) => {
                let l1 = self.at(Step::PiDomain, |c| c.infer_universe(dom))?;
                let dom_v = self.eval(dom)?;
                self.bind(x, dom_v);
                let l2 = self.at(Step::PiCodomain, |c| c.infer_universe(cod))?;
                self.unbind(1);
                Ok(Rc::new(Value::Type(l1.max(l2))))
            }
            Term::Id(ty, l, r) => {
                let level = self.at(Step::IdType, |c| c.infer_universe(ty))?;
                let ty_v = self.eval(ty)?;
                self.at(Step::IdLhs, |c| c.check(l, &ty_v))?;
                self.at(Step::IdRhs, |c| c.check(r, &ty_v))?;
                Ok(Rc::new(Value::Type(level)))
            }
            Term::Refl(a) => {
                let ty = self.at(Step::ReflPoint, |c| c.infer(a))?;
                let a_v = self.eval(a)?;
                Ok(Rc::new(Value::Id(ty, a_v.clone(), a_v)))
            }
            // Redexes with unannotated lambdas are typed like lets.
            Term::App(..) if matches!(t.spine().0, Term::Lam(..)) => self.infer_redex(t),
            Term::App(f, a) => {
                let fty = self.at(Step::Fun, |c| c.infer(f))?;
                let forced = self.ev.force(&fty)?;
                let Value::Pi(_, _, dom, cod) = &*forced else {
                    return Err(self.mismatch("a function type", self.render(&fty)));
                };
                self.at(Step::Arg, |c| c.check(a, dom))?;
                let a_v = self.eval(a)?;
                self.ev.apply_closure(cod, a_v)
            }
            Term::J(motive, base, endpoint, path) => {
                let pty = self.at(Step::JPath, |c| c.infer(path))?;
                let forced = self.ev.force(&pty)?;
                let Value::Id(a_ty, x, y) = &*forced else {
                    return Err(self.mismatch("a path type", self.render(&pty)));
                };
                let (a_ty, x, y) = (a_ty.clone(), x.clone(), y.clone());
                self.at(Step::JEndpoint, |c| {
                    c.check(endpoint, &a_ty)?;
                    let e = c.eval(endpoint)?;
                    c.conv_or_mismatch(&y, &e)
                })?;
                self.at(Step::JMotive, |c| c.check_motive(motive, &a_ty, &x))?;
                let m = self.eval(motive)?;
                let refl_x = Rc::new(Value::Refl(x.clone()));
                let base_ty = self.ev.apply_many(&m, &[x, refl_x])?;
                self.at(Step::JBase, |c| c.check(base, &base_ty))?;
                let e = self.eval(endpoint)?;
                let p = self.eval(path)?;
                self.ev.apply_many(&m, &[e, p])
            }
            Term::Lam(..) => Err(self.mismatch("an inferable term", "an unannotated lambda")),
            Term::Meta(m) => Err(KernelError::UnsolvedMeta(*m)),
        }
    }

    /// Infers `(fun x1 .. xk => b) a1 .. an` by binding each `xi := ai` and
    /// applying the type of the remaining body to the leftover arguments.
    fn infer_redex(&mut self, t: &Term) -> EvalResult<RcValue> {
        let (mut head, args) = t.spine();
        let mut bound = 0;
        while let (Term::Lam(x, _, body), Some(a)) = (head, args.get(bound)) {
            let a = shift(a, 0, bound);
            let a_ty = self.at(Step::Arg, |c| c.infer(&a))?;
            let a_v = self.eval(&a)?;
            self.define(x, a_ty, a_v);
            head = body;
            bound += 1;
        }
        let mut ty = self.at(Step::Fun, |c| c.infer(head))?;
        for a in &args[bound..] {
            let a = shift(a, 0, bound);
            let forced = self.ev.force(&ty)?;
            let Value::Pi(_, _, dom, cod) = &*forced else {
                return Err(self.mismatch("a function type", self.render(&ty)));
            };
            self.at(Step::Arg, |c| c.check(&a, dom))?;
            let a_v = self.eval(&a)?;
            ty = self.ev.apply_closure(cod, a_v)?;
        }
        self.unbind(bound);
        Ok(ty)
    }

    /// Checks `motive : (y : A) -> Id A x y -> Type i` and returns `i`.
    fn check_motive(&mut self, motive: &Term, a_ty: &RcValue, x: &RcValue) -> EvalResult<Level> {
        let start = self.depth();
        let path_len = self.path.len();
        let domain = |bound: usize| -> RcValue {
            if bound == 0 {
                a_ty.clone()
            } else {
                Rc::new(Value::Id(a_ty.clone(), x.clone(), Value::var(start)))
            }
        };
        let mut t = motive;
        let mut bound = 0;
        while bound < 2 {
            let Term::Lam(name, _, body) = t else { break };
            self.bind(name, domain(bound));
            self.path.push(Step::LamBody);
            bound += 1;
            t = body;
        }
        let mut ty = self.infer(t)?;
        while bound < 2 {
            let forced = self.ev.force(&ty)?;
            let Value::Pi(name, _, dom, cod) = &*forced else {
                return Err(self.mismatch("a type family over a path", self.render(&ty)));
            };
            self.conv_or_mismatch(&domain(bound), dom)?;
            let var = self.bind(name, dom.clone());
            ty = self.ev.apply_closure(cod, var)?;
            bound += 1;
        }
        let level = match &*self.ev.force(&ty)? {
            Value::Type(l) => *l,
            _ => return Err(self.mismatch("a type", self.render(&ty))),
        };
        self.unbind(2);
        self.path.truncate(path_len);
        Ok(level)
    }
}

/// Infers the type of `t` in a context binding variables of the given types
/// (outermost first).
pub fn infer_type(globals: &GlobalEnv, ctx: &[RcValue], t: &Term) -> Result<RcValue, KernelError> {
    Checker::with_context(globals, DEFAULT_STEP_BUDGET, ctx).infer(t)
}

pub fn check_decl(globals: &mut GlobalEnv, decl: Decl) -> Result<(), KernelError> {
    check_decl_with_budget(globals, decl, DEFAULT_STEP_BUDGET)
}

/// Checks a declaration and admits it into `globals`.
pub fn check_decl_with_budget(globals: &mut GlobalEnv, decl: Decl, budget: u64) -> Result<(), KernelError> {
    if globals.contains(&decl.name) {
        return Err(KernelError::DuplicateName(decl.name.clone()));
    }
    let closed = decl.ty.is_closed_at(0) && decl.body.as_ref().map_or(true, |b| b.is_closed_at(0));
    if !closed {
        return Err(KernelError::NotClosed(decl.name.clone()));
    }
    let (ty, body) = {
        let mut checker = Checker::new(globals, budget);
        checker.infer_universe(&decl.ty)?;
        let ty = checker.eval(&decl.ty)?;
        let body = match &decl.body {
            Some(b) => {
                checker.check(b, &ty)?;
                Some(checker.eval(b)?)
            }
            None => None,
        };
        (ty, body)
    };
    globals.insert(GlobalEntry { decl, ty, body });
    Ok(())
}

/// Checks both sides against `ty` and decides their definitional equality.
pub fn assert_defeq(globals: &GlobalEnv, lhs: &Term, rhs: &Term, ty: &Term, budget: u64) -> Result<bool, KernelError> {
    let mut checker = Checker::new(globals, budget);
    checker.infer_universe(ty)?;
    let ty_v = checker.eval(ty)?;
    checker.check(lhs, &ty_v)?;
    checker.check(rhs, &ty_v)?;
    let l = checker.eval(lhs)?;
    let r = checker.eval(rhs)?;
    checker.ev.conv(0, &l, &r)
}
