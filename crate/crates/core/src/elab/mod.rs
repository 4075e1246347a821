//! Elaboration of surface declarations into core declarations.
//!
//! Bidirectional: lambdas and holes are checked, everything else is
//! inferred and unified with the expected type. Implicit arguments are
//! inserted eagerly as metavariables; after a declaration is elaborated all
//! metas must be solved, and the result is zonked into a meta-free term.

mod metas;
mod unify;

use std::rc::Rc;

use thiserror::Error;

pub use metas::{MetaStore, MetaVar, Snapshot};
pub use unify::UnifyError;

use crate::kernel::{Closure, Env, Evaluator, GlobalEnv, Head, KernelError, RcValue, Unfold, Value};
use crate::pretty::pretty;
use crate::surface::{BinderPlicity, DeclKind, SourceSpan, SurfaceDecl, SurfaceTerm, TermKind};
use crate::syntax::{Decl, Level, MetaId, Name, Plicity, RcTerm, Term};

#[derive(Clone, Debug, Error)]
pub enum ElabError {
    #[error("unbound name `{name}`")]
    UnboundName { span: SourceSpan, name: String },
    #[error("could not infer this {what} (unsolved {meta})")]
    UnsolvedMeta { span: SourceSpan, meta: MetaId, what: String },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { span: SourceSpan, expected: String, found: String },
    #[error("non-function applied: `{head}` has type {ty}")]
    NotAFunction { span: SourceSpan, head: String, ty: String },
    #[error("occurs check: {meta} would have to contain itself")]
    OccursCheck { span: SourceSpan, meta: MetaId },
    #[error("cannot unify {lhs} with {rhs}")]
    UnifyFailure { span: SourceSpan, lhs: String, rhs: String },
    #[error("{error}")]
    Kernel { span: SourceSpan, error: KernelError },
}

impl ElabError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ElabError::UnboundName { span, .. }
            | ElabError::UnsolvedMeta { span, .. }
            | ElabError::TypeMismatch { span, .. }
            | ElabError::NotAFunction { span, .. }
            | ElabError::OccursCheck { span, .. }
            | ElabError::UnifyFailure { span, .. }
            | ElabError::Kernel { span, .. } => span,
        }
    }
}

pub type ElabResult<T> = Result<T, ElabError>;

/// The core form of one surface declaration.
#[derive(Clone, Debug)]
pub enum Elaborated {
    Decl(Decl),
    Check { term: RcTerm, ty: RcTerm },
    Eval { term: RcTerm, ty: RcTerm },
    AssertDefeq { lhs: RcTerm, rhs: RcTerm, ty: RcTerm },
}

/// Elaborates one declaration against frozen globals.
pub fn elaborate_decl(globals: &GlobalEnv, decl: &SurfaceDecl, budget: u64) -> ElabResult<Elaborated> {
    let store = MetaStore::new();
    let mut e = Elaborator::new(globals, &store, budget);
    e.decl(decl)
}

/// Elaborates a closed term in inference mode, returning its core form and
/// type.
pub fn elaborate_term(globals: &GlobalEnv, t: &SurfaceTerm, budget: u64) -> ElabResult<(RcTerm, RcTerm)> {
    let store = MetaStore::new();
    let mut e = Elaborator::new(globals, &store, budget);
    let (term, ty) = e.infer_inserted(t)?;
    let ty_t = e.quote(&ty, &t.span)?;
    e.finish(&t.span)?;
    Ok((e.zonk(&term)?, e.zonk(&ty_t)?))
}

/// Checks a closed term against a closed core type.
pub fn elaborate_check(globals: &GlobalEnv, t: &SurfaceTerm, ty: &Term, budget: u64) -> ElabResult<RcTerm> {
    let store = MetaStore::new();
    let mut e = Elaborator::new(globals, &store, budget);
    let ty_v = e.eval(ty, &t.span)?;
    let term = e.check(t, &ty_v)?;
    e.finish(&t.span)?;
    e.zonk(&term)
}

struct Param<'s> {
    name: &'s str,
    annotation: Option<&'s SurfaceTerm>,
    plicity: Plicity,
}

fn lam_params(t: &SurfaceTerm) -> (Vec<Param<'_>>, &SurfaceTerm) {
    let mut params = Vec::new();
    let mut t = t;
    while let TermKind::Lam(binders, body) = &t.kind {
        for b in binders {
            for (n, _) in &b.names {
                params.push(Param { name: n, annotation: b.annotation.as_deref(), plicity: plicity(b.plicity) });
            }
        }
        t = body;
    }
    (params, t)
}

fn plicity(p: BinderPlicity) -> Plicity {
    match p {
        BinderPlicity::Explicit => Plicity::Explicit,
        BinderPlicity::Implicit => Plicity::Implicit,
    }
}

pub struct Elaborator<'a> {
    pub ev: Evaluator<'a>,
    pub metas: &'a MetaStore,
    names: Vec<Name>,
    /// Inserted binders cannot be referred to by name.
    visible: Vec<bool>,
    types: Vec<RcValue>,
    envs: Vec<Env>,
}

impl<'a> Elaborator<'a> {
    pub fn new(globals: &'a GlobalEnv, metas: &'a MetaStore, budget: u64) -> Elaborator<'a> {
        Elaborator {
            ev: Evaluator::with_metas(globals, metas, budget),
            metas,
            names: Vec::new(),
            visible: Vec::new(),
            types: Vec::new(),
            envs: vec![Env::new()],
        }
    }

    pub fn depth(&self) -> usize {
        self.types.len()
    }

    fn env(&self) -> &Env {
        self.envs.last().unwrap()
    }

    pub fn bind(&mut self, name: &str, ty: RcValue, visible: bool) -> RcValue {
        let var = Value::var(self.depth());
        self.names.push(name.into());
        self.visible.push(visible);
        self.types.push(ty);
        let env = self.env().push(var.clone());
        self.envs.push(env);
        var
    }

    pub fn unbind(&mut self) {
        self.names.pop();
        self.visible.pop();
        self.types.pop();
        self.envs.pop();
    }

    fn kernel(span: &SourceSpan) -> impl Fn(KernelError) -> ElabError + '_ {
        move |error| ElabError::Kernel { span: span.clone(), error }
    }

    pub fn eval(&self, t: &Term, span: &SourceSpan) -> ElabResult<RcValue> {
        self.ev.eval(self.env(), t).map_err(Self::kernel(span))
    }

    pub fn quote(&self, v: &RcValue, span: &SourceSpan) -> ElabResult<RcTerm> {
        self.ev.quote(self.depth(), v, Unfold::None).map_err(Self::kernel(span))
    }

    fn force(&self, v: &RcValue, span: &SourceSpan) -> ElabResult<RcValue> {
        self.ev.force(v).map_err(Self::kernel(span))
    }

    fn apply(&self, f: &Closure, a: RcValue, span: &SourceSpan) -> ElabResult<RcValue> {
        self.ev.apply_closure(f, a).map_err(Self::kernel(span))
    }

    /// Renders a value in the current context for diagnostics.
    pub fn render(&self, v: &RcValue) -> String {
        match self.ev.quote(self.depth(), v, Unfold::None) {
            Ok(t) => pretty(&t, &self.names, self.ev.globals),
            Err(_) => "<unprintable value>".to_string(),
        }
    }

    /// A fresh meta applied to every variable in scope.
    pub fn fresh_meta(&self, span: &SourceSpan, ty: Option<RcValue>) -> RcTerm {
        let m = self.metas.fresh(self.depth(), ty, span.clone());
        let depth = self.depth();
        Term::apps(Rc::new(Term::Meta(m)), (0..depth).rev().map(Term::var))
    }

    /// Unifies two values, reporting failure as an error at `span`.
    pub fn unify(&self, span: &SourceSpan, l: &RcValue, r: &RcValue) -> ElabResult<()> {
        self.unify_at(self.depth(), l, r).map_err(|e| match e {
            UnifyError::Occurs(meta) => ElabError::OccursCheck { span: span.clone(), meta },
            UnifyError::Kernel(error) => ElabError::Kernel { span: span.clone(), error },
            _ => ElabError::UnifyFailure { span: span.clone(), lhs: self.render(l), rhs: self.render(r) },
        })
    }

    /// Unifies an expected type with a found one, reporting a type mismatch.
    fn unify_types(&self, span: &SourceSpan, expected: &RcValue, found: &RcValue) -> ElabResult<()> {
        self.unify(span, expected, found).map_err(|e| match e {
            ElabError::UnifyFailure { span, .. } => {
                ElabError::TypeMismatch { span, expected: self.render(expected), found: self.render(found) }
            }
            e => e,
        })
    }

    fn mismatch(&self, span: &SourceSpan, expected: impl Into<String>, found: impl Into<String>) -> ElabError {
        ElabError::TypeMismatch { span: span.clone(), expected: expected.into(), found: found.into() }
    }

    fn lookup(&self, x: &str, span: &SourceSpan) -> ElabResult<(RcTerm, RcValue)> {
        for level in (0..self.depth()).rev() {
            if self.visible[level] && &*self.names[level] == x {
                return Ok((Term::var(self.depth() - 1 - level), self.types[level].clone()));
            }
        }
        match self.ev.globals.get(x) {
            Some(entry) => Ok((Rc::new(Term::Global(entry.decl.name.clone())), entry.ty.clone())),
            None => Err(ElabError::UnboundName { span: span.clone(), name: x.to_string() }),
        }
    }

    /// Applies `t : ty` to fresh metas while `ty` is an implicit Π.
    fn insert(&self, span: &SourceSpan, mut t: RcTerm, mut ty: RcValue) -> ElabResult<(RcTerm, RcValue)> {
        loop {
            let forced = self.force(&ty, span)?;
            let Value::Pi(_, Plicity::Implicit, dom, cod) = &*forced else { return Ok((t, ty)) };
            let m = self.fresh_meta(span, Some(dom.clone()));
            let mv = self.eval(&m, span)?;
            t = Term::app(t, m);
            ty = self.apply(cod, mv, span)?;
        }
    }

    fn explicit_head(t: &SurfaceTerm) -> bool {
        match &t.kind {
            TermKind::ExplicitName(_) => true,
            TermKind::App(f, _) => Self::explicit_head(f),
            _ => false,
        }
    }

    pub fn infer_inserted(&mut self, t: &SurfaceTerm) -> ElabResult<(RcTerm, RcValue)> {
        let (term, ty) = self.infer(t)?;
        let implicit_lam = matches!(&t.kind, TermKind::Lam(bs, _) if bs[0].plicity == BinderPlicity::Implicit);
        if Self::explicit_head(t) || implicit_lam {
            return Ok((term, ty));
        }
        self.insert(&t.span, term, ty)
    }

    /// Elaborates a type, returning its universe level.
    pub fn check_type(&mut self, t: &SurfaceTerm) -> ElabResult<(RcTerm, Level)> {
        let (term, ty) = self.infer_inserted(t)?;
        let forced = self.force(&ty, &t.span)?;
        match &*forced {
            Value::Type(l) => Ok((term, *l)),
            Value::Flex(..) => {
                self.unify(&t.span, &forced, &Value::universe(0))?;
                Ok((term, Level(0)))
            }
            _ => Err(self.mismatch(&t.span, "a type", self.render(&ty))),
        }
    }

    pub fn infer(&mut self, t: &SurfaceTerm) -> ElabResult<(RcTerm, RcValue)> {
        let span = &t.span;
        match &t.kind {
            TermKind::Name(x) | TermKind::ExplicitName(x) => self.lookup(x, span),
            TermKind::Hole => {
                let ty = self.fresh_meta(span, Some(Value::universe(0)));
                let ty_v = self.eval(&ty, span)?;
                Ok((self.fresh_meta(span, Some(ty_v.clone())), ty_v))
            }
            TermKind::TypeU(n) => Ok((Term::universe(*n), Value::universe(n + 1))),
            TermKind::Lam(..) => {
                let (params, body) = lam_params(t);
                self.infer_lam(&params, body, span)
            }
            TermKind::Pi(binders, body) => {
                let mut params = Vec::new();
                for b in binders {
                    for (n, _) in &b.names {
                        params.push(Param { name: n, annotation: b.annotation.as_deref(), plicity: plicity(b.plicity) });
                    }
                }
                let (term, level) = self.infer_pi(&params, body, span)?;
                Ok((term, Rc::new(Value::Type(level))))
            }
            TermKind::Arrow(dom, cod) => {
                let (dom_t, l1) = self.check_type(dom)?;
                let dom_v = self.eval(&dom_t, span)?;
                self.bind("_", dom_v, false);
                let res = self.check_type(cod);
                self.unbind();
                let (cod_t, l2) = res?;
                Ok((Rc::new(Term::Pi("_".into(), Plicity::Explicit, dom_t, cod_t)), Rc::new(Value::Type(l1.max(l2)))))
            }
            TermKind::App(..) => self.infer_app(t),
            TermKind::IdSugar(l, r) => {
                let (lt, a) = self.infer_inserted(l)?;
                let rt = self.check(r, &a)?;
                let level = self.level_of(&a, span)?;
                let a_t = self.quote(&a, span)?;
                Ok((Term::id(a_t, lt, rt), Rc::new(Value::Type(level))))
            }
            TermKind::ReflSugar(Some(a)) => {
                let (at, ty) = self.infer_inserted(a)?;
                let av = self.eval(&at, span)?;
                Ok((Term::refl(at), Rc::new(Value::Id(ty, av.clone(), av))))
            }
            TermKind::ReflSugar(None) => {
                let ty = self.fresh_meta(span, Some(Value::universe(0)));
                let ty_v = self.eval(&ty, span)?;
                let a = self.fresh_meta(span, Some(ty_v.clone()));
                let av = self.eval(&a, span)?;
                Ok((Term::refl(a), Rc::new(Value::Id(ty_v, av.clone(), av))))
            }
            TermKind::JSugar(m, b, p) => self.infer_j(m, b, p, span),
        }
    }

    fn infer_lam(&mut self, params: &[Param], body: &SurfaceTerm, span: &SourceSpan) -> ElabResult<(RcTerm, RcValue)> {
        let Some((p, rest)) = params.split_first() else { return self.infer_inserted(body) };
        let dom = match p.annotation {
            Some(a) => self.check_type(a)?.0,
            None => self.fresh_meta(span, Some(Value::universe(0))),
        };
        let dom_v = self.eval(&dom, span)?;
        self.bind(p.name, dom_v.clone(), true);
        let res = self.infer_lam(rest, body, span).and_then(|(bt, bty)| Ok((bt, self.quote(&bty, span)?)));
        self.unbind();
        let (bt, cod) = res?;
        let name: Name = p.name.into();
        let ty = Value::Pi(name.clone(), p.plicity, dom_v, Closure { env: self.env().clone(), body: cod });
        Ok((Rc::new(Term::Lam(name, p.plicity, bt)), Rc::new(ty)))
    }

    fn infer_pi(&mut self, params: &[Param], body: &SurfaceTerm, span: &SourceSpan) -> ElabResult<(RcTerm, Level)> {
        let Some((p, rest)) = params.split_first() else { return self.check_type(body) };
        let (dom, l1) = match p.annotation {
            Some(a) => self.check_type(a)?,
            None => (self.fresh_meta(span, Some(Value::universe(0))), Level(0)),
        };
        let dom_v = self.eval(&dom, span)?;
        self.bind(p.name, dom_v, true);
        let res = self.infer_pi(rest, body, span);
        self.unbind();
        let (cod, l2) = res?;
        Ok((Rc::new(Term::Pi(p.name.into(), p.plicity, dom, cod)), l1.max(l2)))
    }

    fn infer_app(&mut self, t: &SurfaceTerm) -> ElabResult<(RcTerm, RcValue)> {
        let mut args = Vec::new();
        let mut head = t;
        while let TermKind::App(f, a) = &head.kind {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        let explicit = matches!(head.kind, TermKind::ExplicitName(_));
        let (mut ft, mut fty) = self.infer(head)?;
        let mut span = head.span.clone();
        for arg in args {
            if !explicit {
                (ft, fty) = self.insert(&span, ft, fty)?;
            }
            let forced = self.force(&fty, &span)?;
            let Value::Pi(_, _, dom, cod) = &*forced else {
                let head = pretty(&ft, &self.names, self.ev.globals);
                return Err(ElabError::NotAFunction { span, head, ty: self.render(&fty) });
            };
            let at = self.check(arg, dom)?;
            let av = self.eval(&at, &arg.span)?;
            ft = Term::app(ft, at);
            fty = self.apply(cod, av, &arg.span)?;
            span = span.to(&arg.span);
        }
        Ok((ft, fty))
    }

    fn infer_j(
        &mut self,
        m: &SurfaceTerm,
        b: &SurfaceTerm,
        p: &SurfaceTerm,
        span: &SourceSpan,
    ) -> ElabResult<(RcTerm, RcValue)> {
        let (pt, pty) = self.infer_inserted(p)?;
        let forced = self.force(&pty, &p.span)?;
        let (a, x, y) = match &*forced {
            Value::Id(a, x, y) => (a.clone(), x.clone(), y.clone()),
            _ => {
                let a = self.eval(&self.fresh_meta(&p.span, Some(Value::universe(0))), &p.span)?;
                let x = self.eval(&self.fresh_meta(&p.span, Some(a.clone())), &p.span)?;
                let y = self.eval(&self.fresh_meta(&p.span, Some(a.clone())), &p.span)?;
                let id = Rc::new(Value::Id(a.clone(), x.clone(), y.clone()));
                self.unify(&p.span, &id, &pty).map_err(|_| self.mismatch(&p.span, "a path", self.render(&pty)))?;
                (a, x, y)
            }
        };
        let mt = self.elab_motive(m, &a, &x)?;
        let mv = self.eval(&mt, &m.span)?;
        let refl_x = Rc::new(Value::Refl(x.clone()));
        let base_ty = self.ev.apply_many(&mv, &[x, refl_x]).map_err(Self::kernel(span))?;
        let bt = self.check(b, &base_ty)?;
        let et = self.quote(&y, span)?;
        let pv = self.eval(&pt, span)?;
        let ty = self.ev.apply_many(&mv, &[y, pv]).map_err(Self::kernel(span))?;
        Ok((Term::j(mt, bt, et, pt), ty))
    }

    /// Elaborates a motive `(y : A) -> x = y -> Type i`.
    fn elab_motive(&mut self, m: &SurfaceTerm, a: &RcValue, x: &RcValue) -> ElabResult<RcTerm> {
        let start = self.depth();
        let domain = |bound: usize| -> RcValue {
            if bound == 0 {
                a.clone()
            } else {
                Rc::new(Value::Id(a.clone(), x.clone(), Value::var(start)))
            }
        };
        if matches!(m.kind, TermKind::Hole) {
            let path_ty = self.ev.quote(start + 1, &domain(1), Unfold::None).map_err(Self::kernel(&m.span))?;
            let body = Term::pi("e", path_ty, Term::universe(0));
            let motive_ty = Value::Pi("y".into(), Plicity::Explicit, a.clone(), Closure { env: self.env().clone(), body });
            return Ok(self.fresh_meta(&m.span, Some(Rc::new(motive_ty))));
        }
        let (params, body) = lam_params(m);
        if params.len() > 2 {
            return Err(self.mismatch(&m.span, "a type family over a path", "a function of more than two arguments"));
        }
        let mut bound = 0;
        let result = (|| -> ElabResult<RcTerm> {
            for p in &params {
                let dom = domain(bound);
                if let Some(ann) = p.annotation {
                    let (at, _) = self.check_type(ann)?;
                    let av = self.eval(&at, &ann.span)?;
                    self.unify_types(&ann.span, &dom, &av)?;
                }
                self.bind(p.name, dom, true);
                bound += 1;
            }
            let (bt, mut ty) = if params.is_empty() { self.infer_inserted(m)? } else { self.infer_inserted(body)? };
            while bound < 2 {
                let forced = self.force(&ty, &m.span)?;
                let Value::Pi(name, _, dom, cod) = &*forced else {
                    return Err(self.mismatch(&m.span, "a type family over a path", self.render(&ty)));
                };
                self.unify_types(&m.span, &domain(bound), dom)?;
                let var = self.bind(name, dom.clone(), false);
                ty = self.apply(cod, var, &m.span)?;
                bound += 1;
            }
            let forced = self.force(&ty, &m.span)?;
            match &*forced {
                Value::Type(_) => {}
                Value::Flex(..) => self.unify(&m.span, &forced, &Value::universe(0))?,
                _ => return Err(self.mismatch(&m.span, "a type", self.render(&ty))),
            }
            Ok(params.iter().rev().fold(bt, |t, p| Rc::new(Term::Lam(p.name.into(), p.plicity, t))))
        })();
        while self.depth() > start {
            self.unbind();
        }
        result
    }

    pub fn check(&mut self, t: &SurfaceTerm, expected: &RcValue) -> ElabResult<RcTerm> {
        let span = &t.span;
        if let TermKind::Lam(..) = &t.kind {
            let (params, body) = lam_params(t);
            return self.check_lam(&params, body, expected, span);
        }
        if let TermKind::Hole = &t.kind {
            return Ok(self.fresh_meta(span, Some(expected.clone())));
        }
        let forced = self.force(expected, span)?;
        match (&t.kind, &*forced) {
            (_, Value::Pi(x, Plicity::Implicit, dom, cod)) if !Self::explicit_head(t) => {
                let var = self.bind(x, dom.clone(), false);
                let res = self.apply(cod, var, span).and_then(|cod| self.check(t, &cod));
                self.unbind();
                Ok(Rc::new(Term::Lam(x.clone(), Plicity::Implicit, res?)))
            }
            (TermKind::ReflSugar(None), Value::Id(_, x, y)) => {
                self.unify(span, x, y).map_err(|e| match e {
                    ElabError::UnifyFailure { .. } => {
                        self.mismatch(span, self.render(expected), format!("refl, but {} and {} differ", self.render(x), self.render(y)))
                    }
                    e => e,
                })?;
                Ok(Term::refl(self.quote(x, span)?))
            }
            _ => {
                let (term, found) = self.infer_inserted(t)?;
                self.unify_types(span, expected, &found)?;
                Ok(term)
            }
        }
    }

    fn check_lam(
        &mut self,
        params: &[Param],
        body: &SurfaceTerm,
        expected: &RcValue,
        span: &SourceSpan,
    ) -> ElabResult<RcTerm> {
        let Some((p, rest)) = params.split_first() else { return self.check(body, expected) };
        let forced = self.force(expected, span)?;
        let Value::Pi(x, pi_plicity, dom, cod) = &*forced else {
            return Err(self.mismatch(span, self.render(expected), "a function"));
        };
        if *pi_plicity == Plicity::Implicit && p.plicity == Plicity::Explicit {
            let var = self.bind(x, dom.clone(), false);
            let res = self.apply(cod, var, span).and_then(|cod| self.check_lam(params, body, &cod, span));
            self.unbind();
            return Ok(Rc::new(Term::Lam(x.clone(), Plicity::Implicit, res?)));
        }
        if *pi_plicity != p.plicity {
            return Err(self.mismatch(span, self.render(expected), "a function with an implicit argument"));
        }
        if let Some(ann) = p.annotation {
            let (at, _) = self.check_type(ann)?;
            let av = self.eval(&at, &ann.span)?;
            self.unify_types(&ann.span, dom, &av)?;
        }
        let var = self.bind(p.name, dom.clone(), true);
        let res = self.apply(cod, var, span).and_then(|cod| self.check_lam(rest, body, &cod, span));
        self.unbind();
        Ok(Rc::new(Term::Lam(p.name.into(), p.plicity, res?)))
    }

    /// Universe level of a type value.
    fn level_of(&mut self, ty: &RcValue, span: &SourceSpan) -> ElabResult<Level> {
        let forced = self.force(ty, span)?;
        Ok(match &*forced {
            Value::Type(l) => l.succ(),
            Value::Pi(x, _, dom, cod) => {
                let l1 = self.level_of(dom, span)?;
                let var = self.bind(x, dom.clone(), false);
                let res = self.apply(cod, var, span).and_then(|c| self.level_of(&c, span));
                self.unbind();
                l1.max(res?)
            }
            Value::Id(a, _, _) => self.level_of(&a.clone(), span)?,
            Value::Rigid(..) | Value::Glued(..) => {
                let sort = self.type_of_neutral(&forced, span)?;
                match &*self.force(&sort, span)? {
                    Value::Type(l) => *l,
                    _ => Level(0),
                }
            }
            _ => Level(0),
        })
    }

    /// Type of a stuck value, recomputed along its spine.
    fn type_of_neutral(&self, v: &RcValue, span: &SourceSpan) -> ElabResult<RcValue> {
        let kernel = Self::kernel(span);
        let (mut ty, mut cur, spine) = match &**v {
            Value::Rigid(Head::Var(l), sp) => (self.types[*l].clone(), Value::var(*l), sp),
            Value::Rigid(Head::Axiom(n), sp) => {
                let entry = self.ev.globals.get(n).ok_or_else(|| kernel(KernelError::UnknownGlobal(n.clone())))?;
                (entry.ty.clone(), Rc::new(Value::Rigid(Head::Axiom(n.clone()), Vec::new())), sp)
            }
            Value::Glued(g) => {
                let entry = self.ev.globals.get(&g.name).ok_or_else(|| kernel(KernelError::UnknownGlobal(g.name.clone())))?;
                let start = self.ev.eval(&Env::new(), &Term::Global(g.name.clone())).map_err(&kernel)?;
                (entry.ty.clone(), start, &g.spine)
            }
            _ => return Ok(Value::universe(0)),
        };
        for elim in spine {
            let fty = self.force(&ty, span)?;
            ty = match (elim, &*fty) {
                (crate::kernel::Elim::App(a), Value::Pi(_, _, _, cod)) => self.apply(cod, a.clone(), span)?,
                (crate::kernel::Elim::J { motive, endpoint, .. }, _) => {
                    self.ev.apply_many(motive, &[endpoint.clone(), cur.clone()]).map_err(&kernel)?
                }
                _ => return Ok(Value::universe(0)),
            };
            cur = self.ev.eliminate(&cur, elim.clone()).map_err(&kernel)?;
        }
        Ok(ty)
    }

    /// Replaces solved metas by their solutions. Fails on the first
    /// unsolved one.
    pub fn zonk(&self, t: &RcTerm) -> ElabResult<RcTerm> {
        self.zonk_at(self.depth(), t)
    }

    fn zonk_at(&self, depth: usize, t: &RcTerm) -> ElabResult<RcTerm> {
        let (head, _) = t.spine();
        if let Term::Meta(m) = head {
            let meta = self.metas.get(*m);
            if meta.solution.is_none() {
                return Err(self.unsolved(*m));
            }
            let span = meta.span;
            let v = self.ev.eval(&Env::fresh(depth), t).map_err(Self::kernel(&span))?;
            let q = self.ev.quote(depth, &v, Unfold::None).map_err(Self::kernel(&span))?;
            return self.zonk_at(depth, &q);
        }
        Ok(match &**t {
            Term::Var(_) | Term::Global(_) | Term::Type(_) => t.clone(),
            Term::Meta(_) => unreachable!("meta heads handled above"),
            Term::Lam(x, p, b) => Rc::new(Term::Lam(x.clone(), *p, self.zonk_at(depth + 1, b)?)),
            Term::App(f, a) => Term::app(self.zonk_at(depth, f)?, self.zonk_at(depth, a)?),
            Term::Pi(x, p, a, b) => {
                Rc::new(Term::Pi(x.clone(), *p, self.zonk_at(depth, a)?, self.zonk_at(depth + 1, b)?))
            }
            Term::Id(a, l, r) => Term::id(self.zonk_at(depth, a)?, self.zonk_at(depth, l)?, self.zonk_at(depth, r)?),
            Term::Refl(a) => Term::refl(self.zonk_at(depth, a)?),
            Term::J(m, b, e, p) => Term::j(
                self.zonk_at(depth, m)?,
                self.zonk_at(depth, b)?,
                self.zonk_at(depth, e)?,
                self.zonk_at(depth, p)?,
            ),
        })
    }

    fn unsolved(&self, m: MetaId) -> ElabError {
        let meta = self.metas.get(m);
        let what = match &meta.expected_type {
            Some(ty) if matches!(&**ty, Value::Type(_)) => "type",
            _ => "term",
        };
        ElabError::UnsolvedMeta { span: meta.span, meta: m, what: what.to_string() }
    }

    /// Fails if any meta created so far is unsolved, reporting the earliest.
    pub fn finish(&self, _span: &SourceSpan) -> ElabResult<()> {
        match self.metas.unsolved().first() {
            Some(m) => Err(self.unsolved(*m)),
            None => Ok(()),
        }
    }

    pub fn decl(&mut self, d: &SurfaceDecl) -> ElabResult<Elaborated> {
        let span = &d.span;
        match &d.kind {
            DeclKind::Def { name, binders, ty, body } => {
                let full_ty = wrap_binders(binders, ty, true);
                let (ty_t, _) = self.check_type(&full_ty)?;
                let ty_v = self.eval(&ty_t, span)?;
                let full_body = wrap_binders(binders, body, false);
                let body_t = self.check(&full_body, &ty_v)?;
                self.finish(span)?;
                Ok(Elaborated::Decl(Decl {
                    name: name.as_str().into(),
                    ty: self.zonk(&ty_t)?,
                    body: Some(self.zonk(&body_t)?),
                }))
            }
            DeclKind::Axiom { name, binders, ty } => {
                let full_ty = wrap_binders(binders, ty, true);
                let (ty_t, _) = self.check_type(&full_ty)?;
                self.finish(span)?;
                Ok(Elaborated::Decl(Decl { name: name.as_str().into(), ty: self.zonk(&ty_t)?, body: None }))
            }
            DeclKind::Check(t) | DeclKind::Eval(t) => {
                let (term, ty) = self.infer_inserted(t)?;
                let ty_t = self.quote(&ty, span)?;
                self.finish(span)?;
                let (term, ty) = (self.zonk(&term)?, self.zonk(&ty_t)?);
                Ok(if matches!(d.kind, DeclKind::Check(_)) {
                    Elaborated::Check { term, ty }
                } else {
                    Elaborated::Eval { term, ty }
                })
            }
            DeclKind::AssertDefeq { lhs, rhs, ty } => {
                let (ty_t, _) = self.check_type(ty)?;
                let ty_v = self.eval(&ty_t, span)?;
                let l = self.check(lhs, &ty_v)?;
                let r = self.check(rhs, &ty_v)?;
                self.finish(span)?;
                Ok(Elaborated::AssertDefeq { lhs: self.zonk(&l)?, rhs: self.zonk(&r)?, ty: self.zonk(&ty_t)? })
            }
        }
    }
}

/// Folds declaration binders into a Π type or a λ body.
fn wrap_binders(binders: &[crate::surface::Binder], t: &SurfaceTerm, pi: bool) -> SurfaceTerm {
    if binders.is_empty() {
        return t.clone();
    }
    let span = binders[0].span.to(&t.span);
    let kind = if pi {
        binders.iter().rev().fold(t.clone(), |acc, b| {
            SurfaceTerm::new(b.span.to(&acc.span), TermKind::Pi(vec![b.clone()], Box::new(acc)))
        }).kind
    } else {
        TermKind::Lam(binders.to_vec(), Box::new(t.clone()))
    };
    SurfaceTerm::new(span, kind)
}

#[cfg(test)]
mod tests;
