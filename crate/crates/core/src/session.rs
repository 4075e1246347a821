//! Loading source text: parse, elaborate, then re-check in the kernel.

use thiserror::Error;

use crate::elab::{elaborate_decl, elaborate_term, ElabError, Elaborated};
use crate::kernel::{
    assert_defeq, check_decl_with_budget, Checker, Evaluator, GlobalEnv, KernelError, Unfold, DEFAULT_STEP_BUDGET,
};
use crate::pretty::pretty;
use crate::surface::{parse_file_named, parse_term_named, ParseError, SourceSpan, SurfaceDecl};
use crate::syntax::{Name, RcTerm, Term};

#[derive(Clone, Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Elab(#[from] ElabError),
    #[error("kernel: {error}")]
    Kernel { span: SourceSpan, error: KernelError },
    #[error("assertion failed: {lhs} and {rhs} are not definitionally equal")]
    AssertionFailed { span: SourceSpan, lhs: String, rhs: String },
}

impl SessionError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            SessionError::Parse(e) => e.span(),
            SessionError::Elab(e) => e.span(),
            SessionError::Kernel { span, .. } | SessionError::AssertionFailed { span, .. } => span,
        }
    }
}

/// What processing one declaration produced.
#[derive(Clone, Debug)]
pub enum Outcome {
    Declared(Name),
    Checked { term: String, ty: String },
    Evaluated { value: String, ty: String },
    Asserted,
}

/// A growing global environment fed declaration by declaration.
pub struct Session {
    pub globals: GlobalEnv,
    pub budget: u64,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    pub fn new() -> Session {
        Session::with_budget(DEFAULT_STEP_BUDGET)
    }

    pub fn with_budget(budget: u64) -> Session {
        Session { globals: GlobalEnv::new(), budget }
    }

    /// Processes every declaration of `text`, stopping at the first error.
    pub fn load_source(&mut self, file: &str, text: &str) -> Result<Vec<Outcome>, SessionError> {
        let decls = parse_file_named(file, text)?;
        decls.iter().map(|d| self.process(d)).collect()
    }

    pub fn process(&mut self, d: &SurfaceDecl) -> Result<Outcome, SessionError> {
        let kernel = |error| SessionError::Kernel { span: d.span.clone(), error };
        match elaborate_decl(&self.globals, d, self.budget)? {
            Elaborated::Decl(decl) => {
                let name = decl.name.clone();
                check_decl_with_budget(&mut self.globals, decl, self.budget).map_err(kernel)?;
                Ok(Outcome::Declared(name))
            }
            Elaborated::Check { term, ty } => {
                self.kernel_infer(&term, &ty).map_err(kernel)?;
                Ok(Outcome::Checked { term: self.show(&term), ty: self.show(&ty) })
            }
            Elaborated::Eval { term, ty } => {
                let value = self.normalize(&term, &ty).map_err(kernel)?;
                Ok(Outcome::Evaluated { value: self.show(&value), ty: self.show(&ty) })
            }
            Elaborated::AssertDefeq { lhs, rhs, ty } => {
                if assert_defeq(&self.globals, &lhs, &rhs, &ty, self.budget).map_err(kernel)? {
                    Ok(Outcome::Asserted)
                } else {
                    Err(SessionError::AssertionFailed { span: d.span.clone(), lhs: self.show(&lhs), rhs: self.show(&rhs) })
                }
            }
        }
    }

    /// Elaborates and normalizes a closed expression, returning the printed
    /// normal form and type.
    pub fn eval_expr(&self, text: &str) -> Result<(String, String), SessionError> {
        let t = parse_term_named("<expr>", text)?;
        let (term, ty) = elaborate_term(&self.globals, &t, self.budget)?;
        let kernel = |error| SessionError::Kernel { span: t.span.clone(), error };
        let value = self.normalize(&term, &ty).map_err(kernel)?;
        Ok((self.show(&value), self.show(&ty)))
    }

    /// Re-infers `term` in the kernel and checks it against the elaborated
    /// type.
    fn kernel_infer(&self, term: &Term, ty: &Term) -> Result<(), KernelError> {
        let mut checker = Checker::new(&self.globals, self.budget);
        checker.infer_universe(ty)?;
        let ty_v = checker.eval(ty)?;
        checker.check(term, &ty_v)
    }

    /// β-normal, η-long form of a closed term, after kernel checking.
    pub fn normalize(&self, term: &Term, ty: &Term) -> Result<RcTerm, KernelError> {
        self.kernel_infer(term, ty)?;
        let ev = Evaluator::new(&self.globals, self.budget);
        let env = Default::default();
        let v = ev.eval(&env, term)?;
        let ty_v = ev.eval(&env, ty)?;
        ev.readback(&mut Vec::new(), &v, &ty_v, Unfold::Full)
    }

    pub fn show(&self, t: &Term) -> String {
        pretty(t, &[], &self.globals)
    }
}
