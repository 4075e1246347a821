use std::fmt;
use std::rc::Rc;

/// A region of a source file. Lines and columns are 1-based; `start` and
/// `end` are byte offsets into the file text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Rc<str>,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    /// Span covering `self` through `other`.
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
            start: self.start,
            end: other.end,
        }
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// A span for whole-file diagnostics.
    pub fn whole_file(file: &str) -> SourceSpan {
        SourceSpan { file: file.into(), start_line: 1, start_col: 1, end_line: 1, end_col: 1, start: 0, end: 0 }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinderPlicity {
    Explicit,
    Implicit,
}

#[derive(Clone, Debug)]
pub struct Binder {
    pub names: Vec<(String, SourceSpan)>,
    pub annotation: Option<Box<SurfaceTerm>>,
    pub plicity: BinderPlicity,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub struct SurfaceTerm {
    pub span: SourceSpan,
    pub kind: TermKind,
}

#[derive(Clone, Debug)]
pub enum TermKind {
    Name(String),
    /// `@name`: no implicit arguments are inserted for this head.
    ExplicitName(String),
    Hole,
    TypeU(u32),
    Lam(Vec<Binder>, Box<SurfaceTerm>),
    Pi(Vec<Binder>, Box<SurfaceTerm>),
    Arrow(Box<SurfaceTerm>, Box<SurfaceTerm>),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    IdSugar(Box<SurfaceTerm>, Box<SurfaceTerm>),
    ReflSugar(Option<Box<SurfaceTerm>>),
    JSugar(Box<SurfaceTerm>, Box<SurfaceTerm>, Box<SurfaceTerm>),
}

#[derive(Clone, Debug)]
pub struct SurfaceDecl {
    pub span: SourceSpan,
    pub kind: DeclKind,
}

#[derive(Clone, Debug)]
pub enum DeclKind {
    Def { name: String, binders: Vec<Binder>, ty: SurfaceTerm, body: SurfaceTerm },
    Axiom { name: String, binders: Vec<Binder>, ty: SurfaceTerm },
    Check(SurfaceTerm),
    Eval(SurfaceTerm),
    AssertDefeq { lhs: SurfaceTerm, rhs: SurfaceTerm, ty: SurfaceTerm },
}

impl SurfaceTerm {
    pub fn new(span: SourceSpan, kind: TermKind) -> SurfaceTerm {
        SurfaceTerm { span, kind }
    }

    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &SurfaceTerm) -> bool {
        use TermKind::*;
        match (&self.kind, &other.kind) {
            (Name(a), Name(b)) | (ExplicitName(a), ExplicitName(b)) => a == b,
            (Hole, Hole) => true,
            (TypeU(a), TypeU(b)) => a == b,
            (Lam(b1, t1), Lam(b2, t2)) | (Pi(b1, t1), Pi(b2, t2)) => binders_same_shape(b1, b2) && t1.same_shape(t2),
            (Arrow(a1, b1), Arrow(a2, b2)) | (App(a1, b1), App(a2, b2)) | (IdSugar(a1, b1), IdSugar(a2, b2)) => {
                a1.same_shape(a2) && b1.same_shape(b2)
            }
            (ReflSugar(a), ReflSugar(b)) => match (a, b) {
                (None, None) => true,
                (Some(a), Some(b)) => a.same_shape(b),
                _ => false,
            },
            (JSugar(m1, b1, p1), JSugar(m2, b2, p2)) => m1.same_shape(m2) && b1.same_shape(b2) && p1.same_shape(p2),
            _ => false,
        }
    }

    /// Visits this node and all descendants with their parent's span.
    pub fn for_each_child_span(&self, f: &mut dyn FnMut(&SourceSpan, &SourceSpan)) {
        let visit = |child: &SurfaceTerm, f: &mut dyn FnMut(&SourceSpan, &SourceSpan)| {
            f(&self.span, &child.span);
            child.for_each_child_span(f);
        };
        match &self.kind {
            TermKind::Name(_) | TermKind::ExplicitName(_) | TermKind::Hole | TermKind::TypeU(_) => {}
            TermKind::Lam(bs, body) | TermKind::Pi(bs, body) => {
                for b in bs {
                    f(&self.span, &b.span);
                    if let Some(a) = &b.annotation {
                        visit(a, f);
                    }
                }
                visit(body, f);
            }
            TermKind::Arrow(a, b) | TermKind::App(a, b) | TermKind::IdSugar(a, b) => {
                visit(a, f);
                visit(b, f);
            }
            TermKind::ReflSugar(a) => {
                if let Some(a) = a {
                    visit(a, f);
                }
            }
            TermKind::JSugar(m, b, p) => {
                visit(m, f);
                visit(b, f);
                visit(p, f);
            }
        }
    }
}

fn binders_same_shape(a: &[Binder], b: &[Binder]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.plicity == y.plicity
                && x.names.len() == y.names.len()
                && x.names.iter().zip(&y.names).all(|(n, m)| n.0 == m.0)
                && match (&x.annotation, &y.annotation) {
                    (None, None) => true,
                    (Some(s), Some(t)) => s.same_shape(t),
                    _ => false,
                }
        })
}

impl SurfaceDecl {
    pub fn same_shape(&self, other: &SurfaceDecl) -> bool {
        match (&self.kind, &other.kind) {
            (
                DeclKind::Def { name: n1, binders: b1, ty: t1, body: d1 },
                DeclKind::Def { name: n2, binders: b2, ty: t2, body: d2 },
            ) => n1 == n2 && binders_same_shape(b1, b2) && t1.same_shape(t2) && d1.same_shape(d2),
            (
                DeclKind::Axiom { name: n1, binders: b1, ty: t1 },
                DeclKind::Axiom { name: n2, binders: b2, ty: t2 },
            ) => n1 == n2 && binders_same_shape(b1, b2) && t1.same_shape(t2),
            (DeclKind::Check(a), DeclKind::Check(b)) | (DeclKind::Eval(a), DeclKind::Eval(b)) => a.same_shape(b),
            (
                DeclKind::AssertDefeq { lhs: l1, rhs: r1, ty: t1 },
                DeclKind::AssertDefeq { lhs: l2, rhs: r2, ty: t2 },
            ) => l1.same_shape(l2) && r1.same_shape(r2) && t1.same_shape(t2),
            _ => false,
        }
    }

    /// Name introduced by this declaration, if any.
    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            DeclKind::Def { name, .. } | DeclKind::Axiom { name, .. } => Some(name),
            _ => None,
        }
    }
}
