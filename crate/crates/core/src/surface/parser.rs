//! Recursive-descent parser.
//!
//! Precedence, loosest first: `fun`/`->`, `=` (non-associative), `*` (left),
//! `**` (left), application (left). `*` and `**` desugar to applications of
//! the globals `concat` and `par-concat`.

use thiserror::Error;

use crate::surface::ast::*;
use crate::surface::lexer::{lex_file, LexError, Spanned, Token};

pub const CONCAT: &str = "concat";
pub const PAR_CONCAT: &str = "par-concat";

#[derive(Clone, Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{span}: expected {}, found {found}", expected.join(" or "))]
    Unexpected { span: SourceSpan, expected: Vec<String>, found: String },
}

impl ParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ParseError::Lex(e) => &e.span,
            ParseError::Unexpected { span, .. } => span,
        }
    }
}

pub fn parse_file(input: &str) -> Result<Vec<SurfaceDecl>, ParseError> {
    parse_file_named("<input>", input)
}

pub fn parse_file_named(file: &str, input: &str) -> Result<Vec<SurfaceDecl>, ParseError> {
    let mut p = Parser::new(file, input)?;
    let mut decls = Vec::new();
    while !p.at_end() {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

pub fn parse_term(input: &str) -> Result<SurfaceTerm, ParseError> {
    parse_term_named("<input>", input)
}

pub fn parse_term_named(file: &str, input: &str) -> Result<SurfaceTerm, ParseError> {
    let mut p = Parser::new(file, input)?;
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(t)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    eof: SourceSpan,
}

impl Parser {
    fn new(file: &str, input: &str) -> Result<Parser, ParseError> {
        let tokens = lex_file(file, input)?;
        let (line, col) = input.lines().enumerate().last().map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
        let eof = SourceSpan {
            file: file.into(),
            start_line: line,
            start_col: col,
            end_line: line,
            end_col: col,
            start: input.len(),
            end: input.len(),
        };
        Ok(Parser { tokens, pos: 0, eof })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn peek_at(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n).map(|t| &t.token)
    }

    fn span(&self) -> SourceSpan {
        self.tokens.get(self.pos).map_or_else(|| self.eof.clone(), |t| t.span.clone())
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos - 1].span.clone()
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Unexpected {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().map_or_else(|| "end of input".to_string(), |t| t.to_string()),
        }
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<SourceSpan, ParseError> {
        if self.eat(&t) {
            Ok(self.prev_span())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek() {
            Some(Token::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok((x, self.prev_span()))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn decl(&mut self) -> Result<SurfaceDecl, ParseError> {
        let start = self.span();
        let kind = match self.peek() {
            Some(Token::KwDef) => {
                self.pos += 1;
                let (name, _) = self.ident()?;
                let binders = self.decl_binders()?;
                self.expect(Token::Colon, "`:`")?;
                let ty = self.term()?;
                self.expect(Token::ColonEq, "`:=`")?;
                let body = self.term()?;
                DeclKind::Def { name, binders, ty, body }
            }
            Some(Token::KwAxiom) => {
                self.pos += 1;
                let (name, _) = self.ident()?;
                let binders = self.decl_binders()?;
                self.expect(Token::Colon, "`:`")?;
                let ty = self.term()?;
                DeclKind::Axiom { name, binders, ty }
            }
            Some(Token::HashCheck) => {
                self.pos += 1;
                DeclKind::Check(self.term()?)
            }
            Some(Token::HashEval) => {
                self.pos += 1;
                DeclKind::Eval(self.term()?)
            }
            Some(Token::HashAssert) => {
                self.pos += 1;
                match self.peek() {
                    Some(Token::Ident(x)) if x == "defeq" => self.pos += 1,
                    _ => return Err(self.unexpected(&["`defeq`"])),
                }
                let lhs = self.term()?;
                self.expect(Token::Tilde, "`~`")?;
                let rhs = self.term()?;
                self.expect(Token::Colon, "`:`")?;
                let ty = self.term()?;
                DeclKind::AssertDefeq { lhs, rhs, ty }
            }
            _ => return Err(self.unexpected(&["`def`", "`axiom`", "`#check`", "`#eval`", "`#assert`"])),
        };
        Ok(SurfaceDecl { span: start.to(&self.prev_span()), kind })
    }

    fn decl_binders(&mut self) -> Result<Vec<Binder>, ParseError> {
        let mut out = Vec::new();
        while matches!(self.peek(), Some(Token::LParen | Token::LBrace)) {
            out.push(self.binder(false)?);
        }
        Ok(out)
    }

    /// `(x y : T)` or `{x y : T}`. With `lambda`, the annotation is optional
    /// and a bare identifier is a binder on its own.
    fn binder(&mut self, lambda: bool) -> Result<Binder, ParseError> {
        let start = self.span();
        if lambda {
            if let Some(Token::Ident(_)) = self.peek() {
                let (x, span) = self.ident()?;
                return Ok(Binder {
                    names: vec![(x, span.clone())],
                    annotation: None,
                    plicity: BinderPlicity::Explicit,
                    span,
                });
            }
        }
        let (close, plicity) = if self.eat(&Token::LParen) {
            (Token::RParen, BinderPlicity::Explicit)
        } else if self.eat(&Token::LBrace) {
            (Token::RBrace, BinderPlicity::Implicit)
        } else {
            return Err(self.unexpected(&["binder"]));
        };
        let mut names = vec![self.ident()?];
        while let Some(Token::Ident(_)) = self.peek() {
            names.push(self.ident()?);
        }
        let annotation = if lambda && self.peek() == Some(&close) {
            None
        } else {
            self.expect(Token::Colon, "`:`")?;
            Some(Box::new(self.term()?))
        };
        let closing = if close == Token::RParen { "`)`" } else { "`}`" };
        let end = self.expect(close, closing)?;
        Ok(Binder { names, annotation, plicity, span: start.to(&end) })
    }

    /// Lookahead for `(x ... :` or `{`.
    fn at_pi_binder(&self) -> bool {
        match self.peek() {
            Some(Token::LBrace) => true,
            Some(Token::LParen) => {
                let mut n = 1;
                while let Some(Token::Ident(_)) = self.peek_at(n) {
                    n += 1;
                }
                n > 1 && self.peek_at(n) == Some(&Token::Colon)
            }
            _ => false,
        }
    }

    pub fn term(&mut self) -> Result<SurfaceTerm, ParseError> {
        let start = self.span();
        if self.eat(&Token::KwFun) {
            let mut binders = vec![self.binder(true)?];
            while !matches!(self.peek(), Some(Token::FatArrow) | None) {
                binders.push(self.binder(true)?);
            }
            self.expect(Token::FatArrow, "`=>`")?;
            let body = self.term()?;
            return Ok(SurfaceTerm::new(start.to(&body.span), TermKind::Lam(binders, Box::new(body))));
        }
        if self.at_pi_binder() {
            let binder = self.binder(false)?;
            self.expect(Token::Arrow, "`->`")?;
            let body = self.term()?;
            return Ok(SurfaceTerm::new(start.to(&body.span), TermKind::Pi(vec![binder], Box::new(body))));
        }
        let lhs = self.eq_term()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.term()?;
            return Ok(SurfaceTerm::new(lhs.span.to(&rhs.span), TermKind::Arrow(Box::new(lhs), Box::new(rhs))));
        }
        Ok(lhs)
    }

    fn eq_term(&mut self) -> Result<SurfaceTerm, ParseError> {
        let lhs = self.concat_term()?;
        if self.eat(&Token::Eq) {
            let rhs = self.concat_term()?;
            if self.peek() == Some(&Token::Eq) {
                return Err(self.unexpected(&["`->`", "`)`", "end of term (`=` is not associative)"]));
            }
            return Ok(SurfaceTerm::new(lhs.span.to(&rhs.span), TermKind::IdSugar(Box::new(lhs), Box::new(rhs))));
        }
        Ok(lhs)
    }

    fn concat_term(&mut self) -> Result<SurfaceTerm, ParseError> {
        let mut lhs = self.par_term()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let op = self.prev_span();
            let rhs = self.par_term()?;
            lhs = binary(CONCAT, op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn par_term(&mut self) -> Result<SurfaceTerm, ParseError> {
        let mut lhs = self.app_term()?;
        while self.peek() == Some(&Token::StarStar) {
            self.pos += 1;
            let op = self.prev_span();
            let rhs = self.app_term()?;
            lhs = binary(PAR_CONCAT, op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn at_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Token::Ident(_)
                    | Token::At
                    | Token::Underscore
                    | Token::KwType
                    | Token::KwRefl
                    | Token::KwJ
                    | Token::LParen
            )
        )
    }

    fn app_term(&mut self) -> Result<SurfaceTerm, ParseError> {
        let start = self.span();
        let mut head = match self.peek() {
            Some(Token::KwRefl) => {
                self.pos += 1;
                if self.at_atom() {
                    let point = self.atom()?;
                    SurfaceTerm::new(start.to(&point.span), TermKind::ReflSugar(Some(Box::new(point))))
                } else {
                    SurfaceTerm::new(start, TermKind::ReflSugar(None))
                }
            }
            Some(Token::KwJ) => {
                self.pos += 1;
                let mut args = Vec::new();
                while args.len() < 3 && self.at_atom() {
                    args.push(self.atom()?);
                }
                let end = args.last().map_or_else(|| start.clone(), |a| a.span.clone());
                while args.len() < 3 {
                    args.push(SurfaceTerm::new(start.clone(), TermKind::Hole));
                }
                let mut it = args.into_iter().map(Box::new);
                let (m, b, p) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
                SurfaceTerm::new(start.to(&end), TermKind::JSugar(m, b, p))
            }
            _ => self.atom()?,
        };
        while self.at_atom() {
            let arg = self.atom()?;
            head = SurfaceTerm::new(head.span.to(&arg.span), TermKind::App(Box::new(head), Box::new(arg)));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<SurfaceTerm, ParseError> {
        let start = self.span();
        match self.peek() {
            Some(Token::Ident(_)) => {
                let (x, span) = self.ident()?;
                Ok(SurfaceTerm::new(span, TermKind::Name(x)))
            }
            Some(Token::At) => {
                self.pos += 1;
                let (x, span) = self.ident()?;
                Ok(SurfaceTerm::new(start.to(&span), TermKind::ExplicitName(x)))
            }
            Some(Token::Underscore) => {
                self.pos += 1;
                Ok(SurfaceTerm::new(start, TermKind::Hole))
            }
            Some(Token::KwType) => {
                self.pos += 1;
                if let Some(Token::Nat(n)) = self.peek() {
                    let n = *n;
                    self.pos += 1;
                    return Ok(SurfaceTerm::new(start.to(&self.prev_span()), TermKind::TypeU(n)));
                }
                Ok(SurfaceTerm::new(start, TermKind::TypeU(0)))
            }
            Some(Token::KwRefl) => {
                self.pos += 1;
                Ok(SurfaceTerm::new(start, TermKind::ReflSugar(None)))
            }
            Some(Token::KwJ) => {
                self.pos += 1;
                let hole = || Box::new(SurfaceTerm::new(start.clone(), TermKind::Hole));
                Ok(SurfaceTerm::new(start.clone(), TermKind::JSugar(hole(), hole(), hole())))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let mut t = self.term()?;
                let end = self.expect(Token::RParen, "`)`")?;
                t.span = start.to(&end);
                Ok(t)
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }
}

fn binary(op_name: &str, op: SourceSpan, lhs: SurfaceTerm, rhs: SurfaceTerm) -> SurfaceTerm {
    let head = SurfaceTerm::new(op.clone(), TermKind::Name(op_name.to_string()));
    let partial_span = lhs.span.to(&op);
    let partial = SurfaceTerm::new(partial_span, TermKind::App(Box::new(head), Box::new(lhs)));
    let span = partial.span.to(&rhs.span);
    SurfaceTerm::new(span, TermKind::App(Box::new(partial), Box::new(rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(t: &SurfaceTerm) -> &str {
        match &t.kind {
            TermKind::Name(x) => x,
            k => panic!("expected a name, got {k:?}"),
        }
    }

    #[test]
    fn def_with_binders() {
        let decls = parse_file("def id (A : Type) (a : A) : A := a").unwrap();
        assert_eq!(decls.len(), 1);
        match &decls[0].kind {
            DeclKind::Def { name, binders, .. } => {
                assert_eq!(name, "id");
                assert_eq!(binders.len(), 2);
                assert!(binders.iter().all(|b| b.plicity == BinderPlicity::Explicit));
            }
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn axiom_decl() {
        let decls = parse_file("axiom star : A").unwrap();
        assert!(matches!(&decls[0].kind, DeclKind::Axiom { name, .. } if name == "star"));
    }

    #[test]
    fn missing_type_after_colon() {
        let err = parse_file("def f : := x").unwrap_err();
        match err {
            ParseError::Unexpected { expected, found, span, .. } => {
                assert_eq!(expected, vec!["term".to_string()]);
                assert_eq!(found, "`:=`");
                assert_eq!(span.start_col, 9);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn concat_is_left_associative() {
        let t = parse_term("p * q * r").unwrap();
        let TermKind::App(outer_f, r) = &t.kind else { panic!() };
        assert_eq!(name(r), "r");
        let TermKind::App(concat, lhs) = &outer_f.kind else { panic!() };
        assert_eq!(name(concat), CONCAT);
        let TermKind::App(inner_f, q) = &lhs.kind else { panic!() };
        assert_eq!(name(q), "q");
        let TermKind::App(_, p) = &inner_f.kind else { panic!() };
        assert_eq!(name(p), "p");
    }

    #[test]
    fn id_sugar_and_lambda() {
        let t = parse_term("a = b").unwrap();
        assert!(matches!(&t.kind, TermKind::IdSugar(a, b) if name(a) == "a" && name(b) == "b"));
        let t = parse_term("fun {A : Type} (a : A) => a").unwrap();
        let TermKind::Lam(bs, _) = &t.kind else { panic!() };
        assert_eq!(bs[0].plicity, BinderPlicity::Implicit);
        assert_eq!(bs[1].plicity, BinderPlicity::Explicit);
    }

    #[test]
    fn par_concat_binds_tighter() {
        let t = parse_term("a * b ** c").unwrap();
        let TermKind::App(f, rhs) = &t.kind else { panic!() };
        let TermKind::App(op, _) = &f.kind else { panic!() };
        assert_eq!(name(op), CONCAT);
        let TermKind::App(g, _) = &rhs.kind else { panic!() };
        let TermKind::App(op2, _) = &g.kind else { panic!() };
        assert_eq!(name(op2), PAR_CONCAT);
    }

    #[test]
    fn equality_is_not_associative() {
        assert!(parse_term("a = b = c").is_err());
    }

    #[test]
    fn trailing_input_rejected() {
        assert!(parse_term("a )").is_err());
    }

    #[test]
    fn refl_and_j_absorb_arguments() {
        let t = parse_term("refl a b").unwrap();
        let TermKind::App(f, _) = &t.kind else { panic!() };
        assert!(matches!(&f.kind, TermKind::ReflSugar(Some(_))));
        let t = parse_term("J m c p").unwrap();
        assert!(matches!(&t.kind, TermKind::JSugar(..)));
        let t = parse_term("J").unwrap();
        assert!(matches!(&t.kind, TermKind::JSugar(m, _, _) if matches!(m.kind, TermKind::Hole)));
    }

    #[test]
    fn pi_and_arrow() {
        let t = parse_term("(x : A) -> x = x -> B").unwrap();
        let TermKind::Pi(_, body) = &t.kind else { panic!() };
        assert!(matches!(&body.kind, TermKind::Arrow(d, _) if matches!(d.kind, TermKind::IdSugar(..))));
        let t = parse_term("(f x) -> B").unwrap();
        assert!(matches!(&t.kind, TermKind::Arrow(..)));
    }

    #[test]
    fn assert_directive() {
        let d = parse_file("#assert defeq concat (refl star) (refl star) ~ refl star : star = star").unwrap();
        assert!(matches!(&d[0].kind, DeclKind::AssertDefeq { .. }));
    }
}
