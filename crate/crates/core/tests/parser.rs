mod common;

use hpt::corpus::prelude_sources;
use hpt::surface::{
    lex, parse_file, parse_file_named, parse_term, print_decl, print_surface, BinderPlicity, DeclKind, ParseError,
    TermKind, Token,
};
use proptest::prelude::*;

#[test]
fn lex_examples() {
    let toks: Vec<Token> = lex("def id").unwrap().into_iter().map(|t| t.token).collect();
    assert_eq!(toks, vec![Token::KwDef, Token::Ident("id".into())]);
    let toks: Vec<Token> = lex("p * q").unwrap().into_iter().map(|t| t.token).collect();
    assert_eq!(toks, vec![Token::Ident("p".into()), Token::Star, Token::Ident("q".into())]);
    let err = lex("⟦").unwrap_err();
    assert_eq!((err.span.start_line, err.span.start_col), (1, 1));
}

#[test]
fn lex_identifiers_and_comments() {
    let toks: Vec<Token> = lex("whisk-L-R-1-L x' -- trailing\n a->b").unwrap().into_iter().map(|t| t.token).collect();
    assert_eq!(
        toks,
        vec![
            Token::Ident("whisk-L-R-1-L".into()),
            Token::Ident("x'".into()),
            Token::Ident("a".into()),
            Token::Arrow,
            Token::Ident("b".into()),
        ]
    );
    assert!(lex("αβ").is_err());
}

#[test]
fn token_spans_reconstruct_input() {
    for (_, text) in prelude_sources() {
        let toks = lex(&text).unwrap();
        let mut prev = 0;
        for t in &toks {
            assert!(t.span.start >= prev && t.span.end > t.span.start);
            let gap = &text[prev..t.span.start];
            assert!(
                gap.lines().all(|l| l.trim().is_empty() || l.trim_start().starts_with("--")),
                "non-whitespace between tokens: {gap:?}"
            );
            prev = t.span.end;
        }
    }
}

#[test]
fn parse_file_examples() {
    let ds = parse_file("def id (A : Type) (a : A) : A := a").unwrap();
    let DeclKind::Def { name, binders, .. } = &ds[0].kind else { panic!() };
    assert_eq!(name, "id");
    assert_eq!(binders.len(), 2);
    assert!(binders.iter().all(|b| b.plicity == BinderPlicity::Explicit));

    let ds = parse_file("axiom star : A").unwrap();
    assert!(matches!(&ds[0].kind, DeclKind::Axiom { name, .. } if name == "star"));

    let err = parse_file("def f : := x").unwrap_err();
    let ParseError::Unexpected { found, span, .. } = &err else { panic!("{err}") };
    assert_eq!(found, "`:=`");
    assert_eq!(span.start_col, 9);
}

#[test]
fn parse_term_examples() {
    let t = parse_term("p * q * r").unwrap();
    let TermKind::App(f, r) = &t.kind else { panic!() };
    assert!(matches!(&r.kind, TermKind::Name(n) if n == "r"));
    let TermKind::App(_, l) = &f.kind else { panic!() };
    assert!(l.same_shape(&parse_term("p * q").unwrap()));

    assert!(matches!(parse_term("a = b").unwrap().kind, TermKind::IdSugar(..)));

    let TermKind::Lam(bs, _) = parse_term("fun {A : Type} (a : A) => a").unwrap().kind else { panic!() };
    assert_eq!(bs[0].plicity, BinderPlicity::Implicit);
    assert_eq!(bs[1].plicity, BinderPlicity::Explicit);

    assert!(parse_term("a b )").is_err());
    assert!(parse_term("a = b = c").is_err());
}

#[test]
fn operator_precedence() {
    let t = parse_term("p * q ** r = s").unwrap();
    let expected = parse_term("(concat p (par-concat q r)) = s").unwrap();
    assert!(t.same_shape(&expected));
    let t = parse_term("a -> b -> c").unwrap();
    assert!(t.same_shape(&parse_term("a -> (b -> c)").unwrap()));
}

#[test]
fn print_examples() {
    assert_eq!(print_surface(&parse_term("a = b").unwrap()), "a = b");
    assert_eq!(print_surface(&parse_term("_").unwrap()), "_");
    assert_eq!(print_surface(&parse_term("((f x) (g y))").unwrap()), "f x (g y)");
}

#[test]
fn spans_nest() {
    for (file, text) in prelude_sources() {
        for d in parse_file_named(&file, &text).unwrap() {
            let mut check = |parent: &hpt::surface::SourceSpan, child: &hpt::surface::SourceSpan| {
                assert!(parent.contains(child), "{child} escapes {parent}");
            };
            match &d.kind {
                DeclKind::Def { ty, body, .. } => {
                    ty.for_each_child_span(&mut check);
                    body.for_each_child_span(&mut check);
                }
                DeclKind::Axiom { ty, .. } => ty.for_each_child_span(&mut check),
                DeclKind::Check(t) | DeclKind::Eval(t) => t.for_each_child_span(&mut check),
                DeclKind::AssertDefeq { lhs, rhs, ty } => {
                    for t in [lhs, rhs, ty] {
                        t.for_each_child_span(&mut check);
                    }
                }
            }
        }
    }
}

#[test]
fn corpus_declarations_round_trip() {
    for (file, text) in prelude_sources() {
        let decls = parse_file_named(&file, &text).unwrap();
        let printed: Vec<String> = decls.iter().map(print_decl).collect();
        let again = parse_file(&printed.join("\n")).unwrap();
        assert_eq!(decls.len(), again.len());
        for (a, b) in decls.iter().zip(&again) {
            assert!(a.same_shape(b), "{file}: {}", print_decl(a));
        }
        // Determinism.
        let twice: Vec<String> = parse_file_named(&file, &text).unwrap().iter().map(print_decl).collect();
        assert_eq!(printed, twice);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_terms_reparse(t in common::arb_surface()) {
        let printed = print_surface(&t);
        let back = parse_term(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert!(t.same_shape(&back), "{}", printed);
    }
}
