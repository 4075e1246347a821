//! Printing surface trees back to source text.
//!
//! Parentheses are inserted only where the grammar needs them, so that
//! `parse_term(print_surface(t))` gives back `t` up to spans.

use crate::surface::ast::*;
use crate::surface::parser::{CONCAT, PAR_CONCAT};

// Precedence levels, loosest first.
const TOP: u8 = 0;
const EQ: u8 = 1;
const CONCAT_LVL: u8 = 2;
const PAR_LVL: u8 = 3;
const APP: u8 = 4;
const ATOM: u8 = 5;

pub fn print_surface(t: &SurfaceTerm) -> String {
    let mut out = String::new();
    term(&mut out, t, TOP);
    out
}

pub fn print_decl(d: &SurfaceDecl) -> String {
    let mut out = String::new();
    match &d.kind {
        DeclKind::Def { name, binders, ty, body } => {
            out.push_str("def ");
            out.push_str(name);
            decl_binders(&mut out, binders);
            out.push_str(" : ");
            term(&mut out, ty, TOP);
            out.push_str(" :=\n  ");
            term(&mut out, body, TOP);
        }
        DeclKind::Axiom { name, binders, ty } => {
            out.push_str("axiom ");
            out.push_str(name);
            decl_binders(&mut out, binders);
            out.push_str(" : ");
            term(&mut out, ty, TOP);
        }
        DeclKind::Check(t) => {
            out.push_str("#check ");
            term(&mut out, t, TOP);
        }
        DeclKind::Eval(t) => {
            out.push_str("#eval ");
            term(&mut out, t, TOP);
        }
        DeclKind::AssertDefeq { lhs, rhs, ty } => {
            out.push_str("#assert defeq ");
            term(&mut out, lhs, TOP);
            out.push_str(" ~ ");
            term(&mut out, rhs, TOP);
            out.push_str(" : ");
            term(&mut out, ty, TOP);
        }
    }
    out
}

fn decl_binders(out: &mut String, binders: &[Binder]) {
    for b in binders {
        out.push(' ');
        binder(out, b, false);
    }
}

fn binder(out: &mut String, b: &Binder, lambda: bool) {
    let names = b.names.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(" ");
    match (&b.annotation, b.plicity) {
        (None, BinderPlicity::Explicit) if lambda && b.names.len() == 1 => out.push_str(&names),
        (annotation, plicity) => {
            let (open, close) = match plicity {
                BinderPlicity::Explicit => ('(', ')'),
                BinderPlicity::Implicit => ('{', '}'),
            };
            out.push(open);
            out.push_str(&names);
            if let Some(a) = annotation {
                out.push_str(" : ");
                term(out, a, TOP);
            }
            out.push(close);
        }
    }
}

/// Matches `op l r` for the infix-desugared globals.
fn infix<'a>(t: &'a SurfaceTerm) -> Option<(&'static str, &'a SurfaceTerm, &'a SurfaceTerm)> {
    let TermKind::App(f, r) = &t.kind else { return None };
    let TermKind::App(op, l) = &f.kind else { return None };
    match &op.kind {
        TermKind::Name(x) if x == CONCAT => Some(("*", l, r)),
        TermKind::Name(x) if x == PAR_CONCAT => Some(("**", l, r)),
        _ => None,
    }
}

fn level(t: &SurfaceTerm) -> u8 {
    match &t.kind {
        TermKind::Lam(..) | TermKind::Pi(..) | TermKind::Arrow(..) => TOP,
        TermKind::IdSugar(..) => EQ,
        TermKind::App(..) => match infix(t) {
            Some(("*", ..)) => CONCAT_LVL,
            Some(_) => PAR_LVL,
            None => APP,
        },
        TermKind::ReflSugar(Some(_)) | TermKind::JSugar(..) => APP,
        TermKind::ReflSugar(None)
        | TermKind::Name(_)
        | TermKind::ExplicitName(_)
        | TermKind::Hole
        | TermKind::TypeU(_) => ATOM,
    }
}

fn term(out: &mut String, t: &SurfaceTerm, min: u8) {
    if level(t) < min {
        out.push('(');
        term(out, t, TOP);
        out.push(')');
        return;
    }
    match &t.kind {
        TermKind::Name(x) => out.push_str(x),
        TermKind::ExplicitName(x) => {
            out.push('@');
            out.push_str(x);
        }
        TermKind::Hole => out.push('_'),
        TermKind::TypeU(0) => out.push_str("Type"),
        TermKind::TypeU(n) => out.push_str(&format!("Type {n}")),
        TermKind::Lam(binders, body) => {
            out.push_str("fun");
            for b in binders {
                out.push(' ');
                binder(out, b, true);
            }
            out.push_str(" => ");
            term(out, body, TOP);
        }
        TermKind::Pi(binders, body) => {
            for b in binders {
                binder(out, b, false);
                out.push_str(" -> ");
            }
            term(out, body, TOP);
        }
        TermKind::Arrow(dom, cod) => {
            term(out, dom, EQ);
            out.push_str(" -> ");
            term(out, cod, TOP);
        }
        TermKind::IdSugar(l, r) => {
            term(out, l, CONCAT_LVL);
            out.push_str(" = ");
            term(out, r, CONCAT_LVL);
        }
        TermKind::App(f, a) => {
            if let Some((op, l, r)) = infix(t) {
                let lvl = if op == "*" { CONCAT_LVL } else { PAR_LVL };
                term(out, l, lvl);
                out.push(' ');
                out.push_str(op);
                out.push(' ');
                term(out, r, lvl + 1);
                return;
            }
            // A bare `refl` in head position would swallow the argument.
            if matches!(f.kind, TermKind::ReflSugar(None)) {
                out.push_str("(refl)");
            } else {
                term(out, f, APP);
            }
            out.push(' ');
            term(out, a, ATOM);
        }
        TermKind::ReflSugar(None) => out.push_str("refl"),
        TermKind::ReflSugar(Some(a)) => {
            out.push_str("refl ");
            term(out, a, ATOM);
        }
        TermKind::JSugar(m, b, p) => {
            out.push('J');
            for a in [m, b, p] {
                out.push(' ');
                term(out, a, ATOM);
            }
        }
    }
}
