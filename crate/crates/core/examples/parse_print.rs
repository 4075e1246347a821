//! Lexes, parses and prints surface syntax.

use hpt::surface::{lex, parse_file, parse_term, print_decl, print_surface};

fn main() {
    let src = "p * q ** r = s";
    let toks: Vec<String> = lex(src).unwrap().iter().map(|t| format!("{:?}", t.token)).collect();
    println!("{}", toks.join(" "));
    let t = parse_term(src).unwrap();
    println!("{}", print_surface(&t));

    let decls = parse_file("def twice {x : A} (p : x = x) : x = x := (p) * (p)\n#check twice").unwrap();
    for d in &decls {
        println!("{}", print_decl(d));
    }

    if let Err(e) = parse_file("def f : := x") {
        println!("{e}");
    }
}
