//! The commutativity of 2-loops and its coherence for 3-loops.

use hpt::corpus::prelude_sources;
use hpt::session::Session;

fn main() {
    let mut s = Session::new();
    for (file, text) in prelude_sources() {
        s.load_source(&file, &text).unwrap();
    }
    for name in ["@EH", "@EH-1-L", "@syllepsis"] {
        let (_, ty) = s.eval_expr(name).unwrap();
        println!("{name} : {ty}\n");
    }
    let (value, ty) = s.eval_expr("EH (refl (refl star)) (refl (refl star))").unwrap();
    println!("EH 1 1 = {value} : {ty}");
}
