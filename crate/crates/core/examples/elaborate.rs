//! Elaborates surface terms with implicit arguments into core terms.

use hpt::corpus::prelude_sources;
use hpt::elab::elaborate_term;
use hpt::kernel::DEFAULT_STEP_BUDGET;
use hpt::session::Session;
use hpt::surface::parse_term;

fn main() {
    let mut s = Session::new();
    for (file, text) in prelude_sources() {
        s.load_source(&file, &text).unwrap();
    }
    for src in ["inv (refl star)", "whisk-L (refl star) (refl (refl star))", "@concat A star star star", "concat"] {
        match elaborate_term(&s.globals, &parse_term(src).unwrap(), DEFAULT_STEP_BUDGET) {
            Ok((term, ty)) => println!("{src}\n  core: {term:?}\n  type: {}", s.show(&ty)),
            Err(e) => println!("{src}\n  error: {e}"),
        }
    }
}
