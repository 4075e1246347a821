//! Normalizes a few expressions against the bundled corpus.

use hpt::driver::{cmd_eval, Options};
use hpt::kernel::DEFAULT_STEP_BUDGET;

fn main() {
    let opts = Options { open_corpus: true, step_budget: DEFAULT_STEP_BUDGET };
    for expr in [
        "concat (refl star) (refl star)",
        "EH (refl (refl star)) (refl (refl star))",
        "fun (p : star = star) => p * refl star",
        "star star",
    ] {
        println!("> {expr}");
        print!("{}", cmd_eval(expr, &opts).render(false));
    }
}
