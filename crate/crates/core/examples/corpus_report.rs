//! Checks the bundled corpus and lists every manifest entry.

use hpt::driver::{cmd_corpus, Options};
use hpt::kernel::DEFAULT_STEP_BUDGET;

fn main() {
    let out = cmd_corpus(&Options { open_corpus: false, step_budget: DEFAULT_STEP_BUDGET });
    print!("{}", out.render(false));
    std::process::exit(out.exit_code());
}
