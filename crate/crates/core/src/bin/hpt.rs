use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hpt::driver::{cmd_check, cmd_corpus, cmd_eval, Options};
use hpt::kernel::DEFAULT_STEP_BUDGET;

#[derive(Parser)]
#[command(name = "hpt", version, about = "Type checker for a small intensional type theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Load the bundled corpus before anything else.
    #[arg(long)]
    open_corpus: bool,
    /// Evaluation step budget per declaration.
    #[arg(long, default_value_t = DEFAULT_STEP_BUDGET)]
    step_budget: u64,
    /// Disable colored output.
    #[arg(long)]
    no_color: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check source files.
    Check {
        files: Vec<PathBuf>,
        /// Print a JSON report instead of human-readable diagnostics.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Normalize a closed expression and print it with its type.
    Eval {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check the bundled corpus and report each manifest entry.
    Corpus {
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn options(&self) -> Options {
        Options { open_corpus: self.open_corpus, step_budget: self.step_budget }
    }

    fn color(&self, stream_is_tty: bool) -> bool {
        !self.no_color && stream_is_tty && std::env::var_os("NO_COLOR").is_none()
    }
}

// A closed pipe downstream is not an error worth reporting.
fn emit_out(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { files, json, common } => {
            let report = cmd_check(&files, &common.options());
            if json {
                emit_out(&format!("{}\n", report.to_json()));
            } else {
                emit_out(&report.render(common.color(std::io::stdout().is_terminal())));
            }
            report.exit_code()
        }
        Command::Eval { expr, common } => {
            let out = cmd_eval(&expr, &common.options());
            if out.value.is_some() {
                emit_out(&out.render(false));
                0
            } else {
                let _ = std::io::stderr().write_all(out.render(common.color(std::io::stderr().is_terminal())).as_bytes());
                1
            }
        }
        Command::Corpus { json, common } => {
            let out = cmd_corpus(&common.options());
            if json {
                emit_out(&format!("{}\n", out.report.to_json()));
            } else {
                emit_out(&out.render(common.color(std::io::stdout().is_terminal())));
            }
            out.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
