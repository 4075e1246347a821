//! Checks a small development from a string and prints the report.

use hpt::driver::check_sources;
use hpt::session::Session;

const SOURCE: &str = "\
axiom A : Type
axiom a : A

def id {X : Type} (x : X) : X := x
def loop : a = a := refl (id a)

#check loop
#assert defeq id (id a) ~ a : A
def broken : a = a := refl loop
";

fn main() {
    let mut session = Session::new();
    let report = check_sources(&mut session, &[("demo.hpt".to_string(), SOURCE.to_string())]);
    print!("{}", report.render(false));
    println!("{}", report.to_json());
}
