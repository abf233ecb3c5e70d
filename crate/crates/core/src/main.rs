use clap::Parser;
use positive_semigroups::cli::{run, Cli};

fn main() {
    let outcome = run(&Cli::parse());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
