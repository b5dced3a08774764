use clap::Parser;

use spherecap::cli::{self, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let parsed = Cli::parse();
    if let Err(e) = cli::run(parsed, &argv) {
        eprintln!("spherecap: {e}");
        std::process::exit(e.exit_code());
    }
}
