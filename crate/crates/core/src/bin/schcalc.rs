use clap::Parser;
use schcalc::cli::{main_with, Cli};

fn main() {
    std::process::exit(main_with(Cli::parse()));
}
