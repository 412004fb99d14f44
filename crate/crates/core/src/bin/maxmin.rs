use clap::Parser;
use maxmin_division::cli::{main_with, RunSpec};

fn main() {
    std::process::exit(main_with(RunSpec::parse()));
}
