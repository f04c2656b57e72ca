use clap::Parser;
use esbox_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli.command) as i32);
}
