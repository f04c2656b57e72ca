//! Batch front end for the `esbox` library: builds a box, runs the
//! structural checks or the full communication analysis, and renders the
//! result as a text table, JSON or CSV.
//!
//! ```no_run
//! use esbox_cli::{report, BoxSelector, RunConfig};
//!
//! let analysis = report(&RunConfig::named(BoxSelector::TwirledTeleport)).unwrap();
//! for claim in &analysis.doc.claims {
//!     println!("{} {} {}", claim.id, claim.status, claim.value);
//! }
//! ```

mod config;
mod pipeline;
mod render;

pub use config::{BoxSelector, BoxSource, Cli, Command, Format, RunArgs, RunConfig, DEFAULT_SEED};
pub use pipeline::{
    load_box, report, sig12, verify, Analysis, Claim, Exit, ReportDoc, RunError, Status,
    VerifyDoc, VerifyRow,
};
pub use render::{render_report, render_verify};

/// Runs one command and writes its output. Returns the exit status.
pub fn run(command: &Command) -> Exit {
    let (args, is_report) = match command {
        Command::Verify(a) => (a, false),
        Command::Report(a) => (a, true),
    };
    let config = RunConfig::from(args.clone());
    let rendered = if is_report {
        report(&config).map(|a| (render_report(&a.doc, config.format), a.doc.exit()))
    } else {
        verify(&config).map(|d| (render_verify(&d, config.format), d.exit()))
    };
    let (text, exit) = match rendered {
        Ok(r) => r,
        Err(e) => {
            eprintln!("esbox: {e}");
            return match e {
                RunError::Input(_) => Exit::InputError,
                RunError::Analysis(_) => Exit::Fail,
            };
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("esbox: {}: {e}", path.display());
                return Exit::InputError;
            }
        }
        None => print!("{text}"),
    }
    exit
}
