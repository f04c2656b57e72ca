use std::fmt::Write;

use crate::config::Format;
use crate::pipeline::{Exit, ReportDoc, VerifyDoc};

pub fn render_report(doc: &ReportDoc, format: Format) -> String {
    match format {
        Format::Json => json(doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &doc.claims {
                w.serialize(c).expect("claims serialize to csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).unwrap()
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "box: {}  seed: {}", doc.box_id, doc.seed).unwrap();
            writeln!(
                s,
                "{:<7} {:<12} {:>20} {:>20} {:>20}  label",
                "id", "status", "value", "bound", "residual"
            )
            .unwrap();
            for c in &doc.claims {
                writeln!(
                    s,
                    "{:<7} {:<12} {:>20} {:>20} {:>20}  {}",
                    c.id,
                    c.status.to_string(),
                    num(c.value),
                    num(c.bound),
                    num(c.residual),
                    c.label
                )
                .unwrap();
            }
            writeln!(s, "result: {}", exit_word(doc.exit())).unwrap();
            s
        }
    }
}

pub fn render_verify(doc: &VerifyDoc, format: Format) -> String {
    match format {
        Format::Json => json(doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &doc.checks {
                w.serialize(c).expect("checks serialize to csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).unwrap()
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "box: {}  seed: {}", doc.box_id, doc.seed).unwrap();
            writeln!(s, "{:<16} {:<6} {:>20} {:>12}", "check", "status", "residual", "threshold").unwrap();
            for c in &doc.checks {
                let status = if c.passed { "pass" } else { "fail" };
                writeln!(s, "{:<16} {:<6} {:>20} {:>12}", c.check, status, num(c.residual), num(c.threshold))
                    .unwrap();
            }
            writeln!(s, "result: {}", exit_word(doc.exit())).unwrap();
            s
        }
    }
}

/// Plain decimals for moderate magnitudes, exponent form otherwise.
fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize to json");
    s.push('\n');
    s
}

fn exit_word(exit: Exit) -> &'static str {
    match exit {
        Exit::Pass => "pass",
        Exit::Fail => "fail",
        Exit::InputError => "input error",
        Exit::Inconclusive => "inconclusive",
    }
}
