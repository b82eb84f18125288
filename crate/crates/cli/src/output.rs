use std::fs;
use std::io::{self, Write};

use cyclic_core::format::{sig17, to_json_string};
use serde::Serialize;

use crate::exec::{Cell, Report};
use crate::scenario::{Format, Scenario};
use crate::Failure;

pub fn csv(report: &Report) -> String {
    let mut out = report.columns.join(",");
    out.push('\n');
    for row in &report.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match *c {
                Cell::Count(n) => n.to_string(),
                Cell::Value(x) => sig17(x),
                Cell::Missing => String::new(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Artifact<'a> {
    scenario: &'a Scenario,
    run: &'static str,
    summary: &'a serde_json::Value,
    columns: &'a [String],
    rows: &'a [Vec<Cell>],
}

pub fn json(scenario: &Scenario, report: &Report) -> String {
    let artifact = Artifact {
        scenario,
        run: scenario.run.name(),
        summary: &report.summary,
        columns: &report.columns,
        rows: &report.rows,
    };
    let mut text = to_json_string(&artifact).expect("artifact is serialisable");
    text.push('\n');
    text
}

/// Writes the artifact to the scenario's output path (headlines to stdout) or,
/// without a path, to stdout (headlines to stderr).
pub fn emit(scenario: &Scenario, report: &Report) -> Result<(), Failure> {
    let body = match scenario.output.format {
        Format::Csv => csv(report),
        Format::Json => json(scenario, report),
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match &scenario.output.path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Validation(format!("cannot create {}: {e}", dir.display())))?;
            }
            fs::write(path, body).map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))?;
            let mut stdout = io::stdout().lock();
            for line in &report.lines {
                let _ = writeln!(stdout, "{line}");
            }
            let _ = writeln!(stdout, "wrote {}", path.display());
        }
        None => {
            for line in &report.lines {
                eprintln!("{line}");
            }
            let _ = io::stdout().lock().write_all(body.as_bytes());
        }
    }
    Ok(())
}
