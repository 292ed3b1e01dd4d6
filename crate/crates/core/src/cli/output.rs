//! CSV and JSON rendering of experiment results.

use serde_json::json;

use super::{Cli, Format, Generator, VERSION};
use crate::error::{Error, Result};
use crate::optimize::ExperimentResult;

fn relabel(name: &str, generator: Generator) -> String {
    name.replace("tau", generator.step_label())
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Domain(format!("csv output failed: {e}"))
}

/// Header comment: artifact version, unit labels and the full configuration.
fn comment(cli: &Cli) -> Result<String> {
    let config = serde_json::to_string(cli).map_err(csv_error)?;
    let mut line = format!(
        "# distinct-states {VERSION} generator={} unit={} step={}",
        serde_json::to_value(cli.global.generator)
            .map_err(csv_error)?
            .as_str()
            .unwrap_or("time"),
        cli.global.generator.unit(),
        cli.global.generator.step_label(),
    );
    if cli.global.generator == Generator::Rotation {
        line.push_str(" period=full_turn");
    }
    line.push_str(" config=");
    line.push_str(&config);
    line.push('\n');
    Ok(line)
}

fn to_csv(cli: &Cli, result: &ExperimentResult) -> Result<String> {
    let g = cli.global.generator;
    let mut out = comment(cli)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    if result.columns.is_empty() {
        let mut header = vec!["value".to_string()];
        let mut row = vec![result.value.to_string()];
        if let Some(a) = result.analytic_ref {
            header.push("analytic_ref".into());
            row.push(a.to_string());
        }
        w.write_record(&header).map_err(csv_error)?;
        w.write_record(&row).map_err(csv_error)?;
    } else {
        w.write_record(result.columns.iter().map(|c| relabel(c, g)))
            .map_err(csv_error)?;
        for r in &result.rows {
            w.write_record(r.iter().map(|v| v.to_string())).map_err(csv_error)?;
        }
    }
    let body = w.into_inner().map_err(csv_error)?;
    out.push_str(&String::from_utf8(body).map_err(csv_error)?);
    if !result.columns.is_empty() {
        let mut summary = format!("# value={}", result.value);
        if let Some(a) = result.argmin {
            summary.push_str(&format!(" argmin={a}"));
        }
        if let Some(a) = result.analytic_ref {
            summary.push_str(&format!(" analytic_ref={a}"));
        }
        out.push_str(&summary);
        out.push('\n');
    }
    Ok(out)
}

fn to_json(cli: &Cli, result: &ExperimentResult) -> Result<String> {
    let g = cli.global.generator;
    let mut value = serde_json::to_value(result).map_err(csv_error)?;
    if let Some(cols) = value.get_mut("columns").and_then(|c| c.as_array_mut()) {
        for c in cols {
            if let Some(s) = c.as_str() {
                *c = json!(relabel(s, g));
            }
        }
    }
    value["version"] = json!(VERSION);
    value["config"] = serde_json::to_value(cli).map_err(csv_error)?;
    let mut text = serde_json::to_string_pretty(&value).map_err(csv_error)?;
    text.push('\n');
    Ok(text)
}

/// Output text for `result` in the format chosen on the command line.
pub fn render(cli: &Cli, result: &ExperimentResult) -> Result<String> {
    match cli.global.format {
        Format::Csv => to_csv(cli, result),
        Format::Json => to_json(cli, result),
    }
}
