mod commands;
mod parse;
mod render;
mod report;

use std::io::{self, BufRead, Read, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use rayon::prelude::*;
use serde_json::Value;

use commands::{Command, Format, JobSpec};
use report::{Failure, EXIT_OK, EXIT_PARSE};

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn tsv(result: &Value) -> String {
    let mut out = String::new();
    if let Some(verts) = result.get("vertices").and_then(Value::as_array) {
        for v in verts {
            let cells: Vec<String> = v.as_array().map(|c| c.iter().map(tsv_cell).collect()).unwrap_or_default();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
    } else if let Some(map) = result.as_object() {
        for (k, v) in map {
            out.push_str(&format!("{k}\t{}\n", tsv_cell(v)));
        }
    } else {
        out.push_str(&tsv_cell(result));
        out.push('\n');
    }
    out
}

/// Output text and exit code of one non-driver job.
fn execute(job: &JobSpec, pretty: bool) -> (String, i32) {
    let outcome = commands::run(&job.command).and_then(|report| {
        let json = report.to_json();
        match job.format {
            Format::Json if pretty => Ok(serde_json::to_string_pretty(&json).expect("serializable") + "\n"),
            Format::Json => Ok(serde_json::to_string(&json).expect("serializable") + "\n"),
            Format::Tsv => Ok(tsv(&report.result)),
            Format::Svg => render::render(&json).map_err(Failure::Parse),
        }
    });
    match outcome {
        Ok(text) => (text, EXIT_OK),
        Err(Failure::Parse(msg)) if pretty => {
            eprintln!("error: {msg}");
            (String::new(), EXIT_PARSE)
        }
        Err(f) => {
            let json = f.to_json();
            let text = if pretty { serde_json::to_string_pretty(&json) } else { serde_json::to_string(&json) };
            (text.expect("serializable") + "\n", f.exit_code())
        }
    }
}

fn batch_line(line: &str) -> (String, i32) {
    let parse_fail = |msg: String| {
        let f = Failure::Parse(msg);
        (serde_json::to_string(&f.to_json()).expect("serializable") + "\n", f.exit_code())
    };
    let args: Vec<String> = match serde_json::from_str::<Value>(line) {
        Ok(Value::Array(items)) => match items.iter().map(|v| v.as_str().map(String::from)).collect() {
            Some(a) => a,
            None => return parse_fail("batch arguments must be strings".into()),
        },
        Ok(Value::Object(map)) => match map.get("args").and_then(Value::as_array) {
            Some(items) => match items.iter().map(|v| v.as_str().map(String::from)).collect() {
                Some(a) => a,
                None => return parse_fail("batch arguments must be strings".into()),
            },
            None => return parse_fail("batch object needs an \"args\" array".into()),
        },
        Ok(_) => return parse_fail("batch line must be an argument array".into()),
        Err(e) => return parse_fail(format!("invalid JSON: {e}")),
    };
    let job = match JobSpec::try_parse_from(std::iter::once("nonarch".to_string()).chain(args)) {
        Ok(job) => job,
        Err(e) => {
            let text = e.to_string();
            return parse_fail(text.trim().trim_start_matches("error: ").lines().next().unwrap_or_default().to_string());
        }
    };
    if matches!(job.command, Command::Render { .. } | Command::Batch) {
        return parse_fail("render and batch are not available inside a batch".into());
    }
    execute(&job, false)
}

fn read_source(path: &Option<std::path::PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn drive(job: JobSpec) -> i32 {
    let mut stdout = io::stdout().lock();
    match &job.command {
        Command::Render { input, output } => {
            let text = match read_source(input) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            let svg = serde_json::from_str::<Value>(&text)
                .map_err(|e| format!("invalid JSON: {e}"))
                .and_then(|v| render::render(&v));
            match svg {
                Ok(svg) => {
                    let written = match output {
                        Some(p) => std::fs::write(p, svg),
                        None => stdout.write_all(svg.as_bytes()),
                    };
                    if let Err(e) = written {
                        eprintln!("error: {e}");
                        return EXIT_PARSE;
                    }
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_PARSE
                }
            }
        }
        Command::Batch => {
            let lines: Vec<String> = match io::stdin().lock().lines().collect() {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            let jobs: Vec<&str> = lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty()).collect();
            let results: Vec<(String, i32)> = jobs.par_iter().map(|l| batch_line(l)).collect();
            for (text, _) in &results {
                let _ = stdout.write_all(text.as_bytes());
            }
            results.iter().map(|r| r.1).max().unwrap_or(EXIT_OK)
        }
        _ => {
            let (text, code) = execute(&job, true);
            let _ = stdout.write_all(text.as_bytes());
            code
        }
    }
}

fn main() -> ExitCode {
    let code = match JobSpec::try_parse() {
        Ok(job) => drive(job),
        Err(e) => {
            let _ = e.print();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            }
        }
    };
    ExitCode::from(code as u8)
}
