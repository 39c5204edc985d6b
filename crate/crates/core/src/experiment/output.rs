use std::fs;
use std::path::{Component, Path, PathBuf};

use super::{BetaProfile, SweepRecord};
use crate::Result;

pub const CSV_HEADER: [&str; 7] = [
    "snr_db",
    "method",
    "mean_beta",
    "mean_sr",
    "sr_std_error",
    "mean_iterations",
    "trials",
];
pub const PROFILE_CSV_HEADER: [&str; 5] = ["snr_db", "beta", "mean_sr", "sr_std_error", "trials"];

/// Writes sweep records, one row each, in the order given.
///
/// Floats use the shortest representation that round-trips.
pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.snr_db.to_string(),
            r.method.clone(),
            r.mean_beta.to_string(),
            r.mean_sr.to_string(),
            r.sr_std_error.to_string(),
            r.mean_iterations.to_string(),
            r.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile_csv(profiles: &[BetaProfile], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PROFILE_CSV_HEADER)?;
    for p in profiles {
        for k in 0..p.betas.len() {
            w.write_record([
                p.snr_db.to_string(),
                p.betas[k].to_string(),
                p.mean_sr[k].to_string(),
                p.sr_std_error[k].to_string(),
                p.trials.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `target` expressed relative to directory `base`, with `/` separators.
fn relative_to(base: &Path, target: &Path) -> Result<String> {
    let base = std::path::absolute(base)?;
    let target = std::path::absolute(target)?;
    let b: Vec<Component> = base.components().collect();
    let t: Vec<Component> = target.components().collect();
    let common = b.iter().zip(&t).take_while(|(x, y)| x == y).count();
    let mut parts: Vec<String> = vec!["..".to_string(); b.len() - common];
    parts.extend(t[common..].iter().map(|c| c.as_os_str().to_string_lossy().into_owned()));
    Ok(parts.join("/"))
}

fn py_str(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Writes a standalone matplotlib script that plots mean secrecy rate versus
/// SNR from the CSV at `csv_path`, one series per method in `records`.
///
/// The CSV is referenced relative to the script's own directory.
pub fn emit_plot_script(records: &[SweepRecord], csv_path: &Path, script_path: &Path) -> Result<()> {
    let script_dir = script_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let rel = relative_to(&script_dir, csv_path)?;

    let mut series: Vec<&str> = Vec::new();
    for r in records {
        if !series.contains(&r.method.as_str()) {
            series.push(&r.method);
        }
    }
    let series_block = if series.is_empty() {
        "SERIES = []\n".to_string()
    } else {
        let mut s = String::from("SERIES = [\n");
        for name in &series {
            s.push_str(&format!("    {},\n", py_str(name)));
        }
        s.push_str("]\n");
        s
    };

    let script = format!(
        r#"#!/usr/bin/env python3
"""Average secrecy rate versus SNR, one line per power-allocation method."""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV_PATH = os.path.join(HERE, {rel})
{series_block}

def load():
    rows = {{name: [] for name in SERIES}}
    with open(CSV_PATH, newline="") as f:
        for row in csv.DictReader(f):
            if row["method"] in rows:
                rows[row["method"]].append((float(row["snr_db"]), float(row["mean_sr"])))
    return rows


def main():
    rows = load()
    fig, ax = plt.subplots()
    for name in SERIES:
        pts = sorted(rows[name])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=name)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("Average secrecy rate (bits/channel use)")
    ax.grid(True)
    if SERIES:
        ax.legend()
    out = os.path.splitext(CSV_PATH)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
"#,
        rel = py_str(&rel),
    );
    fs::write(script_path, script)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths() {
        assert_eq!(
            relative_to(Path::new("/a/b"), Path::new("/a/b/c.csv")).unwrap(),
            "c.csv"
        );
        assert_eq!(
            relative_to(Path::new("/a/b"), Path::new("/a/d/c.csv")).unwrap(),
            "../d/c.csv"
        );
    }

    #[test]
    fn python_string_escaping() {
        assert_eq!(py_str(r#"a"b\c"#), r#""a\"b\\c""#);
    }
}
