//! CSV tables with a provenance header, and pass/fail checks.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    /// The full file contents: `#` comment lines, then the CSV.
    pub fn render(&self, meta: &Meta) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.extend_from_slice(meta.comment().as_bytes());
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush().map_err(|e| CliError::Io {
            path: self.file_name(),
            source: e,
        })?;
        drop(w);
        Ok(out)
    }
}

/// Provenance carried by every file.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Meta {
    fn comment(&self) -> String {
        format!(
            "# ckl {} command={} config_sha256={} seed={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.config_hash,
            self.seed
        )
    }
}

/// A calibrate-then-track or identity verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Everything a command produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    /// Integrals whose error estimate missed the tolerance.
    pub nonconverged: usize,
    /// Extra files (plot scripts), name and contents.
    pub extras: Vec<(String, String)>,
}

impl Outcome {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn checks_table(&self) -> Table {
        let mut t = Table::new("checks", &["check", "pass", "detail"]);
        for c in &self.checks {
            t.push(vec![c.name.clone(), c.pass.to_string(), c.detail.clone()]);
        }
        t
    }

    /// Writes every table (plus `checks.csv` when there are checks) into
    /// `dir`, returning the paths in order.
    pub fn write(&self, dir: &Path, meta: &Meta) -> Result<Vec<PathBuf>> {
        let io = |p: &Path| {
            let s = p.display().to_string();
            move |e| CliError::Io { path: s, source: e }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let mut paths = Vec::new();
        let checks = (!self.checks.is_empty()).then(|| self.checks_table());
        for t in self.tables.iter().chain(checks.iter()) {
            let p = dir.join(t.file_name());
            std::fs::write(&p, t.render(meta)?).map_err(io(&p))?;
            paths.push(p);
        }
        for (name, body) in &self.extras {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(io(&p))?;
            paths.push(p);
        }
        Ok(paths)
    }
}

/// Shortest round-trip formatting, so identical values give identical text;
/// exponent notation outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn join<T: Display>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// A gnuplot script drawing `value_col` against `n_col` on log-log axes,
/// one curve per distinct `group_col`.
pub fn gnuplot_script(csv: &str, n_col: usize, value_col: usize, group_col: usize, title: &str) -> String {
    format!(
        "# gnuplot script for {csv}\n\
         set datafile separator ','\n\
         set datafile commentschars '#'\n\
         set logscale xy\n\
         set key left top\n\
         set xlabel 'n'\n\
         set title '{title}'\n\
         groups = system(\"grep -v '^#' {csv} | tail -n +2 | cut -d, -f{group_col} | sort -u\")\n\
         plot for [g in groups] '{csv}' skip 2 using (strcol({group_col}) eq g ? ${n_col} : NaN):{value_col} \
         with linespoints title 'delta='.g\n"
    )
}
