//! Number formatting and output framing shared by every subcommand.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Component, Path, PathBuf};

use anyhow::{Context, Result};

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Shortest decimal form of `x` rounded to nine significant digits.
/// Plain notation for exponents in `[-5, 9)`, scientific otherwise.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` rounded to nine significant digits, for serializers that print the
/// shortest round-trip form.
pub fn round(x: f64) -> f64 {
    if x.is_finite() {
        num(x).parse().expect("formatted number parses")
    } else {
        x
    }
}

/// Provenance written as `#` comment lines at the top of every output file.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(command: &str, parameters: BTreeMap<String, String>) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            tool_version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn header(&self) -> String {
        let params = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        format!(
            "# command: {}\n# parameters: {}\n# tool_version: {}\n# timestamp: {}\n",
            self.command, params, self.tool_version, self.timestamp
        )
    }
}

/// Destination of one output document; `manifest` is `None` under
/// `--no-manifest`.
pub struct Sink<'a> {
    pub path: Option<&'a Path>,
    pub manifest: Option<&'a Manifest>,
}

impl Sink<'_> {
    pub fn write(&self, body: &str) -> Result<()> {
        let mut text = self.manifest.map(Manifest::header).unwrap_or_default();
        text.push_str(body);
        match self.path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

/// CSV text from a header and rows of already-formatted fields.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Gnuplot script plotting columns `2..=columns` of `csv` against column 1.
pub fn gnuplot_script(csv: &Path, script: &Path, xlabel: &str, columns: usize) -> Result<String> {
    let base = script
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let rel = relative_path(csv, base)?;
    let rel = rel.to_string_lossy().replace('\'', "''");
    let curves = (2..=columns)
        .map(|c| {
            let file = if c == 2 { format!("'{rel}'") } else { "''".to_string() };
            format!("{file} using 1:{c} with lines")
        })
        .collect::<Vec<_>>()
        .join(", \\\n     ");
    Ok(format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel '{xlabel}'\n\
         set ylabel 'concurrence'\n\
         set yrange [0:1]\n\
         plot {curves}\n"
    ))
}

/// Path of `target` as seen from directory `base`.
fn relative_path(target: &Path, base: &Path) -> Result<PathBuf> {
    let target = fs::canonicalize(target).with_context(|| format!("resolving {}", target.display()))?;
    let base = fs::canonicalize(base).with_context(|| format!("resolving {}", base.display()))?;
    let t: Vec<Component> = target.components().collect();
    let b: Vec<Component> = base.components().collect();
    let common = t.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let mut rel = PathBuf::new();
    for _ in common..b.len() {
        rel.push("..");
    }
    for c in &t[common..] {
        rel.push(c);
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.2), "0.2");
        assert_eq!(num(1.0 / 3.0), "0.333333333");
        assert_eq!(num(2.0 / 3.0), "0.666666667");
        assert_eq!(num(0.039293457031250006), "0.039293457");
        assert_eq!(num(-0.5), "-0.5");
        assert_eq!(num(123456789.4), "123456789");
        assert_eq!(num(9.9999999999), "10");
        assert_eq!(num(1.2345678912e-7), "1.23456789e-7");
        assert_eq!(num(5e-324), "4.94065646e-324");
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_round_trips() {
        let x = round(0.12064599609375);
        assert_eq!(x, 0.120645996);
        assert_eq!(num(x), "0.120645996");
    }

    #[test]
    fn manifest_lines_are_comments() {
        let mut p = BTreeMap::new();
        p.insert("gamma".into(), "0.2".into());
        let m = Manifest::new("sweep", p);
        let h = m.header();
        assert_eq!(h.lines().count(), 4);
        assert!(h.lines().all(|l| l.starts_with("# ")));
        assert!(h.contains("parameters: gamma=0.2"));
    }

    #[test]
    fn relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let sub = dir.path().join("data");
        fs::create_dir(&sub).unwrap();
        let csv = sub.join("c.csv");
        fs::write(&csv, "").unwrap();
        assert_eq!(relative_path(&csv, &sub).unwrap(), PathBuf::from("c.csv"));
        assert_eq!(relative_path(&csv, dir.path()).unwrap(), PathBuf::from("data/c.csv"));
        let other = dir.path().join("plots");
        fs::create_dir(&other).unwrap();
        assert_eq!(relative_path(&csv, &other).unwrap(), PathBuf::from("../data/c.csv"));
    }
}
