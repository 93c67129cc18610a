use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use mems::spectra::compare_grid;
use mems::states::werner_concurrence_raw;
use mems::{concurrence, mems, werner, ChannelKind, Engine, StateParam, SweepConfig};

use crate::format::{csv_text, gnuplot_script, num, round, Manifest, Sink};
use crate::{Cli, Command, CompareArgs, SweepArgs, VerifyArgs, ZonesArgs, EXIT_DISCREPANCY};

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::CompareStates(a) => compare_states(a, cli.no_manifest),
        Command::Sweep(a) => sweep(a, cli.no_manifest),
        Command::Zones(a) => zones(a, cli.no_manifest),
        Command::VerifySpectra(a) => verify_spectra(a, cli.no_manifest),
    }
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn manifest(command: &str, parameters: BTreeMap<String, String>, off: bool) -> Option<Manifest> {
    (!off).then(|| Manifest::new(command, parameters))
}

/// `n` evenly spaced points on `[a, b]`, endpoints exact.
fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        bail!("--steps must be at least 2 (got {n})");
    }
    Ok((0..n)
        .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect())
}

fn write_plot(
    plot: Option<&Path>,
    csv: Option<&Path>,
    xlabel: &str,
    columns: usize,
    manifest: Option<&Manifest>,
) -> Result<()> {
    if let (Some(script), Some(csv)) = (plot, csv) {
        let body = gnuplot_script(csv, script, xlabel, columns)?;
        Sink { path: Some(script), manifest }.write(&body)?;
    }
    Ok(())
}

fn compare_states(a: &CompareArgs, no_manifest: bool) -> Result<u8> {
    let gammas = linspace(0.0, 1.0, a.steps)?;
    let rows = gammas
        .par_iter()
        .map(|&g| -> Result<Vec<String>> {
            let p = StateParam::new(g)?;
            let c_werner = concurrence(&werner(p)?)?;
            let c_mems = concurrence(&mems(p)?)?;
            Ok(vec![num(g), num(werner_concurrence_raw(g)), num(c_werner), num(c_mems)])
        })
        .collect::<Result<Vec<_>>>()?;
    let m = manifest("compare-states", params([("steps", a.steps.to_string())]), no_manifest);
    let out = a.output.out.as_deref();
    let body = csv_text(&["gamma", "c_werner_raw", "c_werner", "c_mems"], &rows)?;
    Sink { path: out, manifest: m.as_ref() }.write(&body)?;
    write_plot(a.plot.plot_script.as_deref(), out, "gamma", 4, m.as_ref())?;
    Ok(0)
}

fn sweep(a: &SweepArgs, no_manifest: bool) -> Result<u8> {
    let cfg = SweepConfig::new(a.channel, a.gamma)
        .with_range(a.range.min, a.range.max)
        .with_grid_points(a.steps);
    let numeric = mems::sample_curve(&cfg)?;
    let engine = Engine::from(a.engine);
    let closed = match engine {
        Engine::ClosedForm => Some(mems::sample_curve(&cfg.clone().with_engine(engine))?),
        Engine::Numeric => None,
    };
    let rows: Vec<Vec<String>> = numeric
        .samples
        .iter()
        .enumerate()
        .map(|(i, &(s, c))| {
            let mut row = vec![num(s), num(c)];
            if let Some(cf) = &closed {
                row.push(num(cf.samples[i].1));
            }
            row
        })
        .collect();
    let mut header = vec!["strength", "concurrence_numeric"];
    if closed.is_some() {
        header.push("concurrence_closed_form");
    }
    let m = manifest(
        "sweep",
        params([
            ("channel", a.channel.name().to_string()),
            ("gamma", num(a.gamma)),
            ("min", num(a.range.min)),
            ("max", num(a.range.max)),
            ("steps", a.steps.to_string()),
            ("engine", engine.name().to_string()),
        ]),
        no_manifest,
    );
    let out = a.output.out.as_deref();
    Sink { path: out, manifest: m.as_ref() }.write(&csv_text(&header, &rows)?)?;
    let xlabel = if a.channel.is_flip() { "p" } else { "lambda t" };
    write_plot(a.plot.plot_script.as_deref(), out, xlabel, header.len(), m.as_ref())?;
    Ok(0)
}

#[derive(Serialize)]
struct ZoneJson {
    death: f64,
    rebirth: Option<f64>,
    touch: bool,
}

#[derive(Serialize)]
struct ZoneReportJson {
    channel: &'static str,
    gamma: f64,
    zones: Vec<ZoneJson>,
}

fn zones(a: &ZonesArgs, no_manifest: bool) -> Result<u8> {
    let engine = Engine::from(a.engine);
    let mut cfg = SweepConfig::new(a.channel, a.gamma)
        .with_range(a.range.min, a.range.max)
        .with_grid_points(a.steps)
        .with_engine(engine);
    cfg.refine_tol = a.refine_tol;
    cfg.zero_tol = a.zero_tol;
    let report = mems::find_zones(&cfg)?;
    let json = ZoneReportJson {
        channel: report.kind.name(),
        gamma: round(report.gamma),
        zones: report
            .zones
            .iter()
            .map(|z| ZoneJson {
                death: round(z.death),
                rebirth: z.rebirth.map(round),
                touch: z.touch,
            })
            .collect(),
    };
    let m = manifest(
        "zones",
        params([
            ("channel", a.channel.name().to_string()),
            ("gamma", num(a.gamma)),
            ("min", num(a.range.min)),
            ("max", num(a.range.max)),
            ("steps", a.steps.to_string()),
            ("engine", engine.name().to_string()),
            ("refine_tol", num(a.refine_tol)),
            ("zero_tol", num(a.zero_tol)),
        ]),
        no_manifest,
    );
    let mut body = serde_json::to_string_pretty(&json)?;
    body.push('\n');
    Sink { path: a.output.out.as_deref(), manifest: m.as_ref() }.write(&body)?;
    Ok(0)
}

fn verify_spectra(a: &VerifyArgs, no_manifest: bool) -> Result<u8> {
    if !(a.tol > 0.0) {
        bail!("--tol must be positive (got {})", a.tol);
    }
    let kinds: Vec<ChannelKind> = match a.channel {
        Some(k) => vec![k],
        None => ChannelKind::ALL.to_vec(),
    };
    let gammas = linspace(0.0, 1.0, a.steps)?;
    let strengths = linspace(a.range.min, a.range.max, a.steps)?;
    if !(a.range.min < a.range.max) {
        bail!("strength range [{}, {}] is empty", a.range.min, a.range.max);
    }

    let mut rows = Vec::new();
    let mut failing = Vec::new();
    for kind in kinds.iter().copied() {
        let grid = compare_grid(kind, &gammas, &strengths, a.tol)?;
        if !grid.records.is_empty() {
            failing.push(format!(
                "{kind}: {} of {} cells differ by more than {} (max deviation where defined {})",
                grid.records.len(),
                grid.cells,
                num(a.tol),
                num(grid.max_abs_error)
            ));
        }
        for r in &grid.records {
            let sorted = |s: Option<&mems::Spectrum<f64>>| -> Vec<String> {
                match s {
                    Some(s) => s.sorted_desc().iter().map(|&l| num(l)).collect(),
                    None => vec![String::new(); 4],
                }
            };
            let mut row = vec![kind.name().to_string(), num(r.gamma), num(r.strength), num(r.max_abs_error)];
            row.extend(sorted(r.closed_form.as_ref()));
            row.extend(sorted(Some(&r.numeric)));
            row.push(r.formula_error.clone().unwrap_or_default());
            rows.push(row);
        }
    }

    let channels = kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(",");
    let m = manifest(
        "verify-spectra",
        params([
            ("channels", channels),
            ("min", num(a.range.min)),
            ("max", num(a.range.max)),
            ("steps", a.steps.to_string()),
            ("tol", num(a.tol)),
        ]),
        no_manifest,
    );
    let header = [
        "channel",
        "gamma",
        "strength",
        "max_abs_error",
        "closed_form_1",
        "closed_form_2",
        "closed_form_3",
        "closed_form_4",
        "numeric_1",
        "numeric_2",
        "numeric_3",
        "numeric_4",
        "formula_error",
    ];
    Sink { path: a.output.out.as_deref(), manifest: m.as_ref() }.write(&csv_text(&header, &rows)?)?;
    for line in &failing {
        eprintln!("discrepancy: {line}");
    }
    Ok(if failing.is_empty() { 0 } else { EXIT_DISCREPANCY })
}
