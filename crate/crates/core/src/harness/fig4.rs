//! The four-panel 9j study: three sweeps of the one-small-spin formula, plus
//! the error plot of the first.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Formula, Link, SweepConfig, SweepSpec, SymbolKind};
use super::sweep::{error_plot_script, interior_indices, plot_script, run_sweep, write_csv_file, SweepOutput, SweepRow};
use crate::asym::EdmondsLengths;
use crate::exact::{Pivot, DEFAULT_DIGITS};
use crate::geometry::{Allowedness, DEFAULT_CAUSTIC_EPS};

pub const CORRELATION_A: f64 = 0.99;
pub const POINTWISE_A: f64 = 0.1;
pub const CORRELATION_CD: f64 = 0.95;
/// Allowed points at each end used for the breakdown trend.
pub const EDGE_POINTS: usize = 5;

fn nine_j(spins: [i64; 9], var: &str, from: i64, to: i64, linked: Vec<Link>) -> SweepConfig {
    SweepConfig {
        kind: SymbolKind::NineJ,
        spins: spins.to_vec(),
        sweep: SweepSpec { var: var.into(), from, to, step: 2, linked },
        formula: Formula::Asym9j,
        small: Vec::new(),
        precision: DEFAULT_DIGITS,
        caustic_eps: DEFAULT_CAUSTIC_EPS,
        trim: 0.1,
        pivot: Pivot::J24,
        edmonds_lengths: EdmondsLengths::Half,
        out: None,
    }
}

/// `{430 30 430; 1 60 61; 431 j24 430}` over `j24 = 30..90`.
pub fn panel_a() -> SweepConfig {
    nine_j([860, 60, 860, 2, 120, 122, 862, 0, 860], "j24", 60, 180, vec![])
}

/// `{j1+1/2, 201/2, j1+3; 1, 60, 61; j1+3/2, 227/2, 99/2}` over `j1 = 63..160`.
///
/// Only half-integer `j1` give admissible symbols (the middle column wants a
/// half-integer `j24`, the bottom row an integer one otherwise), and past
/// `j1 = 107.5` the column `(j1+3, 61, 99/2)` stops being a triad.
pub fn panel_c() -> SweepConfig {
    let linked = vec![Link { var: "j12".into(), offset: 5 }, Link { var: "j13".into(), offset: 2 }];
    nine_j([128, 201, 133, 2, 120, 122, 130, 227, 99], "j1", 128, 320, linked)
}

/// `{51/2 53/2 28; 1/2 47/2 24; 25 27 j5}` over `j5 = 4..52`.
pub fn panel_d() -> SweepConfig {
    nine_j([51, 53, 56, 1, 47, 48, 50, 54, 0], "j5", 8, 104, vec![])
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Check {
        Check { name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PanelReport {
    pub panel: String,
    pub config: SweepConfig,
    pub output: SweepOutput,
    pub csv: Option<PathBuf>,
    pub script: Option<PathBuf>,
    pub checks: Vec<Check>,
}

impl PanelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fig4Report {
    pub panels: Vec<PanelReport>,
}

impl Fig4Report {
    pub fn passed(&self) -> bool {
        self.panels.iter().all(PanelReport::passed)
    }

    pub fn panel(&self, name: &str) -> Option<&PanelReport> {
        self.panels.iter().find(|p| p.panel == name)
    }
}

fn least_squares_slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        sxy += (i as f64 - mx) * (v - my);
        sxx += (i as f64 - mx) * (i as f64 - mx);
    }
    sxy / sxx
}

/// Slopes of |error| against distance from each end of the allowed range, over
/// the `k` outermost allowed points. Negative means the error grows toward the edge.
pub fn edge_trend(rows: &[SweepRow], k: usize) -> Option<(f64, f64)> {
    let errs: Vec<f64> = rows.iter().filter(|r| r.flag == Allowedness::Allowed).filter_map(|r| r.abs_err).collect();
    if errs.len() < 2 * k || k < 2 {
        return None;
    }
    let low = least_squares_slope(&errs[..k]);
    let high: Vec<f64> = errs[errs.len() - k..].iter().rev().copied().collect();
    Some((low, least_squares_slope(&high)))
}

fn correlation_check(out: &SweepOutput, min: f64) -> Check {
    let s = &out.summary;
    Check::new(
        "interior correlation",
        s.interior >= 3 && s.correlation >= min,
        format!("r = {:.6} over {} interior points (need >= {min})", s.correlation, s.interior),
    )
}

fn trend_check(out: &SweepOutput) -> Check {
    match edge_trend(&out.rows, EDGE_POINTS) {
        Some((lo, hi)) => Check::new(
            "error grows toward both ends",
            lo < 0.0 && hi < 0.0,
            format!("slope of |err| vs distance from edge: low end {lo:.3e}, high end {hi:.3e}"),
        ),
        None => Check::new("error grows toward both ends", false, "too few allowed points".into()),
    }
}

fn pointwise_check(out: &SweepOutput, frac: f64) -> Check {
    let s = &out.summary;
    let (idx, _) = interior_indices(&out.rows, 0.1);
    let bound = frac * s.max_abs_exact;
    let worst = idx.iter().filter_map(|&i| out.rows[i].abs_err).fold(0.0, f64::max);
    Check::new(
        "pointwise interior error",
        !idx.is_empty() && worst <= bound,
        format!("max |exact - asym| = {worst:.3e}, bound {frac} * max|exact| = {bound:.3e}"),
    )
}

fn emit(dir: Option<&Path>, name: &str, title: &str, xlabel: &str, rows: &[SweepRow]) -> std::io::Result<(Option<PathBuf>, Option<PathBuf>)> {
    let Some(dir) = dir else { return Ok((None, None)) };
    std::fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{name}.csv"));
    write_csv_file(rows, &csv).map_err(std::io::Error::other)?;
    let script = dir.join(format!("{name}.gp"));
    let csv_name = format!("{name}.csv");
    let text = if name == "fig4b" {
        error_plot_script(&csv_name, title, xlabel)
    } else {
        plot_script(&csv_name, title, xlabel)
    };
    std::fs::write(&script, text)?;
    Ok((Some(csv), Some(script)))
}

/// Runs all panels; CSVs and gnuplot scripts go to `out_dir` when given.
pub fn fig4_suite(out_dir: Option<&Path>) -> std::io::Result<Fig4Report> {
    let mut panels = Vec::new();

    let a = panel_a();
    let out_a = run_sweep(&a);
    let (csv, script) = emit(out_dir, "fig4a", "{430 30 430; 1 60 61; 431 j24 430}", "j24", &out_a.rows)?;
    panels.push(PanelReport {
        panel: "a".into(),
        config: a.clone(),
        checks: vec![correlation_check(&out_a, CORRELATION_A)],
        output: out_a.clone(),
        csv,
        script,
    });

    let (csv, script) = emit(out_dir, "fig4b", "|exact - asym| for panel (a)", "j24", &out_a.rows)?;
    panels.push(PanelReport {
        panel: "b".into(),
        config: a,
        checks: vec![pointwise_check(&out_a, POINTWISE_A)],
        output: out_a,
        csv,
        script,
    });

    for (name, cfg, title, xlabel) in [
        ("c", panel_c(), "{j1+1/2, 201/2, j1+3; 1, 60, 61; j1+3/2, 227/2, 99/2}", "j1 + 1/2"),
        ("d", panel_d(), "{51/2 53/2 28; 1/2 47/2 24; 25 27 j5}", "j5"),
    ] {
        let out = run_sweep(&cfg);
        let (csv, script) = emit(out_dir, &format!("fig4{name}"), title, xlabel, &out.rows)?;
        panels.push(PanelReport {
            panel: name.into(),
            config: cfg,
            checks: vec![correlation_check(&out, CORRELATION_CD), trend_check(&out)],
            output: out,
            csv,
            script,
        });
    }
    Ok(Fig4Report { panels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_sign() {
        assert!(least_squares_slope(&[5.0, 4.0, 3.0, 3.5, 1.0]) < 0.0);
        assert!(least_squares_slope(&[1.0, 2.0, 3.0]) > 0.0);
    }

    #[test]
    fn panel_configs_validate() {
        for c in [panel_a(), panel_c(), panel_d()] {
            c.validate().unwrap();
        }
        assert_eq!(panel_c().spins_at(128)[..3], [128, 201, 133]);
        assert!(crate::exact::Symbol9j::from_twice(panel_c().spins_at(128).try_into().unwrap()).is_admissible());
    }
}
