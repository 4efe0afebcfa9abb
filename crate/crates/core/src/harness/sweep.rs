//! Sweep evaluation, CSV output and summary metrics.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Formula, SweepConfig, SymbolKind};
use crate::asym::{
    asym_15j_four_small, asym_15j_one_small, asym_15j_three_small, asym_15j_two_small, asym_3nj, asym_9j_one_small,
    edmonds_6j, pr_6j, resolve, AsymOptions, AsymValue,
};
use crate::exact::{wigner3nj, wigner6j, wigner9j, Symbol3nj, Symbol9j};
use crate::geometry::{Allowedness, Tetrahedron};
use crate::spin::HalfInt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_twice: i64,
    pub exact: f64,
    pub asym: Option<f64>,
    pub abs_err: Option<f64>,
    /// Signed: negative when the Cayley-Menger determinant is.
    pub volumes: Vec<f64>,
    pub flag: Allowedness,
    /// ω case of each sign configuration, e.g. `++:II`.
    pub sign_cases: Vec<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub allowed: usize,
    pub interior: usize,
    /// allowed sweep values bounding the interior, inclusive
    pub interior_range: Option<(f64, f64)>,
    pub max_abs_err: f64,
    pub rms_abs_err: f64,
    pub max_abs_exact: f64,
    pub rms_exact: f64,
    /// `rms_abs_err / rms_exact`
    pub rel_rms: f64,
    pub correlation: f64,
    pub near_caustic_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: Summary,
}

impl SweepOutput {
    /// Rows where either evaluation failed.
    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn halves(t: &[i64]) -> Vec<HalfInt> {
    t.iter().map(|&x| HalfInt::from_twice(x)).collect()
}

fn six(t: &[i64]) -> [HalfInt; 6] {
    let h = halves(t);
    [h[0], h[1], h[2], h[3], h[4], h[5]]
}

fn nine(t: &[i64]) -> Symbol9j {
    Symbol9j::from_twice([t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8]])
}

fn chain(t: &[i64]) -> Result<Symbol3nj, String> {
    let n = t.len() / 3;
    Symbol3nj::from_twice(&t[..n], &t[n..2 * n], &t[2 * n..]).map_err(|e| e.to_string())
}

/// Whether the exact symbol can be nonzero at all.
fn admissible(kind: SymbolKind, t: &[i64]) -> bool {
    match kind {
        SymbolKind::SixJ => crate::exact::six_j_admissible(six(t)),
        SymbolKind::NineJ => nine(t).is_admissible(),
        SymbolKind::FifteenJ | SymbolKind::ThreeNJ => chain(t).map(|s| s.is_admissible()).unwrap_or(false),
    }
}

/// Large-spin tetrahedra the formula rests on, read off the spins directly.
pub fn reference_tetrahedra(cfg: &SweepConfig, t: &[i64]) -> Vec<[HalfInt; 6]> {
    match cfg.kind {
        SymbolKind::SixJ => vec![six(t)],
        SymbolKind::NineJ => {
            let [j1, j2, j12, _, _, j34, _, j24, j5] = nine(t).entries();
            vec![[j1, j2, j12, j34, j5, j24]]
        }
        SymbolKind::FifteenJ | SymbolKind::ThreeNJ => {
            if cfg.formula == Formula::ExactOnly && cfg.small.is_empty() {
                return Vec::new();
            }
            match chain(t).ok().and_then(|s| resolve(&s, &cfg.marking()).ok()) {
                Some(r) => r.p.iter().map(|&p| r.tet_spins(p)).collect(),
                None => Vec::new(),
            }
        }
    }
}

fn signed_volume(det: f64) -> f64 {
    det.signum() * (det.abs() / 288.0).sqrt()
}

fn worst(flags: impl IntoIterator<Item = Allowedness>) -> Allowedness {
    let mut w = Allowedness::Allowed;
    for f in flags {
        match f {
            Allowedness::Forbidden => return f,
            Allowedness::NearCaustic => w = f,
            Allowedness::Allowed => {}
        }
    }
    w
}

fn exact_value(cfg: &SweepConfig, t: &[i64]) -> Result<f64, String> {
    Ok(match cfg.kind {
        SymbolKind::SixJ => {
            let [a, b, c, d, e, f] = six(t);
            wigner6j(a, b, c, d, e, f).to_f64()
        }
        SymbolKind::NineJ => wigner9j(&nine(t), cfg.pivot, cfg.precision).value.to_f64(),
        SymbolKind::FifteenJ | SymbolKind::ThreeNJ => {
            wigner3nj(&chain(t)?, cfg.precision).map_err(|e| e.to_string())?.to_f64()
        }
    })
}

fn asym_value(cfg: &SweepConfig, t: &[i64]) -> Result<Option<AsymValue>, String> {
    let opts = AsymOptions {
        caustic_eps: cfg.caustic_eps,
        edmonds_lengths: cfg.edmonds_lengths,
        ..AsymOptions::default()
    };
    let e = |r: Result<AsymValue, crate::asym::AsymError>| r.map(Some).map_err(|e| e.to_string());
    match cfg.formula {
        Formula::ExactOnly => Ok(None),
        Formula::PonzanoRegge => e(pr_6j(six(t), &opts)),
        Formula::Edmonds => {
            // {a b c; b+m a+n f} with f small
            let [a, b, c, d, ee, f] = six(t);
            let v = edmonds_6j(a, b, c, d - b, ee - a, f, cfg.edmonds_lengths).map_err(|e| e.to_string())?;
            Ok(Some(AsymValue { value: v, diagnostics: Default::default() }))
        }
        Formula::Asym9j => e(asym_9j_one_small(&nine(t), &opts)),
        Formula::Asym3nj => e(asym_3nj(&chain(t)?, &cfg.marking(), &opts)),
        Formula::FifteenOne => e(asym_15j_one_small(&chain(t)?, &opts)),
        Formula::FifteenTwo => e(asym_15j_two_small(&chain(t)?, &opts)),
        Formula::FifteenThree => e(asym_15j_three_small(&chain(t)?, &opts)),
        Formula::FifteenFour => e(asym_15j_four_small(&chain(t)?, &opts)),
    }
}

fn sigma_label(sigma: &[i8]) -> String {
    sigma.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

fn eval_row(cfg: &SweepConfig, x: i64) -> SweepRow {
    let t = cfg.spins_at(x);
    let tets: Vec<Tetrahedron> = reference_tetrahedra(cfg, &t).into_iter().map(Tetrahedron::from_spins).collect();
    let volumes = tets.iter().map(|tet| signed_volume(tet.cayley_menger())).collect();
    let flag = worst(tets.iter().map(|tet| tet.classify(cfg.caustic_eps)));
    let mut row = SweepRow {
        sweep_twice: x,
        exact: f64::NAN,
        asym: None,
        abs_err: None,
        volumes,
        flag,
        sign_cases: Vec::new(),
        error: None,
    };
    match exact_value(cfg, &t) {
        Ok(v) => row.exact = v,
        Err(e) => row.error = Some(format!("exact: {e}")),
    }
    match asym_value(cfg, &t) {
        Ok(Some(a)) => {
            row.asym = Some(a.value);
            row.sign_cases = a
                .diagnostics
                .sign_configs
                .iter()
                .map(|s| format!("{}:{:?}", sigma_label(&s.config.sigma), s.config.case))
                .collect();
        }
        Ok(None) => {}
        Err(e) if row.error.is_none() => row.error = Some(e),
        Err(_) => {}
    }
    if let Some(a) = row.asym {
        if row.exact.is_finite() {
            row.abs_err = Some((row.exact - a).abs());
        }
    }
    row
}

/// Evaluates every admissible sweep value, in parallel, keeping sweep order.
pub fn run_sweep(cfg: &SweepConfig) -> SweepOutput {
    let xs: Vec<i64> = cfg.sweep_values().into_iter().filter(|&x| admissible(cfg.kind, &cfg.spins_at(x))).collect();
    let rows: Vec<SweepRow> = xs.par_iter().map(|&x| eval_row(cfg, x)).collect();
    let summary = summarize(&rows, cfg.trim);
    SweepOutput { rows, summary }
}

/// Indices of allowed rows inside the trimmed allowed range.
pub fn interior_indices(rows: &[SweepRow], trim: f64) -> (Vec<usize>, Option<(f64, f64)>) {
    let allowed: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].flag == Allowedness::Allowed).collect();
    let (Some(&first), Some(&last)) = (allowed.first(), allowed.last()) else {
        return (Vec::new(), None);
    };
    let lo = rows[first].sweep_twice as f64;
    let hi = rows[last].sweep_twice as f64;
    let (a, b) = (lo + trim * (hi - lo), hi - trim * (hi - lo));
    let idx = allowed
        .into_iter()
        .filter(|&i| {
            let x = rows[i].sweep_twice as f64;
            x >= a && x <= b && rows[i].abs_err.is_some()
        })
        .collect();
    (idx, Some((a, b)))
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return f64::NAN;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Metrics over the interior; sequential so the result does not depend on threading.
pub fn summarize(rows: &[SweepRow], trim: f64) -> Summary {
    let (idx, interior_range) = interior_indices(rows, trim);
    let allowed = rows.iter().filter(|r| r.flag == Allowedness::Allowed).count();
    let near = rows.iter().filter(|r| r.flag == Allowedness::NearCaustic).count();
    let mut s = Summary {
        rows: rows.len(),
        allowed,
        interior: idx.len(),
        interior_range,
        near_caustic_fraction: if rows.is_empty() { 0.0 } else { near as f64 / rows.len() as f64 },
        correlation: f64::NAN,
        rel_rms: f64::NAN,
        ..Summary::default()
    };
    if idx.is_empty() {
        return s;
    }
    let ex: Vec<f64> = idx.iter().map(|&i| rows[i].exact).collect();
    let asy: Vec<f64> = idx.iter().map(|&i| rows[i].asym.unwrap_or(f64::NAN)).collect();
    let err: Vec<f64> = idx.iter().map(|&i| rows[i].abs_err.unwrap_or(f64::NAN)).collect();
    let n = idx.len() as f64;
    s.max_abs_err = err.iter().fold(0.0, |m, &e| m.max(e));
    s.rms_abs_err = (err.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    s.max_abs_exact = ex.iter().fold(0.0, |m, &e| m.max(e.abs()));
    s.rms_exact = (ex.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    s.rel_rms = s.rms_abs_err / s.rms_exact;
    s.correlation = pearson(&ex, &asy);
    s
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// `sweep_twice,exact,asym,abs_err,vol_1..vol_P,flag`; empty cells for missing values.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let p = rows.iter().map(|r| r.volumes.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sweep_twice".to_string(), "exact".into(), "asym".into(), "abs_err".into()];
    header.extend((1..=p).map(|i| format!("vol_{i}")));
    header.push("flag".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.sweep_twice.to_string(), fmt_num(r.exact), fmt_opt(r.asym), fmt_opt(r.abs_err)];
        rec.extend((0..p).map(|i| fmt_opt(r.volumes.get(i).copied())));
        rec.push(r.flag.as_str().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[SweepRow], path: &Path) -> csv::Result<()> {
    write_csv(rows, std::fs::File::create(path)?)
}

/// Rows back from a CSV written by [`write_csv`]. Diagnostics not in the
/// schema come back empty.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>, String> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    let p = headers.iter().filter(|h| h.starts_with("vol_")).count();
    let num = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>().map(Some).map_err(|e| format!("`{s}`: {e}"))
        }
    };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let flag = match &rec[4 + p] {
            "allowed" => Allowedness::Allowed,
            "near_caustic" => Allowedness::NearCaustic,
            "forbidden" => Allowedness::Forbidden,
            o => return Err(format!("unknown flag `{o}`")),
        };
        let mut volumes = Vec::with_capacity(p);
        for i in 0..p {
            if let Some(v) = num(&rec[4 + i])? {
                volumes.push(v);
            }
        }
        rows.push(SweepRow {
            sweep_twice: rec[0].parse().map_err(|e| format!("sweep_twice: {e}"))?,
            exact: num(&rec[1])?.unwrap_or(f64::NAN),
            asym: num(&rec[2])?,
            abs_err: num(&rec[3])?,
            volumes,
            flag,
            sign_cases: Vec::new(),
            error: None,
        });
    }
    Ok(rows)
}

/// Gnuplot script: exact as points, asymptotic as a line, error on a second panel.
pub fn plot_script(csv_name: &str, title: &str, xlabel: &str) -> String {
    format!(
        "# exact (points) against the asymptotic formula (line)\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set terminal pngcairo size 900,900\n\
         set output '{stem}.png'\n\
         set multiplot layout 2,1 title '{title}'\n\
         set xlabel '{xlabel}'\n\
         plot '{csv_name}' using ($1/2.0):2 with points pt 7 ps 0.6 title 'exact', \\\n\
         \x20    '' using ($1/2.0):3 with lines lw 1.5 title 'asymptotic'\n\
         set ylabel '|exact - asym|'\n\
         plot '{csv_name}' using ($1/2.0):4 with linespoints pt 7 ps 0.4 title 'abs. error'\n\
         unset multiplot\n",
        stem = csv_name.trim_end_matches(".csv"),
    )
}

/// Gnuplot script for the absolute error alone.
pub fn error_plot_script(csv_name: &str, title: &str, xlabel: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set terminal pngcairo size 900,450\n\
         set output '{stem}.png'\n\
         set title '{title}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '|exact - asym|'\n\
         plot '{csv_name}' using ($1/2.0):4 with linespoints pt 7 ps 0.4 title 'abs. error'\n",
        stem = csv_name.trim_end_matches(".csv"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(x: i64, exact: f64, asym: f64, flag: Allowedness) -> SweepRow {
        SweepRow {
            sweep_twice: x,
            exact,
            asym: Some(asym),
            abs_err: Some((exact - asym).abs()),
            volumes: vec![1.0],
            flag,
            sign_cases: vec![],
            error: None,
        }
    }

    #[test]
    fn interior_trims_allowed_range() {
        let rows: Vec<SweepRow> = (0..=20)
            .map(|i| {
                let flag = if i < 2 { Allowedness::Forbidden } else { Allowedness::Allowed };
                row(2 * i, i as f64, i as f64 + 0.1, flag)
            })
            .collect();
        // allowed 4..=40, width 36, trim 0.25 -> [13, 31]
        let (idx, range) = interior_indices(&rows, 0.25);
        assert_eq!(range, Some((13.0, 31.0)));
        assert_eq!(idx.first().map(|&i| rows[i].sweep_twice), Some(14));
        assert_eq!(idx.last().map(|&i| rows[i].sweep_twice), Some(30));
        let s = summarize(&rows, 0.25);
        assert!((s.correlation - 1.0).abs() < 1e-12);
        assert!((s.max_abs_err - 0.1).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows = vec![row(4, 1.0 / 3.0, -2.0e-7, Allowedness::Allowed), row(6, 0.1, 0.2, Allowedness::NearCaustic)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sweep_twice,exact,asym,abs_err,vol_1,flag\n"));
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back, rows);
    }
}
