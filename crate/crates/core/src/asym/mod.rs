//! Semiclassical formulas: Ponzano-Regge, Edmonds, the 9j with one small
//! spin, the general 3nj formula and its 15j special cases.

mod fifteen_j;
mod general;
mod nine_j;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fifteen_j::{asym_15j_four_small, asym_15j_one_small, asym_15j_three_small, asym_15j_two_small};
pub use general::{asym_3nj, resolve, validate_hypotheses, Resolved, Slot, SmallSpinMarking, Violation};
pub use nine_j::asym_9j_one_small;

use crate::geometry::{triangle_angle, Allowedness, GeometryError, Tetrahedron, DEFAULT_CAUSTIC_EPS};
use crate::spin::{sign_pow, HalfInt};
use crate::wigner_d::{d, DError};

/// Ratio (small spin)/(median large spin) above which a warning is attached.
pub const SMALL_RATIO_WARN: f64 = 0.15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    DMatrix(#[from] DError),
    #[error("hypotheses violated: {}", format_violations(.0))]
    HypothesisViolation(Vec<Violation>),
    #[error("gluing angle {theta} for signs {sigma:?} leaves [0, π]; use the general 3nj formula")]
    CaseAngleOutOfRange { sigma: Vec<i8>, theta: f64 },
    #[error("phase exponent is not an integer: {0}")]
    Parity(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Length convention inside Edmonds' triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdmondsLengths {
    /// `ℓ = j + 1/2`
    #[default]
    Half,
    /// `ℓ = √(j(j+1))`
    Sqrt,
}

impl EdmondsLengths {
    fn length(self, j: HalfInt) -> f64 {
        match self {
            EdmondsLengths::Half => j.length(),
            EdmondsLengths::Sqrt => {
                let v = j.value();
                (v * (v + 1.0)).sqrt()
            }
        }
    }
}

impl FromStr for EdmondsLengths {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "half" => Ok(EdmondsLengths::Half),
            "sqrt" => Ok(EdmondsLengths::Sqrt),
            o => Err(format!("unknown length convention `{o}` (half|sqrt)")),
        }
    }
}

impl fmt::Display for EdmondsLengths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdmondsLengths::Half => "half",
            EdmondsLengths::Sqrt => "sqrt",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymOptions {
    pub caustic_eps: f64,
    pub small_ratio_warn: f64,
    pub edmonds_lengths: EdmondsLengths,
}

impl Default for AsymOptions {
    fn default() -> Self {
        AsymOptions {
            caustic_eps: DEFAULT_CAUSTIC_EPS,
            small_ratio_warn: SMALL_RATIO_WARN,
            edmonds_lengths: EdmondsLengths::Half,
        }
    }
}

/// Geometry of one large-spin tetrahedron as used by a formula.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TetReport {
    pub label: String,
    pub edges: [f64; 6],
    pub cayley_menger: f64,
    pub volume: f64,
    pub regge_action: f64,
    pub dihedrals: [f64; 6],
    pub flag: Allowedness,
}

/// One sign configuration and what it contributed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub config: crate::geometry::SignConfig,
    pub theta_l1: f64,
    pub phi_mid: f64,
    pub theta_ln: f64,
    pub f: f64,
    /// volume of the secondary tetrahedron glued at `theta_k1`
    pub sigma_volume: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AsymDiagnostics {
    pub tetrahedra: Vec<TetReport>,
    pub angles: BTreeMap<String, f64>,
    pub sign_configs: Vec<SignReport>,
    pub warnings: Vec<String>,
}

impl AsymDiagnostics {
    pub fn volumes(&self) -> Vec<f64> {
        self.tetrahedra.iter().map(|t| t.volume).collect()
    }

    /// Worst flag over the reported tetrahedra.
    pub fn flag(&self) -> Allowedness {
        let mut worst = Allowedness::Allowed;
        for t in &self.tetrahedra {
            match t.flag {
                Allowedness::Forbidden => return Allowedness::Forbidden,
                Allowedness::NearCaustic => worst = Allowedness::NearCaustic,
                Allowedness::Allowed => {}
            }
        }
        worst
    }

    pub(crate) fn angle(&mut self, name: &str, value: f64) {
        self.angles.insert(name.to_string(), value);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymValue {
    pub value: f64,
    pub diagnostics: AsymDiagnostics,
}

/// Measures a large-spin tetrahedron; fails unless its volume is strictly positive.
pub(crate) fn tet_report(label: &str, spins: [HalfInt; 6], eps: f64) -> Result<TetReport, AsymError> {
    let t = Tetrahedron::from_spins(spins);
    let det = t.cayley_menger();
    let flag = t.classify(eps);
    if flag == Allowedness::Forbidden || det <= 0.0 {
        return Err(GeometryError::NotClassicallyAllowed { det }.into());
    }
    let dihedrals = t.dihedrals()?;
    let regge_action = t.edges.iter().zip(dihedrals).map(|(l, th)| l * (PI - th)).sum();
    Ok(TetReport {
        label: label.to_string(),
        edges: t.edges,
        cayley_menger: det,
        volume: (det / 288.0).sqrt(),
        regge_action,
        dihedrals,
        flag,
    })
}

pub(crate) fn phase(twice_exponent: i64, what: &str) -> Result<f64, AsymError> {
    sign_pow(twice_exponent).map(f64::from).ok_or_else(|| AsymError::Parity(what.to_string()))
}

pub(crate) fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub(crate) fn check_small_ratio(diag: &mut AsymDiagnostics, small: &[HalfInt], large: &[HalfInt], limit: f64) {
    let med = median(large.iter().map(|h| h.value()).collect());
    for s in small {
        if med > 0.0 && s.value() / med > limit {
            diag.warnings.push(format!(
                "small spin {s} is {:.3} of the median large spin {med}; above the {limit} guideline",
                s.value() / med
            ));
        }
    }
}

/// Ponzano-Regge: `cos(S_R + π/4)/√(12πV)` for `{a b c; d e f}`.
pub fn pr_6j(spins: [HalfInt; 6], opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let rep = tet_report("tet", spins, opts.caustic_eps)?;
    let value = (rep.regge_action + PI / 4.0).cos() / (12.0 * PI * rep.volume).sqrt();
    let mut diagnostics = AsymDiagnostics::default();
    diagnostics.tetrahedra.push(rep);
    Ok(AsymValue { value, diagnostics })
}

/// Edmonds: `{a b c; b+m a+n f} ≈ (-1)^{a+b+c+f+m} d^f_{mn}(φ_{ab}) / √(d_a d_b)`.
pub fn edmonds_6j(
    a: HalfInt,
    b: HalfInt,
    c: HalfInt,
    m: HalfInt,
    n: HalfInt,
    f: HalfInt,
    lengths: EdmondsLengths,
) -> Result<f64, AsymError> {
    let phi = triangle_angle(lengths.length(a), lengths.length(b), lengths.length(c))?;
    let sign = phase((a + b + c + f + m).twice(), "a+b+c+f+m")?;
    let dm = d(f, m, n, phi)?;
    Ok(sign * dm / ((a.dim() * b.dim()) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn edmonds_equilateral() {
        let v = edmonds_6j(h(200), h(200), h(200), h(0), h(0), h(2), EdmondsLengths::Half).unwrap();
        assert!((v + 0.5 / 201.0).abs() < 1e-15, "{v}");
    }

    #[test]
    fn edmonds_zero_spin_matches_closed_form() {
        // {a b c; b a 0} = (-1)^{a+b+c}/√(d_a d_b), here a+b+c = 75
        let v = edmonds_6j(h(60), h(50), h(40), h(0), h(0), h(0), EdmondsLengths::Half).unwrap();
        assert!((v + 1.0 / (61.0f64 * 51.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pr_rejects_flat() {
        // 1 + 1 = 2 on every face of a degenerate configuration
        let r = pr_6j([h(0), h(0), h(0), h(0), h(0), h(0)], &AsymOptions::default());
        assert!(r.is_ok());
        let flat = pr_6j([h(100), h(100), h(200), h(100), h(100), h(200)], &AsymOptions::default());
        assert!(matches!(flat, Err(AsymError::Geometry(GeometryError::NotClassicallyAllowed { .. }))));
    }
}
