//! Wigner small-d matrix elements and 2×2 SU(2) helpers.
//!
//! Convention: `d^s_{μν}(β) = ⟨s μ| e^{-iβJ_y} |s ν⟩`, so that for `s = 1/2`
//! `d(β) = [[cos β/2, −sin β/2], [sin β/2, cos β/2]]` (rows μ = +½, −½).

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spin::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DError {
    #[error("invalid projection: s = {s}, μ = {mu}, ν = {nu}")]
    InvalidProjection { s: HalfInt, mu: HalfInt, nu: HalfInt },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DMatrixQuery {
    pub s: HalfInt,
    pub mu: HalfInt,
    pub nu: HalfInt,
    pub beta: f64,
}

impl DMatrixQuery {
    pub fn new(s: HalfInt, mu: HalfInt, nu: HalfInt, beta: f64) -> Self {
        DMatrixQuery { s, mu, nu, beta }
    }

    pub fn is_valid(&self) -> bool {
        let ok = |m: HalfInt| m.abs() <= self.s && (self.s - m).is_integer();
        self.s >= HalfInt::ZERO && ok(self.mu) && ok(self.nu)
    }
}

fn binomial(n: i64, k: i64) -> Integer {
    Integer::from(n as u64).binomial(k as u32)
}

fn factorial(n: i64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// `d^s_{μν}(β)` by the factorial sum with exact binomial weights.
pub fn small_d(q: DMatrixQuery) -> Result<f64, DError> {
    if !q.is_valid() {
        return Err(DError::InvalidProjection { s: q.s, mu: q.mu, nu: q.nu });
    }
    let t = |h: HalfInt| h.twice() / 2;
    let (sp_mu, sm_mu) = (t(q.s + q.mu), t(q.s - q.mu));
    let (sp_nu, sm_nu) = (t(q.s + q.nu), t(q.s - q.nu));
    // √((s+μ)!(s−μ)!/((s+ν)!(s−ν)!)) · C(s+ν, k) · C(s−ν, s−μ−k)
    let ratio = Rational::from((factorial(sp_mu) * factorial(sm_mu), factorial(sp_nu) * factorial(sm_nu)));
    let norm = ratio.to_f64().sqrt();
    let shift = t(q.mu - q.nu);
    let (c, s) = ((q.beta / 2.0).cos(), (q.beta / 2.0).sin());
    let two_s = q.s.twice();
    let k_lo = 0.max(-shift);
    let k_hi = sp_nu.min(sm_mu);
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        let w = (binomial(sp_nu, k) * binomial(sm_nu, sm_mu - k)).to_f64();
        let pc = (two_s - shift - 2 * k) as i32;
        let ps = (2 * k + shift) as i32;
        let sign = if (k + shift).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign * w * c.powi(pc) * s.powi(ps);
    }
    Ok(norm * sum)
}

/// `d^s_{μν}(β)` with loose arguments.
pub fn d(s: HalfInt, mu: HalfInt, nu: HalfInt, beta: f64) -> Result<f64, DError> {
    small_d(DMatrixQuery::new(s, mu, nu, beta))
}

/// `d^s_{μν}(β) = (-1)^{s+μ} d^s_{μ,−ν}(π − β)`: returns the phase and the flipped query.
pub fn d_symmetry_flip(s: HalfInt, mu: HalfInt, nu: HalfInt, beta: f64) -> (i32, DMatrixQuery) {
    let e = (s + mu).twice() / 2;
    let phase = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    (phase, DMatrixQuery::new(s, mu, -nu, PI - beta))
}

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2 {
    pub m: [[Complex64; 2]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    /// β ∈ {0, π}: only `α+γ` or `α−γ` is defined; the other is set to 0 in the returned triple.
    #[error("gimbal lock at beta = {}", .0.beta)]
    GimbalLock(EulerTriple),
}

impl Unitary2 {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Unitary2 { m: [[o, z], [z, o]] }
    }

    /// `e^{-iφσ_y/2}`.
    pub fn rot_y(phi: f64) -> Self {
        let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let r = |x: f64| Complex64::new(x, 0.0);
        Unitary2 { m: [[r(c), r(-s)], [r(s), r(c)]] }
    }

    /// `e^{-iφσ_z/2}`.
    pub fn rot_z(phi: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Unitary2 { m: [[Complex64::from_polar(1.0, -phi / 2.0), z], [z, Complex64::from_polar(1.0, phi / 2.0)]] }
    }

    /// `e^{-iασ_z/2} e^{-iβσ_y/2} e^{-iγσ_z/2}`.
    pub fn from_euler(e: EulerTriple) -> Self {
        Unitary2::rot_z(e.alpha) * Unitary2::rot_y(e.beta) * Unitary2::rot_z(e.gamma)
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Unitary2 { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    /// Max entry distance to `other`.
    pub fn distance(&self, other: &Unitary2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for k in 0..2 {
                d = d.max((self.m[i][k] - other.m[i][k]).norm());
            }
        }
        d
    }

    /// Distance to `other` or `-other`, whichever is smaller.
    pub fn distance_up_to_sign(&self, other: &Unitary2) -> f64 {
        let neg = Unitary2 { m: other.m.map(|row| row.map(|z| -z)) };
        self.distance(other).min(self.distance(&neg))
    }

    pub fn is_special_unitary(&self, tol: f64) -> bool {
        let p = *self * self.adjoint();
        p.distance(&Unitary2::identity()) <= tol && (self.det() - 1.0).norm() <= tol
    }
}

impl std::ops::Mul for Unitary2 {
    type Output = Unitary2;
    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let (a, b) = (&self.m, &rhs.m);
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for k in 0..2 {
                m[i][k] = a[i][0] * b[0][k] + a[i][1] * b[1][k];
            }
        }
        Unitary2 { m }
    }
}

/// `e^{-iφ1σ_y/2} e^{-iωσ_z/2} e^{-iφnσ_y/2}`.
pub fn su2_euler_product(phi1: f64, omega: f64, phin: f64) -> Unitary2 {
    Unitary2::rot_y(phi1) * Unitary2::rot_z(omega) * Unitary2::rot_y(phin)
}

fn wrap_pi(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// z-y-z Euler angles of `u`, with `β ∈ [0, π]` and `α, γ ∈ [−π, π)`.
///
/// Wrapping `γ` may flip the overall sign of the reconstructed matrix.
pub fn su2_extract_euler(u: &Unitary2) -> Result<EulerTriple, Su2Error> {
    let (u00, u10) = (u.m[0][0], u.m[1][0]);
    let beta = 2.0 * u10.norm().atan2(u00.norm());
    const TOL: f64 = 1e-12;
    if u10.norm() < TOL {
        return Err(Su2Error::GimbalLock(EulerTriple { alpha: wrap_pi(-2.0 * u00.arg()), beta: 0.0, gamma: 0.0 }));
    }
    if u00.norm() < TOL {
        return Err(Su2Error::GimbalLock(EulerTriple { alpha: wrap_pi(2.0 * u10.arg()), beta: PI, gamma: 0.0 }));
    }
    let sum = -2.0 * u00.arg();
    let diff = 2.0 * u10.arg();
    let alpha = (sum + diff) / 2.0;
    let gamma = (sum - diff) / 2.0;
    // α → α ± 2π with γ → γ ∓ 2π leaves the matrix unchanged
    let shift = wrap_pi(alpha) - alpha;
    Ok(EulerTriple { alpha: alpha + shift, beta, gamma: wrap_pi(gamma - shift) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn spin_half_matrix() {
        let b: f64 = 0.83;
        let (c, s) = ((b / 2.0).cos(), (b / 2.0).sin());
        assert!((d(h(1), h(1), h(1), b).unwrap() - c).abs() < 1e-15);
        assert!((d(h(1), h(1), h(-1), b).unwrap() + s).abs() < 1e-15);
        assert!((d(h(1), h(-1), h(1), b).unwrap() - s).abs() < 1e-15);
        assert!((d(h(1), h(-1), h(-1), b).unwrap() - c).abs() < 1e-15);
    }

    #[test]
    fn spin_one_entries() {
        let b: f64 = 1.234;
        assert!((d(h(2), h(2), h(0), b).unwrap() + b.sin() / 2f64.sqrt()).abs() < 1e-14);
        assert!((d(h(2), h(0), h(0), b).unwrap() - b.cos()).abs() < 1e-14);
        assert!((d(h(2), h(2), h(2), b).unwrap() - (1.0 + b.cos()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn identity_at_zero() {
        for s in 0..8 {
            for mu in (-s..=s).step_by(2) {
                for nu in (-s..=s).step_by(2) {
                    let v = d(h(s), h(mu), h(nu), 0.0).unwrap();
                    let expect = if mu == nu { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn invalid_projection() {
        assert!(d(h(2), h(1), h(0), 0.3).is_err());
        assert!(d(h(2), h(4), h(0), 0.3).is_err());
    }

    #[test]
    fn flip_identity() {
        for (s, mu, nu, b) in [(2, -2, -2, 0.7), (1, -1, -1, PI / 3.0), (3, 1, -3, 2.2), (4, 0, 2, 0.0)] {
            let direct = d(h(s), h(mu), h(nu), b).unwrap();
            let (phase, q) = d_symmetry_flip(h(s), h(mu), h(nu), b);
            assert!((direct - phase as f64 * small_d(q).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn euler_identity_and_roundtrip() {
        let e = su2_extract_euler(&Unitary2::identity());
        assert!(matches!(e, Err(Su2Error::GimbalLock(t)) if t.alpha == 0.0 && t.beta == 0.0));
        let u = Unitary2::from_euler(EulerTriple { alpha: 0.4, beta: 1.1, gamma: -2.0 });
        let t = su2_extract_euler(&u).unwrap();
        assert!((t.alpha - 0.4).abs() < 1e-12 && (t.beta - 1.1).abs() < 1e-12 && (t.gamma + 2.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_product() {
        let u = su2_euler_product(0.5, 0.0, 0.9);
        let t = su2_extract_euler(&u).unwrap();
        assert!((t.beta - 1.4).abs() < 1e-12);
        assert!(t.alpha.abs() < 1e-12 && t.gamma.abs() < 1e-12);
    }
}
