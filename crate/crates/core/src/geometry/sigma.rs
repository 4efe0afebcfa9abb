//! Sign configurations of the expanded cosine product and the ω cases.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::spin::HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaCase {
    /// ω ∈ [0, π)
    I,
    /// ω ∈ [−2π, −π)
    II,
    /// ω ∈ [−π, 0)
    III,
    /// ω ∈ [π, 2π)
    IV,
}

/// One choice of signs `σ_p` with its ω angle and gluing angle `θ_k1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignConfig {
    pub sigma: Vec<i8>,
    /// normalized to [−2π, 2π)
    pub omega: f64,
    pub case: OmegaCase,
    /// always in [0, π]
    pub theta_k1: f64,
    /// `(-1)^{2j1}` on cases II and IV, else +1
    pub extra_phase: i8,
    /// ω sits within 1e-12 of a case boundary
    pub on_boundary: bool,
}

/// Maps ω into [−2π, 2π) modulo 4π.
pub fn normalize_omega(omega: f64) -> f64 {
    let w = (omega + 2.0 * PI).rem_euclid(4.0 * PI) - 2.0 * PI;
    // rem_euclid can round up to exactly 4π
    if w >= 2.0 * PI {
        w - 4.0 * PI
    } else {
        w
    }
}

/// Case and gluing angle of a normalized ω.
pub fn omega_case(omega: f64) -> (OmegaCase, f64) {
    if omega < -PI {
        (OmegaCase::II, (-PI - omega).clamp(0.0, PI))
    } else if omega < 0.0 {
        (OmegaCase::III, (PI + omega).clamp(0.0, PI))
    } else if omega < PI {
        (OmegaCase::I, (PI - omega).clamp(0.0, PI))
    } else {
        (OmegaCase::IV, (omega - PI).clamp(0.0, PI))
    }
}

/// `ω = (n+M)π − Σ_p σ_p Θ_p` with its case.
pub fn omega_classify(n: usize, m: usize, big_thetas: &[f64], sigma: &[i8], j1: HalfInt) -> SignConfig {
    assert_eq!(big_thetas.len(), sigma.len());
    let raw = (n + m) as f64 * PI - big_thetas.iter().zip(sigma).map(|(t, &s)| s as f64 * t).sum::<f64>();
    let omega = normalize_omega(raw);
    let (case, theta_k1) = omega_case(omega);
    let odd = j1.twice() % 2 != 0;
    let extra_phase = match case {
        OmegaCase::II | OmegaCase::IV if odd => -1,
        _ => 1,
    };
    let on_boundary = [-2.0 * PI, -PI, 0.0, PI].iter().any(|b| (omega - b).abs() < 1e-12);
    SignConfig { sigma: sigma.to_vec(), omega, case, theta_k1, extra_phase, on_boundary }
}

/// `f^σ_{μν}`: `∓(μθ_l1 + νθ_ln)`, plus `2πj1` on cases II and IV.
pub fn f_phase(case: OmegaCase, mu: HalfInt, nu: HalfInt, theta_l1: f64, theta_ln: f64, j1: HalfInt) -> f64 {
    let a = mu.value() * theta_l1 + nu.value() * theta_ln;
    let turn = 2.0 * PI * j1.value();
    match case {
        OmegaCase::I => -a,
        OmegaCase::II => -a + turn,
        OmegaCase::III => a,
        OmegaCase::IV => a + turn,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases() {
        let (c, t) = omega_case(PI / 2.0);
        assert_eq!(c, OmegaCase::I);
        assert!((t - PI / 2.0).abs() < 1e-15);
        let (c, t) = omega_case(-1.5 * PI);
        assert_eq!(c, OmegaCase::II);
        assert!((t - PI / 2.0).abs() < 1e-15);
        let (c, t) = omega_case(-PI / 2.0);
        assert_eq!(c, OmegaCase::III);
        assert!((t - PI / 2.0).abs() < 1e-15);
        let (c, _) = omega_case(1.5 * PI);
        assert_eq!(c, OmegaCase::IV);
    }

    #[test]
    fn normalization() {
        assert!((normalize_omega(5.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_omega(-2.5 * PI) - 1.5 * PI).abs() < 1e-12);
        for k in -400..400 {
            let w = normalize_omega(k as f64 * 0.1);
            assert!((-2.0 * PI..2.0 * PI).contains(&w));
        }
    }

    #[test]
    fn f_table() {
        let third = PI / 3.0;
        let one = HalfInt::ONE;
        let f = f_phase(OmegaCase::II, one, HalfInt::ZERO, third, 0.7, one);
        assert!((f - (-third + 2.0 * PI)).abs() < 1e-15);
        assert_eq!(f_phase(OmegaCase::I, HalfInt::ZERO, HalfInt::ZERO, 1.0, 2.0, one), 0.0);
    }

    #[test]
    fn half_integer_extra_phase() {
        // 3π − 1 ≡ −π − 1
        let cfg = omega_classify(3, 0, &[1.0], &[1], HalfInt::HALF);
        assert_eq!(cfg.case, OmegaCase::II);
        assert_eq!(cfg.extra_phase, -1);
        assert!((cfg.theta_k1 - 1.0).abs() < 1e-12);
        // 3π + 1 ≡ −π + 1
        let cfg = omega_classify(3, 0, &[1.0], &[-1], HalfInt::HALF);
        assert_eq!(cfg.case, OmegaCase::III);
        assert_eq!(cfg.extra_phase, 1);
    }
}
