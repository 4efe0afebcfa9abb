//! Closed forms for the 15j symbol with `j1` small and zero to three small `l`'s.
//!
//! Each one spells out its own sign configurations and gluing angles instead of
//! running the generic σ enumeration.

use std::f64::consts::PI;

use super::general::{validate_hypotheses, SmallSpinMarking};
use super::{
    check_small_ratio, phase, tet_report, AsymDiagnostics, AsymError, AsymOptions, AsymValue, SignReport, TetReport,
};
use crate::exact::Symbol3nj;
use crate::geometry::{euler_from_glued_triangles, omega_classify, triangle_angle, Edge, GluedAngles};
use crate::spin::HalfInt;
use crate::wigner_d::d;

/// 1-based views of the three rows plus the angles every case needs.
struct Setup {
    j: [HalfInt; 5],
    l: [HalfInt; 5],
    k: [HalfInt; 5],
    mu: HalfInt,
    nu: HalfInt,
    phi1: f64,
    phi5: f64,
    /// `1/√(d_{j2} d_{k5})`
    base: f64,
    diag: AsymDiagnostics,
}

impl Setup {
    fn new(sym: &Symbol3nj, e: &[usize], opts: &AsymOptions) -> Result<Setup, AsymError> {
        if sym.n() != 5 {
            return Err(AsymError::InvalidInput(format!("a 15j symbol has five columns, got {}", sym.n())));
        }
        let v = validate_hypotheses(sym, &SmallSpinMarking::j1_with_l(e), opts.caustic_eps);
        if !v.is_empty() {
            return Err(AsymError::HypothesisViolation(v));
        }
        let arr = |v: &[HalfInt]| [v[0], v[1], v[2], v[3], v[4]];
        let (j, l, k) = (arr(&sym.j), arr(&sym.l), arr(&sym.k));
        let mut diag = AsymDiagnostics::default();
        let small: Vec<HalfInt> = std::iter::once(j[0]).chain(e.iter().map(|&m| l[m - 1])).collect();
        let large: Vec<HalfInt> = (0..5)
            .flat_map(|i| [(i, 'j', j[i]), (i, 'k', k[i]), (i, 'l', l[i])])
            .filter(|&(i, row, _)| !(row == 'j' && i == 0) && !(row == 'l' && e.contains(&(i + 1))))
            .map(|(_, _, h)| h)
            .collect();
        check_small_ratio(&mut diag, &small, &large, opts.small_ratio_warn);
        let phi1 = triangle_angle(k[0].length(), j[1].length(), k[1].length())?;
        let phi5 = triangle_angle(k[0].length(), k[4].length(), j[4].length())?;
        diag.angle("phi_1", phi1);
        diag.angle("phi_5", phi5);
        Ok(Setup {
            j,
            l,
            k,
            mu: j[1] - l[0],
            nu: k[4] - l[4],
            phi1,
            phi5,
            base: 1.0 / ((j[1].dim() * k[4].dim()) as f64).sqrt(),
            diag,
        })
    }

    fn j(&self, i: usize) -> HalfInt {
        self.j[i - 1]
    }
    fn k(&self, i: usize) -> HalfInt {
        self.k[i - 1]
    }
    fn l(&self, i: usize) -> HalfInt {
        self.l[i - 1]
    }

    /// Edmonds factor `d^{l_m}_{κ_m η_m}(ϕ_m)/√(d_{j_m} d_{k_m})`.
    fn edmonds(&mut self, m: usize) -> Result<f64, AsymError> {
        let ph = triangle_angle(self.j(m).length(), self.k(m).length(), self.k(1).length())?;
        self.diag.angle(&format!("phi_{m}"), ph);
        let kappa = self.k(m + 1) - self.k(m);
        let eta = self.j(m + 1) - self.j(m);
        Ok(d(self.l(m), kappa, eta, ph)? / ((self.j(m).dim() * self.k(m).dim()) as f64).sqrt())
    }

    /// Tetrahedron `p` with its internal dihedral angle at `k1`.
    fn tet(&mut self, p: usize, opts: &AsymOptions) -> Result<(TetReport, f64), AsymError> {
        let spins = [self.j(p), self.k(p), self.k(1), self.k(p + 1), self.j(p + 1), self.l(p)];
        let rep = tet_report(&format!("tet{p}"), spins, opts.caustic_eps)?;
        let theta = rep.dihedrals[Edge::C.index()];
        self.diag.angle(&format!("theta_k1_{p}"), theta);
        self.diag.tetrahedra.push(rep.clone());
        Ok((rep, theta))
    }

    /// Angles of the two end triangles glued at `theta` along `k1`.
    fn glue(&self, sigma: &[i8], theta: f64) -> Result<GluedAngles, AsymError> {
        if !(0.0..=PI).contains(&theta) {
            return Err(AsymError::CaseAngleOutOfRange { sigma: sigma.to_vec(), theta });
        }
        Ok(euler_from_glued_triangles(self.phi1, theta, self.phi5)?)
    }

    fn dj1(&self, beta: f64) -> Result<f64, AsymError> {
        Ok(d(self.j(1), self.mu, self.nu, beta)?)
    }

    fn report(&mut self, sigma: &[i8], m: usize, big_thetas: &[f64], g: &GluedAngles, f: f64, contribution: f64) {
        let config = omega_classify(5, m, big_thetas, sigma, self.j(1));
        self.diag.sign_configs.push(SignReport {
            config,
            theta_l1: g.theta_a,
            phi_mid: g.phi_mid,
            theta_ln: g.theta_b,
            f,
            sigma_volume: f64::NAN,
            contribution,
        });
    }
}

/// `j1, l2, l3, l4` small: no Ponzano-Regge factor, the end triangles lie flat
/// and meet at `φ1 + φ5`.
pub fn asym_15j_four_small(sym: &Symbol3nj, opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let mut s = Setup::new(sym, &[2, 3, 4], opts)?;
    let sign = phase((s.j(1) + s.mu).twice(), "j1+μ")?;
    let mut value = sign * s.base;
    for m in 2..=4 {
        value *= s.edmonds(m)?;
    }
    let beta = s.phi1 + s.phi5;
    if beta > PI {
        return Err(AsymError::CaseAngleOutOfRange { sigma: Vec::new(), theta: beta });
    }
    value *= s.dj1(beta)?;
    s.diag.angle("phi_l1_l5", beta);
    Ok(AsymValue { value, diagnostics: s.diag })
}

/// `j1, l2, l3` small: one large tetrahedron (`p = 4`) and the glued one at its
/// external angle along `k1`.
pub fn asym_15j_three_small(sym: &Symbol3nj, opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let mut s = Setup::new(sym, &[2, 3], opts)?;
    let sign = phase((s.k(1) + s.j(4) + s.l(4) + s.k(5) + s.j(1) + s.j(1) + s.mu).twice(), "three-small phase")?;
    let e2 = s.edmonds(2)?;
    let e3 = s.edmonds(3)?;
    let (t4, th4) = s.tet(4, opts)?;
    let g = s.glue(&[1], PI - th4)?;
    let (mu, nu) = (s.mu.value(), s.nu.value());
    let f = -(mu * g.theta_a + nu * g.theta_b);
    let arg = t4.regge_action + PI / 4.0 + f + PI * s.j(1).value();
    let value = sign * s.base * e2 * e3 / (12.0 * PI * t4.volume).sqrt() * arg.cos() * s.dj1(g.phi_mid)?;
    s.report(&[1], 2, &[PI - th4], &g, f, value);
    Ok(AsymValue { value, diagnostics: s.diag })
}

/// `j1, l2` small: tetrahedra 3 and 4 glued outside (`++`) or one inside the
/// other (`+−`).
pub fn asym_15j_two_small(sym: &Symbol3nj, opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let mut s = Setup::new(sym, &[2], opts)?;
    let exp = s.j(3) + s.l(3) + s.j(4) + s.k(4) + s.l(4) + s.k(5) + s.j(1) + s.mu + s.k(1) + s.k(1);
    let sign = phase(exp.twice(), "two-small phase")?;
    let e2 = s.edmonds(2)?;
    let (t3, th3) = s.tet(3, opts)?;
    let (t4, th4) = s.tet(4, opts)?;
    let (mu, nu) = (s.mu.value(), s.nu.value());
    let big = [PI - th3, PI - th4];

    let gpp = s.glue(&[1, 1], PI - th3 - th4)?;
    let fpp = -(mu * gpp.theta_a + nu * gpp.theta_b);
    let term_pp = -s.dj1(gpp.phi_mid)? * (t3.regge_action + t4.regge_action + fpp).sin();

    // the label with the larger angle at k1 goes first
    let (sig, theta, action) = if th3 >= th4 {
        ([1, -1], PI - th3 + th4, t3.regge_action - t4.regge_action)
    } else {
        ([-1, 1], PI - th4 + th3, t4.regge_action - t3.regge_action)
    };
    let gpm = s.glue(&sig, theta)?;
    let fpm = -(mu * gpm.theta_a + nu * gpm.theta_b);
    let parity = if s.j(1).is_integer() { 1.0 } else { -1.0 };
    let term_pm = parity * s.dj1(gpm.phi_mid)? * (action + fpm).cos();

    let pref = sign * s.base * e2 / (24.0 * PI * (t3.volume * t4.volume).sqrt());
    s.report(&[1, 1], 1, &big, &gpp, fpp, pref * term_pp);
    s.report(&sig, 1, &big, &gpm, fpm, pref * term_pm);
    Ok(AsymValue { value: pref * (term_pp + term_pm), diagnostics: s.diag })
}

/// Only `j1` small: three large tetrahedra and four distinct sign classes.
pub fn asym_15j_one_small(sym: &Symbol3nj, opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let mut s = Setup::new(sym, &[], opts)?;
    let exp = (s.j(2) + s.l(2) + s.j(3)) + (s.k(3) + s.l(3) + s.k(4)) + s.j(4) + s.l(4) + s.k(5) - s.k(1) + s.mu;
    let sign = phase(exp.twice(), "one-small phase")?;
    let mut tets = Vec::with_capacity(3);
    let mut th = [0.0; 3];
    for p in 2..=4 {
        let (t, a) = s.tet(p, opts)?;
        th[p - 2] = a;
        tets.push(t);
    }
    let big = th.map(|t| PI - t);
    let v: f64 = tets.iter().map(|t| t.volume).product();
    let pref = sign * s.base / (48.0 * PI * (12.0 * PI * v).sqrt());
    let sr: Vec<f64> = tets.iter().map(|t| t.regge_action).collect();
    let (mu, nu) = (s.mu.value(), s.nu.value());
    let pij1 = PI * s.j(1).value();

    let configs: [([i8; 3], f64); 4] = [
        ([1, 1, -1], PI - th[0] - th[1] + th[2]),
        ([1, -1, 1], PI - th[0] + th[1] - th[2]),
        ([-1, 1, 1], PI + th[0] - th[1] - th[2]),
        ([1, 1, 1], th[0] + th[1] + th[2] - PI),
    ];
    let mut total = 0.0;
    for (sig, theta) in configs {
        let g = s.glue(&sig, theta)?;
        let action: f64 = sig.iter().zip(&sr).map(|(&x, a)| x as f64 * a).sum();
        let all_plus = sig == [1, 1, 1];
        let (quarter, f) = if all_plus {
            (3.0 * PI / 4.0, mu * g.theta_a + nu * g.theta_b)
        } else {
            (PI / 4.0, -(mu * g.theta_a + nu * g.theta_b))
        };
        let term = pref * s.dj1(g.phi_mid)? * (action + quarter + f + pij1).cos();
        s.report(&sig, 0, &big, &g, f, term);
        total += term;
    }
    Ok(AsymValue { value: total, diagnostics: s.diag })
}
