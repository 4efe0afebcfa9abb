//! 9j symbol `{j1 j2 j12; s j4 j34; j13 j24 j5}` with one small spin `s`.

use std::f64::consts::PI;

use super::{check_small_ratio, phase, tet_report, AsymDiagnostics, AsymError, AsymOptions, AsymValue, SignReport};
use crate::exact::Symbol9j;
use crate::geometry::{
    build_sigma_tet, euler_from_glued_triangles, omega_case, Edge, HingedTriangle, OmegaCase, SignConfig, Tetrahedron,
};
use crate::wigner_d::d;

/// The reference tetrahedron is `{j1 j2 j12; j34 j5 j24}`; the second one is
/// glued from the triangles `(j24, j1, j5)` and `(j24, j34, j2)` at the external
/// dihedral angle of the first along `j24`.
pub fn asym_9j_one_small(sym: &Symbol9j, opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let [[j1, j2, j12], [s, j4, j34], [j13, j24, j5]] = sym.rows;
    let mu = j13 - j1;
    let nu = j34 - j4;
    if mu.abs() > s || nu.abs() > s || !(s - mu).is_integer() || !(s - nu).is_integer() {
        return Err(AsymError::InvalidInput(format!(
            "μ = {mu}, ν = {nu} must be projections of the small spin s = {s}"
        )));
    }
    let mut diag = AsymDiagnostics::default();
    check_small_ratio(&mut diag, &[s], &[j1, j2, j12, j4, j34, j13, j24, j5], opts.small_ratio_warn);

    let spins = [j1, j2, j12, j34, j5, j24];
    let rep = tet_report("tet1", spins, opts.caustic_eps)?;
    let tet1 = Tetrahedron::from_spins(spins);
    let phi1 = tet1.face_angle(Edge::A, Edge::F)?;
    let phin = tet1.face_angle(Edge::D, Edge::F)?;
    let big_theta = PI - rep.dihedrals[Edge::F.index()];
    let g = euler_from_glued_triangles(phi1, big_theta, phin)?;

    let sign = phase((j13 + j2 + j34 + j5 + s).twice(), "j13+j2+j34+j5+s")?;
    let pref = sign / ((j1.dim() * j34.dim()) as f64 * 12.0 * PI * rep.volume).sqrt();
    let arg = rep.regge_action + PI / 4.0 - mu.value() * (PI - g.theta_a) - nu.value() * g.theta_b;
    let dm = d(s, mu, nu, PI - g.phi_mid)?;
    let value = pref * arg.cos() * dm;

    let tet2 = build_sigma_tet(
        HingedTriangle { shared: j24.length(), near: j1.length(), far: j5.length() },
        HingedTriangle { shared: j24.length(), near: j34.length(), far: j2.length() },
        big_theta,
    )?;
    // the 9j is the n = 3 chain with a single σ = +1, always in the case ω ∈ [−2π, −π)
    let omega = -PI - big_theta;
    let (case, theta_k1) = omega_case(omega);
    debug_assert!(case == OmegaCase::II || big_theta == 0.0);
    diag.sign_configs.push(SignReport {
        config: SignConfig {
            sigma: vec![1],
            omega,
            case,
            theta_k1,
            extra_phase: if s.is_integer() { 1 } else { -1 },
            on_boundary: big_theta.abs() < 1e-12 || (big_theta - PI).abs() < 1e-12,
        },
        theta_l1: g.theta_a,
        phi_mid: g.phi_mid,
        theta_ln: g.theta_b,
        f: -(mu.value() * (PI - g.theta_a)) - nu.value() * g.theta_b,
        sigma_volume: (tet2.cayley_menger().max(0.0) / 288.0).sqrt(),
        contribution: value,
    });
    diag.angle("phi_1_24", phi1);
    diag.angle("phi_34_24", phin);
    diag.angle("Theta_24", big_theta);
    diag.angle("theta2_1", g.theta_a);
    diag.angle("theta2_34", g.theta_b);
    diag.angle("phi_1_34", g.phi_mid);
    diag.tetrahedra.push(rep);
    Ok(AsymValue { value, diagnostics: diag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym::pr_6j;
    use crate::spin::HalfInt;

    #[test]
    fn zero_small_spin_is_scaled_ponzano_regge() {
        // s = 0: the formula is (-1)^{j1+j2+j34+j5} PR{j1 j2 j12; j34 j5 j24}/√(d_j1 d_j34),
        // and the exact 9j obeys the same relation with the exact 6j
        let t = [60, 50, 70, 0, 64, 64, 60, 56, 52];
        let sym = Symbol9j::from_twice(t);
        let a = asym_9j_one_small(&sym, &AsymOptions::default()).unwrap();
        let h = HalfInt::from_twice;
        let six = [h(60), h(50), h(70), h(64), h(52), h(56)];
        let pr = pr_6j(six, &AsymOptions::default()).unwrap();
        let sign = if (60 + 50 + 64 + 52) / 2 % 2 == 0 { 1.0 } else { -1.0 };
        let norm = (61.0f64 * 65.0).sqrt();
        let expect = sign * pr.value / norm;
        assert!((a.value - expect).abs() < 1e-12 * expect.abs().max(1e-6), "{} vs {expect}", a.value);

        let exact9 = crate::exact::wigner9j(&sym, crate::exact::Pivot::J24, 30).value.to_f64();
        let [a6, b6, c6, d6, e6, f6] = six;
        let exact6 = crate::exact::wigner6j(a6, b6, c6, d6, e6, f6).to_f64();
        assert!((exact9 - sign * exact6 / norm).abs() < 1e-14, "{exact9} vs {}", sign * exact6 / norm);
    }

    #[test]
    fn rejects_projection_outside_small_spin() {
        let sym = Symbol9j::from_twice([60, 50, 70, 2, 64, 70, 60, 56, 52]);
        assert!(matches!(asym_9j_one_small(&sym, &AsymOptions::default()), Err(AsymError::InvalidInput(_))));
    }
}
