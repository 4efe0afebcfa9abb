//! Triangle and tetrahedron geometry behind the asymptotic formulas.

mod sigma;
mod tetra;

use thiserror::Error;

pub use sigma::{f_phase, normalize_omega, omega_case, omega_classify, OmegaCase, SignConfig};
pub use tetra::{Allowedness, Edge, Tetrahedron, DEFAULT_CAUSTIC_EPS};

/// How far past ±1 an arccos argument may drift before it is an error.
pub const ARCCOS_TOLERANCE: f64 = 1e-9;

/// Default relative step of the Schläfli finite differences.
pub const SCHLAFLI_STEP: f64 = 1e-5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate triangle (cosine {cos})")]
    DegenerateTriangle { cos: f64 },
    #[error("not classically allowed (Cayley-Menger determinant {det:e})")]
    NotClassicallyAllowed { det: f64 },
    #[error("degenerate vertex: a face angle sine vanishes")]
    DegenerateVertex,
    #[error("edge lengths must be positive and finite")]
    NonPositiveEdge,
    #[error("edges do not share a face")]
    NotAFace,
}

/// Angle between sides `la` and `lb` of the triangle `(la, lb, lc)`.
pub fn triangle_angle(la: f64, lb: f64, lc: f64) -> Result<f64, GeometryError> {
    let cos = (la * la + lb * lb - lc * lc) / (2.0 * la * lb);
    if !cos.is_finite() || cos.abs() > 1.0 + ARCCOS_TOLERANCE {
        return Err(GeometryError::DegenerateTriangle { cos });
    }
    // Kahan's ordering of Heron's formula for 16·area²
    let mut s = [la, lb, lc];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let h = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    Ok(h.max(0.0).sqrt().atan2(la * la + lb * lb - lc * lc))
}

/// Angles at the hinge vertex of two triangles glued along a shared edge.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GluedAngles {
    /// dihedral angle along the first triangle's free edge at the vertex
    pub theta_a: f64,
    /// angle between the two free edges at the vertex
    pub phi_mid: f64,
    /// dihedral angle along the second triangle's free edge
    pub theta_b: f64,
}

/// Spherical triangle at a vertex with face angles `phi1`, `phin` against the
/// shared edge and dihedral `theta` along it.
///
/// Evaluated with `atan2` on explicit unit vectors, which stays accurate when
/// an angle is close to 0 or π.
pub fn euler_from_glued_triangles(phi1: f64, theta: f64, phin: f64) -> Result<GluedAngles, GeometryError> {
    let (s1, c1) = phi1.sin_cos();
    let (sn, cn) = phin.sin_cos();
    if s1.abs() < 1e-12 || sn.abs() < 1e-12 {
        return Err(GeometryError::DegenerateVertex);
    }
    let (st, ct) = theta.sin_cos();
    // shared edge along z, first free edge a = (s1, 0, c1), second b = (sn cosθ, sn sinθ, cn)
    let dot = c1 * cn + s1 * sn * ct;
    let cross = [-c1 * sn * st, c1 * sn * ct - s1 * cn, s1 * sn * st];
    let sm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    if sm < 1e-12 {
        return Err(GeometryError::DegenerateVertex);
    }
    let phi_mid = sm.atan2(dot);
    // a · (z × b), up to sign the same for both vertex angles
    let triple = (s1 * sn * st).abs();
    let theta_a = triple.atan2(cn - c1 * dot);
    let theta_b = triple.atan2(c1 - cn * dot);
    Ok(GluedAngles { theta_a, phi_mid, theta_b })
}

/// Sides of a triangle hinged on a shared edge: `near` meets the shared edge
/// at the hinge vertex O, `far` at the other end Q.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HingedTriangle {
    pub shared: f64,
    pub near: f64,
    pub far: f64,
}

/// Glues two triangles along their shared edge at dihedral angle `theta` and
/// closes the tetrahedron.
///
/// Labeling: `a` = shared, `b`/`c` = near/far of `tri_a`, `f`/`e` = near/far
/// of `tri_b`, `d` = the new edge. The internal dihedral at `a` is `theta`.
pub fn build_sigma_tet(tri_a: HingedTriangle, tri_b: HingedTriangle, theta: f64) -> Result<Tetrahedron, GeometryError> {
    let s = tri_a.shared;
    if (tri_b.shared - s).abs() > 1e-9 * s {
        return Err(GeometryError::NotAFace);
    }
    let place = |t: &HingedTriangle| -> Result<(f64, f64), GeometryError> {
        let x = (s * s + t.near * t.near - t.far * t.far) / (2.0 * s);
        let y2 = t.near * t.near - x * x;
        if y2 < -ARCCOS_TOLERANCE * t.near * t.near {
            return Err(GeometryError::DegenerateTriangle { cos: x / t.near });
        }
        Ok((x, y2.max(0.0).sqrt()))
    };
    let (xa, ya) = place(&tri_a)?;
    let (xb, rb) = place(&tri_b)?;
    let pa = [xa, ya, 0.0];
    let pb = [xb, rb * theta.cos(), rb * theta.sin()];
    let ab = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2) + (pa[2] - pb[2]).powi(2)).sqrt();
    Tetrahedron::new([s, tri_a.near, tri_a.far, ab, tri_b.far, tri_b.near])
}
