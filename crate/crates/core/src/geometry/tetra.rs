//! Euclidean tetrahedra in the 6j edge labeling.
//!
//! Edges `{a b c; d e f}`; faces (a,b,c), (a,e,f), (d,b,f), (d,e,c);
//! vertices V1=(a,b,f), V2=(a,c,e), V3=(b,c,d), V4=(d,e,f).
//! Opposite pairs are (a,d), (b,e), (c,f).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{triangle_angle, GeometryError};
use crate::spin::HalfInt;

/// Relative Cayley-Menger threshold below which a tetrahedron counts as near-caustic.
pub const DEFAULT_CAUSTIC_EPS: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Edge {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Edge {
    pub const ALL: [Edge; 6] = [Edge::A, Edge::B, Edge::C, Edge::D, Edge::E, Edge::F];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Endpoints as vertex indices (V1..V4 → 0..3).
    pub fn endpoints(self) -> (usize, usize) {
        use Edge::*;
        match self {
            A => (0, 1),
            B => (0, 2),
            C => (1, 2),
            D => (2, 3),
            E => (1, 3),
            F => (0, 3),
        }
    }

    fn between(p: usize, q: usize) -> Edge {
        *Edge::ALL
            .iter()
            .find(|e| {
                let (x, y) = e.endpoints();
                (x, y) == (p, q) || (y, x) == (p, q)
            })
            .unwrap()
    }

    /// Third edge of the face containing `self` and `other`.
    fn face_third(self, other: Edge) -> Option<Edge> {
        use Edge::*;
        const FACES: [[Edge; 3]; 4] = [[A, B, C], [A, E, F], [D, B, F], [D, E, C]];
        FACES
            .iter()
            .find(|f| f.contains(&self) && f.contains(&other) && self != other)
            .map(|f| *f.iter().find(|&&e| e != self && e != other).unwrap())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Allowedness {
    Allowed,
    NearCaustic,
    Forbidden,
}

impl Allowedness {
    pub fn as_str(self) -> &'static str {
        match self {
            Allowedness::Allowed => "allowed",
            Allowedness::NearCaustic => "near_caustic",
            Allowedness::Forbidden => "forbidden",
        }
    }
}

/// Six edge lengths in the 6j labeling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tetrahedron {
    pub edges: [f64; 6],
}

impl Tetrahedron {
    pub fn new(edges: [f64; 6]) -> Result<Self, GeometryError> {
        if edges.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(GeometryError::NonPositiveEdge);
        }
        Ok(Tetrahedron { edges })
    }

    /// Edges `j + 1/2` of a 6j symbol `{a b c; d e f}`.
    pub fn from_spins(spins: [HalfInt; 6]) -> Self {
        Tetrahedron { edges: spins.map(HalfInt::length) }
    }

    pub fn len(&self, e: Edge) -> f64 {
        self.edges[e.index()]
    }

    /// `288 V²`, the Cayley-Menger determinant.
    pub fn cayley_menger(&self) -> f64 {
        let [a, b, c, d, e, f] = self.edges.map(|x| x * x);
        let v144 = a * d * (b + c + e + f - a - d) + b * e * (a + c + d + f - b - e) + c * f * (a + b + d + e - c - f)
            - a * b * c
            - a * e * f
            - d * b * f
            - d * e * c;
        2.0 * v144
    }

    /// Scale-covariant caustic threshold `ε · (mean edge)^6`.
    pub fn caustic_threshold(&self, eps: f64) -> f64 {
        let mean = self.edges.iter().sum::<f64>() / 6.0;
        eps * mean.powi(6)
    }

    pub fn classify(&self, eps: f64) -> Allowedness {
        let det = self.cayley_menger();
        let thr = self.caustic_threshold(eps);
        if det > thr {
            Allowedness::Allowed
        } else if det >= -thr {
            Allowedness::NearCaustic
        } else {
            Allowedness::Forbidden
        }
    }

    /// Volume, zero on the caustic.
    pub fn volume_with(&self, eps: f64) -> Result<f64, GeometryError> {
        let det = self.cayley_menger();
        match self.classify(eps) {
            Allowedness::Forbidden => Err(GeometryError::NotClassicallyAllowed { det }),
            _ => Ok((det.max(0.0) / 288.0).sqrt()),
        }
    }

    pub fn volume(&self) -> Result<f64, GeometryError> {
        self.volume_with(DEFAULT_CAUSTIC_EPS)
    }

    /// Angle between edges `x` and `y` inside their common face.
    pub fn face_angle(&self, x: Edge, y: Edge) -> Result<f64, GeometryError> {
        let z = x.face_third(y).ok_or(GeometryError::NotAFace)?;
        triangle_angle(self.len(x), self.len(y), self.len(z))
    }

    /// Internal dihedral angle `θ_e` between the two faces sharing `e`.
    ///
    /// With `u` along `e` and `v`, `w` to the two other vertices,
    /// `θ = atan2(|u|·6V, (u·u)(v·w) − (u·v)(u·w))`; all dot products come
    /// straight from squared lengths.
    pub fn dihedral_internal(&self, e: Edge) -> Result<f64, GeometryError> {
        let det = self.cayley_menger();
        if !(det > 0.0) {
            return Err(GeometryError::NotClassicallyAllowed { det });
        }
        let (p, q) = e.endpoints();
        let mut others = (0..4).filter(|&x| x != p && x != q);
        let (r, s) = (others.next().unwrap(), others.next().unwrap());
        let sq = |x: usize, y: usize| self.len(Edge::between(x, y)).powi(2);
        let (uu, vv, ww) = (sq(p, q), sq(p, r), sq(p, s));
        let uv = 0.5 * (uu + vv - sq(q, r));
        let uw = 0.5 * (uu + ww - sq(q, s));
        let vw = 0.5 * (vv + ww - sq(r, s));
        let six_v = (det / 8.0).sqrt();
        Ok((uu.sqrt() * six_v).atan2(uu * vw - uv * uw))
    }

    /// External dihedral angle `Θ_e = π − θ_e`.
    pub fn dihedral_external(&self, e: Edge) -> Result<f64, GeometryError> {
        Ok(PI - self.dihedral_internal(e)?)
    }

    pub fn dihedrals(&self) -> Result<[f64; 6], GeometryError> {
        let mut out = [0.0; 6];
        for e in Edge::ALL {
            out[e.index()] = self.dihedral_internal(e)?;
        }
        Ok(out)
    }

    /// Regge action `Σ_e ℓ_e Θ_e`.
    pub fn regge_action(&self) -> Result<f64, GeometryError> {
        let th = self.dihedrals()?;
        Ok(self.edges.iter().zip(th).map(|(l, t)| l * (PI - t)).sum())
    }

    /// Largest `|Σ_e ℓ_e ∂Θ_e/∂ℓ_k|` over edges `k`, by central differences with step `h_rel · ℓ_k`.
    pub fn schlafli_residual(&self, h_rel: f64) -> Result<f64, GeometryError> {
        let mut worst = 0.0f64;
        for k in 0..6 {
            let h = h_rel * self.edges[k];
            let mut plus = *self;
            plus.edges[k] += h;
            let mut minus = *self;
            minus.edges[k] -= h;
            let tp = plus.dihedrals()?;
            let tm = minus.dihedrals()?;
            // Θ = π − θ, so dΘ = −dθ
            let s: f64 = (0..6).map(|e| self.edges[e] * -(tp[e] - tm[e]) / (2.0 * h)).sum();
            worst = worst.max(s.abs());
        }
        Ok(worst)
    }
}
