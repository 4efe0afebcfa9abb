//! 3nj symbols of the first kind with one small spin in the `j`/`k` rows and
//! an optional set of small `l` spins.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{check_small_ratio, phase, tet_report, AsymDiagnostics, AsymError, AsymOptions, AsymValue, SignReport};
use crate::exact::Symbol3nj;
use crate::geometry::{
    build_sigma_tet, euler_from_glued_triangles, f_phase, omega_classify, triangle_angle, Allowedness, Edge,
    HingedTriangle, Tetrahedron,
};
use crate::spin::HalfInt;
use crate::wigner_d::d;

/// A position in a 3nj symbol, 1-based: `j3`, `k1`, `l2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Slot {
    J(usize),
    K(usize),
    L(usize),
}

impl Slot {
    fn index(self) -> usize {
        match self {
            Slot::J(i) | Slot::K(i) | Slot::L(i) => i,
        }
    }

    fn in_jk_rows(self) -> bool {
        !matches!(self, Slot::L(_))
    }

    /// Where this slot lands after one cyclic shift of the symbol.
    fn shifted(self, n: usize) -> Slot {
        match self {
            Slot::J(1) => Slot::K(n),
            Slot::K(1) => Slot::J(n),
            Slot::L(1) => Slot::L(n),
            Slot::J(i) => Slot::J(i - 1),
            Slot::K(i) => Slot::K(i - 1),
            Slot::L(i) => Slot::L(i - 1),
        }
    }

    fn get(self, sym: &Symbol3nj) -> HalfInt {
        match self {
            Slot::J(i) => sym.j[i - 1],
            Slot::K(i) => sym.k[i - 1],
            Slot::L(i) => sym.l[i - 1],
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::J(i) => write!(f, "j{i}"),
            Slot::K(i) => write!(f, "k{i}"),
            Slot::L(i) => write!(f, "l{i}"),
        }
    }
}

impl FromStr for Slot {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad slot `{s}` (expected j<i>, k<i> or l<i>)");
        let mut chars = s.chars();
        let row = chars.next().ok_or_else(bad)?;
        let i: usize = chars.as_str().parse().map_err(|_| bad())?;
        if i == 0 {
            return Err(bad());
        }
        match row {
            'j' | 'J' => Ok(Slot::J(i)),
            'k' | 'K' => Ok(Slot::K(i)),
            'l' | 'L' => Ok(Slot::L(i)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Slot {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Slot> for String {
    fn from(s: Slot) -> String {
        s.to_string()
    }
}

/// Entries the caller declares small.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallSpinMarking {
    pub small: Vec<Slot>,
}

impl SmallSpinMarking {
    pub fn new(small: Vec<Slot>) -> Self {
        SmallSpinMarking { small }
    }

    /// `j1` together with the listed `l` indices.
    pub fn j1_with_l(ls: &[usize]) -> Self {
        let mut small = vec![Slot::J(1)];
        small.extend(ls.iter().map(|&i| Slot::L(i)));
        SmallSpinMarking { small }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    SlotOutOfRange(Slot),
    /// exactly one of the `j`/`k` spins must be small
    SmallRowSpinCount(Vec<Slot>),
    /// a 6j factor of the chain holds more than one small spin; `factor` is 1-based
    SixJWithTwoSmall { factor: usize, small: Vec<Slot> },
    /// a triad of the symbol fails, so the exact value vanishes identically
    Inadmissible,
    /// a large-spin tetrahedron (label after normalization) sits at or beyond the caustic
    NearCaustic { tet: usize, det: f64, threshold: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Slot]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        match self {
            Violation::SlotOutOfRange(s) => write!(f, "slot {s} is outside the symbol"),
            Violation::SmallRowSpinCount(v) => {
                write!(f, "need exactly one small spin among the j and k rows, got [{}]", list(v))
            }
            Violation::SixJWithTwoSmall { factor, small } => {
                write!(f, "6j factor {factor} holds several small spins [{}]", list(small))
            }
            Violation::Inadmissible => write!(f, "a triad of the symbol is not admissible"),
            Violation::NearCaustic { tet, det, threshold } => {
                write!(f, "tetrahedron {tet} is not safely allowed (det {det:e}, threshold {threshold:e})")
            }
        }
    }
}

/// The symbol rotated so that the small row spin is `j1`, plus the derived labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub sym: Symbol3nj,
    /// cyclic shifts applied to the input
    pub shifts: usize,
    /// indices `m` with `l_m` small
    pub e: Vec<usize>,
    /// indices `p` whose 6j factor has only large spins
    pub p: Vec<usize>,
    pub mu: HalfInt,
    pub nu: HalfInt,
}

impl Resolved {
    fn j(&self, i: usize) -> HalfInt {
        self.sym.j[i - 1]
    }
    fn k(&self, i: usize) -> HalfInt {
        self.sym.k[i - 1]
    }
    fn l(&self, i: usize) -> HalfInt {
        self.sym.l[i - 1]
    }

    pub fn n(&self) -> usize {
        self.sym.n()
    }

    /// The 6j of tetrahedron `p`: `{j_p k_p k1; k_{p+1} j_{p+1} l_p}`.
    pub fn tet_spins(&self, p: usize) -> [HalfInt; 6] {
        [self.j(p), self.k(p), self.k(1), self.k(p + 1), self.j(p + 1), self.l(p)]
    }
}

/// Slots of the 6j factor `i` (1-based) in the chain decomposition.
fn factor_slots(i: usize, n: usize) -> [Slot; 5] {
    if i < n {
        [Slot::J(i), Slot::K(i), Slot::K(i + 1), Slot::J(i + 1), Slot::L(i)]
    } else {
        [Slot::J(n), Slot::K(n), Slot::J(1), Slot::K(1), Slot::L(n)]
    }
}

fn structural(sym: &Symbol3nj, mark: &SmallSpinMarking) -> Vec<Violation> {
    let n = sym.n();
    let mut out = Vec::new();
    for s in &mark.small {
        if s.index() == 0 || s.index() > n {
            out.push(Violation::SlotOutOfRange(*s));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let row: Vec<Slot> = mark.small.iter().copied().filter(|s| s.in_jk_rows()).collect();
    if row.len() != 1 {
        out.push(Violation::SmallRowSpinCount(row));
    }
    for i in 1..=n {
        let small: Vec<Slot> = factor_slots(i, n).into_iter().filter(|s| mark.small.contains(s)).collect();
        if small.len() > 1 {
            out.push(Violation::SixJWithTwoSmall { factor: i, small });
        }
    }
    if !sym.is_admissible() {
        out.push(Violation::Inadmissible);
    }
    out
}

/// Rotates the symbol so the small row spin sits at `j1`.
pub fn resolve(sym: &Symbol3nj, mark: &SmallSpinMarking) -> Result<Resolved, Vec<Violation>> {
    let v = structural(sym, mark);
    if !v.is_empty() {
        return Err(v);
    }
    let n = sym.n();
    let mut cur = sym.clone();
    let mut marks = mark.small.clone();
    let mut shifts = 0;
    while !marks.contains(&Slot::J(1)) {
        cur = cur.shifted();
        marks = marks.into_iter().map(|s| s.shifted(n)).collect();
        shifts += 1;
    }
    let mut e: Vec<usize> =
        marks.iter().filter_map(|s| if let Slot::L(i) = s { Some(*i) } else { None }).collect();
    e.sort_unstable();
    e.dedup();
    let p = (2..n).filter(|i| !e.contains(i)).collect();
    debug_assert_eq!(Slot::J(1).get(&cur), cur.j[0]);
    let mu = cur.j[1] - cur.l[0];
    let nu = cur.k[n - 1] - cur.l[n - 1];
    Ok(Resolved { sym: cur, shifts, e, p, mu, nu })
}

/// All hypotheses of the mixed formula; an empty list means the input is usable.
pub fn validate_hypotheses(sym: &Symbol3nj, mark: &SmallSpinMarking, eps: f64) -> Vec<Violation> {
    let r = match resolve(sym, mark) {
        Ok(r) => r,
        Err(v) => return v,
    };
    let mut out = Vec::new();
    for &p in &r.p {
        let t = Tetrahedron::from_spins(r.tet_spins(p));
        if t.classify(eps) != Allowedness::Allowed {
            out.push(Violation::NearCaustic { tet: p, det: t.cayley_menger(), threshold: t.caustic_threshold(eps) });
        }
    }
    out
}

/// Sign exponent `r_n(E)`, doubled.
fn r_n_twice(r: &Resolved) -> i64 {
    let n = r.n();
    let m = r.e.len() as i64;
    let t = |h: HalfInt| h.twice();
    let (j1, k1) = (r.j(1), r.k(1));
    let mut s = t(r.sym.total())
        + (n as i64 + m - 1) * t(k1 + j1)
        + t(r.mu - j1)
        + t(k1 + r.k(2) + r.l(1))
        + t(k1 + r.j(n) + r.l(n));
    for &em in &r.e {
        s += t(r.j(em) + r.l(em) + r.k(em + 1));
    }
    s
}

/// Mixed Edmonds / Ponzano-Regge asymptotics of a 3nj symbol.
///
/// Lengths are `j + 1/2`. The overall normalization uses `√(d_{j2} d_{kn})` for
/// the two Edmonds factors at the ends of the chain.
pub fn asym_3nj(sym: &Symbol3nj, mark: &SmallSpinMarking, opts: &AsymOptions) -> Result<AsymValue, AsymError> {
    let v = validate_hypotheses(sym, mark, opts.caustic_eps);
    if !v.is_empty() {
        return Err(AsymError::HypothesisViolation(v));
    }
    let r = resolve(sym, mark).map_err(AsymError::HypothesisViolation)?;
    let n = r.n();
    let m_count = r.e.len();
    let (j1, k1) = (r.j(1), r.k(1));
    let mut diag = AsymDiagnostics::default();

    let mut small = vec![j1];
    small.extend(r.e.iter().map(|&m| r.l(m)));
    let large: Vec<HalfInt> = (1..=n)
        .flat_map(|i| [r.j(i), r.k(i), r.l(i)])
        .enumerate()
        .filter(|&(idx, _)| idx != 0 && !(idx % 3 == 2 && r.e.contains(&(idx / 3 + 1))))
        .map(|(_, h)| h)
        .collect();
    check_small_ratio(&mut diag, &small, &large, opts.small_ratio_warn);
    if r.shifts > 0 {
        diag.warnings.push(format!("symbol rotated by {} cyclic shifts to put the small spin at j1", r.shifts));
    }

    let sign = phase(r_n_twice(&r), "r_n")?;
    let phi1 = triangle_angle(k1.length(), r.j(2).length(), r.k(2).length())?;
    let phin = triangle_angle(k1.length(), r.k(n).length(), r.j(n).length())?;
    diag.angle("phi_1", phi1);
    diag.angle("phi_n", phin);

    let mut pref = sign / ((r.j(2).dim() * r.k(n).dim()) as f64).sqrt();
    for &em in &r.e {
        let ph = triangle_angle(r.j(em).length(), r.k(em).length(), k1.length())?;
        let kappa = r.k(em + 1) - r.k(em);
        let eta = r.j(em + 1) - r.j(em);
        pref *= d(r.l(em), kappa, eta, ph)? / ((r.j(em).dim() * r.k(em).dim()) as f64).sqrt();
        diag.angle(&format!("phi_{em}"), ph);
    }

    let mut actions = Vec::with_capacity(r.p.len());
    let mut big_thetas = Vec::with_capacity(r.p.len());
    for &p in &r.p {
        let rep = tet_report(&format!("tet{p}"), r.tet_spins(p), opts.caustic_eps)?;
        pref /= (12.0 * PI * rep.volume).sqrt();
        actions.push(rep.regge_action);
        let big = PI - rep.dihedrals[Edge::C.index()];
        big_thetas.push(big);
        diag.angle(&format!("Theta_k1_{p}"), big);
        diag.tetrahedra.push(rep);
    }

    let np = r.p.len();
    let scale = pref / (1u64 << np) as f64;
    let tri_a = HingedTriangle { shared: k1.length(), near: r.j(2).length(), far: r.k(2).length() };
    let tri_b = HingedTriangle { shared: k1.length(), near: r.k(n).length(), far: r.j(n).length() };
    let mut total = 0.0;
    for idx in 0..(1usize << np) {
        let sigma: Vec<i8> = (0..np).map(|q| if idx >> (np - 1 - q) & 1 == 0 { 1 } else { -1 }).collect();
        let cfg = omega_classify(n, m_count, &big_thetas, &sigma, j1);
        let g = euler_from_glued_triangles(phi1, cfg.theta_k1, phin)?;
        let f = f_phase(cfg.case, r.mu, r.nu, g.theta_a, g.theta_b, j1);
        let action: f64 = sigma.iter().zip(&actions).map(|(&s, a)| s as f64 * (a + PI / 4.0)).sum();
        let arg = action + PI * (n + m_count) as f64 * j1.value() + f;
        let contribution = scale * arg.cos() * d(j1, r.mu, r.nu, g.phi_mid)?;
        total += contribution;
        let sigma_tet = build_sigma_tet(tri_a, tri_b, cfg.theta_k1)?;
        diag.sign_configs.push(SignReport {
            config: cfg,
            theta_l1: g.theta_a,
            phi_mid: g.phi_mid,
            theta_ln: g.theta_b,
            f,
            sigma_volume: (sigma_tet.cayley_menger().max(0.0) / 288.0).sqrt(),
            contribution,
        });
    }
    Ok(AsymValue { value: total, diagnostics: diag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::wigner3nj;

    fn sym(j: &[i64], l: &[i64], k: &[i64]) -> Symbol3nj {
        Symbol3nj::from_twice(j, l, k).unwrap()
    }

    #[test]
    fn slot_parsing() {
        assert_eq!("l3".parse::<Slot>(), Ok(Slot::L(3)));
        assert_eq!("k12".parse::<Slot>(), Ok(Slot::K(12)));
        assert!("x1".parse::<Slot>().is_err());
        assert!("j0".parse::<Slot>().is_err());
        assert_eq!(Slot::J(4).to_string(), "j4");
    }

    #[test]
    fn fifteen_j_patterns() {
        let s = sym(&[2, 160, 160, 160, 160], &[160, 2, 2, 2, 160], &[160, 160, 160, 160, 160]);
        assert!(structural(&s, &SmallSpinMarking::j1_with_l(&[2, 3, 4])).is_empty());
        let bad = structural(&s, &SmallSpinMarking::j1_with_l(&[1]));
        assert!(matches!(bad.as_slice(), [Violation::SixJWithTwoSmall { factor: 1, .. }]));
        let two_rows = SmallSpinMarking::new(vec![Slot::J(1), Slot::K(3)]);
        assert!(structural(&s, &two_rows).iter().any(|v| matches!(v, Violation::SmallRowSpinCount(_))));
    }

    #[test]
    fn flat_tet_is_reported() {
        // l2 = 150 stretches two faces of tet2 so far that k1 = 80 cannot close it
        let s = sym(&[2, 160, 160, 160], &[160, 300, 160, 160], &[160, 160, 160, 160]);
        let v = validate_hypotheses(&s, &SmallSpinMarking::j1_with_l(&[]), 1e-6);
        assert!(v.iter().any(|x| matches!(x, Violation::NearCaustic { tet: 2, .. })), "{v:?}");
    }

    #[test]
    fn resolve_rotates_small_spin_to_j1() {
        let s = sym(&[120, 120, 120, 120], &[120, 122, 122, 120], &[120, 120, 2, 120]);
        let r = resolve(&s, &SmallSpinMarking::new(vec![Slot::K(3)])).unwrap();
        assert_eq!(r.sym.j[0].twice(), 2);
        // k3 → k2 → k1 → j4 → j3 → j2 → j1
        assert_eq!(r.shifts, 6);
        let back = (0..r.shifts).fold(s.clone(), |acc, _| acc.shifted());
        assert_eq!(back, r.sym);
    }

    #[test]
    fn sigma_flip_pairs_contribute_equally() {
        let s = sym(&[1, 161, 161, 161, 161], &[160, 150, 170, 140, 161], &[160, 160, 160, 160, 160]);
        let a = asym_3nj(&s, &SmallSpinMarking::j1_with_l(&[]), &AsymOptions::default()).unwrap();
        let c = &a.diagnostics.sign_configs;
        assert_eq!(c.len(), 8);
        for i in 0..8 {
            let flipped = c.iter().find(|o| o.config.sigma.iter().zip(&c[i].config.sigma).all(|(x, y)| x == &-y));
            let diff = (flipped.unwrap().contribution - c[i].contribution).abs();
            assert!(diff < 1e-12 * a.value.abs().max(1e-300) + 1e-18, "{diff}");
        }
    }

    #[test]
    fn twelve_j_tracks_exact() {
        // n = 4 with one small spin: both tetrahedra large; check sign and rough size
        let s = sym(&[2, 120, 120, 120], &[120, 110, 130, 122], &[120, 120, 120, 120]);
        let mark = SmallSpinMarking::j1_with_l(&[]);
        let a = asym_3nj(&s, &mark, &AsymOptions::default()).unwrap().value;
        let e = wigner3nj(&s, 30).unwrap().to_f64();
        assert!(e != 0.0);
        assert!((a - e).abs() < 0.3 * e.abs(), "asym {a} exact {e}");
    }
}
