//! 9j, 15j and general 3nj symbols as sums over products of exact 6j symbols.

use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use super::ledger::FactorialLedger;
use super::racah::wigner6j_with;
use super::{bits_for_digits, ExactError};
use crate::spin::{sign_pow, triad_allowed, HalfInt, Triad};

/// `{j1 j2 j12; s j4 j34; j13 j24 j5}`, stored row by row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol9j {
    pub rows: [[HalfInt; 3]; 3],
}

impl Symbol9j {
    pub fn new(rows: [[HalfInt; 3]; 3]) -> Self {
        Symbol9j { rows }
    }

    /// Row-major twice-values.
    pub fn from_twice(t: [i64; 9]) -> Self {
        let h = HalfInt::from_twice;
        Symbol9j { rows: [[h(t[0]), h(t[1]), h(t[2])], [h(t[3]), h(t[4]), h(t[5])], [h(t[6]), h(t[7]), h(t[8])]] }
    }

    pub fn entries(&self) -> [HalfInt; 9] {
        let r = &self.rows;
        [r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]]
    }

    pub fn triads(&self) -> [Triad; 6] {
        let r = &self.rows;
        let t = |a: HalfInt, b: HalfInt, c: HalfInt| Triad::new(a, b, c);
        [
            t(r[0][0], r[0][1], r[0][2]),
            t(r[1][0], r[1][1], r[1][2]),
            t(r[2][0], r[2][1], r[2][2]),
            t(r[0][0], r[1][0], r[2][0]),
            t(r[0][1], r[1][1], r[2][1]),
            t(r[0][2], r[1][2], r[2][2]),
        ]
    }

    pub fn is_admissible(&self) -> bool {
        self.triads().iter().all(Triad::is_allowed)
    }

    /// Sum of all nine entries.
    pub fn total(&self) -> HalfInt {
        self.entries().into_iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let r = &self.rows;
        Symbol9j { rows: [[r[0][0], r[1][0], r[2][0]], [r[0][1], r[1][1], r[2][1]], [r[0][2], r[1][2], r[2][2]]] }
    }

    pub fn swap_rows(&self, i: usize, k: usize) -> Self {
        let mut s = *self;
        s.rows.swap(i, k);
        s
    }

    pub fn swap_cols(&self, i: usize, k: usize) -> Self {
        let mut s = *self;
        for row in s.rows.iter_mut() {
            row.swap(i, k);
        }
        s
    }
}

impl fmt::Display for Symbol9j {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "{{{} {} {}; {} {} {}; {} {} {}}}",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

/// Grid entry whose coupling with `s` (the `(2,1)` slot) is summed over.
///
/// Only the four entries outside the row and column of `s` qualify.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pivot {
    #[default]
    J24,
    J2,
    J12,
    J5,
}

impl Pivot {
    pub const ALL: [Pivot; 4] = [Pivot::J24, Pivot::J2, Pivot::J12, Pivot::J5];
}

impl FromStr for Pivot {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "j24" => Ok(Pivot::J24),
            "j2" => Ok(Pivot::J2),
            "j12" => Ok(Pivot::J12),
            "j5" => Ok(Pivot::J5),
            "j34" => Err("j34 shares a row with s, so it cannot pair with it; use j24, j2, j12 or j5".into()),
            other => Err(format!("unknown pivot `{other}`")),
        }
    }
}

impl fmt::Display for Pivot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pivot::J24 => "j24",
            Pivot::J2 => "j2",
            Pivot::J12 => "j12",
            Pivot::J5 => "j5",
        };
        f.write_str(s)
    }
}

/// Value of a symbol sum together with each summand.
#[derive(Clone, Debug)]
pub struct SumTrace {
    pub value: Float,
    pub terms: Vec<(HalfInt, Float)>,
}

impl SumTrace {
    fn zero(bits: u32) -> Self {
        SumTrace { value: Float::with_val(bits, 0), terms: Vec::new() }
    }
}

/// Twice-valued x window shared by all the pairs, or `None` if empty.
fn window(pairs: &[(HalfInt, HalfInt)]) -> Option<(i64, i64)> {
    let mut lo = 0i64;
    let mut hi = i64::MAX;
    for &(a, b) in pairs {
        lo = lo.max((a - b).abs().twice());
        hi = hi.min((a + b).twice());
    }
    let parity = (pairs[0].0 + pairs[0].1).twice().rem_euclid(2);
    if lo.rem_euclid(2) != parity {
        lo += 1;
    }
    (lo <= hi).then_some((lo, hi))
}

/// 9j symbol as a sum over three 6j symbols, paired at `pivot`.
pub fn wigner9j(sym: &Symbol9j, pivot: Pivot, digits: u32) -> SumTrace {
    wigner9j_with(FactorialLedger::global(), sym, pivot, digits)
}

pub fn wigner9j_with(ledger: &FactorialLedger, sym: &Symbol9j, pivot: Pivot, digits: u32) -> SumTrace {
    let bits = bits_for_digits(digits);
    if !sym.is_admissible() {
        return SumTrace::zero(bits);
    }
    // move the pivot to (3,2) keeping s at (2,1); odd permutations cost (-1)^R
    let (grid, odd) = match pivot {
        Pivot::J24 => (*sym, false),
        Pivot::J2 => (sym.swap_rows(0, 2), true),
        Pivot::J12 => (sym.swap_rows(0, 2).swap_cols(1, 2), false),
        Pivot::J5 => (sym.swap_cols(1, 2), true),
    };
    let sign = if odd {
        sign_pow(sym.total().twice()).expect("admissible 9j has an integer entry sum")
    } else {
        1
    };
    let [a, b, c, d, e, f, g, h, i] = grid.entries();
    let Some((lo, hi)) = window(&[(a, i), (b, f), (d, h)]) else {
        return SumTrace::zero(bits);
    };
    let mut value = Float::with_val(bits, 0);
    let mut terms = Vec::new();
    for xt in (lo..=hi).step_by(2) {
        let x = HalfInt::from_twice(xt);
        let s1 = wigner6j_with(ledger, [a, b, c, f, i, x]);
        let s2 = wigner6j_with(ledger, [d, e, f, b, x, h]);
        let s3 = wigner6j_with(ledger, [g, h, i, x, a, d]);
        let prod = &(&s1 * &s2) * &s3;
        let mut t = prod.to_float(bits) * x.dim();
        if xt % 2 != 0 {
            t = -t;
        }
        if sign < 0 {
            t = -t;
        }
        value += &t;
        terms.push((x, t));
    }
    SumTrace { value, terms }
}

/// First-kind 3nj symbol with rows `j`, `l`, `k` of equal length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol3nj {
    pub j: Vec<HalfInt>,
    pub l: Vec<HalfInt>,
    pub k: Vec<HalfInt>,
}

impl Symbol3nj {
    pub fn new(j: Vec<HalfInt>, l: Vec<HalfInt>, k: Vec<HalfInt>) -> Result<Self, ExactError> {
        let n = j.len();
        if n < 3 || l.len() != n || k.len() != n {
            return Err(ExactError::Shape(format!(
                "rows must share a length n >= 3, got {}/{}/{}",
                j.len(),
                l.len(),
                k.len()
            )));
        }
        Ok(Symbol3nj { j, l, k })
    }

    pub fn from_twice(j: &[i64], l: &[i64], k: &[i64]) -> Result<Self, ExactError> {
        let h = |v: &[i64]| v.iter().map(|&t| HalfInt::from_twice(t)).collect();
        Self::new(h(j), h(l), h(k))
    }

    pub fn n(&self) -> usize {
        self.j.len()
    }

    /// `R_n`, the sum of all 3n entries.
    pub fn total(&self) -> HalfInt {
        self.j.iter().chain(&self.k).chain(&self.l).copied().sum()
    }

    /// The 2n coupled triads.
    pub fn triads(&self) -> Vec<Triad> {
        let n = self.n();
        let (j, k, l) = (&self.j, &self.k, &self.l);
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let next_j = if i + 1 < n { j[i + 1] } else { k[0] };
            let next_k = if i + 1 < n { k[i + 1] } else { j[0] };
            out.push(Triad::new(j[i], l[i], next_j));
            out.push(Triad::new(k[i], l[i], next_k));
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        self.triads().iter().all(Triad::is_allowed)
    }

    /// One step of the cyclic symmetry: `j → (j2..jn, k1)`, `k → (k2..kn, j1)`, `l → (l2..ln, l1)`.
    pub fn shifted(&self) -> Self {
        let n = self.n();
        let mut j: Vec<HalfInt> = self.j[1..].to_vec();
        j.push(self.k[0]);
        let mut k: Vec<HalfInt> = self.k[1..].to_vec();
        k.push(self.j[0]);
        let mut l: Vec<HalfInt> = self.l[1..].to_vec();
        l.push(self.l[0]);
        debug_assert_eq!(j.len(), n);
        Symbol3nj { j, l, k }
    }

    pub fn rows_exchanged(&self) -> Self {
        Symbol3nj { j: self.k.clone(), l: self.l.clone(), k: self.j.clone() }
    }

    /// The 6j factor `i` (0-based) of the chain decomposition, with `x` in slot three.
    fn factor(&self, i: usize, x: HalfInt) -> [HalfInt; 6] {
        let n = self.n();
        let (j, k, l) = (&self.j, &self.k, &self.l);
        if i + 1 < n {
            [j[i], k[i], x, k[i + 1], j[i + 1], l[i]]
        } else {
            [j[n - 1], k[n - 1], x, j[0], k[0], l[n - 1]]
        }
    }
}

impl fmt::Display for Symbol3nj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |v: &[HalfInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "{{{}; {}; {}}}", row(&self.j), row(&self.l), row(&self.k))
    }
}

/// 3nj symbol of the first kind, `Σ_x d_x (-1)^{R_n+(n-1)x} Π 6j`.
pub fn wigner3nj(sym: &Symbol3nj, digits: u32) -> Result<Float, ExactError> {
    wigner3nj_with(FactorialLedger::global(), sym, digits).map(|t| t.value)
}

pub fn wigner3nj_with(ledger: &FactorialLedger, sym: &Symbol3nj, digits: u32) -> Result<SumTrace, ExactError> {
    let bits = bits_for_digits(digits);
    if !sym.is_admissible() {
        return Ok(SumTrace::zero(bits));
    }
    let n = sym.n();
    let pairs: Vec<(HalfInt, HalfInt)> = (0..n).map(|i| (sym.j[i], sym.k[i])).collect();
    let Some((lo, hi)) = window(&pairs) else {
        return Ok(SumTrace::zero(bits));
    };
    let r = sym.total().twice();
    let mut value = Float::with_val(bits, 0);
    let mut terms = Vec::new();
    for xt in (lo..=hi).step_by(2) {
        let x = HalfInt::from_twice(xt);
        let sign = sign_pow(r + (n as i64 - 1) * xt)
            .ok_or_else(|| ExactError::Parity(format!("R_n + (n-1)x is not an integer at x = {x}")))?;
        let mut prod = wigner6j_with(ledger, sym.factor(0, x));
        for i in 1..n {
            if prod.is_zero() {
                break;
            }
            prod = &prod * &wigner6j_with(ledger, sym.factor(i, x));
        }
        let mut t = prod.to_float(bits) * x.dim();
        if sign < 0 {
            t = -t;
        }
        value += &t;
        terms.push((x, t));
    }
    Ok(SumTrace { value, terms })
}

/// 15j symbol with rows `j`, `l`, `k`, written out factor by factor.
pub fn wigner15j(j: [HalfInt; 5], l: [HalfInt; 5], k: [HalfInt; 5], digits: u32) -> Result<Float, ExactError> {
    let ledger = FactorialLedger::global();
    let bits = bits_for_digits(digits);
    let sym = Symbol3nj { j: j.to_vec(), l: l.to_vec(), k: k.to_vec() };
    if !sym.is_admissible() {
        return Ok(Float::with_val(bits, 0));
    }
    let mut lo = 0;
    let mut hi = i64::MAX;
    for i in 0..5 {
        lo = lo.max((j[i] - k[i]).abs().twice());
        hi = hi.min((j[i] + k[i]).twice());
    }
    if (lo + (j[0] + k[0]).twice()) % 2 != 0 {
        lo += 1;
    }
    let r5: HalfInt = j.iter().chain(&k).chain(&l).copied().sum();
    let sign = sign_pow(r5.twice()).ok_or_else(|| ExactError::Parity("R_5 is not an integer".into()))?;
    let mut value = Float::with_val(bits, 0);
    for xt in (lo..=hi).step_by(2) {
        let x = HalfInt::from_twice(xt);
        let f1 = wigner6j_with(ledger, [j[0], k[0], x, k[1], j[1], l[0]]);
        let f2 = wigner6j_with(ledger, [j[1], k[1], x, k[2], j[2], l[1]]);
        let f3 = wigner6j_with(ledger, [j[2], k[2], x, k[3], j[3], l[2]]);
        let f4 = wigner6j_with(ledger, [j[3], k[3], x, k[4], j[4], l[3]]);
        let f5 = wigner6j_with(ledger, [j[4], k[4], x, j[0], k[0], l[4]]);
        let prod = &(&(&(&f1 * &f2) * &f3) * &f4) * &f5;
        value += prod.to_float(bits) * x.dim();
    }
    if sign < 0 {
        value = -value;
    }
    Ok(value)
}

/// Checks the triad conditions of a 6j layout.
pub fn six_j_admissible(s: [HalfInt; 6]) -> bool {
    let [a, b, c, d, e, f] = s;
    triad_allowed(a, b, c) && triad_allowed(a, e, f) && triad_allowed(d, b, f) && triad_allowed(d, e, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn nine_j_with_zero_entry() {
        let s = Symbol9j::from_twice([2, 2, 2, 2, 2, 2, 2, 2, 0]);
        let v = wigner9j(&s, Pivot::J24, 50).value;
        assert!(close(&v, 1.0 / 18.0, 1e-30), "{v}");
    }

    #[test]
    fn nine_j_pivots_agree() {
        let s = Symbol9j::from_twice([10, 8, 6, 4, 6, 8, 8, 10, 4]);
        let base = wigner9j(&s, Pivot::J24, 50).value;
        assert!(base.to_f64() != 0.0);
        for p in Pivot::ALL {
            let v = wigner9j(&s, p, 50).value;
            let diff = Float::with_val(200, &v - &base).abs().to_f64();
            assert!(diff < 1e-30 * base.to_f64().abs(), "{p}: {v} vs {base}");
        }
    }

    #[test]
    fn j34_pivot_is_rejected() {
        assert!("j34".parse::<Pivot>().is_err());
        assert_eq!("j12".parse::<Pivot>(), Ok(Pivot::J12));
    }

    #[test]
    fn empty_window_gives_zero() {
        let s = Symbol3nj::from_twice(&[2, 2, 2, 2], &[0, 0, 0, 0], &[20, 20, 20, 20]).unwrap();
        // triads fail (j4, l4, k1) = (1, 0, 10)
        assert_eq!(wigner3nj(&s, 30).unwrap().to_f64(), 0.0);
    }
}
