//! Racah single sums for 3j and 6j symbols.

use rug::{Integer, Rational};

use super::ledger::{Exponents, FactorialLedger, Table};
use super::sqrt_rational::SqrtRational;
use crate::spin::{triad_allowed, HalfInt};

/// A factorial `(offset + slope·z)!` with `slope = ±1`.
#[derive(Clone, Copy, Debug)]
struct Fact {
    offset: i64,
    slope: i64,
}

impl Fact {
    const fn up(offset: i64) -> Self {
        Fact { offset, slope: 1 }
    }
    const fn down(offset: i64) -> Self {
        Fact { offset, slope: -1 }
    }
    fn at(&self, z: i64) -> i64 {
        self.offset + self.slope * z
    }
}

/// `sign · √Δ² · Σ_z (-1)^z Π num! / Π den!`, everything in integers.
struct Series {
    sign: i32,
    /// factorial arguments of Δ² (numerator, denominator)
    delta_num: Vec<i64>,
    delta_den: Vec<i64>,
    num: Vec<Fact>,
    den: Vec<Fact>,
}

impl Series {
    fn z_range(&self) -> (i64, i64) {
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for f in self.num.iter().chain(&self.den) {
            if f.slope > 0 {
                lo = lo.max(-f.offset);
            } else {
                hi = hi.min(f.offset);
            }
        }
        (lo, hi)
    }

    fn max_argument(&self, lo: i64, hi: i64) -> usize {
        let mut m = 1i64;
        for f in self.num.iter().chain(&self.den) {
            m = m.max(f.at(lo)).max(f.at(hi));
        }
        for &a in self.delta_num.iter().chain(&self.delta_den) {
            m = m.max(a);
        }
        m as usize
    }

    fn evaluate(&self, ledger: &FactorialLedger) -> SqrtRational {
        let (lo, hi) = self.z_range();
        if lo > hi {
            return SqrtRational::zero();
        }
        let table = ledger.snapshot(self.max_argument(lo, hi) + 1);
        let width = table.factorial(table.limit()).len();

        // exponent vector of every term, walked incrementally
        let mut e: Exponents = vec![0; width];
        for f in &self.num {
            table.add_factorial(&mut e, f.at(lo) as usize, 1);
        }
        for f in &self.den {
            table.add_factorial(&mut e, f.at(lo) as usize, -1);
        }
        let first = e.clone();
        let mut gcd = e.clone();
        // per-step integer ratio P_z / Q_z of consecutive terms
        let mut steps: Vec<(Integer, Integer)> = Vec::with_capacity((hi - lo) as usize);
        for z in lo..hi {
            let mut p = Integer::from(1);
            let mut q = Integer::from(1);
            let mut step = |m: i64, up: bool, e: &mut Exponents| {
                let m = m as usize;
                table.for_each_factor(m, |i, k| e[i] += if up { k } else { -k });
                if up {
                    p *= m as u64;
                } else {
                    q *= m as u64;
                }
            };
            for f in &self.num {
                if f.slope > 0 {
                    step(f.at(z) + 1, true, &mut e);
                } else {
                    step(f.at(z), false, &mut e);
                }
            }
            for f in &self.den {
                if f.slope > 0 {
                    step(f.at(z) + 1, false, &mut e);
                } else {
                    step(f.at(z), true, &mut e);
                }
            }
            for (g, &x) in gcd.iter_mut().zip(&e) {
                *g = (*g).min(x);
            }
            steps.push((p, q));
        }

        // N_z = term_z / G, an integer for every z
        let shifted: Exponents = first.iter().zip(&gcd).map(|(a, g)| a - g).collect();
        let mut n_z = table.positive_part(&shifted);
        let mut sum = Integer::new();
        for (i, z) in (lo..=hi).enumerate() {
            if z % 2 == 0 {
                sum += &n_z;
            } else {
                sum -= &n_z;
            }
            if let Some((p, q)) = steps.get(i) {
                n_z *= p;
                n_z.div_exact_mut(q);
            }
        }
        if sum == 0 {
            return SqrtRational::zero();
        }

        let mut sq = vec![0i32; width];
        for (s, g) in sq.iter_mut().zip(&gcd) {
            *s = 2 * g;
        }
        for &a in &self.delta_num {
            table.add_factorial(&mut sq, a as usize, 1);
        }
        for &a in &self.delta_den {
            table.add_factorial(&mut sq, a as usize, -1);
        }
        finish(&table, self.sign * sum.cmp0() as i32, sum.abs(), &sq)
    }
}

/// `sign · s · √(Π p^sq)` in canonical form.
fn finish(table: &Table, sign: i32, s: Integer, sq: &[i32]) -> SqrtRational {
    let half: Vec<i32> = sq.iter().map(|e| e.div_euclid(2)).collect();
    let odd: Vec<i32> = sq.iter().map(|e| e.rem_euclid(2)).collect();
    let num = s * table.positive_part(&half);
    let den = table.negative_part(&half);
    let rad = table.positive_part(&odd);
    SqrtRational::from_canonical(sign as i8, Rational::from((num, den)), rad)
}

fn half(twice: i64) -> i64 {
    debug_assert!(twice % 2 == 0);
    twice / 2
}

/// Δ² factorial arguments of a triad (twice-values in, integers out).
fn delta_args(a: i64, b: i64, c: i64, num: &mut Vec<i64>, den: &mut Vec<i64>) {
    num.push(half(a + b - c));
    num.push(half(a - b + c));
    num.push(half(-a + b + c));
    den.push(half(a + b + c) + 1);
}

/// Wigner 3j symbol; exactly zero for forbidden quantum numbers.
pub fn wigner3j(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> SqrtRational {
    wigner3j_with(FactorialLedger::global(), j1, j2, j3, m1, m2, m3)
}

pub fn wigner3j_with(
    ledger: &FactorialLedger,
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> SqrtRational {
    if !triad_allowed(j1, j2, j3) || (m1 + m2 + m3) != HalfInt::ZERO {
        return SqrtRational::zero();
    }
    let (j1, j2, j3) = (j1.twice(), j2.twice(), j3.twice());
    let (m1, m2, m3) = (m1.twice(), m2.twice(), m3.twice());
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if m.abs() > j || (j - m) % 2 != 0 {
            return SqrtRational::zero();
        }
    }
    let mut delta_num = Vec::new();
    let mut delta_den = Vec::new();
    delta_args(j1, j2, j3, &mut delta_num, &mut delta_den);
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        delta_num.push(half(j + m));
        delta_num.push(half(j - m));
    }
    let sign = if half(j1 - j2 - m3) % 2 == 0 { 1 } else { -1 };
    Series {
        sign,
        delta_num,
        delta_den,
        num: Vec::new(),
        den: vec![
            Fact::up(0),
            Fact::up(half(j3 - j2 + m1)),
            Fact::up(half(j3 - j1 - m2)),
            Fact::down(half(j1 + j2 - j3)),
            Fact::down(half(j1 - m1)),
            Fact::down(half(j2 + m2)),
        ],
    }
    .evaluate(ledger)
}

/// Wigner 6j symbol `{a b c; d e f}`.
pub fn wigner6j(a: HalfInt, b: HalfInt, c: HalfInt, d: HalfInt, e: HalfInt, f: HalfInt) -> SqrtRational {
    wigner6j_with(FactorialLedger::global(), [a, b, c, d, e, f])
}

pub fn wigner6j_with(ledger: &FactorialLedger, s: [HalfInt; 6]) -> SqrtRational {
    let [a, b, c, d, e, f] = s;
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if !triads.iter().all(|&(x, y, z)| triad_allowed(x, y, z)) {
        return SqrtRational::zero();
    }
    let [a, b, c, d, e, f] = s.map(HalfInt::twice);
    let mut delta_num = Vec::new();
    let mut delta_den = Vec::new();
    let mut alpha = Vec::new();
    for (x, y, z) in [(a, b, c), (a, e, f), (d, b, f), (d, e, c)] {
        delta_args(x, y, z, &mut delta_num, &mut delta_den);
        alpha.push(half(x + y + z));
    }
    let beta = [half(a + b + d + e), half(a + c + d + f), half(b + c + e + f)];
    let mut den: Vec<Fact> = alpha.iter().map(|&al| Fact::up(-al)).collect();
    den.extend(beta.iter().map(|&be| Fact::down(be)));
    Series { sign: 1, delta_num, delta_den, num: vec![Fact::up(1)], den }.evaluate(ledger)
}
