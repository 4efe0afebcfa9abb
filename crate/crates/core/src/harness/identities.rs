//! Biedenharn-Elliott and orthogonality checks of the exact 6j engine.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use serde::Serialize;

use crate::exact::{bits_for_digits, wigner6j_with, FactorialLedger};
use crate::spin::{sign_pow, HalfInt};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub instances: usize,
    /// relative when the right-hand side is nonzero, absolute otherwise
    pub biedenharn_elliott_max_err: f64,
    pub orthogonality_max_err: f64,
    pub seconds: f64,
}

impl IdentityReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.biedenharn_elliott_max_err < tol && self.orthogonality_max_err < tol
    }
}

/// Twice-valued range allowed by every pair with matching parity.
fn window(pairs: &[(i64, i64)]) -> Option<(i64, i64)> {
    let parity = (pairs[0].0 + pairs[0].1) % 2;
    if pairs.iter().any(|(a, b)| (a + b) % 2 != parity) {
        return None;
    }
    let lo = pairs.iter().map(|(a, b)| (a - b).abs()).max()?;
    let hi = pairs.iter().map(|(a, b)| a + b).min()?;
    (lo <= hi).then_some((lo, hi))
}

fn pick(rng: &mut ChaCha8Rng, pairs: &[(i64, i64)]) -> Option<i64> {
    let (lo, hi) = window(pairs)?;
    Some(lo + 2 * rng.gen_range(0..=(hi - lo) / 2))
}

struct Ctx<'a> {
    ledger: &'a FactorialLedger,
    bits: u32,
}

impl Ctx<'_> {
    fn six(&self, t: [i64; 6]) -> Float {
        wigner6j_with(self.ledger, t.map(HalfInt::from_twice)).to_float(self.bits)
    }

    fn err(&self, lhs: &Float, rhs: &Float) -> f64 {
        let diff = Float::with_val(self.bits, lhs - rhs).abs();
        if rhs.is_zero() {
            diff.to_f64()
        } else {
            (diff / rhs.clone().abs()).to_f64()
        }
    }
}

/// `Σ_x (−1)^{S+x} (2x+1) {a b x; c d p}{c d x; e f q}{e f x; b a r} = {p q r; e a d}{p q r; f b c}`
fn biedenharn_elliott(ctx: &Ctx, rng: &mut ChaCha8Rng, max: i64) -> f64 {
    loop {
        let [a, b, c, d, e, f] = [(); 6].map(|_| rng.gen_range(0..=max));
        let Some(p) = pick(rng, &[(a, d), (c, b)]) else { continue };
        let Some(q) = pick(rng, &[(c, f), (e, d)]) else { continue };
        let Some(r) = pick(rng, &[(e, a), (b, f), (p, q)]) else { continue };
        let Some((lo, hi)) = window(&[(a, b), (c, d), (e, f)]) else { continue };
        let s = a + b + c + d + e + f + p + q + r;
        let mut lhs = Float::with_val(ctx.bits, 0);
        for x in (lo..=hi).step_by(2) {
            let sign = sign_pow(s + x).expect("integer exponent for an admissible instance");
            let prod = ctx.six([a, b, x, c, d, p]) * ctx.six([c, d, x, e, f, q]) * ctx.six([e, f, x, b, a, r]);
            lhs += prod * ((sign as i64) * (x + 1));
        }
        let rhs = ctx.six([p, q, r, e, a, d]) * ctx.six([p, q, r, f, b, c]);
        return ctx.err(&lhs, &rhs);
    }
}

/// `Σ_x (2x+1)(2f+1) {a b x; c d f}{c d x; a b f'} = δ_{ff'}`
fn orthogonality(ctx: &Ctx, rng: &mut ChaCha8Rng, max: i64) -> f64 {
    loop {
        let [a, b, c, d] = [(); 4].map(|_| rng.gen_range(0..=max));
        let Some(f) = pick(rng, &[(a, d), (c, b)]) else { continue };
        let Some(f2) = pick(rng, &[(a, d), (c, b)]) else { continue };
        let Some((lo, hi)) = window(&[(a, b), (c, d)]) else { continue };
        let mut lhs = Float::with_val(ctx.bits, 0);
        for x in (lo..=hi).step_by(2) {
            lhs += ctx.six([a, b, x, c, d, f]) * ctx.six([c, d, x, a, b, f2]) * ((x + 1) * (f + 1));
        }
        let rhs = Float::with_val(ctx.bits, (f == f2) as i32);
        return ctx.err(&lhs, &rhs);
    }
}

/// Random instances with twice-spins up to `max_twice`, evaluated at `digits`.
pub fn verify_identities(instances: usize, max_twice: i64, digits: u32, seed: u64) -> IdentityReport {
    let start = Instant::now();
    let ledger = FactorialLedger::new();
    let ctx = Ctx { ledger: &ledger, bits: bits_for_digits(digits) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut be: f64 = 0.0;
    let mut orth: f64 = 0.0;
    for _ in 0..instances {
        be = be.max(biedenharn_elliott(&ctx, &mut rng, max_twice));
        orth = orth.max(orthogonality(&ctx, &mut rng, max_twice));
    }
    IdentityReport {
        instances,
        biedenharn_elliott_max_err: be,
        orthogonality_max_err: orth,
        seconds: start.elapsed().as_secs_f64(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parity() {
        assert_eq!(window(&[(2, 2), (4, 2)]), Some((2, 4)));
        assert_eq!(window(&[(1, 2)]), Some((1, 3)));
        assert_eq!(window(&[(1, 2), (2, 2)]), None);
    }

    #[test]
    fn small_run_holds() {
        let r = verify_identities(5, 8, 40, 7);
        assert!(r.passed(1e-30), "{r:?}");
    }
}
