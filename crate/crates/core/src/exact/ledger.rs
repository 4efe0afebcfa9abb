//! Factorials as prime-exponent vectors.
//!
//! Every factorial quotient in the Racah sums is handled as a vector of
//! prime exponents; big integers are only built for the final reduced terms.

use std::sync::{Arc, OnceLock, RwLock};

use rug::Integer;

/// Exponent vector indexed by prime index (2, 3, 5, ...).
pub type Exponents = Vec<i32>;

/// Read-only snapshot of the ledger, valid for all arguments `<= limit`.
#[derive(Debug)]
pub struct Table {
    limit: usize,
    primes: Vec<u32>,
    /// smallest prime factor, as an index into `primes`
    spf: Vec<u32>,
    facts: Vec<Exponents>,
}

impl Table {
    fn build(limit: usize) -> Table {
        let limit = limit.max(16);
        let mut spf = vec![u32::MAX; limit + 1];
        let mut primes = Vec::new();
        for n in 2..=limit {
            if spf[n] == u32::MAX {
                let idx = primes.len() as u32;
                primes.push(n as u32);
                let mut m = n;
                while m <= limit {
                    if spf[m] == u32::MAX {
                        spf[m] = idx;
                    }
                    m += n;
                }
            }
        }
        let mut facts: Vec<Exponents> = Vec::with_capacity(limit + 1);
        facts.push(Vec::new());
        facts.push(Vec::new());
        for n in 2..=limit {
            let mut e = facts[n - 1].clone();
            let mut m = n;
            while m > 1 {
                let p = spf[m] as usize;
                if e.len() <= p {
                    e.resize(p + 1, 0);
                }
                e[p] += 1;
                m /= primes[p] as usize;
            }
            facts.push(e);
        }
        Table { limit, primes, spf, facts }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Exponent vector of `n!` (trailing zeros trimmed).
    pub fn factorial(&self, n: usize) -> &[i32] {
        &self.facts[n]
    }

    /// Calls `f(prime_index, multiplicity)` for each prime factor of `m >= 1`.
    pub fn for_each_factor(&self, mut m: usize, mut f: impl FnMut(usize, i32)) {
        debug_assert!(m >= 1 && m <= self.limit);
        while m > 1 {
            let p = self.spf[m] as usize;
            let q = self.primes[p] as usize;
            let mut k = 0;
            while m.is_multiple_of(q) {
                m /= q;
                k += 1;
            }
            f(p, k);
        }
    }

    /// `acc += sign * exps(n!)`.
    pub fn add_factorial(&self, acc: &mut Exponents, n: usize, sign: i32) {
        let e = &self.facts[n];
        if acc.len() < e.len() {
            acc.resize(e.len(), 0);
        }
        for (a, &x) in acc.iter_mut().zip(e) {
            *a += sign * x;
        }
    }

    /// Product of `p^e` over the positive entries of `exps`.
    pub fn positive_part(&self, exps: &[i32]) -> Integer {
        self.product(exps, 1)
    }

    /// Product of `p^-e` over the negative entries of `exps`.
    pub fn negative_part(&self, exps: &[i32]) -> Integer {
        self.product(exps, -1)
    }

    fn product(&self, exps: &[i32], sign: i32) -> Integer {
        let mut acc = Integer::from(1);
        for (i, &e) in exps.iter().enumerate() {
            let e = e * sign;
            if e > 0 {
                acc *= Integer::from(Integer::u_pow_u(self.primes[i], e as u32));
            }
        }
        acc
    }
}

/// Shared factorial table that grows on demand.
///
/// Readers take a cheap `Arc` snapshot; growth builds a larger table under
/// the write lock and then publishes it.
#[derive(Debug)]
pub struct FactorialLedger {
    inner: RwLock<Arc<Table>>,
}

impl Default for FactorialLedger {
    fn default() -> Self {
        Self::new()
    }
}

impl FactorialLedger {
    pub fn new() -> Self {
        FactorialLedger { inner: RwLock::new(Arc::new(Table::build(64))) }
    }

    /// Process-wide ledger.
    pub fn global() -> &'static FactorialLedger {
        static LEDGER: OnceLock<FactorialLedger> = OnceLock::new();
        LEDGER.get_or_init(FactorialLedger::new)
    }

    /// A table covering every argument up to `n`.
    pub fn snapshot(&self, n: usize) -> Arc<Table> {
        {
            let t = self.inner.read().unwrap_or_else(|e| e.into_inner());
            if t.limit >= n {
                return Arc::clone(&t);
            }
        }
        let mut w = self.inner.write().unwrap_or_else(|e| e.into_inner());
        if w.limit < n {
            let target = n.max(2 * w.limit);
            *w = Arc::new(Table::build(target));
        }
        Arc::clone(&w)
    }

    /// `n!` rebuilt from its exponent vector.
    pub fn factorial(&self, n: usize) -> Integer {
        let t = self.snapshot(n);
        t.positive_part(t.factorial(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials() {
        let l = FactorialLedger::new();
        assert_eq!(l.factorial(0), 1);
        assert_eq!(l.factorial(1), 1);
        assert_eq!(l.factorial(5), 120);
        assert_eq!(l.factorial(10), 3_628_800);
    }

    #[test]
    fn grows_and_keeps_old_snapshots_valid() {
        let l = FactorialLedger::new();
        let small = l.snapshot(10);
        let big = l.snapshot(500);
        assert!(big.limit() >= 500);
        assert_eq!(small.factorial(7), big.factorial(7));
    }

    #[test]
    fn factorization() {
        let t = Table::build(400);
        let mut seen = Vec::new();
        t.for_each_factor(360, |p, k| seen.push((t.primes()[p], k)));
        assert_eq!(seen, vec![(2, 3), (3, 2), (5, 1)]);
    }
}
