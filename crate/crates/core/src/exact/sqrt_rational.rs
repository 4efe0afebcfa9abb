use std::fmt;
use std::ops::Mul;

use rug::{Float, Integer, Rational};

/// `sign · rat · √rad` with `rat > 0` and `rad` a squarefree positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtRational {
    sign: i8,
    rat: Rational,
    rad: Integer,
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational { sign: 0, rat: Rational::from(0), rad: Integer::from(1) }
    }

    /// Assumes `rad` is already squarefree and positive, `rat` positive.
    pub(crate) fn from_canonical(sign: i8, rat: Rational, rad: Integer) -> Self {
        if sign == 0 {
            return Self::zero();
        }
        debug_assert!(rat > 0 && rad > 0);
        SqrtRational { sign, rat, rad }
    }

    pub fn from_rational(r: Rational) -> Self {
        let sign = r.cmp0() as i8;
        if sign == 0 {
            return Self::zero();
        }
        SqrtRational { sign, rat: r.abs(), rad: Integer::from(1) }
    }

    /// `sign · √q` for a non-negative rational `q`, brought to canonical form.
    ///
    /// Square extraction uses trial division, so keep `q` modest.
    pub fn signed_sqrt(sign: i8, q: Rational) -> Self {
        assert!(q >= 0, "negative radicand");
        if sign == 0 || q == 0 {
            return Self::zero();
        }
        let (num, den) = q.into_numer_denom();
        // √(n/d) = √(n d) / d
        let prod = num * &den;
        let (outside, inside) = split_square(prod);
        SqrtRational { sign: sign.signum(), rat: Rational::from((outside, den)), rad: inside }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn rat(&self) -> &Rational {
        &self.rat
    }

    pub fn rad(&self) -> &Integer {
        &self.rad
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Exact `value²` carrying the sign, i.e. `sign · rat² · rad`.
    pub fn signed_square(&self) -> Rational {
        let mut r = Rational::from(&self.rat * &self.rat) * &self.rad;
        if self.sign < 0 {
            r = -r;
        }
        r
    }

    pub fn to_float(&self, bits: u32) -> Float {
        if self.sign == 0 {
            return Float::with_val(bits, 0);
        }
        let root = Float::with_val(bits, &self.rad).sqrt();
        let v = root * Float::with_val(bits, &self.rat);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(128).to_f64()
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;

    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        if self.sign == 0 || rhs.sign == 0 {
            return SqrtRational::zero();
        }
        let g = Integer::from(self.rad.gcd_ref(&rhs.rad));
        let a = Integer::from(self.rad.div_exact_ref(&g));
        let b = Integer::from(rhs.rad.div_exact_ref(&g));
        let rat = Rational::from(&self.rat * &rhs.rat) * g;
        SqrtRational { sign: self.sign * rhs.sign, rat, rad: a * b }
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        if self.rad == 1 {
            write!(f, "{s}{}", self.rat)
        } else {
            write!(f, "{s}{}*sqrt({})", self.rat, self.rad)
        }
    }
}

/// `n = outside² · inside` with `inside` squarefree.
fn split_square(mut n: Integer) -> (Integer, Integer) {
    let mut outside = Integer::from(1);
    let mut inside = Integer::from(1);
    let mut p = 2u32;
    while Integer::from(p) * p <= n {
        let mut k = 0u32;
        while n.is_divisible_u(p) {
            n.div_exact_u_mut(p);
            k += 1;
        }
        if k > 0 {
            outside *= Integer::from(Integer::u_pow_u(p, k / 2));
            if k % 2 == 1 {
                inside *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    inside *= n;
    (outside, inside)
}
