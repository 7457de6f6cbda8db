//! Exact-integer helpers and the text encodings shared by the CLI and the
//! figure emitters.

use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Natural logarithm of a big natural number, from its bit length and its
/// leading 64 bits. Relative error is at the level of one f64 rounding.
///
/// Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * LN_2
}

/// `num / den` rounded to binary64 without overflow, for arbitrary sizes.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries 65..=66 significant bits.
    let shift = num.bits() as i64 - den.bits() as i64 - 65;
    let q = if shift >= 0 {
        num / (den << shift as u64)
    } else {
        (num << (-shift) as u64) / den
    };
    let q = q.to_f64().expect("quotient is finite");
    q * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Nonnegative exact rational to binary64.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs().to_biguint().expect("nonnegative");
    let den = r.denom().abs().to_biguint().expect("nonnegative");
    sign * ratio_to_f64(&num, &den)
}

/// Builds `num / den` in lowest terms. The gcd is taken as
/// `gcd(num mod den, den)` so a huge numerator over a small denominator costs
/// one division instead of a quadratic binary gcd.
pub fn reduced_ratio(num: BigUint, den: BigUint) -> BigRational {
    assert!(!den.is_zero(), "division by zero");
    let g = (&num % &den).gcd(&den);
    let (num, den) = if g.is_one() || g.is_zero() {
        (num, den)
    } else {
        (num / &g, den / &g)
    };
    BigRational::new_raw(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(2n-3)!!` with `(-1)!! = 1!! = 1`.
pub fn odd_double_factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = 3;
    while k + 3 <= 2 * n {
        acc *= k;
        k += 2;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `m(m-1)/2`.
pub fn triangular(m: &BigUint) -> BigUint {
    if m.is_zero() {
        return BigUint::zero();
    }
    (m * (m - 1u32)) >> 1u32
}

/// Binary64 as decimal text with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Exact rational as `numerator/denominator` in lowest terms.
pub fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `log2(ln x)` for an exact positive rational; `None` where undefined
/// (`x <= 1`).
pub fn log2_ln_rational(r: &BigRational) -> Option<f64> {
    if !r.is_positive() {
        return None;
    }
    let num = r.numer().to_biguint()?;
    let den = r.denom().to_biguint()?;
    if num <= den {
        return None;
    }
    // ln(num/den) computed from the two logarithms cancels badly near 1.
    let ln = if num.bits() < 60 && den.bits() < 60 {
        (ratio_to_f64(&num, &den)).ln()
    } else {
        let ln = ln_biguint(&num) - ln_biguint(&den);
        if ln < 1e-3 {
            ratio_to_f64(&num, &den).ln()
        } else {
            ln
        }
    };
    Some(ln.log2())
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
