//! The CP bijection, the extremal rank sequences and the rank-height bounds.

use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{ln_biguint, triangular};
use crate::tree::TreeShape;

/// CP rank of a shape. Shared subtrees are ranked once.
pub fn rank(t: &TreeShape) -> BigUint {
    t.fold(BigUint::one, rank_of_children)
}

/// `L(L-1)/2 + 1 + R` for children ranks `L >= R`.
pub fn rank_of_children(first: &BigUint, second: &BigUint) -> BigUint {
    triangular(first) + 1u32 + second
}

/// The shape with rank `k`.
///
/// For `k >= 2` the first child rank `L` is the unique value with
/// `T(L) + 2 <= k <= T(L+1) + 1`, `T(m) = m(m-1)/2`; the second child rank
/// is `k - T(L) - 1`.
pub fn unrank(k: &BigUint) -> Result<TreeShape> {
    if k.is_zero() {
        return Err(Error::ZeroRank);
    }
    Ok(unrank_positive(k))
}

pub fn unrank_u64(k: u64) -> Result<TreeShape> {
    unrank(&BigUint::from(k))
}

fn unrank_positive(k: &BigUint) -> TreeShape {
    if k.is_one() {
        return TreeShape::leaf();
    }
    let (first, second) = split_rank(k);
    let a = unrank_positive(&first);
    let b = if first == second {
        a.clone()
    } else {
        unrank_positive(&second)
    };
    TreeShape::from_ordered(a, b)
}

/// Children ranks `(L, R)` of a rank `k >= 2`.
pub fn split_rank(k: &BigUint) -> (BigUint, BigUint) {
    debug_assert!(*k >= BigUint::from(2u32));
    let m = k - 2u32;
    let disc: BigUint = (&m << 3u32) + 1u32;
    let mut first: BigUint = (disc.sqrt() + 1u32) >> 1u32;
    // Integer square root is exact; the loops only guard the invariant.
    while triangular(&first) > m {
        first -= 1u32;
    }
    while triangular(&(&first + 1u32)) <= m {
        first += 1u32;
    }
    let second = k - triangular(&first) - 1u32;
    debug_assert!(!second.is_zero() && second <= first);
    (first, second)
}

/// Caterpillar ranks `c_h` and pseudocaterpillar ranks `d_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalSeqs {
    /// `c[h]` for `h = 0..=h_max`.
    pub c: Vec<BigUint>,
    /// `d[i] = d_{i+2}` for `h = 2..=h_max`.
    pub d: Vec<BigUint>,
}

impl ExtremalSeqs {
    pub fn c(&self, h: usize) -> Option<&BigUint> {
        self.c.get(h)
    }

    pub fn d(&self, h: usize) -> Option<&BigUint> {
        h.checked_sub(2).and_then(|i| self.d.get(i))
    }
}

/// `x -> x(x-1)/2 + 2`, the recursion shared by `c_h` and `d_h`.
fn extremal_step(x: &BigUint) -> BigUint {
    triangular(x) + 2u32
}

/// `c_0 = 1` and `d_2 = 4`, both continued by `x -> C(x, 2) + 2`.
pub fn extremal_seqs(h_max: usize) -> ExtremalSeqs {
    let mut c = vec![BigUint::one()];
    while c.len() <= h_max {
        let next = extremal_step(c.last().expect("nonempty"));
        c.push(next);
    }
    let mut d = Vec::new();
    if h_max >= 2 {
        d.push(BigUint::from(4u32));
        while d.len() + 2 <= h_max {
            let next = extremal_step(d.last().expect("nonempty"));
            d.push(next);
        }
    }
    ExtremalSeqs { c, d }
}

/// `c_h`, the rank of the caterpillar of height `h`.
pub fn caterpillar_rank(h: usize) -> BigUint {
    let mut c = BigUint::one();
    for _ in 0..h {
        c = extremal_step(&c);
    }
    c
}

/// `d_h`, the rank of the pseudocaterpillar of height `h >= 2`.
pub fn pseudocaterpillar_rank(h: usize) -> Option<BigUint> {
    if h < 2 {
        return None;
    }
    let mut d = BigUint::from(4u32);
    for _ in 2..h {
        d = extremal_step(&d);
    }
    Some(d)
}

/// Inclusive rank range `(c_h, c_{h+1} - 1)` of the shapes of height `h`.
pub fn height_rank_bounds(h: usize) -> (BigUint, BigUint) {
    let low = caterpillar_rank(h);
    let high = extremal_step(&low) - 1u32;
    (low, high)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightMode {
    AtMost,
    Exactly,
}

/// Number of shapes of height at most / exactly `h`.
pub fn count_by_height(h: usize, mode: HeightMode) -> BigUint {
    let (low, high) = height_rank_bounds(h);
    match mode {
        HeightMode::AtMost => high,
        HeightMode::Exactly => high + 1u32 - low,
    }
}

/// Size of `f(t)` in whichever domain still fits.
#[derive(Debug, Clone)]
enum Magnitude {
    Exact(BigUint),
    /// `ln f`, once `f` exceeds [`EXACT_BITS`] bits.
    Ln(f64),
    /// `log2 ln f`, once `ln f` itself would overflow.
    Log2Ln(f64),
}

const EXACT_BITS: u64 = 4096;
const LN_SWITCH: f64 = 1e300;

impl Magnitude {
    fn combine(first: &Magnitude, second: &Magnitude) -> Magnitude {
        match (first, second) {
            (Magnitude::Exact(l), Magnitude::Exact(r)) => {
                let f = rank_of_children(l, r);
                if f.bits() > EXACT_BITS {
                    Magnitude::Ln(ln_biguint(&f))
                } else {
                    Magnitude::Exact(f)
                }
            }
            // With L > 2^2048, ln(L(L-1)/2 + 1 + R) = 2 ln L - ln 2 up to
            // a relative term below 2^-2000.
            (Magnitude::Ln(u), _) => {
                if *u > LN_SWITCH {
                    Magnitude::Log2Ln(1.0 + u.log2())
                } else {
                    Magnitude::Ln(2.0 * u - LN_2)
                }
            }
            (Magnitude::Log2Ln(v), _) => Magnitude::Log2Ln(1.0 + v),
            (Magnitude::Exact(_), _) => unreachable!("second child outranks the first"),
        }
    }

    fn log2_ln(&self) -> f64 {
        match self {
            Magnitude::Exact(f) => ln_biguint(f).log2(),
            Magnitude::Ln(u) => u.log2(),
            Magnitude::Log2Ln(v) => *v,
        }
    }
}

/// `log2(ln f(t))` with natural inner logarithm.
///
/// Ranks up to 4096 bits are evaluated exactly and converted through their
/// leading 64 bits. Above that the recursion continues in log domain, so
/// shapes of any height are handled without materializing `f(t)`.
pub fn double_log_rank(t: &TreeShape) -> Result<f64> {
    if t.is_leaf() {
        return Err(Error::LeafLogLog);
    }
    let m = t.fold(|| Magnitude::Exact(BigUint::one()), Magnitude::combine);
    Ok(m.log2_ln())
}

/// `log2(ln k)` for an exact rank `k >= 2`.
pub fn double_log_of_rank(k: &BigUint) -> Result<f64> {
    if k.to_u64() == Some(1) || k.is_zero() {
        return Err(Error::LeafLogLog);
    }
    Ok(ln_biguint(k).log2())
}
