//! Reference implementations used only by the tests. Each one is written
//! from the definitions, recursing over children, without touching the
//! library's tables or closed forms.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use cprank::TreeShape;

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn ratio(p: u64, q: u64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ratio_big(p: BigUint, q: BigUint) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Rank straight from the definition: the larger child rank plays `L`.
pub fn oracle_rank(t: &TreeShape) -> BigUint {
    match t.children() {
        None => BigUint::one(),
        Some((a, b)) => {
            let (x, y) = (oracle_rank(a), oracle_rank(b));
            let (l, r) = if x >= y { (x, y) } else { (y, x) };
            &l * (&l - 1u32) / 2u32 + 1u32 + r
        }
    }
}

/// Shapes with exactly `n` leaves, built by splitting `n = j + (n - j)`.
pub fn oracle_shapes(n_max: usize) -> Vec<Vec<TreeShape>> {
    let mut by_n: Vec<Vec<TreeShape>> = vec![Vec::new(), vec![TreeShape::leaf()]];
    for n in 2..=n_max {
        let mut here = Vec::new();
        for j in 1..=n / 2 {
            let big_side = &by_n[n - j];
            let small_side = &by_n[j];
            for (ia, a) in big_side.iter().enumerate() {
                for (ib, b) in small_side.iter().enumerate() {
                    if j == n - j && ib > ia {
                        continue;
                    }
                    here.push(TreeShape::node(a.clone(), b.clone()));
                }
            }
        }
        by_n.push(here);
    }
    by_n
}

fn binom(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn double_factorial_odd(m: u64) -> BigUint {
    // m!! for odd m (1 when m <= 1)
    let mut acc = BigUint::one();
    let mut k = m;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Number of leaf labelings of a shape, by distributing labels over the
/// two subtrees (halved when they are the same shape).
fn labelings(t: &TreeShape) -> BigRational {
    match t.children() {
        None => BigRational::one(),
        Some((a, b)) => {
            let n = t.leaf_count();
            let split = ratio_big(binom(n, a.leaf_count()), BigUint::one());
            let twin = if a == b { ratio(1, 2) } else { BigRational::one() };
            split * twin * labelings(a) * labelings(b)
        }
    }
}

pub fn oracle_labeled(t: &TreeShape) -> BigRational {
    let n = t.leaf_count();
    let total = if n == 1 {
        BigUint::one()
    } else {
        double_factorial_odd(2 * n - 3)
    };
    labelings(t) / ratio_big(total, BigUint::one())
}

/// Yule-Harding: the root split is uniform on `1..n-1` for ordered
/// subtrees, so an unordered split of unequal shapes gets twice the mass.
pub fn oracle_yule(t: &TreeShape) -> BigRational {
    match t.children() {
        None => BigRational::one(),
        Some((a, b)) => {
            let n = t.leaf_count();
            let mult = if a == b { 1 } else { 2 };
            ratio(mult, n - 1) * oracle_yule(a) * oracle_yule(b)
        }
    }
}

pub fn oracle_unordered(n_shapes: usize) -> BigRational {
    ratio(1, n_shapes as u64)
}

/// Caterpillar rank by iterating `x -> x(x-1)/2 + 2` from 1.
pub fn oracle_c(h: usize) -> BigUint {
    let mut c = BigUint::one();
    for _ in 0..h {
        c = &c * (&c - 1u32) / 2u32 + 2u32;
    }
    c
}

pub fn oracle_d(h: usize) -> BigUint {
    assert!(h >= 2);
    let mut d = big(4);
    for _ in 2..h {
        d = &d * (&d - 1u32) / 2u32 + 2u32;
    }
    d
}

pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}
