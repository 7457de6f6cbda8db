mod common;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;

use cprank::rank::{
    count_by_height, double_log_rank, extremal_seqs, height_rank_bounds, HeightMode,
};
use cprank::tree::compare_shapes;
use cprank::{parse_newick, rank, to_newick, unrank, NewickError, TreeShape};

use common::*;

fn cherry() -> TreeShape {
    TreeShape::node(TreeShape::leaf(), TreeShape::leaf())
}

fn balanced(levels: u32) -> TreeShape {
    (0..levels).fold(TreeShape::leaf(), |t, _| TreeShape::node(t.clone(), t))
}

#[test]
fn leaf_and_cherry() {
    let leaf = TreeShape::leaf();
    assert_eq!(leaf.height(), 0);
    assert_eq!(rank(&leaf), big(1));
    assert_eq!(to_newick(&leaf), ";");
    assert_eq!(rank(&cherry()), big(2));
    assert_eq!(to_newick(&cherry()), "(,);");
}

#[test]
fn node_is_unordered() {
    let a = TreeShape::node(TreeShape::leaf(), cherry());
    let b = TreeShape::node(cherry(), TreeShape::leaf());
    assert_eq!(a, b);
    assert_eq!(to_newick(&a), to_newick(&b));
    let p5 = TreeShape::node(balanced(2), TreeShape::leaf());
    assert_eq!(rank(&p5), big(8));
    assert_eq!(p5.height(), 3);
    assert_eq!(p5, TreeShape::pseudocaterpillar(5).unwrap());
}

#[test]
fn compare_examples() {
    let t = TreeShape::caterpillar(6).unwrap();
    assert_eq!(compare_shapes(&t, &t.clone()), Ordering::Equal);
    assert_eq!(compare_shapes(&cherry(), &TreeShape::leaf()), Ordering::Greater);
}

#[test]
fn metrics_of_extremes() {
    let m = TreeShape::caterpillar(8).unwrap().metrics();
    assert_eq!((m.leaves, m.height, m.symmetric_nodes), (8, 7, 1));
    let expected: BTreeMap<u64, u64> = (2..=8).map(|r| (r, 1)).collect();
    assert_eq!(m.subtree_leaf_counts, expected);

    let m = balanced(3).metrics();
    assert_eq!(m.symmetric_nodes, 7);
    assert_eq!(
        m.subtree_leaf_counts,
        BTreeMap::from([(2, 4), (4, 2), (8, 1)])
    );

    let m = TreeShape::leaf().metrics();
    assert_eq!((m.leaves, m.height, m.symmetric_nodes), (1, 0, 0));
    assert!(m.subtree_leaf_counts.is_empty());
}

#[test]
fn named_shapes() {
    assert_eq!(rank(&TreeShape::caterpillar(4).unwrap()), big(5));
    assert_eq!(rank(&TreeShape::caterpillar(7).unwrap()), big(2280));
    assert_eq!(TreeShape::caterpillar(1).unwrap(), TreeShape::leaf());
    assert!(TreeShape::caterpillar(0).is_err());
    assert_eq!(TreeShape::pseudocaterpillar(4).unwrap(), balanced(2));
    assert_eq!(rank(&TreeShape::pseudocaterpillar(7).unwrap()), big(437));
    assert_eq!(rank(&TreeShape::pseudocaterpillar(8).unwrap()), big(95268));
    assert!(TreeShape::pseudocaterpillar(3).is_err());
}

#[test]
fn newick_examples() {
    let t = parse_newick("((,),);").unwrap();
    assert_eq!((t.leaf_count(), rank(&t)), (3, big(3)));
    let t = parse_newick("((A:1,B:2)x,(C,D));").unwrap();
    assert_eq!(rank(&t), big(4));
    assert_eq!(t, balanced(2));
    assert!(matches!(
        parse_newick("((,,),);"),
        Err(NewickError::NonBinary { .. })
    ));
    assert_eq!(
        to_newick(&TreeShape::caterpillar(4).unwrap()),
        "(((,),),);"
    );
    assert_eq!(
        to_newick(&TreeShape::pseudocaterpillar(5).unwrap()),
        "(((,),(,)),);"
    );
    assert_eq!(rank(&parse_newick("((( , ), ), );").unwrap()), big(5));
}

#[test]
fn rank_examples() {
    assert_eq!(rank(&balanced(3)), big(11));
    assert_eq!(rank(&TreeShape::caterpillar(8).unwrap()), big(2598062));
    // A leaf joined to the 5-leaf shape (3-caterpillar, cherry), rank 6.
    let five = TreeShape::node(TreeShape::caterpillar(3).unwrap(), cherry());
    assert_eq!(rank(&five), big(6));
    let t = TreeShape::node(five, TreeShape::leaf());
    assert_eq!(rank(&t), big(17));
    assert_eq!(t.leaf_count(), 6);
    assert_eq!(unrank(&big(12)).unwrap(), TreeShape::caterpillar(5).unwrap());
    assert_eq!(unrank(&big(1)).unwrap(), TreeShape::leaf());
}

#[test]
fn extremal_ranks_match_named_shapes() {
    let s = extremal_seqs(12);
    for h in 0..=12usize {
        let cat = TreeShape::caterpillar(h as u64 + 1).unwrap();
        assert_eq!(&rank(&cat), s.c(h).unwrap());
        assert_eq!(s.c(h).unwrap(), &oracle_c(h));
        if h >= 2 {
            let p = TreeShape::pseudocaterpillar(h as u64 + 2).unwrap();
            assert_eq!(&rank(&p), s.d(h).unwrap());
            assert_eq!(s.d(h).unwrap(), &oracle_d(h));
        }
    }
}

#[test]
fn height_ranges() {
    assert_eq!(height_rank_bounds(0), (big(1), big(1)));
    assert_eq!(height_rank_bounds(3), (big(5), big(11)));
    for t in oracle_shapes(12).iter().flatten() {
        let (lo, hi) = height_rank_bounds(t.height() as usize);
        let r = rank(t);
        assert!(lo <= r && r <= hi, "{t}");
    }
}

#[test]
fn counts_by_height_from_enumeration() {
    // Height h needs at most 2^h leaves; 2^5 leaves is too many to list,
    // so walk the ranks of each height instead.
    let mut exactly = [0u64; 6];
    for h in 0..=4usize {
        let (lo, hi) = height_rank_bounds(h);
        let (lo, hi): (u64, u64) = (lo.try_into().unwrap(), hi.try_into().unwrap());
        for k in lo..=hi {
            let t = unrank(&big(k)).unwrap();
            exactly[t.height() as usize] += 1;
        }
    }
    for h in 0..=4 {
        assert_eq!(big(exactly[h]), count_by_height(h, HeightMode::Exactly));
    }
    // For h <= 3 every shape has at most 8 leaves, so the sizes cover it.
    let shapes = oracle_shapes(8);
    for h in 0..=3u64 {
        let n = shapes.iter().flatten().filter(|t| t.height() == h).count() as u64;
        assert_eq!(big(n), count_by_height(h as usize, HeightMode::Exactly));
    }
}

#[test]
fn double_log_examples() {
    let v = double_log_rank(&cherry()).unwrap();
    assert!((v - (-0.528766)).abs() < 1e-6);
    let v = double_log_rank(&TreeShape::caterpillar(8).unwrap()).unwrap();
    assert!((v - 3.884625).abs() < 1e-6, "{v}");
    assert!(double_log_rank(&TreeShape::leaf()).is_err());
}

#[test]
fn double_log_tracks_height() {
    // Caterpillars sit lowest in each height class; log2 ln gamma ~ -3.186
    // bounds the offset from below.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in oracle_shapes(13).iter().flatten() {
        let h = t.height();
        if h < 2 {
            continue;
        }
        let off = double_log_rank(t).unwrap() - h as f64;
        lo = lo.min(off);
        hi = hi.max(off);
    }
    assert!(lo > -3.2 && hi < 0.0, "band [{lo}, {hi}]");
}

/// `ln r` from the decimal expansion: leading 17 digits plus a power of ten.
fn ln_from_decimal(r: &BigUint) -> f64 {
    let digits = r.to_string();
    let keep = digits.len().min(17);
    let head: f64 = digits[..keep].parse().unwrap();
    head.ln() + (digits.len() - keep) as f64 * std::f64::consts::LN_10
}

#[test]
fn double_log_precision_against_exact() {
    for t in oracle_shapes(13).iter().skip(2).flatten() {
        let want = ln_from_decimal(&oracle_rank(t)).log2();
        let v = double_log_rank(t).unwrap();
        assert!((v - want).abs() <= 1e-12 * want.abs().max(1.0), "{t}: {v} vs {want}");
    }
}

fn arb_shape() -> impl Strategy<Value = TreeShape> {
    let leaf = Just(TreeShape::leaf());
    leaf.prop_recursive(10, 200, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| TreeShape::node(a, b))
    })
}

fn arb_rank() -> impl Strategy<Value = BigUint> {
    prop::collection::vec(any::<u8>(), 1..64)
        .prop_map(|bytes| BigUint::from_bytes_le(&bytes) + 1u32)
}

proptest! {
    #[test]
    fn rank_matches_definition(t in arb_shape()) {
        prop_assert_eq!(rank(&t), oracle_rank(&t));
        prop_assert!(t.is_canonical());
    }

    #[test]
    fn unrank_inverts_rank(t in arb_shape()) {
        prop_assert_eq!(unrank(&rank(&t)).unwrap(), t);
    }

    #[test]
    fn rank_inverts_unrank(k in arb_rank()) {
        let t = unrank(&k).unwrap();
        prop_assert!(t.is_canonical());
        prop_assert_eq!(rank(&t), k);
    }

    #[test]
    fn newick_round_trip(t in arb_shape()) {
        prop_assert_eq!(parse_newick(&to_newick(&t)).unwrap(), t);
    }

    #[test]
    fn compare_agrees_with_ranks(a in arb_shape(), b in arb_shape()) {
        prop_assert_eq!(compare_shapes(&a, &b), rank(&a).cmp(&rank(&b)));
        prop_assert_eq!(compare_shapes(&a, &b), compare_shapes(&b, &a).reverse());
    }

    #[test]
    fn height_bounds_hold(t in arb_shape()) {
        let h = t.height() as usize;
        let r = rank(&t);
        prop_assert!(oracle_c(h) <= r && r < oracle_c(h + 1));
    }
}
