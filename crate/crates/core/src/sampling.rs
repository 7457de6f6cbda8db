//! Seeded random shapes under the four models and Monte Carlo estimates.
//!
//! Samples are drawn in fixed blocks of [`BLOCK_SIZE`]; block `b` uses the
//! ChaCha8 stream `(seed, b)` and per-block statistics are merged in block
//! order, so reports do not depend on the number of threads.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::asymptotics::KAPPA;
use crate::enumeration::{wedderburn_table, Model};
use crate::error::{Error, Result};
use crate::numeric::{binomial, fmt_real};
use crate::rank::{double_log_rank, rank};
use crate::tree::TreeShape;

/// Samples per RNG substream.
pub const BLOCK_SIZE: u64 = 4096;

/// Above this leaf count uniform ordered/labeled shapes come from Remy's
/// growth process instead of exact split tables.
pub const CATALAN_SPLIT_MAX: u64 = 64;

/// Deterministic random stream: ChaCha8 keyed by the seed, one stream per
/// worker block.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> RngState {
        RngState::substream(seed, 0)
    }

    /// Independent stream `index` under `seed`.
    pub fn substream(seed: u64, index: u64) -> RngState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RngState {
            seed,
            stream: index,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    /// Uniform on `[0, bound)` by rejection; `bound > 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let reject_below = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= reject_below {
                return x % bound;
            }
        }
    }

    /// Uniform on `[0, bound)` for a big bound, by masked rejection.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "empty range");
        if let Some(b) = bound.to_u64() {
            return BigUint::from(self.below(b));
        }
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (words as u64 - 1);
        let mask = if top_bits == 64 {
            u64::MAX
        } else {
            (1u64 << top_bits) - 1
        };
        let mut digits = vec![0u64; words];
        loop {
            for d in digits.iter_mut() {
                *d = self.next_u64();
            }
            digits[words - 1] &= mask;
            let x = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                    .collect::<Vec<u32>>(),
            );
            if &x < bound {
                return x;
            }
        }
    }

    /// Uniform on `1..=max`.
    fn uniform_from_one(&mut self, max: u64) -> u64 {
        1 + self.below(max)
    }
}

/// Cumulative weights with exact inversion of a uniform integer.
#[derive(Debug, Clone)]
enum CumTable {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl CumTable {
    fn from_weights(weights: Vec<BigUint>) -> CumTable {
        let mut cum = Vec::with_capacity(weights.len());
        let mut acc = BigUint::zero();
        for w in weights {
            acc += w;
            cum.push(acc.clone());
        }
        if acc.to_u64().is_some() {
            CumTable::Small(cum.iter().map(|c| c.to_u64().expect("small")).collect())
        } else {
            CumTable::Big(cum)
        }
    }

    /// Index `i` with probability `w_i / total`.
    fn draw(&self, rng: &mut RngState) -> usize {
        match self {
            CumTable::Small(cum) => {
                let x = rng.below(*cum.last().expect("nonempty"));
                cum.partition_point(|&c| c <= x)
            }
            CumTable::Big(cum) => {
                let x = rng.below_big(cum.last().expect("nonempty"));
                cum.partition_point(|c| *c <= x)
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Tables {
    /// `splits[m]` draws the left leaf count minus one for an ordered
    /// `m`-leaf tree.
    CatalanSplit { splits: Vec<Option<CumTable>> },
    Remy,
    Yule,
    /// `splits[m]` draws the smaller part `j - 1` of an unordered `m`-leaf
    /// tree.
    Otter { splits: Vec<Option<CumTable>> },
}

/// Precomputed sampler for one `(model, n)`.
#[derive(Debug, Clone)]
pub struct ShapeSampler {
    model: Model,
    n: u64,
    tables: Tables,
}

impl ShapeSampler {
    pub fn new(model: Model, n: u64) -> Result<ShapeSampler> {
        if n == 0 {
            return Err(Error::TooFewLeaves { min: 1, got: 0 });
        }
        let tables = match model.shape_law() {
            Model::UniformLabeled if n <= CATALAN_SPLIT_MAX => Tables::CatalanSplit {
                splits: catalan_splits(n),
            },
            Model::UniformLabeled => Tables::Remy,
            Model::YuleHarding => Tables::Yule,
            Model::UniformUnordered => Tables::Otter {
                splits: otter_splits(n),
            },
            Model::UniformOrdered => unreachable!(),
        };
        Ok(ShapeSampler { model, n, tables })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn leaves(&self) -> u64 {
        self.n
    }

    /// One canonical shape.
    pub fn sample(&self, rng: &mut RngState) -> TreeShape {
        match &self.tables {
            Tables::CatalanSplit { splits } => catalan_split_shape(splits, self.n, rng),
            Tables::Remy => RemyTree::grow(self.n, rng).shape(),
            Tables::Yule => yule_shape(self.n, rng),
            Tables::Otter { splits } => otter_shape(splits, self.n, rng),
        }
    }

    /// One height, skipping shape construction where the model allows it.
    pub fn sample_height(&self, rng: &mut RngState) -> u64 {
        match &self.tables {
            Tables::Remy => RemyTree::grow(self.n, rng).height(),
            Tables::Yule => yule_height(self.n, rng),
            _ => self.sample(rng).height(),
        }
    }
}

fn catalan_splits(n: u64) -> Vec<Option<CumTable>> {
    let k: Vec<BigUint> = (0..n).map(|m| binomial(2 * m, m) / (m + 1)).collect();
    (0..=n as usize)
        .map(|m| {
            (m >= 2).then(|| {
                // Left subtree with i leaves: K_{i-1} K_{m-i-1}.
                CumTable::from_weights((1..m).map(|i| &k[i - 1] * &k[m - i - 1]).collect())
            })
        })
        .collect()
}

fn catalan_split_shape(splits: &[Option<CumTable>], m: u64, rng: &mut RngState) -> TreeShape {
    if m == 1 {
        return TreeShape::leaf();
    }
    let table = splits[m as usize].as_ref().expect("split table");
    let left = table.draw(rng) as u64 + 1;
    let a = catalan_split_shape(splits, left, rng);
    let b = catalan_split_shape(splits, m - left, rng);
    TreeShape::node(a, b)
}

fn otter_splits(n: u64) -> Vec<Option<CumTable>> {
    let u = wedderburn_table(n);
    (0..=n as usize)
        .map(|m| {
            (m >= 2).then(|| {
                let weights = (1..=m / 2)
                    .map(|j| {
                        if 2 * j == m {
                            (&u[j] * (&u[j] + 1u32)) >> 1u32
                        } else {
                            &u[j] * &u[m - j]
                        }
                    })
                    .collect();
                CumTable::from_weights(weights)
            })
        })
        .collect()
}

fn otter_shape(splits: &[Option<CumTable>], m: u64, rng: &mut RngState) -> TreeShape {
    if m == 1 {
        return TreeShape::leaf();
    }
    let table = splits[m as usize].as_ref().expect("split table");
    let j = table.draw(rng) as u64 + 1;
    if 2 * j < m {
        let a = otter_shape(splits, m - j, rng);
        let b = otter_shape(splits, j, rng);
        return TreeShape::node(a, b);
    }
    // Equal halves: an ordered pair of independent uniform shapes, keeping
    // distinct pairs with probability 1/2, is uniform over multisets.
    loop {
        let a = otter_shape(splits, j, rng);
        let b = otter_shape(splits, j, rng);
        if a == b || rng.coin() {
            return TreeShape::node(a, b);
        }
    }
}

fn yule_shape(m: u64, rng: &mut RngState) -> TreeShape {
    if m == 1 {
        return TreeShape::leaf();
    }
    let left = rng.uniform_from_one(m - 1);
    let a = yule_shape(left, rng);
    let b = yule_shape(m - left, rng);
    TreeShape::node(a, b)
}

/// Height of a Yule tree by the same uniform splits, depth first, pruning
/// subtrees that cannot exceed the deepest leaf found so far (an `s`-leaf
/// subtree reaches at most `s - 1` below its root).
fn yule_height(n: u64, rng: &mut RngState) -> u64 {
    let mut best = 0u64;
    let mut stack = vec![(n, 0u64)];
    while let Some((m, depth)) = stack.pop() {
        if depth + m - 1 <= best {
            continue;
        }
        if m == 1 {
            best = depth;
            continue;
        }
        let left = rng.uniform_from_one(m - 1);
        let right = m - left;
        // Larger part on top of the stack so deep leaves are found early.
        if left >= right {
            stack.push((right, depth + 1));
            stack.push((left, depth + 1));
        } else {
            stack.push((left, depth + 1));
            stack.push((right, depth + 1));
        }
    }
    best
}

const NONE: usize = usize::MAX;

/// Remy's algorithm: a uniform ordered binary tree grown by inserting a new
/// leaf above a uniformly chosen node, on a uniformly chosen side.
#[derive(Debug, Clone)]
pub struct RemyTree {
    children: Vec<[usize; 2]>,
    parent: Vec<usize>,
    root: usize,
}

impl RemyTree {
    pub fn grow(n: u64, rng: &mut RngState) -> RemyTree {
        let size = 2 * n as usize - 1;
        let mut t = RemyTree {
            children: Vec::with_capacity(size),
            parent: Vec::with_capacity(size),
            root: 0,
        };
        t.children.push([NONE, NONE]);
        t.parent.push(NONE);
        for _ in 1..n {
            let x = rng.below(t.children.len() as u64) as usize;
            let new_leaf = t.children.len();
            let joint = new_leaf + 1;
            t.children.push([NONE, NONE]);
            t.parent.push(joint);
            let pair = if rng.coin() {
                [x, new_leaf]
            } else {
                [new_leaf, x]
            };
            t.children.push(pair);
            let up = t.parent[x];
            t.parent.push(up);
            t.parent[x] = joint;
            if up == NONE {
                t.root = joint;
            } else {
                let slot = t.children[up].iter().position(|&c| c == x).expect("child");
                t.children[up][slot] = joint;
            }
        }
        t
    }

    pub fn height(&self) -> u64 {
        let mut best = 0;
        let mut stack = vec![(self.root, 0u64)];
        while let Some((v, depth)) = stack.pop() {
            let [a, b] = self.children[v];
            if a == NONE {
                best = best.max(depth);
            } else {
                stack.push((a, depth + 1));
                stack.push((b, depth + 1));
            }
        }
        best
    }

    /// The canonical (unordered) shape.
    pub fn shape(&self) -> TreeShape {
        let mut built: Vec<Option<TreeShape>> = vec![None; self.children.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            let [a, b] = self.children[v];
            if a == NONE {
                built[v] = Some(TreeShape::leaf());
            } else if expanded {
                let x = built[a].take().expect("left built");
                let y = built[b].take().expect("right built");
                built[v] = Some(TreeShape::node(x, y));
            } else {
                stack.push((v, true));
                stack.push((b, false));
                stack.push((a, false));
            }
        }
        built[self.root].take().expect("root built")
    }
}

/// One shape from a fresh sampler; prefer [`ShapeSampler`] for repeated
/// draws.
pub fn sample_shape(model: Model, n: u64, rng: &mut RngState) -> Result<TreeShape> {
    Ok(ShapeSampler::new(model, n)?.sample(rng))
}

/// Monte Carlo estimates of `E log2 ln f`, `E H` and `pi_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub model: Model,
    pub n: u64,
    pub samples: u64,
    pub mean_loglog: f64,
    pub se_loglog: f64,
    pub mean_height: f64,
    pub se_height: f64,
    pub caterpillar_freq: f64,
    /// Shape rank -> count, ascending by rank.
    pub shape_histogram: Option<BTreeMap<BigUint, u64>>,
}

impl McReport {
    pub fn to_json(&self) -> Value {
        let histogram = self.shape_histogram.as_ref().map(|h| {
            h.iter()
                .map(|(r, c)| json!({"rank": r.to_string(), "count": c}))
                .collect::<Vec<_>>()
        });
        json!({
            "model": self.model.name(),
            "n": self.n,
            "samples": self.samples,
            "mean_loglog": fmt_real(self.mean_loglog),
            "se_loglog": fmt_real(self.se_loglog),
            "mean_height": fmt_real(self.mean_height),
            "se_height": fmt_real(self.se_height),
            "caterpillar_freq": fmt_real(self.caterpillar_freq),
            "shape_histogram": histogram,
        })
    }

    /// Histogram as CSV with header `rank,count`.
    pub fn histogram_csv(&self) -> Option<String> {
        self.shape_histogram.as_ref().map(|h| {
            let mut out = String::from("rank,count\n");
            for (r, c) in h {
                out.push_str(&format!("{r},{c}\n"));
            }
            out
        })
    }
}

/// Running mean and centered second moment, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 += other.m2 + delta * delta * (self.count as f64 * other.count as f64) / total as f64;
        self.count = total;
    }

    fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        (self.m2 / (self.count - 1) as f64).sqrt() / (self.count as f64).sqrt()
    }
}

#[derive(Debug, Default)]
struct BlockStats {
    loglog: Moments,
    height: Moments,
    caterpillars: u64,
    histogram: BTreeMap<BigUint, u64>,
}

fn block_ranges(samples: u64) -> Vec<(u64, u64)> {
    (0..samples.div_ceil(BLOCK_SIZE))
        .map(|b| (b, BLOCK_SIZE.min(samples - b * BLOCK_SIZE)))
        .collect()
}

fn check_mc_inputs(n: u64, samples: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewLeaves { min: 2, got: n });
    }
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    Ok(())
}

/// Seeded Monte Carlo run; bit-identical for fixed `(model, n, samples,
/// seed)` regardless of thread count.
pub fn monte_carlo(
    model: Model,
    n: u64,
    samples: u64,
    seed: u64,
    with_histogram: bool,
) -> Result<McReport> {
    check_mc_inputs(n, samples)?;
    let sampler = ShapeSampler::new(model, n)?;
    let blocks: Vec<BlockStats> = block_ranges(samples)
        .into_par_iter()
        .map(|(b, count)| {
            let mut rng = RngState::substream(seed, b);
            let mut stats = BlockStats::default();
            for _ in 0..count {
                let t = sampler.sample(&mut rng);
                stats
                    .loglog
                    .push(double_log_rank(&t).expect("n >= 2 is never a leaf"));
                stats.height.push(t.height() as f64);
                if t.is_caterpillar() {
                    stats.caterpillars += 1;
                }
                if with_histogram {
                    *stats.histogram.entry(rank(&t)).or_insert(0) += 1;
                }
            }
            stats
        })
        .collect();

    let mut loglog = Moments::default();
    let mut height = Moments::default();
    let mut caterpillars = 0;
    let mut histogram = BTreeMap::new();
    for b in &blocks {
        loglog.merge(&b.loglog);
        height.merge(&b.height);
        caterpillars += b.caterpillars;
        for (r, c) in &b.histogram {
            *histogram.entry(r.clone()).or_insert(0) += c;
        }
    }
    Ok(McReport {
        model,
        n,
        samples,
        mean_loglog: loglog.mean,
        se_loglog: loglog.standard_error(),
        mean_height: height.mean,
        se_height: height.standard_error(),
        caterpillar_freq: caterpillars as f64 / samples as f64,
        shape_histogram: with_histogram.then_some(histogram),
    })
}

/// Raw sampled heights, block-deterministic like [`monte_carlo`].
pub fn sample_heights(model: Model, n: u64, samples: u64, seed: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::TooFewLeaves { min: 1, got: 0 });
    }
    let sampler = ShapeSampler::new(model, n)?;
    let blocks: Vec<Vec<u64>> = block_ranges(samples)
        .into_par_iter()
        .map(|(b, count)| {
            let mut rng = RngState::substream(seed, b);
            (0..count).map(|_| sampler.sample_height(&mut rng)).collect()
        })
        .collect();
    Ok(blocks.concat())
}

/// The normalizer of the height limit law for each model:
/// `2 sqrt(n)` (uniform ordered/labeled), `kappa sqrt(n/pi)` (uniform
/// unordered), `ln n` (Yule-Harding).
pub fn height_scale(model: Model, n: u64) -> f64 {
    let n = n as f64;
    match model.shape_law() {
        Model::UniformLabeled => 2.0 * n.sqrt(),
        Model::UniformUnordered => KAPPA * (n / PI).sqrt(),
        Model::YuleHarding => n.ln(),
        Model::UniformOrdered => unreachable!(),
    }
}

/// Sampled heights divided by [`height_scale`].
pub fn height_scaled_samples(model: Model, n: u64, samples: u64, seed: u64) -> Result<Vec<f64>> {
    check_mc_inputs(n, samples)?;
    let scale = height_scale(model, n);
    Ok(sample_heights(model, n, samples, seed)?
        .into_iter()
        .map(|h| h as f64 / scale)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RngState::substream(7, 3);
        let mut b = RngState::substream(7, 3);
        let mut c = RngState::substream(7, 4);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
        assert_eq!(a.seed(), 7);
        assert_eq!(a.stream(), 3);
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut rng = RngState::new(1);
        for bound in [1u64, 2, 3, 7, 1 << 40, u64::MAX] {
            for _ in 0..200 {
                assert!(rng.below(bound) < bound);
            }
        }
        let big = (BigUint::from(1u32) << 200u32) + 12345u32;
        for _ in 0..200 {
            assert!(rng.below_big(&big) < big);
        }
    }

    #[test]
    fn leaf_and_cherry_are_deterministic() {
        let mut rng = RngState::new(0);
        for model in Model::ALL {
            assert_eq!(sample_shape(model, 1, &mut rng).unwrap(), TreeShape::leaf());
            let h = height_scaled_samples(model, 2, 10, 0).unwrap();
            assert!(h.iter().all(|&x| x == h[0]));
            assert_eq!(h[0], 1.0 / height_scale(model, 2));
        }
        assert!(sample_shape(Model::YuleHarding, 0, &mut rng).is_err());
    }

    #[test]
    fn samples_have_requested_size() {
        let mut rng = RngState::new(9);
        for model in Model::ALL {
            let s = ShapeSampler::new(model, 37).unwrap();
            for _ in 0..20 {
                let t = s.sample(&mut rng);
                assert_eq!(t.leaf_count(), 37);
                assert!(t.is_canonical());
            }
        }
        let t = RemyTree::grow(500, &mut rng);
        let shape = t.shape();
        assert_eq!(shape.leaf_count(), 500);
        assert_eq!(shape.height(), t.height());
    }

    #[test]
    fn pruned_yule_height_matches_full_construction_in_law() {
        // Same mean within noise at n = 64.
        let full: f64 = (0..4000)
            .map(|i| {
                let mut rng = RngState::substream(11, i);
                yule_shape(64, &mut rng).height() as f64
            })
            .sum::<f64>()
            / 4000.0;
        let pruned: f64 = (0..4000)
            .map(|i| {
                let mut rng = RngState::substream(12, i);
                yule_height(64, &mut rng) as f64
            })
            .sum::<f64>()
            / 4000.0;
        assert!((full - pruned).abs() < 0.15, "{full} vs {pruned}");
    }

    #[test]
    fn report_is_deterministic_and_consistent() {
        let a = monte_carlo(Model::YuleHarding, 6, 9000, 5, true).unwrap();
        let b = monte_carlo(Model::YuleHarding, 6, 9000, 5, true).unwrap();
        assert_eq!(a, b);
        let h = a.shape_histogram.as_ref().unwrap();
        assert_eq!(h.values().sum::<u64>(), 9000);
        assert!(a.se_loglog > 0.0 && a.se_height > 0.0);
        let csv = a.histogram_csv().unwrap();
        assert!(csv.starts_with("rank,count\n"));
        assert!(monte_carlo(Model::YuleHarding, 1, 10, 0, false).is_err());
        assert!(monte_carlo(Model::YuleHarding, 5, 1, 0, false).is_err());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo(Model::UniformUnordered, 9, 20_000, 3, true).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
