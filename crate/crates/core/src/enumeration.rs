//! Exact counting, exhaustive enumeration, per-shape probabilities and
//! exact moments under the random-tree models.
//!
//! Every model probability is carried as an integer weight over a common
//! per-`n` denominator, so sums over all shapes stay in integers:
//!
//! | model                      | weight `w(t)`                      | denominator            |
//! |----------------------------|------------------------------------|------------------------|
//! | uniform unordered          | `1`                                | `U_n`                  |
//! | uniform labeled / ordered  | `n! 2^(n-1-s)`                     | `2^(n-1) (2n-3)!!`     |
//! | Yule-Harding               | `2^(n-1-s) (n-1)! / prod (r-1)^d_r` | `(n-1)!`               |

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::{
    binomial, factorial, fmt_ratio, fmt_real, odd_double_factorial, ratio_to_f64, reduced_ratio,
    CompensatedSum,
};
use crate::rank::{double_log_of_rank, rank_of_children};
use crate::tree::TreeShape;

/// Default largest `n` for [`enumerate_shapes`] and the rank moments.
pub const DEFAULT_ENUMERATION_CAP: u64 = 16;
/// Largest `n` for which [`exact_moments`] reports the height and
/// `log2 ln f` moments (rank moments stop at [`DEFAULT_ENUMERATION_CAP`]).
pub const SHAPE_MOMENT_CAP: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "uniform-unordered")]
    UniformUnordered,
    #[serde(rename = "uniform-labeled")]
    UniformLabeled,
    #[serde(rename = "yule")]
    YuleHarding,
    #[serde(rename = "uniform-ordered")]
    UniformOrdered,
}

impl Model {
    pub const ALL: [Model; 4] = [
        Model::UniformUnordered,
        Model::UniformLabeled,
        Model::YuleHarding,
        Model::UniformOrdered,
    ];

    /// The three distinct shape laws, in the order the figures use.
    pub const DISTINCT: [Model; 3] = [
        Model::UniformUnordered,
        Model::UniformLabeled,
        Model::YuleHarding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::UniformUnordered => "uniform-unordered",
            Model::UniformLabeled => "uniform-labeled",
            Model::YuleHarding => "yule",
            Model::UniformOrdered => "uniform-ordered",
        }
    }

    /// Uniform ordered and uniform labeled trees induce the same shape law.
    pub fn shape_law(self) -> Model {
        match self {
            Model::UniformOrdered => Model::UniformLabeled,
            m => m,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown model '{s}' (expected uniform-unordered, uniform-labeled, yule or uniform-ordered)"
                ))
            })
    }
}

fn require_leaves(n: u64, min: u64) -> Result<()> {
    if n < min {
        Err(Error::TooFewLeaves { min, got: n })
    } else {
        Ok(())
    }
}

/// `U_0..=U_n_max` (with `U_0 = 0`).
pub fn wedderburn_table(n_max: u64) -> Vec<BigUint> {
    let mut u: Vec<BigUint> = vec![BigUint::zero(), BigUint::one()];
    for n in 2..=n_max as usize {
        let mut total = BigUint::zero();
        for j in 1..=(n - 1) / 2 {
            total += &u[j] * &u[n - j];
        }
        if n % 2 == 0 {
            let half = &u[n / 2];
            total += (half * (half + 1u32)) >> 1u32;
        }
        u.push(total);
    }
    u.truncate(n_max as usize + 1);
    u
}

/// Wedderburn-Etherington number `U_n`: shapes with `n` leaves.
pub fn wedderburn(n: u64) -> Result<BigUint> {
    require_leaves(n, 1)?;
    Ok(wedderburn_table(n).swap_remove(n as usize))
}

/// `K_{n-1} = C(2n-2, n-1)/n`: ordered binary trees with `n` leaves.
pub fn catalan_tree_count(n: u64) -> Result<BigUint> {
    require_leaves(n, 1)?;
    Ok(binomial(2 * n - 2, n - 1) / n)
}

/// `(2n-3)!!`: leaf-labeled binary trees with `n` leaves.
pub fn labeled_tree_count(n: u64) -> Result<BigUint> {
    require_leaves(n, 1)?;
    Ok(odd_double_factorial(n))
}

/// One enumerated shape with everything the models need.
#[derive(Debug, Clone)]
pub struct ShapeRecord {
    pub shape: TreeShape,
    pub rank: BigUint,
    pub height: u64,
    /// `s(t)`.
    pub symmetric_nodes: u64,
    /// `prod_r (r-1)^{d_r(t)}`, the divisor in the labeled-history count.
    pub history_divisor: BigUint,
}

/// All shapes with `1..=max_leaves` leaves, each size sorted by rank.
///
/// Size `n` is built from sizes `j` and `n - j`, `j <= n/2`; ranks,
/// symmetric-node counts and history divisors are combined from the
/// children, never recomputed from scratch.
#[derive(Debug, Clone)]
pub struct ShapeTable {
    by_leaves: Vec<Vec<ShapeRecord>>,
}

impl ShapeTable {
    pub fn build(max_leaves: u64) -> Result<ShapeTable> {
        require_leaves(max_leaves, 1)?;
        let mut by_leaves: Vec<Vec<ShapeRecord>> = vec![Vec::new()];
        by_leaves.push(vec![ShapeRecord {
            shape: TreeShape::leaf(),
            rank: BigUint::one(),
            height: 0,
            symmetric_nodes: 0,
            history_divisor: BigUint::one(),
        }]);
        for n in 2..=max_leaves as usize {
            let mut level = Vec::new();
            for j in 1..=n / 2 {
                let small = &by_leaves[j];
                let large = &by_leaves[n - j];
                if j < n - j {
                    for a in large {
                        for b in small {
                            let (x, y) = if a.rank >= b.rank { (a, b) } else { (b, a) };
                            level.push(combine(x, y, n as u64, false));
                        }
                    }
                } else {
                    for (i, a) in small.iter().enumerate() {
                        for b in &small[..=i] {
                            level.push(combine(a, b, n as u64, std::ptr::eq(a, b)));
                        }
                    }
                }
            }
            level.sort_by(|a, b| a.rank.cmp(&b.rank));
            by_leaves.push(level);
        }
        Ok(ShapeTable { by_leaves })
    }

    pub fn max_leaves(&self) -> u64 {
        (self.by_leaves.len() - 1) as u64
    }

    /// Shapes with `n` leaves in ascending rank order.
    pub fn shapes(&self, n: u64) -> Result<&[ShapeRecord]> {
        require_leaves(n, 1)?;
        self.by_leaves
            .get(n as usize)
            .map(Vec::as_slice)
            .ok_or(Error::AboveCap {
                got: n,
                cap: self.max_leaves(),
            })
    }
}

fn combine(first: &ShapeRecord, second: &ShapeRecord, n: u64, symmetric: bool) -> ShapeRecord {
    ShapeRecord {
        shape: TreeShape::from_ordered(first.shape.clone(), second.shape.clone()),
        rank: rank_of_children(&first.rank, &second.rank),
        height: 1 + first.height.max(second.height),
        symmetric_nodes: first.symmetric_nodes + second.symmetric_nodes + symmetric as u64,
        history_divisor: &first.history_divisor * &second.history_divisor * (n - 1),
    }
}

/// All `U_n` shapes with `n <= cap` leaves, ascending by rank.
pub fn enumerate_shapes_capped(n: u64, cap: u64) -> Result<Vec<TreeShape>> {
    require_leaves(n, 1)?;
    if n > cap {
        return Err(Error::AboveCap { got: n, cap });
    }
    let table = ShapeTable::build(n)?;
    Ok(table.shapes(n)?.iter().map(|r| r.shape.clone()).collect())
}

/// [`enumerate_shapes_capped`] with the default cap of 16 leaves.
pub fn enumerate_shapes(n: u64) -> Result<Vec<TreeShape>> {
    enumerate_shapes_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// Common denominator of the model's shape probabilities at `n` leaves.
///
/// `wedderburn` is consulted only for the uniform unordered model.
fn model_denominator(model: Model, n: u64, wedderburn: impl FnOnce() -> BigUint) -> BigUint {
    match model.shape_law() {
        Model::UniformUnordered => wedderburn(),
        Model::UniformLabeled => odd_double_factorial(n) << (n - 1),
        Model::YuleHarding => factorial(n - 1),
        Model::UniformOrdered => unreachable!(),
    }
}

fn model_weight(model: Model, n: u64, symmetric: u64, history_divisor: &BigUint) -> BigUint {
    match model.shape_law() {
        Model::UniformUnordered => BigUint::one(),
        Model::UniformLabeled => factorial(n) << (n - 1 - symmetric),
        Model::YuleHarding => (factorial(n - 1) << (n - 1 - symmetric)) / history_divisor,
        Model::UniformOrdered => unreachable!(),
    }
}

fn history_divisor_of(t: &TreeShape) -> BigUint {
    t.metrics()
        .subtree_leaf_counts
        .iter()
        .fold(BigUint::one(), |acc, (r, d)| acc * BigUint::from(r - 1).pow(*d as u32))
}

/// Exact probability of a shape under a model.
///
/// Yule-Harding uses `2^(n-1-s) / prod_{r>=2} (r-1)^{d_r}`.
pub fn shape_probability(t: &TreeShape, model: Model) -> BigRational {
    let n = t.leaf_count();
    if n == 1 {
        return BigRational::one();
    }
    let m = t.metrics();
    let divisor = history_divisor_of(t);
    let w = model_weight(model, n, m.symmetric_nodes, &divisor);
    let d = model_denominator(model, n, || wedderburn_table(n).swap_remove(n as usize));
    reduced_ratio(w, d)
}

/// Number of labeled histories, `(n-1)! / prod_{r>=2} (r-1)^{d_r}`.
pub fn labeled_histories(t: &TreeShape) -> BigUint {
    factorial(t.leaf_count() - 1) / history_divisor_of(t)
}

/// Exact probability that a random `n`-leaf tree is the caterpillar.
pub fn caterpillar_probability(n: u64, model: Model) -> Result<BigRational> {
    require_leaves(n, 2)?;
    let pow = BigUint::one() << (n - 2);
    Ok(match model.shape_law() {
        Model::UniformUnordered => reduced_ratio(BigUint::one(), wedderburn(n)?),
        Model::UniformLabeled => reduced_ratio(pow, catalan_tree_count(n)?),
        Model::YuleHarding => reduced_ratio(pow, factorial(n - 1)),
        Model::UniformOrdered => unreachable!(),
    })
}

/// Exact moments of the rank and height of a random `n`-leaf shape.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentsReport {
    pub n: u64,
    pub model: Model,
    /// `E f`; `None` above the rank-moment cap.
    pub e_f: Option<BigRational>,
    pub e_f2: Option<BigRational>,
    pub v_f: Option<BigRational>,
    /// `E log2 ln f`.
    pub e_loglog_f: f64,
    pub e_height: BigRational,
    /// `pi_n`.
    pub caterpillar_prob: BigRational,
}

impl MomentsReport {
    pub fn to_json(&self) -> Value {
        let opt = |r: &Option<BigRational>| r.as_ref().map(fmt_ratio);
        json!({
            "n": self.n,
            "model": self.model.name(),
            "e_f": opt(&self.e_f),
            "e_f2": opt(&self.e_f2),
            "v_f": opt(&self.v_f),
            "e_loglog_f": fmt_real(self.e_loglog_f),
            "e_height": fmt_ratio(&self.e_height),
            "caterpillar_prob": fmt_ratio(&self.caterpillar_prob),
        })
    }
}

/// Exact moments for `2 <= n <= 20`; rank moments only for `n <= 16`.
pub fn exact_moments(n: u64, model: Model) -> Result<MomentsReport> {
    check_moment_range(n)?;
    let table = ShapeTable::build(n)?;
    exact_moments_from_table(&table, n, model)
}

fn check_moment_range(n: u64) -> Result<()> {
    require_leaves(n, 2)?;
    if n > SHAPE_MOMENT_CAP {
        return Err(Error::AboveCap {
            got: n,
            cap: SHAPE_MOMENT_CAP,
        });
    }
    Ok(())
}

/// [`exact_moments`] over a prebuilt table.
pub fn exact_moments_from_table(table: &ShapeTable, n: u64, model: Model) -> Result<MomentsReport> {
    check_moment_range(n)?;
    let shapes = table.shapes(n)?;
    let denominator = model_denominator(model, n, || BigUint::from(shapes.len()));
    let with_rank = n <= DEFAULT_ENUMERATION_CAP;

    let mut sum_f = BigUint::zero();
    let mut sum_f2 = BigUint::zero();
    let mut sum_h = BigUint::zero();
    let mut loglog = CompensatedSum::default();
    let mut caterpillar_weight = BigUint::zero();
    for rec in shapes {
        let w = model_weight(model, n, rec.symmetric_nodes, &rec.history_divisor);
        if with_rank {
            let wf = &w * &rec.rank;
            sum_f2 += &wf * &rec.rank;
            sum_f += wf;
        }
        sum_h += &w * rec.height;
        let p = ratio_to_f64(&w, &denominator);
        loglog.add(p * double_log_of_rank(&rec.rank)?);
        if rec.height + 1 == n {
            caterpillar_weight = w;
        }
    }

    let (e_f, e_f2, v_f) = if with_rank {
        let e_f = reduced_ratio(sum_f, denominator.clone());
        let e_f2 = reduced_ratio(sum_f2, denominator.clone());
        let v_f = &e_f2 - &e_f * &e_f;
        (Some(e_f), Some(e_f2), Some(v_f))
    } else {
        (None, None, None)
    };
    Ok(MomentsReport {
        n,
        model,
        e_f,
        e_f2,
        v_f,
        e_loglog_f: loglog.value(),
        e_height: reduced_ratio(sum_h, denominator.clone()),
        caterpillar_prob: reduced_ratio(caterpillar_weight, denominator),
    })
}

/// Exact shape probabilities for every record of size `n`, rank order.
pub fn table_probabilities(table: &ShapeTable, n: u64, model: Model) -> Result<Vec<BigRational>> {
    let shapes = table.shapes(n)?;
    let denominator = model_denominator(model, n, || BigUint::from(shapes.len()));
    Ok(shapes
        .iter()
        .map(|rec| {
            if n == 1 {
                BigRational::one()
            } else {
                let w = model_weight(model, n, rec.symmetric_nodes, &rec.history_divisor);
                reduced_ratio(w, denominator.clone())
            }
        })
        .collect())
}

/// The unsimplified Yule probability, kept for cross-checking the closed
/// form: `[n!/2^s][(n-1)!/prod] / [n!(n-1)!/2^(n-1)]`.
pub fn yule_probability_unsimplified(t: &TreeShape) -> BigRational {
    let n = t.leaf_count();
    let m = t.metrics();
    let labelings = factorial(n) >> m.symmetric_nodes;
    let histories = labeled_histories(t);
    let total = (factorial(n) * factorial(n - 1)) >> (n - 1);
    reduced_ratio(labelings * histories, total)
}
