//! Colijn-Plazzotta ranking of unlabeled binary rooted trees.
//!
//! The CP rank is a bijection between tree shapes (binary, rooted, unordered,
//! unlabeled) and the positive integers:
//!
//! ```text
//! f(leaf) = 1
//! f(t)    = f(l)(f(l) - 1)/2 + 1 + f(r),   f(l) >= f(r)
//! ```
//!
//! The crate provides
//!
//! * [`TreeShape`]: canonical immutable tree shapes, metrics and Newick I/O,
//! * [`rank`](mod@rank): ranking, unranking, the caterpillar/pseudocaterpillar
//!   rank sequences and `log2 ln f(t)`,
//! * [`enumeration`]: exhaustive enumeration, exact probabilities and exact
//!   moments under the uniform-unordered, uniform-labeled (= uniform-ordered)
//!   and Yule-Harding models,
//! * [`sampling`]: seeded, reproducible samplers and Monte Carlo estimators,
//! * [`asymptotics`]: the theta distribution and the large-`n` approximations,
//! * [`figures`] and [`cli`]: table/figure data and the command-line front end.

pub mod asymptotics;
pub mod cli;
pub mod enumeration;
mod error;
pub mod figures;
pub mod newick;
pub mod numeric;
pub mod rank;
pub mod sampling;
pub mod tree;

pub use enumeration::{Model, MomentsReport, ShapeRecord, ShapeTable};
pub use error::{Error, Result};
pub use newick::{parse_newick, to_newick, NewickError};
pub use rank::{double_log_rank, rank, unrank};
pub use sampling::{McReport, RngState, ShapeSampler};
pub use tree::{ShapeMetrics, TreeShape};
