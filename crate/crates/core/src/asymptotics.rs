//! Limit-law constants, the theta distribution and the large-`n`
//! approximations for `pi_n`, `E log2 ln f` and `E f`.

use std::f64::consts::{LN_2, PI};

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::enumeration::{caterpillar_probability, wedderburn_table, Model};
use crate::error::{Error, Result};
use crate::numeric::{fmt_real, ln_biguint, log2_ln_rational, ratio_to_f64, reduced_ratio};
use crate::rank::caterpillar_rank;

/// `c_k ~ 2 gamma^(2^k)`.
pub const GAMMA: f64 = 1.11625;
/// Wedderburn-Etherington growth constant: `U_n ~ lambda n^(-3/2) rho^(-n)`.
pub const RHO: f64 = 0.40270;
/// `E H'_n / sqrt(n) -> kappa` for uniform unordered trees.
pub const KAPPA: f64 = 3.13699;
/// `lambda = 1/kappa` (displays as 0.31878).
pub const LAMBDA: f64 = 1.0 / KAPPA;
/// Root of `alpha ln(2e/alpha) = 1` on `(2, inf)`.
pub const ALPHA: f64 = 4.31107;

/// The constants as reported, with `beta` derived from `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaperConstants {
    pub gamma: f64,
    pub lambda: f64,
    pub rho: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PaperConstants {
    pub fn reported() -> PaperConstants {
        PaperConstants {
            gamma: GAMMA,
            lambda: LAMBDA,
            rho: RHO,
            kappa: KAPPA,
            alpha: ALPHA,
            beta: beta_from_alpha(ALPHA),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "gamma": fmt_real(self.gamma),
            "lambda": fmt_real(self.lambda),
            "rho": fmt_real(self.rho),
            "kappa": fmt_real(self.kappa),
            "alpha": fmt_real(self.alpha),
            "beta": fmt_real(self.beta),
        })
    }
}

/// `beta = 3 alpha / (2 alpha - 2)`.
pub fn beta_from_alpha(alpha: f64) -> f64 {
    3.0 * alpha / (2.0 * alpha - 2.0)
}

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Distribution function of the theta law,
///
/// ```text
/// F(x) = 4 pi^(5/2) / x^3  sum_{j>=1} j^2 exp(-pi^2 j^2 / x^2)
///      = sum_{j in Z} (1 - 2 j^2 x^2) exp(-j^2 x^2).
/// ```
///
/// The first series is used below `sqrt(pi)`, the second above.
pub fn theta_cdf(x: f64) -> f64 {
    if x <= 0.0 || x.is_nan() {
        return 0.0;
    }
    if x < SQRT_PI {
        theta_cdf_small(x)
    } else {
        theta_cdf_large(x)
    }
}

/// The `pi^2 j^2 / x^2` series.
pub fn theta_cdf_small(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let prefactor = 4.0 * PI.powf(2.5) / x.powi(3);
    let mut sum = 0.0;
    for j in 1..10_000u32 {
        let j2 = f64::from(j * j);
        let term = prefactor * j2 * (-PI * PI * j2 / (x * x)).exp();
        sum += term;
        if term < 1e-17 {
            break;
        }
    }
    sum
}

/// The `j^2 x^2` series.
pub fn theta_cdf_large(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut sum = 0.0;
    for j in 1..10_000u32 {
        let j2 = f64::from(j * j);
        let term = 2.0 * (1.0 - 2.0 * j2 * x2) * (-j2 * x2).exp();
        sum += term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    1.0 + sum
}

fn alpha_equation(a: f64) -> f64 {
    a * (LN_2 + 1.0 - a.ln()) - 1.0
}

/// Solves `alpha ln(2e/alpha) = 1` on `(2, 100)`: bisection, then Newton
/// polishing.
pub fn solve_alpha() -> f64 {
    // Decreasing on (2, inf): positive at 2, negative at 100.
    let (mut lo, mut hi) = (2.0_f64, 100.0_f64);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if alpha_equation(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut a = 0.5 * (lo + hi);
    for _ in 0..8 {
        let derivative = LN_2 - a.ln();
        let step = alpha_equation(a) / derivative;
        a -= step;
        if step.abs() < 1e-16 * a {
            break;
        }
    }
    a
}

/// `(c_depth / 2)^(2^-depth)` from the exact caterpillar rank.
pub fn estimate_gamma(depth: u32) -> Result<f64> {
    if depth < 4 {
        return Err(Error::InvalidArgument(format!(
            "gamma estimate needs depth >= 4, got {depth}"
        )));
    }
    let c = caterpillar_rank(depth as usize);
    Ok(((ln_biguint(&c) - LN_2) / 2f64.powi(depth as i32)).exp())
}

/// Limit of `U_n / U_{n+1}`, Aitken-accelerated from the last three
/// ratios up to `n_max`.
pub fn estimate_rho(n_max: u64) -> Result<f64> {
    if n_max < 100 {
        return Err(Error::InvalidArgument(format!(
            "rho estimate needs n_max >= 100, got {n_max}"
        )));
    }
    let u = wedderburn_table(n_max + 1);
    let ratio = |n: u64| ratio_to_f64(&u[n as usize], &u[n as usize + 1]);
    Ok(aitken(ratio(n_max - 2), ratio(n_max - 1), ratio(n_max)))
}

/// `U_n / U_{n+1}` for `1 <= n <= n_max`, indexed from `n = 1`.
pub fn wedderburn_ratios(n_max: u64) -> Vec<f64> {
    let u = wedderburn_table(n_max + 1);
    (1..=n_max as usize)
        .map(|n| ratio_to_f64(&u[n], &u[n + 1]))
        .collect()
}

fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let second_difference = x2 - 2.0 * x1 + x0;
    if second_difference == 0.0 {
        x2
    } else {
        x2 - (x2 - x1) * (x2 - x1) / second_difference
    }
}

/// An asymptotic value with its natural logarithm (the value itself may
/// underflow).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub value: f64,
    pub ln: f64,
}

impl LogValue {
    fn from_ln(ln: f64) -> LogValue {
        LogValue { value: ln.exp(), ln }
    }
}

fn require_n(n: u64, min: u64) -> Result<()> {
    if n < min {
        Err(Error::TooFewLeaves { min, got: n })
    } else {
        Ok(())
    }
}

/// Asymptotic caterpillar probability:
/// `n^(3/2) sqrt(pi) / 2^n` (uniform labeled/ordered),
/// `n^(3/2) rho^n / lambda` (uniform unordered),
/// `(2e/n)^n sqrt(n) / (4 sqrt(2 pi))` (Yule-Harding).
pub fn pi_asymptotic(n: u64, model: Model) -> Result<LogValue> {
    require_n(n, 2)?;
    let nf = n as f64;
    let ln = match model.shape_law() {
        Model::UniformLabeled => 1.5 * nf.ln() + 0.5 * PI.ln() - nf * LN_2,
        Model::UniformUnordered => 1.5 * nf.ln() + nf * RHO.ln() - LAMBDA.ln(),
        Model::YuleHarding => {
            nf * (LN_2 + 1.0 - nf.ln()) + 0.5 * nf.ln() - (4.0 * (2.0 * PI).sqrt()).ln()
        }
        Model::UniformOrdered => unreachable!(),
    };
    Ok(LogValue::from_ln(ln))
}

/// Leading-order `E log2 ln f`: `2 sqrt(pi n)`, `kappa sqrt(n)` or
/// `alpha ln n`.
pub fn loglog_asymptotic(n: u64, model: Model) -> Result<f64> {
    require_n(n, 2)?;
    let nf = n as f64;
    Ok(match model.shape_law() {
        Model::UniformLabeled => 2.0 * (PI * nf).sqrt(),
        Model::UniformUnordered => KAPPA * nf.sqrt(),
        Model::YuleHarding => ALPHA * nf.ln(),
        Model::UniformOrdered => unreachable!(),
    })
}

/// Largest `n` for which [`mean_rank_asymptotic`] materializes
/// `pi_n c_{n-1}` exactly (`c_23` has about 1.3 million bits).
pub const EXACT_MEAN_CAP: u64 = 24;

/// `pi_n c_{n-1}` (or `pi_n c_{n-1}^2` for the variance).
#[derive(Debug, Clone, PartialEq)]
pub struct MeanRankAsymptotic {
    pub log2log_mean: f64,
    pub exact_available: bool,
    pub mean: Option<BigRational>,
}

impl MeanRankAsymptotic {
    pub fn to_json(&self) -> Value {
        json!({
            "log2log_mean": fmt_real(self.log2log_mean),
            "exact_available": self.exact_available,
            "mean": self.mean.as_ref().map(crate::numeric::fmt_ratio),
        })
    }
}

/// `pi_n c_{n-1}` with the exact `pi_n` of the model; `variance` squares
/// the caterpillar rank.
pub fn mean_rank_asymptotic(n: u64, model: Model, variance: bool) -> Result<MeanRankAsymptotic> {
    require_n(n, 4)?;
    if n <= EXACT_MEAN_CAP {
        let exact = exact_mean_rank_asymptotic(n, model, variance)?;
        let log2log_mean = log2_ln_rational(&exact).expect("pi_n c_{n-1} > 1 for n >= 4");
        return Ok(MeanRankAsymptotic {
            log2log_mean,
            exact_available: true,
            mean: Some(exact),
        });
    }
    Ok(MeanRankAsymptotic {
        log2log_mean: mean_rank_log2log_logdomain(n, model, variance)?,
        exact_available: false,
        mean: None,
    })
}

/// Exact `pi_n c_{n-1}` (or `pi_n c_{n-1}^2`).
pub fn exact_mean_rank_asymptotic(n: u64, model: Model, variance: bool) -> Result<BigRational> {
    require_n(n, 2)?;
    let pi = caterpillar_probability(n, model)?;
    let c = caterpillar_rank(n as usize - 1);
    let c = if variance { &c * &c } else { c };
    let num = pi.numer().to_biguint().expect("positive") * c;
    let den = pi.denom().to_biguint().expect("positive");
    Ok(reduced_ratio(num, den))
}

/// `ln pi_n` from the exact probability.
fn ln_exact_pi(n: u64, model: Model) -> Result<f64> {
    let pi = caterpillar_probability(n, model)?;
    let num = pi.numer().to_biguint().expect("positive");
    let den = pi.denom().to_biguint().expect("positive");
    Ok(ln_biguint(&num) - ln_biguint(&den))
}

/// `log2(ln c_h + offset)` without materializing `c_h`.
///
/// With `c_k = 2 exp(a_k)`, the recursion `c_{k+1} = c_k(c_k - 1)/2 + 2`
/// becomes `a_{k+1} = 2 a_k + ln(1 - exp(-a_k)/2 + exp(-2 a_k))`, which is
/// carried in f64 until `a_k` nears overflow and continued as
/// `log2 a_{k+1} = 1 + log2 a_k` beyond.
pub fn log2_ln_caterpillar_rank(h: usize, scale: f64, offset: f64) -> f64 {
    let mut a = -LN_2;
    let mut k = 0;
    while k < h && a < 1e290 {
        a = 2.0 * a + (-0.5 * (-a).exp() + (-2.0 * a).exp()).ln_1p();
        k += 1;
    }
    if k == h {
        (scale * (LN_2 + a) + offset).log2()
    } else {
        // ln2 + offset are negligible next to a > 1e290.
        scale.log2() + a.log2() + (h - k) as f64
    }
}

/// `log2 ln(pi_n c_{n-1})` (or with `c_{n-1}^2`) computed in log domain.
pub fn mean_rank_log2log_logdomain(n: u64, model: Model, variance: bool) -> Result<f64> {
    require_n(n, 4)?;
    let ln_pi = ln_exact_pi(n, model)?;
    let scale = if variance { 2.0 } else { 1.0 };
    Ok(log2_ln_caterpillar_rank(n as usize - 1, scale, ln_pi))
}
