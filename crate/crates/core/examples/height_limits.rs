//! Height distributions of large random trees against their limit laws:
//! the theta law for uniform labeled trees and `alpha ln n` growth for
//! Yule-Harding trees. Only heights are sampled; no ranks are built.

use cprank::asymptotics::{beta_from_alpha, theta_cdf, ALPHA};
use cprank::sampling::{height_scaled_samples, sample_heights};
use cprank::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 4096;
    let mut xs = height_scaled_samples(Model::UniformLabeled, n, 10_000, 0)?;
    xs.sort_by(f64::total_cmp);
    println!("uniform labeled, n = {n}: H / (2 sqrt n) quantiles vs theta CDF");
    for q in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let x = xs[((xs.len() - 1) as f64 * q) as usize];
        println!("  q = {q:<4}  x = {x:.4}  F(x) = {:.4}", theta_cdf(x));
    }

    let beta = beta_from_alpha(ALPHA);
    println!("\nyule: mean H against alpha ln n - beta ln ln n");
    for k in [10, 14, 18, 20] {
        let n = 1u64 << k;
        let hs = sample_heights(Model::YuleHarding, n, 500, 0)?;
        let mean = hs.iter().sum::<u64>() as f64 / hs.len() as f64;
        let ln = (n as f64).ln();
        println!(
            "  n = 2^{k:<2}  mean H {mean:7.2}  H/ln n {:.3}  alpha ln n - beta ln ln n {:7.2}",
            mean / ln,
            ALPHA * ln - beta * ln.ln()
        );
    }
    Ok(())
}
