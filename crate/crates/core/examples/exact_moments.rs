//! Exact moments of the rank and height for small trees, next to the
//! caterpillar-dominated approximation `pi_n c_{n-1}`.

use cprank::asymptotics::exact_mean_rank_asymptotic;
use cprank::enumeration::{exact_moments_from_table, ShapeTable};
use cprank::numeric::{log2_ln_rational, rational_to_f64};
use cprank::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = ShapeTable::build(14)?;
    for model in Model::DISTINCT {
        println!("{model}");
        println!("   n  E log2 ln f     E H  log2 ln E f  log2 ln pi c   E f / pi c");
        for n in 4..=14 {
            let m = exact_moments_from_table(&table, n, model)?;
            let e_f = m.e_f.expect("n <= 16");
            let approx = exact_mean_rank_asymptotic(n, model, false)?;
            println!(
                "  {n:>2}  {:>11.6}  {:>6.3}  {:>11.6}  {:>12.6}  {:>11.6}",
                m.e_loglog_f,
                rational_to_f64(&m.e_height),
                log2_ln_rational(&e_f).unwrap_or(f64::NAN),
                log2_ln_rational(&approx).unwrap_or(f64::NAN),
                rational_to_f64(&(e_f / approx)),
            );
        }
    }
    Ok(())
}
