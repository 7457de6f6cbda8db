//! Seeded Monte Carlo estimates compared with the exact values at n = 10,
//! then a larger run where enumeration is out of reach.

use cprank::enumeration::exact_moments;
use cprank::numeric::rational_to_f64;
use cprank::sampling::monte_carlo;
use cprank::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, draws, seed) = (10, 200_000, 0);
    println!("n = {n}, {draws} draws, seed {seed}");
    for model in Model::DISTINCT {
        let mc = monte_carlo(model, n, draws, seed, false)?;
        let exact = exact_moments(n, model)?;
        println!(
            "{:<18} E log2 ln f {:.5} ± {:.5} (exact {:.5})   E H {:.4} ± {:.4} (exact {:.4})",
            model.name(),
            mc.mean_loglog,
            mc.se_loglog,
            exact.e_loglog_f,
            mc.mean_height,
            mc.se_height,
            rational_to_f64(&exact.e_height),
        );
    }

    let n = 500;
    println!("\nn = {n}, 20000 draws");
    for model in Model::DISTINCT {
        let mc = monte_carlo(model, n, 20_000, seed, false)?;
        println!(
            "{:<18} E log2 ln f {:.3} ± {:.3}   E H {:.2} ± {:.2}",
            model.name(),
            mc.mean_loglog,
            mc.se_loglog,
            mc.mean_height,
            mc.se_height
        );
    }
    Ok(())
}
