//! Re-derive the constants that appear in the asymptotic formulas and
//! compare them with the reported values.

use cprank::asymptotics::{
    beta_from_alpha, estimate_gamma, estimate_rho, loglog_asymptotic, solve_alpha,
    PaperConstants,
};
use cprank::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reported = PaperConstants::reported();
    let alpha = solve_alpha();
    println!("alpha  {alpha:.8}  (reported {})", reported.alpha);
    println!("beta   {:.8}  (reported {:.5})", beta_from_alpha(alpha), reported.beta);
    for depth in [8, 12, 16, 20] {
        println!("gamma  {:.8}  from c_{depth}", estimate_gamma(depth)?);
    }
    for n_max in [250, 1000, 2000] {
        println!("rho    {:.8}  from U_n up to {n_max}", estimate_rho(n_max)?);
    }
    println!("kappa  {}  lambda {:.8}", reported.kappa, reported.lambda);

    println!("\nleading-order E log2 ln f");
    for n in [20, 100, 1000] {
        print!("  n = {n:<5}");
        for model in Model::DISTINCT {
            print!("  {}: {:8.3}", model.name(), loglog_asymptotic(n, model)?);
        }
        println!();
    }
    Ok(())
}
