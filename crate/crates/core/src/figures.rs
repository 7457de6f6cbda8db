//! CSV data behind the three published plots.
//!
//! * Figure 1: `E log2 ln f`, `E H` and the leading-order approximation,
//!   `n = 2..=20`.
//! * Figure 2: `E f` against `pi_n c_{n-1}`, `n = 2..=10`.
//! * Figure 3: `V f` against `pi_n c_{n-1}^2`, `n = 2..=10`.
//!
//! Each plotted quantity appears exactly (`p/q`) where it is rational, and
//! through `log2 ln` as a 17-digit real. Undefined transforms (`ln x <= 0`)
//! are left empty.

use num_rational::BigRational;

use crate::asymptotics::{exact_mean_rank_asymptotic, loglog_asymptotic};
use crate::enumeration::{exact_moments_from_table, Model, ShapeTable};
use crate::error::{Error, Result};
use crate::numeric::{fmt_ratio, fmt_real, log2_ln_rational, rational_to_f64};

pub const FIGURE1_MAX_N: u64 = 20;
pub const FIGURE23_MAX_N: u64 = 10;

pub const FIGURE1_HEADER: &str = "n,model,e_loglog_f,e_height,e_height_exact,loglog_asymptotic";
pub const FIGURE2_HEADER: &str =
    "n,model,e_f_exact,log2log_e_f,asymptotic_exact,log2log_asymptotic";
pub const FIGURE3_HEADER: &str =
    "n,model,v_f_exact,log2log_v_f,asymptotic_exact,log2log_asymptotic";

fn log2ln_cell(r: &BigRational) -> String {
    log2_ln_rational(r).map(fmt_real).unwrap_or_default()
}

/// The CSV for figure `which` (1, 2 or 3).
pub fn figure_csv(which: u8) -> Result<String> {
    let max_n = match which {
        1 => FIGURE1_MAX_N,
        2 | 3 => FIGURE23_MAX_N,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure {which} (expected 1, 2 or 3)"
            )))
        }
    };
    let table = ShapeTable::build(max_n)?;
    figure_csv_from_table(which, &table)
}

pub fn figure_csv_from_table(which: u8, table: &ShapeTable) -> Result<String> {
    let mut out = String::new();
    match which {
        1 => {
            out.push_str(FIGURE1_HEADER);
            out.push('\n');
            for n in 2..=FIGURE1_MAX_N {
                for model in Model::DISTINCT {
                    let m = exact_moments_from_table(table, n, model)?;
                    out.push_str(&format!(
                        "{n},{model},{},{},{},{}\n",
                        fmt_real(m.e_loglog_f),
                        fmt_real(rational_to_f64(&m.e_height)),
                        fmt_ratio(&m.e_height),
                        fmt_real(loglog_asymptotic(n, model)?),
                    ));
                }
            }
        }
        2 | 3 => {
            let variance = which == 3;
            out.push_str(if variance { FIGURE3_HEADER } else { FIGURE2_HEADER });
            out.push('\n');
            for n in 2..=FIGURE23_MAX_N {
                for model in Model::DISTINCT {
                    let m = exact_moments_from_table(table, n, model)?;
                    let exact = if variance { m.v_f } else { m.e_f }
                        .expect("rank moments available for n <= 10");
                    let approx = exact_mean_rank_asymptotic(n, model, variance)?;
                    out.push_str(&format!(
                        "{n},{model},{},{},{},{}\n",
                        fmt_ratio(&exact),
                        log2ln_cell(&exact),
                        fmt_ratio(&approx),
                        log2ln_cell(&approx),
                    ));
                }
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure {which} (expected 1, 2 or 3)"
            )))
        }
    }
    Ok(out)
}
