//! Loading the descriptor files shipped in `data/` and checking each one's
//! functional equation.

use lfunc::cli::load_descriptor;
use lfunc::lseries::LFunction;
use lfunc::solver::{fresh_samples, tolerance_log10};
use lfunc::Precision;
use std::path::Path;

fn main() -> lfunc::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["zeta.lf", "chi4.lf", "zetaQi.lf", "zetaQi_euler.lf", "delta.lf"] {
        let file = load_descriptor(&dir.join(name))?;
        let prec = Precision::new(file.digits.unwrap_or(30));
        let l = LFunction::prepare(&file.descriptor, &prec)?;
        let worst = fresh_samples()
            .into_iter()
            .map(|t| l.feq_residual_f64(t).map(|r| r.value.abs_f64()))
            .collect::<lfunc::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let tol = 10f64.powf(tolerance_log10(&prec));
        println!(
            "{name:<16} d = {}  worst residual {worst:.1e}  {}",
            file.descriptor.d(),
            if worst <= tol { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
