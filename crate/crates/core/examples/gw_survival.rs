//! Galton–Watson survival estimates against the analytic survival
//! probability, with both offspring samplers.

use rumorlab::gw::{extinction_by_iteration, survival_mc_spec, GwSpec, DEFAULT_POPULATION_CAP};
use rumorlab::laws::{law_x, offspring_law};
use rumorlab::thresholds::{psi_root, theta};

fn main() -> rumorlab::Result<()> {
    for (d, p) in [(3u32, 1.0), (4, 0.9), (4, 0.6), (8, 0.5)] {
        let spec = GwSpec::for_rumor(d, p, 60, DEFAULT_POPULATION_CAP)?;
        let thinned = spec.clone().with_thinning(law_x(d)?, p)?;
        let a = survival_mc_spec(&spec, 20_000, 1)?;
        let b = survival_mc_spec(&thinned, 20_000, 2)?;
        let psi = psi_root(d, p)?.psi;
        let iterated = extinction_by_iteration(&offspring_law(d, p)?, 1e-12)?;
        println!(
            "d = {d}, p = {p}: theta = {:.4}  inverse-cdf {:.4} ± {:.4}  thinning {:.4} ± {:.4}  psi {psi:.6} / {iterated:.6}",
            theta(d, p)?,
            a.estimate,
            a.standard_error(),
            b.estimate,
            b.standard_error()
        );
    }
    Ok(())
}
