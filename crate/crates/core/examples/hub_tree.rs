//! Hub tree T_{d,k,α,h}: critical hub density, longest feasible path, and
//! simulated level reach on either side of the threshold.
//!
//! cargo run --release --example hub_tree -- [d] [k] [h] [replicas]

use std::time::Instant;

use rumorlab::ctmc::{estimate_survival_ctmc, DEFAULT_EVENT_CAP, DEFAULT_HUB_LEVEL};
use rumorlab::thresholds::{alpha_critical, asymptotic_h_bound, max_h};
use rumorlab::treegen::TreeTopology;

fn main() -> rumorlab::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let d = args.first().copied().unwrap_or(50) as u32;
    let k = args.get(1).copied().unwrap_or(4) as u32;
    let h = args.get(2).copied().unwrap_or(2) as u32;
    let replicas = args.get(3).copied().unwrap_or(10_000);

    let ac = alpha_critical(d, k, h)?;
    println!("alpha_c({d},{k},{h}) = {:.6}  feasible = {}", ac.float_value, ac.feasible);
    for w in &ac.warnings {
        println!("warning: {w}");
    }
    println!(
        "max_h({d},{k}) = {}   log d / log k = {:.3}",
        max_h(d, k)?,
        asymptotic_h_bound(d as f64, k as f64)?
    );
    if !ac.feasible {
        return Ok(());
    }

    for factor in [0.5, 1.5] {
        let alpha = (factor * ac.float_value).min(1.0);
        let start = Instant::now();
        let topology = TreeTopology::hub_path(d, k, alpha, h)?;
        let est = estimate_survival_ctmc(&topology, 1.0, DEFAULT_HUB_LEVEL, replicas, DEFAULT_EVENT_CAP, 7)?;
        let e = &est.estimate;
        println!(
            "alpha = {alpha:.4}: P(reach hub generation {DEFAULT_HUB_LEVEL}) = {:.5} [{:.5}, {:.5}]  ({:.1?})",
            e.estimate,
            e.ci_low,
            e.ci_high,
            start.elapsed()
        );
    }
    Ok(())
}
