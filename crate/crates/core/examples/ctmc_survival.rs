//! Level-reach probability of the rumor on T_4 at p = 0.9, from the
//! event-driven simulation, next to the analytic survival probability.
//!
//! cargo run --release --example ctmc_survival -- [replicas] [level]

use std::time::Instant;

use rumorlab::ctmc::{estimate_survival_ctmc, DEFAULT_EVENT_CAP};
use rumorlab::thresholds::theta;
use rumorlab::treegen::TreeTopology;

fn main() -> rumorlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let replicas: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let level: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(30);
    let (d, p) = (4, 0.9);

    let start = Instant::now();
    let topology = TreeTopology::cayley(d)?;
    let est = estimate_survival_ctmc(&topology, p, level, replicas, DEFAULT_EVENT_CAP, 2024)?;
    let e = &est.estimate;
    println!("theta({d}, {p})            = {:.5}", theta(d, p)?);
    println!(
        "P(reach level {level:>2})       = {:.5}  [{:.5}, {:.5}]  ({} runs, {} capped)",
        e.estimate, e.ci_low, e.ci_high, e.replicas, est.cap_hits
    );
    for (l, ci) in est.curve().iter().step_by(5) {
        println!("  level {l:>3}: {:.5}", ci.estimate);
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
