//! Probability that a spreader on a path reaches the next vertex before it
//! stifles: the two closed forms against simulated contact sequences.
//!
//! cargo run --release --example beta_audit -- [replicas]

use rumorlab::ctmc::path_traversal_empirical;
use rumorlab::laws::{beta_gap, beta_paper, beta_series};

fn main() -> rumorlab::Result<()> {
    let replicas: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    for k in [3u32, 4, 5, 8, 30] {
        let d = k - 1;
        let (paper, series, gap) = (beta_paper(d)?, beta_series(d)?, beta_gap(d)?);
        let est = path_traversal_empirical(k, replicas, 11)?;
        println!("k = {k}");
        println!("  closed form  {:<28} {:.8}", short(&paper.to_string()), paper.to_f64());
        println!("  series form  {:<28} {:.8}", short(&series.to_string()), series.to_f64());
        println!("  gap          {:<28} {:.3e}", short(&gap.to_string()), gap.to_f64());
        println!(
            "  simulated    {:.6} [{:.6}, {:.6}]  z(closed) = {:.1}  z(series) = {:.1}",
            est.estimate,
            est.ci_low,
            est.ci_high,
            est.z_score(paper.to_f64()),
            est.z_score(series.to_f64())
        );
    }
    Ok(())
}

fn short(s: &str) -> String {
    if s.len() > 28 {
        format!("{}...", &s[..25])
    } else {
        s.to_string()
    }
}
