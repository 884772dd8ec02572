//! Extinction and survival probabilities across p for a few degrees, with
//! the large-d behavior of p_c.

use rumorlab::thresholds::{p_critical, psi_root, theta, theta_double_sum};

fn main() -> rumorlab::Result<()> {
    for d in [3u32, 4, 6, 10] {
        let pc = p_critical(d)?.float_value;
        println!("d = {d}, p_c = {pc:.6}");
        for p in [0.3, 0.5, 0.7, 0.9, 1.0] {
            let psi = psi_root(d, p)?;
            let t = theta(d, p)?;
            let check = if p < 1.0 {
                format!("{:.3e}", (theta_double_sum(d, p)? - t).abs())
            } else {
                "-".into()
            };
            println!("  p = {p:.1}  psi = {:.10}  theta = {t:.10}  |double sum - theta| = {check}", psi.psi);
        }
    }
    println!("\n p_c(d)*sqrt(pi d/2) - 1:");
    for d in [10u32, 100, 1_000, 10_000, 100_000] {
        let r = p_critical(d)?;
        let scaled = r.float_value * (std::f64::consts::PI * d as f64 / 2.0).sqrt() - 1.0;
        println!("  d = {d:>6}: {scaled:.6}  (exact form: {})", r.exact.unwrap().is_exact());
    }
    Ok(())
}
