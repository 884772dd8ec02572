//! Critical spread probability p_c(d) for d = 3..=11 as exact fractions.

use rumorlab::thresholds::p_critical;

fn main() -> rumorlab::Result<()> {
    println!("{:>3}  {:>24}  {:>10}  {:>8}  {:>10}", "d", "p_c exact", "p_c", "4 dp", "sqrt(2/pi d)");
    for d in 3..=11 {
        let r = p_critical(d)?;
        let exact = r.exact.expect("small d is exact");
        let truncated = (r.float_value * 1e4).floor() / 1e4;
        println!(
            "{d:>3}  {:>24}  {:>10.6}  {truncated:>8.4}  {:>10.6}",
            exact.to_string(),
            r.float_value,
            r.asymptotic_value.unwrap_or(f64::NAN)
        );
    }
    println!("p_c(2) = {} (no phase transition on the binary tree)", p_critical(2)?.exact.unwrap());
    Ok(())
}
