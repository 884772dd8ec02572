//! Scaled incomplete gamma values e^n Γ(m, n), the recurrence check and the
//! leading-order approximation at n = m + 1.

use rumorlab::specfun::{
    gamma_asymptotic_log, gamma_recurrence_residual, ln_incomplete_gamma_at_successor,
    partial_exp_sum, scaled_incomplete_gamma,
};

fn main() -> rumorlab::Result<()> {
    for (m, n) in [(1u64, 1u64), (3, 4), (5, 6), (10, 3)] {
        println!(
            "m = {m:>2}, n = {n}: S = {}  e^n Γ = {}",
            partial_exp_sum(m, n)?,
            scaled_incomplete_gamma(m, n)?
        );
    }
    let worst = (1..=60u64)
        .flat_map(|m| (1..=60u64).map(move |n| (m, n)))
        .filter(|&(m, n)| !gamma_recurrence_residual(m, n).unwrap().is_zero())
        .count();
    println!("recurrence failures on 1..=60 x 1..=60: {worst}");
    for m in [3u64, 10, 100, 1000, 10_000] {
        let exact = ln_incomplete_gamma_at_successor(m)?;
        let approx = gamma_asymptotic_log(m)?;
        println!("m = {m:>5}: ln Γ(m, m+1) = {exact:.6}  leading order = {approx:.6}  ratio = {:.6}", (exact - approx).exp());
    }
    Ok(())
}
