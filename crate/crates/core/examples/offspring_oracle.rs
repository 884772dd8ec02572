//! Offspring law of a spreader: closed form against simulated contact
//! sequences.

use rumorlab::ctmc::offspring_empirical;
use rumorlab::laws::{law_n_prime, law_x, offspring_law};

fn main() -> rumorlab::Result<()> {
    let x = law_x(3)?;
    let exact: Vec<String> = x.exact().unwrap().iter().map(|q| q.to_string()).collect();
    println!("law of X on T_3: [{}], mean {}", exact.join(", "), x.mean_exact().unwrap());

    for (d, p) in [(3u32, 1.0), (3, 0.5), (6, 0.8)] {
        let analytic = offspring_law(d, p)?;
        let emp = offspring_empirical(d, p, 400_000, 5)?;
        println!("\nd = {d}, p = {p}: TV distance {:.5}", emp.tv_distance(&analytic));
        println!("  i   P(X'=i)    simulated   P(N'=i)");
        let n = law_n_prime(d, p)?;
        for i in 0..=n.support_max() {
            println!("{i:>3}   {:.6}   {:.6}    {:.6}", analytic.prob(i), emp.prob(i), n.prob(i));
        }
    }
    Ok(())
}
