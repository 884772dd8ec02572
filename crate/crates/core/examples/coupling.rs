//! Pathwise monotone coupling in p: processes driven by shared uniforms
//! never cross.

use rumorlab::gw::coupled_monotonicity_trial;

fn main() -> rumorlab::Result<()> {
    for (d, p1, p2) in [(3u32, 0.5, 0.9), (4, 0.3, 1.0), (6, 0.45, 0.5)] {
        let mut held = 0;
        for seed in 0..2_000 {
            held += coupled_monotonicity_trial(d, p1, p2, 20, seed)? as u32;
        }
        println!("d = {d}, p1 = {p1}, p2 = {p2}: dominated in {held}/2000 trials");
    }
    Ok(())
}
