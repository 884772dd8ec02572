//! Walks the hub tree of degree 5 with paths of length 4 and degree-4 path
//! vertices, printing one realized branch from the root.

use rumorlab::treegen::{children, TreeTopology, VertexId, VertexRole};

fn main() -> rumorlab::Result<()> {
    let topology = TreeTopology::hub_path(5, 4, 0.5, 4)?;
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3u64);
    let mut v = VertexId::root();
    for _ in 0..13 {
        let kids = children(&topology, &v, seed)?;
        let summary: Vec<&str> = kids
            .iter()
            .map(|(_, r)| match r {
                VertexRole::Hub => "H",
                VertexRole::PathRegular { .. } => "P",
                VertexRole::Leaf => "L",
            })
            .collect();
        println!("{:<40} children {}", format!("{:?}", v.path), summary.join(""));
        match kids.into_iter().find(|(_, r)| *r != VertexRole::Leaf) {
            Some((next, _)) => v = next,
            None => {
                println!("branch ends");
                break;
            }
        }
    }
    Ok(())
}
