//! Event-driven Maki–Thompson dynamics on lazily realized trees.
//!
//! Each spreader of degree `g` contacts a uniform neighbor after an
//! `Exponential(g)` wait. A contacted ignorant becomes a spreader with
//! probability `p` and a stifler otherwise; contacting a non-ignorant
//! neighbor stifles the caller. On a tree the only non-ignorant neighbors of
//! a spreader are its parent and the children it has already contacted, so
//! a spreader only needs to remember which children it has called.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, ensure_degree, ensure_probability, Result};
use crate::laws::Pmf;
use crate::stats::{replica_rng, replica_seed, EstimateCI};
use crate::treegen::{child_key, root_key, TreeTopology, VertexRole};

pub const DEFAULT_EVENT_CAP: u64 = 100_000_000;
pub const DEFAULT_CAYLEY_LEVEL: u32 = 30;
pub const DEFAULT_HUB_LEVEL: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum VertexState {
    Ignorant = 0,
    Spreader = 1,
    Stifler = 2,
}

/// How far a vertex is from the root for the purpose of level reach.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum LevelMetric {
    /// Edges from the root.
    GraphDistance,
    /// Hubs on the path from the root, the root excluded. Equals the graph
    /// distance on Cayley trees.
    #[default]
    HubGeneration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Absorbed,
    LevelReached,
    EventCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimOutcome {
    /// Largest level of any vertex that was ever a spreader.
    pub reached_level: u32,
    pub active_spreaders_at_stop: u64,
    pub events_processed: u64,
    /// Non-root vertices that left the ignorant state.
    pub informed_total: u64,
    pub stop_reason: StopReason,
}

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub topology: TreeTopology,
    pub p: f64,
    pub target_level: u32,
    pub event_cap: u64,
    pub metric: LevelMetric,
}

impl SimConfig {
    pub fn new(topology: TreeTopology, p: f64, target_level: u32) -> Result<Self> {
        ensure_probability(p)?;
        if target_level < 1 {
            return Err(domain("target_level must be >= 1"));
        }
        Ok(Self {
            topology,
            p,
            target_level,
            event_cap: DEFAULT_EVENT_CAP,
            metric: LevelMetric::default(),
        })
    }

    pub fn with_event_cap(mut self, event_cap: u64) -> Self {
        self.event_cap = event_cap;
        self
    }

    pub fn with_metric(mut self, metric: LevelMetric) -> Self {
        self.metric = metric;
        self
    }
}

/// A state change seen by an [`Observer`]. Vertices are numbered in the
/// order they are first touched, the root being 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub vertex: u32,
    pub parent: Option<u32>,
    /// Index of `vertex` among its parent's children.
    pub child_index: u32,
    pub from: VertexState,
    pub to: VertexState,
    pub time: f64,
}

pub trait Observer {
    fn on_transition(&mut self, transition: &Transition);
}

impl Observer for () {
    fn on_transition(&mut self, _: &Transition) {}
}

/// One contact of a spreader: `Some(j)` when it calls the not yet contacted
/// child `j`, `None` when it calls a non-ignorant neighbor and stifles.
/// Neighbor index `child_count` (present when `degree > child_count`) is
/// the parent.
pub fn draw_contact<R: Rng + ?Sized>(
    rng: &mut R,
    degree: u32,
    child_count: u32,
    contacted: &mut Vec<u32>,
) -> Option<u32> {
    let j = rng.random_range(0..degree);
    if j >= child_count || contacted.contains(&j) {
        return None;
    }
    contacted.push(j);
    Some(j)
}

#[derive(Clone, Debug)]
struct Node {
    parent: u32,
    child_index: u32,
    key: u64,
    role: VertexRole,
    level: u32,
    state: VertexState,
    contacted: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    node: u32,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // min-heap on time
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Reusable buffers for repeated runs.
#[derive(Default)]
pub struct Engine {
    nodes: Vec<Node>,
    heap: BinaryHeap<Event>,
}

const NO_PARENT: u32 = u32::MAX;

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run<R: Rng + ?Sized, O: Observer + ?Sized>(
        &mut self,
        config: &SimConfig,
        tree_seed: u64,
        rng: &mut R,
        observer: &mut O,
    ) -> SimOutcome {
        let topology = &config.topology;
        self.nodes.clear();
        self.heap.clear();
        self.nodes.push(Node {
            parent: NO_PARENT,
            child_index: 0,
            key: root_key(tree_seed),
            role: VertexRole::Hub,
            level: 0,
            state: VertexState::Spreader,
            contacted: Vec::new(),
        });
        observer.on_transition(&Transition {
            vertex: 0,
            parent: None,
            child_index: 0,
            from: VertexState::Ignorant,
            to: VertexState::Spreader,
            time: 0.0,
        });
        let wait = |rng: &mut R, degree: u32| -> f64 {
            let e: f64 = Exp1.sample(rng);
            e / degree as f64
        };
        let root_degree = topology.degree(VertexRole::Hub);
        let first = wait(rng, root_degree);
        self.heap.push(Event { time: first, node: 0 });

        let mut active = 1u64;
        let mut events = 0u64;
        let mut informed = 0u64;
        let mut reached = 0u32;
        let stop_reason = loop {
            let Some(Event { time, node }) = self.heap.pop() else {
                break StopReason::Absorbed;
            };
            if events >= config.event_cap {
                break StopReason::EventCap;
            }
            events += 1;
            let idx = node as usize;
            let (role, is_root) = (self.nodes[idx].role, idx == 0);
            let degree = topology.degree(role);
            let child_count = topology.child_count(role, is_root);
            let contact = draw_contact(rng, degree, child_count, &mut self.nodes[idx].contacted);
            let Some(j) = contact else {
                let n = &mut self.nodes[idx];
                n.state = VertexState::Stifler;
                n.contacted = Vec::new();
                active -= 1;
                observer.on_transition(&Transition {
                    vertex: node,
                    parent: (n.parent != NO_PARENT).then_some(n.parent),
                    child_index: n.child_index,
                    from: VertexState::Spreader,
                    to: VertexState::Stifler,
                    time,
                });
                if active == 0 {
                    break StopReason::Absorbed;
                }
                continue;
            };
            let parent = &self.nodes[idx];
            let key = child_key(parent.key, j);
            let child_role = topology.child_role(role, j, key);
            let level = parent.level
                + match config.metric {
                    LevelMetric::GraphDistance => 1,
                    LevelMetric::HubGeneration => u32::from(child_role == VertexRole::Hub),
                };
            let spreads = rng.random::<f64>() < config.p;
            let state = if spreads {
                VertexState::Spreader
            } else {
                VertexState::Stifler
            };
            let child = self.nodes.len() as u32;
            self.nodes.push(Node {
                parent: node,
                child_index: j,
                key,
                role: child_role,
                level,
                state,
                contacted: Vec::new(),
            });
            informed += 1;
            observer.on_transition(&Transition {
                vertex: child,
                parent: Some(node),
                child_index: j,
                from: VertexState::Ignorant,
                to: state,
                time,
            });
            let again = time + wait(rng, degree);
            self.heap.push(Event { time: again, node });
            if spreads {
                active += 1;
                reached = reached.max(level);
                if level >= config.target_level {
                    break StopReason::LevelReached;
                }
                let first = time + wait(rng, topology.degree(child_role));
                self.heap.push(Event { time: first, node: child });
            }
        };
        SimOutcome {
            reached_level: reached,
            active_spreaders_at_stop: active,
            events_processed: events,
            informed_total: informed,
            stop_reason,
        }
    }
}

/// One run with the tree and the dynamics both derived from `seed`.
pub fn simulate_mt(
    topology: &TreeTopology,
    p: f64,
    target_level: u32,
    event_cap: u64,
    seed: u64,
) -> Result<SimOutcome> {
    let config = SimConfig::new(*topology, p, target_level)?.with_event_cap(event_cap);
    Ok(simulate_with(&config, seed, &mut ()))
}

pub fn simulate_with<O: Observer + ?Sized>(config: &SimConfig, seed: u64, observer: &mut O) -> SimOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Engine::new().run(config, seed, &mut rng, observer)
}

/// Level reach over many runs; run `r` uses the tree `replica_seed(seed, r)`
/// and the stream `replica_rng(seed, r)`.
#[derive(Clone, Debug, Serialize)]
pub struct SurvivalEstimate {
    #[serde(flatten)]
    pub estimate: EstimateCI,
    /// Runs stopped by the event cap, counted as reaching every level.
    pub cap_hits: u64,
    pub target_level: u32,
    /// `reach_counts[l]` = runs whose rumor reached level `l`.
    pub reach_counts: Vec<u64>,
}

impl SurvivalEstimate {
    /// `(level, estimate)` for every level up to the target.
    pub fn curve(&self) -> Vec<(u32, EstimateCI)> {
        self.reach_counts
            .iter()
            .enumerate()
            .map(|(l, &c)| (l as u32, EstimateCI::wilson(c, self.estimate.replicas, self.estimate.seed)))
            .collect()
    }
}

pub fn estimate_survival_ctmc(
    topology: &TreeTopology,
    p: f64,
    target_level: u32,
    replicas: u64,
    event_cap: u64,
    seed: u64,
) -> Result<SurvivalEstimate> {
    let config = SimConfig::new(*topology, p, target_level)?.with_event_cap(event_cap);
    estimate_survival_with(&config, replicas, seed)
}

pub fn estimate_survival_with(config: &SimConfig, replicas: u64, seed: u64) -> Result<SurvivalEstimate> {
    if replicas < 1 {
        return Err(domain("replicas must be >= 1"));
    }
    config.topology.ensure_survivable()?;
    let levels = config.target_level as usize + 1;
    let (reach_counts, cap_hits) = (0..replicas)
        .into_par_iter()
        .map_init(Engine::new, |engine, r| {
            let mut rng = replica_rng(seed, r);
            engine.run(config, replica_seed(seed, r), &mut rng, &mut ())
        })
        .fold(
            || (vec![0u64; levels], 0u64),
            |(mut counts, mut caps), out| {
                let top = if out.stop_reason == StopReason::EventCap {
                    caps += 1;
                    levels - 1
                } else {
                    out.reached_level as usize
                };
                for c in &mut counts[..=top.min(levels - 1)] {
                    *c += 1;
                }
                (counts, caps)
            },
        )
        .reduce(
            || (vec![0u64; levels], 0u64),
            |(mut a, ca), (b, cb)| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                (a, ca + cb)
            },
        );
    Ok(SurvivalEstimate {
        estimate: EstimateCI::wilson(reach_counts[levels - 1], replicas, seed),
        cap_hits,
        target_level: config.target_level,
        reach_counts,
    })
}

/// Empirical law of the number of new spreaders produced by a non-root
/// spreader of `T_d` (one non-ignorant neighbor, `d` ignorant ones).
pub fn offspring_empirical(d: u32, p: f64, replicas: u64, seed: u64) -> Result<Pmf> {
    ensure_degree(d, 2)?;
    ensure_probability(p)?;
    if replicas < 1 {
        return Err(domain("replicas must be >= 1"));
    }
    let slots = d as usize + 1;
    let counts = (0..replicas)
        .into_par_iter()
        .fold(
            || (vec![0u64; slots], Vec::with_capacity(slots)),
            |(mut counts, mut contacted), r| {
                let mut rng = replica_rng(seed, r);
                contacted.clear();
                let mut spreaders = 0;
                while draw_contact(&mut rng, d + 1, d, &mut contacted).is_some() {
                    spreaders += usize::from(rng.random::<f64>() < p);
                }
                counts[spreaders] += 1;
                (counts, contacted)
            },
        )
        .map(|(counts, _)| counts)
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Pmf::from_counts(0, &counts)
}

/// Fraction of runs in which a newly informed degree-`k` vertex (one
/// non-ignorant neighbor, `k − 1` ignorant ones) calls a designated ignorant
/// neighbor before stifling.
pub fn path_traversal_empirical(k: u32, replicas: u64, seed: u64) -> Result<EstimateCI> {
    if k < 2 {
        return Err(domain(format!("k must be >= 2, got {k}")));
    }
    if replicas < 1 {
        return Err(domain("replicas must be >= 1"));
    }
    let hits: u64 = (0..replicas)
        .into_par_iter()
        .map_init(Vec::new, |contacted, r| {
            let mut rng = replica_rng(seed, r);
            contacted.clear();
            loop {
                match draw_contact(&mut rng, k, k - 1, contacted) {
                    Some(0) => return 1,
                    Some(_) => continue,
                    None => return 0,
                }
            }
        })
        .sum();
    Ok(EstimateCI::wilson(hits, replicas, seed))
}
