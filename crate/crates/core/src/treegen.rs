//! Lazily realized trees: the Cayley tree `T_d` and the hub tree
//! `T_{d,k,α,h}`.
//!
//! Every vertex carries a 64-bit key obtained by hashing the master seed
//! along its path from the root, and all randomness attached to a vertex is
//! read off that key. The realized tree is therefore a pure function of the
//! seed and can be explored in any order.

use serde::Serialize;

use crate::error::{domain, ensure_degree, Error, Result};
use crate::stats::{mix64, unit_from_hash};

const ROOT_SALT: u64 = 0x6a09_e667_f3bc_c908;
const ALPHA_SALT: u64 = 0xbb67_ae85_84ca_a73b;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeTopology {
    Cayley { d: u32 },
    HubPath { d: u32, k: u32, alpha: f64, h: u32 },
}

impl TreeTopology {
    pub fn cayley(d: u32) -> Result<Self> {
        ensure_degree(d, 2)?;
        Ok(Self::Cayley { d })
    }

    pub fn hub_path(d: u32, k: u32, alpha: f64, h: u32) -> Result<Self> {
        ensure_degree(d, 2)?;
        if k < 2 {
            return Err(domain(format!("k must be >= 2, got {k}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if h < 1 {
            return Err(domain("h must be >= 1"));
        }
        Ok(Self::HubPath { d, k, alpha, h })
    }

    pub fn d(&self) -> u32 {
        match *self {
            Self::Cayley { d } | Self::HubPath { d, .. } => d,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match *self {
            Self::HubPath { d, k, .. } if k >= d => {
                vec![format!("k = {k} >= d = {d}: hub-tree thresholds assume k < d")]
            }
            _ => Vec::new(),
        }
    }

    /// Hubs reach, on average, fewer than one further path when
    /// `α(d+1) <= 1`, and such trees are rejected for survival runs.
    pub fn ensure_survivable(&self) -> Result<()> {
        if let Self::HubPath { d, alpha, .. } = *self {
            if alpha * (d + 1) as f64 <= 1.0 {
                return Err(domain(format!(
                    "alpha = {alpha} <= 1/(d+1) = {}: the hub tree is almost surely finite",
                    1.0 / (d + 1) as f64
                )));
            }
        }
        Ok(())
    }

    /// Number of neighbors of a vertex with this role.
    pub fn degree(&self, role: VertexRole) -> u32 {
        match (self, role) {
            (_, VertexRole::Hub) => self.d() + 1,
            (Self::HubPath { k, .. }, VertexRole::PathRegular { .. }) => *k,
            (_, VertexRole::Leaf) => 1,
            (Self::Cayley { .. }, VertexRole::PathRegular { .. }) => {
                unreachable!("Cayley trees contain only hubs")
            }
        }
    }

    /// Number of children: all neighbors at the root, all but the parent
    /// elsewhere.
    pub fn child_count(&self, role: VertexRole, is_root: bool) -> u32 {
        self.degree(role) - u32::from(!is_root)
    }

    /// Role of child `j` of a vertex with role `parent`, given the child key.
    pub fn child_role(&self, parent: VertexRole, j: u32, child_key: u64) -> VertexRole {
        match (*self, parent) {
            (Self::Cayley { .. }, _) => VertexRole::Hub,
            (Self::HubPath { alpha, h, .. }, VertexRole::Hub) => {
                if unit_from_hash(mix64(child_key ^ ALPHA_SALT)) < alpha {
                    path_start(h)
                } else {
                    VertexRole::Leaf
                }
            }
            (Self::HubPath { h, .. }, VertexRole::PathRegular { position }) => {
                if j > 0 {
                    VertexRole::Leaf
                } else if position + 1 < h {
                    VertexRole::PathRegular { position: position + 1 }
                } else {
                    VertexRole::Hub
                }
            }
            (_, VertexRole::Leaf) => unreachable!("leaves have no children"),
        }
    }
}

fn path_start(h: u32) -> VertexRole {
    if h == 1 {
        VertexRole::Hub
    } else {
        VertexRole::PathRegular { position: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum VertexRole {
    Hub,
    /// `position` counts edges from the hub the path leaves.
    PathRegular { position: u32 },
    Leaf,
}

/// Vertex addressed by child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct VertexId {
    pub path: Vec<u32>,
}

impl VertexId {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, j: u32) -> Self {
        let mut path = self.path.clone();
        path.push(j);
        Self { path }
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

pub fn root_key(seed: u64) -> u64 {
    mix64(seed ^ ROOT_SALT)
}

pub fn child_key(parent_key: u64, j: u32) -> u64 {
    mix64(parent_key ^ mix64(j as u64 + 1))
}

/// Role and key of `vertex` in the tree realized from `seed`.
pub fn resolve(topology: &TreeTopology, vertex: &VertexId, seed: u64) -> Result<(VertexRole, u64)> {
    let mut role = VertexRole::Hub;
    let mut key = root_key(seed);
    for (depth, &j) in vertex.path.iter().enumerate() {
        let count = topology.child_count(role, depth == 0);
        if j >= count {
            return Err(Error::InvalidVertex(format!(
                "{:?}: index {j} at depth {depth} but the vertex has {count} children",
                vertex.path
            )));
        }
        key = child_key(key, j);
        role = topology.child_role(role, j, key);
    }
    Ok((role, key))
}

pub fn role_of(topology: &TreeTopology, vertex: &VertexId, seed: u64) -> Result<VertexRole> {
    resolve(topology, vertex, seed).map(|(role, _)| role)
}

pub fn children(
    topology: &TreeTopology,
    vertex: &VertexId,
    seed: u64,
) -> Result<Vec<(VertexId, VertexRole)>> {
    let (role, key) = resolve(topology, vertex, seed)?;
    let count = topology.child_count(role, vertex.path.is_empty());
    Ok((0..count)
        .map(|j| (vertex.child(j), topology.child_role(role, j, child_key(key, j))))
        .collect())
}
