//! The Markoff mod-p graph: vertex enumeration, rotation adjacency, conic
//! sections, orbits, BFS shortest paths and spectral expansion estimates.

mod export;
mod spectral;

pub use export::{vertex_records, write_dot, write_vertex_csv, VertexRecord};
pub use spectral::{
    second_eigenvalue, spectral_gap_lower_bound, SpectralEstimate, SpectralOptions,
};

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{FieldError, Prime, SqrtTable};
use crate::point::{rotate_raw, Axis, ModPoint, PathWord, RotationId, Surface};

pub const DEFAULT_ENUM_CAP: u64 = 3000;
pub const DEFAULT_SPECTRAL_CAP: u64 = 200;
/// Half-edges per vertex: `rot_i^{+1}` and `rot_i^{-1}` for each axis.
pub const DEGREE: usize = 6;

const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("p = {p} exceeds the configured cap {cap}")]
    CapExceeded { p: u64, cap: u64 },
    #[error("point {0} is not a vertex of this graph")]
    UnknownVertex(String),
    #[error("{to} is unreachable from {from}: the graph is disconnected")]
    Unreachable { from: String, to: String },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },
}

/// All of `X*(p)` with dense ids in lexicographic order and the six rotation
/// neighbours of every vertex.
#[derive(Debug, Clone)]
pub struct GraphIndex {
    prime: Prime,
    vertices: Vec<[u32; 3]>,
    /// First id of each `(x1, x2)` row, indexed by `x1 * p + x2`; one extra
    /// entry at the end.
    row_start: Vec<u32>,
    adjacency: Vec<u32>,
    sqrt: SqrtTable,
}

fn half(p: u64) -> u64 {
    p.div_ceil(2)
}

/// Roots `x3` of `x3^2 - 3 x1 x2 x3 + x1^2 + x2^2 = 0`, ascending, deduplicated.
fn third_coordinates(p: u64, sqrt: &SqrtTable, a: u64, b: u64) -> ([u64; 2], usize) {
    let s = 3 * a % p * b % p;
    let c = (a * a + b * b) % p;
    let disc = (s * s % p + 4 * (p - c)) % p;
    let Some(r) = sqrt.sqrt(disc) else {
        return ([0, 0], 0);
    };
    let h = half(p);
    let r1 = (s + r) % p * h % p;
    let r2 = (s + p - r) % p * h % p;
    if r1 == r2 {
        ([r1, 0], 1)
    } else {
        ([r1.min(r2), r1.max(r2)], 2)
    }
}

impl GraphIndex {
    /// Enumerates `X*(p)` by solving for `x3` on every `(x1, x2)`, then links
    /// each vertex to its six rotation neighbours.
    pub fn build(prime: Prime, cap: u64) -> Result<Self, GraphError> {
        let p = prime.get();
        if p > cap {
            return Err(GraphError::CapExceeded { p, cap });
        }
        let sqrt = SqrtTable::new(prime);
        let rows: Vec<Vec<[u32; 3]>> = (0..p)
            .into_par_iter()
            .map(|a| {
                let mut row = Vec::with_capacity(2 * p as usize);
                for b in 0..p {
                    let (roots, n) = third_coordinates(p, &sqrt, a, b);
                    for &c in &roots[..n] {
                        if (a, b, c) != (0, 0, 0) {
                            row.push([a as u32, b as u32, c as u32]);
                        }
                    }
                }
                row
            })
            .collect();
        let vertices: Vec<[u32; 3]> = rows.into_iter().flatten().collect();
        let mut row_start = vec![0u32; (p * p + 1) as usize];
        for v in &vertices {
            row_start[(v[0] as u64 * p + v[1] as u64) as usize + 1] += 1;
        }
        for k in 1..row_start.len() {
            row_start[k] += row_start[k - 1];
        }
        let mut g = GraphIndex {
            prime,
            vertices,
            row_start,
            adjacency: Vec::new(),
            sqrt,
        };
        let adjacency: Vec<u32> = g
            .vertices
            .par_iter()
            .flat_map_iter(|v| {
                let c = v.map(u64::from);
                (0..DEGREE).map(move |slot| rotate_raw(p, c, RotationId::from_slot(slot)))
            })
            .map(|n| g.lookup(n).expect("rotations preserve X*(p)"))
            .collect();
        g.adjacency = adjacency;
        Ok(g)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn p(&self) -> u64 {
        self.prime.get()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn coords(&self, id: u32) -> [u64; 3] {
        self.vertices[id as usize].map(u64::from)
    }

    pub fn point(&self, id: u32) -> ModPoint {
        ModPoint::from_raw(self.p(), self.coords(id))
    }

    pub fn points(&self) -> impl Iterator<Item = ModPoint> + '_ {
        (0..self.len() as u32).map(|id| self.point(id))
    }

    fn lookup(&self, c: [u64; 3]) -> Option<u32> {
        let p = self.p();
        if c.iter().any(|&v| v >= p) {
            return None;
        }
        let row = (c[0] * p + c[1]) as usize;
        let (lo, hi) = (self.row_start[row], self.row_start[row + 1]);
        (lo..hi).find(|&id| self.vertices[id as usize][2] as u64 == c[2])
    }

    pub fn id_of(&self, x: &ModPoint) -> Result<u32, GraphError> {
        if x.p() != self.p() {
            return Err(GraphError::UnknownVertex(format!("{x:?}")));
        }
        self.lookup(x.coords())
            .ok_or_else(|| GraphError::UnknownVertex(x.to_string()))
    }

    /// Neighbour ids in slot order rot1+, rot1-, rot2+, rot2-, rot3+, rot3-.
    pub fn neighbors(&self, id: u32) -> &[u32] {
        let start = id as usize * DEGREE;
        &self.adjacency[start..start + DEGREE]
    }

    pub fn neighbor(&self, id: u32, step: RotationId) -> u32 {
        self.neighbors(id)[step.slot()]
    }

    pub fn adjacency(&self) -> &[u32] {
        &self.adjacency
    }

    /// `C_i(a)`: vertex ids with coordinate `axis` equal to `a`, ascending.
    pub fn conic(&self, axis: Axis, a: u64) -> Vec<u32> {
        let p = self.p();
        let a = a % p;
        let (j, k) = axis.moved();
        let mut ids: Vec<u32> = (0..p)
            .flat_map(|b| {
                let (roots, n) = third_coordinates(p, &self.sqrt, a, b);
                roots.into_iter().take(n).map(move |c| (b, c))
            })
            .filter_map(|(b, c)| {
                let mut coords = [0u64; 3];
                coords[axis.slot()] = a;
                coords[j] = b;
                coords[k] = c;
                if coords == [0, 0, 0] {
                    None
                } else {
                    self.lookup(coords)
                }
            })
            .collect();
        ids.sort_unstable();
        ids
    }

    /// `M_{x,i}` in order of application of `rot_i`, starting at `id`.
    pub fn orbit(&self, id: u32, axis: Axis) -> Vec<u32> {
        let step = RotationId::forward(axis);
        let mut out = vec![id];
        let mut cur = self.neighbor(id, step);
        while cur != id {
            out.push(cur);
            cur = self.neighbor(cur, step);
        }
        out
    }

    pub fn origin_id(&self) -> u32 {
        self.lookup([1, 1, 1])
            .expect("(1,1,1) is always on the surface")
    }

    pub fn bfs(&self, root: u32) -> BfsTree {
        let n = self.len();
        let mut parent = vec![UNREACHED; n];
        let mut via = vec![u8::MAX; n];
        let mut depth = vec![UNREACHED; n];
        let mut queue = VecDeque::with_capacity(n);
        depth[root as usize] = 0;
        parent[root as usize] = root;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let d = depth[v as usize] + 1;
            for (slot, &w) in self.neighbors(v).iter().enumerate() {
                if depth[w as usize] == UNREACHED {
                    depth[w as usize] = d;
                    parent[w as usize] = v;
                    via[w as usize] = slot as u8;
                    queue.push_back(w);
                }
            }
        }
        BfsTree {
            root,
            parent,
            via,
            depth,
        }
    }

    pub fn shortest_path(&self, from: &ModPoint, to: &ModPoint) -> Result<PathWord, GraphError> {
        let tree = self.bfs(self.id_of(from)?);
        tree.path_to(self.id_of(to)?)
            .ok_or_else(|| GraphError::Unreachable {
                from: from.to_string(),
                to: to.to_string(),
            })
    }

    /// Component sizes, the one containing `(1,1,1)` first.
    pub fn components(&self) -> Connectivity {
        let mut seen = vec![false; self.len()];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        let order = std::iter::once(self.origin_id()).chain(0..self.len() as u32);
        for start in order {
            if seen[start as usize] {
                continue;
            }
            seen[start as usize] = true;
            queue.push_back(start);
            let mut size = 0;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        Connectivity {
            connected: sizes.len() == 1,
            component_sizes: sizes,
        }
    }

    /// Classification-aware cage mask: `true` for maximal vertices.
    pub fn cage_mask(&self, surface: &Surface) -> Vec<bool> {
        let table = surface.class_table();
        self.vertices
            .par_iter()
            .map(|v| {
                v.iter()
                    .any(|&c| surface.is_maximal_order(table[c as usize].order))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    pub component_sizes: Vec<usize>,
}

/// Enumerates `X*(p)` and checks that BFS from `(1,1,1)` reaches everything.
pub fn connectivity_check(prime: Prime, cap: u64) -> Result<Connectivity, GraphError> {
    Ok(GraphIndex::build(prime, cap)?.components())
}

/// BFS parents and depths from a root.
#[derive(Debug, Clone)]
pub struct BfsTree {
    root: u32,
    parent: Vec<u32>,
    via: Vec<u8>,
    depth: Vec<u32>,
}

impl BfsTree {
    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn depth(&self, id: u32) -> Option<u32> {
        match self.depth[id as usize] {
            UNREACHED => None,
            d => Some(d),
        }
    }

    pub fn parent(&self, id: u32) -> Option<(u32, RotationId)> {
        if id == self.root || self.depth[id as usize] == UNREACHED {
            return None;
        }
        Some((
            self.parent[id as usize],
            RotationId::from_slot(self.via[id as usize] as usize),
        ))
    }

    pub fn reached(&self) -> usize {
        self.depth.iter().filter(|&&d| d != UNREACHED).count()
    }

    /// Eccentricity of the root.
    pub fn max_depth(&self) -> u32 {
        self.depth
            .iter()
            .copied()
            .filter(|&d| d != UNREACHED)
            .max()
            .unwrap_or(0)
    }

    /// `hist[d]` = number of vertices at depth `d`.
    pub fn depth_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.max_depth() as usize + 1];
        for &d in &self.depth {
            if d != UNREACHED {
                hist[d as usize] += 1;
            }
        }
        hist
    }

    /// Word taking the root to `id`, consecutive same-axis steps compressed.
    pub fn path_to(&self, id: u32) -> Option<PathWord> {
        self.depth(id)?;
        let mut steps = Vec::with_capacity(self.depth[id as usize] as usize);
        let mut cur = id;
        while let Some((parent, step)) = self.parent(cur) {
            steps.push(step);
            cur = parent;
        }
        Some(steps.into_iter().rev().collect())
    }
}
