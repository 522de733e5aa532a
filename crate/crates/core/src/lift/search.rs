use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{LiftError, LiftTriple};
use crate::point::{Axis, ModPoint};

pub const DEFAULT_SEARCH_DEPTH: u32 = 25;

fn rot(c: &[BigUint; 3], axis: Axis) -> [BigUint; 3] {
    let (j, k) = axis.moved();
    let mut out = c.clone();
    out[j] = c[k].clone();
    out[k] = BigUint::from(3u32) * &c[axis.slot()] * &c[k] - &c[j];
    out
}

/// Best-first search of the rotation tree over `Z` rooted at `(1,1,1)`,
/// smallest size first, expanding each residue class mod `p` once and never
/// deeper than `budget`. The first node congruent to `target` is returned.
pub fn minimal_lift_search(target: &ModPoint, budget: u32) -> Result<LiftTriple, LiftError> {
    let p = BigUint::from(target.p());
    let residue = |c: &[BigUint; 3]| c.clone().map(|v| (v % &p).to_u64().expect("below p"));
    let size = |c: &[BigUint; 3]| c.iter().max().expect("three coords").clone();
    let root = [1u32, 1, 1].map(BigUint::from);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((size(&root), 0u32, root)));
    let mut expanded: HashSet<[u64; 3]> = HashSet::new();
    while let Some(Reverse((_, depth, c))) = heap.pop() {
        let r = residue(&c);
        if r == target.coords() {
            return Ok(LiftTriple::from_exact(c));
        }
        if !expanded.insert(r) || depth == budget {
            continue;
        }
        for axis in Axis::ALL {
            let child = rot(&c, axis);
            if !expanded.contains(&residue(&child)) {
                heap.push(Reverse((size(&child), depth + 1, child)));
            }
        }
    }
    Err(LiftError::NotFound {
        target: target.to_string(),
        budget,
    })
}
