//! Constructive paths from `(1,1,1)` to any point of `X*(p)`: seed into the
//! cage along `rot_1`, hop between cage points through conic intersections,
//! and reach the rest by endgame, middlegame or parabolic orbit moves.
//! Anything the construction cannot handle falls back to BFS.

use std::cmp::Reverse;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::field::Prime;
use crate::graph::{GraphError, GraphIndex, DEFAULT_ENUM_CAP};
use crate::point::{Axis, CoordClass, ModPoint, PathWord, RotationId, Surface};

/// Largest `n` tried for `rot_1^n(1,1,1)`.
pub const SEED_MAX: u32 = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BgsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rot1^n(1,1,1) is not maximal mod {0} for any n in 1..={SEED_MAX}")]
    SeedNotFound(u64),
    #[error("no maximal bridging coordinate between {from} and {to}")]
    NoBridge { from: String, to: String },
    #[error("{to} is not on the rot{axis} orbit of {from}")]
    OrbitMiss {
        from: String,
        axis: Axis,
        to: String,
    },
    #[error("endgame exhausted every orbit of {0} without reaching the cage")]
    EndgameExhausted(String),
    #[error("middlegame found no larger order on the orbit of {0}")]
    MiddlegameStuck(String),
    #[error("{0}")]
    Precondition(String),
    #[error("constructed word does not replay to {0}")]
    ReplayMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    SeedToCage,
    CageHop,
    Endgame,
    Middlegame,
    ParabolicHop,
    BfsFallback,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::SeedToCage => "seed",
            Stage::CageHop => "cage-hop",
            Stage::Endgame => "endgame",
            Stage::Middlegame => "middlegame",
            Stage::ParabolicHop => "parabolic",
            Stage::BfsFallback => "bfs",
        })
    }
}

/// `rot_1^n(1,1,1)` for the least `n` landing in the cage, with every
/// intermediate point from `(1,1,1)` on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub n: u32,
    pub point: ModPoint,
    pub points: Vec<ModPoint>,
}

/// Least `n` in `1..=5` with `rot_1^n(1,1,1)` maximal.
pub fn seed_to_cage(surface: &Surface) -> Option<Seed> {
    let mut x = ModPoint::origin(surface.prime());
    let mut points = vec![x];
    for n in 1..=SEED_MAX {
        x = x.rotate(RotationId::forward(Axis::X1));
        points.push(x);
        if x.is_maximal(surface) {
            return Some(Seed {
                n,
                point: x,
                points,
            });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub stage: Stage,
    pub word: PathWord,
    /// Point reached at the end of this segment.
    pub end: ModPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CagePath {
    pub target: ModPoint,
    pub segments: Vec<Segment>,
    /// Set when construction failed and BFS supplied the path.
    pub fallback_reason: Option<BgsError>,
}

impl CagePath {
    pub fn word(&self) -> PathWord {
        let mut w = PathWord::new();
        for s in &self.segments {
            w.extend(&s.word);
        }
        w
    }

    pub fn stages(&self) -> Vec<Stage> {
        self.segments.iter().map(|s| s.stage).collect()
    }

    pub fn is_pure_bgs(&self) -> bool {
        self.segments.iter().all(|s| s.stage != Stage::BfsFallback)
    }

    /// Largest `|n|` over all blocks of all segments.
    pub fn max_exponent(&self) -> u64 {
        self.segments
            .iter()
            .flat_map(|s| s.word.blocks())
            .map(|b| b.exponent.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Witnesses for a hop between two cage points through a third conic:
/// `meet_x` lies on `C_i(x_i)` and `C_k(value)`, `meet_y` on `C_j(y_j)` and
/// `C_k(value)`, with `value` of maximal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicBridge {
    pub value: u64,
    pub axes: (Axis, Axis, Axis),
    pub meet_x: ModPoint,
    pub meet_y: ModPoint,
}

/// Climb from a small-order point to one of order above `sqrt(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Climb {
    /// Word taking the start point to `end`.
    pub word: PathWord,
    pub end: ModPoint,
    /// `ord_p` at the start and after each segment, strictly increasing.
    pub orders: Vec<u64>,
}

fn other_axes(i: Axis) -> [Axis; 2] {
    let (a, b) = i.moved();
    [Axis::ALL[a], Axis::ALL[b]]
}

fn third_axis(i: Axis, j: Axis) -> Axis {
    Axis::ALL[3 - i.slot() - j.slot()]
}

/// Path construction for one prime. Holds the class table, the seed and a
/// lazily built graph for the BFS fallback.
pub struct PathFinder {
    surface: Surface,
    classes: Vec<CoordClass>,
    /// Maximal-order values, highest order first, then ascending.
    bridge_values: Vec<u64>,
    seed: Option<Seed>,
    enum_cap: u64,
    graph: OnceLock<Result<GraphIndex, GraphError>>,
}

impl fmt::Debug for PathFinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathFinder")
            .field("p", &self.p())
            .field("seed", &self.seed)
            .finish()
    }
}

impl PathFinder {
    pub fn new(prime: Prime) -> Self {
        Self::with_enum_cap(prime, DEFAULT_ENUM_CAP)
    }

    /// `enum_cap` bounds the prime for which the BFS fallback may build the graph.
    pub fn with_enum_cap(prime: Prime, enum_cap: u64) -> Self {
        let surface = Surface::new(prime);
        let classes = surface.class_table();
        let mut bridge_values: Vec<u64> = (0..prime.get())
            .filter(|&v| surface.is_maximal_order(classes[v as usize].order))
            .collect();
        bridge_values.sort_by_key(|&v| (Reverse(classes[v as usize].order), v));
        let seed = seed_to_cage(&surface);
        PathFinder {
            surface,
            classes,
            bridge_values,
            seed,
            enum_cap,
            graph: OnceLock::new(),
        }
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn p(&self) -> u64 {
        self.surface.p()
    }

    pub fn seed(&self) -> Option<&Seed> {
        self.seed.as_ref()
    }

    pub fn graph(&self) -> Result<&GraphIndex, GraphError> {
        self.graph
            .get_or_init(|| GraphIndex::build(self.surface.prime(), self.enum_cap))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn order(&self, v: u64) -> u64 {
        self.classes[v as usize].order
    }

    fn is_max_value(&self, v: u64) -> bool {
        self.surface.is_maximal_order(self.order(v))
    }

    fn point_order(&self, x: &ModPoint) -> (u64, Axis) {
        let mut best = (0, Axis::X1);
        for a in Axis::ALL {
            let o = self.order(x.coord(a));
            if o > best.0 {
                best = (o, a);
            }
        }
        best
    }

    fn maximal_axes(&self, x: &ModPoint) -> Vec<Axis> {
        Axis::ALL
            .into_iter()
            .filter(|&a| self.is_max_value(x.coord(a)))
            .collect()
    }

    pub fn is_maximal(&self, x: &ModPoint) -> bool {
        !self.maximal_axes(x).is_empty()
    }

    fn above_sqrt(&self, ord: u64) -> bool {
        (ord as u128) * (ord as u128) > self.p() as u128
    }

    fn two_thirds_axis(&self, x: &ModPoint) -> Option<Axis> {
        let t = self.surface.two_thirds().value();
        Axis::ALL.into_iter().find(|&a| x.coord(a) == t)
    }

    fn check_prime(&self, x: &ModPoint) -> Result<(), BgsError> {
        if x.p() != self.p() {
            return Err(BgsError::Precondition(format!(
                "point {x:?} is not mod {}",
                self.p()
            )));
        }
        Ok(())
    }

    /// Visits `rot_axis^n(x)` for `n = 0, 1, -1, 2, -2, ...` once around the
    /// orbit and returns the first hit.
    fn scan_orbit(
        &self,
        x: &ModPoint,
        axis: Axis,
        mut hit: impl FnMut(&ModPoint) -> bool,
    ) -> Option<(i64, ModPoint)> {
        if hit(x) {
            return Some((0, *x));
        }
        let len = self.order(x.coord(axis));
        let (mut fwd, mut back) = (*x, *x);
        for k in 1..=len / 2 {
            fwd = fwd.rotate(RotationId::forward(axis));
            if hit(&fwd) {
                return Some((k as i64, fwd));
            }
            if 2 * k != len {
                back = back.rotate(RotationId::backward(axis));
                if hit(&back) {
                    return Some((-(k as i64), back));
                }
            }
        }
        None
    }

    /// Shortest signed `n` with `rot_axis^n(from) = to`.
    fn orbit_exponent(&self, from: &ModPoint, axis: Axis, to: &ModPoint) -> Result<i64, BgsError> {
        self.scan_orbit(from, axis, |y| y == to)
            .map(|(n, _)| n)
            .ok_or_else(|| BgsError::OrbitMiss {
                from: from.to_string(),
                axis,
                to: to.to_string(),
            })
    }

    /// The point with value `u` in slot `a`, `c` in slot `b`, and the remaining
    /// coordinate solved from the surface equation (the root `(3uc + r)/2`).
    fn complete(&self, (a, u): (Axis, u64), (b, c): (Axis, u64)) -> Option<ModPoint> {
        let prime = self.surface.prime();
        let (fu, fc) = (prime.elem_u64(u), prime.elem_u64(c));
        let s = prime.elem(3) * fu * fc;
        let disc = s * s - prime.elem(4) * (fu * fu + fc * fc);
        let r = disc.sqrt()?;
        let w = (s + r) * prime.elem(2).inv().expect("p odd");
        let mut coords = [0u64; 3];
        coords[a.slot()] = u;
        coords[b.slot()] = c;
        coords[third_axis(a, b).slot()] = w.value();
        if coords == [0, 0, 0] {
            return None;
        }
        ModPoint::new(prime, coords).ok()
    }

    /// Bridge from `x` (maximal at `i`) to `y` (maximal at `j`) through a conic
    /// `C_k(z)` with `z` of maximal order.
    pub fn conic_bridge(
        &self,
        x: &ModPoint,
        i: Axis,
        y: &ModPoint,
        j: Axis,
    ) -> Result<ConicBridge, BgsError> {
        self.check_prime(x)?;
        self.check_prime(y)?;
        if !self.is_max_value(x.coord(i)) || !self.is_max_value(y.coord(j)) {
            return Err(BgsError::Precondition(format!(
                "conic bridge needs x_{i} of {x} and y_{j} of {y} maximal"
            )));
        }
        let ks: Vec<Axis> = if i == j {
            other_axes(i).to_vec()
        } else {
            vec![third_axis(i, j)]
        };
        for k in ks {
            for &z in &self.bridge_values {
                let Some(meet_x) = self.complete((i, x.coord(i)), (k, z)) else {
                    continue;
                };
                let Some(meet_y) = self.complete((j, y.coord(j)), (k, z)) else {
                    continue;
                };
                return Ok(ConicBridge {
                    value: z,
                    axes: (i, j, k),
                    meet_x,
                    meet_y,
                });
            }
        }
        Err(BgsError::NoBridge {
            from: x.to_string(),
            to: y.to_string(),
        })
    }

    /// Word from cage point `x` to cage point `y`: one orbit walk if they share
    /// a maximal conic, two through a direct conic intersection, otherwise
    /// three through a bridge. The shortest candidate wins.
    pub fn cage_hop(&self, x: &ModPoint, y: &ModPoint) -> Result<PathWord, BgsError> {
        if x == y {
            return Ok(PathWord::new());
        }
        let (xs, ys) = (self.maximal_axes(x), self.maximal_axes(y));
        if xs.is_empty() || ys.is_empty() {
            return Err(BgsError::Precondition(format!(
                "cage hop between non-maximal points {x} and {y}"
            )));
        }
        let mut best: Option<PathWord> = None;
        let mut last_err = None;
        for &i in &xs {
            for &j in &ys {
                match self.hop_via(x, i, y, j) {
                    Ok(w) => {
                        let better = best.as_ref().is_none_or(|b| {
                            (w.switches(), w.length()) < (b.switches(), b.length())
                        });
                        if better {
                            best = Some(w);
                        }
                    }
                    Err(e) => last_err = Some(e),
                }
            }
        }
        best.ok_or_else(|| last_err.expect("at least one axis pair was tried"))
    }

    fn hop_via(&self, x: &ModPoint, i: Axis, y: &ModPoint, j: Axis) -> Result<PathWord, BgsError> {
        let mut w = PathWord::new();
        if i == j && x.coord(i) == y.coord(j) {
            w.push(i, self.orbit_exponent(x, i, y)?);
            return Ok(w);
        }
        if i != j {
            if let Some(m) = self.complete((i, x.coord(i)), (j, y.coord(j))) {
                w.push(i, self.orbit_exponent(x, i, &m)?);
                w.push(j, self.orbit_exponent(&m, j, y)?);
                return Ok(w);
            }
        }
        let b = self.conic_bridge(x, i, y, j)?;
        let k = b.axes.2;
        w.push(i, self.orbit_exponent(x, i, &b.meet_x)?);
        w.push(k, self.orbit_exponent(&b.meet_x, k, &b.meet_y)?);
        w.push(j, self.orbit_exponent(&b.meet_y, j, y)?);
        Ok(w)
    }

    /// `(i, n, rot_i^n(x))` with the image maximal, scanning the maximal index
    /// first and then the other axes, each by `|n|` ascending.
    pub fn endgame(&self, x: &ModPoint) -> Result<(Axis, i64, ModPoint), BgsError> {
        self.check_prime(x)?;
        let (ord, i) = self.point_order(x);
        if !self.above_sqrt(ord) || self.classes[x.coord(i) as usize].discriminant == 0 {
            return Err(BgsError::Precondition(format!(
                "endgame needs ord > sqrt(p) and a non-parabolic maximal coordinate; {x} has ord {ord}"
            )));
        }
        let axes = std::iter::once(i).chain(Axis::ALL.into_iter().filter(|&a| a != i));
        for axis in axes {
            if let Some((n, y)) = self.scan_orbit(x, axis, |y| self.is_maximal(y)) {
                return Ok((axis, n, y));
            }
        }
        Err(BgsError::EndgameExhausted(x.to_string()))
    }

    /// Greedy order climbing from a point with `ord <= sqrt(p)` until the order
    /// exceeds `sqrt(p)`.
    pub fn middlegame(&self, x: &ModPoint) -> Result<Climb, BgsError> {
        self.check_prime(x)?;
        let (mut ord, _) = self.point_order(x);
        if self.above_sqrt(ord) {
            return Err(BgsError::Precondition(format!(
                "middlegame needs ord <= sqrt(p); {x} has ord {ord}"
            )));
        }
        let mut cur = *x;
        let mut word = PathWord::new();
        let mut orders = vec![ord];
        while !self.above_sqrt(ord) {
            let (_, i) = self.point_order(&cur);
            let Some((n, y)) = self.scan_orbit(&cur, i, |y| self.point_order(y).0 > ord) else {
                return Err(BgsError::MiddlegameStuck(cur.to_string()));
            };
            word.push(i, n);
            cur = y;
            ord = self.point_order(&cur).0;
            orders.push(ord);
        }
        let limit = self.surface.p_squared_minus_1().tau() as usize;
        debug_assert!(
            orders.len() - 1 <= limit,
            "{} switches > tau = {limit}",
            orders.len() - 1
        );
        Ok(Climb {
            word,
            end: cur,
            orders,
        })
    }

    /// Word from cage point `y` to `x`, where `x` has a coordinate `2/3`:
    /// the `rot_i` orbit of `x` is an arithmetic progression in its moved
    /// slots, so the point of it on `C_j(y_j)` is found by one division.
    pub fn parabolic_connect(&self, x: &ModPoint, y: &ModPoint) -> Result<PathWord, BgsError> {
        self.check_prime(x)?;
        self.check_prime(y)?;
        let p = self.p();
        let Some(i) = self.two_thirds_axis(x) else {
            return Err(BgsError::Precondition(format!("{x} has no coordinate 2/3")));
        };
        let j = self
            .maximal_axes(y)
            .into_iter()
            .find(|&j| j != i && y.coord(j) != 0)
            .ok_or_else(|| {
                BgsError::Precondition(format!(
                    "{y} needs a maximal index other than {i} with nonzero coordinate"
                ))
            })?;
        let prime = self.surface.prime();
        let (s, t) = i.moved();
        let (a0, a1) = (prime.elem_u64(x.coords()[s]), prime.elem_u64(x.coords()[t]));
        let d_inv = (a1 - a0)
            .inv()
            .expect("a constant progression is not on the surface");
        let start = if j.slot() == s { a0 } else { a1 };
        let n = ((prime.elem_u64(y.coord(j)) - start) * d_inv).value();
        let n = if n > p / 2 {
            n as i64 - p as i64
        } else {
            n as i64
        };
        let meet = x.rotation_power(i, n);
        let mut w = PathWord::new();
        w.push(j, self.orbit_exponent(y, j, &meet)?);
        w.push(i, -n);
        Ok(w)
    }

    /// Path from `(1,1,1)` to `target`, verified by replay.
    pub fn full_path(&self, target: &ModPoint) -> Result<CagePath, BgsError> {
        self.check_prime(target)?;
        let constructed = match &self.seed {
            Some(seed) => {
                let mut segs = vec![Segment {
                    stage: Stage::SeedToCage,
                    word: PathWord::single(Axis::X1, seed.n as i64),
                    end: seed.point,
                }];
                self.route(seed, target, &mut segs).map(|()| segs)
            }
            None => Err(BgsError::SeedNotFound(self.p())),
        };
        let path = match constructed {
            Ok(segments) => CagePath {
                target: *target,
                segments,
                fallback_reason: None,
            },
            Err(BgsError::Graph(e)) => return Err(e.into()),
            Err(reason) => {
                let g = match self.graph() {
                    Ok(g) => g,
                    Err(GraphError::CapExceeded { .. }) => return Err(reason),
                    Err(e) => return Err(e.into()),
                };
                let origin = ModPoint::origin(self.surface.prime());
                CagePath {
                    target: *target,
                    segments: vec![Segment {
                        stage: Stage::BfsFallback,
                        word: g.shortest_path(&origin, target)?,
                        end: *target,
                    }],
                    fallback_reason: Some(reason),
                }
            }
        };
        if ModPoint::origin(self.surface.prime()).apply_word(&path.word()) != *target {
            return Err(BgsError::ReplayMismatch(target.to_string()));
        }
        Ok(path)
    }

    fn route(&self, seed: &Seed, x: &ModPoint, segs: &mut Vec<Segment>) -> Result<(), BgsError> {
        let push = |segs: &mut Vec<Segment>, stage, word: PathWord, end| {
            if !word.is_empty() {
                segs.push(Segment { stage, word, end });
            }
        };
        if self.is_maximal(x) {
            push(segs, Stage::CageHop, self.cage_hop(&seed.point, x)?, *x);
            return Ok(());
        }
        if let Some(i) = self.two_thirds_axis(x) {
            if let Ok(w) = self.parabolic_connect(x, &seed.point) {
                push(segs, Stage::ParabolicHop, w, *x);
                return Ok(());
            }
            let (n, w) = self
                .scan_orbit(x, i, |y| self.is_maximal(y))
                .ok_or_else(|| BgsError::EndgameExhausted(x.to_string()))?;
            push(segs, Stage::CageHop, self.cage_hop(&seed.point, &w)?, w);
            push(segs, Stage::ParabolicHop, PathWord::single(i, -n), *x);
            return Ok(());
        }
        let (ord, _) = self.point_order(x);
        if self.above_sqrt(ord) {
            let (i, n, xc) = self.endgame(x)?;
            push(segs, Stage::CageHop, self.cage_hop(&seed.point, &xc)?, xc);
            push(segs, Stage::Endgame, PathWord::single(i, -n), *x);
            return Ok(());
        }
        let climb = self.middlegame(x)?;
        self.route(seed, &climb.end, segs)?;
        push(segs, Stage::Middlegame, climb.word.inverse(), *x);
        Ok(())
    }
}

/// One-shot `PathFinder::new(prime).full_path(target)`.
pub fn full_path(prime: Prime, target: &ModPoint) -> Result<CagePath, BgsError> {
    PathFinder::new(prime).full_path(target)
}

#[cfg(test)]
mod tests;
