//! Markoff points mod p, the Vieta generators, rotations and their orders.

mod classify;
mod lucas;
mod word;

pub use classify::{CoordClass, CoordKind, Surface};
pub use lucas::{lucas_triple, rotation_matrix_power};
pub use word::{Axis, Block, Direction, PathWord, RotationId};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::field::{Fp, Prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("({0},{1},{2}) is not on the Markoff surface mod {3}")]
    NotOnSurface(u64, u64, u64, u64),
    #[error("the zero triple is excluded")]
    Zero,
    #[error("coordinate {0} is not reduced mod {1}")]
    Unreduced(u64, u64),
    #[error("bad point literal {0:?}; expected x1,x2,x3")]
    BadLiteral(String),
    #[error("bad path word {0}")]
    BadWord(String),
}

/// A nonzero point of `x1^2 + x2^2 + x3^2 = 3 x1 x2 x3` over `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoint {
    p: u64,
    coords: [u64; 3],
}

fn on_surface(p: u64, c: [u64; 3]) -> bool {
    let [a, b, d] = c.map(|v| v as u128);
    let p = p as u128;
    let lhs = (a * a + b * b + d * d) % p;
    let rhs = 3 * (a * b % p) % p * d % p;
    lhs == rhs
}

impl ModPoint {
    pub fn new(prime: Prime, coords: [u64; 3]) -> Result<Self, PointError> {
        let p = prime.get();
        if let Some(&v) = coords.iter().find(|&&v| v >= p) {
            return Err(PointError::Unreduced(v, p));
        }
        if coords == [0, 0, 0] {
            return Err(PointError::Zero);
        }
        if !on_surface(p, coords) {
            return Err(PointError::NotOnSurface(coords[0], coords[1], coords[2], p));
        }
        Ok(ModPoint { p, coords })
    }

    /// Caller guarantees the coordinates are reduced, nonzero and on the surface.
    pub(crate) fn from_raw(p: u64, coords: [u64; 3]) -> Self {
        debug_assert!(coords != [0, 0, 0] && on_surface(p, coords));
        ModPoint { p, coords }
    }

    /// `(1, 1, 1)`.
    pub fn origin(prime: Prime) -> Self {
        ModPoint::from_raw(prime.get(), [1, 1, 1])
    }

    /// Parses the `x1,x2,x3` literal; values must already lie in `[0, p)`.
    pub fn parse(prime: Prime, literal: &str) -> Result<Self, PointError> {
        let parts: Vec<&str> = literal.split(',').map(str::trim).collect();
        let bad = || PointError::BadLiteral(literal.to_string());
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut coords = [0u64; 3];
        for (slot, part) in coords.iter_mut().zip(&parts) {
            *slot = u64::from_str(part).map_err(|_| bad())?;
        }
        ModPoint::new(prime, coords)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> [u64; 3] {
        self.coords
    }

    pub fn coord(&self, axis: Axis) -> u64 {
        self.coords[axis.slot()]
    }

    fn fp(&self, slot: usize) -> Fp {
        Prime::unchecked(self.p).elem_u64(self.coords[slot])
    }

    /// One step of `rot_i` or its inverse.
    pub fn rotate(&self, step: RotationId) -> ModPoint {
        ModPoint::from_raw(self.p, rotate_raw(self.p, self.coords, step))
    }

    /// `rot_i^n(x)` for any signed `n`, via the Lucas form of `A_x^n`.
    pub fn rotation_power(&self, axis: Axis, n: i64) -> ModPoint {
        if n == 0 {
            return *self;
        }
        let x = self.fp(axis.slot());
        let trace = x + x + x;
        let (j, k) = axis.moved();
        let (a0, a1) = (self.fp(j), self.fp(k));
        let (prev, cur, next) = lucas_triple(trace, n);
        let an = -(prev * a0) + cur * a1;
        let an1 = -(cur * a0) + next * a1;
        let mut c = self.coords;
        c[j] = an.value();
        c[k] = an1.value();
        ModPoint::from_raw(self.p, c)
    }

    pub fn apply_word(&self, word: &PathWord) -> ModPoint {
        word.blocks()
            .iter()
            .fold(*self, |x, b| x.rotation_power(b.axis, b.exponent))
    }

    pub fn vieta(&self, g: Vieta) -> ModPoint {
        let p = self.p as u128;
        let [a, b, c] = self.coords;
        let flip = |keep1: u64, keep2: u64, old: u64| -> u64 {
            let prod = 3 * (keep1 as u128 * keep2 as u128 % p) % p;
            ((prod + p - old as u128) % p) as u64
        };
        let coords = match g {
            Vieta::R1 => [flip(b, c, a), b, c],
            Vieta::R2 => [a, flip(a, c, b), c],
            Vieta::R3 => [a, b, flip(a, b, c)],
            Vieta::S12 => [b, a, c],
            Vieta::S13 => [c, b, a],
            Vieta::S23 => [a, c, b],
        };
        ModPoint::from_raw(self.p, coords)
    }

    /// `ord_{p,i}(x)`: depends only on `x_i`.
    pub fn rotation_order(&self, surface: &Surface, axis: Axis) -> u64 {
        surface.classify(self.coord(axis)).order
    }

    /// `ord_p(x)` and the smallest axis attaining it.
    pub fn point_order(&self, surface: &Surface) -> (u64, Axis) {
        let mut best = (0, Axis::X1);
        for axis in Axis::ALL {
            let o = self.rotation_order(surface, axis);
            if o > best.0 {
                best = (o, axis);
            }
        }
        best
    }

    /// Cage membership: some coordinate has order `p - 1`, `p + 1` or `2p`.
    pub fn is_maximal(&self, surface: &Surface) -> bool {
        Axis::ALL
            .iter()
            .any(|&a| surface.is_maximal_order(self.rotation_order(surface, a)))
    }
}

/// Single rotation step on raw reduced coordinates.
pub(crate) fn rotate_raw(p: u64, c: [u64; 3], step: RotationId) -> [u64; 3] {
    let p128 = p as u128;
    let next = |fixed: u64, a: u64, b: u64| -> u64 {
        // 3 * fixed * a - b
        let prod = 3 * (fixed as u128 * a as u128 % p128) % p128;
        ((prod + p128 - b as u128) % p128) as u64
    };
    let (j, k) = step.axis.moved();
    let fixed = c[step.axis.slot()];
    let mut out = c;
    match step.direction {
        // (a_n, a_{n+1}) -> (a_{n+1}, 3x a_{n+1} - a_n)
        Direction::Forward => {
            out[j] = c[k];
            out[k] = next(fixed, c[k], c[j]);
        }
        // (a_n, a_{n+1}) -> (3x a_n - a_{n+1}, a_n)
        Direction::Backward => {
            out[j] = next(fixed, c[j], c[k]);
            out[k] = c[j];
        }
    }
    out
}

/// The six generators of the Vieta group used here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vieta {
    R1,
    R2,
    R3,
    S12,
    S13,
    S23,
}

impl fmt::Debug for ModPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self, self.p)
    }
}

impl fmt::Display for ModPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords;
        write!(f, "{a},{b},{c}")
    }
}

/// `rot_1^n(1,1,1) = (1, F(2n-1), F(2n+1))` over the integers, with
/// `F(-1) = 1`.
pub fn fibonacci_form(n: u64) -> [BigUint; 3] {
    // Walk odd-index Fibonacci numbers: F(2k+1) = 3 F(2k-1) - F(2k-3).
    let mut prev = BigUint::from(1u32); // F(-1)
    let mut cur = BigUint::from(1u32); // F(1)
    for _ in 0..n {
        let next = &cur * 3u32 - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    [BigUint::from(1u32), prev, cur]
}
