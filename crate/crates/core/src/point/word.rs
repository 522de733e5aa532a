use std::fmt;
use std::str::FromStr;

use super::PointError;

/// A coordinate position, i.e. which rotation `rot_i` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    pub fn from_number(i: u8) -> Option<Axis> {
        match i {
            1 => Some(Axis::X1),
            2 => Some(Axis::X2),
            3 => Some(Axis::X3),
            _ => None,
        }
    }

    /// 1-based index as written in formulas.
    pub fn number(self) -> u8 {
        self.slot() as u8 + 1
    }

    pub fn slot(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    /// The two coordinates `rot_i` moves, as `(a_n, a_{n+1})` slots.
    pub fn moved(self) -> (usize, usize) {
        match self {
            Axis::X1 => (1, 2),
            Axis::X2 => (0, 2),
            Axis::X3 => (0, 1),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// `rot_i` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotationId {
    pub axis: Axis,
    pub direction: Direction,
}

impl RotationId {
    pub fn forward(axis: Axis) -> Self {
        RotationId {
            axis,
            direction: Direction::Forward,
        }
    }

    pub fn backward(axis: Axis) -> Self {
        RotationId {
            axis,
            direction: Direction::Backward,
        }
    }

    pub fn inverse(self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        RotationId { direction, ..self }
    }

    pub fn signum(self) -> i64 {
        match self.direction {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }

    /// Adjacency slot: rot1+, rot1-, rot2+, rot2-, rot3+, rot3-.
    pub fn slot(self) -> usize {
        2 * self.axis.slot() + usize::from(self.direction == Direction::Backward)
    }

    pub fn from_slot(slot: usize) -> Self {
        let axis = Axis::ALL[slot / 2];
        if slot.is_multiple_of(2) {
            Self::forward(axis)
        } else {
            Self::backward(axis)
        }
    }
}

/// One block `rot_i^n` of a word, `n != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub axis: Axis,
    pub exponent: i64,
}

/// A reduced word of rotation powers, stored in application order: the first
/// block acts first. Adjacent blocks always have different axes.
///
/// Text form is `r1^2.r3^-4.r2^1`, read left to right in application order;
/// the empty word is the empty string.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PathWord {
    blocks: Vec<Block>,
}

impl PathWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(axis: Axis, exponent: i64) -> Self {
        let mut w = Self::new();
        w.push(axis, exponent);
        w
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total path length `sum |n_k|`.
    pub fn length(&self) -> u64 {
        self.blocks.iter().map(|b| b.exponent.unsigned_abs()).sum()
    }

    /// Number of blocks `s`.
    pub fn switches(&self) -> usize {
        self.blocks.len()
    }

    /// Appends `rot_axis^exponent`, merging with the last block when the axis
    /// repeats and dropping blocks that cancel.
    pub fn push(&mut self, axis: Axis, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.blocks.last_mut() {
            if last.axis == axis {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.blocks.pop();
                }
                return;
            }
        }
        self.blocks.push(Block { axis, exponent });
    }

    pub fn push_step(&mut self, step: RotationId) {
        self.push(step.axis, step.signum());
    }

    pub fn extend(&mut self, other: &PathWord) {
        for b in &other.blocks {
            self.push(b.axis, b.exponent);
        }
    }

    pub fn then(mut self, other: &PathWord) -> PathWord {
        self.extend(other);
        self
    }

    pub fn inverse(&self) -> PathWord {
        PathWord {
            blocks: self
                .blocks
                .iter()
                .rev()
                .map(|b| Block {
                    axis: b.axis,
                    exponent: -b.exponent,
                })
                .collect(),
        }
    }

    /// Single steps in application order.
    pub fn steps(&self) -> impl Iterator<Item = RotationId> + '_ {
        self.blocks.iter().flat_map(|b| {
            let step = if b.exponent > 0 {
                RotationId::forward(b.axis)
            } else {
                RotationId::backward(b.axis)
            };
            std::iter::repeat_n(step, b.exponent.unsigned_abs() as usize)
        })
    }
}

impl FromIterator<RotationId> for PathWord {
    fn from_iter<I: IntoIterator<Item = RotationId>>(iter: I) -> Self {
        let mut w = PathWord::new();
        for step in iter {
            w.push_step(step);
        }
        w
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "r{}^{}", b.axis, b.exponent)?;
        }
        Ok(())
    }
}

impl FromStr for PathWord {
    type Err = PointError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut word = PathWord::new();
        if s.is_empty() {
            return Ok(word);
        }
        let bad = |why: &str| PointError::BadWord(format!("{s:?}: {why}"));
        for token in s.split('.') {
            let rest = token
                .strip_prefix('r')
                .ok_or_else(|| bad("block must start with 'r'"))?;
            let (idx, exp) = rest
                .split_once('^')
                .ok_or_else(|| bad("block must be r<i>^<n>"))?;
            let axis = idx
                .parse::<u8>()
                .ok()
                .and_then(Axis::from_number)
                .ok_or_else(|| bad("rotation index must be 1, 2 or 3"))?;
            let exponent: i64 = exp.parse().map_err(|_| bad("exponent is not an integer"))?;
            if exponent == 0 {
                return Err(bad("zero exponent"));
            }
            if word.blocks.last().is_some_and(|b| b.axis == axis) {
                return Err(bad("adjacent blocks share a rotation index"));
            }
            word.blocks.push(Block { axis, exponent });
        }
        Ok(word)
    }
}
