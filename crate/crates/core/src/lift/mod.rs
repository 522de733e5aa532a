//! Integer lifts: replay a path word from `(1,1,1)` over `Z`, measure sizes,
//! and evaluate the growth and lift-size bounds.

mod bounds;
mod search;

pub use bounds::{
    middlegame_bound, parabolic_bound, parabolic_exponent, partition_max_product, thm1_bound,
    thm1_exponent, thm2_bound, BoundReport, Thm2Base, BOUND_CSV_HEADER,
};
pub use search::{minimal_lift_search, DEFAULT_SEARCH_DEPTH};

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::field::{FieldError, Prime};
use crate::point::{Axis, ModPoint, PathWord, PointError};

pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

/// `(3 + sqrt 5) / 2`.
pub fn epsilon() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

/// `ln(3 epsilon)`, the base of every size bound.
pub fn ln_three_eps() -> f64 {
    (3.0 * epsilon()).ln()
}

/// Relative margin inside which bound comparisons are inconclusive.
pub const GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error("exact replay exceeds {cap} decimal digits")]
    DigitCapExceeded { cap: u64 },
    #[error("expansion lower bound must be positive, got {0}")]
    NonPositiveExpansion(f64),
    #[error("no lift of {target} within depth {budget}")]
    NotFound { target: String, budget: u32 },
}

#[derive(Debug, Clone, Copy)]
pub struct ReplayOptions {
    pub digit_cap: u64,
    /// Fail instead of switching to log-domain tracking past the cap.
    pub require_exact: bool,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        ReplayOptions {
            digit_cap: DEFAULT_DIGIT_CAP,
            require_exact: false,
        }
    }
}

/// A Markoff triple over `Z`, exact or known only through natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftTriple {
    exact: Option<[BigUint; 3]>,
    ln: [f64; 3],
}

/// Natural log of a positive big integer.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl LiftTriple {
    pub fn from_exact(coords: [BigUint; 3]) -> Self {
        let ln = [0, 1, 2].map(|i| ln_biguint(&coords[i]));
        LiftTriple {
            exact: Some(coords),
            ln,
        }
    }

    pub fn origin() -> Self {
        Self::from_exact([1u32, 1, 1].map(BigUint::from))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn coords(&self) -> Option<&[BigUint; 3]> {
        self.exact.as_ref()
    }

    /// Natural logs of the three coordinates.
    pub fn ln_coords(&self) -> [f64; 3] {
        self.ln
    }

    /// `max(x1, x2, x3)` when exact.
    pub fn size(&self) -> Option<&BigUint> {
        self.exact
            .as_ref()
            .map(|c| c.iter().max().expect("three coords"))
    }

    /// `ln size`.
    pub fn log_size(&self) -> f64 {
        self.ln.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn log10_size(&self) -> f64 {
        self.log_size() / std::f64::consts::LN_10
    }

    /// `x1^2 + x2^2 + x3^2 == 3 x1 x2 x3`; `None` when inexact.
    pub fn is_markoff(&self) -> Option<bool> {
        let [a, b, c] = self.exact.as_ref()?;
        Some(a * a + b * b + c * c == BigUint::from(3u32) * a * b * c)
    }

    pub fn reduce(&self, prime: Prime) -> Option<Result<ModPoint, PointError>> {
        let c = self.exact.as_ref()?;
        let p = BigUint::from(prime.get());
        let r = [0, 1, 2].map(|i| (&c[i] % &p).to_u64().expect("below p"));
        Some(ModPoint::new(prime, r))
    }
}

impl fmt::Display for LiftTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some([a, b, c]) => write!(f, "{a},{b},{c}"),
            None => write!(f, "log10_size={:.6e}", self.log10_size()),
        }
    }
}

/// `ln(3 x a - b)` from the logs of `x`, `a` and `b`, via the other-root
/// identity `(3 x a - b) b = x^2 + a^2`, which never cancels.
fn ln_step(ln_x: f64, ln_a: f64, ln_b: f64) -> f64 {
    let (hi, lo) = if ln_x > ln_a {
        (ln_x, ln_a)
    } else {
        (ln_a, ln_x)
    };
    2.0 * hi + (2.0 * (lo - hi)).exp().ln_1p() - ln_b
}

/// Replays `word` from `(1,1,1)` over the integers. Exact while every
/// coordinate stays below `10^digit_cap`; afterwards coordinates are carried
/// as natural logs and the result is flagged inexact.
pub fn replay_integer(word: &PathWord, opts: &ReplayOptions) -> Result<LiftTriple, LiftError> {
    replay_from(LiftTriple::origin(), word, opts)
}

pub fn replay_from(
    start: LiftTriple,
    word: &PathWord,
    opts: &ReplayOptions,
) -> Result<LiftTriple, LiftError> {
    let cap_bits = (opts.digit_cap as f64 * std::f64::consts::LOG2_10).ceil() as u64;
    let mut exact = start.exact;
    let mut ln = start.ln;
    for block in word.blocks() {
        let axis: Axis = block.axis;
        let (j, k) = axis.moved();
        let forward = block.exponent > 0;
        let steps = block.exponent.unsigned_abs();
        for _ in 0..steps {
            if let Some(c) = exact.as_mut() {
                let t = BigUint::from(3u32) * &c[axis.slot()];
                if forward {
                    let next = &t * &c[k] - &c[j];
                    c[j] = std::mem::replace(&mut c[k], next);
                } else {
                    let prev = &t * &c[j] - &c[k];
                    c[k] = std::mem::replace(&mut c[j], prev);
                }
                if c[j].bits().max(c[k].bits()) > cap_bits {
                    if opts.require_exact {
                        return Err(LiftError::DigitCapExceeded {
                            cap: opts.digit_cap,
                        });
                    }
                    ln = [0, 1, 2].map(|i| ln_biguint(&c[i]));
                    exact = None;
                }
            } else if forward {
                let next = ln_step(ln[axis.slot()], ln[k], ln[j]);
                ln[j] = std::mem::replace(&mut ln[k], next);
            } else {
                let prev = ln_step(ln[axis.slot()], ln[j], ln[k]);
                ln[k] = std::mem::replace(&mut ln[j], prev);
            }
        }
    }
    Ok(match exact {
        Some(c) => LiftTriple::from_exact(c),
        None => LiftTriple { exact: None, ln },
    })
}

/// Outcome of comparing a measured log-size with a bound under [`GUARD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Holds,
    Violated,
    Inconclusive,
}

/// `size <= (3 eps)^E`, stored as `ln E` since `E` itself can overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeBound {
    pub ln_exponent: f64,
}

impl SizeBound {
    /// `E`; infinite when it does not fit in `f64`.
    pub fn exponent(&self) -> f64 {
        self.ln_exponent.exp()
    }

    /// `ln` of the size bound, `E ln(3 eps)`.
    pub fn ln_size(&self) -> f64 {
        self.exponent() * ln_three_eps()
    }

    /// `log10(log10 size bound)`, finite even when the bound is astronomical.
    pub fn log10_log10_size(&self) -> f64 {
        (self.ln_exponent + (ln_three_eps() / std::f64::consts::LN_10).ln())
            / std::f64::consts::LN_10
    }

    /// `log10` of the size bound in `m.mmmmmme<exp>` form.
    pub fn log10_size_string(&self) -> String {
        let l = self.log10_log10_size();
        let exp = l.floor();
        let mut mantissa = 10f64.powf(l - exp);
        let mut exp = exp as i64;
        if mantissa >= 9.9999995 {
            mantissa /= 10.0;
            exp += 1;
        }
        format!("{mantissa:.6}e{exp}")
    }

    /// Compares `ln size` against the bound in log-log space.
    pub fn dominates(&self, ln_size: f64) -> Dominance {
        if ln_size <= 0.0 {
            return Dominance::Holds;
        }
        let r = ln_size.ln() - (self.ln_exponent + ln_three_eps().ln());
        if r < -GUARD {
            Dominance::Holds
        } else if r > GUARD {
            Dominance::Violated
        } else {
            Dominance::Inconclusive
        }
    }
}

/// Growth bound for `rot_{i_s}^{n_s} ... rot_{i_1}^{n_1}(1,1,1)`:
/// exponent `2^{s-1} (n_1+1) ... (n_s+1)`. Needs a nonempty word with
/// positive exponents.
pub fn sizes_bound(word: &PathWord) -> Option<SizeBound> {
    let blocks = word.blocks();
    if blocks.is_empty() || blocks.iter().any(|b| b.exponent < 1) {
        return None;
    }
    let ln_exponent = (blocks.len() - 1) as f64 * std::f64::consts::LN_2
        + blocks
            .iter()
            .map(|b| ((b.exponent + 1) as f64).ln())
            .sum::<f64>();
    Some(SizeBound { ln_exponent })
}
