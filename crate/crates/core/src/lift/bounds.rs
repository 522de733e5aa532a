use std::io::Write;

use num_bigint::BigUint;

use super::{LiftError, SizeBound};
use crate::field::{FieldError, Prime};

/// `96 (2p+1)^4`, exactly, when it fits.
pub fn thm1_exponent(p: u64) -> Option<u128> {
    let b = 2 * p as u128 + 1;
    b.checked_pow(4)?.checked_mul(96)
}

/// `20 (2p+1)^2`, exactly, when it fits.
pub fn parabolic_exponent(p: u64) -> Option<u128> {
    let b = 2 * p as u128 + 1;
    b.checked_pow(2)?.checked_mul(20)
}

/// Lift bound along the cage route: `(3 eps)^{96 (2p+1)^4}`.
pub fn thm1_bound(p: u64) -> SizeBound {
    SizeBound {
        ln_exponent: 96.0_f64.ln() + 4.0 * (2.0 * p as f64 + 1.0).ln(),
    }
}

/// Lift bound for parabolic orbit routes: `(3 eps)^{20 (2p+1)^2}`.
pub fn parabolic_bound(p: u64) -> SizeBound {
    SizeBound {
        ln_exponent: 20.0_f64.ln() + 2.0 * (2.0 * p as f64 + 1.0).ln(),
    }
}

/// Middlegame route bound `(3 eps)^{96 (2p+1)^{4 + t/2}}` with
/// `t = tau(p^2 - 1)`; returns the bound and `t`.
pub fn middlegame_bound(p: u64) -> Result<(SizeBound, u128), FieldError> {
    let t = crate::field::tau(p as u128 * p as u128 - 1)?;
    let bound = SizeBound {
        ln_exponent: 96.0_f64.ln() + (4.0 + t as f64 / 2.0) * (2.0 * p as f64 + 1.0).ln(),
    };
    Ok((bound, t))
}

/// Which vertex-count proxy goes inside the shortest-path bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm2Base {
    /// `(p^3 + 3) / 2`.
    AsStated,
    /// `(p^2 + 3) / 2`, matching the diameter corollary.
    Diameter,
}

/// Shortest-path lift bound `(3 eps)^alpha`,
/// `alpha = base^{20 / ln(1 + h/3)}`.
pub fn thm2_bound(p: u64, h: f64, base: Thm2Base) -> Result<SizeBound, LiftError> {
    if h.is_nan() || h <= 0.0 {
        return Err(LiftError::NonPositiveExpansion(h));
    }
    let pf = p as f64;
    let b = match base {
        Thm2Base::AsStated => (pf * pf * pf + 3.0) / 2.0,
        Thm2Base::Diameter => (pf * pf + 3.0) / 2.0,
    };
    Ok(SizeBound {
        ln_exponent: 20.0 / (1.0 + h / 3.0).ln() * b.ln(),
    })
}

pub const BOUND_CSV_HEADER: &str =
    "p,thm1_log10,thm2_log10,middlegame_log10,parabolic_log10,h_lower,thm2_cor53_log10";

/// Every bound at one prime. `log10` columns hold `log10(size bound)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub p: u64,
    pub h_lower: Option<f64>,
    pub thm1: SizeBound,
    pub thm2_as_stated: Option<SizeBound>,
    pub thm2_cor53: Option<SizeBound>,
    pub middlegame: SizeBound,
    pub middlegame_t: u128,
    pub parabolic: SizeBound,
}

impl BoundReport {
    /// `h_lower` feeds the shortest-path bound; without it those columns stay empty.
    pub fn new(prime: Prime, h_lower: Option<f64>) -> Result<Self, LiftError> {
        let p = prime.get();
        let (middlegame, middlegame_t) = middlegame_bound(p)?;
        let (thm2_as_stated, thm2_cor53) = match h_lower {
            Some(h) => (
                Some(thm2_bound(p, h, Thm2Base::AsStated)?),
                Some(thm2_bound(p, h, Thm2Base::Diameter)?),
            ),
            None => (None, None),
        };
        Ok(BoundReport {
            p,
            h_lower,
            thm1: thm1_bound(p),
            thm2_as_stated,
            thm2_cor53,
            middlegame,
            middlegame_t,
            parabolic: parabolic_bound(p),
        })
    }

    pub fn csv_row(&self) -> String {
        let opt = |b: &Option<SizeBound>| b.map(|b| b.log10_size_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.p,
            self.thm1.log10_size_string(),
            opt(&self.thm2_as_stated),
            self.middlegame.log10_size_string(),
            self.parabolic.log10_size_string(),
            self.h_lower.map(|h| format!("{h:.6}")).unwrap_or_default(),
            opt(&self.thm2_cor53),
        )
    }

    pub fn write_csv<W: Write>(reports: &[BoundReport], mut out: W) -> std::io::Result<()> {
        writeln!(out, "{BOUND_CSV_HEADER}")?;
        for r in reports {
            writeln!(out, "{}", r.csv_row())?;
        }
        Ok(())
    }
}

/// `max prod (n_i + 1)` over partitions `n_1 + ... + n_s = ell`, by DP over
/// the size of the last part.
pub fn partition_max_product(ell: u32) -> BigUint {
    let mut best: Vec<BigUint> = vec![BigUint::from(1u32)];
    for n in 1..=ell as usize {
        let b = (1..=n)
            .map(|k| BigUint::from(k as u64 + 1) * &best[n - k])
            .max()
            .expect("n >= 1");
        best.push(b);
    }
    best.pop().expect("nonempty")
}
