use super::{Factorization, FieldError, Fp, Fp2};

/// A finite multiplicative group element with fast powering.
pub trait MulGroup: Sized {
    fn pow_u128(&self, exp: u128) -> Self;
    fn is_identity(&self) -> bool;
}

impl MulGroup for Fp {
    fn pow_u128(&self, exp: u128) -> Self {
        self.pow(exp)
    }

    fn is_identity(&self) -> bool {
        self.value() == 1 % self.modulus()
    }
}

impl MulGroup for Fp2 {
    fn pow_u128(&self, exp: u128) -> Self {
        self.pow(exp)
    }

    fn is_identity(&self) -> bool {
        self.is_one()
    }
}

/// Least `d >= 1` with `x^d = 1`, found by stripping prime factors off
/// `group_order`. `factors` must be the factorization of `group_order`.
pub fn mult_order<G: MulGroup>(
    x: &G,
    group_order: u128,
    factors: &Factorization,
) -> Result<u128, FieldError> {
    debug_assert_eq!(factors.value(), group_order);
    if !x.pow_u128(group_order).is_identity() {
        return Err(FieldError::InconsistentInput);
    }
    let mut order = group_order;
    for &(q, _) in factors.pairs() {
        while order.is_multiple_of(q) && x.pow_u128(order / q).is_identity() {
            order /= q;
        }
    }
    Ok(order)
}
