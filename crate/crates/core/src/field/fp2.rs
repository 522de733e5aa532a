use std::fmt;

use super::fp::{add_mod, mul_mod, sub_mod};
use super::{FieldError, Fp};

/// An element `a + b*T` of `F_p[T]/(T^2 - delta)` with `delta` a non-residue.
///
/// The extension is always built over an explicit `delta`, so two elements
/// only multiply when they share it.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    a: u64,
    b: u64,
    delta: u64,
    p: u64,
}

impl Fp2 {
    pub fn new(a: Fp, b: Fp, delta: Fp) -> Result<Self, FieldError> {
        let p = delta.modulus();
        for m in [a.modulus(), b.modulus()] {
            if m != p {
                return Err(FieldError::ModulusMismatch(m, p));
            }
        }
        if delta.legendre() != -1 {
            return Err(FieldError::ResidueDelta(delta.value()));
        }
        Ok(Fp2 {
            a: a.value(),
            b: b.value(),
            delta: delta.value(),
            p,
        })
    }

    pub fn real(&self) -> u64 {
        self.a
    }

    pub fn imag(&self) -> u64 {
        self.b
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn one_like(&self) -> Fp2 {
        Fp2 {
            a: 1,
            b: 0,
            ..*self
        }
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    pub fn mul(&self, rhs: &Fp2) -> Fp2 {
        debug_assert_eq!((self.p, self.delta), (rhs.p, rhs.delta));
        let p = self.p;
        let bb = mul_mod(mul_mod(self.b, rhs.b, p), self.delta, p);
        let a = add_mod(mul_mod(self.a, rhs.a, p), bb, p);
        let b = add_mod(mul_mod(self.a, rhs.b, p), mul_mod(self.b, rhs.a, p), p);
        Fp2 { a, b, ..*self }
    }

    pub fn pow(&self, mut exp: u128) -> Fp2 {
        let mut acc = self.one_like();
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// `N(a + bT) = a^2 - delta * b^2`.
    pub fn norm(&self) -> u64 {
        let p = self.p;
        sub_mod(
            mul_mod(self.a, self.a, p),
            mul_mod(self.delta, mul_mod(self.b, self.b, p), p),
            p,
        )
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*T (T^2 = {}, mod {})",
            self.a, self.b, self.delta, self.p
        )
    }
}
