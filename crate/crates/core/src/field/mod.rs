//! Arithmetic over `F_p` and `F_p[T]/(T^2 - delta)`, plus the integer
//! number theory (primality, factorization, multiplicative orders) the rest
//! of the crate leans on.

mod factor;
mod fp;
mod fp2;
mod order;

pub use factor::{factorize, is_prime, phi, tau, Factorization};
pub use fp::{Fp, Prime, SqrtTable};
pub use fp2::Fp2;
pub use order::{mult_order, MulGroup};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small (need p > 3)")]
    ModulusTooSmall(u64),
    #[error("operands live in different fields ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("{0} is a quadratic residue; an extension needs a non-residue")]
    ResidueDelta(u64),
    #[error("cannot factor zero")]
    FactorZero,
    #[error("inconsistent input: element raised to the group order is not the identity")]
    InconsistentInput,
}
