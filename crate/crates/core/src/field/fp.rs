use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::factor::is_prime;
use super::FieldError;

/// A prime modulus `p > 3`, checked once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= 3 {
            return Err(FieldError::ModulusTooSmall(p));
        }
        if !is_prime(p as u128) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    /// Skips the primality check; only for moduli taken from an existing `Prime`.
    pub(crate) fn unchecked(p: u64) -> Self {
        Prime(p)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn elem(self, v: i64) -> Fp {
        let p = self.0 as i128;
        Fp {
            value: (v as i128).rem_euclid(p) as u64,
            modulus: self.0,
        }
    }

    pub fn elem_u64(self, v: u64) -> Fp {
        Fp {
            value: v % self.0,
            modulus: self.0,
        }
    }

    pub fn zero(self) -> Fp {
        self.elem_u64(0)
    }

    pub fn one(self) -> Fp {
        self.elem_u64(1)
    }

    /// Smallest positive quadratic non-residue.
    pub fn least_non_residue(self) -> Fp {
        (2..self.0)
            .map(|v| self.elem_u64(v))
            .find(|x| x.legendre() == -1)
            .expect("every odd prime has a non-residue")
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// An element of `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub(crate) fn with(self, value: u64) -> Fp {
        Fp {
            value,
            modulus: self.modulus,
        }
    }

    pub fn pow(self, exp: u128) -> Fp {
        self.with(pow_mod(self.value, exp, self.modulus))
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self) -> Option<Fp> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus as u128 - 2))
        }
    }

    /// Legendre symbol via Euler's criterion.
    pub fn legendre(self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let e = self.pow((self.modulus as u128 - 1) / 2);
        if e.value == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli–Shanks. Returns the root in `[0, p/2]`, or `None` for a non-residue.
    pub fn sqrt(self) -> Option<Fp> {
        let p = self.modulus;
        match self.legendre() {
            0 => return Some(self.with(0)),
            -1 => return None,
            _ => {}
        }
        let root = if p % 4 == 3 {
            pow_mod(self.value, (p as u128 + 1) / 4, p)
        } else {
            let mut q = p - 1;
            let mut s = 0u32;
            while q.is_multiple_of(2) {
                q /= 2;
                s += 1;
            }
            let z = (2..p)
                .find(|&z| pow_mod(z, (p as u128 - 1) / 2, p) == p - 1)
                .expect("non-residue exists");
            let mut m = s;
            let mut c = pow_mod(z, q as u128, p);
            let mut t = pow_mod(self.value, q as u128, p);
            let mut r = pow_mod(self.value, (q as u128).div_ceil(2), p);
            while t != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = mul_mod(t2, t2, p);
                    i += 1;
                }
                let b = pow_mod(c, 1u128 << (m - i - 1), p);
                m = i;
                c = mul_mod(b, b, p);
                t = mul_mod(t, c, p);
                r = mul_mod(r, b, p);
            }
            r
        };
        Some(self.with(root.min(p - root)))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with(add_mod(self.value, rhs.value, self.modulus))
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with(sub_mod(self.value, rhs.value, self.modulus))
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with(mul_mod(self.value, rhs.value, self.modulus))
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        self.with(sub_mod(0, self.value, self.modulus))
    }
}

/// Canonical square roots of every residue mod `p`, for bulk enumeration.
#[derive(Debug, Clone)]
pub struct SqrtTable {
    roots: Vec<u32>,
}

const NO_ROOT: u32 = u32::MAX;

impl SqrtTable {
    pub fn new(p: Prime) -> Self {
        let p = p.get();
        assert!(p < u32::MAX as u64, "sqrt table limited to 32-bit moduli");
        let mut roots = vec![NO_ROOT; p as usize];
        for r in 0..=p / 2 {
            roots[mul_mod(r, r, p) as usize] = r as u32;
        }
        SqrtTable { roots }
    }

    pub fn sqrt(&self, v: u64) -> Option<u64> {
        match self.roots[v as usize] {
            NO_ROOT => None,
            r => Some(r as u64),
        }
    }
}
