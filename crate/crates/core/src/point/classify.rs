use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::field::{factorize, mult_order, Factorization, Fp, Fp2, Prime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoordKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
}

impl fmt::Display for CoordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordKind::Parabolic => "parabolic",
            CoordKind::Hyperbolic => "hyperbolic",
            CoordKind::Elliptic => "elliptic",
        })
    }
}

/// Classification of a single coordinate value `x`: the kind is read off
/// `(3x)^2 - 4`, the order is that of `A_x = [[0, 1], [-1, 3x]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordClass {
    pub kind: CoordKind,
    pub discriminant: u64,
    pub order: u64,
}

/// Per-prime context: the modulus, the constants `+-2/3`, the factored group
/// orders `p - 1` and `p + 1`, and a memo of coordinate classes.
pub struct Surface {
    prime: Prime,
    two_thirds: Fp,
    p_minus_1: Factorization,
    p_plus_1: Factorization,
    memo: RwLock<HashMap<u64, CoordClass>>,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface")
            .field("p", &self.prime.get())
            .finish()
    }
}

impl Surface {
    pub fn new(prime: Prime) -> Self {
        let p = prime.get() as u128;
        let two_thirds = prime.elem(2) * prime.elem(3).inv().expect("p > 3");
        Surface {
            prime,
            two_thirds,
            p_minus_1: factorize(p - 1).expect("p > 3"),
            p_plus_1: factorize(p + 1).expect("p > 3"),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn p(&self) -> u64 {
        self.prime.get()
    }

    pub fn two_thirds(&self) -> Fp {
        self.two_thirds
    }

    pub fn neg_two_thirds(&self) -> Fp {
        -self.two_thirds
    }

    /// Factorization of `p^2 - 1`.
    pub fn p_squared_minus_1(&self) -> Factorization {
        self.p_minus_1.merge(&self.p_plus_1)
    }

    /// Orders that make a coordinate maximal: `p - 1`, `p + 1`, `2p`.
    pub fn is_maximal_order(&self, order: u64) -> bool {
        let p = self.p();
        order == p - 1 || order == p + 1 || order == 2 * p
    }

    pub fn classify(&self, x: u64) -> CoordClass {
        let x = x % self.p();
        if let Some(c) = self.memo.read().expect("memo poisoned").get(&x) {
            return *c;
        }
        let c = self.compute_class(x);
        self.memo.write().expect("memo poisoned").insert(x, c);
        c
    }

    /// Classes of every residue `0..p`, indexed by value. Fills the memo.
    pub fn class_table(&self) -> Vec<CoordClass> {
        let table: Vec<CoordClass> = (0..self.p())
            .into_par_iter()
            .map(|x| self.compute_class(x))
            .collect();
        let mut memo = self.memo.write().expect("memo poisoned");
        for (x, c) in table.iter().enumerate() {
            memo.insert(x as u64, *c);
        }
        table
    }

    fn compute_class(&self, x: u64) -> CoordClass {
        let prime = self.prime;
        let p = prime.get();
        let trace = prime.elem_u64(x) * prime.elem(3);
        let disc = trace * trace - prime.elem(4);
        let half = prime.elem(2).inv().expect("p odd");
        match disc.legendre() {
            0 => {
                let order = if prime.elem_u64(x) == self.two_thirds {
                    p
                } else {
                    2 * p
                };
                CoordClass {
                    kind: CoordKind::Parabolic,
                    discriminant: 0,
                    order,
                }
            }
            1 => {
                let root = disc.sqrt().expect("residue");
                let eps = (trace + root) * half;
                let order =
                    mult_order(&eps, (p - 1) as u128, &self.p_minus_1).expect("eps lies in F_p^x");
                CoordClass {
                    kind: CoordKind::Hyperbolic,
                    discriminant: disc.value(),
                    order: order as u64,
                }
            }
            _ => {
                // eps = (3x + T)/2 in F_p[T]/(T^2 - disc); its norm is 1.
                let eps = Fp2::new(trace * half, half, disc).expect("non-residue");
                let order = mult_order(&eps, (p + 1) as u128, &self.p_plus_1)
                    .expect("norm-one elements have order dividing p + 1");
                CoordClass {
                    kind: CoordKind::Elliptic,
                    discriminant: disc.value(),
                    order: order as u64,
                }
            }
        }
    }
}
