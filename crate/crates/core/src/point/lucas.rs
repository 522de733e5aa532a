//! Lucas sequences `u_n(P, 1)`: `u_0 = 0`, `u_1 = 1`, `u_{n+2} = P u_{n+1} - u_n`.
//!
//! The rotation matrix `A_x = [[0, 1], [-1, 3x]]` satisfies
//! `A_x^n = [[-u_{n-1}, u_n], [-u_n, u_{n+1}]]` with `P = 3x`, for every
//! integer `n` (negative powers use `u_{-m} = -u_m`).

use crate::field::Fp;

/// `(u_m, u_{m+1})` by fast doubling.
fn lucas_pair(trace: Fp, m: u64) -> (Fp, Fp) {
    let zero = trace.with(0);
    let one = trace.with(1);
    let two = trace.with(2 % trace.modulus());
    let mut uk = zero;
    let mut uk1 = one;
    for bit in (0..64 - m.leading_zeros()).rev() {
        // u_{2k} = u_k (2 u_{k+1} - P u_k), u_{2k+1} = u_{k+1}^2 - u_k^2
        let u2k = uk * (two * uk1 - trace * uk);
        let u2k1 = uk1 * uk1 - uk * uk;
        if (m >> bit) & 1 == 1 {
            uk = u2k1;
            uk1 = trace * u2k1 - u2k;
        } else {
            uk = u2k;
            uk1 = u2k1;
        }
    }
    (uk, uk1)
}

/// `(u_{n-1}, u_n, u_{n+1})` for any signed `n`.
pub fn lucas_triple(trace: Fp, n: i64) -> (Fp, Fp, Fp) {
    if n >= 1 {
        let (prev, cur) = lucas_pair(trace, (n - 1) as u64);
        (prev, cur, trace * cur - prev)
    } else {
        let m = n.unsigned_abs();
        let (um, um1) = lucas_pair(trace, m);
        let um_prev = trace * um - um1;
        (-um1, -um, -um_prev)
    }
}

/// Entries of `A_x^n` as `[[a, b], [c, d]]`.
pub fn rotation_matrix_power(trace: Fp, n: i64) -> [[Fp; 2]; 2] {
    let (prev, cur, next) = lucas_triple(trace, n);
    [[-prev, cur], [-cur, next]]
}
