use std::fmt;

use super::FieldError;

const TRIAL_LIMIT: u64 = 1_000_000;
// Miller-Rabin with these bases is deterministic below 3.3e24; above that it
// is a strong probable-prime test.
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Prime factorization as sorted `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u128, u32)] {
        &self.pairs
    }

    pub fn value(&self) -> u128 {
        self.pairs.iter().fold(1u128, |acc, &(q, e)| acc * q.pow(e))
    }

    /// Number of positive divisors.
    pub fn tau(&self) -> u128 {
        self.pairs.iter().map(|&(_, e)| e as u128 + 1).product()
    }

    /// Euler's totient.
    pub fn phi(&self) -> u128 {
        self.pairs
            .iter()
            .map(|&(q, e)| (q - 1) * q.pow(e - 1))
            .product()
    }

    /// Combines two factorizations of coprime-or-not integers into that of
    /// their product.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut pairs = self.pairs.clone();
        for &(q, e) in &other.pairs {
            match pairs.iter_mut().find(|(r, _)| *r == q) {
                Some(slot) => slot.1 += e,
                None => pairs.push((q, e)),
            }
        }
        pairs.sort_unstable();
        Factorization { pairs }
    }

    fn push(&mut self, q: u128) {
        match self.pairs.iter_mut().find(|(r, _)| *r == q) {
            Some(slot) => slot.1 += 1,
            None => self.pairs.push((q, 1)),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(q, e)| format!("{q}:{e}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let (Ok(a64), Ok(b64), true) = (u64::try_from(a), u64::try_from(b), m <= u64::MAX as u128) {
        return (a64 as u128 * b64 as u128) % m;
    }
    // Double-and-add; only hit for moduli above 2^64.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod_u128(acc, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pollard rho with Brent's cycle detection. `n` must be an odd composite.
fn brent_rho(n: u128) -> u128 {
    // Fixed sequence of (seed, increment) pairs keeps results reproducible.
    for c in 1u128.. {
        let f = |x: u128| add_mod_u128(mul_mod_u128(x, x, n), c % n, n);
        let mut y = 2u128 + c;
        let m = 128u128;
        let mut g = 1u128;
        let mut r = 1u128;
        let mut q = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u128, out: &mut Factorization) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = brent_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Complete factorization: trial division up to 10^6, then Brent–Pollard rho.
pub fn factorize(mut n: u128) -> Result<Factorization, FieldError> {
    if n == 0 {
        return Err(FieldError::FactorZero);
    }
    let mut out = Factorization::default();
    let mut q = 2u64;
    while q <= TRIAL_LIMIT && (q as u128) * (q as u128) <= n {
        while n.is_multiple_of(q as u128) {
            out.push(q as u128);
            n /= q as u128;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    split_into(n, &mut out);
    out.pairs.sort_unstable();
    Ok(out)
}

pub fn tau(n: u128) -> Result<u128, FieldError> {
    factorize(n).map(|f| f.tau())
}

pub fn phi(n: u128) -> Result<u128, FieldError> {
    factorize(n).map(|f| f.phi())
}
