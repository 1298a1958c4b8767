//! Prime fields, prime search, and Reed-Solomon encoding.
//!
//! Everything here is deterministic: primality is decided by Miller-Rabin
//! with a witness set known to be exact for all 64-bit integers, so no part
//! of the library depends on probabilistic behavior.

use crate::{Error, Result};

/// Witness set that makes Miller-Rabin deterministic for every `u64`.
const MILLER_RABIN_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in MILLER_RABIN_WITNESSES.iter() {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `p >= n`.
pub fn smallest_prime_geq(n: u64) -> Result<u64> {
    if n < 2 {
        return Ok(2);
    }
    let mut candidate = n;
    loop {
        if is_prime_u64(candidate) {
            return Ok(candidate);
        }
        candidate = candidate.checked_add(1).ok_or_else(|| {
            Error::InvalidParameter(format!("prime search starting at {n} overflowed u64"))
        })?;
    }
}

/// Arithmetic modulo a verified prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field, verifying primality of the modulus.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.p)
    }

    /// Multiplicative inverse via Fermat; zero has none.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::InvalidParameter(
                "0 has no multiplicative inverse".to_owned(),
            ));
        }
        Ok(self.pow(a % self.p, self.p - 2))
    }
}

/// Reed-Solomon code over a prime field: messages are polynomial coefficient
/// vectors of length `k`, codewords their evaluations at every field element,
/// so the block length equals the alphabet size `q`. Any two distinct
/// codewords agree in at most `k - 1` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RsCode {
    field: PrimeField,
    message_len: u32,
}

impl RsCode {
    pub fn new(q: u64, message_len: u32) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if message_len == 0 || message_len as u64 > q {
            return Err(Error::InvalidParameter(format!(
                "message length {message_len} must be in 1..={q}"
            )));
        }
        Ok(RsCode { field, message_len })
    }

    pub fn alphabet(&self) -> u64 {
        self.field.modulus()
    }

    pub fn message_len(&self) -> u32 {
        self.message_len
    }

    /// Block length: one coordinate per field element.
    pub fn block_len(&self) -> u64 {
        self.field.modulus()
    }

    /// Horner evaluation of the message polynomial at field element `point`.
    pub fn eval(&self, message: &[u64], point: u64) -> Result<u64> {
        if message.len() != self.message_len as usize {
            return Err(Error::InvalidParameter(format!(
                "message has {} coefficients, expected {}",
                message.len(),
                self.message_len
            )));
        }
        let mut acc = 0u64;
        for &c in message.iter().rev() {
            debug_assert!(c < self.field.modulus());
            acc = self.field.add(self.field.mul(acc, point), c);
        }
        Ok(acc)
    }

    /// Full codeword: evaluations at 0, 1, ..., q-1 in order.
    pub fn encode(&self, message: &[u64]) -> Result<Vec<u64>> {
        (0..self.field.modulus())
            .map(|point| self.eval(message, point))
            .collect()
    }
}

/// Base-`q` digits of `x`, least-significant first, exactly `k` of them.
///
/// This is the canonical labeling that maps item identifiers to code
/// messages; it is a bijection from `[0, q^k)`.
pub fn index_to_message(x: u64, q: u64, k: u32) -> Result<Vec<u64>> {
    let cap = q.checked_pow(k);
    if let Some(cap) = cap {
        if x >= cap {
            return Err(Error::InvalidParameter(format!(
                "index {x} out of range for {k} base-{q} digits"
            )));
        }
    }
    let mut digits = Vec::with_capacity(k as usize);
    let mut rest = x;
    for _ in 0..k {
        digits.push(rest % q);
        rest /= q;
    }
    Ok(digits)
}

/// Inverse of [`index_to_message`].
pub fn message_to_index(digits: &[u64], q: u64) -> u64 {
    let mut acc = 0u64;
    for &d in digits.iter().rev() {
        acc = acc * q + d;
    }
    acc
}
