//! Modular arithmetic over `Z/m` for a runtime modulus `m`.
//!
//! Everything downstream (canonical forms, module presentations, simplicial
//! machinery) reduces to arithmetic in this module.  The modulus is kept
//! small enough (`m <= 2^31`) that sums of products never overflow `u128`
//! and extended-gcd arithmetic fits comfortably in `i128`.

pub mod howell;
pub mod matrix;

use crate::{Error, Result};

/// Largest supported modulus.  Keeping `m` within 31 bits lets matrix
/// products accumulate in `u128` without intermediate reductions.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Greatest common divisor of two `u64` values, with `gcd(0, 0) = 0`.
pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g` and `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Modular inverse of `a` modulo `n` (`n >= 1`), if it exists.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd((a % n) as i128, n as i128);
    if g != 1 {
        None
    } else {
        Some((x.rem_euclid(n as i128)) as u64)
    }
}

/// A runtime modulus with its cached prime factorization.
///
/// The factorization powers the unit-lift routine (`unit_to_canonical`),
/// which in turn makes canonical row reduction possible over a ring with
/// zero divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    m: u64,
    /// `(p, k, p^k)` for each prime `p` dividing `m`, ascending in `p`.
    prime_powers: Vec<(u64, u32, u64)>,
}

impl Modulus {
    /// Validate and factor a modulus.  Requires `2 <= m <= 2^31`.
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModule(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        if m > MAX_MODULUS {
            return Err(Error::InvalidModule(format!(
                "modulus {m} exceeds the supported maximum {MAX_MODULUS}"
            )));
        }
        let mut prime_powers = Vec::new();
        let mut n = m;
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut k = 0u32;
                let mut q = 1u64;
                while n % p == 0 {
                    n /= p;
                    k += 1;
                    q *= p;
                }
                prime_powers.push((p, k, q));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            prime_powers.push((n, 1, n));
        }
        Ok(Modulus { m, prime_powers })
    }

    /// The modulus value.
    pub fn get(&self) -> u64 {
        self.m
    }

    /// `(p, k, p^k)` triples for the primes dividing the modulus.
    pub fn prime_powers(&self) -> &[(u64, u32, u64)] {
        &self.prime_powers
    }

    /// Reduce an arbitrary value into `[0, m)`.
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.m
    }

    /// Reduce a signed value into `[0, m)`.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        let m = self.m as i128;
        (((v % m) + m) % m) as u64
    }

    /// `a + b` in `Z/m`.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a % self.m + b % self.m) % self.m
    }

    /// `a - b` in `Z/m`.
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a % self.m + self.m - b % self.m) % self.m
    }

    /// `-a` in `Z/m`.
    pub fn neg(&self, a: u64) -> u64 {
        (self.m - a % self.m) % self.m
    }

    /// `a * b` in `Z/m`.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    /// Whether `e` is a unit of `Z/m`.
    pub fn is_unit(&self, e: u64) -> bool {
        gcd_u64(e % self.m, self.m) == 1
    }

    /// The canonical generator of the ideal `(e)` in `Z/m`: the divisor
    /// `gcd(e, m)` of `m`.  For `e = 0` this returns `m` itself.
    pub fn canonical_divisor(&self, e: u64) -> u64 {
        let e = e % self.m;
        if e == 0 {
            self.m
        } else {
            gcd_u64(e, self.m)
        }
    }

    /// Additive order of `e` in `Z/m`: `m / gcd(e, m)`.
    pub fn annihilator_of(&self, e: u64) -> u64 {
        self.m / self.canonical_divisor(e)
    }

    /// Find `(d, u)` with `d = gcd(e, m)` (or `m` when `e = 0`), `u` a unit
    /// of `Z/m`, and `u * e = d` in `Z/m`.
    ///
    /// The unit `u` is assembled by CRT: it must invert `e / d` modulo
    /// `m / d`, and it is nudged to `1` modulo every prime of `m` that does
    /// not divide `m / d` so that it stays a unit globally.
    pub fn unit_to_canonical(&self, e: u64) -> (u64, u64) {
        let e = e % self.m;
        if e == 0 {
            return (self.m, 1);
        }
        let d = gcd_u64(e, self.m);
        let e1 = e / d;
        let n = self.m / d;
        let w = inv_mod(e1 % n, n).expect("e/d is a unit modulo m/d");
        if n == self.m {
            debug_assert_eq!(d, 1);
            return (d, w);
        }
        // CRT for the shift s: u = w + s*n must be nonzero mod every prime
        // p | m with p not dividing n.
        let mut s: u64 = 0;
        let mut s_mod: u64 = 1;
        for &(p, _, _) in &self.prime_powers {
            if n % p == 0 {
                continue;
            }
            let n_inv = inv_mod(n % p, p).expect("n is a unit modulo p");
            let w_mod = w % p;
            let target = ((1 + p - w_mod) % p) as u128 * n_inv as u128 % p as u128;
            let target = target as u64;
            // Merge s = s (mod s_mod) with s = target (mod p).
            let diff = (target as i128 - s as i128).rem_euclid(p as i128) as u64;
            let inc = (inv_mod(s_mod % p, p).expect("moduli are coprime") as u128 * diff as u128
                % p as u128) as u64;
            s += s_mod * inc;
            s_mod *= p;
        }
        let u = (w as u128 + s as u128 * n as u128) as u64 % self.m;
        debug_assert!(self.is_unit(u), "lifted multiplier must be a unit");
        debug_assert_eq!(self.mul(u, e), d % self.m);
        (d, u)
    }

    /// Inverse of a unit `e` in `Z/m`.
    pub fn inv(&self, e: u64) -> Option<u64> {
        inv_mod(e % self.m, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_moduli() {
        let m = Modulus::new(12).unwrap();
        assert_eq!(m.prime_powers(), &[(2, 2, 4), (3, 1, 3)]);
        let m = Modulus::new(2).unwrap();
        assert_eq!(m.prime_powers(), &[(2, 1, 2)]);
        let m = Modulus::new(49).unwrap();
        assert_eq!(m.prime_powers(), &[(7, 2, 49)]);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(1).is_err());
        assert!(Modulus::new(MAX_MODULUS + 1).is_err());
    }

    #[test]
    fn ext_gcd_is_bezout() {
        for a in -30i128..30 {
            for b in -30i128..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
                assert_eq!(g, gcd_u64(a.unsigned_abs() as u64, b.unsigned_abs() as u64) as i128);
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        for n in 2u64..60 {
            for a in 0..n {
                match inv_mod(a, n) {
                    Some(x) => assert_eq!(a * x % n, 1),
                    None => assert_ne!(gcd_u64(a, n), 1),
                }
            }
        }
    }

    #[test]
    fn unit_lift_is_exhaustive_on_small_moduli() {
        for m in [2u64, 3, 4, 6, 8, 9, 12, 16, 24, 36, 60, 360] {
            let md = Modulus::new(m).unwrap();
            for e in 0..m {
                let (d, u) = md.unit_to_canonical(e);
                assert_eq!(gcd_u64(u, m), 1, "u must be a unit (m={m}, e={e})");
                assert_eq!(u as u128 * e as u128 % m as u128, (d % m) as u128);
                if e == 0 {
                    assert_eq!(d, m);
                } else {
                    assert_eq!(d, gcd_u64(e, m));
                }
            }
        }
    }

    #[test]
    fn annihilator_matches_order() {
        let md = Modulus::new(12).unwrap();
        for e in 0..12 {
            let ord = md.annihilator_of(e);
            assert_eq!(md.mul(ord, e), 0);
            for k in 1..ord {
                assert_ne!(md.mul(k, e), 0, "order of {e} must be exactly {ord}");
            }
        }
    }
}
