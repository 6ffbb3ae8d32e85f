//! Prime-field arithmetic and exact lifting back to the rationals.
//!
//! Large literal sums (hundreds of thousands of terms with distinct
//! denominators) are accumulated modulo several word-sized primes and then
//! recovered exactly by Chinese remaindering plus rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Primes just below powers of two.
pub const PRIMES: [u64; 7] = [
    (1 << 61) - 1,
    (1 << 62) - 57,
    (1 << 60) - 93,
    (1 << 59) - 55,
    (1 << 58) - 27,
    (1 << 57) - 13,
    (1 << 63) - 25,
];

/// The field of integers modulo a prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    p: u64,
}

impl Zp {
    pub fn new(p: u64) -> Zp {
        Zp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    /// Image of a rational; `None` if the denominator vanishes mod `p`.
    pub fn from_rational(&self, v: &Rational) -> Option<u64> {
        let d = self.from_bigint(v.denom());
        self.inv(d).map(|di| self.mul(self.from_bigint(v.numer()), di))
    }
}

/// Combines residues `r_i mod p_i` into one residue modulo `Π p_i`.
pub fn crt(residues: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for &(r, p) in residues {
        let pb = BigInt::from(p);
        let field = Zp::new(p);
        let current = field.from_bigint(&acc);
        let m_inv = field
            .inv(field.from_bigint(&modulus))
            .expect("distinct primes are coprime");
        let t = field.mul(field.sub(r, current), m_inv);
        acc += &modulus * BigInt::from(t);
        modulus *= pb;
    }
    (acc, modulus)
}

/// Smallest-height rational congruent to `r` modulo `m`, with numerator
/// and denominator both below `sqrt(m/2)`.
pub fn rational_reconstruction(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let sign = if t1.sign() == Sign::Minus { -1 } else { 1 };
    let num = r1 * BigInt::from(sign);
    let den = t1.abs();
    if !num.gcd(&den).is_one() {
        return None;
    }
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn is_prime(n: u64) -> bool {
        let f = Zp::new(n);
        let d = (n - 1) >> (n - 1).trailing_zeros();
        let s = (n - 1).trailing_zeros();
        [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| {
            let mut x = f.pow(a % n, d);
            if x == 1 || x == n - 1 {
                return true;
            }
            for _ in 1..s {
                x = f.mul(x, x);
                if x == n - 1 {
                    return true;
                }
            }
            false
        })
    }

    #[test]
    fn moduli_are_prime() {
        for p in PRIMES {
            assert!(is_prime(p), "{p}");
        }
        assert!(!is_prime(PRIMES[0] - 2));
    }

    #[test]
    fn lift_recovers_rationals() {
        for v in [ratio(-7, 3), ratio(123456789, 1000), ratio(0, 1), ratio(-1, 1)] {
            let residues: Vec<(u64, u64)> = PRIMES[..2]
                .iter()
                .map(|&p| (Zp::new(p).from_rational(&v).unwrap(), p))
                .collect();
            let (r, m) = crt(&residues);
            assert_eq!(rational_reconstruction(&r, &m), Some(v));
        }
    }
}
