//! Finite fields `GF(p^k)` as precomputed addition and multiplication tables.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! polynomial coefficients (lowest degree first). `0` is zero and `1` is one.

use crate::error::{Error, Result};

/// Monic irreducible polynomials, coefficients lowest degree first.
const IRREDUCIBLES: &[(usize, u32, &[u8])] = &[
    (4, 2, &[1, 1, 1]),
    (8, 2, &[1, 1, 0, 1]),
    (16, 2, &[1, 1, 0, 0, 1]),
    (32, 2, &[1, 0, 1, 0, 0, 1]),
    (64, 2, &[1, 1, 0, 0, 0, 0, 1]),
    (128, 2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (9, 3, &[1, 0, 1]),
    (27, 3, &[1, 2, 0, 1]),
    (81, 3, &[2, 1, 0, 0, 1]),
    (25, 5, &[2, 0, 1]),
    (125, 5, &[1, 1, 0, 1]),
    (49, 7, &[1, 0, 1]),
    (121, 11, &[1, 0, 1]),
    (169, 13, &[2, 0, 1]),
];

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// `Some((p, k))` when `q = p^k` for a prime `p`.
pub fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, k))
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    q: usize,
    p: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl GaloisField {
    /// Field of order `q`. Prime orders use residues; prime powers use the
    /// shipped irreducible polynomial for that order.
    pub fn new(q: usize) -> Result<Self> {
        let unsupported = |reason: &str| Error::UnsupportedOrder {
            d: q,
            reason: reason.to_string(),
        };
        if q > 255 {
            return Err(unsupported("field orders above 255 are not tabulated"));
        }
        let (p, k) = prime_power(q).ok_or_else(|| unsupported("not a prime power"))?;
        let modulus: Vec<u8> = if k == 1 {
            vec![0, 1]
        } else {
            IRREDUCIBLES
                .iter()
                .find(|(order, _, _)| *order == q)
                .map(|(_, _, poly)| poly.to_vec())
                .ok_or_else(|| unsupported("no irreducible polynomial shipped for this order"))?
        };
        let k = k as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let r = x % p;
                    x /= p;
                    r
                })
                .collect()
        };
        let encode = |ds: &[usize]| ds.iter().rev().fold(0usize, |acc, &c| acc * p + c);

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u8;

                // schoolbook product then reduction by the monic modulus
                let mut prod = vec![0usize; 2 * k];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    for (t, &m) in modulus.iter().enumerate() {
                        let idx = deg - k + t;
                        prod[idx] = (prod[idx] + p * p - (c * m as usize) % p) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..k]) as u8;
            }
        }
        let field = GaloisField { q, p, add, mul };
        if !field.has_no_zero_divisors() {
            return Err(unsupported("shipped modulus is reducible"));
        }
        Ok(field)
    }

    fn has_no_zero_divisors(&self) -> bool {
        (1..self.q).all(|a| (1..self.q).all(|b| self.mul(a, b) != 0))
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    fn assert_field_axioms(f: &GaloisField) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
            // additive and multiplicative inverses
            assert!((0..q).any(|b| f.add(a, b) == 0));
            if a != 0 {
                assert_eq!((0..q).filter(|&b| f.mul(a, b) == 1).count(), 1);
            }
            for b in 0..q {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25] {
            assert_field_axioms(&GaloisField::new(q).unwrap());
        }
    }

    #[test]
    fn every_shipped_modulus_is_irreducible() {
        for &(q, _, _) in IRREDUCIBLES {
            let f = GaloisField::new(q).unwrap();
            assert!(f.has_no_zero_divisors(), "GF({q})");
        }
    }

    #[test]
    fn gf4_table() {
        // elements 0, 1, x, x+1 with x^2 = x + 1
        let f = GaloisField::new(4).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.mul(3, 3), 2);
        assert_eq!(f.add(2, 3), 1);
    }

    #[test]
    fn unsupported_orders() {
        assert!(GaloisField::new(6).is_err());
        assert!(GaloisField::new(243).is_err());
    }
}
