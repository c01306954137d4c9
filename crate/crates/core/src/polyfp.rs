//! Dense univariate polynomials over the prime field `F_q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::intmath::{mod_inverse_u64, mul_mod, sub_mod};

/// Coefficients low degree first, trailing zeros trimmed; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFp {
    coeffs: Vec<u64>,
    q: u64,
}

impl PolyFp {
    pub fn new(coeffs: Vec<u64>, q: u64) -> Self {
        assert!(q >= 2, "field size {q}");
        let mut p = PolyFp {
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
            q,
        };
        p.trim();
        p
    }

    pub fn from_signed(coeffs: &[BigInt], q: u64) -> Self {
        let modulus = BigInt::from(q);
        let reduced = coeffs
            .iter()
            .map(|c| c.mod_floor(&modulus).to_u64().expect("reduced below q"))
            .collect();
        Self::new(reduced, q)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.q) + c) % self.q)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = mod_inverse_u64(lead, self.q).expect("q is prime");
                PolyFp {
                    coeffs: self
                        .coeffs
                        .iter()
                        .map(|&c| mul_mod(c, inv, self.q))
                        .collect(),
                    q: self.q,
                }
            }
        }
    }

    pub fn mul(&self, other: &PolyFp) -> PolyFp {
        assert_eq!(self.q, other.q, "mixed fields");
        if self.is_zero() || other.is_zero() {
            return PolyFp::new(Vec::new(), self.q);
        }
        let q = self.q;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, q)) % q;
            }
        }
        PolyFp::new(out, q)
    }

    pub fn sub(&self, other: &PolyFp) -> PolyFp {
        assert_eq!(self.q, other.q, "mixed fields");
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &PolyFp, i: usize| p.coeffs.get(i).copied().unwrap_or(0);
        PolyFp::new(
            (0..len)
                .map(|i| sub_mod(at(self, i), at(other, i), self.q))
                .collect(),
            self.q,
        )
    }

    /// Quotient and remainder by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &PolyFp) -> (PolyFp, PolyFp) {
        assert_eq!(self.q, divisor.q, "mixed fields");
        let d = divisor.degree().expect("division by zero polynomial");
        let q = self.q;
        let lead_inv = mod_inverse_u64(divisor.coeffs[d], q).expect("q is prime");
        let mut r = self.coeffs.clone();
        let mut quot = vec![0u64; r.len().saturating_sub(d)];
        while r.len() > d {
            let lead = mul_mod(*r.last().expect("nonempty"), lead_inv, q);
            let shift = r.len() - 1 - d;
            quot[shift] = lead;
            if lead != 0 {
                for (i, &c) in divisor.coeffs.iter().enumerate() {
                    r[shift + i] = sub_mod(r[shift + i], mul_mod(lead, c, q), q);
                }
            }
            r.pop();
        }
        (PolyFp::new(quot, q), PolyFp::new(r, q))
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &PolyFp) -> PolyFp {
        let mut result = PolyFp::new(vec![1], self.q).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        result
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, divisor: &PolyFp) -> PolyFp {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor by the Euclidean algorithm; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &PolyFp) -> PolyFp {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True when the gcd is a nonzero constant.
    pub fn is_coprime_to(&self, other: &PolyFp) -> bool {
        self.gcd(other).degree() == Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64], q: u64) -> PolyFp {
        let big: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        PolyFp::from_signed(&big, q)
    }

    #[test]
    fn gcd_of_coprime_pair_over_f3() {
        // x^2 - x - 1 and x^2 + x
        let g = poly(&[-1, -1, 1], 3);
        let h = poly(&[0, 1, 1], 3);
        assert_eq!(g.gcd(&h), poly(&[1], 3));
        assert!(g.is_coprime_to(&h));
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (x - 2)(x + 1) and (x - 2)(x^2 + 1) over F_7
        let a = poly(&[-2, -1, 1], 7);
        let b = poly(&[-2, 1, -2, 1], 7);
        assert_eq!(a.gcd(&b), poly(&[-2, 1], 7));
        assert!(!a.is_coprime_to(&b));
    }

    #[test]
    fn zero_handling() {
        let zero = PolyFp::new(vec![0, 0, 5], 5);
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), None);
        let a = poly(&[2, 4], 5);
        assert_eq!(a.gcd(&zero), poly(&[3, 1], 5));
        assert!(!zero.is_coprime_to(&zero));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = poly(&[3, -1, 4, 1, -5, 9, 2], 13);
        let b = poly(&[2, 6, -5, 3], 13);
        let (quot, rem) = a.div_rem(&b);
        assert!(rem.degree() < b.degree());
        assert_eq!(quot.mul(&b).sub(&a.sub(&rem)), PolyFp::new(vec![], 13));
    }

    #[test]
    fn frobenius_power_of_x() {
        // x^(q^2) ≡ x modulo an irreducible quadratic over F_q.
        let f = poly(&[2, 0, 1], 5); // x^2 + 2, irreducible mod 5
        let x = poly(&[0, 1], 5);
        assert_eq!(x.pow_mod(25, &f), x);
        assert_ne!(x.pow_mod(5, &f), x);
    }

    #[test]
    fn rem_agrees_with_evaluation_at_roots() {
        // x^5 + 3x + 1 mod (x - 2) over F_11 is its value at 2.
        let f = poly(&[1, 3, 0, 0, 0, 1], 11);
        let r = f.rem(&poly(&[-2, 1], 11));
        assert_eq!(r.coeffs(), &[f.eval(2)]);
    }
}
