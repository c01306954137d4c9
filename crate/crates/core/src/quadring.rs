//! Arithmetic in `R_m = (Z/mZ)[α]` with `α^2 = kα + 1`.
//!
//! `α` here is the class of `x` in `(Z/mZ)[x]/(x^2 - kx - 1)`, so it stands
//! for both roots at once; an element is zero only when both coordinates are.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmath::{add_mod, mul_mod, sub_mod};

/// `a + bα` in `R_m`. Coordinates and `k` are kept reduced into `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    pub a: u64,
    pub b: u64,
    pub k: u64,
    pub m: u64,
}

impl QuadElem {
    pub fn new(a: u64, b: u64, k: u64, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        Ok(QuadElem {
            a: a % m,
            b: b % m,
            k: k % m,
            m,
        })
    }

    /// Builds an element from signed coordinates.
    pub fn from_signed(a: i64, b: i64, k: u64, m: u64) -> Result<Self> {
        let reduce = |x: i64| x.rem_euclid(m as i64) as u64;
        if m < 2 || m > i64::MAX as u64 {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        Self::new(reduce(a), reduce(b), k, m)
    }

    pub fn alpha(k: u64, m: u64) -> Result<Self> {
        Self::new(0, 1, k, m)
    }

    pub fn one(k: u64, m: u64) -> Result<Self> {
        Self::new(1, 0, k, m)
    }

    pub fn scalar(c: u64, k: u64, m: u64) -> Result<Self> {
        Self::new(c, 0, k, m)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.k != other.k || self.m != other.m {
            return Err(Error::IncompatibleElements(
                self.k, self.m, other.k, other.m,
            ));
        }
        Ok(())
    }

    fn with(&self, a: u64, b: u64) -> Self {
        QuadElem { a, b, ..*self }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.with(
            add_mod(self.a, other.a, self.m),
            add_mod(self.b, other.b, self.m),
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.with(
            sub_mod(self.a, other.a, self.m),
            sub_mod(self.b, other.b, self.m),
        ))
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.m;
        self.with(mul_mod(self.a, c, self.m), mul_mod(self.b, c, self.m))
    }

    pub fn coords(&self) -> (u64, u64) {
        (self.a, self.b)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}α (mod {})", self.a, self.b, self.m)
    }
}

/// `(a1 + b1 α)(a2 + b2 α) = (a1 a2 + b1 b2) + (a1 b2 + a2 b1 + k b1 b2) α`.
pub fn qr_mul(x: &QuadElem, y: &QuadElem) -> Result<QuadElem> {
    x.same_ring(y)?;
    Ok(mul_unchecked(x, y))
}

fn mul_unchecked(x: &QuadElem, y: &QuadElem) -> QuadElem {
    let m = x.m;
    let bb = mul_mod(x.b, y.b, m);
    let a = add_mod(mul_mod(x.a, y.a, m), bb, m);
    let b = add_mod(
        add_mod(mul_mod(x.a, y.b, m), mul_mod(y.a, x.b, m), m),
        mul_mod(x.k, bb, m),
        m,
    );
    x.with(a, b)
}

pub fn qr_pow(x: &QuadElem, mut e: u64) -> QuadElem {
    let mut result = x.with(1, 0);
    let mut base = *x;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_unchecked(&result, &base);
        }
        base = mul_unchecked(&base, &base);
        e >>= 1;
    }
    result
}

/// Image under `α ↦ β = k - α`: `a + bα ↦ (a + bk) - bα`.
pub fn conjugate(x: &QuadElem) -> QuadElem {
    let m = x.m;
    x.with(add_mod(x.a, mul_mod(x.b, x.k, m), m), sub_mod(0, x.b, m))
}

/// Default search margin: the order of `α` never exceeds `6m`.
pub const ORDER_SEARCH_MARGIN: u64 = 2;

/// Multiplicative order of a unit by forward iteration, giving up after `cap` steps.
pub fn element_order(x: &QuadElem, cap: u64) -> Result<u64> {
    let mut power = *x;
    let mut t = 1u64;
    while !power.is_one() {
        if t >= cap {
            return Err(Error::OrderCapExceeded(cap));
        }
        power = mul_unchecked(&power, x);
        t += 1;
    }
    Ok(t)
}

fn default_cap(m: u64) -> u64 {
    m.saturating_mul(4 * ORDER_SEARCH_MARGIN)
}

/// Least `t >= 1` with `α^t = 1` in `R_m`. `α` is a unit because `α(α - k) = 1`.
pub fn ord_alpha(k: u64, m: u64) -> Result<u64> {
    element_order(&QuadElem::alpha(k, m)?, default_cap(m))
}

/// Order of the conjugate root `β = k - α`.
pub fn ord_beta(k: u64, m: u64) -> Result<u64> {
    element_order(&conjugate(&QuadElem::alpha(k, m)?), default_cap(m))
}

/// `x^(2p) - k x^p - 1` evaluated at `x` in its own ring.
pub fn eval_fp(x: &QuadElem, p: u64) -> QuadElem {
    let xp = qr_pow(x, p);
    let x2p = mul_unchecked(&xp, &xp);
    let one = x.with(1, 0);
    let kxp = xp.scale(x.k);
    x2p.try_sub(&kxp)
        .and_then(|v| v.try_sub(&one))
        .expect("same ring")
}

/// `F_p(α) = α^(2p) - kα^p - 1` in `R_{p^2}`.
pub fn eval_fp_alpha(k: u64, p: u64) -> Result<QuadElem> {
    let p2 = p
        .checked_mul(p)
        .ok_or_else(|| Error::InvalidArgument(format!("p = {p} too large: p^2 overflows")))?;
    Ok(eval_fp(&QuadElem::alpha(k, p2)?, p))
}

/// `F_p(β)` in `R_{p^2}`.
pub fn eval_fp_beta(k: u64, p: u64) -> Result<QuadElem> {
    let p2 = p
        .checked_mul(p)
        .ok_or_else(|| Error::InvalidArgument(format!("p = {p} too large: p^2 overflows")))?;
    Ok(eval_fp(&conjugate(&QuadElem::alpha(k, p2)?), p))
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: QuadElem) -> QuadElem {
        self.try_add(&rhs).expect("incompatible ring elements")
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: QuadElem) -> QuadElem {
        self.try_sub(&rhs).expect("incompatible ring elements")
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: QuadElem) -> QuadElem {
        qr_mul(&self, &rhs).expect("incompatible ring elements")
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        self.with(sub_mod(0, self.a, self.m), sub_mod(0, self.b, self.m))
    }
}
