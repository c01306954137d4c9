//! Exact integer primitives: modular powers, Jacobi symbols, primality,
//! factorization and binomial coefficients.
//!
//! Values that can outgrow a machine word are `BigInt`/`BigUint`. The hot
//! loops elsewhere in the crate run on `u64` residues, so a few `*_u64`
//! helpers with `u128` intermediates live here as well.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound used before switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

/// Default Pollard rho iteration budget for [`factorize`].
pub const DEFAULT_FACTOR_BUDGET: u64 = 10_000_000;

/// Miller-Rabin rounds for inputs beyond 64 bits.
const PROBABLE_PRIME_ROUNDS: usize = 40;

/// Bases that make Miller-Rabin deterministic for every `n < 2^64`.
const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `base^exp mod m` on machine words. `m` must be nonzero; `m = 1` gives 0.
pub fn mod_pow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// `base^exp mod m`, reduced into `[0, m)`. Negative bases are allowed.
pub fn mod_pow(base: &BigInt, exp: &BigUint, m: &BigUint) -> Result<BigUint> {
    if *m < BigUint::from(2u32) {
        return Err(Error::InvalidModulus(m.to_string()));
    }
    let modulus = BigInt::from(m.clone());
    let reduced = base.mod_floor(&modulus);
    let reduced = reduced.to_biguint().expect("mod_floor is nonnegative");
    Ok(reduced.modpow(exp, m))
}

/// Modular inverse of `a` mod `m` for `gcd(a, m) = 1`.
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i8> {
    if n.sign() != Sign::Plus || n.is_even() {
        return Err(Error::InvalidArgument(format!(
            "Jacobi symbol needs an odd positive denominator, got {n}"
        )));
    }
    let mut n = n.to_biguint().expect("positive");
    let mut a = a
        .mod_floor(&BigInt::from(n.clone()))
        .to_biguint()
        .expect("mod_floor is nonnegative");
    let mut sign = 1i8;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let n_mod_8 = (&n % 8u32).to_u32().expect("small");
            if twos % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            sign = -sign;
        }
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Proven prime (every input below 2^64 is decided exactly).
    Prime,
    /// Passed 40 strong probable-prime rounds; only reported above 2^64.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

fn strong_probable_prime_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = mod_pow_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    MR_BASES_U64
        .iter()
        .all(|&b| strong_probable_prime_u64(n, b))
}

fn strong_probable_prime_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Primality of an arbitrary nonnegative integer.
pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    for &p in small_primes().iter().take(200) {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    // Fixed seed keeps verdicts reproducible from run to run.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5753_5350_5249_4d45);
    let two = BigUint::from(2u32);
    let upper = n - 1u32;
    for _ in 0..PROBABLE_PRIME_ROUNDS {
        let base = rng.gen_biguint_range(&two, &upper);
        if !strong_probable_prime_big(n, &base) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

/// `n < 2` is never prime; negative inputs are composite by convention.
pub fn is_prime(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(u) => primality(&u).is_prime(),
        None => false,
    }
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        primes_up_to(TRIAL_DIVISION_LIMIT as u64)
            .into_iter()
            .map(|p| p as u32)
            .collect()
    })
}

/// Iteration budget for the Pollard rho stage of [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: DEFAULT_FACTOR_BUDGET,
        }
    }
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
    /// Set when some factor above 2^64 is only a probable prime.
    pub probabilistic: bool,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e <= 1)
    }

    fn push(&mut self, p: BigUint, e: u32) {
        match self.factors.binary_search_by(|(q, _)| q.cmp(&p)) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (p, e)),
        }
    }
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, drawing iterations from `remaining`.
fn pollard_brent(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let step = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let batch = BATCH.min(r - k);
                for _ in 0..batch {
                    if *remaining == 0 {
                        return None;
                    }
                    *remaining -= 1;
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
        }
        if g == *n {
            // Batched product collapsed; replay one step at a time.
            loop {
                if *remaining == 0 {
                    return None;
                }
                *remaining -= 1;
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    unreachable!()
}

/// Complete prime factorization of `n >= 1`.
///
/// Trial division by every prime below [`TRIAL_DIVISION_LIMIT`], then Brent's
/// rho on what is left. Running out of `budget` is reported as
/// [`Error::FactorizationIncomplete`], never as a partial answer.
pub fn factorize(n: &BigUint, budget: FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut out = Factorization::default();
    let mut rest = n.clone();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, rem) = rest.div_rem(&p_big);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if e > 0 {
            out.push(p_big, e);
        }
    }
    if rest.is_one() {
        return Ok(out);
    }
    let limit = BigUint::from(TRIAL_DIVISION_LIMIT);
    if rest < &limit * &limit {
        out.push(rest, 1);
        return Ok(out);
    }

    let mut remaining = budget.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        match primality(&m) {
            Primality::Prime => out.push(m, 1),
            Primality::ProbablePrime => {
                out.probabilistic = true;
                out.push(m, 1);
            }
            Primality::Composite => match pollard_brent(&m, &mut remaining) {
                Some(d) => {
                    let other = &m / &d;
                    stack.push(d);
                    stack.push(other);
                }
                None => return Err(Error::FactorizationIncomplete { cofactor: m }),
            },
        }
    }
    Ok(out)
}

pub fn is_squarefree(n: &BigUint, budget: FactorBudget) -> Result<bool> {
    Ok(factorize(n, budget)?.is_squarefree())
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `q`-adic valuation of a nonzero machine word.
pub fn valuation(mut n: u64, q: u64) -> u32 {
    debug_assert!(n != 0 && q >= 2);
    let mut v = 0;
    while n.is_multiple_of(q) {
        n /= q;
        v += 1;
    }
    v
}

/// Row `binomial(n, i) mod q^2` for `i = 0..=n`, for a prime `q < 2^32`.
///
/// Each coefficient is carried as a `q`-free unit part mod `q^2` together
/// with its exact `q`-adic valuation, so no division by a non-unit happens.
pub fn binomial_row_mod_prime_square(n: u64, q: u64) -> Vec<u64> {
    assert!((2..(1 << 32)).contains(&q), "prime {q} out of range");
    let modulus = q * q;
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut unit = 1u64;
    let mut val = 0u32;
    row.push(1 % modulus);
    for i in 1..=n {
        let mut num = n - i + 1;
        let mut den = i;
        while num.is_multiple_of(q) {
            num /= q;
            val += 1;
        }
        while den % q == 0 {
            den /= q;
            val -= 1;
        }
        unit = mul_mod(unit, num % modulus, modulus);
        let inv = mod_inverse_u64(den % modulus, modulus).expect("q-free part is a unit");
        unit = mul_mod(unit, inv, modulus);
        let value = match val {
            0 => unit,
            1 => mul_mod(unit, q, modulus),
            _ => 0,
        };
        row.push(value);
    }
    row
}
