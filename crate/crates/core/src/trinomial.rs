//! Monic trinomials `x^N + A x^M + B`: discriminants and the per-prime index
//! criterion that decides whether a prime divides `[Z_K : Z[θ]]`.
//!
//! The criterion is implemented for arbitrary trinomials. The family
//! `F_p(x) = x^(2p) - k x^p - 1` is a thin layer on top ([`is_monogenic_fp`]).
//!
//! Quantities that get divided by `q` (`A_1`, `B_1`, the polynomial `H`) are
//! only needed modulo `q`, so their numerators are computed exactly modulo
//! `q^2` and the division by `q` is checked before it is taken.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmath::{
    binomial_row_mod_prime_square, factorize, is_prime_u64, mod_pow, mul_mod, valuation,
    FactorBudget,
};
use crate::polyfp::PolyFp;
use crate::wss::validate_k;

/// `x^N + A x^M + B` with `0 < M < N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trinomial {
    n: u64,
    m: u64,
    a: BigInt,
    b: BigInt,
}

impl Trinomial {
    pub fn new(n: u64, m: u64, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        if n < 2 || m == 0 || m >= n {
            return Err(Error::InvalidArgument(format!(
                "trinomial exponents need 0 < M < N, got N = {n}, M = {m}"
            )));
        }
        Ok(Trinomial {
            n,
            m,
            a: a.into(),
            b: b.into(),
        })
    }

    /// `F_p(x) = x^(2p) - k x^p - 1`.
    pub fn fp(k: u64, p: u64) -> Self {
        Trinomial::new(2 * p, p, -BigInt::from(k), -1).expect("0 < p < 2p")
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn middle(&self) -> u64 {
        self.m
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `gcd(M, N)`.
    pub fn r(&self) -> u64 {
        self.n.gcd(&self.m)
    }

    pub fn n1(&self) -> u64 {
        self.n / self.r()
    }

    pub fn m1(&self) -> u64 {
        self.m / self.r()
    }

    /// Dense integer coefficients, constant term first.
    pub fn coefficients(&self) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); self.n as usize + 1];
        c[0] += &self.b;
        c[self.m as usize] += &self.a;
        c[self.n as usize] = BigInt::one();
        c
    }
}

impl fmt::Display for Trinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(f: &mut fmt::Formatter<'_>, c: &BigInt, power: &str) -> fmt::Result {
            if c.is_zero() {
                return Ok(());
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            match (mag.is_one(), power.is_empty()) {
                (true, false) => write!(f, " {sign} {power}"),
                (_, true) => write!(f, " {sign} {mag}"),
                (false, false) => write!(f, " {sign} {mag}{power}"),
            }
        }
        write!(f, "x^{}", self.n)?;
        let middle = if self.m == 1 {
            "x".to_string()
        } else {
            format!("x^{}", self.m)
        };
        term(f, &self.a, &middle)?;
        term(f, &self.b, "")
    }
}

/// Verdict of the index criterion at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexVerdict {
    pub q: u64,
    pub divides_index: bool,
    /// Which of the five cases (by `q | A`, `q | B`, `q | M`) decided this prime.
    pub item_used: u8,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonogenicityReport {
    pub trinomial: Trinomial,
    pub discriminant: BigInt,
    pub verdicts: Vec<IndexVerdict>,
    pub monogenic: bool,
}

impl MonogenicityReport {
    fn new(trinomial: Trinomial, discriminant: BigInt, verdicts: Vec<IndexVerdict>) -> Self {
        let monogenic = verdicts.iter().all(|v| !v.divides_index);
        MonogenicityReport {
            trinomial,
            discriminant,
            verdicts,
            monogenic,
        }
    }
}

fn pow_big(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow::pow(base.clone(), exp.try_into().expect("exponent fits usize"))
}

fn minus_one_pow(e: u64) -> BigInt {
    if e.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != col {
            mat.swap(pivot, col);
            sign = -sign;
        }
        for row in col + 1..n {
            for j in col + 1..n {
                let v = &mat[row][j] * &mat[col][col] - &mat[row][col] * &mat[col][j];
                mat[row][j] = v / &prev;
            }
            mat[row][col] = BigInt::zero();
        }
        prev = mat[col][col].clone();
    }
    sign * &mat[n - 1][n - 1]
}

/// Resultant of two dense integer polynomials (constant term first) as the
/// determinant of their Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let deg_f = f.len() - 1;
    let deg_g = g.len() - 1;
    let size = deg_f + deg_g;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..deg_g {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in f.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..deg_f {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in g.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    bareiss_determinant(rows)
}

/// `Δ(f) = (-1)^(N(N-1)/2) Res(f, f')` from the Sylvester determinant.
pub fn discriminant_resultant(t: &Trinomial) -> BigInt {
    let f = t.coefficients();
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let n = t.degree();
    minus_one_pow(n * (n - 1) / 2) * resultant(&f, &df)
}

/// Closed-form trinomial discriminant `(-1)^(N(N-1)/2) B^(M-1) D^r`, with `D`
/// from [`jks_d_value`].
pub fn discriminant_closed_form(t: &Trinomial) -> BigInt {
    let (d, _) = jks_d_value(t);
    let n = t.degree();
    minus_one_pow(n * (n - 1) / 2) * pow_big(t.b(), t.middle() - 1) * pow_big(&d, t.r())
}

/// `Δ(F_p) = (-1)^((p+1)(2p-1)) p^(2p) (k^2+4)^p`.
pub fn fp_discriminant(k: u64, p: u64) -> BigInt {
    let sign = minus_one_pow((p + 1) * (2 * p - 1));
    let kk4 = BigInt::from(k) * BigInt::from(k) + 4;
    sign * pow_big(&BigInt::from(p), 2 * p) * pow_big(&kk4, p)
}

/// `D = N^N1 B^(N1-M1) - (-1)^N1 M^M1 (N-M)^(N1-M1) A^N1` together with `D / r^N1`.
pub fn jks_d_value(t: &Trinomial) -> (BigInt, BigInt) {
    let (n, m) = (t.degree(), t.middle());
    let (n1, m1) = (t.n1(), t.m1());
    let d = pow_big(&BigInt::from(n), n1) * pow_big(t.b(), n1 - m1)
        - minus_one_pow(n1)
            * pow_big(&BigInt::from(m), m1)
            * pow_big(&BigInt::from(n - m), n1 - m1)
            * pow_big(t.a(), n1);
    let r_pow = pow_big(&BigInt::from(t.r()), n1);
    let (normalized, rem) = d.div_rem(&r_pow);
    debug_assert!(rem.is_zero(), "r^N1 divides D");
    (d, normalized)
}

fn residue(x: &BigInt, modulus: u64) -> u64 {
    x.mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("reduced residue fits")
}

fn pow_residue(base: &BigInt, exp: u64, modulus: u64) -> u64 {
    mod_pow(base, &BigUint::from(exp), &BigUint::from(modulus))
        .expect("modulus >= 2")
        .to_u64()
        .expect("reduced residue fits")
}

/// Divides a residue mod `q^2` that is known to be a multiple of `q`,
/// returning the quotient mod `q`.
fn exact_div_by_q(numerator_mod_q2: u64, q: u64, what: &str) -> u64 {
    assert_eq!(
        numerator_mod_q2 % q,
        0,
        "{what}: numerator not divisible by {q}"
    );
    numerator_mod_q2 / q
}

/// `Δ(t) mod q` via the closed form, without building `Δ(t)`.
pub fn discriminant_mod(t: &Trinomial, q: u64) -> u64 {
    let (n, m) = (t.degree(), t.middle());
    let (n1, m1) = (t.n1(), t.m1());
    let big = |x: u64| BigInt::from(x);
    let first = mul_mod(
        pow_residue(&big(n), n1, q),
        pow_residue(t.b(), n1 - m1, q),
        q,
    );
    let second = mul_mod(
        mul_mod(
            pow_residue(&big(m), m1, q),
            pow_residue(&big(n - m), n1 - m1, q),
            q,
        ),
        pow_residue(t.a(), n1, q),
        q,
    );
    let d = if n1 % 2 == 0 {
        (first + q - second) % q
    } else {
        (first + second) % q
    };
    let magnitude = mul_mod(
        pow_residue(t.b(), m - 1, q),
        pow_residue(&big(d), t.r(), q),
        q,
    );
    if (n * (n - 1) / 2) % 2 == 0 {
        magnitude
    } else {
        (q - magnitude) % q
    }
}

fn check_prime(q: u64) -> Result<()> {
    if !is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    Ok(())
}

/// Items 2 to 4 work with residues mod `q^2` in a machine word.
fn check_small_prime(q: u64, item: u8) -> Result<()> {
    if q >= (1 << 32) {
        return Err(Error::InvalidArgument(format!(
            "item {item} needs q < 2^32, got {q}"
        )));
    }
    Ok(())
}

/// Decides whether the prime `q | Δ(t)` divides the index `[Z_K : Z[θ]]`,
/// where `θ` is a root of the (assumed irreducible) trinomial `t`.
///
/// The five cases are selected by `q | A`, `q | B` and `q | M`:
///
/// 1. `q | A, q | B`: `q` does not divide the index iff `q^2 ∤ B`.
/// 2. `q | A, q ∤ B`: iff either `q | A_2` and `q ∤ B_1`, or
///    `q ∤ A_2((-B)^M1 A_2^N1 - (-B_1)^N1)`, where `A_2 = A/q`,
///    `B_1 = (B + (-B)^(q^e))/q` and `q^e || N`.
/// 3. `q ∤ A, q | B`: iff either `q | A_1` and `q ∤ B_2`, or
///    `q ∤ A_1 B_2^(M-1)((-A)^M1 A_1^(N1-M1) - (-B_2)^(N1-M1))`, where
///    `A_1 = (A + (-A)^(q^j))/q`, `q^j || (N-M)` and `B_2 = B/q`.
/// 4. `q ∤ AB, q | M`: with `q^m` the largest power of `q` dividing both `N`
///    and `M`, iff `G(x) = x^(N/q^m) + A x^(M/q^m) + B` and
///    `H(x) = (A x^M + B + (-A x^(M/q^m) - B)^(q^m))/q` are coprime mod `q`.
/// 5. `q ∤ ABM`: iff `q^2 ∤ D / r^N1`.
pub fn jks_check_prime(t: &Trinomial, q: u64) -> Result<IndexVerdict> {
    check_prime(q)?;
    if discriminant_mod(t, q) != 0 {
        return Err(Error::Precondition(format!(
            "{q} does not divide the discriminant of {t}"
        )));
    }
    let q_big = BigInt::from(q);
    let q2_big = &q_big * &q_big;
    let q2 = q.wrapping_mul(q);
    let q_divides = |x: &BigInt| (x % &q_big).is_zero();
    let (a, b) = (t.a(), t.b());
    let (n, m) = (t.degree(), t.middle());
    let (n1, m1) = (t.n1(), t.m1());

    let verdict = |item: u8, holds: bool, detail: String| IndexVerdict {
        q,
        divides_index: !holds,
        item_used: item,
        detail,
    };

    match (q_divides(a), q_divides(b)) {
        (true, true) => {
            let holds = !(b % &q2_big).is_zero();
            Ok(verdict(
                1,
                holds,
                format!("q | A and q | B; q^2 {} B", if holds { "∤" } else { "|" }),
            ))
        }
        (true, false) => {
            check_small_prime(q, 2)?;
            let a2 = residue(&(a / &q_big), q);
            let e = valuation(n, q);
            let q_pow_e = q.pow(e);
            let minus_b = -b;
            let numerator = (residue(b, q2) + pow_residue(&minus_b, q_pow_e, q2)) % q2;
            let b1 = exact_div_by_q(numerator, q, "B_1");
            let first = a2 == 0 && b1 != 0;
            let inner = {
                let lhs = mul_mod(
                    pow_residue(&minus_b, m1, q),
                    pow_residue(&BigInt::from(a2), n1, q),
                    q,
                );
                let rhs = pow_residue(&-BigInt::from(b1), n1, q);
                (lhs + q - rhs) % q
            };
            let second = mul_mod(a2, inner, q) != 0;
            Ok(verdict(
                2,
                first || second,
                format!("q | A, q ∤ B; A_2 ≡ {a2}, B_1 ≡ {b1} (mod {q}), e = {e}"),
            ))
        }
        (false, true) => {
            check_small_prime(q, 3)?;
            let b2 = residue(&(b / &q_big), q);
            let j = valuation(n - m, q);
            let minus_a = -a;
            let numerator = (residue(a, q2) + pow_residue(&minus_a, q.pow(j), q2)) % q2;
            let a1 = exact_div_by_q(numerator, q, "A_1");
            let first = a1 == 0 && b2 != 0;
            let inner = {
                let lhs = mul_mod(
                    pow_residue(&minus_a, m1, q),
                    pow_residue(&BigInt::from(a1), n1 - m1, q),
                    q,
                );
                let rhs = pow_residue(&-BigInt::from(b2), n1 - m1, q);
                (lhs + q - rhs) % q
            };
            let product = mul_mod(
                mul_mod(a1, pow_residue(&BigInt::from(b2), m - 1, q), q),
                inner,
                q,
            );
            Ok(verdict(
                3,
                first || product != 0,
                format!("q ∤ A, q | B; A_1 ≡ {a1}, B_2 ≡ {b2} (mod {q}), j = {j}"),
            ))
        }
        (false, false) if m % q == 0 => {
            check_small_prime(q, 4)?;
            let (g, h) = index_gh_polynomials(t, q);
            let gcd = g.gcd(&h);
            let coprime = gcd.degree() == Some(0);
            Ok(verdict(
                4,
                coprime,
                format!(
                    "q ∤ AB, q | M; G = {}, H = {}, gcd = {} over F_{q}",
                    render_poly(&g),
                    render_poly(&h),
                    render_poly(&gcd)
                ),
            ))
        }
        (false, false) => {
            let (_, normalized) = jks_d_value(t);
            let holds = !(&normalized % &q2_big).is_zero();
            Ok(verdict(
                5,
                holds,
                format!(
                    "q ∤ ABM; D/r^N1 = {normalized}, q^2 {} D/r^N1",
                    if holds { "∤" } else { "|" }
                ),
            ))
        }
    }
}

/// `G` and `H` of case 4, reduced mod `q`.
fn index_gh_polynomials(t: &Trinomial, q: u64) -> (PolyFp, PolyFp) {
    let (n, m) = (t.degree(), t.middle());
    let e = valuation(n, q).min(valuation(m, q));
    let big_q = q.pow(e);
    let q2 = q * q;
    let (n_red, m_red) = ((n / big_q) as usize, (m / big_q) as usize);

    let mut g = vec![0u64; n_red + 1];
    g[n_red] = 1;
    g[m_red] = residue(t.a(), q);
    g[0] = (g[0] + residue(t.b(), q)) % q;

    // (-A y - B)^Q = Σ C(Q, i) (-A)^i (-B)^(Q-i) y^i with y = x^(M/Q).
    let minus_a = residue(&-t.a(), q2);
    let minus_b = residue(&-t.b(), q2);
    let binomials = binomial_row_mod_prime_square(big_q, q);
    let mut numerator = vec![0u64; m as usize + 1];
    let mut a_pow = 1u64;
    let mut b_pows = Vec::with_capacity(big_q as usize + 1);
    let mut acc = 1u64;
    for _ in 0..=big_q {
        b_pows.push(acc);
        acc = mul_mod(acc, minus_b, q2);
    }
    for (i, &binom) in binomials.iter().enumerate() {
        let term = mul_mod(mul_mod(binom, a_pow, q2), b_pows[big_q as usize - i], q2);
        let slot = &mut numerator[i * m_red];
        *slot = (*slot + term) % q2;
        a_pow = mul_mod(a_pow, minus_a, q2);
    }
    numerator[m as usize] = (numerator[m as usize] + residue(t.a(), q2)) % q2;
    numerator[0] = (numerator[0] + residue(t.b(), q2)) % q2;
    let h = numerator
        .into_iter()
        .map(|c| exact_div_by_q(c, q, "H"))
        .collect();
    (PolyFp::new(g, q), PolyFp::new(h, q))
}

fn render_poly(p: &PolyFp) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    terms.join(" + ")
}

/// Coprimality of `G(x) = x^2 - kx - 1` and
/// `H(x) = (-k x^p - 1 + (kx + 1)^p) / p` over `F_p`.
///
/// `H` has coefficient `C(p, j) k^j / p` at `x^j` for `0 < j < p` and
/// `(k^p - k) / p` at `x^p`.
pub fn gh_coprimality(k: u64, p: u64) -> Result<bool> {
    let (g, h) = gh_polynomials(k, p)?;
    #[cfg(debug_assertions)]
    if p > 2 {
        let disc = BigInt::from(k) * BigInt::from(k) + 4;
        if crate::intmath::jacobi(&disc, &BigInt::from(p))? == -1 {
            debug_assert!(
                (0..p).all(|x| g.eval(x) != 0),
                "G should be irreducible mod {p}"
            );
        }
    }
    Ok(g.is_coprime_to(&h))
}

/// `G` and `H` of [`gh_coprimality`] reduced mod `p`.
pub fn gh_polynomials(k: u64, p: u64) -> Result<(PolyFp, PolyFp)> {
    check_prime(p)?;
    let p2 = p * p;
    let k2 = k % p2;
    let g = PolyFp::from_signed(&[BigInt::from(-1), -BigInt::from(k), BigInt::one()], p);
    let binomials = binomial_row_mod_prime_square(p, p);
    let mut h = vec![0u64; p as usize + 1];
    let mut k_pow = 1u64;
    for (j, slot) in h.iter_mut().enumerate() {
        let numerator = match j as u64 {
            0 => 0,
            j if j == p => (k_pow + p2 - k2) % p2,
            _ => mul_mod(binomials[j], k_pow, p2),
        };
        *slot = exact_div_by_q(numerator, p, "H");
        k_pow = mul_mod(k_pow, k2, p2);
    }
    Ok((g, PolyFp::new(h, p)))
}

/// Index verdicts for every prime factor of `Δ(t)`.
///
/// `Δ(t) = ± B^(M-1) D^r`, so only `B` and `D` are factored.
pub fn monogenicity_report(t: &Trinomial, budget: FactorBudget) -> Result<MonogenicityReport> {
    let discriminant = discriminant_closed_form(t);
    if discriminant.is_zero() {
        return Err(Error::Precondition(format!("{t} has zero discriminant")));
    }
    let (d, _) = jks_d_value(t);
    let mut primes = Vec::new();
    for value in [t.b(), &d] {
        if t.middle() == 1 && value == t.b() {
            continue;
        }
        let magnitude = value.magnitude();
        if magnitude.is_zero() {
            continue;
        }
        for q in factorize(magnitude, budget)?.primes() {
            primes.push(q.to_u64().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "prime factor {q} of the discriminant exceeds 64 bits"
                ))
            })?);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let verdicts = primes
        .into_iter()
        .map(|q| jks_check_prime(t, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonogenicityReport::new(t.clone(), discriminant, verdicts))
}

/// Monogenicity of `F_p(x) = x^(2p) - k x^p - 1` for `k` meeting the hypotheses
/// (`4 ∤ k`, `(k^2+4)/gcd(2,k)^2` squarefree). The prime factors of the
/// discriminant are `p` and those of `k^2 + 4`.
pub fn is_monogenic_fp(k: u64, p: u64, budget: FactorBudget) -> Result<MonogenicityReport> {
    check_prime(p)?;
    validate_k(k, budget)?.require()?;
    let t = Trinomial::fp(k, p);
    let kk4 = BigUint::from(k) * BigUint::from(k) + 4u32;
    let mut primes = vec![p];
    for q in factorize(&kk4, budget)?.primes() {
        primes.push(q.to_u64().expect("factor of k^2 + 4 fits in u64"));
    }
    primes.sort_unstable();
    primes.dedup();
    let verdicts = primes
        .into_iter()
        .map(|q| jks_check_prime(&t, q))
        .collect::<Result<Vec<_>>>()?;
    let discriminant = fp_discriminant(k, p);
    debug_assert_eq!(discriminant.sign() == Sign::Minus, p == 2);
    Ok(MonogenicityReport::new(t, discriminant, verdicts))
}
