//! Brute-force reference computations shared by the integration suites.
//!
//! Nothing in here touches `wss_core`: periods are found by stepping the
//! state pair `(U_n, U_{n+1})` one term at a time, primes by trial division.

#![allow(dead_code)]

/// Least `n >= 1` with `(U_n, U_{n+1}) = (0, 1) (mod m)` for `U_n = k U_{n-1} + U_{n-2}`.
pub fn period(k: u64, m: u64) -> u64 {
    let m = m as u128;
    let k = k as u128 % m;
    let (mut a, mut b) = (0u128, 1u128 % m);
    let mut n = 0u64;
    loop {
        let c = (k * b + a) % m;
        a = b;
        b = c;
        n += 1;
        if a == 0 && b == 1 % m {
            return n;
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// The state pair after `n` steps, mod `m`.
pub fn state_after(k: u64, n: u64, m: u64) -> (u64, u64) {
    let m = m as u128;
    let k = k as u128 % m;
    let (mut a, mut b) = (0u128, 1u128 % m);
    for _ in 0..n {
        let c = (k * b + a) % m;
        a = b;
        b = c;
    }
    (a as u64, b as u64)
}

/// `p` is a k-Wall-Sun-Sun prime when the period mod `p^2` equals the period mod `p`.
/// The period mod `p^2` is a multiple of the one mod `p`, so it is enough to
/// step `period(k, p)` terms mod `p^2` and see whether the pair is back at `(0, 1)`.
pub fn is_wss(k: u64, p: u64) -> bool {
    state_after(k, period(k, p), p * p) == (0, 1)
}

/// `4 ∤ k` and `(k^2 + 4) / gcd(2, k)^2` squarefree, checked by trial division.
pub fn hypotheses_hold(k: u64) -> bool {
    if k.is_multiple_of(4) {
        return false;
    }
    let g = if k.is_multiple_of(2) { 4 } else { 1 };
    let d = (k * k + 4) / g;
    let mut q = 2;
    while q * q <= d {
        if d.is_multiple_of(q * q) {
            return false;
        }
        q += 1;
    }
    true
}
