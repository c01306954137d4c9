//! The Lucas sequence `U_0 = 0, U_1 = 1, U_n = k U_{n-1} + U_{n-2}` modulo `m`.

use crate::error::{Error, Result};
use crate::intmath::{add_mod, mul_mod, sub_mod};

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidModulus(m.to_string()));
    }
    Ok(())
}

/// `(U_n, U_{n+1}) mod m` by fast doubling.
///
/// With `Q = -1` the doubling identities are
/// `U_{2n} = U_n (2 U_{n+1} - k U_n)` and `U_{2n+1} = U_{n+1}^2 + U_n^2`.
pub fn lucas_pair(k: u64, n: u64, m: u64) -> Result<(u64, u64)> {
    check_modulus(m)?;
    let k = k % m;
    let (mut u, mut v) = (0u64, 1u64);
    for bit in (0..u64::BITS - n.leading_zeros()).rev() {
        let two_v_minus_ku = sub_mod(add_mod(v, v, m), mul_mod(k, u, m), m);
        let even = mul_mod(u, two_v_minus_ku, m);
        let odd = add_mod(mul_mod(v, v, m), mul_mod(u, u, m), m);
        if (n >> bit) & 1 == 1 {
            u = odd;
            v = add_mod(mul_mod(k, odd, m), even, m);
        } else {
            u = even;
            v = odd;
        }
    }
    Ok((u, v))
}

/// `U_n mod m`.
pub fn lucas_u(k: u64, n: u64, m: u64) -> Result<u64> {
    lucas_pair(k, n, m).map(|(u, _)| u)
}

/// Least `π >= 1` with `(U_π, U_{π+1}) ≡ (0, 1) (mod m)`, found by stepping the recurrence.
pub fn pisano_period(k: u64, m: u64) -> Result<u64> {
    check_modulus(m)?;
    let k = k % m;
    let (mut a, mut b) = (0u64, 1u64);
    let mut n = 0u64;
    loop {
        let next = add_mod(mul_mod(k, b, m), a, m);
        a = b;
        b = next;
        n += 1;
        if a == 0 && b == 1 {
            return Ok(n);
        }
    }
}

/// `π(p^2)`, which is either `π(p)` or `p·π(p)`; decided with one fast-doubling
/// evaluation mod `p^2` instead of iterating up to `p·π(p)`.
pub fn period_p_squared(k: u64, p: u64) -> Result<u64> {
    let pi = pisano_period(k, p)?;
    let p2 = p
        .checked_mul(p)
        .ok_or_else(|| Error::InvalidArgument(format!("p = {p} too large: p^2 overflows")))?;
    if lucas_pair(k, pi, p2)? == (0, 1) {
        Ok(pi)
    } else {
        Ok(p * pi)
    }
}

type Mat2 = [[u64; 2]; 2];

fn mat_mul(x: &Mat2, y: &Mat2, m: u64) -> Mat2 {
    let mut out = [[0u64; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = add_mod(
                mul_mod(x[i][0], y[0][j], m),
                mul_mod(x[i][1], y[1][j], m),
                m,
            );
        }
    }
    out
}

/// Multiplicative order of the companion matrix `[[0, 1], [1, k]]` modulo `m`.
pub fn companion_order(k: u64, m: u64) -> Result<u64> {
    check_modulus(m)?;
    let companion: Mat2 = [[0, 1], [1, k % m]];
    let identity: Mat2 = [[1, 0], [0, 1]];
    let mut power = companion;
    let mut t = 1u64;
    while power != identity {
        power = mat_mul(&power, &companion, m);
        t += 1;
    }
    Ok(t)
}
