//! Lucas sequences `U_n(k, -1)`, their periods modulo `m`, k-Wall-Sun-Sun
//! primes, and the monogenicity of `F_p(x) = x^(2p) - k x^p - 1`.
//!
//! For `4 ∤ k` with `(k^2 + 4)/gcd(2, k)^2` squarefree, `p` is a
//! k-Wall-Sun-Sun prime exactly when `F_p` fails to be monogenic. The
//! [`wss`] module evaluates that statement four independent ways and
//! checks that they agree.

pub mod error;
pub mod intmath;
pub mod lucas;
pub mod polyfp;
pub mod quadring;
pub mod trinomial;
pub mod wss;

pub use error::{Error, Result};
