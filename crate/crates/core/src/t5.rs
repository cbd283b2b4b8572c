//! Binomial-coefficient upper bound on the clique number of GP(q, d).
//!
//! If `N = omega(GP(q, d))` and `2 <= n <= N` has
//! `binom(n - 1 + m, m) != 0 (mod p)` with `m = (q - 1)/d`, then
//! `(N - 1) n <= m`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

/// `binom(a, b) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut a: u64, mut b: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while b > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        acc = acc * small_binom_mod(ai, bi, p) % p;
        a /= p;
        b /= p;
    }
    acc
}

fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * arith::pow_mod(den, p - 2, p) % p
}

/// Exact binomial coefficient.
pub fn binom_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct T5Bound {
    pub bound: u64,
    pub trivial: u64,
    /// The `n` that ruled out `bound + 1`, if the bound improved on `trivial`.
    pub binding_n: Option<u64>,
}

/// Largest `N <= floor(sqrt q)` consistent with the binomial constraints.
///
/// The constraint set only grows with `N` and each constraint only tightens,
/// so the consistent values form an initial segment and a downward scan
/// finds its top.
pub fn t5_bound(p: u64, q: u64, d: u64) -> Result<T5Bound> {
    if arith::prime_power(q).map(|(b, _)| b) != Some(p) || p == 2 {
        return Err(Error::Invalid(format!("{q} is not a power of the odd prime {p}")));
    }
    if d < 2 || (q - 1) % (2 * d) != 0 {
        return Err(Error::CongruenceViolation { q: q as u32, modulus: (2 * d) as u32 });
    }
    let m = (q - 1) / d;
    let trivial = arith::isqrt(q);
    let nonvanishing = |n: u64| -> Result<bool> {
        let r = binom_mod_p(n - 1 + m, m, p);
        if q <= 121 {
            let exact = (binom_exact(n - 1 + m, m) % p).to_u64().expect("residue below p");
            if exact != r {
                return Err(Error::Invalid(format!("Lucas residue {r} != exact {exact} at n={n}")));
            }
        }
        Ok(r != 0)
    };
    let mut binding = None;
    for big_n in (1..=trivial).rev() {
        let mut violated = None;
        for n in 2..=big_n {
            if nonvanishing(n)? && (big_n - 1) * n > m {
                violated = Some(n);
                break;
            }
        }
        match violated {
            None => return Ok(T5Bound { bound: big_n, trivial, binding_n: binding }),
            Some(n) => binding = Some(n),
        }
    }
    Ok(T5Bound { bound: 1, trivial, binding_n: binding })
}
