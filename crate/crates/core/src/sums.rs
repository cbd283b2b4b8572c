//! Exponential sums `S(q, A; c)`, the Parseval identity and the bound on
//! double character sums over sumsets.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::character::Character;
use crate::cyclotomic::{CyclotomicInt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};

fn dedup(set: &[FieldElement]) -> Vec<FieldElement> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `counts[k] = #{a in A : Tr(a c) = k}` for `k` in `0..p`.
pub fn trace_histogram(field: &FiniteField, set: &[FieldElement], c: FieldElement) -> Vec<i64> {
    let mut counts = vec![0i64; field.characteristic() as usize];
    for &a in set {
        counts[field.trace(field.mul(a, c)) as usize] += 1;
    }
    counts
}

/// `S(q, A; c) = sum_{a in A} zeta_p^{Tr(a c)}` in Z[zeta_p].
pub fn exp_sum(field: &FiniteField, set: &[FieldElement], c: FieldElement) -> CyclotomicInt {
    let ring = CyclotomicRing::new(field.characteristic()).expect("p is below the conductor cap");
    ring.from_power_counts(&trace_histogram(field, &dedup(set), c))
}

/// Whether `S(q, A; c) = 0`. The only Q-linear relation among the p-th roots
/// of unity is their total sum, so this holds iff the trace histogram is flat.
pub fn exp_sum_vanishes(field: &FiniteField, set: &[FieldElement], c: FieldElement) -> bool {
    let h = trace_histogram(field, set, c);
    h.iter().all(|&n| n == h[0])
}

/// `sum_{c != 0} |S(q, A; c)|^2`, computed exactly and checked against
/// `q |A| - |A|^2`.
pub fn parseval_sum(field: &FiniteField, set: &[FieldElement]) -> Result<u64> {
    let set = dedup(set);
    let p = field.characteristic() as usize;
    // |S|^2 = sum_k (sum_j n_j n_{j+k}) zeta^k
    let mut auto = vec![0i64; p];
    for c in field.nonzero_elements() {
        let h = trace_histogram(field, &set, c);
        for (k, slot) in auto.iter_mut().enumerate() {
            *slot += (0..p).map(|j| h[j] * h[(j + k) % p]).sum::<i64>();
        }
    }
    let ring = CyclotomicRing::new(p as u32)?;
    let total = ring.from_power_counts(&auto);
    let n = set.len() as u64;
    let expected = field.order() as u64 * n - n * n;
    match total.as_rational() {
        Some(v) if v == BigInt::from(expected) => Ok(expected),
        _ => Err(Error::ParsevalViolation { computed: total.to_string(), expected: expected.to_string() }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    /// `sum_{a in A, b in B} chi(a + b)` in Z[zeta_d].
    pub sum: CyclotomicInt,
    /// `|sum|^2` when it is a rational integer.
    pub norm_sq: Option<BigInt>,
    /// `|A| |B| (q - |A|) (q - |B|)`; the bound reads `q |sum|^2 <= rhs`.
    pub rhs: BigInt,
    pub holds: bool,
}

/// Checks `|sum chi(a + b)|^2 <= q |A||B| (1 - |A|/q)(1 - |B|/q)` exactly.
///
/// With `X = q |sum|^2` and `R` the scaled right-hand side, `X` is totally
/// real and nonnegative. When it is not rational the check is made for every
/// Galois conjugate at once: the conjugates are the roots of the integer
/// polynomial `P(y) = prod (y - sigma_k X)`, which is real-rooted, so all of
/// them are `<= R` iff `P(y + R)` has no negative coefficient. The conjugates
/// are the same quantity for the characters `chi^k`, so `holds` means the
/// bound holds for `chi` and each of them.
pub fn double_char_sum_bound(
    field: &FiniteField,
    a: &[FieldElement],
    b: &[FieldElement],
    chi: &Character,
) -> Result<BoundCheck> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let (a, b) = (dedup(a), dedup(b));
    let d = chi.modulus() as usize;
    let mut counts = vec![0i64; d];
    for &x in &a {
        for &y in &b {
            if let Some(e) = chi.exponent(field.add(x, y)) {
                counts[e as usize] += 1;
            }
        }
    }
    let ring = Arc::clone(chi.ring());
    let sum = ring.from_power_counts(&counts);
    let q = BigInt::from(field.order());
    let (na, nb) = (BigInt::from(a.len()), BigInt::from(b.len()));
    let rhs = &na * &nb * (&q - &na) * (&q - &nb);
    let norm = sum.norm_sq();
    let x = norm.scalar_mul(&q);
    let norm_sq = norm.as_rational();
    let holds = match x.as_rational() {
        Some(v) => v <= rhs,
        None => conjugates_bounded(&x, &rhs)?,
    };
    Ok(BoundCheck { sum, norm_sq, rhs, holds })
}

fn conjugates_bounded(x: &CyclotomicInt, bound: &BigInt) -> Result<bool> {
    let ring = Arc::clone(x.ring());
    let m = ring.conductor() as i64;
    // sigma_k and sigma_{-k} agree on real elements
    let reps: Vec<i64> = (1..=m / 2).filter(|&k| crate::arith::gcd(k as u64, m as u64) == 1).collect();
    // coefficients of prod (y - r), constant term first
    let mut poly = vec![ring.one()];
    for &k in &reps {
        let root = x.galois(k)?;
        let mut next = vec![ring.zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &root);
        }
        poly = next;
    }
    let mut coeffs: Vec<BigInt> = poly
        .iter()
        .map(|c| c.as_rational().ok_or_else(|| Error::Invalid("conjugate polynomial is not rational".into())))
        .collect::<Result<_>>()?;
    taylor_shift(&mut coeffs, bound);
    Ok(coeffs.iter().all(|c| !c.is_negative()))
}

/// Replaces `f(y)` by `f(y + r)` in place.
fn taylor_shift(coeffs: &mut [BigInt], r: &BigInt) {
    let n = coeffs.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &coeffs[j + 1] * r;
            coeffs[j] += t;
        }
    }
}

/// `|A|^2 - |A| <= sqrt(q) |A| (1 - |A|/q)` multiplied through by `q`, for
/// square `q`. This is the counting step that turns the double-sum bound into
/// the trivial clique bound.
pub fn clique_counting_bound(q: u64, size: u64) -> Result<(BigInt, BigInt, bool)> {
    let root = crate::arith::exact_sqrt(q).ok_or(Error::NotSquare(q as u32))?;
    let n = BigInt::from(size);
    let lhs = (&n * &n - &n) * BigInt::from(q);
    let rhs = BigInt::from(root) * &n * (BigInt::from(q) - &n);
    let holds = lhs <= rhs;
    Ok((lhs, rhs, holds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn f9() -> Arc<FiniteField> {
        Arc::new(FiniteField::new(3, 2).unwrap())
    }

    #[test]
    fn exp_sum_examples() {
        let f = f9();
        let f3 = f.subfield_elements(1).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(exp_sum(&f, &f3, x).as_rational(), Some(3.into()));
        assert!(exp_sum(&f, &f3, FieldElement::ONE).is_zero());
        let all: Vec<_> = f.elements().collect();
        for c in f.nonzero_elements() {
            assert!(exp_sum(&f, &all, c).is_zero());
            assert!(exp_sum_vanishes(&f, &all, c));
        }
    }

    #[test]
    fn parseval_examples() {
        let f = f9();
        assert_eq!(parseval_sum(&f, &[FieldElement::ZERO, FieldElement::ONE]).unwrap(), 14);
        let all: Vec<_> = f.elements().collect();
        assert_eq!(parseval_sum(&f, &all).unwrap(), 0);
        let f25 = FiniteField::new(5, 2).unwrap();
        let f5 = f25.subfield_elements(1).unwrap();
        assert_eq!(parseval_sum(&f25, &f5).unwrap(), 100);
    }

    #[test]
    fn bound_degenerate_cases() {
        let f = f9();
        let chi = Character::new(&f, 4, 1).unwrap();
        let all: Vec<_> = f.elements().collect();
        let full = double_char_sum_bound(&f, &all, &all, &chi).unwrap();
        assert!(full.sum.is_zero() && full.rhs.is_zero() && full.holds);
        let empty = double_char_sum_bound(&f, &[], &all, &chi).unwrap();
        assert!(empty.sum.is_zero() && empty.holds);
        let triv = Character::new(&f, 4, 0).unwrap();
        assert!(matches!(double_char_sum_bound(&f, &all, &all, &triv), Err(Error::TrivialCharacter)));
    }

    #[test]
    fn subfield_differences_are_quartic_residues() {
        let f = f9();
        let chi = Character::new(&f, 4, 1).unwrap();
        let f3 = f.subfield_elements(1).unwrap();
        let minus: Vec<_> = f3.iter().map(|&b| f.neg(b)).collect();
        let check = double_char_sum_bound(&f, &f3, &minus, &chi).unwrap();
        assert_eq!(check.sum.as_rational(), Some(6.into()));
        assert!(check.holds);
    }

    #[test]
    fn shift_matches_direct_expansion() {
        // (y - 2)(y - 5) shifted by 3 is (y + 1)(y - 2) = y^2 - y - 2
        let mut c: Vec<BigInt> = vec![10.into(), (-7).into(), 1.into()];
        taylor_shift(&mut c, &3.into());
        assert_eq!(c, vec![BigInt::from(-2), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn irrational_sums_are_decided() {
        let f = Arc::new(FiniteField::new(5, 2).unwrap());
        let chi = Character::new(&f, 3, 1).unwrap();
        let a: Vec<_> = (0..7).map(|i| f.element(i).unwrap()).collect();
        let b: Vec<_> = (3..9).map(|i| f.element(i).unwrap()).collect();
        let check = double_char_sum_bound(&f, &a, &b, &chi).unwrap();
        assert!(check.holds);
    }

    #[test]
    fn counting_bound_is_tight_at_subfield() {
        let (lhs, rhs, holds) = clique_counting_bound(9, 3).unwrap();
        assert_eq!((lhs, rhs), (54.into(), 54.into()));
        assert!(holds);
        assert!(!clique_counting_bound(9, 4).unwrap().2);
    }
}
