//! Exact arithmetic in the cyclotomic integers Z[zeta_m].
//!
//! Elements are integer coefficient vectors in the power basis
//! `1, zeta, ..., zeta^{phi(m)-1}`, always reduced modulo the cyclotomic
//! polynomial Phi_m, so two elements are equal iff their vectors are equal.
//! Coefficients are arbitrary precision; the hot paths run in `i128` with
//! overflow checks and fall back to `BigInt` when a value outgrows it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Largest conductor accepted by [`CyclotomicRing::new`].
pub const DEFAULT_CONDUCTOR_CAP: u64 = 10_000;

#[derive(Debug)]
pub struct CyclotomicRing {
    m: u32,
    phi: usize,
    poly: Vec<i64>,
    // (degree, coefficient) for the nonzero non-leading terms of Phi_m
    terms: Vec<(usize, i64)>,
}

impl CyclotomicRing {
    pub fn new(m: u32) -> Result<Arc<Self>> {
        Self::with_cap(m, DEFAULT_CONDUCTOR_CAP)
    }

    pub fn with_cap(m: u32, cap: u64) -> Result<Arc<Self>> {
        if m == 0 || m as u64 > cap {
            return Err(Error::ConductorCapExceeded { m: m as u64, cap });
        }
        let poly = cyclotomic_poly(m);
        let phi = poly.len() - 1;
        debug_assert_eq!(phi as u64, arith::euler_phi(m as u64));
        let terms = poly[..phi]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        Ok(Arc::new(CyclotomicRing { m, phi, poly, terms }))
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Coefficients of Phi_m, constant term first.
    pub fn cyclotomic_poly(&self) -> &[i64] {
        &self.poly
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicInt {
        CyclotomicInt { ring: Arc::clone(self), coeffs: vec![BigInt::zero(); self.phi] }
    }

    pub fn one(self: &Arc<Self>) -> CyclotomicInt {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CyclotomicInt {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(self: &Arc<Self>, n: BigInt) -> CyclotomicInt {
        let mut e = self.zero();
        e.coeffs[0] = n;
        e
    }

    /// `zeta_m^k`, any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CyclotomicInt {
        let k = k.rem_euclid(self.m as i64) as usize;
        let mut wide = vec![0i128; self.m as usize];
        wide[k] = 1;
        self.build_small(wide)
    }

    /// `sum_k counts[k] * zeta_m^k`; indices beyond `m` wrap around.
    pub fn from_power_counts(self: &Arc<Self>, counts: &[i64]) -> CyclotomicInt {
        self.build_small(counts.iter().map(|&c| c as i128).collect())
    }

    fn build_small(self: &Arc<Self>, wide: Vec<i128>) -> CyclotomicInt {
        let coeffs = match self.reduce_small(wide.clone()) {
            Some(v) => v.into_iter().map(BigInt::from).collect(),
            None => self.reduce_big(wide.into_iter().map(BigInt::from).collect()),
        };
        CyclotomicInt { ring: Arc::clone(self), coeffs }
    }

    fn build_big(self: &Arc<Self>, wide: Vec<BigInt>) -> CyclotomicInt {
        let small: Option<Vec<i128>> = wide.iter().map(ToPrimitive::to_i128).collect();
        if let Some(v) = small.and_then(|v| self.reduce_small(v)) {
            return CyclotomicInt {
                ring: Arc::clone(self),
                coeffs: v.into_iter().map(BigInt::from).collect(),
            };
        }
        CyclotomicInt { ring: Arc::clone(self), coeffs: self.reduce_big(wide) }
    }

    fn reduce_small(&self, mut v: Vec<i128>) -> Option<Vec<i128>> {
        let m = self.m as usize;
        if v.len() > m {
            for k in m..v.len() {
                let c = v[k];
                v[k % m] = v[k % m].checked_add(c)?;
            }
            v.truncate(m);
        }
        for i in (self.phi..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            let base = i - self.phi;
            for &(j, f) in &self.terms {
                let t = c.checked_mul(f as i128)?;
                v[base + j] = v[base + j].checked_sub(t)?;
            }
            v[i] = 0;
        }
        v.resize(self.phi, 0);
        Some(v)
    }

    fn reduce_big(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let m = self.m as usize;
        if v.len() > m {
            let tail: Vec<BigInt> = v.drain(m..).collect();
            for (k, c) in tail.into_iter().enumerate() {
                v[(m + k) % m] += c;
            }
        }
        for i in (self.phi..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            let base = i - self.phi;
            for &(j, f) in &self.terms {
                v[base + j] -= &c * f;
            }
        }
        v.resize(self.phi, BigInt::zero());
        v
    }
}

/// Phi_m by exact division of x^m - 1 by Phi_d for every proper divisor d.
fn cyclotomic_poly(m: u32) -> Vec<i64> {
    let divs = arith::divisors(m as u64);
    let mut table: Vec<(u64, Vec<i64>)> = Vec::with_capacity(divs.len());
    for &n in &divs {
        let mut num = vec![0i64; n as usize + 1];
        num[0] = -1;
        num[n as usize] = 1;
        for (d, phi_d) in &table {
            if n % d == 0 {
                num = exact_div_monic(&num, phi_d);
            }
        }
        table.push((n, num));
    }
    table.pop().expect("m has at least one divisor").1
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = r[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                r[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "division was not exact");
    quot
}

#[derive(Clone)]
pub struct CyclotomicInt {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn conductor(&self) -> u32 {
        self.ring.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The integer `n` when the element equals `n * 1`.
    pub fn as_rational(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring.m == other.ring.m {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.ring.m, right: other.ring.m })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CyclotomicInt { ring: Arc::clone(&self.ring), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CyclotomicInt { ring: Arc::clone(&self.ring), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let phi = self.ring.phi;
        if phi == 1 {
            return Ok(self.ring.from_bigint(&self.coeffs[0] * &other.coeffs[0]));
        }
        let small_a: Option<Vec<i128>> = self.coeffs.iter().map(ToPrimitive::to_i128).collect();
        let small_b: Option<Vec<i128>> = other.coeffs.iter().map(ToPrimitive::to_i128).collect();
        if let (Some(a), Some(b)) = (small_a, small_b) {
            if let Some(prod) = convolve_small(&a, &b) {
                if let Some(v) = self.ring.reduce_small(prod) {
                    let coeffs = v.into_iter().map(BigInt::from).collect();
                    return Ok(CyclotomicInt { ring: Arc::clone(&self.ring), coeffs });
                }
            }
        }
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(CyclotomicInt { ring: Arc::clone(&self.ring), coeffs: self.ring.reduce_big(prod) })
    }

    pub fn scalar_mul(&self, n: &BigInt) -> Self {
        CyclotomicInt {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    /// Divides every coefficient by `n` when all of them are multiples of it.
    /// Since the power basis is an integral basis, this decides whether the
    /// quotient exists in Z[zeta_m].
    pub fn exact_div_int(&self, n: &BigInt) -> Option<Self> {
        if n.is_zero() {
            return None;
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !(c % n).is_zero() {
                return None;
            }
            coeffs.push(c / n);
        }
        Some(CyclotomicInt { ring: Arc::clone(&self.ring), coeffs })
    }

    /// The automorphism `zeta -> zeta^k` for k coprime to m.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let m = self.ring.m as i64;
        let k = k.rem_euclid(m);
        if arith::gcd(k as u64, m as u64) != 1 {
            return Err(Error::NotCoprime { p: k as u32, d: m as u32 });
        }
        let mut wide = vec![BigInt::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            wide[(i as i64 * k % m) as usize] += c;
        }
        Ok(self.ring.build_big(wide))
    }

    /// Complex conjugation, `zeta -> zeta^{m-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit modulo every m")
    }

    /// `self * conj(self)`, i.e. |self|^2 under every embedding.
    pub fn norm_sq(&self) -> Self {
        self.checked_mul(&self.conj()).expect("same ring")
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Maps into Z[zeta_M] for a multiple M of m via zeta_m = zeta_M^{M/m}.
    pub fn embed(&self, target: &Arc<CyclotomicRing>) -> Result<Self> {
        if target.m % self.ring.m != 0 {
            return Err(Error::RingMismatch { left: self.ring.m, right: target.m });
        }
        let step = (target.m / self.ring.m) as usize;
        let mut wide = vec![BigInt::zero(); target.m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            wide[i * step] = c.clone();
        }
        Ok(target.build_big(wide))
    }

    /// Largest absolute coefficient, useful for sizing diagnostics.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

fn convolve_small(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = out[i + j].checked_add(x.checked_mul(y)?)?;
            }
        }
    }
    Some(out)
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring.m == other.ring.m && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicInt {}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: Self) -> CyclotomicInt {
        self.checked_add(rhs).expect("cyclotomic ring mismatch")
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: Self) -> CyclotomicInt {
        self.checked_sub(rhs).expect("cyclotomic ring mismatch")
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: Self) -> CyclotomicInt {
        self.checked_mul(rhs).expect("cyclotomic ring mismatch")
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.ring.m)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CyclotomicInt {
    type Err = Error;

    /// Parses the `m:[c0,c1,...]` form produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed cyclotomic integer {s:?}"));
        let (m, rest) = s.split_once(':').ok_or_else(bad)?;
        let m: u32 = m.trim().parse().map_err(|_| bad())?;
        let body = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let ring = CyclotomicRing::new(m)?;
        let coeffs: Vec<BigInt> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',').map(|c| c.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        if coeffs.len() != ring.phi {
            return Err(bad());
        }
        let wide = coeffs;
        Ok(ring.build_big(wide))
    }
}

impl Serialize for CyclotomicInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CyclotomicInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `1` if the value is a positive rational, `-1` if negative, else `None`.
pub fn rational_sign(x: &CyclotomicInt) -> Option<i8> {
    x.as_rational().map(|n| if n.is_positive() { 1 } else if n.is_negative() { -1 } else { 0 })
}

/// Convenience: `BigInt` from a `u64`.
pub fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `true` when `x` is exactly `1`.
pub fn is_one(x: &CyclotomicInt) -> bool {
    x.as_rational().is_some_and(|n| n.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(r: &Arc<CyclotomicRing>, v: &[i64]) -> CyclotomicInt {
        r.from_power_counts(v)
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(CyclotomicRing::new(1).unwrap().cyclotomic_poly(), &[-1, 1]);
        assert_eq!(CyclotomicRing::new(4).unwrap().cyclotomic_poly(), &[1, 0, 1]);
        let r12 = CyclotomicRing::new(12).unwrap();
        assert_eq!(r12.cyclotomic_poly(), &[1, 0, -1, 0, 1]);
        assert_eq!(r12.phi(), 4);
        // Phi_105 is the first with a coefficient of absolute value 2.
        let r105 = CyclotomicRing::new(105).unwrap();
        assert_eq!(r105.phi(), 48);
        assert_eq!(r105.cyclotomic_poly()[7], -2);
        assert!(matches!(CyclotomicRing::new(10_001), Err(Error::ConductorCapExceeded { .. })));
    }

    #[test]
    fn root_of_unity_identities() {
        let r4 = CyclotomicRing::new(4).unwrap();
        let z = r4.zeta_pow(1);
        assert_eq!(&z * &z, r4.from_int(-1));

        let r3 = CyclotomicRing::new(3).unwrap();
        let z3 = r3.zeta_pow(1);
        assert_eq!(z3.conj(), r3.zeta_pow(2));
        assert_eq!(r3.zeta_pow(2), ints(&r3, &[-1, -1]));
        let s = &(&z3 + &r3.zeta_pow(2)) + &r3.one();
        assert!(s.is_zero());
    }

    #[test]
    fn rational_detection() {
        let r12 = CyclotomicRing::new(12).unwrap();
        assert_eq!(r12.from_int(3).as_rational(), Some(BigInt::from(3)));
        let r4 = CyclotomicRing::new(4).unwrap();
        assert_eq!(r4.zeta_pow(1).as_rational(), None);
        let r3 = CyclotomicRing::new(3).unwrap();
        assert_eq!((&r3.zeta_pow(1) + &r3.zeta_pow(2)).as_rational(), Some(BigInt::from(-1)));
    }

    #[test]
    fn zeta_order_and_vanishing_sums() {
        for m in [1u32, 2, 3, 5, 9, 12, 15, 21] {
            let r = CyclotomicRing::new(m).unwrap();
            assert!(is_one(&r.zeta_pow(1).pow(m as u64)));
            for p in arith::prime_factors(m as u64) {
                let step = (m as u64 / p) as i64;
                let total = (0..p as i64)
                    .map(|j| r.zeta_pow(j * step))
                    .fold(r.zero(), |acc, z| &acc + &z);
                assert!(total.is_zero(), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = CyclotomicRing::new(3).unwrap().one();
        let b = CyclotomicRing::new(4).unwrap().one();
        assert!(matches!(a.checked_mul(&b), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn embedding_scales_exponents() {
        let r3 = CyclotomicRing::new(3).unwrap();
        let r12 = CyclotomicRing::new(12).unwrap();
        assert_eq!(r3.zeta_pow(1).embed(&r12).unwrap(), r12.zeta_pow(4));
        assert!(r12.one().embed(&r3).is_err());
    }

    #[test]
    fn big_coefficients_survive() {
        let r = CyclotomicRing::new(5).unwrap();
        let x = &r.zeta_pow(1) + &r.from_int(3);
        let big_pow = x.pow(200);
        let halves = &x.pow(100) * &x.pow(100);
        assert_eq!(big_pow, halves);
        assert!(big_pow.height().bits() > 128);
    }

    #[test]
    fn text_form_round_trips() {
        let r = CyclotomicRing::new(12).unwrap();
        let x = ints(&r, &[1, -2, 0, 5, 7, 0, 0, 0, 0, 0, 0, 3]);
        let text = x.to_string();
        assert!(text.starts_with("12:["));
        assert_eq!(text.parse::<CyclotomicInt>().unwrap(), x);
    }

    fn element(m: u32) -> impl Strategy<Value = CyclotomicInt> {
        proptest::collection::vec(-20i64..20, m as usize)
            .prop_map(move |v| CyclotomicRing::new(m).unwrap().from_power_counts(&v))
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(
            a in element(15), b in element(15), c in element(15)
        ) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn norm_is_conjugation_invariant(a in element(12)) {
            let n = a.norm_sq();
            prop_assert_eq!(n.conj(), n);
        }

        #[test]
        fn galois_action_is_a_ring_map(a in element(20), b in element(20), k in prop::sample::select(vec![1i64, 3, 7, 9, 11, 13, 17, 19])) {
            prop_assert_eq!((&a * &b).galois(k).unwrap(), &a.galois(k).unwrap() * &b.galois(k).unwrap());
        }
    }
}
