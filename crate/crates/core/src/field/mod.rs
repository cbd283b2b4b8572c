//! Prime-power fields F_{p^s} for odd p.
//!
//! Elements are identified by their canonical index `sum c_i p^i`, where
//! `c_0 + c_1 x + ... + c_{s-1} x^{s-1}` is the reduced polynomial
//! representative. Multiplication goes through exp/log tables built once at
//! construction, so the field is immutable afterwards and can be shared freely.

mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Largest field (in elements) built by [`FiniteField::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// An element of a [`FiniteField`], stored as its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

const NO_LOG: u32 = u32::MAX;

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    abs_trace: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.descriptor())
    }
}

impl FiniteField {
    /// Builds F_{p^s} with the default size cap.
    pub fn new(p: u32, s: u32) -> Result<Self> {
        Self::with_cap(p, s, DEFAULT_FIELD_CAP)
    }

    /// Builds F_{p^s}. The modulus is the monic irreducible of degree `s`
    /// whose lower coefficients have the smallest canonical index, and the
    /// generator is the primitive element of smallest index.
    pub fn with_cap(p: u32, s: u32, cap: u64) -> Result<Self> {
        if !arith::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic(2));
        }
        if s == 0 {
            return Err(Error::Invalid("field degree must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(s)
            .filter(|&q| q <= cap && q <= u32::MAX as u64)
            .ok_or(Error::SizeCapExceeded { p: p as u64, s, cap })? as u32;

        let modulus = smallest_irreducible(p, s);
        let to_poly = |idx: u32| -> Vec<u32> { digits(idx, p, s) };
        let from_poly = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let order = q as u64 - 1;
        let factors = arith::prime_factors(order);
        let one = poly::rem(&[1], &modulus, p);
        let generator = (1..q)
            .find(|&idx| {
                let g = to_poly(idx);
                factors
                    .iter()
                    .all(|&f| poly::pow_mod(&g, order / f, &modulus, p) != one)
            })
            .expect("multiplicative group of a finite field is cyclic");

        let gpoly = to_poly(generator);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = one.clone();
        for k in 0..order as u32 {
            let idx = from_poly(&cur);
            exp.push(idx);
            log[idx as usize] = k;
            cur = poly::mul_mod(&cur, &gpoly, &modulus, p);
        }

        let mut field = FiniteField {
            p,
            s,
            q,
            modulus,
            generator: FieldElement(generator),
            exp,
            log,
            abs_trace: Vec::new(),
        };
        // The absolute trace is F_p-linear, so the traces of the power basis
        // determine the whole table.
        let basis_traces: Vec<u32> = (0..s)
            .map(|i| {
                let b = FieldElement(p.pow(i));
                let t = field.rel_trace(1, b).expect("1 divides s");
                t.0
            })
            .collect();
        field.abs_trace = (0..q)
            .map(|idx| {
                digits(idx, p, s)
                    .iter()
                    .zip(&basis_traces)
                    .map(|(&c, &t)| c as u64 * t as u64)
                    .sum::<u64>() as u32
                    % p
            })
            .collect();
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.s
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Canonical text form `p^s/modulus-coeffs/generator-index`.
    pub fn descriptor(&self) -> String {
        let coeffs: Vec<String> = self.modulus.iter().map(u32::to_string).collect();
        format!("{}^{}/{}/{}", self.p, self.s, coeffs.join(","), self.generator.0)
    }

    /// Human-readable modulus such as `x^2 + 1`.
    pub fn modulus_string(&self) -> String {
        poly_to_string(&self.modulus)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ElementOutOfRange { index: index as u64, q: self.q })
        }
    }

    /// Embeds the prime-field integer `n mod p`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0, self.p, self.s)
    }

    /// The element as a polynomial in the adjoined root, e.g. `2x + 1`.
    pub fn element_string(&self, a: FieldElement) -> String {
        poly_to_string(&self.coeffs(a))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.s as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Invalid(format!(
                "coefficient vector {coeffs:?} is not reduced for F_{}",
                self.q
            )));
        }
        Ok(FieldElement(coeffs.iter().rev().fold(0, |acc, &d| acc * self.p + d)))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.s == 1 {
            return FieldElement((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % (self.q as u64 - 1);
        FieldElement(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let k = (n - self.log[a.0 as usize]) % n;
        Ok(FieldElement(self.exp[k as usize]))
    }

    /// Square-and-multiply exponentiation; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `generator^k`, with `k` reduced modulo q - 1.
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    pub fn discrete_log(&self, x: FieldElement) -> Result<u32> {
        match self.log.get(x.0 as usize) {
            Some(&k) if k != NO_LOG => Ok(k),
            Some(_) => Err(Error::ZeroElement),
            None => Err(Error::ElementOutOfRange { index: x.0 as u64, q: self.q }),
        }
    }

    /// Frobenius power `x^(p^k)`.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        if x.0 == 0 {
            return x;
        }
        let n = self.q as u64 - 1;
        let e = arith::pow_mod(self.p as u64, k as u64, n);
        let l = self.log[x.0 as usize] as u64 * e % n;
        FieldElement(self.exp[l as usize])
    }

    fn check_divides(&self, k: u32) -> Result<()> {
        if k == 0 || self.s % k != 0 {
            Err(Error::DegreeNotDividing { k, s: self.s })
        } else {
            Ok(())
        }
    }

    /// Relative trace to the subfield F_{p^k}: `sum_{i < s/k} a^{(p^k)^i}`.
    pub fn rel_trace(&self, k: u32, a: FieldElement) -> Result<FieldElement> {
        self.check_divides(k)?;
        let mut acc = FieldElement::ZERO;
        let mut term = a;
        for _ in 0..self.s / k {
            acc = self.add(acc, term);
            term = self.frobenius(term, k);
        }
        Ok(acc)
    }

    /// Absolute trace as a residue in `0..p`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        self.abs_trace[a.0 as usize]
    }

    /// `{x^(p^r) - x : x in F_q}`, sorted by index.
    pub fn trace_kernel_image(&self, r: u32) -> Result<Vec<FieldElement>> {
        self.check_divides(r)?;
        let mut out: Vec<FieldElement> = self
            .elements()
            .map(|x| self.sub(self.frobenius(x, r), x))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// The subfield F_{p^k} as the fixed points of `x -> x^(p^k)`, sorted.
    pub fn subfield_elements(&self, k: u32) -> Result<Vec<FieldElement>> {
        self.check_divides(k)?;
        Ok(self.elements().filter(|&x| self.frobenius(x, k) == x).collect())
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64> {
        let l = self.discrete_log(x)? as u64;
        let n = self.q as u64 - 1;
        Ok(n / arith::gcd(n, l))
    }
}

/// Base-`p` digits of `idx`, least significant first, padded to `s`.
fn digits(mut idx: u32, p: u32, s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s as usize);
    for _ in 0..s {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn smallest_irreducible(p: u32, s: u32) -> Vec<u32> {
    let count = (p as u64).pow(s);
    (0..count)
        .map(|idx| {
            let mut f = digits(idx as u32, p, s);
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn poly_to_string(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
