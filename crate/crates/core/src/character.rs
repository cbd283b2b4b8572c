//! Multiplicative characters pinned to the field generator, exact Gauss sums,
//! purity and supersingularity.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith;
use crate::cyclotomic::{CyclotomicInt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};

/// The character `g^k -> zeta_d^{j k}` of F_q*, extended by `chi(0) = 0`.
#[derive(Clone)]
pub struct Character {
    field: Arc<FiniteField>,
    d: u32,
    j: u32,
    ring: Arc<CyclotomicRing>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character({}, d={}, j={})", self.field.descriptor(), self.d, self.j)
    }
}

impl Character {
    pub fn new(field: &Arc<FiniteField>, d: u32, j: i64) -> Result<Self> {
        let q_minus_1 = field.order() - 1;
        if d < 2 || q_minus_1 % d != 0 {
            return Err(Error::OrderNotDividing { d, q_minus_1 });
        }
        Ok(Character {
            field: Arc::clone(field),
            d,
            j: j.rem_euclid(d as i64) as u32,
            ring: CyclotomicRing::new(d)?,
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// The `d` the character was built with (values live in Z[zeta_d]).
    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn base_power(&self) -> u32 {
        self.j
    }

    /// Exact order `d / gcd(d, j)`.
    pub fn order(&self) -> u32 {
        self.d / arith::gcd(self.d as u64, self.j as u64) as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    /// `chi^k`.
    pub fn power(&self, k: i64) -> Character {
        let j = (self.j as i64 * k.rem_euclid(self.d as i64)).rem_euclid(self.d as i64) as u32;
        Character { j, ..self.clone() }
    }

    /// The exponent `e` with `chi(a) = zeta_d^e`, or `None` at zero.
    pub fn exponent(&self, a: FieldElement) -> Option<u32> {
        let k = self.field.discrete_log(a).ok()?;
        Some(((self.j as u64 * k as u64) % self.d as u64) as u32)
    }

    pub fn eval(&self, a: FieldElement) -> CyclotomicInt {
        match self.exponent(a) {
            Some(e) => self.ring.zeta_pow(e as i64),
            None => self.ring.zero(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussSumValue {
    pub value: CyclotomicInt,
    pub q: u32,
    /// `Some(+1 | -1)` when q is a square and the value is `+-sqrt(q)`.
    pub normalized_sign: Option<i8>,
}

/// `sum_c chi(c) zeta_p^{Tr(b c)}` in Z[zeta_{lcm(p, d)}].
///
/// The trivial character is taken to be 1 on all of F_q here, so its Gauss
/// sum with `b != 0` is 0 (as opposed to `chi(0) = 0` in [`Character::eval`]).
pub fn gauss_sum(chi: &Character, b: FieldElement) -> Result<GaussSumValue> {
    let field = chi.field();
    let p = field.characteristic();
    let d = chi.modulus();
    let m = arith::lcm(p as u64, d as u64) as u32;
    let ring = CyclotomicRing::new(m)?;
    let (sp, sd) = (m / p, m / d);
    let mut counts = vec![0i64; m as usize];
    for c in field.elements() {
        let additive = field.trace(field.mul(b, c)) * sp;
        let mult = match chi.exponent(c) {
            Some(e) => e * sd,
            None if chi.is_trivial() => 0,
            None => continue,
        };
        counts[((additive + mult) % m) as usize] += 1;
    }
    let value = ring.from_power_counts(&counts);
    let q = field.order();
    let normalized_sign = arith::exact_sqrt(q as u64).and_then(|r| {
        let v = value.as_rational()?;
        if v == BigInt::from(r) {
            Some(1)
        } else if v == -BigInt::from(r) {
            Some(-1)
        } else {
            None
        }
    });
    Ok(GaussSumValue { value, q, normalized_sign })
}

/// Outcome of the purity test. When pure, `G^2 / q = sign * zeta_m^k` and
/// `exponent` is the least `n >= 1` with `G^n` rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Purity {
    pub pure: bool,
    pub exponent: Option<u64>,
    pub unit: Option<(i8, u32)>,
}

/// Decides whether some nonzero power of `G(chi)` is rational.
///
/// `u = G^2 / q` has absolute value 1 under every embedding. It is a root of
/// unity iff it is an algebraic integer (Kronecker), i.e. iff q divides every
/// coefficient of `G^2` in the integral power basis.
pub fn is_pure(chi: &Character) -> Result<Purity> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let g = gauss_sum(chi, FieldElement::ONE)?.value;
    let ring = Arc::clone(g.ring());
    let m = ring.conductor() as u64;
    let q = BigInt::from(chi.field().order());
    let Some(u) = (&g * &g).exact_div_int(&q) else {
        return Ok(Purity { pure: false, exponent: None, unit: None });
    };
    debug_assert!(crate::cyclotomic::is_one(&u.norm_sq()));
    for k in 0..m {
        let z = ring.zeta_pow(k as i64);
        let sign = if u == z {
            1
        } else if u == -&z {
            -1
        } else {
            continue;
        };
        // u = zeta_{2m}^{k'}
        let k2 = (2 * k + if sign < 0 { m } else { 0 }) % (2 * m);
        let order = 2 * m / arith::gcd(2 * m, k2);
        return Ok(Purity { pure: true, exponent: Some(order), unit: Some((sign, k as u32)) });
    }
    Err(Error::Invalid(format!("G^2/q for {chi:?} is integral but not a root of unity")))
}

/// Least `t >= 1` with `p^t = -1 (mod d)`, if any.
pub fn is_supersingular(p: u32, d: u32) -> Result<Option<u32>> {
    if d < 2 {
        return Err(Error::Invalid(format!("character order must exceed 1, got {d}")));
    }
    if arith::gcd(p as u64, d as u64) != 1 {
        return Err(Error::NotCoprime { p, d });
    }
    let ord = arith::multiplicative_order(p as u64, d as u64);
    Ok((1..=ord)
        .find(|&t| arith::pow_mod(p as u64, t, d as u64) == d as u64 - 1)
        .map(|t| t as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FiniteField> {
        Arc::new(FiniteField::new(3, 2).unwrap())
    }

    #[test]
    fn character_values_over_f9() {
        let f = f9();
        let eta = Character::new(&f, 2, 1).unwrap();
        assert_eq!(eta.eval(f.element(2).unwrap()).as_rational(), Some(1.into()));
        assert_eq!(eta.eval(f.exp(2)).as_rational(), Some(1.into()));
        assert_eq!(eta.eval(f.exp(3)).as_rational(), Some((-1).into()));
        let chi = Character::new(&f, 4, 1).unwrap();
        assert_eq!(chi.eval(f.generator()), chi.ring().zeta_pow(1));
        assert!(chi.eval(FieldElement::ZERO).is_zero());
        let triv = Character::new(&f, 4, 0).unwrap();
        assert!(f.nonzero_elements().all(|a| crate::cyclotomic::is_one(&triv.eval(a))));
        assert!(matches!(Character::new(&f, 3, 1), Err(Error::OrderNotDividing { .. })));
    }

    #[test]
    fn small_gauss_sums() {
        let f = f9();
        let g2 = gauss_sum(&Character::new(&f, 2, 1).unwrap(), FieldElement::ONE).unwrap();
        assert_eq!(g2.value.as_rational(), Some(3.into()));
        assert_eq!(g2.normalized_sign, Some(1));
        let g4 = gauss_sum(&Character::new(&f, 4, 1).unwrap(), FieldElement::ONE).unwrap();
        assert_eq!(g4.value.as_rational(), Some((-3).into()));
        assert_eq!(g4.normalized_sign, Some(-1));
        let g0 = gauss_sum(&Character::new(&f, 4, 0).unwrap(), FieldElement::ONE).unwrap();
        assert!(g0.value.is_zero());
    }

    #[test]
    fn absolute_value_is_sqrt_q() {
        for (p, s) in [(3, 2), (5, 2), (7, 1), (3, 3), (13, 1)] {
            let f = Arc::new(FiniteField::new(p, s).unwrap());
            let q = f.order();
            for d in arith::divisors(q as u64 - 1).into_iter().skip(1) {
                for j in 1..d as i64 {
                    let chi = Character::new(&f, d as u32, j).unwrap();
                    for b in [FieldElement::ONE, f.generator()] {
                        let g = gauss_sum(&chi, b).unwrap().value;
                        assert_eq!(g.norm_sq().as_rational(), Some(q.into()), "q={q} d={d} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn purity_examples() {
        let f = f9();
        let quad = is_pure(&Character::new(&f, 2, 1).unwrap()).unwrap();
        assert_eq!(quad.exponent, Some(1));
        let quartic = is_pure(&Character::new(&f, 4, 1).unwrap()).unwrap();
        assert_eq!(quartic.exponent, Some(1));
        let f7 = Arc::new(FiniteField::new(7, 1).unwrap());
        // G = i sqrt(7): the square is rational, the first power is not.
        assert_eq!(is_pure(&Character::new(&f7, 2, 1).unwrap()).unwrap().exponent, Some(2));
        // Cubic characters of a prime field are never pure.
        assert!(!is_pure(&Character::new(&f7, 3, 1).unwrap()).unwrap().pure);
        assert!(matches!(is_pure(&Character::new(&f, 4, 0).unwrap()), Err(Error::TrivialCharacter)));
    }

    #[test]
    fn octic_over_f9_matches_literal_power() {
        let f = f9();
        let chi = Character::new(&f, 8, 1).unwrap();
        let verdict = is_pure(&chi).unwrap();
        let g = gauss_sum(&chi, FieldElement::ONE).unwrap().value;
        let m = g.conductor() as u64;
        assert_eq!(m, 24);
        let big = g.pow(2 * m);
        assert_eq!(big.as_rational().is_some(), verdict.pure);
    }

    #[test]
    fn supersingular_examples() {
        assert_eq!(is_supersingular(3, 4).unwrap(), Some(1));
        assert_eq!(is_supersingular(3, 8).unwrap(), None);
        assert_eq!(is_supersingular(7, 4).unwrap(), Some(1));
        assert_eq!(is_supersingular(2, 5).unwrap(), Some(2));
        assert!(matches!(is_supersingular(3, 6), Err(Error::NotCoprime { .. })));
    }
}
