use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CycField, CycScalar, ExactError};

/// Integer Laurent polynomial in `q`, stored sparsely without zero terms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    /// `q^n - q^-n`.
    pub fn q_diff(n: i64) -> Self {
        Self::monomial(1, n) - Self::monomial(1, -n)
    }

    fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `q -> q^k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * k, c.clone())))
    }

    /// Exact division in `Z[q, q^-1]`. Fails with the partial quotient and
    /// remainder when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Long division from the top degree; stop once the remainder's span
        // can no longer contain the divisor.
        let dmin = other.min_exp().unwrap();
        let dmax = other.max_exp().unwrap();
        let lead = &other.terms[&dmax];
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let floor = self.min_exp().unwrap() - dmin;
        while let Some(top) = rem.max_exp() {
            let shift = top - dmax;
            if shift < floor {
                break;
            }
            let (q, r) = rem.terms[&top].div_rem(lead);
            if !r.is_zero() {
                break;
            }
            for (e, c) in &other.terms {
                rem.add_term(e + shift, &(-(&q * c)));
            }
            quot.add_term(shift, &q);
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(ExactError::InexactDivision {
                quotient: quot,
                remainder: rem,
            })
        }
    }

    /// Evaluates at `q = zeta^power` in `Q(zeta_ell)`.
    pub fn specialize(&self, field: &Arc<CycField>, power: i64) -> CycScalar {
        let ell = field.ell() as i64;
        let mut acc = vec![BigInt::zero(); ell as usize];
        for (e, c) in &self.terms {
            acc[(e * power).rem_euclid(ell) as usize] += c;
        }
        field.reduce(acc, BigInt::one())
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn fmt_terms(p: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, (e, c)) in p.terms.iter().rev().enumerate() {
        let mono = match *e {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{e}"),
        };
        let mag = c.abs();
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        match (i == 0, c.is_negative()) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
    }
    Ok(())
}

/// Descending powers; a multi-term polynomial with negative leading
/// coefficient prints as `-(...)`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return write!(f, "0");
        };
        if self.terms.len() > 1 && lead.is_negative() {
            write!(f, "-(")?;
            fmt_terms(&-self, f)?;
            write!(f, ")")
        } else {
            fmt_terms(self, f)
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::cyclotomic_field;
    use proptest::prelude::*;

    fn q(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, e)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&q(1) - &q(-1)) * &(&q(1) + &q(-1));
        assert_eq!(lhs, &q(2) - &q(-2));
    }

    #[test]
    fn telescoping_division() {
        let quot = LaurentPoly::q_diff(3).exact_div(&LaurentPoly::q_diff(1)).unwrap();
        assert_eq!(quot, &(&q(2) + &q(0)) + &q(-2));
    }

    #[test]
    fn inexact_division_reports_remainder() {
        let err = LaurentPoly::q_diff(2).exact_div(&LaurentPoly::q_diff(3)).unwrap_err();
        match err {
            ExactError::InexactDivision { remainder, .. } => assert!(!remainder.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
        let err = LaurentPoly::monomial(3, 0).exact_div(&LaurentPoly::monomial(2, 0));
        assert!(err.is_err());
    }

    #[test]
    fn specialization() {
        let k = cyclotomic_field(5).unwrap();
        assert_eq!((&q(1) + &q(-1)).specialize(&k, 1), k.zeta_pow(1) + k.zeta_pow(-1));
        assert!(q(5).specialize(&k, 1).is_one());
        // [5]_q = (q^5 - q^-5)/(q - q^-1) vanishes at a primitive 5th root
        let five = LaurentPoly::q_diff(5).exact_div(&LaurentPoly::q_diff(1)).unwrap();
        assert!(five.specialize(&k, 1).is_zero());
        assert!(five.specialize(&k, 2).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!((&q(1) + &q(-1)).to_string(), "q + q^-1");
        let p = -(&(&(&q(3) + &q(1)) + &q(-1)) + &q(-3));
        assert_eq!(p.to_string(), "-(q^3 + q + q^-1 + q^-3)");
        assert_eq!(LaurentPoly::monomial(-2, 0).to_string(), "-2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!((&q(2) - &LaurentPoly::monomial(3, -1)).to_string(), "q^2 - 3*q^-1");
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i64..6, -4i64..5), 0..5).prop_map(|ts| {
            LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn specialize_is_ring_homomorphism(a in arb_laurent(), b in arb_laurent(), ell in prop::sample::select(vec![3i64, 5, 7, 9]), power in 1i64..4) {
            let k = cyclotomic_field(ell).unwrap();
            prop_assert_eq!((&a * &b).specialize(&k, power), a.specialize(&k, power) * b.specialize(&k, power));
            prop_assert_eq!((&a + &b).specialize(&k, power), a.specialize(&k, power) + b.specialize(&k, power));
        }

        #[test]
        fn multiply_then_divide(a in arb_laurent(), b in arb_laurent()) {
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
            }
        }
    }
}
