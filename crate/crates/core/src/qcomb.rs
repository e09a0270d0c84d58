//! q-integers, Gaussian binomials (symbolic and at the root of unity), the
//! short `ell`-adic decomposition and the carry formulas built on it.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{cyclotomic_field, CycScalar, ExactError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcombError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("symmetrizer d = {0} must be 1, 2 or 3")]
    BadSymmetrizer(i64),
    #[error("symmetrizer d = {d} is not coprime to ell = {ell}")]
    NotCoprime { d: i64, ell: i64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

/// `m = m0 + m1 * ell` with `0 <= m0 < ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LAdic {
    pub m0: i64,
    pub m1: i64,
}

pub fn short_ladic(m: i64, ell: i64) -> LAdic {
    debug_assert!(ell >= 3 && ell % 2 == 1, "ell must be odd and >= 3");
    LAdic {
        m0: m.rem_euclid(ell),
        m1: m.div_euclid(ell),
    }
}

/// The q-integer `[n] = (q^n - q^-n) / (q - q^-1)`.
pub fn q_integer(n: i64) -> LaurentPoly {
    LaurentPoly::q_diff(n)
        .exact_div(&LaurentPoly::q_diff(1))
        .expect("q-integer division is exact")
}

/// Gaussian binomial `[m over t]` by the product formula
/// `prod_{s=1..t} (q^(m-s+1) - q^-(m-s+1)) / (q^s - q^-s)`, valid for
/// negative `m` as well. Every partial product is itself a Gaussian
/// binomial, so each division step is exact.
pub fn gauss_binom(m: i64, t: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for s in 1..=t as i64 {
        let num = LaurentPoly::q_diff(m - s + 1);
        if num.is_zero() {
            return LaurentPoly::zero();
        }
        acc = (&acc * &num)
            .exact_div(&LaurentPoly::q_diff(s))
            .unwrap_or_else(|e| panic!("Gaussian binomial [{m} over {s}] not integral: {e}"));
    }
    acc
}

pub(crate) fn check_symmetrizer(ell: i64, d: i64) -> Result<(), QcombError> {
    if !(1..=3).contains(&d) {
        return Err(QcombError::BadSymmetrizer(d));
    }
    if ell % d == 0 && d != 1 {
        return Err(QcombError::NotCoprime { d, ell });
    }
    Ok(())
}

type BinomKey = (i64, u32, i64, i64);
static BINOM_AT: OnceLock<Mutex<HashMap<BinomKey, CycScalar>>> = OnceLock::new();

/// `[m over t]` specialized at `q = zeta^d`.
pub fn gauss_binom_at(m: i64, t: u32, ell: i64, d: i64) -> Result<CycScalar, QcombError> {
    let field = cyclotomic_field(ell)?;
    check_symmetrizer(ell, d)?;
    let cache = BINOM_AT.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (m, t, ell, d);
    if let Some(v) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = gauss_binom(m, t).specialize(&field, d);
    cache.lock().expect("cache poisoned").insert(key, v.clone());
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDir {
    Down,
    Up,
}

/// Closed-form value of `[m - c over ell]` (`Down`) or `[m + c over ell]`
/// (`Up`) at the root of unity, for `0 <= m < ell` and `c >= 0`.
pub fn binom_shift_eval(m: i64, c: i64, dir: ShiftDir, ell: i64) -> Result<i64, QcombError> {
    cyclotomic_field(ell)?;
    if !(0..ell).contains(&m) {
        return Err(QcombError::OutOfRange(format!("m = {m} not in [0, {ell})")));
    }
    if c < 0 {
        return Err(QcombError::OutOfRange(format!("c = {c} is negative")));
    }
    let LAdic { m0: c0, m1: c1 } = short_ladic(c, ell);
    Ok(match dir {
        ShiftDir::Down if m >= c0 => -c1,
        ShiftDir::Down => -(c1 + 1),
        ShiftDir::Up if m + c0 < ell => c1,
        ShiftDir::Up => c1 + 1,
    })
}

/// Ordinary binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The factored form `[a0 over c0]_zeta * binom(a1, c1)` of
/// `[a0 + a1 ell over c0 + c1 ell]` at `q = zeta^d`.
pub fn q_lucas(a0: i64, a1: i64, c0: i64, c1: i64, ell: i64, d: i64) -> Result<CycScalar, QcombError> {
    let field = cyclotomic_field(ell)?;
    check_symmetrizer(ell, d)?;
    if !(0..ell).contains(&a0) || !(0..ell).contains(&c0) || a1 < 0 || c1 < 0 {
        return Err(QcombError::OutOfRange(format!(
            "need 0 <= a0, c0 < {ell} and a1, c1 >= 0; got ({a0}, {a1}, {c0}, {c1})"
        )));
    }
    let restricted = gauss_binom_at(a0, c0 as u32, ell, d)?;
    Ok(&restricted * &field.from_bigint(binomial(a1 as u64, c1 as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(1, e)
    }

    #[test]
    fn ladic_examples() {
        assert_eq!(short_ladic(7, 5), LAdic { m0: 2, m1: 1 });
        assert_eq!(short_ladic(-7, 5), LAdic { m0: 3, m1: -2 });
        assert_eq!(short_ladic(0, 3), LAdic { m0: 0, m1: 0 });
    }

    #[test]
    fn binom_examples() {
        assert_eq!(gauss_binom(9, 0), LaurentPoly::one());
        assert_eq!(gauss_binom(-4, 0), LaurentPoly::one());
        assert_eq!(gauss_binom(2, 1), &q(1) + &q(-1));
        let four = &(&(&q(3) + &q(1)) + &q(-1)) + &q(-3);
        assert_eq!(gauss_binom(-2, 3), -four.clone());
        assert_eq!(gauss_binom(4, 3), four);
        assert!(gauss_binom(2, 3).is_zero());
    }

    #[test]
    fn specialized_examples() {
        let k = cyclotomic_field(5).unwrap();
        assert!(gauss_binom_at(7, 5, 5, 1).unwrap().is_one());
        assert_eq!(gauss_binom_at(10, 5, 5, 1).unwrap(), k.from_int(2));
        let expected = (&(&q(2) + &q(0)) + &q(-2)).specialize(&k, 1);
        assert_eq!(gauss_binom_at(3, 2, 5, 1).unwrap(), expected);
    }

    #[test]
    fn symmetrizer_checks() {
        assert_eq!(
            gauss_binom_at(3, 1, 9, 3).unwrap_err(),
            QcombError::NotCoprime { d: 3, ell: 9 }
        );
        assert!(gauss_binom_at(3, 1, 7, 3).is_ok());
        assert!(gauss_binom_at(3, 1, 9, 2).is_ok());
        assert_eq!(gauss_binom_at(3, 1, 5, 4).unwrap_err(), QcombError::BadSymmetrizer(4));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(binom_shift_eval(3, 7, ShiftDir::Down, 5).unwrap(), -1);
        assert_eq!(binom_shift_eval(1, 7, ShiftDir::Down, 5).unwrap(), -2);
        assert_eq!(binom_shift_eval(3, 7, ShiftDir::Up, 5).unwrap(), 2);
        assert!(binom_shift_eval(5, 1, ShiftDir::Up, 5).is_err());
        assert!(binom_shift_eval(-1, 1, ShiftDir::Up, 5).is_err());
    }

    #[test]
    fn lucas_examples() {
        let k = cyclotomic_field(5).unwrap();
        // [7 over 6] = [7 over 1] = [7] at zeta = [2] = zeta + zeta^-1
        let direct = gauss_binom_at(7, 6, 5, 1).unwrap();
        assert_eq!(direct, k.zeta_pow(1) + k.zeta_pow(-1));
        assert_eq!(q_lucas(2, 1, 1, 1, 5, 1).unwrap(), direct);
        assert_eq!(q_lucas(0, 3, 0, 1, 5, 1).unwrap(), k.from_int(3));
        assert!(q_lucas(1, 0, 2, 0, 5, 1).unwrap().is_zero());
        assert!(q_lucas(5, 0, 0, 0, 5, 1).is_err());
    }

    #[test]
    fn negation_identity() {
        for m in -8..=8i64 {
            for t in 0..=8u32 {
                let sign = if t % 2 == 0 { 1 } else { -1 };
                let rhs = &LaurentPoly::monomial(sign, 0) * &gauss_binom(-m + t as i64 - 1, t);
                assert_eq!(gauss_binom(m, t), rhs, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn pascal_recurrence() {
        // [m over t] = q^-t [m-1 over t] + q^(m-t) [m-1 over t-1]
        for m in 1..=10i64 {
            for t in 1..=m as u32 {
                let rhs = &gauss_binom(m - 1, t).shift(-(t as i64))
                    + &gauss_binom(m - 1, t - 1).shift(m - t as i64);
                assert_eq!(gauss_binom(m, t), rhs, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn binom_at_ell_is_carry() {
        for ell in [3i64, 5, 7] {
            let k = cyclotomic_field(ell).unwrap();
            for m in -3 * ell..=3 * ell {
                let v = gauss_binom_at(m, ell as u32, ell, 1).unwrap();
                assert_eq!(v, k.from_int(short_ladic(m, ell).m1), "ell={ell} m={m}");
            }
        }
    }

    #[test]
    fn ordinary_binomial() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }
}
