use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, Rat};

/// The cyclotomic field `Q(zeta)` for a primitive `ell`-th root of unity,
/// `ell` odd. Elements are stored as polynomials of degree `< phi(ell)`
/// reduced modulo the cyclotomic polynomial, so equality is structural.
#[derive(Debug)]
pub struct CycField {
    ell: u32,
    phi: usize,
    modulus: Vec<BigInt>,
    /// `fold[k]` holds the coefficients of `x^k mod Phi_ell`, `0 <= k < ell`.
    fold: Vec<Vec<i64>>,
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// obtained by dividing `x^n - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = monic_exact_div(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn monic_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "cyclotomic division not exact");
    quot
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell
    }
}

impl Eq for CycField {}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();

/// Returns the shared field context for conductor `ell`.
pub fn cyclotomic_field(ell: i64) -> Result<Arc<CycField>, ExactError> {
    if ell < 3 || ell % 2 == 0 || ell > u32::MAX as i64 {
        return Err(ExactError::BadConductor(ell));
    }
    let ell = ell as u32;
    let mut map = FIELDS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("field registry poisoned");
    Ok(map
        .entry(ell)
        .or_insert_with(|| Arc::new(CycField::build(ell)))
        .clone())
}

impl CycField {
    fn build(ell: u32) -> Self {
        let modulus = cyclotomic_polynomial(ell);
        let phi = modulus.len() - 1;
        let low: Vec<i64> = modulus[..phi]
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic coefficient overflow"))
            .collect();
        let mut fold = Vec::with_capacity(ell as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..ell {
            fold.push(cur.clone());
            // multiply by x and reduce with x^phi = -sum low[i] x^i
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1] - top * low[i];
            }
            cur[0] = -top * low[0];
        }
        CycField {
            ell,
            phi,
            modulus,
            fold,
        }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Degree of the field over `Q`, i.e. Euler's `phi(ell)`.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> CycScalar {
        CycScalar {
            field: self.clone(),
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one(self: &Arc<Self>) -> CycScalar {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycScalar {
        self.from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(self: &Arc<Self>, n: BigInt) -> CycScalar {
        CycScalar::normalized(self.clone(), vec![n], BigInt::one())
    }

    pub fn from_rat(self: &Arc<Self>, r: &Rat) -> CycScalar {
        CycScalar::normalized(self.clone(), vec![r.numer().clone()], r.denom().clone())
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycScalar {
        let e = k.rem_euclid(self.ell as i64) as usize;
        let mut acc = vec![BigInt::zero(); self.ell as usize];
        acc[e] = BigInt::one();
        self.reduce(acc, BigInt::one())
    }

    /// Builds `sum acc[k] zeta^k / den` from a length-`ell` accumulator.
    pub(crate) fn reduce(self: &Arc<Self>, acc: Vec<BigInt>, den: BigInt) -> CycScalar {
        debug_assert_eq!(acc.len(), self.ell as usize);
        let mut out: Vec<BigInt> = acc[..self.phi].to_vec();
        for (k, c) in acc.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            for (o, f) in out.iter_mut().zip(&self.fold[k]) {
                if *f != 0 {
                    *o += c * *f;
                }
            }
        }
        CycScalar::normalized(self.clone(), out, den)
    }
}

/// An element of `Q(zeta_ell)`: `(sum num[i] zeta^i) / den` in lowest terms.
#[derive(Clone)]
pub struct CycScalar {
    field: Arc<CycField>,
    num: Vec<BigInt>,
    den: BigInt,
}

/// Builds the canonical element `sum poly[i] zeta^i` of `Q(zeta_ell)`.
pub fn cyc_make(ell: i64, poly: &[i64]) -> Result<CycScalar, ExactError> {
    let field = cyclotomic_field(ell)?;
    let mut acc = vec![BigInt::zero(); field.ell as usize];
    for (i, c) in poly.iter().enumerate() {
        acc[i % field.ell as usize] += *c;
    }
    Ok(field.reduce(acc, BigInt::one()))
}

impl CycScalar {
    fn normalized(field: Arc<CycField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        if num.is_empty() {
            return CycScalar {
                field,
                num,
                den: BigInt::one(),
            };
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in num.iter_mut() {
                    *c = &*c / &g;
                }
                den /= g;
            }
        }
        CycScalar { field, num, den }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn ell(&self) -> u32 {
        self.field.ell
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// The `phi(ell)` rational coefficients on `1, zeta, ..., zeta^(phi-1)`.
    pub fn coeffs(&self) -> Vec<Rat> {
        (0..self.field.phi)
            .map(|i| match self.num.get(i) {
                Some(c) => Rat::new(c.clone(), self.den.clone()),
                None => Rat::zero(),
            })
            .collect()
    }

    /// `Some(r)` when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rat> {
        match self.num.len() {
            0 => Some(Rat::zero()),
            1 => Some(Rat::new(self.num[0].clone(), self.den.clone())),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.field.ell == other.field.ell {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch(self.field.ell, other.field.ell))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let n = self.num.len().max(other.num.len());
        let mut out = vec![BigInt::zero(); n];
        if self.den == other.den {
            for (o, a) in out.iter_mut().zip(&self.num) {
                *o += a;
            }
            for (o, b) in out.iter_mut().zip(&other.num) {
                if negate {
                    *o -= b;
                } else {
                    *o += b;
                }
            }
            return Self::normalized(self.field.clone(), out, self.den.clone());
        }
        for (o, a) in out.iter_mut().zip(&self.num) {
            *o += a * &other.den;
        }
        for (o, b) in out.iter_mut().zip(&other.num) {
            let t = b * &self.den;
            if negate {
                *o -= t;
            } else {
                *o += t;
            }
        }
        Self::normalized(self.field.clone(), out, &self.den * &other.den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        if other.num.len() == 1 && other.den.is_one() && other.num[0].is_one() {
            return self.clone();
        }
        let ell = self.field.ell as usize;
        let mut acc = vec![BigInt::zero(); ell];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = if i + j >= ell { i + j - ell } else { i + j };
                acc[k] += a * b;
            }
        }
        self.field.reduce(acc, &self.den * &other.den)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial.
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let a: Vec<Rat> = self.coeffs();
        let m: Vec<Rat> = self
            .field
            .modulus
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let (mut r0, mut r1) = (trim(m.clone()), trim(a));
        let (mut s0, mut s1) = (Vec::<Rat>::new(), vec![Rat::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Phi_ell is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let (_, s) = poly_divrem(&s0, &trim(m));
        let s: Vec<Rat> = s.into_iter().map(|x| x / &c).collect();
        Ok(from_rat_coeffs(&self.field, &s))
    }

    /// `self^e`; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(result)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return self.field.zero();
        }
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * r.denom())
    }

    pub fn scale_int(&self, n: i64) -> Self {
        if n == 0 {
            return self.field.zero();
        }
        let num = self.num.iter().map(|c| c * n).collect();
        Self::normalized(self.field.clone(), num, self.den.clone())
    }
}

fn from_rat_coeffs(field: &Arc<CycField>, coeffs: &[Rat]) -> CycScalar {
    let mut den = BigInt::one();
    for c in coeffs {
        den = den.lcm(c.denom());
    }
    let mut acc = vec![BigInt::zero(); field.ell as usize];
    for (i, c) in coeffs.iter().enumerate() {
        acc[i] = c.numer() * (&den / c.denom());
    }
    field.reduce(acc, den)
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rat::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("division by zero polynomial");
    let mut quot = vec![Rat::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.ell == other.field.ell && self.num == other.num && self.den == other.den
    }
}

impl Eq for CycScalar {}

impl Hash for CycScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.ell.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                if let Err(e) = self.check(rhs) {
                    panic!("{e}");
                }
                $body(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycScalar, b| a.add_unchecked(b, false));
binop!(Sub, sub, |a: &CycScalar, b| a.add_unchecked(b, true));
binop!(Mul, mul, |a: &CycScalar, b| a.mul_unchecked(b));

/// Writes `sum c_i var^i` in ascending powers, e.g. `1/2 + z - 3*z^2`.
pub(crate) fn fmt_poly(coeffs: &[Rat], var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let mag = c.abs();
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        match (first, c.is_negative()) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(&self.coeffs(), "z", f)
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_ell={}", self, self.field.ell)
    }
}
