//! The rank-1 Cartan part `kG[B]`, `B = (K; ell)`, with `K^ell = 1`.
//!
//! Elements are polynomials in `B` over the group algebra of `<K>`. They are
//! determined by their values on the integral weights (`K -> zeta^m`,
//! `B -> m1` where `m = m0 + m1 ell`), which is how shifted binomials
//! `[K; c over t]` and the shift endomorphisms are computed: sample, then
//! interpolate exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{cyclotomic_field, rat, rat_int, CycField, CycScalar, ExactError, ExactMatrix, Rat};
use crate::qcomb::{gauss_binom_at, short_ladic, QcombError};
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UZeroError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Qcomb(#[from] QcombError),
    #[error("interpolation check failed at m = {m}: degree bound {dmax} too small")]
    InterpolationMismatch { m: i64, dmax: u32 },
    #[error("element has B-degree {0}; only degree <= 1 lies in the coproduct span W")]
    OutsideSpan(u32),
}

/// Element of `U^0 = kG[B]` on the basis `K^c B^d`, `0 <= c < ell`.
#[derive(Clone, PartialEq, Eq)]
pub struct UZeroElem {
    field: Arc<CycField>,
    coeffs: BTreeMap<(u32, u32), CycScalar>,
}

impl UZeroElem {
    pub fn zero(field: &Arc<CycField>) -> Self {
        UZeroElem {
            field: field.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CycField>) -> Self {
        Self::monomial(field, 0, 0, field.one())
    }

    /// `coeff * K^c B^d`; `c` is reduced modulo `ell`.
    pub fn monomial(field: &Arc<CycField>, c: i64, d: u32, coeff: CycScalar) -> Self {
        let mut x = Self::zero(field);
        x.add_term(c.rem_euclid(field.ell() as i64) as u32, d, coeff);
        x
    }

    pub fn k_pow(field: &Arc<CycField>, c: i64) -> Self {
        Self::monomial(field, c, 0, field.one())
    }

    pub fn b(field: &Arc<CycField>) -> Self {
        Self::monomial(field, 0, 1, field.one())
    }

    pub fn scalar(c: CycScalar) -> Self {
        let field = c.field().clone();
        Self::monomial(&field, 0, 0, c)
    }

    fn add_term(&mut self, c: u32, d: u32, coeff: CycScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&(c, d)) {
            Some(x) => {
                *x = &*x + &coeff;
                if x.is_zero() {
                    self.coeffs.remove(&(c, d));
                }
            }
            None => {
                self.coeffs.insert((c, d), coeff);
            }
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn ell(&self) -> u32 {
        self.field.ell()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms `((c, d), coeff)` sorted by `(c, d)`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &CycScalar)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, c: u32, d: u32) -> CycScalar {
        self.coeffs.get(&(c, d)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Highest power of `B` present, `0` for the zero element.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|&(_, d)| d).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(c, d), x) in &other.coeffs {
            out.add_term(c, d, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UZeroElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let mut out = Self::zero(&self.field);
        for (&(c, d), x) in &self.coeffs {
            out.add_term(c, d, x * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ell = self.field.ell();
        let mut out = Self::zero(&self.field);
        for (&(c1, d1), x) in &self.coeffs {
            for (&(c2, d2), y) in &other.coeffs {
                out.add_term((c1 + c2) % ell, d1 + d2, x * y);
            }
        }
        out
    }

    /// Value at the character `K -> zeta^lam0`, `B -> lam1`.
    pub fn eval_at(&self, lam0: i64, lam1: &Rat) -> CycScalar {
        let mut acc = self.field.zero();
        let mut powers: Vec<Rat> = vec![Rat::one()];
        for (&(c, d), x) in &self.coeffs {
            while powers.len() <= d as usize {
                let next = powers.last().unwrap() * lam1;
                powers.push(next);
            }
            let p = &powers[d as usize];
            if p.is_zero() {
                continue;
            }
            let term = x * &self.field.zeta_pow(c as i64 * lam0);
            acc = acc + term.scale(p);
        }
        acc
    }

    /// Value at the integral weight `m`.
    pub fn eval(&self, m: i64) -> CycScalar {
        let s = short_ladic(m, self.field.ell() as i64);
        self.eval_at(s.m0, &rat_int(s.m1))
    }

    /// Value at a rank-1 weight.
    pub fn eval_weight(&self, w: &Weight) -> CycScalar {
        self.eval_at(w.lam0()[0], &w.lam1()[0])
    }

    /// The unique element of `B`-degree at most `dmax` whose value at each
    /// sample `m = m0 + ell m1`, `0 <= m1 <= dmax`, is `values(m)`. With
    /// `check`, the row `m1 = dmax + 1` is compared as well and a mismatch
    /// is reported.
    pub fn interpolate(
        field: &Arc<CycField>,
        values: impl Fn(i64) -> CycScalar,
        dmax: u32,
        check: bool,
    ) -> Result<Self, UZeroError> {
        let ell = field.ell() as i64;
        let inv_ell = field.from_rat(&rat(1, ell));
        let conj: Vec<CycScalar> = (0..ell).map(|k| field.zeta_pow(-k)).collect();
        // per_c[c][r] = coefficient of K^c in the row m1 = r
        let mut per_c: Vec<Vec<CycScalar>> = vec![Vec::with_capacity(dmax as usize + 1); ell as usize];
        for r in 0..=dmax as i64 {
            let row: Vec<CycScalar> = (0..ell).map(|m0| values(m0 + ell * r)).collect();
            for c in 0..ell {
                let mut acc = field.zero();
                for (m0, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        acc = acc + v * &conj[((c * m0 as i64) % ell) as usize];
                    }
                }
                per_c[c as usize].push(&acc * &inv_ell);
            }
        }
        let basis = falling_to_monomial(dmax);
        let mut out = Self::zero(field);
        for (c, samples) in per_c.into_iter().enumerate() {
            for (k, diff) in forward_differences(samples).into_iter().enumerate() {
                if diff.is_zero() {
                    continue;
                }
                for (j, coef) in basis[k].iter().enumerate() {
                    if !coef.is_zero() {
                        out.add_term(c as u32, j as u32, diff.scale(coef));
                    }
                }
            }
        }
        if check {
            let r = dmax as i64 + 1;
            for m0 in 0..ell {
                let m = m0 + ell * r;
                if out.eval(m) != values(m) {
                    return Err(UZeroError::InterpolationMismatch { m, dmax });
                }
            }
        }
        Ok(out)
    }

    /// The shift endomorphism `sigma_s`: `sigma_s(x)(m) = x(m + 2s)`, so that
    /// `x F^(s) = F^(s) sigma_{-s}(x)` and `x E^(s) = E^(s) sigma_s(x)`.
    pub fn shift(&self, s: i64) -> Self {
        if s == 0 || self.is_zero() {
            return self.clone();
        }
        Self::interpolate(&self.field, |m| self.eval(m + 2 * s), self.degree(), true)
            .expect("shift preserves the B-degree")
    }
}

/// `out[k] = Delta^k p(0)` for samples `p(0..=n)`.
fn forward_differences(mut v: Vec<CycScalar>) -> Vec<CycScalar> {
    let n = v.len();
    for k in 1..n {
        for i in (k..n).rev() {
            v[i] = &v[i] - &v[i - 1];
        }
    }
    v
}

/// Row `k` holds the monomial coefficients of `binom(x, k)`.
fn falling_to_monomial(n: u32) -> Vec<Vec<Rat>> {
    let mut rows = Vec::new();
    let mut poly = vec![Rat::one()];
    for k in 0..=n as i64 {
        if k > 0 {
            // poly *= (x - (k-1)) / k
            let mut next = vec![Rat::zero(); poly.len() + 1];
            for (j, a) in poly.iter().enumerate() {
                next[j + 1] += a;
                next[j] -= a * rat_int(k - 1);
            }
            poly = next.into_iter().map(|a| a / rat_int(k)).collect();
        }
        rows.push(poly.clone());
    }
    rows
}

type KShiftKey = (u32, i64, u32);
static KSHIFT: OnceLock<Mutex<HashMap<KShiftKey, UZeroElem>>> = OnceLock::new();

/// `[K; c over t]` at the root of unity: the element whose value at every
/// integer `m` is `[m + c over t]_zeta`. Its `B`-degree is at most
/// `floor(t / ell)`; the extra interpolation row enforces that bound.
pub fn kshift_binom(ell: i64, c: i64, t: u32) -> Result<UZeroElem, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let cache = KSHIFT.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (field.ell(), c, t);
    if let Some(x) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(x.clone());
    }
    let dmax = t / field.ell();
    // values are needed on a small grid; precompute so errors surface here
    let grid: Vec<CycScalar> = (0..ell * (dmax as i64 + 2))
        .map(|m| gauss_binom_at(m + c, t, ell, 1))
        .collect::<Result<_, _>>()?;
    let x = UZeroElem::interpolate(&field, |m| grid[m as usize].clone(), dmax, true)?;
    cache.lock().expect("cache poisoned").insert(key, x.clone());
    Ok(x)
}

/// Right-hand side of the expansion of `[K; -c over ell]` in terms of
/// `K^s [K; 0 over ell - s]`, `c >= 0`.
pub fn kshift_expansion_minus(ell: i64, c: i64) -> Result<UZeroElem, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let mut out = UZeroElem::zero(&field);
    for s in 0..=ell {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let coeff = field.zeta_pow(c * (ell - s)).scale_int(sign) * gauss_binom_at(c + s - 1, s as u32, ell, 1)?;
        let term = UZeroElem::k_pow(&field, s).mul(&kshift_binom(ell, 0, (ell - s) as u32)?);
        out = out.add(&term.scale(&coeff));
    }
    Ok(out)
}

/// Right-hand side of the expansion of `[K; c over ell]` in terms of
/// `K^-s [K; 0 over ell - s]`, `c >= 0`.
pub fn kshift_expansion_plus(ell: i64, c: i64) -> Result<UZeroElem, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let mut out = UZeroElem::zero(&field);
    for s in 0..=ell {
        let coeff = field.zeta_pow(c * (ell - s)) * gauss_binom_at(c, s as u32, ell, 1)?;
        let term = UZeroElem::k_pow(&field, -s).mul(&kshift_binom(ell, 0, (ell - s) as u32)?);
        out = out.add(&term.scale(&coeff));
    }
    Ok(out)
}

/// Both sides of the scalar identity
/// `[m - c over ell] = sum_s (-1)^s zeta^(ell c + s(m - c)) [c+s-1 over s] [m over ell-s]`.
pub fn scalar_identity_minus(ell: i64, m: i64, c: i64) -> Result<(CycScalar, CycScalar), UZeroError> {
    let field = cyclotomic_field(ell)?;
    let lhs = gauss_binom_at(m - c, ell as u32, ell, 1)?;
    let mut rhs = field.zero();
    for s in 0..=ell {
        let sign = if s % 2 == 0 { 1 } else { -1 };
        let t = field.zeta_pow(ell * c + s * (m - c)).scale_int(sign)
            * gauss_binom_at(c + s - 1, s as u32, ell, 1)?
            * gauss_binom_at(m, (ell - s) as u32, ell, 1)?;
        rhs = rhs + t;
    }
    Ok((lhs, rhs))
}

/// Both sides of the scalar identity
/// `[m + c over ell] = sum_s zeta^(ell c - s(m + c)) [c over s] [m over ell-s]`,
/// the value of the `[K; c over ell]` expansion at `K = zeta^m`.
pub fn scalar_identity_plus(ell: i64, m: i64, c: i64) -> Result<(CycScalar, CycScalar), UZeroError> {
    let field = cyclotomic_field(ell)?;
    let lhs = gauss_binom_at(m + c, ell as u32, ell, 1)?;
    let mut rhs = field.zero();
    for s in 0..=ell {
        let t = field.zeta_pow(ell * c - s * (m + c))
            * gauss_binom_at(c, s as u32, ell, 1)?
            * gauss_binom_at(m, (ell - s) as u32, ell, 1)?;
        rhs = rhs + t;
    }
    Ok((lhs, rhs))
}

/// Element of `W (x) W`, where `W` is spanned by `K^c` and `K^c B`.
/// Basis index of `K^c B^e` in `W` is `c + ell e`.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorSq {
    field: Arc<CycField>,
    coeffs: Vec<CycScalar>,
}

impl TensorSq {
    pub fn zero(field: &Arc<CycField>) -> Self {
        let n = 2 * field.ell() as usize;
        TensorSq {
            field: field.clone(),
            coeffs: vec![field.zero(); n * n],
        }
    }

    fn dim_w(&self) -> usize {
        2 * self.field.ell() as usize
    }

    fn w_index(field: &Arc<CycField>, c: u32, d: u32) -> Result<usize, UZeroError> {
        if d > 1 {
            return Err(UZeroError::OutsideSpan(d));
        }
        Ok((c + field.ell() * d) as usize)
    }

    /// `x (x) y` for `x, y` in `W`.
    pub fn pure(x: &UZeroElem, y: &UZeroElem) -> Result<Self, UZeroError> {
        let mut out = Self::zero(&x.field);
        let n = out.dim_w();
        for (&(c1, d1), a) in &x.coeffs {
            let i = Self::w_index(&x.field, c1, d1)?;
            for (&(c2, d2), b) in &y.coeffs {
                let j = Self::w_index(&x.field, c2, d2)?;
                out.coeffs[i * n + j] = &out.coeffs[i * n + j] + &(a * b);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        TensorSq {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TensorSq {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        TensorSq {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycScalar::is_zero)
    }

    /// The flip `x (x) y -> y (x) x`.
    pub fn swap(&self) -> Self {
        let n = self.dim_w();
        let mut out = Self::zero(&self.field);
        for i in 0..n {
            for j in 0..n {
                out.coeffs[j * n + i] = self.coeffs[i * n + j].clone();
            }
        }
        out
    }

    /// Left multiplication by `K^c (x) K^c`.
    fn mul_grouplike(&self, c: u32) -> Self {
        let ell = self.field.ell();
        let n = self.dim_w();
        let mv = |i: usize| {
            let (ci, e) = (i as u32 % ell, i as u32 / ell);
            ((ci + c) % ell + ell * e) as usize
        };
        let mut out = Self::zero(&self.field);
        for i in 0..n {
            for j in 0..n {
                out.coeffs[mv(i) * n + mv(j)] = self.coeffs[i * n + j].clone();
            }
        }
        out
    }

    /// Value under `eval_m (x) eval_m2`.
    pub fn eval(&self, m: i64, m2: i64) -> CycScalar {
        let ell = self.field.ell();
        let n = self.dim_w();
        let basis_val = |i: usize, m: i64| {
            let (c, e) = (i as u32 % ell, i as u32 / ell);
            UZeroElem::monomial(&self.field, c as i64, e, self.field.one()).eval(m)
        };
        let mut acc = self.field.zero();
        for i in 0..n {
            for j in 0..n {
                let x = &self.coeffs[i * n + j];
                if !x.is_zero() {
                    acc = acc + x * &basis_val(i, m) * basis_val(j, m2);
                }
            }
        }
        acc
    }

    pub fn coeffs(&self) -> &[CycScalar] {
        &self.coeffs
    }
}

/// `Delta(B) = sum_{j=0}^{ell} (K; ell-j) K^-j (x) (K; j) K^(ell-j)`, with the
/// binomials of order `< ell` expanded in `kG`.
pub fn coproduct_b(ell: i64) -> Result<TensorSq, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let mut out = TensorSq::zero(&field);
    for j in 0..=ell {
        let left = kshift_binom(ell, 0, (ell - j) as u32)?.mul(&UZeroElem::k_pow(&field, -j));
        let right = kshift_binom(ell, 0, j as u32)?.mul(&UZeroElem::k_pow(&field, ell - j));
        out = out.add(&TensorSq::pure(&left, &right)?);
    }
    Ok(out)
}

/// Coproduct of an element of `W`: `K` is group-like and `Delta(K^c B)` is
/// `(K^c (x) K^c) Delta(B)`.
pub fn coproduct(x: &UZeroElem) -> Result<TensorSq, UZeroError> {
    let field = x.field.clone();
    let delta_b = coproduct_b(field.ell() as i64)?;
    let mut out = TensorSq::zero(&field);
    for (&(c, d), a) in &x.coeffs {
        let part = match d {
            0 => {
                let k = UZeroElem::k_pow(&field, c as i64);
                TensorSq::pure(&k, &k)?
            }
            1 => delta_b.mul_grouplike(c),
            _ => return Err(UZeroError::OutsideSpan(d)),
        };
        out = out.add(&part.scale(a));
    }
    Ok(out)
}

/// `Delta(x) - x (x) 1 - 1 (x) x`.
pub fn primitivity_residual(x: &UZeroElem) -> Result<TensorSq, UZeroError> {
    let one = UZeroElem::one(&x.field);
    Ok(coproduct(x)?
        .sub(&TensorSq::pure(x, &one)?)
        .sub(&TensorSq::pure(&one, x)?))
}

/// `a_i = (1/ell^2) sum_j j zeta^(-ij)`, `i = 0..ell`.
pub fn primitive_coefficients(ell: i64) -> Result<Vec<CycScalar>, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let scale = field.from_rat(&rat(1, ell * ell));
    Ok((0..ell)
        .map(|i| {
            let mut acc = field.zero();
            for j in 1..ell {
                acc = acc + field.zeta_pow(-i * j).scale_int(j);
            }
            &acc * &scale
        })
        .collect())
}

/// The primitive element `B + sum_i a_i K^i`.
pub fn primitive_element(ell: i64) -> Result<UZeroElem, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let mut p = UZeroElem::b(&field);
    for (i, a) in primitive_coefficients(ell)?.into_iter().enumerate() {
        p = p.add(&UZeroElem::monomial(&field, i as i64, 0, a));
    }
    Ok(p)
}

/// A basis of `{x in W : Delta(x) = x (x) 1 + 1 (x) x}`, from the kernel
/// of the linear map `x -> primitivity_residual(x)` on the `2 ell` basis
/// elements of `W`.
pub fn primitive_space(ell: i64) -> Result<Vec<UZeroElem>, UZeroError> {
    let field = cyclotomic_field(ell)?;
    let n = 2 * ell as usize;
    let basis: Vec<UZeroElem> = (0..n)
        .map(|i| UZeroElem::monomial(&field, (i % ell as usize) as i64, (i / ell as usize) as u32, field.one()))
        .collect();
    let columns: Vec<TensorSq> = basis.iter().map(primitivity_residual).collect::<Result<_, _>>()?;
    let m = ExactMatrix::from_fn(&field, n * n, n, |r, c| columns[c].coeffs[r].clone());
    Ok(m.kernel()
        .into_iter()
        .map(|v| {
            let mut x = UZeroElem::zero(&field);
            for (b, a) in basis.iter().zip(v) {
                x = x.add(&b.scale(&a));
            }
            x
        })
        .collect())
}

impl fmt::Display for UZeroElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&(c, d), x)| format!("({x})*K^{c}*B^{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorSq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim_w();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(k, x)| format!("({x})*w{}@w{}", k / n, k % n))
            .collect();
        write!(f, "TensorSq[{}]", parts.join(" + "))
    }
}

impl fmt::Debug for UZeroElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UZeroElem[{self}]")
    }
}
