//! Finite-dimensional weight modules for `U_zeta(sl2)`: restricted simples
//! `L(m0)`, Frobenius pullbacks of classical simples, their tensor
//! products, and exact structural computations on them (primitive vectors,
//! span-closure simplicity certificates, commutants, intertwiners and
//! annihilators in the restricted algebra `u_zeta`).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use thiserror::Error;

use crate::exactnum::{cyclotomic_field, rat_int, CycField, CycScalar, ExactError, ExactMatrix, Rat};
use crate::pbw::PBWElem;
use crate::qcomb::{binom_shift_eval, gauss_binom_at, ShiftDir};
use crate::uzero::{kshift_binom, UZeroElem, UZeroError};
use crate::weights::{CartanData, Weight, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepnError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    UZero(#[from] UZeroError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("relation fails: {0}")]
    Relation(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A module over `U_zeta(sl2)` with a basis of weight vectors. The six
/// matrices give the action of `E`, `F`, `K`, `E^(ell)`, `F^(ell)` and
/// `B = [K; 0 over ell]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightModule {
    field: Arc<CycField>,
    labels: Vec<Weight>,
    e: ExactMatrix,
    f: ExactMatrix,
    k: ExactMatrix,
    el: ExactMatrix,
    fl: ExactMatrix,
    b: ExactMatrix,
}

/// A module over the classical `U(sl2)` with rational matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalModule {
    e: Vec<Vec<Rat>>,
    f: Vec<Vec<Rat>>,
    h: Vec<Vec<Rat>>,
}

type Mat = Vec<Vec<Rat>>;

fn rat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rat::zero(); m]; n];
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * &b[k][j];
            }
        }
    }
    out
}

fn rat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

fn rat_scale(a: &Mat, c: i64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * rat_int(c)).collect()).collect()
}

impl ClassicalModule {
    /// Builds a module from rational `e`, `f`, `h`, checking the sl2
    /// relations and that `h` is diagonal with integer entries.
    pub fn new(e: Mat, f: Mat, h: Mat) -> Result<Self, RepnError> {
        let n = h.len();
        for (name, m) in [("e", &e), ("f", &f), ("h", &h)] {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(RepnError::Shape(format!("{name} is not {n} x {n}")));
            }
        }
        for (i, row) in h.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if (i != j && !x.is_zero()) || (i == j && !x.is_integer()) {
                    return Err(RepnError::Relation("h diagonal with integer eigenvalues".into()));
                }
            }
        }
        let comm = |x: &Mat, y: &Mat| rat_sub(&rat_mul(x, y), &rat_mul(y, x));
        if comm(&e, &f) != h {
            return Err(RepnError::Relation("[e, f] = h".into()));
        }
        if comm(&h, &e) != rat_scale(&e, 2) {
            return Err(RepnError::Relation("[h, e] = 2e".into()));
        }
        if comm(&h, &f) != rat_scale(&f, -2) {
            return Err(RepnError::Relation("[h, f] = -2f".into()));
        }
        Ok(ClassicalModule { e, f, h })
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn e(&self) -> &[Vec<Rat>] {
        &self.e
    }

    pub fn f(&self) -> &[Vec<Rat>] {
        &self.f
    }

    pub fn h(&self) -> &[Vec<Rat>] {
        &self.h
    }
}

/// The simple module of highest weight `p`: `h w_j = (p - 2j) w_j`,
/// `f w_j = (j + 1) w_{j+1}`, `e w_j = (p - j + 1) w_{j-1}`.
pub fn classical_simple(p: u32) -> ClassicalModule {
    let n = p as usize + 1;
    let mut e = vec![vec![Rat::zero(); n]; n];
    let mut f = vec![vec![Rat::zero(); n]; n];
    let mut h = vec![vec![Rat::zero(); n]; n];
    for j in 0..n {
        h[j][j] = rat_int(p as i64 - 2 * j as i64);
        if j + 1 < n {
            f[j + 1][j] = rat_int(j as i64 + 1);
        }
        if j > 0 {
            e[j - 1][j] = rat_int(p as i64 - j as i64 + 1);
        }
    }
    ClassicalModule::new(e, f, h).expect("standard sl2 module")
}

static DIVIDED_SCALAR: OnceLock<Mutex<HashMap<(u32, u32), CycScalar>>> = OnceLock::new();

/// The scalar `s` with `E^(t0) ... = E^t0 (E^(ell))^t1 = s E^(t)`, read off
/// from the normal form of the product.
fn divided_power_scalar(field: &Arc<CycField>, t: u32) -> CycScalar {
    let ell = field.ell();
    let cache = DIVIDED_SCALAR.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("cache poisoned").get(&(ell, t)) {
        return s.clone();
    }
    let prod = PBWElem::e(field)
        .pow(t % ell)
        .mul(&PBWElem::e_div(field, ell).pow(t / ell));
    let terms = prod.terms();
    assert!(
        terms.len() == 1 && (terms[0].b, terms[0].c, terms[0].d, terms[0].a) == (0, 0, 0, t),
        "E^t0 (E^(ell))^t1 is a multiple of E^(t)"
    );
    let s = terms[0].coeff.clone();
    cache.lock().expect("cache poisoned").insert((ell, t), s.clone());
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    /// `E`, `F`, `K`: generators of `u_zeta`.
    UZeta,
    /// All six generators.
    All,
}

impl WeightModule {
    /// Assembles a module and checks every defining relation as an exact
    /// matrix identity.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: &Arc<CycField>,
        labels: Vec<Weight>,
        e: ExactMatrix,
        f: ExactMatrix,
        k: ExactMatrix,
        el: ExactMatrix,
        fl: ExactMatrix,
        b: ExactMatrix,
    ) -> Result<Self, RepnError> {
        let m = WeightModule {
            field: field.clone(),
            labels,
            e,
            f,
            k,
            el,
            fl,
            b,
        };
        m.check_relations()?;
        Ok(m)
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn ell(&self) -> i64 {
        self.field.ell() as i64
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Weight] {
        &self.labels
    }

    pub fn e(&self) -> &ExactMatrix {
        &self.e
    }

    pub fn f(&self) -> &ExactMatrix {
        &self.f
    }

    pub fn k(&self) -> &ExactMatrix {
        &self.k
    }

    pub fn e_ell(&self) -> &ExactMatrix {
        &self.el
    }

    pub fn f_ell(&self) -> &ExactMatrix {
        &self.fl
    }

    pub fn b(&self) -> &ExactMatrix {
        &self.b
    }

    /// `(name, matrix)` for the generators in the subset.
    pub fn generators(&self, subset: Subset) -> Vec<(&'static str, &ExactMatrix)> {
        let mut g = vec![("E", &self.e), ("F", &self.f), ("K", &self.k)];
        if subset == Subset::All {
            g.extend([("E^(l)", &self.el), ("F^(l)", &self.fl), ("B", &self.b)]);
        }
        g
    }

    /// Diagonal action of a Cartan element through the weight labels.
    pub fn rep_of_uzero(&self, h: &UZeroElem) -> ExactMatrix {
        let diag: Vec<CycScalar> = self.labels.iter().map(|w| h.eval_weight(w)).collect();
        ExactMatrix::diagonal(&self.field, &diag)
    }

    fn divided(&self, base: &ExactMatrix, top: &ExactMatrix, t: u32) -> ExactMatrix {
        let ell = self.field.ell();
        let s = divided_power_scalar(&self.field, t);
        let m = &base.pow(t % ell) * &top.pow(t / ell);
        m.scale(&s.inv().expect("divided power scalar is nonzero"))
    }

    /// Action of `E^(t)`.
    pub fn e_div(&self, t: u32) -> ExactMatrix {
        self.divided(&self.e, &self.el, t)
    }

    /// Action of `F^(t)`.
    pub fn f_div(&self, t: u32) -> ExactMatrix {
        self.divided(&self.f, &self.fl, t)
    }

    /// Operator of a normal-form element.
    pub fn rep_of_pbw(&self, x: &PBWElem) -> ExactMatrix {
        let n = self.dim();
        let mut out = ExactMatrix::zeros(&self.field, n, n);
        for ((b, a), h) in x.parts() {
            let term = &(&self.f_div(b) * &self.rep_of_uzero(h)) * &self.e_div(a);
            out = &out + &term;
        }
        out
    }

    fn check_relations(&self) -> Result<(), RepnError> {
        let n = self.dim();
        let field = &self.field;
        let ell = self.ell();
        for (name, m) in self.generators(Subset::All) {
            if m.rows() != n || m.cols() != n || m.field().ell() != field.ell() {
                return Err(RepnError::Shape(format!("{name} is not {n} x {n} over the field")));
            }
        }
        for w in &self.labels {
            if w.cartan().rank() != 1 || w.cartan().ell() != ell {
                return Err(RepnError::Shape("labels must be rank-1 weights for this ell".into()));
            }
        }
        let check = |ok: bool, name: &str| {
            if ok {
                Ok(())
            } else {
                Err(RepnError::Relation(name.to_string()))
            }
        };
        let kdiag: Vec<CycScalar> = self.labels.iter().map(|w| field.zeta_pow(w.lam0()[0])).collect();
        check(self.k == ExactMatrix::diagonal(field, &kdiag), "K acts on each weight vector by zeta^lam0")?;
        let bdiag: Vec<CycScalar> = self.labels.iter().map(|w| field.from_rat(&w.lam1()[0])).collect();
        check(self.b == ExactMatrix::diagonal(field, &bdiag), "B acts on each weight vector by lam1")?;
        let id = ExactMatrix::identity(field, n);
        check(self.k.pow(ell as u32) == id, "K^ell = 1")?;
        let z2 = field.zeta_pow(2);
        let z2inv = field.zeta_pow(-2);
        check(&self.k * &self.e == (&self.e * &self.k).scale(&z2), "K E K^-1 = zeta^2 E")?;
        check(&self.k * &self.f == (&self.f * &self.k).scale(&z2inv), "K F K^-1 = zeta^-2 F")?;
        check(&self.k * &self.el == &self.el * &self.k, "K E^(l) = E^(l) K")?;
        check(&self.k * &self.fl == &self.fl * &self.k, "K F^(l) = F^(l) K")?;
        let comm = |x: &ExactMatrix, y: &ExactMatrix| &(x * y) - &(y * x);
        let rho = |c: i64, t: u32| -> Result<ExactMatrix, RepnError> { Ok(self.rep_of_uzero(&kshift_binom(ell, c, t)?)) };
        check(comm(&self.e, &self.f) == rho(0, 1)?, "E F - F E = [K; 0 over 1]")?;
        check(self.e.pow(ell as u32).is_zero(), "E^ell = 0")?;
        check(self.f.pow(ell as u32).is_zero(), "F^ell = 0")?;
        check(comm(&self.e, &self.el).is_zero(), "E E^(l) = E^(l) E")?;
        check(comm(&self.f, &self.fl).is_zero(), "F F^(l) = F^(l) F")?;
        for t in 1..=ell as u32 {
            let ft = self.f_div(t);
            let et = self.e_div(t);
            check(
                &self.b * &ft == &ft * &rho(-2 * t as i64, ell as u32)?,
                &format!("B F^({t}) = F^({t}) [K; {} over ell]", -2 * t as i64),
            )?;
            check(
                &self.b * &et == &et * &rho(2 * t as i64, ell as u32)?,
                &format!("B E^({t}) = E^({t}) [K; {} over ell]", 2 * t as i64),
            )?;
        }
        let l = ell as u32;
        check(
            comm(&self.el, &self.f) == &rho(1 - ell, 1)? * &self.e_div(l - 1),
            "E^(l) F - F E^(l) = [K; 1-ell over 1] E^(l-1)",
        )?;
        check(
            comm(&self.e, &self.fl) == &self.f_div(l - 1) * &rho(1 - ell, 1)?,
            "E F^(l) - F^(l) E = F^(l-1) [K; 1-ell over 1]",
        )?;
        let mut rhs = ExactMatrix::zeros(field, n, n);
        for t in 1..=l {
            let term = &(&self.f_div(l - t) * &rho(2 * t as i64 - 2 * ell, t)?) * &self.e_div(l - t);
            rhs = &rhs + &term;
        }
        check(comm(&self.el, &self.fl) == rhs, "E^(l) F^(l) - F^(l) E^(l) = sum_t F^(l-t) [K; 2t-2l over t] E^(l-t)")?;
        Ok(())
    }

    /// Groups basis indices by weight label, in order of first appearance.
    pub fn weight_blocks(&self) -> Vec<(Weight, Vec<usize>)> {
        let mut blocks: Vec<(Weight, Vec<usize>)> = Vec::new();
        for (i, w) in self.labels.iter().enumerate() {
            match blocks.iter_mut().find(|(v, _)| v == w) {
                Some((_, idx)) => idx.push(i),
                None => blocks.push((w.clone(), vec![i])),
            }
        }
        blocks
    }
}

fn sl2(ell: i64) -> Result<Arc<CartanData>, RepnError> {
    Ok(CartanData::sl2(ell)?)
}

/// `L(m0)`: basis `v_0..v_m0`, `K v_j = zeta^(m0-2j) v_j`,
/// `F v_j = [j+1] v_{j+1}`, `E v_j = [m0-j+1] v_{j-1}`, `E^(ell) = F^(ell) = 0`.
pub fn restricted_simple(m0: i64, ell: i64) -> Result<WeightModule, RepnError> {
    let field = cyclotomic_field(ell)?;
    if !(0..ell).contains(&m0) {
        return Err(RepnError::OutOfRange(format!("m0 = {m0} not in [0, {ell})")));
    }
    let cartan = sl2(ell)?;
    let n = m0 as usize + 1;
    let labels: Vec<Weight> = (0..n as i64)
        .map(|j| Weight::embed(&[m0 - 2 * j], &cartan))
        .collect::<Result<_, _>>()?;
    let qint = |k: i64| gauss_binom_at(k, 1, ell, 1);
    let mut e = ExactMatrix::zeros(&field, n, n);
    let mut f = ExactMatrix::zeros(&field, n, n);
    for j in 0..n {
        if j + 1 < n {
            f.set(j + 1, j, qint(j as i64 + 1).map_err(UZeroError::from)?);
        }
        if j > 0 {
            e.set(j - 1, j, qint(m0 - j as i64 + 1).map_err(UZeroError::from)?);
        }
    }
    let kdiag: Vec<CycScalar> = labels.iter().map(|w| field.zeta_pow(w.lam0()[0])).collect();
    let bdiag: Vec<CycScalar> = labels.iter().map(|w| field.from_rat(&w.lam1()[0])).collect();
    let zero = ExactMatrix::zeros(&field, n, n);
    WeightModule::new(
        &field,
        labels,
        e,
        f,
        ExactMatrix::diagonal(&field, &kdiag),
        zero.clone(),
        zero,
        ExactMatrix::diagonal(&field, &bdiag),
    )
}

fn to_cyc(field: &Arc<CycField>, m: &[Vec<Rat>]) -> ExactMatrix {
    let n = m.len();
    ExactMatrix::from_fn(field, n, n, |i, j| field.from_rat(&m[i][j]))
}

/// Pullback along the Frobenius: `E = F = 0`, `K = 1`, `E^(ell) = e`,
/// `F^(ell) = f`, `B = h`, with labels `(0, p - 2j)`.
pub fn frobenius_twist(v: &ClassicalModule, ell: i64) -> Result<WeightModule, RepnError> {
    let field = cyclotomic_field(ell)?;
    let cartan = sl2(ell)?;
    let n = v.dim();
    let labels: Vec<Weight> = (0..n)
        .map(|j| Weight::new(&cartan, vec![0], vec![v.h[j][j].clone()]))
        .collect::<Result<_, _>>()?;
    let zero = ExactMatrix::zeros(&field, n, n);
    WeightModule::new(
        &field,
        labels,
        zero.clone(),
        zero,
        ExactMatrix::identity(&field, n),
        to_cyc(&field, &v.e),
        to_cyc(&field, &v.f),
        to_cyc(&field, &v.h),
    )
}

fn check_tensor_factors(l: &WeightModule, v: &WeightModule) -> Result<(), RepnError> {
    if l.field.ell() != v.field.ell() {
        return Err(ExactError::FieldMismatch(l.field.ell(), v.field.ell()).into());
    }
    if !l.el.is_zero() || !l.fl.is_zero() {
        return Err(RepnError::Shape("restricted factor must have E^(l) = F^(l) = 0".into()));
    }
    let id = ExactMatrix::identity(&v.field, v.dim());
    if !v.e.is_zero() || !v.f.is_zero() || v.k != id {
        return Err(RepnError::Shape("twisted factor must have E = F = 0 and K = 1".into()));
    }
    Ok(())
}

/// `L (x) V^Fr` on the basis `v_i (x) w_k` (index `i * dim V + k`):
/// `K`, `E`, `F` act on the first factor, `E^(ell)`, `F^(ell)` on the
/// second, and `B` as `B (x) 1 + 1 (x) B`.
pub fn tensor_module(l: &WeightModule, v: &WeightModule) -> Result<WeightModule, RepnError> {
    check_tensor_factors(l, v)?;
    let il = ExactMatrix::identity(&l.field, l.dim());
    let iv = ExactMatrix::identity(&v.field, v.dim());
    let mut labels = Vec::with_capacity(l.dim() * v.dim());
    for wl in &l.labels {
        for wv in &v.labels {
            labels.push(wl.add(wv)?);
        }
    }
    WeightModule::new(
        &l.field,
        labels,
        l.e.kron(&iv),
        l.f.kron(&iv),
        l.k.kron(&iv),
        il.kron(&v.el),
        il.kron(&v.fl),
        &l.b.kron(&iv) + &il.kron(&v.b),
    )
}

/// The mirrored construction `V^Fr (x) L` (index `k * dim L + i`).
pub fn tensor_module_reversed(v: &WeightModule, l: &WeightModule) -> Result<WeightModule, RepnError> {
    check_tensor_factors(l, v)?;
    let il = ExactMatrix::identity(&l.field, l.dim());
    let iv = ExactMatrix::identity(&v.field, v.dim());
    let mut labels = Vec::with_capacity(l.dim() * v.dim());
    for wv in &v.labels {
        for wl in &l.labels {
            labels.push(wv.add(wl)?);
        }
    }
    WeightModule::new(
        &l.field,
        labels,
        iv.kron(&l.e),
        iv.kron(&l.f),
        iv.kron(&l.k),
        v.el.kron(&il),
        v.fl.kron(&il),
        &v.b.kron(&il) + &iv.kron(&l.b),
    )
}

fn block_diag(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let (n, m) = (a.rows(), b.rows());
    ExactMatrix::from_fn(a.field(), n + m, n + m, |i, j| {
        if i < n && j < n {
            a.get(i, j).clone()
        } else if i >= n && j >= n {
            b.get(i - n, j - n).clone()
        } else {
            a.field().zero()
        }
    })
}

/// `A (+) B`; used as a negative control for simplicity tests.
pub fn direct_sum(a: &WeightModule, b: &WeightModule) -> Result<WeightModule, RepnError> {
    if a.field.ell() != b.field.ell() {
        return Err(ExactError::FieldMismatch(a.field.ell(), b.field.ell()).into());
    }
    let labels = a.labels.iter().chain(&b.labels).cloned().collect();
    WeightModule::new(
        &a.field,
        labels,
        block_diag(&a.e, &b.e),
        block_diag(&a.f, &b.f),
        block_diag(&a.k, &b.k),
        block_diag(&a.el, &b.el),
        block_diag(&a.fl, &b.fl),
        block_diag(&a.b, &b.b),
    )
}

/// A growing subspace kept in row echelon form.
#[derive(Default)]
struct EchelonSpan {
    rows: Vec<(usize, Vec<CycScalar>)>,
}

impl EchelonSpan {
    fn insert(&mut self, mut v: Vec<CycScalar>) -> bool {
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = v[p].inv().expect("pivot is nonzero");
                for x in v.iter_mut() {
                    *x = &*x * &inv;
                }
                self.rows.push((p, v));
                true
            }
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Outcome of the span-closure computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityCertificate {
    pub simple: bool,
    /// Dimension of the unital algebra generated by the six operators.
    pub span_dim: usize,
    pub dim: usize,
}

fn submatrix(m: &ExactMatrix, rows: &[usize], cols: &[usize]) -> ExactMatrix {
    ExactMatrix::from_fn(m.field(), rows.len(), cols.len(), |i, j| m.get(rows[i], cols[j]).clone())
}

/// Dimension of the algebra generated by the module's operators. `K` and
/// `B` are diagonal and separate the weight labels, so the algebra contains
/// every weight projection and splits into blocks between weight spaces;
/// each block is closed separately under left multiplication by the
/// generator blocks. The module is simple iff the dimension is `dim^2`.
pub fn is_simple(m: &WeightModule) -> SimplicityCertificate {
    let blocks = m.weight_blocks();
    let nb = blocks.len();
    let mut moves: Vec<Vec<(usize, ExactMatrix)>> = vec![Vec::new(); nb];
    for g in [&m.e, &m.f, &m.el, &m.fl] {
        for (src, (_, cols)) in blocks.iter().enumerate() {
            for (dst, (_, rows)) in blocks.iter().enumerate() {
                let sub = submatrix(g, rows, cols);
                if !sub.is_zero() {
                    moves[src].push((dst, sub));
                }
            }
        }
    }
    let mut spans: Vec<Vec<EchelonSpan>> = (0..nb).map(|_| (0..nb).map(|_| EchelonSpan::default()).collect()).collect();
    let mut work: Vec<(usize, usize, ExactMatrix)> = Vec::new();
    for (i, (_, idx)) in blocks.iter().enumerate() {
        let id = ExactMatrix::identity(&m.field, idx.len());
        spans[i][i].insert(id.entries().to_vec());
        work.push((i, i, id));
    }
    while let Some((at, from, x)) = work.pop() {
        for (dst, g) in &moves[at] {
            let y = g * &x;
            if spans[*dst][from].insert(y.entries().to_vec()) {
                work.push((*dst, from, y));
            }
        }
    }
    let span_dim = spans.iter().flatten().map(EchelonSpan::dim).sum();
    let dim = m.dim();
    SimplicityCertificate {
        simple: span_dim == dim * dim,
        span_dim,
        dim,
    }
}

/// Primitive vectors: the joint kernel of `E` and `E^(ell)` inside each
/// weight space. Returns `(weight, basis)` for every weight with a nonzero
/// primitive subspace.
pub fn primitive_vectors(m: &WeightModule) -> Vec<(Weight, Vec<Vec<CycScalar>>)> {
    let n = m.dim();
    let mut out = Vec::new();
    for (w, idx) in m.weight_blocks() {
        let stacked = ExactMatrix::from_fn(&m.field, 2 * n, idx.len(), |r, c| {
            if r < n {
                m.e.get(r, idx[c]).clone()
            } else {
                m.el.get(r - n, idx[c]).clone()
            }
        });
        let kernel = stacked.kernel();
        if kernel.is_empty() {
            continue;
        }
        let lifted = kernel
            .into_iter()
            .map(|v| {
                let mut full = vec![m.field.zero(); n];
                for (c, x) in idx.iter().zip(v) {
                    full[*c] = x;
                }
                full
            })
            .collect();
        out.push((w, lifted));
    }
    out
}

/// Basis of `{X : X rho_src(g) = rho_dst(g) X}` over the generators in
/// `subset`. Entries of `X` between vectors that the diagonal generators
/// separate are zero from the start.
pub fn equivariant_maps(src: &WeightModule, dst: &WeightModule, subset: Subset) -> Result<Vec<ExactMatrix>, RepnError> {
    if src.field.ell() != dst.field.ell() {
        return Err(ExactError::FieldMismatch(src.field.ell(), dst.field.ell()).into());
    }
    let field = &src.field;
    let (ns, nd) = (src.dim(), dst.dim());
    let same = |r: usize, k: usize| match subset {
        Subset::UZeta => dst.labels[r].lam0() == src.labels[k].lam0(),
        Subset::All => dst.labels[r] == src.labels[k],
    };
    let mut unknown = HashMap::new();
    let mut positions = Vec::new();
    for r in 0..nd {
        for k in 0..ns {
            if same(r, k) {
                unknown.insert((r, k), positions.len());
                positions.push((r, k));
            }
        }
    }
    let nu = positions.len();
    let mut rows: Vec<Vec<CycScalar>> = Vec::new();
    for ((_, gs), (_, gd)) in src.generators(subset).into_iter().zip(dst.generators(subset)) {
        for r in 0..nd {
            for c in 0..ns {
                // (X gs)_{rc} - (gd X)_{rc}
                let mut row: Vec<CycScalar> = vec![field.zero(); nu];
                let mut nonzero = false;
                for k in 0..ns {
                    if let Some(&u) = unknown.get(&(r, k)) {
                        let g = gs.get(k, c);
                        if !g.is_zero() {
                            row[u] = &row[u] + g;
                            nonzero = true;
                        }
                    }
                }
                for k in 0..nd {
                    if let Some(&u) = unknown.get(&(k, c)) {
                        let g = gd.get(r, k);
                        if !g.is_zero() {
                            row[u] = &row[u] - g;
                            nonzero = true;
                        }
                    }
                }
                if nonzero && row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..nu)
            .map(|i| (0..nu).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        ExactMatrix::from_rows(field, rows)?.kernel()
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut x = ExactMatrix::zeros(field, nd, ns);
            for ((r, k), a) in positions.iter().zip(v) {
                x.set(*r, *k, a);
            }
            x
        })
        .collect())
}

/// Dimension of the commutant of the generators in `subset`.
pub fn commutant(m: &WeightModule, subset: Subset) -> Result<usize, RepnError> {
    Ok(equivariant_maps(m, m, subset)?.len())
}

/// An invertible module map `src -> dst`, if one exists among the
/// equivariant maps (tries a fixed combination, then each basis vector).
pub fn find_isomorphism(src: &WeightModule, dst: &WeightModule) -> Result<Option<ExactMatrix>, RepnError> {
    if src.dim() != dst.dim() {
        return Ok(None);
    }
    let maps = equivariant_maps(src, dst, Subset::All)?;
    if maps.is_empty() {
        return Ok(None);
    }
    let n = src.dim();
    let mut combo = ExactMatrix::zeros(&src.field, n, n);
    for (i, x) in maps.iter().enumerate() {
        combo = &combo + &x.scale(&src.field.from_int(i as i64 + 1));
    }
    Ok(std::iter::once(combo).chain(maps).find(|x| x.rank() == n))
}

/// Index of `F^b K^c E^a` in the basis of `u_zeta`.
pub fn uzeta_index(b: u32, c: u32, a: u32, ell: u32) -> usize {
    ((b * ell + c) * ell + a) as usize
}

/// Operators of the `ell^3` basis elements `F^b K^c E^a`, ordered by
/// [`uzeta_index`].
pub fn uzeta_operators(m: &WeightModule) -> Vec<ExactMatrix> {
    let ell = m.field.ell();
    let fp: Vec<ExactMatrix> = (0..ell).map(|b| m.f.pow(b)).collect();
    let ep: Vec<ExactMatrix> = (0..ell).map(|a| m.e.pow(a)).collect();
    let kp: Vec<ExactMatrix> = (0..ell).map(|c| m.k.pow(c)).collect();
    let mut out = Vec::with_capacity((ell * ell * ell) as usize);
    for b in 0..ell {
        for c in 0..ell {
            let fk = &fp[b as usize] * &kp[c as usize];
            for a in 0..ell {
                out.push(&fk * &ep[a as usize]);
            }
        }
    }
    out
}

/// Kernel of `u_zeta -> End(M)` on the basis `F^b K^c E^a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annihilator {
    pub ell: u32,
    /// Kernel basis, each vector of length `ell^3`.
    pub basis: Vec<Vec<CycScalar>>,
    pub codim: usize,
}

impl Annihilator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether every basis element of this kernel acts as zero on `m`.
    pub fn annihilates(&self, m: &WeightModule) -> bool {
        let ops = uzeta_operators(m);
        let n = m.dim();
        self.basis.iter().all(|v| {
            let mut acc = ExactMatrix::zeros(&m.field, n, n);
            for (x, op) in v.iter().zip(&ops) {
                if !x.is_zero() {
                    acc = &acc + &op.scale(x);
                }
            }
            acc.is_zero()
        })
    }

    /// Equality of the two kernels: same dimension and mutual containment.
    pub fn same_as(&self, self_module: &WeightModule, other: &Annihilator, other_module: &WeightModule) -> bool {
        self.ell == other.ell
            && self.dim() == other.dim()
            && self.annihilates(other_module)
            && other.annihilates(self_module)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// The annihilator of `m` in `u_zeta`. Basis elements whose operators share
/// no matrix position are independent, so the kernel is computed per
/// connected group of overlapping supports.
pub fn uzeta_annihilator(m: &WeightModule) -> Annihilator {
    let ell = m.field.ell();
    let total = (ell * ell * ell) as usize;
    let n = m.dim();
    let ops = uzeta_operators(m);
    let supports: Vec<Vec<usize>> = ops.iter().map(|op| op.support().map(|(i, j)| i * n + j).collect()).collect();
    let mut parent: Vec<usize> = (0..total).collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (col, sup) in supports.iter().enumerate() {
        for &pos in sup {
            match owner.get(&pos) {
                Some(&other) => {
                    let (ra, rb) = (find(&mut parent, col), find(&mut parent, other));
                    parent[ra] = rb;
                }
                None => {
                    owner.insert(pos, col);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for col in 0..total {
        let root = find(&mut parent, col);
        groups.entry(root).or_default().push(col);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort();
    let mut basis = Vec::new();
    for cols in groups {
        let mut rows: Vec<usize> = cols.iter().flat_map(|&c| supports[c].iter().copied()).collect();
        rows.sort_unstable();
        rows.dedup();
        let kernel = if rows.is_empty() {
            vec![vec![m.field.one()]]
        } else {
            let mat = ExactMatrix::from_fn(&m.field, rows.len(), cols.len(), |r, c| {
                let (i, j) = (rows[r] / n, rows[r] % n);
                ops[cols[c]].get(i, j).clone()
            });
            mat.kernel()
        };
        for v in kernel {
            let mut full = vec![m.field.zero(); total];
            for (c, x) in cols.iter().zip(v) {
                full[*c] = x;
            }
            basis.push(full);
        }
    }
    let codim = total - basis.len();
    Annihilator { ell, basis, codim }
}

/// The product of two named generators and its normal form.
pub fn compatibility_generators(field: &Arc<CycField>) -> Vec<(String, PBWElem)> {
    let ell = field.ell();
    vec![
        ("E".into(), PBWElem::e(field)),
        ("F".into(), PBWElem::f(field)),
        ("K".into(), PBWElem::k(field)),
        (format!("E^({ell})"), PBWElem::e_div(field, ell)),
        (format!("F^({ell})"), PBWElem::f_div(field, ell)),
        ("B".into(), PBWElem::b(field)),
        ("E^(2)".into(), PBWElem::e_div(field, 2)),
        ("F^(2)".into(), PBWElem::f_div(field, 2)),
    ]
}

/// Checks `rho(x y) = rho(x) rho(y)` for all ordered generator pairs,
/// returning the number of pairs checked.
pub fn check_operator_compatibility(m: &WeightModule) -> Result<usize, RepnError> {
    let gens = compatibility_generators(&m.field);
    let reps: Vec<ExactMatrix> = gens.iter().map(|(_, x)| m.rep_of_pbw(x)).collect();
    let mut count = 0;
    for (i, (nx, x)) in gens.iter().enumerate() {
        for (j, (ny, y)) in gens.iter().enumerate() {
            if m.rep_of_pbw(&x.mul(y)) != &reps[i] * &reps[j] {
                return Err(RepnError::Relation(format!("rho({nx} {ny}) = rho({nx}) rho({ny})")));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// How often each branch of the carry formulas occurred in a weight-shift
/// check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BranchCounts {
    pub f_no_borrow: usize,
    pub f_borrow: usize,
    pub e_no_carry: usize,
    pub e_carry: usize,
}

impl BranchCounts {
    pub fn merge(&mut self, other: &Self) {
        self.f_no_borrow += other.f_no_borrow;
        self.f_borrow += other.f_borrow;
        self.e_no_carry += other.e_no_carry;
        self.e_carry += other.e_carry;
    }

    pub fn all_hit(&self) -> bool {
        self.f_no_borrow > 0 && self.f_borrow > 0 && self.e_no_carry > 0 && self.e_carry > 0
    }
}

/// Checks that `F^(t)` maps weight `lam` into `lam - t alpha` and `E^(t)`
/// into `lam + t alpha` for `1 <= t <= 2 ell`, and that the change of the
/// `B`-eigenvalue agrees with the closed-form carry values.
pub fn check_weight_shifts(m: &WeightModule) -> Result<BranchCounts, RepnError> {
    let ell = m.ell();
    let cartan = sl2(ell)?;
    let alpha = Weight::simple_root(1, &cartan)?;
    let mut counts = BranchCounts::default();
    for t in 1..=2 * ell as u32 {
        let shift = alpha.times(t as i64);
        let c = 2 * t as i64;
        let c0 = c.rem_euclid(ell);
        for (is_f, op) in [(true, m.f_div(t)), (false, m.e_div(t))] {
            for (r, col) in op.support() {
                let src = &m.labels[col];
                let (expected, dir) = if is_f {
                    (src.sub(&shift)?, ShiftDir::Down)
                } else {
                    (src.add(&shift)?, ShiftDir::Up)
                };
                let name = if is_f { "F" } else { "E" };
                if m.labels[r] != expected {
                    return Err(RepnError::Relation(format!(
                        "{name}^({t}) maps weight {src:?} to {:?}, expected {expected:?}",
                        m.labels[r]
                    )));
                }
                let lam0 = src.lam0()[0];
                let carry = binom_shift_eval(lam0, c, dir, ell).map_err(UZeroError::from)?;
                if m.labels[r].lam1()[0] != &src.lam1()[0] + rat_int(carry) {
                    return Err(RepnError::Relation(format!(
                        "{name}^({t}) on {src:?}: B-eigenvalue change differs from the carry value {carry}"
                    )));
                }
                match (is_f, lam0 >= c0, lam0 + c0 < ell) {
                    (true, true, _) => counts.f_no_borrow += 1,
                    (true, false, _) => counts.f_borrow += 1,
                    (false, _, true) => counts.e_no_carry += 1,
                    (false, _, false) => counts.e_carry += 1,
                }
            }
        }
    }
    Ok(counts)
}

/// `L(m0) (x) V(m1)^Fr` for the short `ell`-adic digits of `m >= 0`.
pub fn simple_module(m: i64, ell: i64) -> Result<WeightModule, RepnError> {
    if m < 0 {
        return Err(RepnError::OutOfRange(format!("m = {m} is negative")));
    }
    let l = restricted_simple(m.rem_euclid(ell), ell)?;
    let v = frobenius_twist(&classical_simple(m.div_euclid(ell) as u32), ell)?;
    tensor_module(&l, &v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorTheoremReport {
    pub m: i64,
    pub ell: i64,
    pub dim: usize,
    pub expected_dim: usize,
    pub span_dim: usize,
    pub primitive_weights: Vec<Weight>,
    pub highest_weight: Weight,
    pub intertwiner_found: bool,
    pub failures: Vec<String>,
}

impl TensorTheoremReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `m = m0 + m1 ell`: `L(m0) (x) V(m1)^Fr` has dimension
/// `(m0+1)(m1+1)`, is simple, has exactly one primitive line, of weight
/// `embed(m)`, and is isomorphic to `V(m1)^Fr (x) L(m0)`.
pub fn tensor_theorem_check(m: i64, ell: i64) -> Result<TensorTheoremReport, RepnError> {
    if m < 0 {
        return Err(RepnError::OutOfRange(format!("m = {m} is negative")));
    }
    let (m0, m1) = (m.rem_euclid(ell), m.div_euclid(ell));
    let l = restricted_simple(m0, ell)?;
    let v = frobenius_twist(&classical_simple(m1 as u32), ell)?;
    let t = tensor_module(&l, &v)?;
    let rev = tensor_module_reversed(&v, &l)?;
    let highest_weight = Weight::embed(&[m], &sl2(ell)?)?;
    let mut failures = Vec::new();
    let expected_dim = ((m0 + 1) * (m1 + 1)) as usize;
    if t.dim() != expected_dim {
        failures.push(format!("dimension {} != {expected_dim}", t.dim()));
    }
    let cert = is_simple(&t);
    if !cert.simple {
        failures.push(format!("span closure dimension {} != {}", cert.span_dim, t.dim() * t.dim()));
    }
    let prim = primitive_vectors(&t);
    let primitive_weights: Vec<Weight> = prim.iter().map(|(w, _)| w.clone()).collect();
    let lines: usize = prim.iter().map(|(_, b)| b.len()).sum();
    if lines != 1 || primitive_weights.first() != Some(&highest_weight) {
        failures.push(format!("primitive lines {lines} at weights {primitive_weights:?}, expected one at {highest_weight:?}"));
    }
    let iso = find_isomorphism(&rev, &t)?;
    if let Some(x) = &iso {
        for ((name, gs), (_, gd)) in rev.generators(Subset::All).into_iter().zip(t.generators(Subset::All)) {
            if x * gs != gd * x {
                failures.push(format!("intertwiner fails to commute with {name}"));
            }
        }
    } else {
        failures.push("no invertible intertwiner V^Fr (x) L -> L (x) V^Fr".into());
    }
    Ok(TensorTheoremReport {
        m,
        ell,
        dim: t.dim(),
        expected_dim,
        span_dim: cert.span_dim,
        primitive_weights,
        highest_weight,
        intertwiner_found: iso.is_some(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DufloReport {
    pub m: i64,
    pub ell: i64,
    pub ann_dim_tensor: usize,
    pub ann_dim_restricted: usize,
    pub codim: usize,
    pub equal: bool,
    pub failures: Vec<String>,
}

impl DufloReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The simple highest weight module `T = L(m0) (x) V(m1)^Fr` has the same
/// annihilator in `u_zeta` as `L(m0)`, of codimension `(m0+1)^2`.
pub fn duflo_check(m: i64, ell: i64) -> Result<DufloReport, RepnError> {
    duflo_check_with(m.rem_euclid(ell), m.div_euclid(ell), ell).map(|mut r| {
        r.m = m;
        r
    })
}

/// As [`duflo_check`] for an arbitrary classical factor `V(p)`.
pub fn duflo_check_with(m0: i64, p: i64, ell: i64) -> Result<DufloReport, RepnError> {
    if p < 0 {
        return Err(RepnError::OutOfRange(format!("p = {p} is negative")));
    }
    let l = restricted_simple(m0, ell)?;
    let t = tensor_module(&l, &frobenius_twist(&classical_simple(p as u32), ell)?)?;
    let mut failures = Vec::new();
    let prim = primitive_vectors(&t);
    let expected = Weight::embed(&[m0 + p * ell], &sl2(ell)?)?;
    if prim.len() != 1 || prim[0].1.len() != 1 || prim[0].0 != expected {
        failures.push(format!("T is not highest weight of weight {expected:?}"));
    }
    let ann_t = uzeta_annihilator(&t);
    let ann_l = uzeta_annihilator(&l);
    let equal = ann_t.same_as(&t, &ann_l, &l);
    if !equal {
        failures.push(format!("annihilators differ: dims {} vs {}", ann_t.dim(), ann_l.dim()));
    }
    let expected_codim = ((m0 + 1) * (m0 + 1)) as usize;
    if ann_t.codim != expected_codim {
        failures.push(format!("codimension {} != {expected_codim}", ann_t.codim));
    }
    Ok(DufloReport {
        m: m0 + p * ell,
        ell,
        ann_dim_tensor: ann_t.dim(),
        ann_dim_restricted: ann_l.dim(),
        codim: ann_t.codim,
        equal,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    /// Dimension of the algebra generated by all six operators, by brute
    /// force on full matrices.
    fn naive_closure_dim(m: &WeightModule) -> usize {
        let n = m.dim();
        let mut span = EchelonSpan::default();
        let id = ExactMatrix::identity(m.field(), n);
        span.insert(id.entries().to_vec());
        let mut work = vec![id];
        while let Some(x) = work.pop() {
            for (_, g) in m.generators(Subset::All) {
                let y = g * &x;
                if span.insert(y.entries().to_vec()) {
                    work.push(y);
                }
            }
        }
        span.dim()
    }

    #[test]
    fn restricted_examples() {
        let l = restricted_simple(2, 5).unwrap();
        let f = l.field().clone();
        assert_eq!(l.dim(), 3);
        let kd: Vec<CycScalar> = (0..3).map(|i| l.k().get(i, i).clone()).collect();
        assert_eq!(kd, vec![f.zeta_pow(2), f.one(), f.zeta_pow(-2)]);
        let triv = restricted_simple(0, 5).unwrap();
        assert_eq!(triv.dim(), 1);
        assert!(triv.e().is_zero() && triv.f().is_zero() && triv.b().is_zero());
        assert!(triv.k().get(0, 0).is_one());
        let l3 = restricted_simple(3, 5).unwrap();
        assert_eq!(l3.b().get(2, 2), &f.from_int(-1));
        assert!(restricted_simple(5, 5).is_err());
        assert!(restricted_simple(-1, 5).is_err());
    }

    #[test]
    fn classical_and_twist() {
        let v = classical_simple(1);
        assert_eq!(v.h()[1][1], rat_int(-1));
        let tw = frobenius_twist(&v, 3).unwrap();
        assert_eq!(tw.k(), &ExactMatrix::identity(tw.field(), 2));
        assert_eq!(tw.b().get(1, 1), &tw.field().from_int(-1));
        assert_eq!(frobenius_twist(&classical_simple(0), 3).unwrap().dim(), 1);
        let bad = ClassicalModule::new(
            vec![vec![Rat::zero(), Rat::one()], vec![Rat::zero(), Rat::zero()]],
            vec![vec![Rat::zero(), Rat::zero()], vec![Rat::one(), Rat::zero()]],
            vec![vec![rat_int(2), Rat::zero()], vec![Rat::zero(), rat_int(-1)]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn broken_relation_is_rejected() {
        let l = restricted_simple(2, 5).unwrap();
        let f = l.field().clone();
        let e2 = l.e().scale(&f.from_int(2));
        let res = WeightModule::new(&f, l.labels().to_vec(), e2, l.f().clone(), l.k().clone(), l.e_ell().clone(), l.f_ell().clone(), l.b().clone());
        assert!(matches!(res, Err(RepnError::Relation(_))));
    }

    #[test]
    fn tensor_example() {
        let cartan = CartanData::sl2(3).unwrap();
        let t = simple_module(7, 3).unwrap();
        assert_eq!(t.dim(), 6);
        let prim = primitive_vectors(&t);
        assert_eq!(prim.len(), 1);
        assert_eq!(prim[0].1.len(), 1);
        assert_eq!(prim[0].0, Weight::embed(&[7], &cartan).unwrap());
        // unit object
        let l = restricted_simple(2, 3).unwrap();
        let triv = frobenius_twist(&classical_simple(0), 3).unwrap();
        assert_eq!(tensor_module(&l, &triv).unwrap(), l);
        // m = ell: weights (0, 1) and (0, -1)
        let t = simple_module(3, 3).unwrap();
        let w: Vec<_> = t.labels().iter().map(|w| (w.lam0()[0], w.lam1()[0].clone())).collect();
        assert_eq!(w, vec![(0, rat_int(1)), (0, rat_int(-1))]);
    }

    #[test]
    fn simplicity_certificates() {
        for m0 in 0..5 {
            let l = restricted_simple(m0, 5).unwrap();
            let c = is_simple(&l);
            assert!(c.simple);
            assert_eq!(c.span_dim, ((m0 + 1) * (m0 + 1)) as usize);
        }
        let t = simple_module(4, 3).unwrap();
        assert_eq!(is_simple(&t).span_dim, 16);
        let l0 = restricted_simple(0, 5).unwrap();
        let s = direct_sum(&l0, &l0).unwrap();
        let c = is_simple(&s);
        assert!(!c.simple);
        assert_eq!(c.span_dim, 1);
        let s2 = direct_sum(&restricted_simple(1, 3).unwrap(), &restricted_simple(2, 3).unwrap()).unwrap();
        for m in [&t, &s, &s2, &simple_module(10, 3).unwrap()] {
            assert_eq!(is_simple(m).span_dim, naive_closure_dim(m));
        }
    }

    #[test]
    fn commutants() {
        for m0 in 0..5 {
            assert_eq!(commutant(&restricted_simple(m0, 5).unwrap(), Subset::UZeta).unwrap(), 1);
        }
        assert_eq!(commutant(&simple_module(4, 3).unwrap(), Subset::All).unwrap(), 1);
        let l0 = restricted_simple(0, 5).unwrap();
        assert_eq!(commutant(&direct_sum(&l0, &l0).unwrap(), Subset::All).unwrap(), 4);
    }

    #[test]
    fn annihilator_examples() {
        let a = uzeta_annihilator(&restricted_simple(1, 3).unwrap());
        assert_eq!((a.codim, a.dim()), (4, 23));
        let a = uzeta_annihilator(&restricted_simple(2, 3).unwrap());
        assert_eq!(a.codim, 9);
        let a = uzeta_annihilator(&restricted_simple(4, 5).unwrap());
        assert_eq!(a.codim, 25);
        // dense oracle for a small case
        let t = simple_module(7, 3).unwrap();
        let ops = uzeta_operators(&t);
        let n = t.dim();
        let dense = ExactMatrix::from_fn(t.field(), n * n, 27, |r, c| ops[c].get(r / n, r % n).clone());
        assert_eq!(uzeta_annihilator(&t).dim(), 27 - dense.rank());
    }

    #[test]
    fn duflo_and_tensor_reports() {
        let r = duflo_check(7, 3).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.codim, 4);
        assert!(duflo_check(1, 3).unwrap().ok());
        assert_eq!(duflo_check(7, 3).unwrap().codim, duflo_check(1, 3).unwrap().codim);
        let t = tensor_theorem_check(7, 3).unwrap();
        assert!(t.ok(), "{t:?}");
        assert_eq!(t.dim, 6);
        assert!(tensor_theorem_check(2, 3).unwrap().ok());
    }

    #[test]
    fn operator_compatibility_small() {
        for m0 in 0..3 {
            assert_eq!(check_operator_compatibility(&restricted_simple(m0, 3).unwrap()).unwrap(), 64);
        }
        check_operator_compatibility(&simple_module(5, 3).unwrap()).unwrap();
    }

    #[test]
    fn rep_examples() {
        let l = restricted_simple(3, 5).unwrap();
        let f = l.field().clone();
        assert_eq!(&l.rep_of_pbw(&PBWElem::k(&f)), l.k());
        for t in 0..6 {
            let lhs = l.rep_of_pbw(&PBWElem::b(&f).mul(&PBWElem::f_div(&f, t)));
            let rhs = &l.f_div(t) * &l.rep_of_uzero(&kshift_binom(5, -2 * t as i64, 5).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn weight_shifts_hit_both_branches() {
        let mut counts = BranchCounts::default();
        for m0 in 0..3 {
            for p in 0..=3 {
                let m = tensor_module(
                    &restricted_simple(m0, 3).unwrap(),
                    &frobenius_twist(&classical_simple(p), 3).unwrap(),
                )
                .unwrap();
                counts.merge(&check_weight_shifts(&m).unwrap());
            }
        }
        assert!(counts.all_hit(), "{counts:?}");
    }
}
