//! Cartan data of rank `n` and the weight group `X` of pairs
//! `(lam0, lam1)` with its carrying group law.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{cyclotomic_field, rat_int, solve_rational, CycScalar, ExactError, Rat};
use crate::qcomb::short_ladic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("ell = {0} is divisible by 3, but ell must not be divisible by 3 when a component of type G2 is present")]
    G2Conductor(i64),
    #[error("weights belong to different Cartan data")]
    DatumMismatch,
    #[error("out of range: {0}")]
    OutOfRange(String),
}

/// Symmetrizable Cartan matrix of finite type together with the order
/// `ell` of the root of unity. Instances are interned, so two equal data
/// always share one allocation.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct CartanData {
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
    ell: i64,
}

type CartanKey = (Vec<Vec<i64>>, i64);
static CARTAN: OnceLock<Mutex<HashMap<CartanKey, Arc<CartanData>>>> = OnceLock::new();

impl CartanData {
    pub fn new(a: Vec<Vec<i64>>, ell: i64) -> Result<Arc<Self>, WeightError> {
        cyclotomic_field(ell)?;
        let n = a.len();
        if n == 0 || a.iter().any(|row| row.len() != n) {
            return Err(WeightError::InvalidCartan("matrix must be square and nonempty".into()));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(WeightError::InvalidCartan(format!("a[{i}][{i}] != 2")));
            }
            for j in 0..n {
                if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                    return Err(WeightError::InvalidCartan(format!("bad off-diagonal entry a[{i}][{j}]")));
                }
            }
        }
        let d = symmetrizer(&a)?;
        let rows: Vec<Vec<Rat>> = a.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect();
        if solve_rational(&rows, &vec![Rat::zero(); n]).is_none() {
            return Err(WeightError::InvalidCartan("matrix is singular".into()));
        }
        let has_g2 = (0..n).any(|i| (0..n).any(|j| a[i][j] * a[j][i] == 3));
        if has_g2 && ell % 3 == 0 {
            return Err(WeightError::G2Conductor(ell));
        }
        let mut map = CARTAN
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .expect("Cartan registry poisoned");
        Ok(map
            .entry((a.clone(), ell))
            .or_insert_with(|| Arc::new(CartanData { a, d, ell }))
            .clone())
    }

    /// Cartan datum of Dynkin type `kind` (one of `A`..`G`) and rank `n`,
    /// Bourbaki numbering.
    pub fn of_type(kind: char, n: usize, ell: i64) -> Result<Arc<Self>, WeightError> {
        let chain = |n: usize| {
            let mut a = vec![vec![0i64; n]; n];
            for i in 0..n {
                a[i][i] = 2;
                if i + 1 < n {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            a
        };
        let bad = || WeightError::InvalidCartan(format!("no root system of type {kind}{n}"));
        let a = match kind.to_ascii_uppercase() {
            'A' if n >= 1 => chain(n),
            'B' if n >= 2 => {
                let mut a = chain(n);
                a[n - 1][n - 2] = -2;
                a
            }
            'C' if n >= 2 => {
                let mut a = chain(n);
                a[n - 2][n - 1] = -2;
                a
            }
            'D' if n >= 4 => {
                let mut a = chain(n);
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
                a
            }
            'E' if (6..=8).contains(&n) => {
                // 1-3-4-5-6-..., with node 2 attached to node 4
                let mut a = vec![vec![0i64; n]; n];
                let mut edges = vec![(0, 2), (1, 3), (2, 3)];
                edges.extend((3..n - 1).map(|i| (i, i + 1)));
                for i in 0..n {
                    a[i][i] = 2;
                }
                for (i, j) in edges {
                    a[i][j] = -1;
                    a[j][i] = -1;
                }
                a
            }
            'F' if n == 4 => {
                let mut a = chain(4);
                a[2][1] = -2;
                a
            }
            'G' if n == 2 => vec![vec![2, -3], vec![-1, 2]],
            _ => return Err(bad()),
        };
        Self::new(a, ell)
    }

    pub fn sl2(ell: i64) -> Result<Arc<Self>, WeightError> {
        Self::of_type('A', 1, ell)
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }
}

fn symmetrizer(a: &[Vec<i64>]) -> Result<Vec<i64>, WeightError> {
    let n = a.len();
    let mut d: Vec<Option<Rat>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        let mut component = vec![start];
        d[start] = Some(Rat::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && a[i][j] != 0 && d[j].is_none() {
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * rat_int(a[i][j]) / rat_int(a[j][i]));
                    component.push(j);
                    stack.push(j);
                }
            }
        }
        let lcm = component
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, &i| acc.lcm(d[i].as_ref().unwrap().denom()));
        for &i in &component {
            let scaled = d[i].clone().unwrap() * Rat::from_integer(lcm.clone());
            d[i] = Some(scaled);
        }
    }
    let d: Vec<Rat> = d.into_iter().map(Option::unwrap).collect();
    for i in 0..n {
        for j in 0..n {
            if &d[i] * rat_int(a[i][j]) != &d[j] * rat_int(a[j][i]) {
                return Err(WeightError::InvalidCartan("matrix is not symmetrizable".into()));
            }
        }
    }
    d.iter()
        .map(|x| {
            let v = x.to_integer();
            match i64::try_from(&v) {
                Ok(v) if (1..=3).contains(&v) => Ok(v),
                _ => Err(WeightError::InvalidCartan(format!("symmetrizer {x} not in {{1,2,3}}"))),
            }
        })
        .collect()
}

/// An element `(lam0, lam1)` of the weight group: `lam0` in `[0, ell)^n`
/// records the value on the group-likes, `lam1` the value on the
/// binomial Cartan elements.
#[derive(Clone)]
pub struct Weight {
    cartan: Arc<CartanData>,
    lam0: Vec<i64>,
    lam1: Vec<Rat>,
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.cartan, &other.cartan) && self.lam0 == other.lam0 && self.lam1 == other.lam1
    }
}

impl Eq for Weight {}

impl std::hash::Hash for Weight {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.lam0.hash(state);
        self.lam1.hash(state);
    }
}

impl Weight {
    pub fn new(cartan: &Arc<CartanData>, lam0: Vec<i64>, lam1: Vec<Rat>) -> Result<Self, WeightError> {
        let n = cartan.rank();
        if lam0.len() != n || lam1.len() != n {
            return Err(WeightError::OutOfRange(format!("weight must have {n} components")));
        }
        if let Some(x) = lam0.iter().find(|x| !(0..cartan.ell).contains(*x)) {
            return Err(WeightError::OutOfRange(format!("lam0 entry {x} not in [0, {})", cartan.ell)));
        }
        Ok(Weight {
            cartan: cartan.clone(),
            lam0,
            lam1,
        })
    }

    pub fn identity(cartan: &Arc<CartanData>) -> Self {
        let n = cartan.rank();
        Weight {
            cartan: cartan.clone(),
            lam0: vec![0; n],
            lam1: vec![Rat::zero(); n],
        }
    }

    /// The integral weight attached to `m` in `Z^n`: componentwise short
    /// `ell`-adic decomposition.
    pub fn embed(m: &[i64], cartan: &Arc<CartanData>) -> Result<Self, WeightError> {
        if m.len() != cartan.rank() {
            return Err(WeightError::OutOfRange(format!("expected {} components", cartan.rank())));
        }
        let (lam0, lam1) = m
            .iter()
            .map(|&x| {
                let s = short_ladic(x, cartan.ell);
                (s.m0, rat_int(s.m1))
            })
            .unzip();
        Ok(Weight {
            cartan: cartan.clone(),
            lam0,
            lam1,
        })
    }

    /// `rho_i`, the embedding of the `i`-th column of the Cartan matrix
    /// (1-based).
    pub fn simple_root(i: usize, cartan: &Arc<CartanData>) -> Result<Self, WeightError> {
        let n = cartan.rank();
        if i == 0 || i > n {
            return Err(WeightError::OutOfRange(format!("simple root index {i} not in 1..={n}")));
        }
        let col: Vec<i64> = (0..n).map(|r| cartan.a[r][i - 1]).collect();
        Self::embed(&col, cartan)
    }

    pub fn cartan(&self) -> &Arc<CartanData> {
        &self.cartan
    }

    pub fn lam0(&self) -> &[i64] {
        &self.lam0
    }

    pub fn lam1(&self) -> &[Rat] {
        &self.lam1
    }

    pub fn is_restricted(&self) -> bool {
        self.lam1.iter().all(Zero::is_zero)
    }

    /// `Some(m)` with `embed(m) == self` when `lam1` is integral.
    pub fn as_integral(&self) -> Option<Vec<i64>> {
        self.lam0
            .iter()
            .zip(&self.lam1)
            .map(|(&l0, l1)| {
                if !l1.is_integer() {
                    return None;
                }
                let l1 = i64::try_from(&l1.to_integer()).ok()?;
                Some(l0 + self.cartan.ell * l1)
            })
            .collect()
    }

    fn same_datum(&self, other: &Self) -> Result<(), WeightError> {
        if Arc::ptr_eq(&self.cartan, &other.cartan) {
            Ok(())
        } else {
            Err(WeightError::DatumMismatch)
        }
    }

    /// Group law with carrying from `lam0` into `lam1`.
    pub fn add(&self, other: &Self) -> Result<Self, WeightError> {
        self.same_datum(other)?;
        let ell = self.cartan.ell;
        let mut out = self.clone();
        for j in 0..self.lam0.len() {
            let s = self.lam0[j] + other.lam0[j];
            let l1 = &self.lam1[j] + &other.lam1[j];
            if s < ell {
                out.lam0[j] = s;
                out.lam1[j] = l1;
            } else {
                out.lam0[j] = s - ell;
                out.lam1[j] = l1 + Rat::one();
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let ell = self.cartan.ell;
        let mut out = self.clone();
        for j in 0..self.lam0.len() {
            if self.lam0[j] > 0 {
                out.lam0[j] = ell - self.lam0[j];
                out.lam1[j] = -&self.lam1[j] - Rat::one();
            } else {
                out.lam1[j] = -&self.lam1[j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WeightError> {
        self.same_datum(other)?;
        let ell = self.cartan.ell;
        let mut out = self.clone();
        for j in 0..self.lam0.len() {
            let l1 = &self.lam1[j] - &other.lam1[j];
            if self.lam0[j] < other.lam0[j] {
                out.lam0[j] = ell + self.lam0[j] - other.lam0[j];
                out.lam1[j] = l1 - Rat::one();
            } else {
                out.lam0[j] = self.lam0[j] - other.lam0[j];
                out.lam1[j] = l1;
            }
        }
        Ok(out)
    }

    /// `t * self` for an integer `t` (repeated group addition).
    pub fn times(&self, t: i64) -> Self {
        let base = if t < 0 { self.neg() } else { self.clone() };
        let mut out = Weight::identity(&self.cartan);
        for _ in 0..t.unsigned_abs() {
            out = out.add(&base).expect("same datum");
        }
        out
    }

    /// `self <= other` in the dominance order: `other - self` is a
    /// nonnegative integral combination of simple roots.
    pub fn dominance_leq(&self, other: &Self) -> Result<bool, WeightError> {
        let diff = other.sub(self)?;
        let Some(m) = diff.as_integral() else {
            return Ok(false);
        };
        let a: Vec<Vec<Rat>> = self
            .cartan
            .a
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect();
        let rhs: Vec<Rat> = m.iter().map(|&x| rat_int(x)).collect();
        let x = solve_rational(&a, &rhs).expect("Cartan matrix is invertible");
        Ok(x.iter().all(|c| c.is_integer() && !c.is_negative()))
    }

    /// Value on `K_i` (1-based): `zeta^(d_i lam0_i)`.
    pub fn eval_k(&self, i: usize) -> Result<CycScalar, WeightError> {
        let idx = self.index(i)?;
        let field = cyclotomic_field(self.cartan.ell)?;
        Ok(field.zeta_pow(self.cartan.d[idx] * self.lam0[idx]))
    }

    /// Value on the binomial element `(K_i; ell)` (1-based): `lam1_i`.
    pub fn eval_b(&self, i: usize) -> Result<Rat, WeightError> {
        Ok(self.lam1[self.index(i)?].clone())
    }

    fn index(&self, i: usize) -> Result<usize, WeightError> {
        let n = self.cartan.rank();
        if i == 0 || i > n {
            return Err(WeightError::OutOfRange(format!("index {i} not in 1..={n}")));
        }
        Ok(i - 1)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l1: Vec<String> = self.lam1.iter().map(ToString::to_string).collect();
        write!(f, "({:?}, [{}])", self.lam0, l1.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn sl2(ell: i64) -> Arc<CartanData> {
        CartanData::sl2(ell).unwrap()
    }

    fn w(c: &Arc<CartanData>, l0: i64, l1: i64) -> Weight {
        Weight::new(c, vec![l0], vec![rat_int(l1)]).unwrap()
    }

    #[test]
    fn embed_examples() {
        let c = sl2(5);
        assert_eq!(Weight::embed(&[7], &c).unwrap(), w(&c, 2, 1));
        assert_eq!(Weight::embed(&[0], &c).unwrap(), Weight::identity(&c));
        assert_eq!(Weight::embed(&[-7], &c).unwrap(), w(&c, 3, -2));
    }

    #[test]
    fn add_neg_sub_examples() {
        let c = sl2(5);
        assert_eq!(w(&c, 3, 0).add(&w(&c, 4, 0)).unwrap(), w(&c, 2, 1));
        let lam = w(&c, 2, 1);
        assert_eq!(lam.add(&Weight::identity(&c)).unwrap(), lam);
        assert_eq!(
            Weight::embed(&[3], &c).unwrap().add(&Weight::embed(&[4], &c).unwrap()).unwrap(),
            Weight::embed(&[7], &c).unwrap()
        );
        assert_eq!(lam.neg(), w(&c, 3, -2));
        let r = Weight::new(&c, vec![0], vec![rat(5, 3)]).unwrap();
        assert_eq!(r.neg(), Weight::new(&c, vec![0], vec![rat(-5, 3)]).unwrap());
        assert_eq!(lam.add(&lam.neg()).unwrap(), Weight::identity(&c));
    }

    #[test]
    fn datum_mismatch() {
        let a = w(&sl2(5), 1, 0);
        let b = w(&sl2(3), 1, 0);
        assert_eq!(a.add(&b).unwrap_err(), WeightError::DatumMismatch);
        // interning: separately built data with equal contents are identical
        assert!(Arc::ptr_eq(&sl2(5), &CartanData::of_type('A', 1, 5).unwrap()));
    }

    #[test]
    fn simple_roots() {
        assert_eq!(Weight::simple_root(1, &sl2(5)).unwrap(), w(&sl2(5), 2, 0));
        let a2 = CartanData::of_type('A', 2, 5).unwrap();
        let r1 = Weight::simple_root(1, &a2).unwrap();
        assert_eq!(r1, Weight::new(&a2, vec![2, 4], vec![rat_int(0), rat_int(-1)]).unwrap());
        assert!(!r1.is_restricted());
        assert!(Weight::simple_root(1, &sl2(3)).unwrap().is_restricted());
        assert!(Weight::simple_root(3, &a2).is_err());
    }

    #[test]
    fn dominance_examples() {
        let c = sl2(5);
        let e = |m| Weight::embed(&[m], &c).unwrap();
        assert!(e(1).dominance_leq(&e(7)).unwrap());
        assert!(!e(1).dominance_leq(&e(4)).unwrap());
        assert!(e(3).dominance_leq(&e(3)).unwrap());
        assert!(!e(7).dominance_leq(&e(1)).unwrap());
    }

    #[test]
    fn evaluations() {
        let c = sl2(5);
        let k = cyclotomic_field(5).unwrap();
        let lam = Weight::embed(&[7], &c).unwrap();
        assert_eq!(lam.eval_k(1).unwrap(), k.zeta_pow(2));
        assert_eq!(lam.eval_b(1).unwrap(), rat_int(1));
        let id = Weight::identity(&c);
        assert!(id.eval_k(1).unwrap().is_one());
        assert!(id.eval_b(1).unwrap().is_zero());
    }

    #[test]
    fn cartan_types() {
        for (kind, n) in [('A', 3), ('B', 3), ('C', 3), ('D', 4), ('D', 5), ('E', 6), ('E', 7), ('E', 8), ('F', 4), ('G', 2)] {
            let c = CartanData::of_type(kind, n, 7).unwrap_or_else(|e| panic!("{kind}{n}: {e}"));
            assert_eq!(c.rank(), n);
        }
        assert_eq!(CartanData::of_type('G', 2, 5).unwrap().symmetrizers(), &[1, 3]);
        assert_eq!(CartanData::of_type('B', 2, 5).unwrap().symmetrizers(), &[2, 1]);
        assert_eq!(CartanData::of_type('G', 2, 9).unwrap_err(), WeightError::G2Conductor(9));
        assert!(CartanData::of_type('D', 3, 5).is_err());
        assert!(CartanData::of_type('A', 1, 4).is_err());
        assert!(CartanData::new(vec![vec![2, -1], vec![0, 2]], 5).is_err());
    }

    fn datum() -> impl Strategy<Value = Arc<CartanData>> {
        (prop::sample::select(vec![('A', 1), ('A', 2), ('B', 2), ('G', 2)]), prop::sample::select(vec![5i64, 7]))
            .prop_map(|((k, n), ell)| CartanData::of_type(k, n, ell).unwrap())
    }

    fn arb_weight(c: Arc<CartanData>) -> impl Strategy<Value = Weight> {
        let n = c.rank();
        let ell = c.ell();
        (proptest::collection::vec(0..ell, n), proptest::collection::vec((-9i64..9, 1i64..4), n))
            .prop_map(move |(l0, l1)| {
                Weight::new(&c, l0, l1.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn group_axioms((a, b, c) in datum().prop_flat_map(|d| (arb_weight(d.clone()), arb_weight(d.clone()), arb_weight(d)))) {
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.add(&a.neg()).unwrap(), Weight::identity(a.cartan()));
            prop_assert_eq!(a.sub(&b).unwrap(), a.add(&b.neg()).unwrap());
        }

        #[test]
        fn embed_is_homomorphism(m in proptest::collection::vec(-100i64..=100, 2), m2 in proptest::collection::vec(-100i64..=100, 2)) {
            let c = CartanData::of_type('B', 2, 3).unwrap();
            let sum: Vec<i64> = m.iter().zip(&m2).map(|(a, b)| a + b).collect();
            let lhs = Weight::embed(&m, &c).unwrap().add(&Weight::embed(&m2, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, Weight::embed(&sum, &c).unwrap());
        }

        #[test]
        fn k_evaluation_is_multiplicative((a, b) in datum().prop_flat_map(|d| (arb_weight(d.clone()), arb_weight(d)))) {
            let s = a.add(&b).unwrap();
            for i in 1..=a.cartan().rank() {
                prop_assert_eq!(s.eval_k(i).unwrap(), a.eval_k(i).unwrap() * b.eval_k(i).unwrap());
                let carry = if a.lam0()[i - 1] + b.lam0()[i - 1] >= a.cartan().ell() { 1 } else { 0 };
                prop_assert_eq!(s.eval_b(i).unwrap(), a.eval_b(i).unwrap() + b.eval_b(i).unwrap() + rat_int(carry));
            }
        }

        #[test]
        fn dominance_is_partial_order(ms in proptest::collection::vec(proptest::collection::vec(-12i64..12, 2), 3)) {
            let c = CartanData::of_type('A', 2, 5).unwrap();
            let ws: Vec<Weight> = ms.iter().map(|m| Weight::embed(m, &c).unwrap()).collect();
            let leq = |a: &Weight, b: &Weight| a.dominance_leq(b).unwrap();
            prop_assert!(leq(&ws[0], &ws[0]));
            if leq(&ws[0], &ws[1]) && leq(&ws[1], &ws[0]) {
                prop_assert_eq!(&ws[0], &ws[1]);
            }
            if leq(&ws[0], &ws[1]) && leq(&ws[1], &ws[2]) {
                prop_assert!(leq(&ws[0], &ws[2]));
            }
            let up = ws[0].add(&Weight::simple_root(2, &c).unwrap()).unwrap();
            prop_assert!(leq(&ws[0], &up));
        }
    }
}
