//! Property suites run by `hyperzeta verify`. Every check is exact and
//! deterministic for a given seed; reports are sorted by suite, then check id.

use std::collections::BTreeMap;
use std::time::Instant;

use hyperzeta::exactnum::{cyclotomic_field, rat, rat_int, ExactMatrix};
use hyperzeta::pbw::{frobenius, gamma, ClassicalElem, PBWElem};
use hyperzeta::qcomb::{binom_shift_eval, gauss_binom, gauss_binom_at, q_lucas, short_ladic, ShiftDir};
use hyperzeta::repn::{
    check_operator_compatibility, check_weight_shifts, classical_simple, commutant, direct_sum, duflo_check_with,
    frobenius_twist, is_simple, primitive_vectors, restricted_simple, tensor_module, tensor_theorem_check, BranchCounts,
    Subset, WeightModule,
};
use hyperzeta::uzero::{
    coproduct_b, kshift_binom, kshift_expansion_minus, kshift_expansion_plus, primitive_coefficients,
    primitive_element, primitive_space, primitivity_residual, scalar_identity_minus, scalar_identity_plus, UZeroElem,
};
use hyperzeta::weights::{CartanData, Weight};
use hyperzeta::exactnum::LaurentPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Qcomb,
    Weights,
    Uzero,
    Pbw,
    Repn,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Qcomb, Suite::Weights, Suite::Uzero, Suite::Pbw, Suite::Repn];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qcomb => "qcomb",
            Suite::Weights => "weights",
            Suite::Uzero => "uzero",
            Suite::Pbw => "pbw",
            Suite::Repn => "repn",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub params: Value,
    pub cases: usize,
    pub failed: usize,
    pub passed: bool,
    /// The first few failing cases with their offending values.
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub info: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub ells: Vec<i64>,
    pub passed: bool,
    pub total_cases: usize,
    pub failed_checks: usize,
    pub suites: Vec<SuiteReport>,
}

struct Check {
    id: String,
    params: Value,
    cases: usize,
    failed: usize,
    failures: Vec<String>,
    info: BTreeMap<String, Value>,
    start: Instant,
}

impl Check {
    fn new(id: &str, params: Value) -> Self {
        Check {
            id: id.to_string(),
            params,
            cases: 0,
            failed: 0,
            failures: Vec::new(),
            info: BTreeMap::new(),
            start: Instant::now(),
        }
    }

    fn case(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            id: self.id,
            params: self.params,
            cases: self.cases,
            failed: self.failed,
            passed: self.failed == 0,
            failures: self.failures,
            info: self.info,
            elapsed_ms: Some(self.start.elapsed().as_millis()),
        }
    }
}

/// A per-check generator, so results do not depend on which other checks ran.
fn rng_for(seed: u64, id: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

// ---------------------------------------------------------------- qcomb

pub fn binom_negation(mrange: i64, tmax: u32) -> CheckResult {
    let mut ck = Check::new("binom_negation", json!({ "m": [-mrange, mrange], "t": [0, tmax] }));
    for m in -mrange..=mrange {
        for t in 0..=tmax {
            let sign = LaurentPoly::monomial(if t % 2 == 0 { 1 } else { -1 }, 0);
            let lhs = gauss_binom(m, t);
            let rhs = &sign * &gauss_binom(-m + t as i64 - 1, t);
            ck.case(lhs == rhs, || format!("m={m} t={t}: {lhs} != {rhs}"));
        }
    }
    ck.finish()
}

pub fn binom_at_ell_is_carry(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("binom_at_ell_is_carry", json!({ "ell": ells, "m": "[-3 ell, 3 ell]" }));
    for &ell in ells {
        let field = cyclotomic_field(ell).expect("valid ell");
        for m in -3 * ell..=3 * ell {
            let v = gauss_binom_at(m, ell as u32, ell, 1).expect("valid ell");
            let m1 = short_ladic(m, ell).m1;
            ck.case(v == field.from_int(m1), || format!("ell={ell} m={m}: {v} != {m1}"));
        }
    }
    ck.finish()
}

pub fn carry_branches(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("carry_branches", json!({ "ell": ells, "m": "[0, ell)", "c": "[0, 3 ell)" }));
    for &ell in ells {
        let field = cyclotomic_field(ell).expect("valid ell");
        for m in 0..ell {
            for c in 0..3 * ell {
                for (dir, arg) in [(ShiftDir::Down, m - c), (ShiftDir::Up, m + c)] {
                    let closed = binom_shift_eval(m, c, dir, ell).expect("in range");
                    let direct = gauss_binom_at(arg, ell as u32, ell, 1).expect("valid ell");
                    ck.case(direct == field.from_int(closed), || {
                        format!("ell={ell} m={m} c={c} {dir:?}: closed form {closed}, direct {direct}")
                    });
                }
            }
        }
    }
    ck.finish()
}

pub fn pascal_recurrence(mmax: i64) -> CheckResult {
    let mut ck = Check::new("pascal_recurrence", json!({ "m": [1, mmax] }));
    for m in 1..=mmax {
        for t in 1..=m as u32 {
            let lhs = gauss_binom(m, t);
            let rhs = &gauss_binom(m - 1, t).shift(-(t as i64)) + &gauss_binom(m - 1, t - 1).shift(m - t as i64);
            ck.case(lhs == rhs, || format!("m={m} t={t}"));
        }
    }
    ck.finish()
}

pub fn q_lucas_factorization(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("q_lucas", json!({ "ell": ells, "a1": [0, 3], "c1": [0, 3] }));
    for &ell in ells {
        for a0 in 0..ell {
            for a1 in 0..=3 {
                for c0 in 0..ell {
                    for c1 in 0..=3 {
                        let direct = gauss_binom_at(a0 + a1 * ell, (c0 + c1 * ell) as u32, ell, 1).expect("valid");
                        let factored = q_lucas(a0, a1, c0, c1, ell, 1).expect("valid");
                        ck.case(direct == factored, || format!("ell={ell} ({a0},{a1}) over ({c0},{c1})"));
                    }
                }
            }
        }
    }
    ck.finish()
}

/// `(zeta^(ij)) (1/ell)(zeta^(-ij)) = I`.
pub fn vandermonde(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("vandermonde", json!({ "ell": ells }));
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        let n = ell as usize;
        let v = ExactMatrix::from_fn(&f, n, n, |i, j| f.zeta_pow((i * j) as i64));
        let w = ExactMatrix::from_fn(&f, n, n, |i, j| f.zeta_pow(-((i * j) as i64)).scale(&rat(1, ell)));
        ck.case(&v * &w == ExactMatrix::identity(&f, n), || format!("ell={ell}"));
    }
    ck.finish()
}

// ---------------------------------------------------------------- weights

fn random_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

fn sample_cartans(ell: i64) -> Vec<(String, std::sync::Arc<CartanData>)> {
    vec![
        ("A1".to_string(), CartanData::of_type('A', 1, ell).expect("A1")),
        ("A2".to_string(), CartanData::of_type('A', 2, ell).expect("A2")),
        ("B2".to_string(), CartanData::of_type('B', 2, ell).expect("B2")),
    ]
}

/// `embed(m + m') = embed(m) + embed(m')` on `pairs` random pairs per
/// (Cartan type, ell).
pub fn embed_homomorphism(ells: &[i64], pairs: usize, bound: i64, seed: u64) -> CheckResult {
    let mut ck = Check::new(
        "embed_homomorphism",
        json!({ "ell": ells, "types": ["A1", "A2", "B2"], "pairs_per_type": pairs, "bound": bound }),
    );
    let mut rng = rng_for(seed, "embed_homomorphism");
    for &ell in ells {
        for (name, c) in sample_cartans(ell) {
            for _ in 0..pairs {
                let m = random_vec(&mut rng, c.rank(), bound);
                let n = random_vec(&mut rng, c.rank(), bound);
                let sum: Vec<i64> = m.iter().zip(&n).map(|(a, b)| a + b).collect();
                let lhs = Weight::embed(&sum, &c).expect("embed");
                let rhs = Weight::embed(&m, &c).expect("embed").add(&Weight::embed(&n, &c).expect("embed"));
                ck.case(rhs.as_ref() == Ok(&lhs), || format!("{name} ell={ell} m={m:?} m'={n:?}"));
            }
        }
    }
    ck.finish()
}

/// `embed(-m) = -embed(m)` and `embed(m - m') = embed(m) - embed(m')`.
pub fn negation_subtraction(ells: &[i64], pairs: usize, bound: i64, seed: u64) -> CheckResult {
    let mut ck = Check::new(
        "negation_subtraction",
        json!({ "ell": ells, "types": ["A1", "A2", "B2"], "pairs_per_type": pairs, "bound": bound }),
    );
    let mut rng = rng_for(seed, "negation_subtraction");
    for &ell in ells {
        for (name, c) in sample_cartans(ell) {
            for _ in 0..pairs {
                let m = random_vec(&mut rng, c.rank(), bound);
                let n = random_vec(&mut rng, c.rank(), bound);
                let em = Weight::embed(&m, &c).expect("embed");
                let en = Weight::embed(&n, &c).expect("embed");
                let neg: Vec<i64> = m.iter().map(|a| -a).collect();
                ck.case(Weight::embed(&neg, &c).expect("embed") == em.neg(), || {
                    format!("{name} ell={ell} neg m={m:?}")
                });
                let diff: Vec<i64> = m.iter().zip(&n).map(|(a, b)| a - b).collect();
                ck.case(em.sub(&en).as_ref() == Ok(&Weight::embed(&diff, &c).expect("embed")), || {
                    format!("{name} ell={ell} m={m:?} m'={n:?}")
                });
            }
        }
    }
    ck.finish()
}

/// Group axioms on weights with rational carry parts.
pub fn weight_group_axioms(ells: &[i64], samples: usize, seed: u64) -> CheckResult {
    let mut ck = Check::new("group_axioms", json!({ "ell": ells, "samples": samples }));
    let mut rng = rng_for(seed, "group_axioms");
    for &ell in ells {
        for (name, c) in sample_cartans(ell) {
            let n = c.rank();
            let random_weight = |rng: &mut ChaCha8Rng| {
                let lam0 = (0..n).map(|_| rng.gen_range(0..ell)).collect();
                let lam1 = (0..n).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=4))).collect();
                Weight::new(&c, lam0, lam1).expect("valid weight")
            };
            for _ in 0..samples {
                let (x, y, z) = (random_weight(&mut rng), random_weight(&mut rng), random_weight(&mut rng));
                let id = Weight::identity(&c);
                let assoc = x.add(&y).and_then(|xy| xy.add(&z)) == y.add(&z).and_then(|yz| x.add(&yz));
                ck.case(assoc, || format!("{name} ell={ell} associativity {x:?} {y:?} {z:?}"));
                ck.case(x.add(&y) == y.add(&x), || format!("{name} ell={ell} commutativity"));
                ck.case(x.add(&id).as_ref() == Ok(&x), || format!("{name} ell={ell} identity {x:?}"));
                ck.case(x.add(&x.neg()).as_ref() == Ok(&id), || format!("{name} ell={ell} inverse {x:?}"));
            }
        }
    }
    ck.finish()
}

/// Dominance order: reflexive, antisymmetric and compatible with adding
/// simple roots.
pub fn dominance_order(ells: &[i64], samples: usize, seed: u64) -> CheckResult {
    let mut ck = Check::new("dominance_order", json!({ "ell": ells, "samples": samples }));
    let mut rng = rng_for(seed, "dominance_order");
    for &ell in ells {
        for (name, c) in sample_cartans(ell) {
            for _ in 0..samples {
                let m = random_vec(&mut rng, c.rank(), 30);
                let x = Weight::embed(&m, &c).expect("embed");
                ck.case(x.dominance_leq(&x) == Ok(true), || format!("{name} ell={ell} reflexive {m:?}"));
                let i = rng.gen_range(1..=c.rank());
                let y = x.add(&Weight::simple_root(i, &c).expect("root")).expect("add");
                ck.case(x.dominance_leq(&y) == Ok(true), || format!("{name} ell={ell} x <= x + alpha_{i}"));
                ck.case(y.dominance_leq(&x) == Ok(false), || format!("{name} ell={ell} x + alpha_{i} not <= x"));
            }
        }
    }
    ck.finish()
}

pub fn g2_conductor() -> CheckResult {
    let mut ck = Check::new("g2_conductor", json!({ "ell": [9, 15, 5, 7] }));
    for ell in [9, 15] {
        ck.case(CartanData::of_type('G', 2, ell).is_err(), || format!("G2 accepted ell={ell}"));
    }
    for ell in [5, 7] {
        ck.case(CartanData::of_type('G', 2, ell).is_ok(), || format!("G2 rejected ell={ell}"));
    }
    ck.finish()
}

// ---------------------------------------------------------------- uzero

/// `[K; -c over ell]` and `[K; c over ell]` equal their expansions in
/// `K^(+-s) [K; 0 over ell - s]`.
pub fn kshift_expansions(ells: &[i64], cmax_factor: i64) -> CheckResult {
    let mut ck = Check::new("kshift_expansions", json!({ "ell": ells, "c": format!("[0, {cmax_factor} ell)") }));
    for &ell in ells {
        for c in 0..cmax_factor * ell {
            let minus = kshift_binom(ell, -c, ell as u32).expect("valid");
            ck.case(kshift_expansion_minus(ell, c).as_ref() == Ok(&minus), || format!("ell={ell} c={c} minus"));
            let plus = kshift_binom(ell, c, ell as u32).expect("valid");
            ck.case(kshift_expansion_plus(ell, c).as_ref() == Ok(&plus), || format!("ell={ell} c={c} plus"));
        }
    }
    ck.finish()
}

pub fn scalar_expansions(ells: &[i64], cmax_factor: i64) -> CheckResult {
    let mut ck = Check::new(
        "scalar_expansions",
        json!({ "ell": ells, "m": "[0, ell)", "c": format!("[0, {cmax_factor} ell)") }),
    );
    for &ell in ells {
        for m in 0..ell {
            for c in 0..cmax_factor * ell {
                let (l, r) = scalar_identity_minus(ell, m, c).expect("valid");
                ck.case(l == r, || format!("ell={ell} m={m} c={c} minus: {l} != {r}"));
                let (l, r) = scalar_identity_plus(ell, m, c).expect("valid");
                ck.case(l == r, || format!("ell={ell} m={m} c={c} plus: {l} != {r}"));
            }
        }
    }
    ck.finish()
}

pub fn primitive_element_check(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("primitive_element", json!({ "ell": ells }));
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        let p = primitive_element(ell).expect("valid");
        let residual = primitivity_residual(&p).expect("in span");
        ck.case(residual.is_zero(), || format!("ell={ell}: residual {residual:?}"));
        let space = primitive_space(ell).expect("valid");
        ck.case(space.len() == 1, || format!("ell={ell}: primitive space has dimension {}", space.len()));
        let a0 = primitive_coefficients(ell).expect("valid")[0].clone();
        ck.case(a0 == f.from_rat(&rat(ell - 1, 2 * ell)), || format!("ell={ell}: a0 = {a0}"));
        ck.case(p.eval(0).is_zero(), || format!("ell={ell}: value at 0 is {}", p.eval(0)));
    }
    ck.finish()
}

pub fn coproduct_of_b(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("coproduct_b", json!({ "ell": ells, "m": "[-2 ell, 2 ell]^2" }));
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        let d = coproduct_b(ell).expect("valid");
        ck.case(d.swap() == d, || format!("ell={ell}: not cocommutative"));
        for m in -2 * ell..=2 * ell {
            for m2 in -2 * ell..=2 * ell {
                let v = d.eval(m, m2);
                let expected = short_ladic(m + m2, ell).m1;
                ck.case(v == f.from_int(expected), || format!("ell={ell} ({m}, {m2}): {v} != {expected}"));
            }
        }
    }
    ck.finish()
}

fn random_uzero(rng: &mut ChaCha8Rng, ell: i64, max_degree: u32) -> UZeroElem {
    let f = cyclotomic_field(ell).expect("valid ell");
    let mut x = UZeroElem::zero(&f);
    for _ in 0..rng.gen_range(1..5) {
        let coeff = f.zeta_pow(rng.gen_range(0..ell)).scale(&rat(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
        x = x.add(&UZeroElem::monomial(&f, rng.gen_range(0..ell), rng.gen_range(0..=max_degree), coeff));
    }
    x
}

/// Evaluation is a ring map, interpolation inverts it, and the shift maps
/// are multiplicative and compose additively.
pub fn cartan_algebra(ells: &[i64], samples: usize, seed: u64) -> CheckResult {
    let mut ck = Check::new("cartan_algebra", json!({ "ell": ells, "samples": samples }));
    let mut rng = rng_for(seed, "cartan_algebra");
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        for _ in 0..samples {
            let x = random_uzero(&mut rng, ell, 3);
            let y = random_uzero(&mut rng, ell, 2);
            let m = rng.gen_range(-5 * ell..=5 * ell);
            ck.case(x.mul(&y).eval(m) == x.eval(m) * y.eval(m), || format!("ell={ell} eval product at {m}"));
            let back = UZeroElem::interpolate(&f, |k| x.eval(k), x.degree(), true);
            ck.case(back.as_ref() == Ok(&x), || format!("ell={ell} interpolation of {x:?}"));
            let (a, b) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6));
            ck.case(x.mul(&y).shift(a) == x.shift(a).mul(&y.shift(a)), || format!("ell={ell} shift {a} product"));
            ck.case(x.shift(a).shift(b) == x.shift(a + b), || format!("ell={ell} shift {a} then {b}"));
        }
    }
    ck.finish()
}

// ---------------------------------------------------------------- pbw

fn random_monomial(rng: &mut ChaCha8Rng, ell: i64, top: u32) -> PBWElem {
    let f = cyclotomic_field(ell).expect("valid ell");
    let coeff = f.zeta_pow(rng.gen_range(0..ell)).scale_int(rng.gen_range(1..=3));
    PBWElem::monomial(
        &f,
        rng.gen_range(0..=top),
        rng.gen_range(0..ell),
        rng.gen_range(0..=2),
        rng.gen_range(0..=top),
        coeff,
    )
}

/// `(xy)z = x(yz)` on random monomials with divided-power indices up to
/// `2 ell + 2` and `B`-degree up to 2.
pub fn associativity(ells: &[i64], triples: usize, seed: u64) -> CheckResult {
    let mut ck = Check::new("associativity", json!({ "ell": ells, "triples": triples, "max_index": "2 ell + 2" }));
    let mut rng = rng_for(seed, "associativity");
    for &ell in ells {
        let top = 2 * ell as u32 + 2;
        for _ in 0..triples {
            let x = random_monomial(&mut rng, ell, top);
            let y = random_monomial(&mut rng, ell, top);
            let z = random_monomial(&mut rng, ell, top);
            ck.case(x.mul(&y).mul(&z) == x.mul(&y.mul(&z)), || format!("ell={ell} {x:?} {y:?} {z:?}"));
        }
    }
    ck.finish()
}

pub fn divided_powers(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("divided_powers", json!({ "ell": ells, "a": "[0, 2 ell]" }));
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        for a in 0..=2 * ell as u32 {
            for a2 in 0..=2 * ell as u32 {
                let coef = gauss_binom_at((a + a2) as i64, a, ell, 1).expect("valid");
                ck.case(
                    PBWElem::e_div(&f, a).mul(&PBWElem::e_div(&f, a2)) == PBWElem::e_div(&f, a + a2).scale(&coef),
                    || format!("ell={ell} E^({a}) E^({a2})"),
                );
                ck.case(
                    PBWElem::f_div(&f, a).mul(&PBWElem::f_div(&f, a2)) == PBWElem::f_div(&f, a + a2).scale(&coef),
                    || format!("ell={ell} F^({a}) F^({a2})"),
                );
            }
        }
    }
    ck.finish()
}

/// Worked products: conjugation by `K`, `E F`, `B F^(t)`, `E^(t) B`,
/// `F^(ell) F^(ell)`.
pub fn straightening(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("straightening", json!({ "ell": ells }));
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        let l = ell as u32;
        let (e, fg, k, b) = (PBWElem::e(&f), PBWElem::f(&f), PBWElem::k(&f), PBWElem::b(&f));
        ck.case(k.mul(&e) == e.mul(&k).scale(&f.zeta_pow(2)), || format!("ell={ell} K E"));
        ck.case(k.mul(&fg) == fg.mul(&k).scale(&f.zeta_pow(-2)), || format!("ell={ell} K F"));
        ck.case(k.pow(l) == PBWElem::one(&f), || format!("ell={ell} K^ell"));
        let ef = fg.mul(&e).add(&PBWElem::from_uzero(kshift_binom(ell, 0, 1).expect("valid")));
        ck.case(e.mul(&fg) == ef, || format!("ell={ell} E F"));
        for t in 0..=2 * l {
            let shifted = kshift_binom(ell, -2 * t as i64, l).expect("valid");
            ck.case(
                b.mul(&PBWElem::f_div(&f, t)) == PBWElem::from_parts(t, shifted, 0),
                || format!("ell={ell} B F^({t})"),
            );
            let up = kshift_binom(ell, 2 * t as i64, l).expect("valid");
            ck.case(
                b.mul(&PBWElem::e_div(&f, t)) == PBWElem::e_div(&f, t).mul(&PBWElem::from_uzero(up)),
                || format!("ell={ell} B E^({t})"),
            );
        }
        let fl = PBWElem::f_div(&f, l);
        ck.case(fl.mul(&fl) == PBWElem::f_div(&f, 2 * l).scale(&f.from_int(2)), || {
            format!("ell={ell} F^(ell) F^(ell)")
        });
    }
    ck.finish()
}

/// `Fr(gamma(f^s h^t e^r)) = f^s h^t e^r`.
pub fn section_property(ells: &[i64], max_exp: u32) -> CheckResult {
    let mut ck = Check::new("section", json!({ "ell": ells, "max_exponent": max_exp }));
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        for s in 0..=max_exp {
            for t in 0..=max_exp {
                for r in 0..=max_exp {
                    let x = ClassicalElem::monomial(s, t, r, rat_int(1));
                    let back = frobenius(&gamma(&f, &x));
                    ck.case(back.as_ref() == Ok(&x), || format!("ell={ell} f^{s} h^{t} e^{r}: {back:?}"));
                }
            }
        }
    }
    ck.finish()
}

pub fn frobenius_multiplicative(ells: &[i64], pairs: usize, seed: u64) -> CheckResult {
    let mut ck = Check::new("frobenius_multiplicative", json!({ "ell": ells, "pairs": pairs }));
    let mut rng = rng_for(seed, "frobenius_multiplicative");
    for &ell in ells {
        let f = cyclotomic_field(ell).expect("valid ell");
        let top = 2 * ell as u32 + 2;
        for _ in 0..pairs {
            // rational coefficients so that the images are defined
            let mk = |rng: &mut ChaCha8Rng| {
                PBWElem::monomial(
                    &f,
                    rng.gen_range(0..=top),
                    rng.gen_range(0..ell),
                    rng.gen_range(0..=2),
                    rng.gen_range(0..=top),
                    f.from_int(rng.gen_range(1..=3)),
                )
            };
            let (x, y) = (mk(&mut rng), mk(&mut rng));
            let lhs = frobenius(&x.mul(&y));
            let rhs = frobenius(&x).and_then(|a| frobenius(&y).map(|b| a.mul(&b)));
            ck.case(lhs == rhs, || format!("ell={ell} {x:?} {y:?}"));
        }
    }
    ck.finish()
}

pub fn classical_algebra(samples: usize, seed: u64) -> CheckResult {
    let mut ck = Check::new("classical_algebra", json!({ "samples": samples }));
    let (e, f, h) = (ClassicalElem::e(), ClassicalElem::f(), ClassicalElem::h());
    ck.case(e.mul(&f) == f.mul(&e).add(&h), || "e f = f e + h".into());
    ck.case(h.mul(&e) == e.mul(&h).add(&e.scale(&rat_int(2))), || "h e = e h + 2e".into());
    ck.case(h.mul(&f) == f.mul(&h).sub(&f.scale(&rat_int(2))), || "h f = f h - 2f".into());
    let mut rng = rng_for(seed, "classical_algebra");
    let mono = |rng: &mut ChaCha8Rng| {
        ClassicalElem::monomial(rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..4), rat_int(1))
    };
    for _ in 0..samples {
        let (x, y, z) = (mono(&mut rng), mono(&mut rng), mono(&mut rng));
        ck.case(x.mul(&y).mul(&z) == x.mul(&y.mul(&z)), || format!("{x:?} {y:?} {z:?}"));
    }
    ck.finish()
}

// ---------------------------------------------------------------- repn

/// `L(m0)` and `L(m0) (x) V(p)^Fr` for `m0 < ell`, `p <= pmax`.
pub fn module_family(ell: i64, pmax: u32) -> Vec<(String, WeightModule)> {
    let mut out = Vec::new();
    for m0 in 0..ell {
        let l = restricted_simple(m0, ell).expect("valid m0");
        out.push((format!("L({m0})"), l.clone()));
        for p in 0..=pmax {
            let v = frobenius_twist(&classical_simple(p), ell).expect("twist");
            out.push((format!("L({m0})xV({p})"), tensor_module(&l, &v).expect("tensor")));
        }
    }
    out
}

pub fn operator_compatibility(ells: &[i64], pmax: u32) -> CheckResult {
    let mut ck = Check::new("operator_compatibility", json!({ "ell": ells, "p": [0, pmax] }));
    for &ell in ells {
        for (name, m) in module_family(ell, pmax) {
            let res = check_operator_compatibility(&m);
            ck.case(res.is_ok(), || format!("ell={ell} {name}: {}", res.unwrap_err()));
        }
    }
    ck.finish()
}

pub fn weight_shifts(ells: &[i64], pmax: u32) -> CheckResult {
    let mut ck = Check::new("weight_shifts", json!({ "ell": ells, "p": [0, pmax], "t": "[1, 2 ell]" }));
    let mut total = BranchCounts::default();
    for &ell in ells {
        for (name, m) in module_family(ell, pmax) {
            match check_weight_shifts(&m) {
                Ok(c) => {
                    total.merge(&c);
                    ck.case(true, String::new);
                }
                Err(e) => ck.case(false, || format!("ell={ell} {name}: {e}")),
            }
        }
    }
    ck.case(total.all_hit(), || format!("not every carry branch exercised: {total:?}"));
    ck.info.insert(
        "branches".into(),
        json!({
            "f_no_borrow": total.f_no_borrow,
            "f_borrow": total.f_borrow,
            "e_no_carry": total.e_no_carry,
            "e_carry": total.e_carry,
        }),
    );
    ck.finish()
}

/// Tensor product theorem for `m` in `[0, mmax_factor * ell]`.
pub fn tensor_theorem(ells: &[i64], mmax_factor: i64) -> CheckResult {
    let mut ck = Check::new("tensor_theorem", json!({ "ell": ells, "m": format!("[0, {mmax_factor} ell]") }));
    for &ell in ells {
        for m in 0..=mmax_factor * ell {
            match tensor_theorem_check(m, ell) {
                Ok(r) => ck.case(r.ok(), || format!("ell={ell} m={m}: {}", r.failures.join("; "))),
                Err(e) => ck.case(false, || format!("ell={ell} m={m}: {e}")),
            }
        }
    }
    ck.finish()
}

/// Annihilators in `u_zeta` of `L(m0) (x) V(p)^Fr` and `L(m0)` agree and
/// have codimension `(m0+1)^2`.
pub fn annihilators(ells: &[i64], pmax: i64) -> CheckResult {
    let mut ck = Check::new("annihilators", json!({ "ell": ells, "p": [0, pmax] }));
    for &ell in ells {
        for m0 in 0..ell {
            for p in 0..=pmax {
                match duflo_check_with(m0, p, ell) {
                    Ok(r) => ck.case(r.ok(), || format!("ell={ell} m0={m0} p={p}: {}", r.failures.join("; "))),
                    Err(e) => ck.case(false, || format!("ell={ell} m0={m0} p={p}: {e}")),
                }
            }
        }
    }
    ck.finish()
}

pub fn commutants(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("commutants", json!({ "ell": ells }));
    for &ell in ells {
        for m0 in 0..ell {
            let l = restricted_simple(m0, ell).expect("valid m0");
            let d = commutant(&l, Subset::UZeta);
            ck.case(d == Ok(1), || format!("ell={ell} L({m0}): commutant {d:?}"));
        }
        let l0 = restricted_simple(0, ell).expect("valid");
        let d = commutant(&direct_sum(&l0, &l0).expect("sum"), Subset::All);
        ck.case(d == Ok(4), || format!("ell={ell} L(0)+L(0): commutant {d:?}"));
    }
    ck.finish()
}

pub fn simplicity(ells: &[i64]) -> CheckResult {
    let mut ck = Check::new("simplicity", json!({ "ell": ells }));
    for &ell in ells {
        let cartan = CartanData::sl2(ell).expect("sl2");
        for m0 in 0..ell {
            let l = restricted_simple(m0, ell).expect("valid m0");
            let c = is_simple(&l);
            let want = ((m0 + 1) * (m0 + 1)) as usize;
            ck.case(c.simple && c.span_dim == want, || format!("ell={ell} L({m0}): {c:?}"));
            let prim = primitive_vectors(&l);
            let w = Weight::embed(&[m0], &cartan).expect("embed");
            ck.case(prim.len() == 1 && prim[0].1.len() == 1 && prim[0].0 == w, || {
                format!("ell={ell} L({m0}): primitive vectors {prim:?}")
            });
        }
        let l0 = restricted_simple(0, ell).expect("valid");
        let c = is_simple(&direct_sum(&l0, &l0).expect("sum"));
        ck.case(!c.simple && c.span_dim == 1, || format!("ell={ell} L(0)+L(0): {c:?}"));
    }
    ck.finish()
}

// ---------------------------------------------------------------- driver

pub fn run_suite(suite: Suite, ells: &[i64], seed: u64) -> SuiteReport {
    let mut checks = match suite {
        Suite::Qcomb => vec![
            binom_negation(8, 8),
            binom_at_ell_is_carry(ells),
            carry_branches(ells),
            pascal_recurrence(10),
            q_lucas_factorization(ells),
            vandermonde(&[3, 5, 7, 9, 11, 13]),
        ],
        Suite::Weights => vec![
            embed_homomorphism(ells, 2000, 100, seed),
            negation_subtraction(ells, 500, 100, seed),
            weight_group_axioms(ells, 100, seed),
            dominance_order(ells, 100, seed),
            g2_conductor(),
        ],
        Suite::Uzero => vec![
            kshift_expansions(ells, 3),
            scalar_expansions(ells, 3),
            primitive_element_check(ells),
            coproduct_of_b(ells),
            cartan_algebra(ells, 30, seed),
        ],
        Suite::Pbw => vec![
            associativity(ells, 200, seed),
            divided_powers(ells),
            straightening(ells),
            section_property(ells, 3),
            frobenius_multiplicative(ells, 100, seed),
            classical_algebra(100, seed),
        ],
        Suite::Repn => vec![
            operator_compatibility(ells, 3),
            weight_shifts(ells, 3),
            tensor_theorem(ells, 4),
            annihilators(ells, 3),
            commutants(ells),
            simplicity(ells),
        ],
    };
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport {
        suite: suite.name().to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Runs the suites in name order. Timings are dropped unless requested so
/// that reports are byte-stable.
pub fn run(suites: &[Suite], ells: &[i64], seed: u64, timing: bool) -> Report {
    let mut suites = suites.to_vec();
    suites.sort_by_key(|s| s.name());
    suites.dedup();
    let mut reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, ells, seed)).collect();
    if !timing {
        for c in reports.iter_mut().flat_map(|r| r.checks.iter_mut()) {
            c.elapsed_ms = None;
        }
    }
    let checks = reports.iter().flat_map(|r| &r.checks);
    let total_cases = checks.clone().map(|c| c.cases).sum();
    let failed_checks = checks.filter(|c| !c.passed).count();
    Report {
        seed,
        ells: ells.to_vec(),
        passed: failed_checks == 0,
        total_cases,
        failed_checks,
        suites: reports,
    }
}
