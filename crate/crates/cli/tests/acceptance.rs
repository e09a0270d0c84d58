//! Acceptance run: one PASS/FAIL line per criterion, with the pinned
//! parameter ranges and wall-clock limits. Exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperzeta::exactnum::cyclotomic_field;
use hyperzeta::pbw::PBWElem;
use hyperzeta_cli::verify::{self, CheckResult};
use hyperzeta_cli::{expr, render};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Result<String, String>,
}

fn all_pass(results: Vec<CheckResult>) -> Result<String, String> {
    let cases: usize = results.iter().map(|r| r.cases).sum();
    let failures: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}: {} failed, first: {}", r.id, r.failed, r.failures.join("; ")))
        .collect();
    if failures.is_empty() {
        Ok(format!("{cases} cases"))
    } else {
        Err(failures.join(" | "))
    }
}

fn random_normal_form(rng: &mut ChaCha8Rng, ell: i64) -> PBWElem {
    let f = cyclotomic_field(ell).unwrap();
    let mut x = PBWElem::zero(&f);
    for _ in 0..rng.gen_range(0..5) {
        let coeff = (0..ell).fold(f.zero(), |acc, k| {
            let r = hyperzeta::exactnum::rat(rng.gen_range(-4..=4), rng.gen_range(1..=4));
            acc + f.zeta_pow(k).scale(&r)
        });
        let top = 2 * ell as u32 + 2;
        x = x.add(&PBWElem::monomial(
            &f,
            rng.gen_range(0..=top),
            rng.gen_range(0..ell),
            rng.gen_range(0..=3),
            rng.gen_range(0..=top),
            coeff,
        ));
    }
    x
}

fn cli_end_to_end() -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperzeta"))
        .args(["verify", "--suite", "all", "--ell", "3,5"])
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("verify exited with {:?}", out.status.code()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..100 {
        let ell = [3, 5, 7][i % 3];
        let f = cyclotomic_field(ell).unwrap();
        let x = random_normal_form(&mut rng, ell);
        let text = render::pbw_text(&x);
        let parsed = expr::parse(&text).map_err(|e| format!("{text}: {e}"))?;
        let back = expr::eval(&parsed, &f, 10_000).map_err(|e| format!("{text}: {e}"))?;
        if back != x {
            return Err(format!("round trip changed {text} into {}", render::pbw_text(&back)));
        }
    }
    Ok("verify exit 0, 100 round trips".to_string())
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            number: 1,
            title: "Gaussian binomial negation identity, m in [-8,8], t in [0,8]",
            limit: Duration::from_secs(5),
            run: || all_pass(vec![verify::binom_negation(8, 8)]),
        },
        Criterion {
            number: 2,
            title: "[m over ell] at zeta equals m1, ell in {3,5,7}, m in [-3ell,3ell]",
            limit: Duration::from_secs(5),
            run: || all_pass(vec![verify::binom_at_ell_is_carry(&[3, 5, 7])]),
        },
        Criterion {
            number: 3,
            title: "carry branch formulas vs direct specialization, ell in {3,5,7}, m in [0,ell), c in [0,3ell)",
            limit: Duration::from_secs(60),
            run: || all_pass(vec![verify::carry_branches(&[3, 5, 7])]),
        },
        Criterion {
            number: 4,
            title: "Cartan expansions and scalar identities, ell = 5, c in [0,15)",
            limit: Duration::from_secs(30),
            run: || all_pass(vec![verify::kshift_expansions(&[5], 3), verify::scalar_expansions(&[5], 3)]),
        },
        Criterion {
            number: 5,
            title: "embed is a homomorphism (18000 pairs in [-100,100]^n, A1/A2/B2, ell in {3,5,7}); negation and difference",
            limit: Duration::from_secs(60),
            run: || {
                all_pass(vec![
                    verify::embed_homomorphism(&[3, 5, 7], 2000, 100, 0),
                    verify::negation_subtraction(&[3, 5, 7], 2000, 100, 0),
                ])
            },
        },
        Criterion {
            number: 6,
            title: "primitive element: zero residual, 1-dim primitive space, a0 = (ell-1)/(2ell), ell in {3,5,7}",
            limit: Duration::from_secs(10),
            run: || all_pass(vec![verify::primitive_element_check(&[3, 5, 7])]),
        },
        Criterion {
            number: 7,
            title: "Vandermonde inverse, ell in {3,...,13} odd",
            limit: Duration::from_secs(60),
            run: || all_pass(vec![verify::vandermonde(&[3, 5, 7, 9, 11, 13])]),
        },
        Criterion {
            number: 8,
            title: "PBW associativity, 200 triples per ell, indices <= 2ell+2, ell in {3,5}",
            limit: Duration::from_secs(60),
            run: || all_pass(vec![verify::associativity(&[3, 5], 200, 0)]),
        },
        Criterion {
            number: 9,
            title: "Fr after gamma is the identity on f^s h^t e^r, s,t,r <= 3, ell in {3,5}",
            limit: Duration::from_secs(60),
            run: || all_pass(vec![verify::section_property(&[3, 5], 3)]),
        },
        Criterion {
            number: 10,
            title: "operator compatibility on L(m0) and L(m0)xV(p)^Fr, m0 < ell, p <= 3, ell in {3,5}",
            limit: Duration::from_secs(120),
            run: || all_pass(vec![verify::operator_compatibility(&[3, 5], 3)]),
        },
        Criterion {
            number: 11,
            title: "weight shifts of F^(t), E^(t) with every carry branch hit, same modules",
            limit: Duration::from_secs(120),
            run: || all_pass(vec![verify::weight_shifts(&[3, 5], 3)]),
        },
        Criterion {
            number: 12,
            title: "tensor product theorem, ell = 3 m in [0,12], ell = 5 m in [0,20]",
            limit: Duration::from_secs(300),
            run: || all_pass(vec![verify::tensor_theorem(&[3, 5], 4)]),
        },
        Criterion {
            number: 13,
            title: "annihilator of L(m0)xV(p)^Fr equals that of L(m0), codim (m0+1)^2, p <= 3, ell in {3,5}",
            limit: Duration::from_secs(300),
            run: || all_pass(vec![verify::annihilators(&[3, 5], 3)]),
        },
        Criterion {
            number: 14,
            title: "commutant of the restricted image on every L(m0) is 1-dimensional, ell in {3,5,7}",
            limit: Duration::from_secs(60),
            run: || all_pass(vec![verify::commutants(&[3, 5, 7])]),
        },
        Criterion {
            number: 15,
            title: "CLI: verify --suite all --ell 3,5 exits 0; 100 normal-form round trips",
            limit: Duration::from_secs(300),
            run: cli_end_to_end,
        },
    ]
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}, over time limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {} [{detail}; {:.2}s of {}s]",
            c.number,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("acceptance: {} of 15 criteria passed", 15 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
