use hyperzeta::exactnum::{cyclotomic_field, rat};
use hyperzeta::pbw::PBWElem;
use hyperzeta_cli::{expr, render};
use proptest::prelude::*;

/// `(b, c, d, a, [(num, den) per power of z])`
type Term = (u32, i64, u32, u32, Vec<(i64, i64)>);

fn normal_form(ell: i64, terms: &[Term]) -> PBWElem {
    let f = cyclotomic_field(ell).unwrap();
    terms.iter().fold(PBWElem::zero(&f), |acc, (b, c, d, a, coeffs)| {
        let coeff = coeffs
            .iter()
            .enumerate()
            .fold(f.zero(), |s, (k, &(n, den))| s + f.zeta_pow(k as i64).scale(&rat(n, den)));
        acc.add(&PBWElem::monomial(&f, *b, *c, *d, *a, coeff))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_normal_forms_parse_back(
        ell in prop::sample::select(vec![3i64, 5, 7]),
        terms in prop::collection::vec(
            (0u32..9, 0i64..7, 0u32..4, 0u32..9, prop::collection::vec((-5i64..=5, 1i64..=6), 1..4)),
            0..5,
        ),
    ) {
        let x = normal_form(ell, &terms);
        let text = render::pbw_text(&x);
        let f = cyclotomic_field(ell).unwrap();
        let back = expr::eval(&expr::parse(&text).unwrap(), &f, 10_000).unwrap();
        prop_assert_eq!(back, x, "{}", text);
    }

    #[test]
    fn parser_never_panics(s in "[EFKBz0-9()^*/+ -]{0,24}") {
        if let Ok(e) = expr::parse(&s) {
            let f = cyclotomic_field(3).unwrap();
            let _ = expr::eval(&e, &f, 500);
        }
    }
}
