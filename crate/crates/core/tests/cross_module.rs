use hyperzeta::exactnum::{cyclotomic_field, rat_int};
use hyperzeta::pbw::PBWElem;
use hyperzeta::qcomb::{gauss_binom_at, short_ladic};
use hyperzeta::repn::{classical_simple, frobenius_twist, restricted_simple, tensor_module};
use hyperzeta::uzero::{kshift_binom, UZeroElem};
use hyperzeta::weights::{CartanData, Weight};
use proptest::prelude::*;

#[test]
fn b_acts_on_embedded_weights_by_the_carry() {
    for ell in [3i64, 5, 7] {
        let c = CartanData::sl2(ell).unwrap();
        let f = cyclotomic_field(ell).unwrap();
        let b = UZeroElem::b(&f);
        let binom = kshift_binom(ell, 0, ell as u32).unwrap();
        for m in -4 * ell..=4 * ell {
            let w = Weight::embed(&[m], &c).unwrap();
            let m1 = short_ladic(m, ell).m1;
            assert_eq!(w.eval_b(1).unwrap(), rat_int(m1));
            assert_eq!(b.eval_weight(&w), f.from_int(m1));
            assert_eq!(binom.eval(m), gauss_binom_at(m, ell as u32, ell, 1).unwrap());
            assert_eq!(binom.eval(m), f.from_int(m1));
        }
    }
}

#[test]
fn module_labels_match_cartan_action() {
    let ell = 5;
    let l = restricted_simple(3, ell).unwrap();
    let v = frobenius_twist(&classical_simple(2), ell).unwrap();
    let m = tensor_module(&l, &v).unwrap();
    let f = m.field().clone();
    let h = kshift_binom(ell, 3, 2).unwrap().add(&UZeroElem::k_pow(&f, 2));
    let rep = m.rep_of_uzero(&h);
    for (i, w) in m.labels().iter().enumerate() {
        assert_eq!(rep.get(i, i), &h.eval_weight(w));
    }
}

fn monomial(ell: i64, (b, c, d, a): (u32, i64, u32, u32)) -> PBWElem {
    let f = cyclotomic_field(ell).unwrap();
    PBWElem::monomial(&f, b, c, d, a, f.one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representation_is_multiplicative(
        x in (0u32..8, 0i64..3, 0u32..3, 0u32..8),
        y in (0u32..8, 0i64..3, 0u32..3, 0u32..8),
        m0 in 0i64..3,
        p in 0u32..3,
    ) {
        let ell = 3;
        let l = restricted_simple(m0, ell).unwrap();
        let v = frobenius_twist(&classical_simple(p), ell).unwrap();
        let m = tensor_module(&l, &v).unwrap();
        let (x, y) = (monomial(ell, x), monomial(ell, y));
        prop_assert_eq!(m.rep_of_pbw(&x.mul(&y)), &m.rep_of_pbw(&x) * &m.rep_of_pbw(&y));
    }

    #[test]
    fn embed_is_additive_in_rank_two(
        a in prop::collection::vec(-100i64..=100, 2),
        b in prop::collection::vec(-100i64..=100, 2),
        ell in prop::sample::select(vec![5i64, 7]),
    ) {
        let c = CartanData::of_type('G', 2, ell).unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = Weight::embed(&sum, &c).unwrap();
        let rhs = Weight::embed(&a, &c).unwrap().add(&Weight::embed(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
