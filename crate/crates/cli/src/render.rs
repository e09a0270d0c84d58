//! Text and JSON renderings of scalars, weights, matrices and normal forms.

use hyperzeta::exactnum::{CycScalar, ExactMatrix, Rat};
use hyperzeta::pbw::{ClassicalElem, PBWElem, PbwTerm};
use hyperzeta::weights::Weight;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Integers that fit in `i64` become JSON numbers, everything else a string.
pub fn rat_json(r: &Rat) -> Value {
    if r.is_integer() {
        if let Some(n) = r.to_integer().to_i64() {
            return json!(n);
        }
    }
    json!(r.to_string())
}

/// Coefficients on `1, z, ..., z^(phi-1)` as strings.
pub fn coeff_strings(x: &CycScalar) -> Vec<String> {
    x.coeffs().iter().map(ToString::to_string).collect()
}

pub fn scalar_json(x: &CycScalar) -> Value {
    json!({ "ell": x.ell(), "coeffs": coeff_strings(x) })
}

pub fn weight_json(w: &Weight) -> Value {
    json!({
        "lam0": w.lam0(),
        "lam1": w.lam1().iter().map(rat_json).collect::<Vec<_>>(),
    })
}

/// `((lam0), (lam1))` with components separated by commas.
pub fn weight_text(w: &Weight) -> String {
    let l0: Vec<String> = w.lam0().iter().map(ToString::to_string).collect();
    let l1: Vec<String> = w.lam1().iter().map(ToString::to_string).collect();
    format!("(({}), ({}))", l0.join(", "), l1.join(", "))
}

/// Rows of entries, each entry a coefficient vector.
pub fn matrix_json(m: &ExactMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(|x| json!(coeff_strings(x))).collect()))
        .collect();
    Value::Array(rows)
}

fn monomial_text(t: &PbwTerm) -> String {
    let mut parts = Vec::new();
    if t.b > 0 {
        parts.push(format!("F^({})", t.b));
    }
    match t.c {
        0 => {}
        1 => parts.push("K".to_string()),
        c => parts.push(format!("K^{c}")),
    }
    match t.d {
        0 => {}
        1 => parts.push("B".to_string()),
        d => parts.push(format!("B^{d}")),
    }
    if t.a > 0 {
        parts.push(format!("E^({})", t.a));
    }
    parts.join(" ")
}

/// `(coeff) F^(b) K^c B^d E^(a) + ...`, readable back by the parser.
pub fn pbw_text(x: &PBWElem) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.terms()
        .iter()
        .map(|t| {
            let mono = monomial_text(t);
            if mono.is_empty() {
                format!("({})", t.coeff)
            } else {
                format!("({}) {mono}", t.coeff)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn pbw_json(x: &PBWElem) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .iter()
        .map(|t| json!({ "b": t.b, "c": t.c, "d": t.d, "a": t.a, "coeff": scalar_json(&t.coeff) }))
        .collect();
    json!({ "ell": x.ell(), "terms": terms, "text": pbw_text(x) })
}

pub fn classical_text(x: &ClassicalElem) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.terms()
        .map(|((s, t, r), c)| format!("({c}) f^{s} h^{t} e^{r}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperzeta::exactnum::{cyclotomic_field, rat};
    use hyperzeta::weights::CartanData;

    #[test]
    fn renders_weights() {
        let c = CartanData::sl2(5).unwrap();
        let w = Weight::embed(&[-7], &c).unwrap();
        assert_eq!(weight_json(&w), json!({"lam0": [3], "lam1": [-2]}));
        let h = Weight::new(&c, vec![1], vec![rat(1, 2)]).unwrap();
        assert_eq!(weight_json(&h), json!({"lam0": [1], "lam1": ["1/2"]}));
        assert_eq!(weight_text(&w), "((3), (-2))");
    }

    #[test]
    fn renders_normal_forms() {
        let f = cyclotomic_field(5).unwrap();
        let x = PBWElem::monomial(&f, 2, 1, 2, 3, f.zeta_pow(2)).add(&PBWElem::scalar(f.from_rat(&rat(-1, 2))));
        assert_eq!(pbw_text(&x), "(-1/2) + (z^2) F^(2) K B^2 E^(3)");
        assert_eq!(pbw_text(&PBWElem::zero(&f)), "0");
        let j = pbw_json(&PBWElem::k(&f));
        assert_eq!(j["terms"][0]["coeff"], json!({"ell": 5, "coeffs": ["1", "0", "0", "0"]}));
    }
}
