use std::collections::BTreeMap;

use telesigma::curve::{CurveModel, CurvePolynomial};
use telesigma::expansion::{build_d, choose_b, ExpansionSet};
use telesigma::lambda::rat;
use telesigma::series::TSeries;
use telesigma::{TelescopicData, LP};

fn model(a: &[u32]) -> CurveModel {
    CurveModel::new(&TelescopicData::new(a).unwrap()).unwrap()
}

fn sym(cm: &CurveModel, i: usize, e: &[u32]) -> LP {
    LP::symbol(cm.td.lambda_id(i, e).unwrap() as u16)
}

#[test]
fn canonical_b() {
    assert_eq!(choose_b(&TelescopicData::new(&[2, 3]).unwrap()), vec![1, -1]);
    assert_eq!(choose_b(&TelescopicData::new(&[4, 6, 5]).unwrap()), vec![-2, 2, -1]);
    assert_eq!(choose_b(&TelescopicData::new(&[2, 5]).unwrap()), vec![2, -1]);
}

#[test]
fn d_matrices() {
    let td = TelescopicData::new(&[2, 3]).unwrap();
    let d = build_d(&td, &[1, -1]).unwrap();
    assert_eq!(d.entries, vec![vec![-3, 2], vec![1, -1]]);
    assert_eq!(d.det, 1);
    let td = TelescopicData::new(&[4, 6, 5]).unwrap();
    let d = build_d(&td, &[1, 0, -1]).unwrap();
    assert_eq!(d.entries, vec![vec![-3, 2, 0], vec![-1, -1, 2], vec![1, 0, -1]]);
    assert_eq!(d.det, -1);
    for (row, expect) in d.entries.iter().zip([0, 0, -1]) {
        let v: i64 = row.iter().zip(&td.a).map(|(x, &a)| x * a as i64).sum();
        assert_eq!(v, expect);
    }
    for i in 0..3 {
        for j in 0..3 {
            let v: i64 = (0..3).map(|k| d.entries[i][k] * d.inverse[k][j]).sum();
            assert_eq!(v, (i == j) as i64);
        }
    }
    assert!(build_d(&td, &[1, 1, 1]).is_err());
}

fn zero_all(cm: &CurveModel) -> BTreeMap<u16, telesigma::Rational> {
    (0..cm.weights.len() as u16).map(|s| (s, rat(0))).collect()
}

#[test]
fn monomial_curve_coordinates() {
    let cm = model(&[2, 3]);
    let es = ExpansionSet::new(&cm, &[1, -1], 8).unwrap();
    let z = zero_all(&cm);
    for (i, a) in [2i64, 3].iter().enumerate() {
        for (k, c) in es.x_series[i].iter() {
            let v = c.substitute(&z);
            assert_eq!(v.is_zero(), k != -a, "x_{} at t^{k}", i + 1);
        }
    }
    let w = es.omega_series[0].iter().map(|(k, c)| (k, c.substitute(&z))).find(|(_, c)| !c.is_zero());
    assert_eq!(w, Some((0, LP::one())));
}

/// Solves `P^2 = P^3 + λ11 t P^2 + λ20 t^2 P^2 + λ01 t^3 P + λ10 t^4 P + λ00 t^6`
/// by undetermined coefficients; with `b = (1, -1)` both coordinates share `P`.
fn elliptic_oracle(cm: &CurveModel, order: usize) -> Vec<LP> {
    let mut p = vec![LP::one()];
    let l11 = sym(cm, 2, &[1, 1]);
    let l20 = sym(cm, 2, &[2, 0]);
    let l01 = sym(cm, 2, &[0, 1]);
    let l10 = sym(cm, 2, &[1, 0]);
    let l00 = sym(cm, 2, &[0, 0]);
    for l in 1..=order {
        let mut trial = p.clone();
        trial.push(LP::zero());
        let s = TSeries::from_coeffs(0, trial, l as i64);
        let sq = s.mul(&s);
        let cube = sq.mul(&s);
        let t = |k: i64, c: &LP| TSeries::monomial(k, c.clone());
        let rhs = cube
            .add(&sq.mul(&t(1, &l11)))
            .add(&sq.mul(&t(2, &l20)))
            .add(&s.mul(&t(3, &l01)))
            .add(&s.mul(&t(4, &l10)))
            .add(&t(6, &l00).truncate(l as i64));
        // Linear part of P^3 - P^2 at order l is p_l.
        let residual = rhs.sub(&sq);
        p.push(-residual.coeff(l as i64).unwrap().clone());
    }
    p
}

#[test]
fn elliptic_coefficients_match_direct_substitution() {
    let cm = model(&[2, 3]);
    let es = ExpansionSet::new(&cm, &[1, -1], 10).unwrap();
    let oracle = elliptic_oracle(&cm, 10);
    assert_eq!(es.p[0], oracle);
    assert_eq!(es.p[1], oracle);
    assert_eq!(es.p[0][1], -sym(&cm, 2, &[1, 1]));
}

#[test]
fn defining_equations_vanish() {
    for a in [&[2u32, 3][..], &[2, 5], &[4, 6, 5], &[3, 4]] {
        let cm = model(a);
        let b = choose_b(&cm.td);
        let es = ExpansionSet::new(&cm, &b, 9).unwrap();
        let mut cache = es.monomials();
        for f in &cm.f {
            assert!(cache.expand(f).is_zero(), "F vanishes for {a:?}");
        }
        let mut prod = TSeries::one();
        for (x, &bi) in es.x_series.iter().zip(&b) {
            prod = prod.mul(&x.pow(bi).unwrap());
        }
        assert_eq!(prod, TSeries::monomial(1, LP::one()).truncate(prod.trunc()));
    }
}

#[test]
fn normal_form_commutes_with_expansion() {
    let cm = model(&[4, 6, 5]);
    let es = ExpansionSet::new(&cm, &choose_b(&cm.td), 8).unwrap();
    let mut cache = es.monomials();
    for e in [[0u32, 2, 1], [1, 1, 2], [0, 3, 0]] {
        let p = CurvePolynomial::monomial(e.to_vec(), LP::one());
        let lhs = cache.expand(&p);
        let rhs = cache.expand(&cm.normal_form(&p));
        let n = lhs.trunc().min(rhs.trunc());
        assert_eq!(lhs.truncate(n), rhs.truncate(n));
    }
}

#[test]
fn differentials_of_genus_four_curve() {
    let cm = model(&[4, 6, 5]);
    let es = ExpansionSet::new(&cm, &choose_b(&cm.td), 8).unwrap();
    let leads: Vec<i64> = es.omega_series.iter().map(|w| w.valuation()).collect();
    assert_eq!(leads, vec![0, 1, 2, 6]);
    for k in 1..=8 {
        let ck = es.c(k).unwrap();
        assert!(ck.is_homogeneous_of(&cm.weights, k as i64));
        assert!(ck.scale(&rat(2)).is_integral());
    }
}

#[test]
fn coefficients_are_graded_integral() {
    let cm = model(&[4, 6, 5]);
    let es = ExpansionSet::new(&cm, &choose_b(&cm.td), 10).unwrap();
    for pi in &es.p {
        assert_eq!(pi[0], LP::one());
        for (k, c) in pi.iter().enumerate() {
            assert!(c.is_integral());
            assert!(c.is_homogeneous_of(&cm.weights, k as i64));
        }
    }
}
