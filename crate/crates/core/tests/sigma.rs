mod common;

use std::collections::BTreeMap;

use telesigma::lambda::{rat, rat_frac};
use telesigma::pipeline::{run, PipelineOptions};
use telesigma::schur::{schur, schur_dual, Partition};
use telesigma::{Rational, TelescopicData, USeries, LP};

fn opts(w: u32) -> PipelineOptions {
    PipelineOptions { weight_bound: w, ..Default::default() }
}

fn all_zero(td: &TelescopicData) -> BTreeMap<usize, Rational> {
    (0..td.lambda_catalog.len()).map(|k| (k, rat(0))).collect()
}

#[test]
fn schur_examples() {
    let s = schur(&[1], &Partition(vec![1]), 6).unwrap();
    assert_eq!(s, USeries::variable(&[1], 6, 0));
    let s = schur(&[1, 3], &Partition(vec![2, 1]), 10).unwrap();
    let mut expect = USeries::zero(&[1, 3], 10);
    expect.add_term(vec![3, 0], &LP::constant(rat_frac(1, 3)));
    expect.add_term(vec![0, 1], &LP::from_int(-1));
    assert_eq!(s, expect);
}

#[test]
fn schur_forms_agree() {
    for weights in [&[1u32][..], &[1, 3], &[1, 2, 3, 7], &[1, 2, 4, 5, 8]] {
        for n in 0..=9 {
            for mu in Partition::all_of(n) {
                let a = schur(weights, &mu, 12).unwrap();
                assert_eq!(a, schur_dual(weights, &mu, 12), "{weights:?} {mu:?}");
            }
        }
    }
}

#[test]
fn monomial_curves_give_schur_term() {
    for (a, w) in [(&[2u32, 3][..], 8u32), (&[2, 5], 10), (&[3, 4], 10), (&[4, 6, 5], 10)] {
        let td = TelescopicData::new(a).unwrap();
        let o = PipelineOptions { lambda_values: all_zero(&td), ..opts(w) };
        let out = run(&td, &o).unwrap();
        let lead = schur(&td.gaps, &Partition(td.mu.clone()), w).unwrap();
        assert_eq!(out.sigma.series, lead, "{a:?}");
        assert_eq!(out.data.tau.series, lead);
    }
}

#[test]
fn weierstrass_oracle_by_hand() {
    let g2 = LP::symbol(0);
    let g3 = LP::symbol(1);
    let w = common::weierstrass(13, &g2, &g3);
    assert_eq!(w[&1], LP::one());
    assert_eq!(w[&5], g2.scale(&rat_frac(-1, 240)));
    assert_eq!(w[&7], g3.scale(&rat_frac(-1, 840)));
    assert_eq!(w[&9], (&g2 * &g2).scale(&rat_frac(-1, 161280)));
}

#[test]
fn elliptic_sigma_matches_weierstrass() {
    let td = TelescopicData::new(&[2, 3]).unwrap();
    let id = |e: &[u32]| td.lambda_id(2, e).unwrap();
    let values: BTreeMap<usize, Rational> = [id(&[1, 1]), id(&[2, 0]), id(&[0, 1])].into_iter().map(|k| (k, rat(0))).collect();
    let out = run(&td, &PipelineOptions { lambda_values: values, ..opts(12) }).unwrap();
    let l10 = LP::symbol(id(&[1, 0]) as u16);
    let l00 = LP::symbol(id(&[0, 0]) as u16);
    let oracle = common::weierstrass(12, &l10.scale(&rat(-4)), &l00.scale(&rat(-4)));
    for d in 0..=12u32 {
        let got = out.sigma.series.coeff(&[d]);
        let want = oracle.get(&d).cloned().unwrap_or_default();
        assert_eq!(got, &want, "u^{d}");
    }
}
