use std::collections::BTreeMap;

use proptest::prelude::*;

use telesigma::integrality::{check_hurwitz, check_membership, verify_theorems, CheckSelection, Membership, RingSpec, Verdict};
use telesigma::json;
use telesigma::lambda::{rat, rat_frac};
use telesigma::pipeline::{run, PipelineOptions};
use telesigma::{Monomial, Rational, TelescopicData, LP};

fn curve() -> TelescopicData {
    TelescopicData::new(&[4, 6, 5]).unwrap()
}

/// Random polynomial in the 14 symbols of (4,6,5) with denominators `2^k` or `3`.
fn arb_poly() -> impl Strategy<Value = LP> {
    let term = (proptest::collection::vec((0u16..14, 1u16..3), 0..3), -5i64..6, prop_oneof![Just(1i64), Just(2), Just(4), Just(3)]);
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        let mut p = LP::zero();
        for (syms, n, d) in terms {
            let mut m = LP::one();
            for (s, k) in syms {
                m = &m * &LP::symbol(s).pow(k as u32);
            }
            p += &m.scale(&rat_frac(n, d));
        }
        p
    })
}

const RINGS: [RingSpec; 4] = [RingSpec::ZLambda, RingSpec::ZLambdaTilde, RingSpec::ZLambdaBar, RingSpec::QLambda];

proptest! {
    #[test]
    fn rings_are_nested(p in arb_poly()) {
        let td = curve();
        let ok = |r| check_membership(&td, &p, r).is_ok();
        if ok(RingSpec::ZLambda) {
            prop_assert!(ok(RingSpec::ZLambdaTilde) && ok(RingSpec::ZLambdaBar));
        }
        prop_assert!(ok(RingSpec::QLambda));
        prop_assert_eq!(ok(RingSpec::ZLambda), p.is_integral());
    }

    #[test]
    fn rings_are_closed(p in arb_poly(), q in arb_poly()) {
        let td = curve();
        for ring in RINGS {
            let ok = |x: &LP| check_membership(&td, x, ring).is_ok();
            if ok(&p) && ok(&q) {
                prop_assert!(ok(&(&p * &q)), "{ring}: product left the ring");
                prop_assert!(ok(&(&p - &q)), "{ring}: difference left the ring");
            }
        }
    }

    #[test]
    fn witnesses_recheck(p in arb_poly()) {
        let td = curve();
        for ring in RINGS {
            let mem = Membership::new(&td, ring);
            let halved = ring.halved(&td);
            for (m, r) in mem.offending(&p) {
                prop_assert_eq!(p.coeff(&m), r.clone());
                // scaling by 2^(halved count) must leave a non-integer
                let h: u32 = m.0.iter().filter(|(s, _)| halved[*s as usize]).map(|&(_, k)| k as u32).sum();
                let scaled = r * Rational::from_integer(num_bigint::BigInt::from(2).pow(h));
                prop_assert!(!scaled.is_integer());
            }
        }
    }
}

#[test]
fn tilde_and_bar_halve_different_symbols() {
    let td = curve();
    let tilde = RingSpec::ZLambdaTilde.halved(&td);
    let bar = RingSpec::ZLambdaBar.halved(&td);
    for (k, l) in td.lambda_catalog.iter().enumerate() {
        let odd = l.exponents.0.iter().filter(|&&j| j % 2 == 1).count();
        assert_eq!(tilde[k], l.weight % 2 == 1, "{l}");
        assert_eq!(bar[k], odd >= 2, "{l}");
    }
    assert_ne!(tilde, bar);
}

#[test]
fn vanishing_lambda_passes_everything() {
    for a in [&[2u32, 3][..], &[3, 4], &[4, 6, 5]] {
        let td = TelescopicData::new(a).unwrap();
        let zeros: BTreeMap<usize, Rational> = (0..td.lambda_catalog.len()).map(|k| (k, rat(0))).collect();
        let out = run(&td, &PipelineOptions { weight_bound: 8, lambda_values: zeros, ..Default::default() }).unwrap();
        for r in verify_theorems(&out.sigma, None, CheckSelection::ALL) {
            assert!(!r.failed(), "{a:?}: {} in {}", r.subject, r.ring);
        }
    }
}

#[test]
fn corrupted_coefficient_yields_witness() {
    let td = TelescopicData::new(&[2, 5]).unwrap();
    let out = run(&td, &PipelineOptions { weight_bound: 10, ..Default::default() }).unwrap();
    let mut se = out.sigma.clone();
    // u2^3 has weight 9, so its coefficient has λ-weight 6, like λ^(2)_{2,0}
    let sym = Monomial::symbol(td.lambda_id(2, &[2, 0]).unwrap() as u16);
    let n = vec![0u32, 3];
    let before = se.series.hurwitz(&n).coeff(&sym);
    se.series.add_term(n.clone(), &LP::monomial(sym.clone(), rat_frac(1, 18)));
    let r = check_hurwitz(&td, &se.series, RingSpec::ZLambdaTilde, "sigma");
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(r.witnesses.len(), 1);
    let w = &r.witnesses[0];
    assert_eq!((&w.exponent, &w.monomial), (&n, &sym));
    assert_eq!(w.value, before + rat_frac(1, 3));
}

#[test]
fn sigma_json_round_trips() {
    for (a, w) in [(&[2u32, 3][..], 12u32), (&[2, 5], 10)] {
        let td = TelescopicData::new(a).unwrap();
        let out = run(&td, &PipelineOptions { weight_bound: w, ..Default::default() }).unwrap();
        let v = json::sigma_expansion(&out.sigma);
        let back = json::parse_sigma_expansion(&v).unwrap();
        assert_eq!(back.series, out.sigma.series);
        assert_eq!(back.b, out.sigma.b);
        assert_eq!(json::to_string(&json::sigma_expansion(&back)), json::to_string(&v));
    }
}
