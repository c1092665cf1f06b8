//! Ring membership of Hurwitz coefficients over `Z[λ]` and its rescalings.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::expansion::ExpansionSet;
use crate::lambda::{two_adic_denominator, Monomial, Rational, LP};
use crate::semigroup::TelescopicData;
use crate::series::TSeries;
use crate::sigma::SigmaExpansion;
use crate::useries::USeries;

/// Coefficient rings for verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RingSpec {
    ZLambda,
    /// Odd-weight symbols replaced by `λ/2`.
    ZLambdaTilde,
    /// Symbols with at least two odd exponents replaced by `λ/2`.
    ZLambdaBar,
    QLambda,
}

impl RingSpec {
    pub fn tag(self) -> &'static str {
        match self {
            RingSpec::ZLambda => "Z_lambda",
            RingSpec::ZLambdaTilde => "Z_lambda_tilde",
            RingSpec::ZLambdaBar => "Z_lambda_bar",
            RingSpec::QLambda => "Q_lambda",
        }
    }

    /// Per catalog entry: whether the ring contains `λ/2` for that symbol.
    pub fn halved(self, td: &TelescopicData) -> Vec<bool> {
        td.lambda_catalog
            .iter()
            .map(|l| match self {
                RingSpec::ZLambda | RingSpec::QLambda => false,
                RingSpec::ZLambdaTilde => l.weight % 2 == 1,
                RingSpec::ZLambdaBar => l.exponents.0.iter().filter(|&&j| j % 2 == 1).count() >= 2,
            })
            .collect()
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Membership test for a fixed ring and curve.
#[derive(Debug, Clone)]
pub struct Membership {
    pub ring: RingSpec,
    halved: Vec<bool>,
}

impl Membership {
    pub fn new(td: &TelescopicData, ring: RingSpec) -> Self {
        Membership { ring, halved: ring.halved(td) }
    }

    /// Whether `r · m` lies in the ring.
    pub fn term_ok(&self, m: &Monomial, r: &Rational) -> bool {
        if self.ring == RingSpec::QLambda {
            return true;
        }
        let (k, odd_free) = two_adic_denominator(r);
        if !odd_free {
            return false;
        }
        let allowed: u64 = m.0.iter().filter(|(s, _)| self.halved[*s as usize]).map(|&(_, e)| e as u64).sum();
        k <= allowed
    }

    /// The terms of `p` outside the ring.
    pub fn offending(&self, p: &LP) -> Vec<(Monomial, Rational)> {
        p.iter().filter(|(m, r)| !self.term_ok(m, r)).map(|(m, r)| (m.clone(), r)).collect()
    }
}

/// `p ∈ ring`, or the first offending term.
pub fn check_membership(td: &TelescopicData, p: &LP, ring: RingSpec) -> std::result::Result<(), (Monomial, Rational)> {
    match Membership::new(td, ring).offending(p).into_iter().next() {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// One offending coefficient: `value · monomial` appears at `exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub exponent: Vec<u32>,
    pub monomial: Monomial,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped(_) => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityReport {
    /// What was checked, e.g. `sigma` or `sigma^2`.
    pub subject: String,
    pub ring: RingSpec,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl IntegralityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    fn from_witnesses(subject: &str, ring: RingSpec, witnesses: Vec<Witness>) -> Self {
        let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
        IntegralityReport { subject: subject.to_string(), ring, verdict, witnesses }
    }

    fn skipped(subject: &str, ring: RingSpec, reason: String) -> Self {
        IntegralityReport { subject: subject.to_string(), ring, verdict: Verdict::Skipped(reason), witnesses: Vec::new() }
    }
}

/// Check every Hurwitz coefficient `coeff(n) · Π n_i!` of `s`.
pub fn check_hurwitz(td: &TelescopicData, s: &USeries, ring: RingSpec, subject: &str) -> IntegralityReport {
    let mem = Membership::new(td, ring);
    let mut witnesses = Vec::new();
    for (n, z) in s.hurwitz_terms() {
        for (monomial, value) in mem.offending(&z) {
            witnesses.push(Witness { exponent: n.clone(), monomial, value });
        }
    }
    IntegralityReport::from_witnesses(subject, ring, witnesses)
}

/// Check a table of plain coefficients indexed by `k`.
pub fn check_table<'a>(
    td: &TelescopicData,
    entries: impl IntoIterator<Item = (u32, &'a LP)>,
    ring: RingSpec,
    subject: &str,
) -> IntegralityReport {
    let mem = Membership::new(td, ring);
    let mut witnesses = Vec::new();
    for (k, p) in entries {
        for (monomial, value) in mem.offending(p) {
            witnesses.push(Witness { exponent: vec![k], monomial, value });
        }
    }
    IntegralityReport::from_witnesses(subject, ring, witnesses)
}

/// Every ℓ-row has at most one odd entry.
pub fn chi_condition(td: &TelescopicData) -> bool {
    td.ell.iter().all(|row| row.iter().filter(|&&l| l % 2 == 1).count() <= 1)
}

/// Which theorem checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckSelection {
    pub tilde: bool,
    pub bar: bool,
    pub square: bool,
}

impl CheckSelection {
    pub const ALL: CheckSelection = CheckSelection { tilde: true, bar: true, square: true };
}

/// Verdicts for `σ ∈ Z[λ̃]`, `σ² ∈ Z[λ]`, `σ ∈ Z[λ̄]` (only under the
/// χ-condition) and, when `c` is given, `2 c_k ∈ Z[λ]` for every listed `k`.
pub fn verify_theorems(
    se: &SigmaExpansion,
    c: Option<&BTreeMap<u32, LP>>,
    which: CheckSelection,
) -> Vec<IntegralityReport> {
    let td = &se.curve;
    let mut out = Vec::new();
    if which.tilde {
        out.push(check_hurwitz(td, &se.series, RingSpec::ZLambdaTilde, "sigma"));
    }
    if which.square {
        out.push(check_hurwitz(td, &se.squared(), RingSpec::ZLambda, "sigma^2"));
    }
    if which.bar {
        if chi_condition(td) {
            out.push(check_hurwitz(td, &se.series, RingSpec::ZLambdaBar, "sigma"));
        } else {
            let rows: Vec<String> = td.ell.iter().map(|r| format!("{r:?}")).collect();
            let probe = check_hurwitz(td, &se.series, RingSpec::ZLambdaBar, "sigma");
            let reason = format!(
                "chi-condition fails: some l-row in {} has two odd entries; empirical verdict {} with {} witnesses",
                rows.join(" "),
                probe.verdict.tag(),
                probe.witnesses.len()
            );
            out.push(IntegralityReport::skipped("sigma", RingSpec::ZLambdaBar, reason));
        }
    }
    if let Some(c) = c {
        let doubled: Vec<(u32, LP)> = c.iter().map(|(&k, v)| (k, v.scale_int(2))).collect();
        out.push(check_table(td, doubled.iter().map(|(k, v)| (*k, v)), RingSpec::ZLambda, "2c_k"));
    }
    out
}

/// The computed `c_k`, keyed by `k`.
pub fn c_table(es: &ExpansionSet) -> BTreeMap<u32, LP> {
    es.c_series.iter().map(|(k, v)| ((k + 1) as u32, v.clone())).collect()
}

/// `Π_i (Σ_k p_{i,k} t^k)^{e_i}` through the computed precision.
pub fn p_product(es: &ExpansionSet, e: &[u32]) -> Result<TSeries> {
    let mut acc = TSeries::one();
    for (i, &ei) in e.iter().enumerate() {
        let x = &es.p[i];
        let s = TSeries::from_coeffs(0, x.clone(), x.len() as i64 - 1);
        acc = acc.mul(&s.pow(ei as i64)?);
    }
    Ok(acc)
}

/// Odd-index coefficients of [`p_product`] that are not in `2 Z[λ]`.
pub fn parity_violations(es: &ExpansionSet, e: &[u32]) -> Result<Vec<(i64, LP)>> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let s = p_product(es, e)?;
    Ok(s.iter()
        .filter(|(k, v)| k % 2 != 0 && !v.scale(&half).is_integral())
        .map(|(k, v)| (k, v.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::rat_frac;

    fn l11(td: &TelescopicData) -> Monomial {
        Monomial::symbol(td.lambda_id(2, &[1, 1]).unwrap() as u16)
    }

    #[test]
    fn membership_examples() {
        let td = TelescopicData::new(&[2, 3]).unwrap();
        let m = l11(&td);
        let half = LP::monomial(m.clone(), rat_frac(1, 2));
        assert!(check_membership(&td, &half, RingSpec::ZLambdaTilde).is_ok());
        assert!(check_membership(&td, &half, RingSpec::ZLambda).is_err());
        let third = LP::monomial(m.clone(), rat_frac(1, 3));
        assert_eq!(check_membership(&td, &third, RingSpec::ZLambdaTilde), Err((m.clone(), rat_frac(1, 3))));
        assert!(check_membership(&td, &third, RingSpec::QLambda).is_ok());
        let sq = LP::monomial(m.mul(&m), rat_frac(1, 4));
        assert!(check_membership(&td, &sq, RingSpec::ZLambdaTilde).is_ok());
        let eighth = LP::monomial(m.mul(&m), rat_frac(1, 8));
        assert!(check_membership(&td, &eighth, RingSpec::ZLambdaTilde).is_err());
    }

    #[test]
    fn halving_sets() {
        let td = TelescopicData::new(&[2, 3]).unwrap();
        let tilde = RingSpec::ZLambdaTilde.halved(&td);
        let bar = RingSpec::ZLambdaBar.halved(&td);
        for (k, l) in td.lambda_catalog.iter().enumerate() {
            assert_eq!(tilde[k], l.weight % 2 == 1);
            assert_eq!(bar[k], l.exponents.0 == [1, 1]);
        }
    }

    #[test]
    fn chi_examples() {
        for a in [&[2u32, 3][..], &[2, 5], &[3, 4], &[3, 5], &[4, 5]] {
            assert!(chi_condition(&TelescopicData::new(a).unwrap()), "{a:?}");
        }
        assert!(!chi_condition(&TelescopicData::new(&[4, 6, 5]).unwrap()));
        // a_i = a^{m-i} b^{i-1}, a > b
        for a in [&[9u32, 6, 4][..], &[27, 18, 12, 8], &[25, 15, 9]] {
            assert!(chi_condition(&TelescopicData::new(a).unwrap()), "{a:?}");
        }
    }
}
