//! Truncated Laurent series in one variable `t` and in two variables
//! `(t_P, t_Q)`, with [`LP`] coefficients.
//!
//! Every series carries the last exponent (total degree for [`BiSeries`])
//! through which its coefficients are known. Arithmetic propagates this
//! pessimistically and reading beyond it is an error.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::lambda::{rat, Rational, LP};

/// Exponent standing in for "known to all orders".
pub const EXACT: i64 = i64::MAX / 4;

/// `Σ_{k=start}^{trunc} c_k t^k`. Coefficients past the stored vector are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSeries {
    start: i64,
    coeffs: Vec<LP>,
    trunc: i64,
}

impl TSeries {
    pub fn zero(trunc: i64) -> Self {
        TSeries { start: trunc + 1, coeffs: Vec::new(), trunc }
    }

    pub fn from_coeffs(start: i64, coeffs: Vec<LP>, trunc: i64) -> Self {
        let mut s = TSeries { start, coeffs, trunc };
        s.coeffs.truncate((trunc - start + 1).max(0) as usize);
        s.normalize();
        s
    }

    /// `c · t^k` known exactly.
    pub fn monomial(k: i64, c: LP) -> Self {
        Self::from_coeffs(k, vec![c], EXACT)
    }

    pub fn one() -> Self {
        Self::monomial(0, LP::one())
    }

    /// Exact polynomial given by a map exponent → coefficient.
    pub fn from_map(map: &BTreeMap<i64, LP>, trunc: i64) -> Self {
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero(trunc);
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![LP::zero(); (hi - lo + 1) as usize];
        for (&k, c) in map {
            coeffs[(k - lo) as usize] = c.clone();
        }
        Self::from_coeffs(lo, coeffs, trunc)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = self.trunc.saturating_add(1);
        }
    }

    /// Lowest exponent with a nonzero coefficient, or `trunc + 1` for a zero series.
    pub fn valuation(&self) -> i64 {
        self.start
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent with a stored coefficient.
    pub fn top(&self) -> i64 {
        self.start + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: i64) -> Result<&LP> {
        if k > self.trunc {
            return Err(Error::TruncationExceeded { requested: k, valid: self.trunc });
        }
        Ok(self.get(k))
    }

    /// Coefficient without the truncation check; callers must know `k <= trunc`.
    pub fn get(&self, k: i64) -> &LP {
        debug_assert!(k <= self.trunc);
        if k < self.start {
            return LP::zero_ref();
        }
        self.coeffs.get((k - self.start) as usize).unwrap_or(LP::zero_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &LP)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn truncate(&self, trunc: i64) -> TSeries {
        if trunc >= self.trunc {
            return self.clone();
        }
        Self::from_coeffs(self.start, self.coeffs.clone(), trunc)
    }

    pub fn shift(&self, k: i64) -> TSeries {
        let trunc = if self.trunc >= EXACT { EXACT } else { self.trunc + k };
        TSeries { start: self.start + k, coeffs: self.coeffs.clone(), trunc }
    }

    pub fn scale(&self, r: &Rational) -> TSeries {
        Self::from_coeffs(self.start, self.coeffs.iter().map(|c| c.scale(r)).collect(), self.trunc)
    }

    pub fn scale_lp(&self, p: &LP) -> TSeries {
        Self::from_coeffs(self.start, self.coeffs.iter().map(|c| c * p).collect(), self.trunc)
    }

    pub fn neg(&self) -> TSeries {
        self.scale(&rat(-1))
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        self.combine(other, true)
    }

    fn combine(&self, other: &TSeries, negate: bool) -> TSeries {
        let trunc = self.trunc.min(other.trunc);
        if self.is_zero() && other.is_zero() {
            return Self::zero(trunc);
        }
        let parts = [self, other];
        let live = parts.iter().filter(|s| !s.is_zero());
        let lo = live.clone().map(|s| s.start).min().unwrap();
        let hi = live.map(|s| s.top()).max().unwrap().min(trunc);
        if hi < lo {
            return Self::zero(trunc);
        }
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let mut c = self.get_unchecked(k).clone();
            if negate {
                c -= other.get_unchecked(k);
            } else {
                c += other.get_unchecked(k);
            }
            coeffs.push(c);
        }
        Self::from_coeffs(lo, coeffs, trunc)
    }

    fn get_unchecked(&self, k: i64) -> &LP {
        if k < self.start {
            return LP::zero_ref();
        }
        self.coeffs.get((k - self.start) as usize).unwrap_or(LP::zero_ref())
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let trunc = product_trunc(self.trunc, self.start, other.trunc, other.start);
        if self.is_zero() || other.is_zero() {
            return Self::zero(trunc);
        }
        let lo = self.start + other.start;
        let hi = (self.top() + other.top()).min(trunc);
        if hi < lo {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![LP::zero(); (hi - lo + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                coeffs[k].add_mul_assign(a, b);
            }
        }
        Self::from_coeffs(lo, coeffs, trunc)
    }

    /// Multiplicative inverse; the lowest coefficient must be a nonzero rational.
    pub fn inverse(&self) -> Result<TSeries> {
        if self.is_zero() {
            return Err(Error::NotAUnit("zero series".into()));
        }
        if self.trunc >= EXACT {
            return Err(Error::Argument("inverse of an exact series needs an explicit truncation".into()));
        }
        let v = self.start;
        let lead = self.coeffs[0]
            .as_constant()
            .ok_or_else(|| Error::NotAUnit(format!("leading coefficient {} is not constant", self.coeffs[0])))?;
        let inv_lead = lead.recip();
        let n = (self.trunc - v + 1).max(0) as usize;
        // (c + s_1 t + ...)(o_0 + o_1 t + ...) = 1 gives o_k = (δ_k0 − Σ s_j o_{k−j}) / c.
        let mut out: Vec<LP> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = if k == 0 { LP::one() } else { LP::zero() };
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_mul_assign(&-&self.coeffs[j], &out[k - j]);
            }
            out.push(acc.scale(&inv_lead));
        }
        Ok(Self::from_coeffs(-v, out, self.trunc - 2 * v))
    }

    /// Exact quotient `self / other` via the inverse of `other`.
    pub fn div(&self, other: &TSeries) -> Result<TSeries> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, n: i64) -> Result<TSeries> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut acc = TSeries::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> TSeries {
        let trunc = if self.trunc >= EXACT { EXACT } else { self.trunc - 1 };
        if self.is_zero() {
            return Self::zero(trunc);
        }
        let coeffs = self
            .iter()
            .map(|(k, c)| c.scale(&rat(k)))
            .collect();
        Self::from_coeffs(self.start - 1, coeffs, trunc)
    }

    /// True when every stored coefficient satisfies `pred(exponent, coeff)`.
    pub fn all(&self, mut pred: impl FnMut(i64, &LP) -> bool) -> bool {
        self.iter().all(|(k, c)| pred(k, c))
    }
}

fn product_trunc(ta: i64, va: i64, tb: i64, vb: i64) -> i64 {
    let x = if ta >= EXACT { EXACT } else { ta + vb };
    let y = if tb >= EXACT { EXACT } else { tb + va };
    x.min(y)
}

/// `Σ c_{i,j} t_P^i t_Q^j`, known for total degree `i + j <= trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    terms: BTreeMap<(i64, i64), LP>,
    trunc: i64,
}

impl BiSeries {
    pub fn zero(trunc: i64) -> Self {
        BiSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn from_terms(terms: BTreeMap<(i64, i64), LP>, trunc: i64) -> Self {
        let terms = terms
            .into_iter()
            .filter(|((i, j), c)| i + j <= trunc && !c.is_zero())
            .collect();
        BiSeries { terms, trunc }
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), LP> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i64, j: i64) -> Result<&LP> {
        if i + j > self.trunc {
            return Err(Error::TruncationExceeded { requested: i + j, valid: self.trunc });
        }
        Ok(self.terms.get(&(i, j)).unwrap_or(LP::zero_ref()))
    }

    /// Lowest total degree among nonzero terms, or `trunc + 1`.
    pub fn valuation(&self) -> i64 {
        self.terms.keys().map(|(i, j)| i + j).min().unwrap_or(self.trunc + 1)
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: &LP) {
        if i + j > self.trunc || c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// `a(t_P) · b(t_Q)`.
    pub fn tensor(a: &TSeries, b: &TSeries) -> BiSeries {
        let trunc = product_trunc(a.trunc(), a.valuation(), b.trunc(), b.valuation());
        let mut out = BiSeries::zero(trunc);
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                if i + j > trunc {
                    break;
                }
                out.add_term(i, j, &(ca * cb));
            }
        }
        out
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.trunc.min(other.trunc));
        for (&(i, j), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn add_assign(&mut self, other: &BiSeries) {
        self.trunc = self.trunc.min(other.trunc);
        self.terms.retain(|(i, j), _| i + j <= self.trunc);
        for (&(i, j), c) in &other.terms {
            self.add_term(i, j, c);
        }
    }

    pub fn scale(&self, r: &Rational) -> BiSeries {
        BiSeries::from_terms(self.terms.iter().map(|(k, c)| (*k, c.scale(r))).collect(), self.trunc)
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let trunc = product_trunc(self.trunc, self.valuation(), other.trunc, other.valuation());
        let mut out = BiSeries::zero(trunc);
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                if i1 + j1 + i2 + j2 <= trunc {
                    out.add_term(i1 + i2, j1 + j2, &(a * b));
                }
            }
        }
        out
    }

    pub fn truncate(&self, trunc: i64) -> BiSeries {
        BiSeries::from_terms(self.terms.clone(), trunc.min(self.trunc))
    }

    /// Swap `t_P` and `t_Q`.
    pub fn transpose(&self) -> BiSeries {
        BiSeries {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&(i, j), c)| self.terms.get(&(j, i)) == Some(c))
    }

    /// No negative exponent in either variable.
    pub fn is_regular(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i >= 0 && j >= 0)
    }

    /// Quotient `q` with `self = (t_P - t_Q) q`; the remainder must vanish.
    pub fn divide_diagonal(&self) -> Result<BiSeries> {
        if !self.is_regular() {
            return Err(Error::NonzeroRemainder("diagonal division of a non-regular series".into()));
        }
        let mut by_degree: BTreeMap<i64, BTreeMap<i64, &LP>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            by_degree.entry(i + j).or_default().insert(i, c);
        }
        let mut out = BiSeries::zero(self.trunc - 1);
        for (n, comp) in by_degree {
            // s_i = q_{i-1} - q_i, so q_i = -(s_0 + ... + s_i) and s_0 + ... + s_n = 0.
            let mut acc = LP::zero();
            for i in 0..=n {
                if let Some(c) = comp.get(&i) {
                    acc += *c;
                }
                if i < n {
                    out.add_term(i, n - 1 - i, &-&acc);
                }
            }
            if !acc.is_zero() {
                return Err(Error::NonzeroRemainder(format!("total degree {n}")));
            }
        }
        Ok(out)
    }

    /// Terms of total degree `n`, keyed by the `t_P` exponent.
    pub fn component(&self, n: i64) -> BTreeMap<i64, LP> {
        self.terms
            .iter()
            .filter(|((i, j), _)| i + j == n)
            .map(|(&(i, _), c)| (i, c.clone()))
            .collect()
    }

    /// Quotient `self / d` for regular series where the lowest component of
    /// `d`, of degree `v`, has coefficient one at `t_Q^v`. The division runs
    /// one total degree at a time and every degree must leave no remainder.
    pub fn divide_homogeneous(&self, d: &BiSeries) -> Result<BiSeries> {
        if !self.is_regular() || !d.is_regular() {
            return Err(Error::Argument("homogeneous division needs regular series".into()));
        }
        let v = d.valuation();
        if d.coeff(0, v)?.as_constant() != Some(Rational::one()) {
            return Err(Error::NotAUnit("divisor lacks a unit t_Q power in its lowest component".into()));
        }
        let sv = self.valuation();
        let lo = sv - v;
        let trunc = (self.trunc - v).min(d.trunc - 2 * v + sv);
        let dcomp: Vec<BTreeMap<i64, LP>> = (v..=v + (trunc - lo).max(0)).map(|k| d.component(k)).collect();
        let lead = &dcomp[0];
        let mut quot: Vec<BTreeMap<i64, LP>> = Vec::new();
        let mut out = BiSeries::zero(trunc);
        for n in lo..=trunc {
            let mut r = self.component(n + v);
            for (idx, qk) in quot.iter().enumerate() {
                let k = lo + idx as i64;
                for (&i, a) in qk {
                    for (&j, b) in &dcomp[(n - k) as usize] {
                        let e = r.entry(i + j).or_default();
                        e.add_mul_assign(&-a, b);
                    }
                }
            }
            let mut q: BTreeMap<i64, LP> = BTreeMap::new();
            for j in 0..=n + v {
                let mut acc = r.get(&j).cloned().unwrap_or_default();
                for (&k, l) in lead.range(1..) {
                    if let Some(qj) = q.get(&(j - k)) {
                        acc.add_mul_assign(&-l, qj);
                    }
                }
                if j <= n {
                    if !acc.is_zero() {
                        q.insert(j, acc);
                    }
                } else if !acc.is_zero() {
                    return Err(Error::NonzeroRemainder(format!("homogeneous division at degree {}", n + v)));
                }
            }
            for (&i, c) in &q {
                out.add_term(i, n - i, c);
            }
            quot.push(q);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::rat_frac;
    use proptest::prelude::*;

    fn poly(start: i64, cs: &[i64], trunc: i64) -> TSeries {
        TSeries::from_coeffs(start, cs.iter().map(|&c| LP::from_int(c)).collect(), trunc)
    }

    #[test]
    fn geometric_inverse() {
        let c = LP::symbol(0);
        let s = TSeries::from_coeffs(0, vec![LP::one(), c.clone()], 5);
        let inv = s.inverse().unwrap();
        for k in 0..=5 {
            let expected = c.pow(k as u32).scale(&rat(if k % 2 == 0 { 1 } else { -1 }));
            assert_eq!(inv.coeff(k).unwrap(), &expected);
        }
        assert!(inv.coeff(6).is_err());
    }

    #[test]
    fn inverse_of_one() {
        let one = TSeries::one().truncate(4);
        assert_eq!(one.inverse().unwrap(), one);
    }

    #[test]
    fn laurent_inverse_precision() {
        let s = poly(-3, &[2, 1, 5], 4);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.valuation(), 3);
        assert_eq!(inv.trunc(), 10);
        let p = s.mul(&inv);
        assert_eq!(p.trunc(), 4 + 3);
        assert_eq!(p.coeff(0).unwrap(), &LP::one());
        for k in 1..=7 {
            assert!(p.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn not_a_unit() {
        let s = TSeries::from_coeffs(0, vec![LP::symbol(0)], 3);
        assert!(matches!(s.inverse(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn derivative_and_pow() {
        let s = poly(-2, &[1, 0, 3], 6);
        let d = s.derivative();
        assert_eq!(d.coeff(-3).unwrap(), &LP::from_int(-2));
        assert_eq!(d.trunc(), 5);
        let sq = s.pow(2).unwrap();
        assert_eq!(sq.coeff(-4).unwrap(), &LP::one());
        assert_eq!(sq.coeff(-2).unwrap(), &LP::from_int(6));
        assert_eq!(sq.trunc(), 4);
        let back = sq.mul(&s.pow(-2).unwrap());
        assert_eq!(back.coeff(0).unwrap(), &LP::one());
    }

    #[test]
    fn diagonal_division_basics() {
        let mut s = BiSeries::zero(10);
        s.add_term(2, 0, &LP::one());
        s.add_term(0, 2, &LP::from_int(-1));
        let q = s.divide_diagonal().unwrap();
        let mut expect = BiSeries::zero(9);
        expect.add_term(1, 0, &LP::one());
        expect.add_term(0, 1, &LP::one());
        assert_eq!(q, expect);

        let mut sq = BiSeries::zero(10);
        sq.add_term(2, 0, &LP::one());
        sq.add_term(1, 1, &LP::from_int(-2));
        sq.add_term(0, 2, &LP::one());
        let q = sq.divide_diagonal().unwrap();
        let mut expect = BiSeries::zero(9);
        expect.add_term(1, 0, &LP::one());
        expect.add_term(0, 1, &LP::from_int(-1));
        assert_eq!(q, expect);

        let mut bad = BiSeries::zero(10);
        bad.add_term(1, 0, &LP::one());
        assert!(matches!(bad.divide_diagonal(), Err(Error::NonzeroRemainder(_))));
    }

    #[test]
    fn homogeneous_division() {
        // (t_Q^2 + t_P t_Q) * (1 + t_P) / (t_Q^2 + t_P t_Q) = 1 + t_P
        let mut d = BiSeries::zero(EXACT);
        d.add_term(0, 2, &LP::one());
        d.add_term(1, 1, &LP::one());
        let mut f = BiSeries::zero(EXACT);
        f.add_term(0, 0, &LP::one());
        f.add_term(1, 0, &LP::one());
        let p = d.mul(&f).truncate(8);
        let q = p.divide_homogeneous(&d).unwrap();
        assert_eq!(q.trunc(), 6);
        assert_eq!(q.terms(), f.terms());
    }

    fn arb_tseries() -> impl Strategy<Value = TSeries> {
        (-3i64..3, prop::collection::vec(-4i64..5, 1..6), 2i64..8).prop_map(|(start, cs, len)| {
            let mut cs = cs;
            if cs[0] == 0 {
                cs[0] = 1;
            }
            TSeries::from_coeffs(
                start,
                cs.iter().map(|&c| LP::constant(rat_frac(c, 1))).collect(),
                start + len,
            )
        })
    }

    proptest! {
        #[test]
        fn inverse_round_trip(s in arb_tseries()) {
            let p = s.mul(&s.inverse().unwrap());
            prop_assert_eq!(p.trunc(), s.trunc() - s.valuation());
            prop_assert_eq!(p.coeff(0).unwrap(), &LP::one());
            for k in 1..=p.trunc() {
                prop_assert!(p.coeff(k).unwrap().is_zero());
            }
        }

        #[test]
        fn mul_associative(a in arb_tseries(), b in arb_tseries(), c in arb_tseries()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn diagonal_division_round_trip(a in arb_tseries(), b in arb_tseries()) {
            let a = a.shift(3 - a.valuation());
            let b = b.shift(3 - b.valuation());
            let f = BiSeries::tensor(&a, &b);
            let mut diag = BiSeries::zero(EXACT);
            diag.add_term(1, 0, &LP::one());
            diag.add_term(0, 1, &LP::from_int(-1));
            let s = f.mul(&diag);
            let q = s.divide_diagonal().unwrap();
            let expect = f.truncate(q.trunc());
            prop_assert_eq!(q.terms(), expect.terms());
        }
    }
}
