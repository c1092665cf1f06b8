//! The defining equations `F_i`, their Jacobian minors `det G_k`, the
//! divided-difference matrix `H`, and reduction of monomials onto the basis
//! of monomials with exponents in `B(A_m)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lambda::{rat, LP};
use crate::semigroup::{ExponentVector, TelescopicData};

/// Polynomial in `nvars` variables with λ-polynomial coefficients.
///
/// Curve-level code uses `nvars = m` for `x_1..x_m`; bivariate objects use
/// `nvars = 2m` with `y_k` stored at position `m + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, LP>,
}

impl CurvePolynomial {
    pub fn zero(nvars: usize) -> Self {
        CurvePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: LP) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, LP::one())
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Self::monomial(e, LP::one())
    }

    pub fn monomial(exps: Vec<u32>, c: LP) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, &c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, LP> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> &LP {
        self.terms.get(exps).unwrap_or(LP::zero_ref())
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: &LP) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&LP::from_int(-1))
    }

    pub fn scale(&self, c: &LP) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, d) in &self.terms {
            out.add_term(e.clone(), &(d * c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Vec<u32>, LP> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                acc.entry(e).or_default().add_mul_assign(ca, cb);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        CurvePolynomial { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut e2 = e.clone();
                e2[k] -= 1;
                out.add_term(e2, &c.scale(&rat(e[k] as i64)));
            }
        }
        out
    }

    /// Move variable `k` to position `map[k]` in a ring with `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (k, &ek) in e.iter().enumerate() {
                e2[map[k]] += ek;
            }
            out.add_term(e2, c);
        }
        out
    }

    /// Exact quotient by `(v_x - v_y)`.
    pub fn divide_by_difference(&self, vx: usize, vy: usize) -> Result<Self> {
        let mut rem = self.terms.clone();
        let mut quot = Self::zero(self.nvars);
        // Peel off the highest power of v_x: c v_x^e r = (v_x - v_y) c v_x^{e-1} r + c v_x^{e-1} v_y r.
        loop {
            let next = rem
                .iter()
                .filter(|(e, _)| e[vx] > 0)
                .max_by_key(|(e, _)| e[vx])
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = next else { break };
            rem.remove(&e);
            let mut q = e.clone();
            q[vx] -= 1;
            quot.add_term(q.clone(), &c);
            let mut shifted = q;
            shifted[vy] += 1;
            let slot = rem.entry(shifted.clone()).or_default();
            *slot += &c;
            if slot.is_zero() {
                rem.remove(&shifted);
            }
        }
        if !rem.is_empty() {
            return Err(Error::NonzeroRemainder(format!(
                "division by a difference of variables {vx} and {vy}"
            )));
        }
        Ok(quot)
    }

    /// Joint degree of the term `(exps, coefficient monomial)` with variable degrees `var_deg`.
    pub fn is_homogeneous_of(&self, var_deg: &[u32], weights: &[u32], deg: i64) -> bool {
        self.terms.iter().all(|(e, c)| {
            let xd: i64 = e.iter().zip(var_deg).map(|(&k, &d)| (k * d) as i64).sum();
            c.is_homogeneous_of(weights, deg - xd)
        })
    }

    /// Substitute λ values into every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&LP) -> LP) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &f(c));
        }
        out
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<CurvePolynomial>], nvars: usize) -> CurvePolynomial {
    match m.len() {
        0 => CurvePolynomial::one(nvars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = CurvePolynomial::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<CurvePolynomial>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, c)| c.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&determinant(&minor, nvars));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// The curve with symbolic coefficients and the derived polynomial data.
#[derive(Debug, Clone)]
pub struct CurveModel {
    pub td: TelescopicData,
    /// λ-weights in catalog order.
    pub weights: Vec<u32>,
    /// `f[i - 2] = F_i`.
    pub f: Vec<CurvePolynomial>,
    /// `replacement[i - 2]` is `x_i^{n_i} - F_i`.
    pub replacement: Vec<CurvePolynomial>,
    /// `partials[i - 2][j - 1] = ∂F_i/∂x_j`.
    pub partials: Vec<Vec<CurvePolynomial>>,
    /// `det_g[k - 1] = det G_k`.
    pub det_g: Vec<CurvePolynomial>,
}

impl CurveModel {
    pub fn new(td: &TelescopicData) -> Result<Self> {
        Self::with_vanishing(td, &BTreeSet::new())
    }

    /// The curve with the listed λ symbols set to zero.
    pub fn with_vanishing(td: &TelescopicData, vanishing: &BTreeSet<usize>) -> Result<Self> {
        let m = td.m();
        let weights = td.lambda_weights();
        let mut f = Vec::new();
        let mut replacement = Vec::new();
        for i in 2..=m {
            let mut r = CurvePolynomial::monomial(td.ell[i - 2].clone(), LP::one());
            for (id, l) in td.lambda_catalog.iter().enumerate() {
                if l.eq_index == i && !vanishing.contains(&id) {
                    r.add_term(l.exponents.0.clone(), &LP::symbol(id as u16));
                }
            }
            let mut lead = vec![0; m];
            lead[i - 1] = td.ratio(i);
            let fi = CurvePolynomial::monomial(lead, LP::one()).sub(&r);
            if !fi.is_homogeneous_of(&td.a, &weights, td.equation_degree(i) as i64) {
                return Err(Error::HomogeneityViolation { what: format!("F_{i}") });
            }
            f.push(fi);
            replacement.push(r);
        }
        let partials: Vec<Vec<CurvePolynomial>> =
            f.iter().map(|fi| (0..m).map(|j| fi.derivative(j)).collect()).collect();
        let det_g = (0..m)
            .map(|k| {
                let g: Vec<Vec<CurvePolynomial>> = partials
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, c)| c.clone()).collect())
                    .collect();
                determinant(&g, m)
            })
            .collect();
        let cm = CurveModel { td: td.clone(), weights, f, replacement, partials, det_g };
        for k in 1..=m {
            cm.det_g_leading_check(k)?;
        }
        Ok(cm)
    }

    pub fn m(&self) -> usize {
        self.td.m()
    }

    /// Joint degree of `det G_k`: `Σ_{j>=2} a_j n_j - Σ a_j + a_k`.
    pub fn det_g_degree(&self, k: usize) -> i64 {
        let td = &self.td;
        let s: i64 = (2..=td.m()).map(|j| td.equation_degree(j) as i64).sum();
        s - td.a.iter().map(|&a| a as i64).sum::<i64>() + td.a[k - 1] as i64
    }

    /// Check that the normal form of `det G_k` is `(-1)^{k+1} a_k x^γ` plus
    /// terms of lower pole order, jointly homogeneous; returns `γ`.
    pub fn det_g_leading_check(&self, k: usize) -> Result<ExponentVector> {
        let deg = self.det_g_degree(k);
        let nf = self.normal_form(&self.det_g[k - 1]);
        let mismatch = |detail: String| Error::LeadingMismatch { k, detail };
        if !nf.is_homogeneous_of(&self.td.a, &self.weights, deg) {
            return Err(Error::HomogeneityViolation { what: format!("det G_{k}") });
        }
        let gamma = self
            .td
            .canonical_rep(deg as u64)
            .ok_or_else(|| mismatch(format!("order {deg} is a gap")))?;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let expected = LP::from_int(sign * self.td.a[k - 1] as i64);
        if nf.coeff(&gamma.0) != &expected {
            return Err(mismatch(format!("coefficient of x^{gamma} is {}", nf.coeff(&gamma.0))));
        }
        if nf.terms().keys().any(|e| ExponentVector(e.clone()).order(&self.td.a) > deg) {
            return Err(mismatch("term of higher pole order".into()));
        }
        Ok(gamma)
    }

    /// Rewrite every monomial in `x_1..x_m` onto exponents in `B(A_m)`.
    pub fn normal_form(&self, p: &CurvePolynomial) -> CurvePolynomial {
        assert_eq!(p.nvars(), self.m());
        self.normal_form_block(p, 0)
    }

    /// Normal form in both the `x` block and the `y` block of a bivariate polynomial.
    pub fn normal_form_bi(&self, p: &CurvePolynomial) -> CurvePolynomial {
        assert_eq!(p.nvars(), 2 * self.m());
        let x = self.normal_form_block(p, 0);
        self.normal_form_block(&x, self.m())
    }

    fn normal_form_block(&self, p: &CurvePolynomial, offset: usize) -> CurvePolynomial {
        let m = self.m();
        let mut memo: HashMap<Vec<u32>, Vec<(Vec<u32>, LP)>> = HashMap::new();
        let mut acc: BTreeMap<Vec<u32>, LP> = BTreeMap::new();
        for (e, c) in p.terms() {
            let block = e[offset..offset + m].to_vec();
            for (nf_e, nf_c) in self.reduce_monomial(block, &mut memo).iter() {
                let mut e2 = e.clone();
                e2[offset..offset + m].copy_from_slice(nf_e);
                acc.entry(e2).or_default().add_mul_assign(c, nf_c);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        CurvePolynomial { nvars: p.nvars(), terms: acc }
    }

    fn reduce_monomial(
        &self,
        e: Vec<u32>,
        memo: &mut HashMap<Vec<u32>, Vec<(Vec<u32>, LP)>>,
    ) -> Vec<(Vec<u32>, LP)> {
        if let Some(r) = memo.get(&e) {
            return r.clone();
        }
        let td = &self.td;
        let offending = (2..=td.m()).rev().find(|&i| e[i - 1] >= td.ratio(i));
        let out = match offending {
            None => vec![(e.clone(), LP::one())],
            Some(i) => {
                let mut base = e.clone();
                base[i - 1] -= td.ratio(i);
                let mut acc: BTreeMap<Vec<u32>, LP> = BTreeMap::new();
                for (re, rc) in self.replacement[i - 2].terms() {
                    let next: Vec<u32> = base.iter().zip(re).map(|(a, b)| a + b).collect();
                    for (ne, nc) in self.reduce_monomial(next, memo) {
                        acc.entry(ne).or_default().add_mul_assign(rc, &nc);
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
        };
        memo.insert(e, out.clone());
        out
    }

    /// `H = (h_{i,j})_{2<=i,j<=m}` as polynomials in `(x, y)`.
    pub fn h_matrix(&self) -> Result<Vec<Vec<CurvePolynomial>>> {
        let m = self.m();
        let mut h = Vec::new();
        for fi in &self.f {
            let mut row = Vec::new();
            for j in 2..=m {
                // Variables before j come from y, from j on from x (first) or after j (second).
                let map_a: Vec<usize> = (0..m).map(|k| if k < j - 1 { m + k } else { k }).collect();
                let map_b: Vec<usize> = (0..m).map(|k| if k < j { m + k } else { k }).collect();
                let num = fi.embed(2 * m, &map_a).sub(&fi.embed(2 * m, &map_b));
                row.push(num.divide_by_difference(j - 1, m + j - 1)?);
            }
            h.push(row);
        }
        Ok(h)
    }

    /// Variable degrees for the bivariate ring `(x, y)`.
    pub fn bi_degrees(&self) -> Vec<u32> {
        self.td.a.iter().chain(self.td.a.iter()).copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(a: &[u32]) -> CurveModel {
        CurveModel::new(&TelescopicData::new(a).unwrap()).unwrap()
    }

    fn sym(cm: &CurveModel, i: usize, e: &[u32]) -> LP {
        LP::symbol(cm.td.lambda_id(i, e).unwrap() as u16)
    }

    #[test]
    fn elliptic_equation() {
        let cm = model(&[2, 3]);
        let f = &cm.f[0];
        assert_eq!(f.terms().len(), 7);
        assert_eq!(f.coeff(&[0, 2]), &LP::one());
        assert_eq!(f.coeff(&[3, 0]), &LP::from_int(-1));
        assert_eq!(f.coeff(&[1, 1]), &-sym(&cm, 2, &[1, 1]));
        assert_eq!(f.coeff(&[0, 0]), &-sym(&cm, 2, &[0, 0]));
    }

    #[test]
    fn genus_four_equations() {
        let cm = model(&[4, 6, 5]);
        assert_eq!(cm.f[0].terms().len(), 10);
        assert_eq!(cm.f[1].terms().len(), 8);
        assert_eq!(cm.f[0].coeff(&[0, 1, 1]), &-sym(&cm, 2, &[0, 1, 1]));
        assert_eq!(cm.f[1].coeff(&[1, 1, 0]), &LP::from_int(-1));
        assert_eq!(cm.f[1].coeff(&[0, 0, 2]), &LP::one());
    }

    #[test]
    fn leading_terms_of_minors() {
        let cm = model(&[2, 3]);
        assert_eq!(cm.det_g_leading_check(1).unwrap(), ExponentVector(vec![0, 1]));
        assert_eq!(cm.det_g_leading_check(2).unwrap(), ExponentVector(vec![2, 0]));
        let cm = model(&[4, 6, 5]);
        assert_eq!(cm.det_g_degree(1), 11);
        for k in 1..=3 {
            cm.det_g_leading_check(k).unwrap();
        }
    }

    #[test]
    fn reduction() {
        let cm = model(&[2, 3]);
        let p = CurvePolynomial::monomial(vec![0, 2], LP::one());
        let nf = cm.normal_form(&p);
        assert_eq!(nf, CurvePolynomial::monomial(vec![0, 2], LP::one()).sub(&cm.f[0]));
        let q = CurvePolynomial::monomial(vec![5, 1], LP::one());
        assert_eq!(cm.normal_form(&q), q);
    }

    #[test]
    fn reduction_commutes_with_relations() {
        let cm = model(&[4, 6, 5]);
        for e in [[0u32, 3, 2], [1, 2, 3], [0, 0, 4]] {
            let nf = cm.normal_form(&CurvePolynomial::monomial(e.to_vec(), LP::one()));
            let ord = ExponentVector(e.to_vec()).order(&cm.td.a);
            assert!(nf.is_homogeneous_of(&cm.td.a, &cm.weights, ord));
            let top = cm.td.canonical_rep(ord as u64).unwrap();
            assert_eq!(nf.coeff(&top.0), &LP::one());
            assert!(nf.terms().keys().all(|k| cm.td.in_box(&ExponentVector(k.clone()))));
        }
    }

    #[test]
    fn monomial_curve_reduction() {
        let cm = model(&[4, 6, 5]);
        let zero: std::collections::BTreeMap<u16, crate::Rational> =
            (0..cm.weights.len() as u16).map(|s| (s, rat(0))).collect();
        let nf = cm.normal_form(&CurvePolynomial::monomial(vec![0, 0, 2], LP::one()));
        let nf0 = nf.map_coeffs(|c| c.substitute(&zero));
        assert_eq!(nf0, CurvePolynomial::monomial(vec![1, 1, 0], LP::one()));
    }

    #[test]
    fn divided_differences() {
        let cm = model(&[2, 3]);
        let h = cm.h_matrix().unwrap();
        let mut expect = CurvePolynomial::var(4, 1).add(&CurvePolynomial::var(4, 3));
        expect = expect.sub(&CurvePolynomial::var(4, 2).scale(&sym(&cm, 2, &[1, 1])));
        expect = expect.sub(&CurvePolynomial::constant(4, sym(&cm, 2, &[0, 1])));
        assert_eq!(h[0][0], expect);
    }

    #[test]
    fn divided_difference_reconstruction() {
        let cm = model(&[4, 6, 5]);
        let h = cm.h_matrix().unwrap();
        let m = 3;
        for (i, fi) in cm.f.iter().enumerate() {
            // Telescoping: Σ_j (x_j - y_j) h_{i,j} over j >= 2 equals F_i(y_1, x_2..) - F_i(y).
            let mut acc = CurvePolynomial::zero(2 * m);
            for j in 2..=m {
                let d = CurvePolynomial::var(2 * m, j - 1).sub(&CurvePolynomial::var(2 * m, m + j - 1));
                acc = acc.add(&d.mul(&h[i][j - 2]));
            }
            let start: Vec<usize> = (0..m).map(|k| if k < 1 { m + k } else { k }).collect();
            let end: Vec<usize> = (0..m).map(|k| m + k).collect();
            assert_eq!(acc, fi.embed(2 * m, &start).sub(&fi.embed(2 * m, &end)));
        }
    }
}
