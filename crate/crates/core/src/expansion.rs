//! Expansions at infinity in the arithmetic local parameter `t = Π x_i^{b_i}`.

use std::collections::HashMap;

use num_integer::Integer;

use crate::curve::{CurveModel, CurvePolynomial};
use crate::error::{Error, Result};
use crate::lambda::{rat, rat_frac, LP};
use crate::semigroup::TelescopicData;
use crate::series::TSeries;

/// Canonical `b` with `Σ a_i b_i = -1`.
///
/// Folds the extended Euclidean algorithm over `a_1, a_2, ...`: at each step
/// `x g + y a_k = gcd(g, a_k)` is solved with `|x|` minimal (positive on a
/// tie), the running combination is multiplied by `x` and `y` is appended.
/// The resulting `c` has `Σ a_i c_i = 1` and `b = -c`.
pub fn choose_b(td: &TelescopicData) -> Vec<i64> {
    let mut g = td.a[0] as i64;
    let mut c = vec![1i64];
    for &ak in &td.a[1..] {
        let ak = ak as i64;
        let e = g.extended_gcd(&ak);
        let period = ak / e.gcd;
        let mut x = e.x.rem_euclid(period);
        if 2 * x > period {
            x -= period;
        }
        let y = (e.gcd - x * g) / ak;
        debug_assert_eq!(x * g + y * ak, e.gcd);
        for ci in c.iter_mut() {
            *ci *= x;
        }
        c.push(y);
        g = e.gcd;
    }
    debug_assert_eq!(g, 1);
    c.into_iter().map(|v| -v).collect()
}

/// The matrix `D` (rows `-l_{i,·}` with `d_{i-1}/d_i` on the band, last row `b`)
/// together with its integer inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DMatrix {
    pub entries: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
    pub det: i64,
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * int_det(&minor)
            })
            .sum(),
    }
}

#[allow(clippy::needless_range_loop)]
pub fn build_d(td: &TelescopicData, b: &[i64]) -> Result<DMatrix> {
    let m = td.m();
    if b.len() != m {
        return Err(Error::Argument(format!("b has {} entries, expected {m}", b.len())));
    }
    let dot: i64 = td.a.iter().zip(b).map(|(&a, &bi)| a as i64 * bi).sum();
    if dot != -1 {
        return Err(Error::Argument(format!("Σ a_i b_i = {dot}, expected -1")));
    }
    let mut entries = Vec::with_capacity(m);
    for i in 2..=m {
        let mut row: Vec<i64> = td.ell[i - 2].iter().map(|&l| -(l as i64)).collect();
        row[i - 1] = td.ratio(i) as i64;
        entries.push(row);
    }
    entries.push(b.to_vec());
    let det = int_det(&entries);
    let expected = if m.is_multiple_of(2) { 1 } else { -1 };
    if det != expected {
        return Err(Error::DeterminantMismatch { found: det, expected });
    }
    let mut inverse = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in 0..m {
            let minor: Vec<Vec<i64>> = entries
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let cof = if (i + j) % 2 == 0 { 1 } else { -1 } * int_det(&minor);
            inverse[j][i] = cof * det;
        }
    }
    Ok(DMatrix { entries, inverse, det })
}

/// Power series `E = Π P_k^{e_k}` tracked order by order through `log P_k`.
struct TrackedProduct {
    e: Vec<i64>,
    coeffs: Vec<LP>,
    /// Coefficients of `Σ e_k log P_k`.
    s: Vec<LP>,
}

impl TrackedProduct {
    fn new(e: Vec<i64>) -> Self {
        TrackedProduct { e, coeffs: vec![LP::one()], s: vec![LP::zero()] }
    }

    /// `(known S_l, known E_l)` at order `l` with the order-`l` coefficients of
    /// the `P_k` treated as zero.
    fn known(&self, l: usize, logs_known: &[LP]) -> (LP, LP) {
        let mut s = LP::zero();
        for (k, &ek) in self.e.iter().enumerate() {
            if ek != 0 {
                s.add_scaled_assign(&logs_known[k], &rat(ek));
            }
        }
        let mut acc = LP::zero();
        for k in 1..l {
            if self.s[k].is_zero() {
                continue;
            }
            acc.add_mul_assign(&self.s[k].scale(&rat(k as i64)), &self.coeffs[l - k]);
        }
        let mut e = acc.scale(&rat_frac(1, l as i64));
        e += &s;
        (s, e)
    }

    fn push(&mut self, l: usize, known: (LP, LP), p_l: &[LP]) {
        let (mut s, mut e) = known;
        for (k, &ek) in self.e.iter().enumerate() {
            if ek != 0 {
                s.add_scaled_assign(&p_l[k], &rat(ek));
                e.add_scaled_assign(&p_l[k], &rat(ek));
            }
        }
        debug_assert_eq!(self.coeffs.len(), l);
        self.s.push(s);
        self.coeffs.push(e);
    }
}

/// Expansions of the coordinates, of the holomorphic differentials and of
/// the `c_k` series.
#[derive(Debug, Clone)]
pub struct ExpansionSet {
    pub b: Vec<i64>,
    pub d: DMatrix,
    /// `p[i][k] = p_{i+1,k}` for `k <= t_order`.
    pub p: Vec<Vec<LP>>,
    /// `x_series[i] = x_{i+1}(t)`.
    pub x_series: Vec<TSeries>,
    /// `(dx_1/dt) / det G_1(t)`.
    pub dx1_over_g1: TSeries,
    /// `omega_series[i] = ω_{i+1}/dt`.
    pub omega_series: Vec<TSeries>,
    /// `Σ c_k t^{k-1}`.
    pub c_series: TSeries,
    pub t_order: usize,
}

impl ExpansionSet {
    pub fn new(cm: &CurveModel, b: &[i64], t_order: usize) -> Result<Self> {
        let td = &cm.td;
        let m = td.m();
        let d = build_d(td, b)?;
        let p = solve_coefficients(cm, b, &d, t_order)?;
        let t = t_order as i64;
        let x_series: Vec<TSeries> = p
            .iter()
            .enumerate()
            .map(|(i, pi)| TSeries::from_coeffs(-(td.a[i] as i64), pi.clone(), t - td.a[i] as i64))
            .collect();
        let mut es = ExpansionSet {
            b: b.to_vec(),
            d,
            p,
            x_series,
            dx1_over_g1: TSeries::zero(0),
            omega_series: Vec::new(),
            c_series: TSeries::zero(0),
            t_order,
        };
        es.check_local_parameter()?;
        let g = td.genus;
        let (dx1_over_g1, omega_series) = {
            let mut cache = es.monomials();
            let g1 = cache.expand(&cm.det_g[0]);
            let dx1_over_g1 = es.x_series[0].derivative().div(&g1)?;
            for k in 2..=m {
                let gk = cache.expand(&cm.det_g[k - 1]);
                let rhs = es.x_series[k - 1].derivative().div(&gk)?;
                let rhs = if k % 2 == 0 { rhs.neg() } else { rhs };
                if !dx1_over_g1.sub(&rhs).is_zero() {
                    return Err(Error::GaugeIdentity { k });
                }
            }
            let phi = td.phi_basis(g.max(1));
            let mut omega = Vec::with_capacity(g);
            for i in 1..=g {
                let phi_poly = CurvePolynomial::monomial(phi[g - i].0.clone(), LP::one());
                let w = cache.expand(&phi_poly).mul(&dx1_over_g1).neg();
                let lead = td.gaps[i - 1] as i64 - 1;
                check_unit_form(&w, lead, &cm.weights)
                    .map_err(|detail| Error::LeadingCoefficientNotOne { index: i, detail })?;
                omega.push(w);
            }
            (dx1_over_g1, omega)
        };
        es.dx1_over_g1 = dx1_over_g1;
        es.omega_series = omega_series;
        if g > 0 {
            let wg = es.omega_series[g - 1].shift(-(td.gaps[g - 1] as i64 - 1));
            let c = wg.derivative().div(&wg)?.scale(&rat_frac(1, 2));
            for (k, ck) in c.iter() {
                if !ck.is_homogeneous_of(&cm.weights, k + 1) {
                    return Err(Error::HomogeneityViolation { what: format!("c_{}", k + 1) });
                }
                if !ck.scale(&rat(2)).is_integral() {
                    return Err(Error::IntegralityViolation { what: format!("2 c_{}", k + 1) });
                }
            }
            es.c_series = c;
        }
        Ok(es)
    }

    pub fn m(&self) -> usize {
        self.x_series.len()
    }

    /// `c_k`, the coefficient of `t^{k-1}` in the c-series.
    pub fn c(&self, k: usize) -> Result<&LP> {
        self.c_series.coeff(k as i64 - 1)
    }

    /// `b̃_{i,j}`: coefficient of `t^{j-1}` in `ω_i/dt` (1-based `i`).
    pub fn omega_coeff(&self, i: usize, j: usize) -> Result<&LP> {
        self.omega_series[i - 1].coeff(j as i64 - 1)
    }

    pub fn monomials(&self) -> MonomialCache<'_> {
        MonomialCache { es: self, powers: HashMap::new(), monos: HashMap::new() }
    }

    /// `Π x_i^{b_i} = t` through the available precision.
    fn check_local_parameter(&self) -> Result<()> {
        let mut prod = TSeries::one();
        for (x, &bi) in self.x_series.iter().zip(&self.b) {
            prod = prod.mul(&x.pow(bi)?);
        }
        let expect = TSeries::monomial(1, LP::one()).truncate(prod.trunc());
        if prod != expect {
            return Err(Error::ResidualNotInZLambda { order: 0 });
        }
        Ok(())
    }
}

/// Checks `s = t^lead (1 + Σ_j β_j t^j)` with `β_j ∈ Z[λ]` of weight `j`.
fn check_unit_form(s: &TSeries, lead: i64, weights: &[u32]) -> std::result::Result<(), String> {
    if s.valuation() != lead || s.get(lead) != &LP::one() {
        return Err(format!("expected t^{lead} with coefficient 1, got valuation {}", s.valuation()));
    }
    for (k, c) in s.iter() {
        if !c.is_integral() || !c.is_homogeneous_of(weights, k - lead) {
            return Err(format!("coefficient of t^{k} is not an integral form of weight {}", k - lead));
        }
    }
    Ok(())
}

/// Expansion of curve polynomials, memoizing powers of the coordinates.
pub struct MonomialCache<'a> {
    es: &'a ExpansionSet,
    powers: HashMap<(usize, u32), TSeries>,
    monos: HashMap<Vec<u32>, TSeries>,
}

impl MonomialCache<'_> {
    fn power(&mut self, k: usize, n: u32) -> TSeries {
        if n == 0 {
            return TSeries::one();
        }
        if let Some(s) = self.powers.get(&(k, n)) {
            return s.clone();
        }
        let s = if n == 1 { self.es.x_series[k].clone() } else { self.power(k, n - 1).mul(&self.es.x_series[k]) };
        self.powers.insert((k, n), s.clone());
        s
    }

    /// `x^e(t)`.
    pub fn monomial(&mut self, e: &[u32]) -> TSeries {
        if let Some(s) = self.monos.get(e) {
            return s.clone();
        }
        let mut acc = TSeries::one();
        for (k, &ek) in e.iter().enumerate() {
            if ek > 0 {
                acc = acc.mul(&self.power(k, ek));
            }
        }
        self.monos.insert(e.to_vec(), acc.clone());
        acc
    }

    /// Expansion of `p(x(t))`.
    pub fn expand(&mut self, p: &CurvePolynomial) -> TSeries {
        let mut terms: Vec<TSeries> = Vec::new();
        let mut trunc = crate::series::EXACT;
        for (e, c) in p.terms() {
            let s = self.monomial(e).scale_lp(c);
            trunc = trunc.min(s.trunc());
            terms.push(s);
        }
        let mut acc = TSeries::zero(trunc);
        for s in terms {
            acc = acc.add(&s);
        }
        acc
    }
}

/// Order-by-order solution of the relations for `p_{i,l}`.
fn solve_coefficients(cm: &CurveModel, b: &[i64], d: &DMatrix, t_order: usize) -> Result<Vec<Vec<LP>>> {
    let td = &cm.td;
    let m = td.m();
    let weights = &cm.weights;
    // Tracked products: x_i^{n_i}, the l-rows, every λ monomial, and the two halves of Π x^b.
    let mut lead: Vec<TrackedProduct> = Vec::new();
    let mut rows: Vec<TrackedProduct> = Vec::new();
    for i in 2..=m {
        let mut e = vec![0i64; m];
        e[i - 1] = td.ratio(i) as i64;
        lead.push(TrackedProduct::new(e));
        rows.push(TrackedProduct::new(td.ell[i - 2].iter().map(|&v| v as i64).collect()));
    }
    // Lower-order terms λ x^e of each equation, with their t-weight.
    let mut lam: Vec<(usize, LP, usize, TrackedProduct)> = Vec::new();
    for i in 2..=m {
        let deg = td.equation_degree(i) as i64;
        for (e, c) in cm.replacement[i - 2].terms() {
            if e == &td.ell[i - 2] {
                continue;
            }
            let w = deg - e.iter().zip(&td.a).map(|(x, a)| (x * a) as i64).sum::<i64>();
            let tp = TrackedProduct::new(e.iter().map(|&v| v as i64).collect());
            lam.push((i, c.clone(), w as usize, tp));
        }
    }
    let neg: Vec<i64> = b.iter().map(|&v| if v < 0 { -v } else { 0 }).collect();
    let pos: Vec<i64> = b.iter().map(|&v| if v > 0 { v } else { 0 }).collect();
    let mut b_neg = TrackedProduct::new(neg);
    let mut b_pos = TrackedProduct::new(pos);

    let mut p: Vec<Vec<LP>> = vec![vec![LP::one()]; m];
    let mut logs: Vec<Vec<LP>> = vec![vec![LP::zero()]; m];
    for l in 1..=t_order {
        // Known part of log P_k at order l: -(1/l) Σ_{j=1}^{l-1} j L_{k,j} p_{k,l-j}.
        let logs_known: Vec<LP> = (0..m)
            .map(|k| {
                let mut acc = LP::zero();
                for j in 1..l {
                    if !logs[k][j].is_zero() {
                        acc.add_mul_assign(&logs[k][j].scale(&rat(j as i64)), &p[k][l - j]);
                    }
                }
                acc.scale(&rat_frac(-1, l as i64))
            })
            .collect();
        let lead_k: Vec<(LP, LP)> = lead.iter().map(|t| t.known(l, &logs_known)).collect();
        let rows_k: Vec<(LP, LP)> = rows.iter().map(|t| t.known(l, &logs_known)).collect();
        let lam_k: Vec<(LP, LP)> = lam.iter().map(|(_, _, _, t)| t.known(l, &logs_known)).collect();
        let neg_k = b_neg.known(l, &logs_known);
        let pos_k = b_pos.known(l, &logs_known);

        let mut rhs: Vec<LP> = Vec::with_capacity(m);
        for i in 2..=m {
            let mut f = rows_k[i - 2].1.clone();
            f -= &lead_k[i - 2].1;
            for (eq, c, w, tp) in lam.iter() {
                if *eq != i || *w > l {
                    continue;
                }
                // λ t^w P^j contributes λ E_j[l - w], already known since w >= 1.
                f.add_mul_assign(c, &tp.coeffs[l - w]);
            }
            rhs.push(f);
        }
        let mut f = neg_k.1.clone();
        f -= &pos_k.1;
        rhs.push(f);
        for f in &rhs {
            if !f.is_integral() || !f.is_homogeneous_of(weights, l as i64) {
                return Err(Error::ResidualNotInZLambda { order: l });
            }
        }
        let pl: Vec<LP> = (0..m)
            .map(|i| {
                let mut acc = LP::zero();
                for (j, f) in rhs.iter().enumerate() {
                    acc.add_scaled_assign(f, &rat(d.inverse[i][j]));
                }
                acc
            })
            .collect();
        for pi in &pl {
            if !pi.is_integral() || !pi.is_homogeneous_of(weights, l as i64) {
                return Err(Error::ResidualNotInZLambda { order: l });
            }
        }
        for k in 0..m {
            let mut lk = logs_known[k].clone();
            lk += &pl[k];
            logs[k].push(lk);
            p[k].push(pl[k].clone());
        }
        for (t, known) in lead.iter_mut().zip(lead_k) {
            t.push(l, known, &pl);
        }
        for (t, known) in rows.iter_mut().zip(rows_k) {
            t.push(l, known, &pl);
        }
        for ((_, _, _, t), known) in lam.iter_mut().zip(lam_k) {
            t.push(l, known, &pl);
        }
        b_neg.push(l, neg_k, &pl);
        b_pos.push(l, pos_k, &pl);
    }
    Ok(p)
}
