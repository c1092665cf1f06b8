//! The symmetric bidifferential: numerator of `d_Q Ω`, the coefficient
//! tables `c̃`, `c`, `c̄`, and the expansion coefficients `q_{i,j}`.

use std::collections::BTreeMap;

use crate::curve::{determinant, CurveModel, CurvePolynomial};
use crate::error::{Error, Result};
use crate::expansion::ExpansionSet;
use crate::lambda::{rat, LP};
use crate::semigroup::ExponentVector;
use crate::series::{BiSeries, TSeries, EXACT};

/// Coefficients keyed by a pair of exponent vectors in `B(A_m)`.
pub type CoeffTable = BTreeMap<(ExponentVector, ExponentVector), LP>;

fn split(e: &[u32], m: usize) -> (ExponentVector, ExponentVector) {
    (ExponentVector(e[..m].to_vec()), ExponentVector(e[m..].to_vec()))
}

fn join(i: &ExponentVector, j: &ExponentVector) -> Vec<u32> {
    i.0.iter().chain(j.0.iter()).copied().collect()
}

/// Swap the `x` and `y` blocks of a bivariate polynomial.
pub fn swap_blocks(p: &CurvePolynomial, m: usize) -> CurvePolynomial {
    let map: Vec<usize> = (0..2 * m).map(|k| (k + m) % (2 * m)).collect();
    p.embed(2 * m, &map)
}

/// Numerator of `d_Q Ω` over `(x_1 - y_1)^2 det G_1(P) det G_1(Q)`.
pub fn dq_omega_numerator(cm: &CurveModel) -> Result<CurvePolynomial> {
    let m = cm.m();
    let n = 2 * m;
    let h = cm.h_matrix()?;
    let det_h = determinant(&h, n);
    let to_y: Vec<usize> = (m..n).collect();
    let diff = CurvePolynomial::var(n, 0).sub(&CurvePolynomial::var(n, m));
    let mut acc = cm.det_g[0].embed(n, &to_y).mul(&det_h);
    for i in 1..=m {
        let term = diff.mul(&det_h.derivative(m + i - 1)).mul(&cm.det_g[i - 1].embed(n, &to_y));
        acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    let deg = 2 * (2 * cm.td.genus as i64 - 1 + cm.td.a[0] as i64);
    if !acc.is_homogeneous_of(&cm.bi_degrees(), &cm.weights, deg) {
        return Err(Error::HomogeneityViolation { what: "numerator of d_Q Omega".into() });
    }
    Ok(acc)
}

/// All coefficient tables of the bidifferential.
#[derive(Debug, Clone)]
pub struct BilinearTables {
    pub tilde_c: CurvePolynomial,
    pub c: CoeffTable,
    /// Numerator `F(P, Q)` in normal form; its coefficients are the `c̄`.
    pub bar_c: CurvePolynomial,
}

impl BilinearTables {
    pub fn new(cm: &CurveModel) -> Result<Self> {
        let m = cm.m();
        let g = cm.td.genus as i64;
        let a = &cm.td.a;
        let tilde_c = cm.normal_form_bi(&dq_omega_numerator(cm)?);
        let deg = 2 * (2 * g - 1 + a[0] as i64);
        check_table(&tilde_c, cm, deg, "tilde c")?;
        let c = eta_c_table(cm, &tilde_c)?;
        let n = 2 * m;
        let mut eta = CurvePolynomial::zero(n);
        for ((i, j), v) in &c {
            eta.add_term(join(i, j), v);
        }
        let diff = CurvePolynomial::var(n, 0).sub(&CurvePolynomial::var(n, m));
        let bar_c = tilde_c.add(&diff.mul(&diff).mul(&eta));
        check_table(&bar_c, cm, deg, "bar c")?;
        if swap_blocks(&bar_c, m) != bar_c {
            return Err(Error::SymmetryViolation { what: "F(P,Q) coefficient table".into() });
        }
        Ok(BilinearTables { tilde_c, c, bar_c })
    }

    pub fn tilde_c_entry(&self, i: &ExponentVector, j: &ExponentVector) -> &LP {
        self.tilde_c.coeff(&join(i, j))
    }

    pub fn bar_c_entry(&self, i: &ExponentVector, j: &ExponentVector) -> &LP {
        self.bar_c.coeff(&join(i, j))
    }
}

fn check_table(p: &CurvePolynomial, cm: &CurveModel, deg: i64, what: &str) -> Result<()> {
    let m = cm.m();
    for (e, c) in p.terms() {
        let (i, j) = split(e, m);
        if !cm.td.in_box(&i) || !cm.td.in_box(&j) {
            return Err(Error::WindowExceeded(format!("{what}: exponent outside B(A_m)")));
        }
        if !c.is_integral() {
            return Err(Error::IntegralityViolation { what: format!("{what} at ({i};{j})") });
        }
        let w = deg - i.order(&cm.td.a) - j.order(&cm.td.a);
        if !c.is_homogeneous_of(&cm.weights, w) {
            return Err(Error::HomogeneityViolation { what: format!("{what} at ({i};{j})") });
        }
    }
    Ok(())
}

/// `c_{i;j}` for `Σ a i < Σ a j` and `Σ a (i + j) <= 2(2g - 1)` via the
/// recurrences on `i_1`; entries outside this window vanish.
pub fn eta_c_table(cm: &CurveModel, tilde_c: &CurvePolynomial) -> Result<CoeffTable> {
    let td = &cm.td;
    let a = &td.a;
    let g = td.genus as i64;
    let bound = 2 * (2 * g - 1);
    let mut keys: Vec<(ExponentVector, ExponentVector)> = Vec::new();
    let elems: Vec<ExponentVector> =
        (0..=bound.max(0)).filter_map(|v| td.canonical_rep(v as u64)).collect();
    for i in &elems {
        for j in &elems {
            let (oi, oj) = (i.order(a), j.order(a));
            if oi < oj && oi + oj <= bound {
                keys.push((i.clone(), j.clone()));
            }
        }
    }
    keys.sort_by_key(|(i, _)| i.0[0]);
    let tc = |i: &ExponentVector, j: &ExponentVector| tilde_c.coeff(&join(i, j)).clone();
    let shift = |e: &ExponentVector, d: i64| {
        let mut v = e.clone();
        v.0[0] = (v.0[0] as i64 + d) as u32;
        v
    };
    let mut table: CoeffTable = BTreeMap::new();
    for (i, j) in keys {
        let mut i0 = i.clone();
        i0.0[0] = 0;
        let mut i1 = i.clone();
        i1.0[0] = 1;
        let j2 = shift(&j, 2);
        let val = match i.0[0] {
            0 => &tc(&j2, &i) - &tc(&i, &j2),
            1 => {
                let j3 = shift(&j, 3);
                let mut v = (&tc(&j3, &i0) - &tc(&i0, &j3)).scale(&rat(2));
                v += &tc(&j2, &i1);
                v -= &tc(&i1, &j2);
                v
            }
            _ => {
                let get = |x: &ExponentVector, y: &ExponentVector| {
                    table.get(&(x.clone(), y.clone())).cloned().unwrap_or_default()
                };
                let mut v = get(&shift(&i, -1), &shift(&j, 1)).scale(&rat(2));
                v -= &get(&shift(&i, -2), &j2);
                v += &tc(&j2, &i);
                v -= &tc(&i, &j2);
                v
            }
        };
        let w = bound - i.order(a) - j.order(a);
        if !val.is_integral() {
            return Err(Error::IntegralityViolation { what: format!("c at ({i};{j})") });
        }
        if !val.is_homogeneous_of(&cm.weights, w) {
            return Err(Error::HomogeneityViolation { what: format!("c at ({i};{j})") });
        }
        if !val.is_zero() {
            table.insert((i, j), val);
        }
    }
    Ok(table)
}

/// Expansion data of the bidifferential at `∞ × ∞`.
#[derive(Debug, Clone)]
pub struct QTable {
    /// `q[(i, j)]` for `i, j >= 1` with `i + j - 2` within the valid window.
    pub q: BTreeMap<(usize, usize), LP>,
    /// Largest `i + j` for which entries are known.
    pub max_index_sum: usize,
    /// `t_P^{2a_1} t_Q^{2a_1} F(P,Q) u(t_P) u(t_Q)` with `u = (dx_1/dt)/det G_1`.
    pub a_series: BiSeries,
    /// `(t_P^{a_1} t_Q^{a_1} (x_1(t_P) - x_1(t_Q)))^2 / (t_P - t_Q)^2`.
    pub nu: BiSeries,
}

impl QTable {
    pub fn new(cm: &CurveModel, es: &ExpansionSet, tables: &BilinearTables) -> Result<Self> {
        let m = cm.m();
        let a1 = cm.td.a[0] as i64;
        let z = es.dx1_over_g1.shift(2 * a1);
        // Group F(P,Q) = Σ_i x^i Σ_j c̄_{i,j} y^j by the x-exponent.
        let mut rows: BTreeMap<Vec<u32>, CurvePolynomial> = BTreeMap::new();
        for (e, c) in tables.bar_c.terms() {
            rows.entry(e[..m].to_vec())
                .or_insert_with(|| CurvePolynomial::zero(m))
                .add_term(e[m..].to_vec(), c);
        }
        let mut cache = es.monomials();
        let mut a_series: Option<BiSeries> = None;
        for (i, row) in &rows {
            let xi = cache.monomial(i).mul(&z);
            let yi = cache.expand(row).mul(&z);
            let term = BiSeries::tensor(&xi, &yi);
            match a_series.as_mut() {
                None => a_series = Some(term),
                Some(acc) => acc.add_assign(&term),
            }
        }
        drop(cache);
        let a_series = a_series.unwrap_or_else(|| BiSeries::zero(EXACT));
        if !a_series.is_regular() {
            return Err(Error::NonzeroRemainder("F(P,Q) expansion has a pole along an axis".into()));
        }
        if a_series != a_series.transpose() {
            return Err(Error::SymmetryViolation { what: "bidifferential expansion".into() });
        }

        let p1 = TSeries::from_coeffs(0, es.p[0].clone(), es.t_order as i64);
        let ta = TSeries::monomial(a1, LP::one());
        let s = BiSeries::tensor(&p1, &ta).sub(&BiSeries::tensor(&ta, &p1));
        let nu = s.mul(&s).divide_diagonal()?.divide_diagonal()?;
        let e = a_series.sub(&nu).divide_diagonal()?.divide_diagonal()?;
        let qs = e.divide_homogeneous(&nu)?;
        if qs != qs.transpose() {
            return Err(Error::SymmetryViolation { what: "q table".into() });
        }
        let mut q = BTreeMap::new();
        for (&(i, j), c) in qs.terms() {
            let (i, j) = (i as usize + 1, j as usize + 1);
            if !c.is_integral() {
                return Err(Error::IntegralityViolation { what: format!("q_{{{i},{j}}}") });
            }
            if !c.is_homogeneous_of(&cm.weights, (i + j) as i64) {
                return Err(Error::HomogeneityViolation { what: format!("q_{{{i},{j}}}") });
            }
            q.insert((i, j), c.clone());
        }
        let max_index_sum = (qs.trunc() + 2).max(0) as usize;
        Ok(QTable { q, max_index_sum, a_series, nu })
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&LP> {
        if i + j > self.max_index_sum {
            return Err(Error::TruncationExceeded { requested: (i + j) as i64 - 2, valid: self.max_index_sum as i64 - 2 });
        }
        Ok(self.q.get(&(i, j)).unwrap_or(LP::zero_ref()))
    }
}
