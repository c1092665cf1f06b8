//! The ξ tables, the tau function, and the sigma expansion built from them.

use std::collections::BTreeMap;

use crate::bilinear::QTable;
use crate::curve::{CurveModel, CurvePolynomial};
use crate::error::{Error, Result};
use crate::expansion::ExpansionSet;
use crate::lambda::{rat, rat_frac, LP};
use crate::schur::{determinant, Partition, SchurCache};
use crate::semigroup::TelescopicData;
use crate::useries::USeries;

/// `ξ_{i,j}`: coefficient of `t^i` in `t^{g-1} φ_j`, stored for entries of
/// λ-weight at most `budget`. The weight of `ξ_{i,j}` is `i - g + 1 + ord φ_j`.
#[derive(Debug, Clone)]
pub struct XiTable {
    pub genus: usize,
    /// `orders[j-1] = ord φ_j`.
    pub orders: Vec<u32>,
    pub budget: i64,
    pub entries: BTreeMap<(i64, usize), LP>,
}

impl XiTable {
    pub fn new(cm: &CurveModel, es: &ExpansionSet, columns: usize, budget: i64) -> Result<Self> {
        let td = &cm.td;
        let g = td.genus as i64;
        let basis = td.phi_basis(columns);
        let mut cache = es.monomials();
        let mut entries = BTreeMap::new();
        let mut orders = Vec::with_capacity(columns);
        for (idx, e) in basis.iter().enumerate() {
            let j = idx + 1;
            let ord = td.phi_order(j) as i64;
            orders.push(ord as u32);
            let s = cache.expand(&CurvePolynomial::monomial(e.0.clone(), LP::one())).shift(g - 1);
            if s.valuation() != g - 1 - ord || s.get(g - 1 - ord) != &LP::one() {
                return Err(Error::LeadingTermMismatch(format!("t^(g-1) phi_{j} does not start with t^{}", g - 1 - ord)));
            }
            for w in 0..=budget {
                let i = g - 1 - ord + w;
                let c = s.coeff(i)?;
                if !c.is_integral() {
                    return Err(Error::IntegralityViolation { what: format!("xi_{{{i},{j}}}") });
                }
                if !c.is_homogeneous_of(&cm.weights, w) {
                    return Err(Error::HomogeneityViolation { what: format!("xi_{{{i},{j}}}") });
                }
                if !c.is_zero() {
                    entries.insert((i, j), c.clone());
                }
            }
        }
        Ok(XiTable { genus: td.genus, orders, budget, entries })
    }

    pub fn columns(&self) -> usize {
        self.orders.len()
    }

    /// λ-weight of `ξ_{i,j}`.
    pub fn weight(&self, i: i64, j: usize) -> i64 {
        i - self.genus as i64 + 1 + self.orders[j - 1] as i64
    }

    /// `ξ_{i,j}`; zero below the leading term, an error above the stored window.
    pub fn get(&self, i: i64, j: usize) -> Result<&LP> {
        let w = self.weight(i, j);
        if w > self.budget {
            return Err(Error::WindowExceeded(format!("xi_{{{i},{j}}} has weight {w} > {}", self.budget)));
        }
        Ok(self.entries.get(&(i, j)).unwrap_or(LP::zero_ref()))
    }

    /// Truncated determinant `det(ξ_{m_i, j})_{1 <= i, j <= n}`, `m_i = μ_i - i`.
    pub fn minor(&self, mu: &Partition, n: usize) -> Result<LP> {
        if n > self.columns() {
            return Err(Error::WindowExceeded(format!("{n} columns requested, {} available", self.columns())));
        }
        let total = mu.size() as i64 - self.mu_size();
        if total < 0 || total > self.budget {
            return Ok(LP::zero());
        }
        let g = self.genus as i64;
        let rows: Vec<i64> = (1..=n).map(|i| mu.part(i) as i64 - i as i64).collect();
        let mut entries = vec![vec![None; n]; n];
        for (r, &m) in rows.iter().enumerate() {
            for j in 1..=n {
                let w = self.weight(m, j);
                if w < 0 || w > total {
                    continue;
                }
                let v = self.get(m, j)?;
                if !v.is_zero() {
                    entries[r][j - 1] = Some(v.clone());
                }
            }
        }
        let row_base: Vec<i64> = rows
            .iter()
            .scan(0i64, |acc, &m| {
                *acc += m - g + 1;
                Some(*acc)
            })
            .collect();
        let orders = &self.orders;
        let keep = |r: usize, mask: u64| {
            let cols: i64 = (0..n).filter(|j| mask & (1 << j) != 0).map(|j| orders[j] as i64).sum();
            row_base[r] + cols <= total
        };
        Ok(determinant(&entries, LP::zero(), LP::one(), keep))
    }

    /// `|μ(A_m)|` recovered from the stored orders.
    fn mu_size(&self) -> i64 {
        let g = self.genus as i64;
        (1..=g).map(|j| j + g - 1 - self.orders[j as usize - 1] as i64).sum()
    }

    /// `ξ_μ` from the size `max(ℓ(μ), g)` minor, checked against sizes `+1` and `+2`.
    pub fn xi_mu(&self, mu: &Partition) -> Result<LP> {
        let n = mu.len().max(self.genus);
        let v = self.minor(mu, n)?;
        for extra in 1..=2 {
            if self.minor(mu, n + extra)? != v {
                return Err(Error::StabilizationFailure { partition: mu.0.clone() });
            }
        }
        Ok(v)
    }
}

/// `τ(u) = Σ_{|μ| <= W} ξ_μ S_μ(u)` together with the nonzero `ξ_μ`.
#[derive(Debug, Clone)]
pub struct Tau {
    pub series: USeries,
    pub xi: BTreeMap<Partition, LP>,
}

pub fn tau(td: &TelescopicData, xi: &XiTable, bound: u32) -> Result<Tau> {
    let weights = &td.gaps;
    let mut series = USeries::zero(weights, bound);
    let mut nonzero = BTreeMap::new();
    let mut schur = SchurCache::default();
    for n in td.mu_size()..=bound {
        for mu in Partition::all_of(n) {
            let x = xi.xi_mu(&mu)?;
            if x.is_zero() {
                continue;
            }
            series.add_assign(&schur.get(weights, &mu, bound)?.scale_lp(&x));
            nonzero.insert(mu, x);
        }
    }
    for (n, z) in series.hurwitz_terms() {
        if !z.is_integral() {
            return Err(Error::IntegralityViolation { what: format!("tau at u^{n:?}") });
        }
    }
    Ok(Tau { series, xi: nonzero })
}

/// `B = (b̃_{i,w_j})`, `c = (c_{w_j})`, `N = (q_{w_i,w_j})` and their transforms.
#[derive(Debug, Clone)]
pub struct BcN {
    pub b: Vec<Vec<LP>>,
    pub b_inverse: Vec<Vec<LP>>,
    pub c: Vec<LP>,
    pub n: Vec<Vec<LP>>,
    /// `c B^{-1}`.
    pub c_bar: Vec<LP>,
    /// `B^{-T} N B^{-1}`.
    pub n_bar: Vec<Vec<LP>>,
}

#[allow(clippy::needless_range_loop)]
pub fn assemble_bcn(td: &TelescopicData, es: &ExpansionSet, q: &QTable) -> Result<BcN> {
    let g = td.genus;
    let w = &td.gaps;
    let mut b = vec![vec![LP::zero(); g]; g];
    for i in 0..g {
        for j in 0..g {
            b[i][j] = es.omega_coeff(i + 1, w[j] as usize)?.clone();
            let expect_unit = i == j;
            if (j <= i) && b[i][j] != if expect_unit { LP::one() } else { LP::zero() } {
                return Err(Error::LeadingCoefficientNotOne { index: i + 1, detail: format!("B[{i}][{j}] = {}", b[i][j]) });
            }
        }
    }
    let b_inverse = unit_upper_inverse(&b);
    let c: Vec<LP> = w.iter().map(|&k| es.c(k as usize).cloned()).collect::<Result<_>>()?;
    let mut n = vec![vec![LP::zero(); g]; g];
    for i in 0..g {
        for j in 0..g {
            n[i][j] = q.get(w[i] as usize, w[j] as usize)?.clone();
        }
    }
    let c_bar: Vec<LP> = (0..g)
        .map(|j| {
            let mut s = LP::zero();
            for i in 0..g {
                s.add_mul_assign(&c[i], &b_inverse[i][j]);
            }
            s
        })
        .collect();
    let mut nb = vec![vec![LP::zero(); g]; g];
    for (k, row) in n.iter().enumerate() {
        for (l, nkl) in row.iter().enumerate() {
            if nkl.is_zero() {
                continue;
            }
            for i in 0..g {
                let left = &b_inverse[k][i] * nkl;
                if left.is_zero() {
                    continue;
                }
                for j in 0..g {
                    nb[i][j].add_mul_assign(&left, &b_inverse[l][j]);
                }
            }
        }
    }
    Ok(BcN { b, b_inverse, c, n, c_bar, n_bar: nb })
}

/// Inverse of a unit upper-triangular matrix by back substitution.
#[allow(clippy::needless_range_loop)]
pub fn unit_upper_inverse(b: &[Vec<LP>]) -> Vec<Vec<LP>> {
    let g = b.len();
    let mut x = vec![vec![LP::zero(); g]; g];
    for j in 0..g {
        for i in (0..g).rev() {
            let mut v = if i == j { LP::one() } else { LP::zero() };
            for k in i + 1..g {
                let p = &b[i][k] * &x[k][j];
                v -= &p;
            }
            x[i][j] = v;
        }
    }
    x
}

/// `exp(Σ ℓ_i u_i + Σ_{i,j} s Q_{ij} u_i u_j / 2)` as a product of single-term exponentials.
/// The diagonal factors are checked to have Hurwitz coefficients in `Z[λ]`.
pub fn exp_quadratic(weights: &[u32], bound: u32, linear: &[LP], quad: &[Vec<LP>], sign: i64) -> Result<USeries> {
    let g = weights.len();
    let mut out = USeries::one(weights, bound);
    for (i, l) in linear.iter().enumerate() {
        let mut n = vec![0; g];
        n[i] = 1;
        out = out.mul(&USeries::exp_monomial(weights, bound, &n, l));
    }
    for i in 0..g {
        let mut n = vec![0; g];
        n[i] = 2;
        let coeff = quad[i][i].scale(&rat_frac(sign, 2));
        let f = USeries::exp_monomial(weights, bound, &n, &coeff);
        for (e, z) in f.hurwitz_terms() {
            if !z.is_integral() {
                return Err(Error::IntegralityViolation { what: format!("diagonal factor {i} at u^{e:?}") });
            }
        }
        out = out.mul(&f);
        for j in i + 1..g {
            let mut n = vec![0; g];
            n[i] = 1;
            n[j] = 1;
            let coeff = quad[i][j].scale(&rat(sign));
            out = out.mul(&USeries::exp_monomial(weights, bound, &n, &coeff));
        }
    }
    Ok(out)
}

/// Series expansion of `σ(u)` through weight `weight_bound`.
#[derive(Debug, Clone)]
pub struct SigmaExpansion {
    pub curve: TelescopicData,
    pub b: Vec<i64>,
    pub weight_bound: u32,
    pub series: USeries,
}

impl SigmaExpansion {
    /// `σ(u)^2`; cross terms above the weight bound are dropped.
    pub fn squared(&self) -> USeries {
        self.series.mul(&self.series)
    }
}

/// Everything computed on the way from the expansions to `σ`.
#[derive(Debug, Clone)]
pub struct SigmaData {
    pub xi: XiTable,
    pub tau: Tau,
    pub bcn: BcN,
    pub sigma: SigmaExpansion,
}

/// `σ(u) = exp(c B^{-1} u - ½ uᵀ B^{-T} N B^{-1} u) τ(B^{-1} u)`, with the
/// lowest-weight part and weight homogeneity checked.
pub fn sigma(cm: &CurveModel, es: &ExpansionSet, q: &QTable, bound: u32) -> Result<SigmaData> {
    let td = &cm.td;
    let g = td.genus;
    let mu = td.mu_size();
    let budget = bound.saturating_sub(mu) as i64;
    let columns = (bound as usize).max(g) + 2;
    let xi = XiTable::new(cm, es, columns, budget)?;
    let tau = tau(td, &xi, bound)?;
    let bcn = assemble_bcn(td, es, q)?;
    let w = &td.gaps;
    let factor = exp_quadratic(w, bound, &bcn.c_bar, &bcn.n_bar, -1)?;
    let series = factor.mul(&tau.series.substitute_linear(&bcn.b_inverse));

    let lead = crate::schur::schur(w, &Partition(td.mu.clone()), bound)?;
    if series.valuation() != Some(mu) || series.homogeneous_part(mu) != lead {
        return Err(Error::LeadingTermMismatch(format!("weight {mu} part differs from S_mu(A)")));
    }
    for (n, c) in series.terms() {
        let target = series.weight_of(n) as i64 - mu as i64;
        if !c.is_homogeneous_of(&cm.weights, target) {
            return Err(Error::HomogeneityViolation { what: format!("sigma coefficient at u^{n:?}") });
        }
    }
    let sigma = SigmaExpansion { curve: td.clone(), b: es.b.clone(), weight_bound: bound, series };
    Ok(SigmaData { xi, tau, bcn, sigma })
}
