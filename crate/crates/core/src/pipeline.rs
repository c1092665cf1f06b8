//! End-to-end computation of `σ(u)` for one curve.

use std::collections::{BTreeMap, BTreeSet};

use crate::bilinear::{BilinearTables, QTable};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::expansion::{build_d, choose_b, ExpansionSet};
use crate::lambda::{Rational, Symbol, LP};
use crate::semigroup::TelescopicData;
use crate::sigma::{sigma, SigmaData, SigmaExpansion};
use crate::useries::USeries;

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Largest `Σ w_i n_i` kept in `σ`.
    pub weight_bound: u32,
    /// Precision of the `t`-expansions; defaults to [`default_t_order`].
    pub t_order: Option<usize>,
    /// Local parameter exponents; defaults to [`choose_b`].
    pub b: Option<Vec<i64>>,
    /// Values for some λ symbols by catalog index; the rest stay symbolic.
    pub lambda_values: BTreeMap<usize, Rational>,
    /// Recompute with a second local parameter and require the same `σ`.
    pub gauge_check: bool,
}

/// Precision covering the ξ window, the `q_{w_i,w_j}` and the `c_{w_j}`.
pub fn default_t_order(td: &TelescopicData, weight_bound: u32) -> usize {
    let g = td.genus;
    (weight_bound.saturating_sub(td.mu_size()) as usize).max(4 * g - 2)
}

/// `b` shifted by the first relation row of `D`; another valid local parameter.
pub fn alternative_b(td: &TelescopicData, b: &[i64]) -> Result<Vec<i64>> {
    let d = build_d(td, b)?;
    Ok(b.iter().zip(&d.entries[0]).map(|(x, y)| x + y).collect())
}

/// All stages of one run.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub model: CurveModel,
    pub expansions: ExpansionSet,
    pub tables: BilinearTables,
    pub q: QTable,
    pub data: SigmaData,
    /// `σ` with the nonzero explicit λ values substituted; equal to
    /// `data.sigma` when every symbol is symbolic or zero.
    pub sigma: SigmaExpansion,
}

impl PipelineOutput {
    pub fn sigma_squared(&self) -> USeries {
        self.sigma.squared()
    }
}

struct Stages {
    expansions: ExpansionSet,
    q: QTable,
    data: SigmaData,
}

fn run_with_b(cm: &CurveModel, tables: &BilinearTables, b: &[i64], t_order: usize, bound: u32) -> Result<Stages> {
    let expansions = ExpansionSet::new(cm, b, t_order)?;
    let q = QTable::new(cm, &expansions, tables)?;
    let data = sigma(cm, &expansions, &q, bound)?;
    Ok(Stages { expansions, q, data })
}

pub fn run(td: &TelescopicData, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let n_symbols = td.lambda_catalog.len();
    if let Some(&bad) = opts.lambda_values.keys().find(|&&k| k >= n_symbols) {
        return Err(Error::Argument(format!("lambda index {bad} outside the catalog of {n_symbols} symbols")));
    }
    let vanishing: BTreeSet<usize> =
        opts.lambda_values.iter().filter(|(_, v)| v == &&Rational::from_integer(0.into())).map(|(k, _)| *k).collect();
    let model = CurveModel::with_vanishing(td, &vanishing)?;
    let b = opts.b.clone().unwrap_or_else(|| choose_b(td));
    let t_order = opts.t_order.unwrap_or_else(|| default_t_order(td, opts.weight_bound));
    let tables = BilinearTables::new(&model)?;
    let stages = run_with_b(&model, &tables, &b, t_order, opts.weight_bound)?;
    if opts.gauge_check {
        let other = run_with_b(&model, &tables, &alternative_b(td, &b)?, t_order, opts.weight_bound)?;
        if let Some((n, _)) = first_difference(&stages.data.sigma.series, &other.data.sigma.series) {
            return Err(Error::GaugeDependence(format!("coefficient of u^{n:?} changes with b")));
        }
    }
    let values: BTreeMap<Symbol, Rational> =
        opts.lambda_values.iter().map(|(k, v)| (*k as Symbol, v.clone())).collect();
    let mut sigma = stages.data.sigma.clone();
    if !values.is_empty() {
        let mut s = USeries::zero(&td.gaps, opts.weight_bound);
        for (n, c) in sigma.series.terms() {
            s.add_term(n.clone(), &c.substitute(&values));
        }
        sigma.series = s;
    }
    Ok(PipelineOutput { model, expansions: stages.expansions, tables, q: stages.q, data: stages.data, sigma })
}

fn first_difference(a: &USeries, b: &USeries) -> Option<(Vec<u32>, LP)> {
    let keys: BTreeSet<&Vec<u32>> = a.terms().keys().chain(b.terms().keys()).collect();
    keys.into_iter().find(|n| a.coeff(n) != b.coeff(n)).map(|n| (n.clone(), a.coeff(n) - b.coeff(n)))
}
