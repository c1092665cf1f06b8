//! Partitions, restricted `p_n`, and Schur functions in the gap variables.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lambda::{Rational, LP};
use crate::useries::{factorial, USeries};

/// A weakly decreasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `μ_i` for 1-based `i`, zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.0.first().copied().unwrap_or(0);
        Partition((1..=n).map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// Minimal ring interface for [`determinant`].
pub trait DetRing: Clone {
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn sub_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
}

impl DetRing for LP {
    fn is_zero(&self) -> bool {
        LP::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl DetRing for USeries {
    fn is_zero(&self) -> bool {
        USeries::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        USeries::add_assign(self, other);
    }
    fn sub_assign(&mut self, other: &Self) {
        USeries::add_assign(self, &other.scale_lp(&LP::from_int(-1)));
    }
    fn mul(&self, other: &Self) -> Self {
        USeries::mul(self, other)
    }
}

/// Determinant of a square matrix with sparse entries (`None` is zero), by
/// row-wise Laplace expansion over sets of used columns. `keep(row, mask)`
/// may discard partial expansions known to contribute nothing.
pub fn determinant<T: DetRing>(
    entries: &[Vec<Option<T>>],
    zero: T,
    one: T,
    keep: impl Fn(usize, u64) -> bool,
) -> T {
    let n = entries.len();
    assert!(n < 64, "matrix too large for mask expansion");
    let mut states: HashMap<u64, T> = HashMap::from([(0u64, one)]);
    for (r, row) in entries.iter().enumerate() {
        let mut next: HashMap<u64, T> = HashMap::new();
        for (&mask, val) in &states {
            for (j, e) in row.iter().enumerate() {
                let Some(e) = e else { continue };
                if mask & (1 << j) != 0 {
                    continue;
                }
                let nm = mask | (1 << j);
                if !keep(r, nm) {
                    continue;
                }
                let prod = val.mul(e);
                if prod.is_zero() {
                    continue;
                }
                let above = (mask >> (j + 1)).count_ones();
                let slot = next.entry(nm).or_insert_with(|| zero.clone());
                if above % 2 == 0 {
                    slot.add_assign(&prod);
                } else {
                    slot.sub_assign(&prod);
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        states = next;
    }
    states.remove(&((1u64 << n) - 1)).unwrap_or(zero)
}

/// `p_n(u)`: `T_{w_i} = u_i`, every other `T_j = 0`.
pub fn p_restricted(weights: &[u32], n: i64, bound: u32) -> USeries {
    signed_p(weights, n, bound, false)
}

/// `e_n(u)`, the dual generating series `exp(Σ (-1)^{j+1} T_j k^j)` restricted likewise.
pub fn e_restricted(weights: &[u32], n: i64, bound: u32) -> USeries {
    signed_p(weights, n, bound, true)
}

fn signed_p(weights: &[u32], n: i64, bound: u32, dual: bool) -> USeries {
    let mut out = USeries::zero(weights, bound);
    if n < 0 {
        return out;
    }
    let g = weights.len();
    let mut cur = vec![0u32; g];
    fn rec(
        k: usize,
        rest: u32,
        weights: &[u32],
        cur: &mut Vec<u32>,
        dual: bool,
        out: &mut USeries,
    ) {
        if k == weights.len() {
            if rest == 0 {
                let denom: BigInt = cur.iter().map(|&c| factorial(c)).product();
                let flips: u32 = cur.iter().zip(weights).filter(|(_, w)| *w % 2 == 0).map(|(c, _)| c).sum();
                let sign = if dual && flips % 2 == 1 { -1 } else { 1 };
                let c = LP::constant(Rational::new(BigInt::from(sign), denom));
                out.add_term(cur.clone(), &c);
            }
            return;
        }
        let w = weights[k];
        for c in 0..=rest / w {
            cur[k] = c;
            rec(k + 1, rest - c * w, weights, cur, dual, out);
        }
        cur[k] = 0;
    }
    rec(0, n as u32, weights, &mut cur, dual, &mut out);
    out
}

/// Jacobi–Trudi determinant `det(h_{λ_i - i + j})` for a generator family `h`.
fn jacobi_trudi(weights: &[u32], parts: &Partition, bound: u32, h: fn(&[u32], i64, u32) -> USeries) -> USeries {
    let l = parts.len();
    let one = USeries::one(weights, bound);
    if l == 0 {
        return one;
    }
    let mut cache: HashMap<i64, USeries> = HashMap::new();
    let mut entries = vec![vec![None; l]; l];
    for i in 1..=l {
        for j in 1..=l {
            let k = parts.part(i) as i64 - i as i64 + j as i64;
            if k < 0 {
                continue;
            }
            let s = cache.entry(k).or_insert_with(|| h(weights, k, bound)).clone();
            if !s.is_zero() {
                entries[i - 1][j - 1] = Some(s);
            }
        }
    }
    determinant(&entries, USeries::zero(weights, bound), one, |_, _| true)
}

/// `S_μ(u)` via `det(p_{μ_i - i + j}(u))`, with integral Hurwitz coefficients checked.
pub fn schur(weights: &[u32], mu: &Partition, bound: u32) -> Result<USeries> {
    let s = jacobi_trudi(weights, mu, bound, p_restricted);
    for (n, z) in s.hurwitz_terms() {
        if !z.is_integral() {
            return Err(Error::IntegralityViolation { what: format!("Schur function {:?} at u^{n:?}", mu.0) });
        }
    }
    Ok(s)
}

/// `S_μ(u)` via the dual form `det(e_{μ'_i - i + j}(u))`.
pub fn schur_dual(weights: &[u32], mu: &Partition, bound: u32) -> USeries {
    jacobi_trudi(weights, &mu.conjugate(), bound, e_restricted)
}

/// Memoized Schur functions for a fixed set of gap weights.
#[derive(Debug, Default)]
pub struct SchurCache {
    cache: HashMap<Partition, USeries>,
}

impl SchurCache {
    pub fn get(&mut self, weights: &[u32], mu: &Partition, bound: u32) -> Result<&USeries> {
        if !self.cache.contains_key(mu) {
            let s = schur(weights, mu, bound)?;
            self.cache.insert(mu.clone(), s);
        }
        Ok(&self.cache[mu])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::rat_frac;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| Partition::all_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(Partition::new(vec![3, 1, 2]).conjugate(), Partition(vec![3, 2, 1]));
        assert_eq!(Partition(vec![4, 1, 1]).conjugate(), Partition(vec![3, 1, 1, 1]));
    }

    #[test]
    fn restricted_power_sums() {
        let p3 = p_restricted(&[1], 3, 10);
        assert_eq!(p3.coeff(&[3]), &LP::constant(rat_frac(1, 6)));
        assert_eq!(p3.terms().len(), 1);
        let p3 = p_restricted(&[1, 3], 3, 10);
        assert_eq!(p3.coeff(&[0, 1]), &LP::one());
        assert_eq!(p3.coeff(&[3, 0]), &LP::constant(rat_frac(1, 6)));
        assert_eq!(p3.terms().len(), 2);
        assert_eq!(p_restricted(&[1, 3], 0, 10), USeries::one(&[1, 3], 10));
        assert!(p_restricted(&[1, 3], -1, 10).is_zero());
    }

    #[test]
    fn small_determinants() {
        let m = vec![
            vec![Some(LP::from_int(2)), Some(LP::from_int(1)), None],
            vec![Some(LP::from_int(1)), Some(LP::from_int(3)), Some(LP::from_int(1))],
            vec![None, Some(LP::from_int(1)), Some(LP::from_int(4))],
        ];
        // 2(12 - 1) - 1(4 - 0) = 18
        assert_eq!(determinant(&m, LP::zero(), LP::one(), |_, _| true), LP::from_int(18));
        let p = vec![vec![None, Some(LP::one())], vec![Some(LP::one()), None]];
        assert_eq!(determinant(&p, LP::zero(), LP::one(), |_, _| true), LP::from_int(-1));
    }
}
