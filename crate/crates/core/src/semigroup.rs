//! Combinatorics of the semigroup `<a_1, ..., a_m>` of a telescopic sequence.
//!
//! Everything the rest of the pipeline needs about the sequence is derived
//! once in [`TelescopicData::new`]: the partial gcds `d_i`, the bounded box
//! `B(A_m)` of canonical exponent vectors, the rows `l_{i,j}` of the monomial
//! relations, the gap sequence, the genus, the partition `mu(A_m)` and the
//! ordered catalog of coefficient symbols of the defining equations.

use std::fmt;

use num_integer::Integer;

use crate::error::ValidationError;

/// Exponent vector `(k_1, ..., k_m)` of a monomial in `x_1, ..., x_m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(m: usize) -> Self {
        ExponentVector(vec![0; m])
    }

    pub fn unit(m: usize, k: usize) -> Self {
        let mut e = vec![0; m];
        e[k] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Pole order `sum a_i k_i` at infinity.
    pub fn order(&self, a: &[u32]) -> i64 {
        self.0.iter().zip(a).map(|(&k, &ai)| k as i64 * ai as i64).sum()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A coefficient symbol `lambda^{(i)}_{j_1..j_m}` of the defining equation `F_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaIndex {
    pub eq_index: usize,
    pub exponents: ExponentVector,
    pub weight: u32,
}

impl fmt::Display for LambdaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.0.iter().map(|e| e.to_string()).collect();
        write!(f, "lambda^({})_{}", self.eq_index, parts.join(","))
    }
}

/// Validated telescopic sequence together with all derived semigroup data.
///
/// Indices follow the mathematical convention where it matters for output:
/// `a[0]` is `a_1`, `ell[0]` is the row for `i = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TelescopicData {
    pub a: Vec<u32>,
    /// `d[k] = gcd(a_1, ..., a_{k+1})`.
    pub d: Vec<u32>,
    /// `ell[i-2][j-1] = l_{i,j}` for `2 <= i <= m`.
    pub ell: Vec<Vec<u32>>,
    pub gaps: Vec<u32>,
    pub genus: usize,
    pub mu: Vec<u32>,
    pub lambda_catalog: Vec<LambdaIndex>,
}

fn semigroup_sieve(generators: &[u32], bound: u32) -> Vec<bool> {
    let mut member = vec![false; bound as usize + 1];
    member[0] = true;
    for v in 1..=bound as usize {
        member[v] = generators
            .iter()
            .any(|&g| g as usize <= v && member[v - g as usize]);
    }
    member
}

impl TelescopicData {
    pub fn new(a: &[u32]) -> Result<Self, ValidationError> {
        let m = a.len();
        if m < 2 {
            return Err(ValidationError::TooShort(m));
        }
        if let Some((index, &value)) = a.iter().enumerate().find(|(_, &v)| v < 2) {
            return Err(ValidationError::EntryTooSmall { index: index + 1, value });
        }
        let mut d = Vec::with_capacity(m);
        let mut acc = 0u32;
        for &ai in a {
            acc = acc.gcd(&ai);
            d.push(acc);
        }
        if d[m - 1] != 1 {
            return Err(ValidationError::NotCoprime(d[m - 1]));
        }
        for i in 1..m {
            let target = a[i] / d[i];
            let gens: Vec<u32> = a[..i].iter().map(|&x| x / d[i - 1]).collect();
            if !semigroup_sieve(&gens, target)[target as usize] {
                return Err(ValidationError::NotTelescopic { index: i + 1, value: target });
            }
        }

        let mut td = TelescopicData {
            a: a.to_vec(),
            d,
            ell: Vec::new(),
            gaps: Vec::new(),
            genus: 0,
            mu: Vec::new(),
            lambda_catalog: Vec::new(),
        };

        let twice_genus: i64 = 1 - a[0] as i64
            + (1..m)
                .map(|i| (td.ratio(i + 1) as i64 - 1) * a[i] as i64)
                .sum::<i64>();
        assert!(twice_genus >= 0 && twice_genus % 2 == 0, "genus formula gave {twice_genus}/2");
        td.genus = (twice_genus / 2) as usize;

        for i in 2..=m {
            let row = td
                .canonical_rep(a[i - 1] as u64 * td.ratio(i) as u64)
                .expect("a_i d_{i-1}/d_i lies in the semigroup");
            assert!(row.0[i - 1..].iter().all(|&e| e == 0), "l_{{i,j}} = 0 for j >= i");
            td.ell.push(row.0);
        }

        let g = td.genus as u32;
        td.gaps = (0..2 * g.max(1))
            .filter(|&v| td.canonical_rep(v as u64).is_none())
            .collect();
        assert_eq!(td.gaps.len(), td.genus, "sieved gap count disagrees with the genus formula");
        assert_eq!(td.gaps.first(), Some(&1));
        assert_eq!(td.gaps.last(), Some(&(2 * g - 1)), "w_g = 2g - 1");
        td.mu = (0..td.genus)
            .map(|k| td.gaps[td.genus - 1 - k] - (td.genus - 1 - k) as u32)
            .collect();
        td.lambda_catalog = td.build_lambda_catalog();
        Ok(td)
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// `d_{i-1}/d_i` for `2 <= i <= m` (1-based `i`).
    pub fn ratio(&self, i: usize) -> u32 {
        self.d[i - 2] / self.d[i - 1]
    }

    /// Joint degree `a_i d_{i-1}/d_i` of `F_i`.
    pub fn equation_degree(&self, i: usize) -> u32 {
        self.a[i - 1] * self.ratio(i)
    }

    pub fn in_box(&self, e: &ExponentVector) -> bool {
        (2..=self.m()).all(|i| e.0[i - 1] < self.ratio(i))
    }

    /// `|mu(A_m)|`.
    pub fn mu_size(&self) -> u32 {
        self.mu.iter().sum()
    }

    /// Unique exponent vector in `B(A_m)` with pole order `value`, or `None`
    /// when `value` is a gap.
    pub fn canonical_rep(&self, value: u64) -> Option<ExponentVector> {
        let m = self.m();
        let mut rest = value as i64;
        let mut k = vec![0u32; m];
        for i in (2..=m).rev() {
            let di = self.d[i - 1] as i64;
            let n = self.ratio(i) as i64;
            let ai = (self.a[i - 1] as i64) / di;
            debug_assert_eq!(rest % di, 0);
            let inv = mod_inverse(ai.rem_euclid(n), n);
            let ki = ((rest / di).rem_euclid(n) * inv).rem_euclid(n);
            rest -= ki * self.a[i - 1] as i64;
            if rest < 0 {
                return None;
            }
            k[i - 1] = ki as u32;
        }
        if rest % self.a[0] as i64 != 0 {
            return None;
        }
        k[0] = (rest / self.a[0] as i64) as u32;
        Some(ExponentVector(k))
    }

    /// Non-gaps `0 = s_1 < s_2 < ...`, the first `n` of them.
    pub fn nongaps(&self, n: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(n);
        let mut v = 0u32;
        while out.len() < n {
            if !self.gaps.contains(&v) {
                out.push(v);
            }
            v += 1;
        }
        out
    }

    /// First `n` monomials of the basis `phi_1 = 1, phi_2, ...` ordered by
    /// pole order.
    pub fn phi_basis(&self, n: usize) -> Vec<ExponentVector> {
        let basis: Vec<ExponentVector> = self
            .nongaps(n)
            .into_iter()
            .map(|s| self.canonical_rep(s as u64).expect("non-gap"))
            .collect();
        debug_assert!(basis
            .windows(2)
            .all(|w| w[0].order(&self.a) < w[1].order(&self.a)));
        basis
    }

    /// Pole order of `phi_j` (1-based `j`).
    pub fn phi_order(&self, j: usize) -> u32 {
        let g = self.genus as u32;
        if j > self.genus {
            return j as u32 + g - 1;
        }
        self.nongaps(j)[j - 1]
    }

    fn build_lambda_catalog(&self) -> Vec<LambdaIndex> {
        let mut out = Vec::new();
        for i in 2..=self.m() {
            let deg = self.equation_degree(i);
            for v in 0..deg {
                if let Some(e) = self.canonical_rep(v as u64) {
                    out.push(LambdaIndex { eq_index: i, exponents: e, weight: deg - v });
                }
            }
        }
        out
    }

    pub fn lambda_weights(&self) -> Vec<u32> {
        self.lambda_catalog.iter().map(|l| l.weight).collect()
    }

    /// Position of the symbol `lambda^{(i)}_e` in the catalog.
    pub fn lambda_id(&self, eq_index: usize, e: &[u32]) -> Option<usize> {
        self.lambda_catalog
            .iter()
            .position(|l| l.eq_index == eq_index && l.exponents.0 == e)
    }
}

fn mod_inverse(a: i64, n: i64) -> i64 {
    if n == 1 {
        return 0;
    }
    let e = a.extended_gcd(&n);
    assert_eq!(e.gcd, 1, "{a} not invertible mod {n}");
    e.x.rem_euclid(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_members(a: &[u32], bound: u32) -> Vec<bool> {
        semigroup_sieve(a, bound)
    }

    #[test]
    fn elliptic_sequence() {
        let td = TelescopicData::new(&[2, 3]).unwrap();
        assert_eq!(td.genus, 1);
        assert_eq!(td.gaps, vec![1]);
        assert_eq!(td.mu, vec![1]);
        assert_eq!(td.ell, vec![vec![3, 0]]);
    }

    #[test]
    fn genus_four_sequence() {
        let td = TelescopicData::new(&[4, 6, 5]).unwrap();
        assert_eq!(td.d, vec![4, 2, 1]);
        assert_eq!(td.genus, 4);
        assert_eq!(td.gaps, vec![1, 2, 3, 7]);
        assert_eq!(td.mu, vec![4, 1, 1, 1]);
        assert_eq!(td.ell, vec![vec![3, 0, 0], vec![1, 1, 0]]);
        let members = brute_members(&[4, 6, 5], 20);
        let gaps: Vec<u32> = (0..20).filter(|&v| !members[v as usize]).collect();
        assert_eq!(gaps, td.gaps);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(TelescopicData::new(&[4, 6]), Err(ValidationError::NotCoprime(2)));
        assert_eq!(
            TelescopicData::new(&[3, 5, 7]),
            Err(ValidationError::NotTelescopic { index: 3, value: 7 })
        );
        assert_eq!(
            TelescopicData::new(&[1, 3]),
            Err(ValidationError::EntryTooSmall { index: 1, value: 1 })
        );
        assert_eq!(TelescopicData::new(&[5]), Err(ValidationError::TooShort(1)));
    }

    #[test]
    fn canonical_representatives() {
        let td = TelescopicData::new(&[4, 6, 5]).unwrap();
        assert_eq!(td.canonical_rep(10), Some(ExponentVector(vec![1, 1, 0])));
        assert_eq!(td.canonical_rep(0), Some(ExponentVector(vec![0, 0, 0])));
        assert_eq!(td.canonical_rep(7), None);
    }

    #[test]
    fn phi_basis_orders() {
        let td = TelescopicData::new(&[2, 3]).unwrap();
        let phi = td.phi_basis(3);
        assert_eq!(
            phi,
            vec![ExponentVector(vec![0, 0]), ExponentVector(vec![1, 0]), ExponentVector(vec![0, 1])]
        );
        let td = TelescopicData::new(&[4, 6, 5]).unwrap();
        let orders: Vec<i64> = td.phi_basis(5).iter().map(|e| e.order(&td.a)).collect();
        assert_eq!(orders, vec![0, 4, 5, 6, 8]);
        assert_eq!(td.phi_basis(1), vec![ExponentVector::zeros(3)]);
        for j in 1..12 {
            assert_eq!(td.phi_order(j) as i64, td.phi_basis(j)[j - 1].order(&td.a));
        }
    }

    #[test]
    fn catalogs() {
        let td = TelescopicData::new(&[2, 3]).unwrap();
        let w: Vec<u32> = td.lambda_weights();
        assert_eq!(w, vec![6, 4, 3, 2, 1]);
        let td = TelescopicData::new(&[4, 6, 5]).unwrap();
        assert_eq!(td.lambda_catalog.iter().filter(|l| l.eq_index == 2).count(), 8);
        assert_eq!(td.lambda_catalog.iter().filter(|l| l.eq_index == 3).count(), 6);
        assert!(td.lambda_id(2, &[0, 1, 1]).is_some());
        assert!(td.lambda_id(3, &[1, 0, 1]).is_some());
        assert!(td.lambda_catalog.iter().all(|l| l.weight > 0));
    }
}
