//! Weight-truncated power series in `u_1, ..., u_g` with `deg u_i = w_i`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use crate::lambda::{Rational, LP};

/// Exponent vector `(n_1, ..., n_g)` of a `u`-monomial.
pub type UExponent = Vec<u32>;

/// `Σ coeff(n) u^n` keeping only terms with `Σ w_i n_i <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct USeries {
    weights: Vec<u32>,
    bound: u32,
    terms: BTreeMap<UExponent, LP>,
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `Π n_i!` as a rational.
pub fn factorial_product(n: &[u32]) -> Rational {
    Rational::from_integer(n.iter().map(|&k| factorial(k)).product())
}

impl USeries {
    pub fn zero(weights: &[u32], bound: u32) -> Self {
        USeries { weights: weights.to_vec(), bound, terms: BTreeMap::new() }
    }

    pub fn one(weights: &[u32], bound: u32) -> Self {
        Self::monomial(weights, bound, vec![0; weights.len()], LP::one())
    }

    pub fn monomial(weights: &[u32], bound: u32, n: UExponent, c: LP) -> Self {
        let mut s = Self::zero(weights, bound);
        s.add_term(n, &c);
        s
    }

    /// `u_i` (0-based `i`).
    pub fn variable(weights: &[u32], bound: u32, i: usize) -> Self {
        let mut n = vec![0; weights.len()];
        n[i] = 1;
        Self::monomial(weights, bound, n, LP::one())
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> &BTreeMap<UExponent, LP> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_of(&self, n: &[u32]) -> u32 {
        n.iter().zip(&self.weights).map(|(a, b)| a * b).sum()
    }

    pub fn coeff(&self, n: &[u32]) -> &LP {
        self.terms.get(n).unwrap_or(LP::zero_ref())
    }

    /// Hurwitz coefficient `ζ_n = coeff(n) Π n_i!`.
    pub fn hurwitz(&self, n: &[u32]) -> LP {
        self.coeff(n).scale(&factorial_product(n))
    }

    pub fn hurwitz_terms(&self) -> impl Iterator<Item = (&UExponent, LP)> + '_ {
        self.terms.iter().map(|(n, c)| (n, c.scale(&factorial_product(n))))
    }

    pub fn add_term(&mut self, n: UExponent, c: &LP) {
        if c.is_zero() || self.weight_of(&n) > self.bound {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(n) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms with `Σ w_i n_i = w`.
    pub fn homogeneous_part(&self, w: u32) -> USeries {
        let mut out = Self::zero(&self.weights, self.bound);
        for (n, c) in &self.terms {
            if self.weight_of(n) == w {
                out.terms.insert(n.clone(), c.clone());
            }
        }
        out
    }

    /// Smallest weight carrying a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|n| self.weight_of(n)).min()
    }

    pub fn truncate(&self, bound: u32) -> USeries {
        let bound = bound.min(self.bound);
        let terms = self
            .terms
            .iter()
            .filter(|(n, _)| self.weight_of(n) <= bound)
            .map(|(n, c)| (n.clone(), c.clone()))
            .collect();
        USeries { weights: self.weights.clone(), bound, terms }
    }

    pub fn add_assign(&mut self, other: &USeries) {
        self.bound = self.bound.min(other.bound);
        for (n, c) in &other.terms {
            *self.terms.entry(n.clone()).or_default() += c;
        }
        let (w, b) = (&self.weights, self.bound);
        self.terms.retain(|n, c| !c.is_zero() && n.iter().zip(w).map(|(x, y)| x * y).sum::<u32>() <= b);
    }

    pub fn add(&self, other: &USeries) -> USeries {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &USeries) -> USeries {
        self.add(&other.scale_lp(&LP::from_int(-1)))
    }

    pub fn scale_lp(&self, c: &LP) -> USeries {
        let mut out = Self::zero(&self.weights, self.bound);
        for (n, v) in &self.terms {
            let p = v * c;
            if !p.is_zero() {
                out.terms.insert(n.clone(), p);
            }
        }
        out
    }

    pub fn mul(&self, other: &USeries) -> USeries {
        let bound = self.bound.min(other.bound);
        let rhs: Vec<(u32, &UExponent, &LP)> =
            other.terms.iter().map(|(n, c)| (other.weight_of(n), n, c)).collect();
        let mut acc: HashMap<UExponent, LP> = HashMap::new();
        for (n1, c1) in &self.terms {
            let w1 = self.weight_of(n1);
            for &(w2, n2, c2) in &rhs {
                if w1 + w2 > bound {
                    continue;
                }
                let n: UExponent = n1.iter().zip(n2.iter()).map(|(a, b)| a + b).collect();
                acc.entry(n).or_default().add_mul_assign(c1, c2);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        USeries { weights: self.weights.clone(), bound, terms }
    }

    /// `exp(c u^n)` for a non-constant monomial `u^n`.
    pub fn exp_monomial(weights: &[u32], bound: u32, n: &[u32], c: &LP) -> USeries {
        let w: u32 = n.iter().zip(weights).map(|(a, b)| a * b).sum();
        assert!(w > 0, "exp of a constant term");
        let mut out = Self::one(weights, bound);
        let mut power = LP::one();
        let mut k = 1u32;
        while !c.is_zero() && k * w <= bound {
            power = &power * c;
            let e: UExponent = n.iter().map(|x| x * k).collect();
            let coeff = power.scale(&Rational::new(BigInt::one(), factorial(k)));
            out.add_term(e, &coeff);
            k += 1;
        }
        out
    }

    /// `f(M u)`: each `u_i` is replaced by `Σ_j M[i][j] u_j`.
    pub fn substitute_linear(&self, m: &[Vec<LP>]) -> USeries {
        let g = self.weights.len();
        let forms: Vec<USeries> = (0..g)
            .map(|i| {
                let mut s = Self::zero(&self.weights, self.bound);
                for (j, c) in m[i].iter().enumerate() {
                    let mut n = vec![0; g];
                    n[j] = 1;
                    s.add_term(n, c);
                }
                s
            })
            .collect();
        let mut powers: HashMap<(usize, u32), USeries> = HashMap::new();
        let mut out = Self::zero(&self.weights, self.bound);
        for (n, c) in &self.terms {
            let mut term = Self::monomial(&self.weights, self.bound, vec![0; g], c.clone());
            for (i, &k) in n.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = powers.entry((i, k)).or_insert_with(|| {
                    let mut p = Self::one(&self.weights, self.bound);
                    for _ in 0..k {
                        p = p.mul(&forms[i]);
                    }
                    p
                });
                term = term.mul(p);
            }
            out.add_assign(&term);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::rat;

    #[test]
    fn exp_and_substitution() {
        let w = [1u32, 3];
        let e = USeries::exp_monomial(&w, 6, &[1, 0], &LP::from_int(2));
        assert_eq!(e.hurwitz(&[4, 0]), LP::from_int(16));
        assert_eq!(e.hurwitz(&[6, 0]), LP::from_int(64));
        assert!(e.coeff(&[7, 0]).is_zero());
        // (u_1 + u_2)^2 with u_1 -> u_1 + 2u_2.
        let u1 = USeries::variable(&w, 10, 0);
        let sq = u1.mul(&u1);
        let m = vec![vec![LP::one(), LP::from_int(2)], vec![LP::zero(), LP::one()]];
        let s = sq.substitute_linear(&m);
        assert_eq!(s.coeff(&[1, 1]), &LP::from_int(4));
        assert_eq!(s.coeff(&[0, 2]), &LP::from_int(4));
        assert_eq!(s.homogeneous_part(6).coeff(&[0, 2]), &LP::from_int(4));
        assert_eq!(s.valuation(), Some(2));
        let h = USeries::monomial(&w, 10, vec![2, 1], LP::constant(rat(1)));
        assert_eq!(h.hurwitz(&[2, 1]), LP::from_int(2));
    }
}
