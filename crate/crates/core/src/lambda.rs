//! Sparse polynomials in the coefficient symbols with exact rational
//! coefficients.
//!
//! Symbols are referred to by their position in the curve's λ-catalog; the
//! weights needed for grading are passed in explicitly so that the
//! polynomial type itself stays independent of any particular curve.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::coeff::Coeff;

pub type Rational = num_rational::BigRational;

/// Index of a symbol in the λ-catalog.
pub type Symbol = u16;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Power of two dividing the denominator of `r`, i.e. `max(0, -v_2(r))`,
/// and whether the odd part of the denominator is 1.
pub fn two_adic_denominator(r: &Rational) -> (u64, bool) {
    let mut den = r.denom().clone();
    let mut k = 0u64;
    let two = BigInt::from(2);
    while den.is_even() {
        den /= &two;
        k += 1;
    }
    (k, den.is_one())
}

/// A monomial `Π λ_s^{k_s}`, stored as `(symbol, multiplicity)` pairs sorted by symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub SmallVec<[(Symbol, u16); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut v = SmallVec::new();
        v.push((s, 1));
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k as u32).sum()
    }

    pub fn weight(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|&(s, k)| weights[s as usize] * k as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

/// Sparse polynomial `Σ r_m m` over the λ symbols. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaPolynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

pub type LP = LambdaPolynomial;

static ZERO: LambdaPolynomial = LambdaPolynomial { terms: BTreeMap::new() };

impl LambdaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn zero_ref() -> &'static Self {
        &ZERO
    }

    pub fn one() -> Self {
        Self::monomial_coeff(Monomial::one(), Coeff::ONE)
    }

    pub fn constant(r: Rational) -> Self {
        Self::monomial(Monomial::one(), r)
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial_coeff(Monomial::one(), Coeff::int(n))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::monomial_coeff(Monomial::symbol(s), Coeff::ONE)
    }

    pub fn monomial(m: Monomial, r: Rational) -> Self {
        Self::monomial_coeff(m, Coeff::from_rational(&r))
    }

    fn monomial_coeff(m: Monomial, c: Coeff) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Terms in monomial order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (m, c.to_rational()))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(r)` when the polynomial is the constant `r` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).map(Coeff::to_rational),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).map(Coeff::to_rational).unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `m`.
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).map(Coeff::to_rational).unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, r: Rational) {
        self.add_coeff(m, &Coeff::from_rational(&r));
    }

    fn add_coeff(&mut self, m: Monomial, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_assign(c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += r * p`.
    pub fn add_scaled_assign(&mut self, p: &LambdaPolynomial, r: &Rational) {
        let r = Coeff::from_rational(r);
        if r.is_zero() {
            return;
        }
        for (m, c) in &p.terms {
            self.add_coeff(m.clone(), &c.mul(&r));
        }
    }

    /// `self += a * b`.
    pub fn add_mul_assign(&mut self, a: &LambdaPolynomial, b: &LambdaPolynomial) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_coeff(ma.mul(mb), &ca.mul(cb));
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> LambdaPolynomial {
        let r = Coeff::from_rational(r);
        if r.is_zero() {
            return Self::zero();
        }
        LambdaPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(&r))).collect() }
    }

    pub fn scale_int(&self, n: i64) -> LambdaPolynomial {
        self.scale(&rat(n))
    }

    pub fn pow(&self, mut n: u32) -> LambdaPolynomial {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Coeff::is_integer)
    }

    /// Weights of the monomials that occur.
    pub fn weights(&self, weights: &[u32]) -> impl Iterator<Item = u32> + '_ {
        let w = weights.to_vec();
        self.terms.keys().map(move |m| m.weight(&w))
    }

    /// True when the polynomial is zero or every monomial has weight `w`.
    pub fn is_homogeneous_of(&self, weights: &[u32], w: i64) -> bool {
        self.terms.keys().all(|m| m.weight(weights) as i64 == w)
    }

    /// The part of weight exactly `w`.
    pub fn homogeneous_part(&self, weights: &[u32], w: u32) -> LambdaPolynomial {
        LambdaPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(weights) == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self, weights: &[u32]) -> Option<u32> {
        self.terms.keys().map(|m| m.weight(weights)).max()
    }

    /// Replace the symbols present in `values` by rationals.
    pub fn substitute(&self, values: &BTreeMap<Symbol, Rational>) -> LambdaPolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.to_rational();
            let mut rest: SmallVec<[(Symbol, u16); 4]> = SmallVec::new();
            for &(s, k) in &m.0 {
                match values.get(&s) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), k as usize),
                    None => rest.push((s, k)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Sum of `|coefficient|` over terms, handy as a size measure in tests.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().map(|c| c.to_rational().abs()).fold(Rational::zero(), |a, b| a + b)
    }
}

impl From<i64> for LambdaPolynomial {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for LambdaPolynomial {
    fn from(r: Rational) -> Self {
        Self::constant(r)
    }
}

impl<'a> AddAssign<&'a LambdaPolynomial> for LambdaPolynomial {
    fn add_assign(&mut self, rhs: &'a LambdaPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_coeff(m.clone(), c);
        }
    }
}

impl AddAssign<LambdaPolynomial> for LambdaPolynomial {
    fn add_assign(&mut self, rhs: LambdaPolynomial) {
        if self.is_zero() {
            *self = rhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_coeff(m, &c);
        }
    }
}

impl<'a> SubAssign<&'a LambdaPolynomial> for LambdaPolynomial {
    fn sub_assign(&mut self, rhs: &'a LambdaPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_coeff(m.clone(), &c.neg());
        }
    }
}

impl<'a> Add<&'a LambdaPolynomial> for &'a LambdaPolynomial {
    type Output = LambdaPolynomial;
    fn add(self, rhs: &'a LambdaPolynomial) -> LambdaPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a LambdaPolynomial> for &'a LambdaPolynomial {
    type Output = LambdaPolynomial;
    fn sub(self, rhs: &'a LambdaPolynomial) -> LambdaPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a LambdaPolynomial> for &'a LambdaPolynomial {
    type Output = LambdaPolynomial;
    fn mul(self, rhs: &'a LambdaPolynomial) -> LambdaPolynomial {
        let mut out = LambdaPolynomial::zero();
        out.add_mul_assign(self, rhs);
        out
    }
}

impl Neg for &LambdaPolynomial {
    type Output = LambdaPolynomial;
    fn neg(self) -> LambdaPolynomial {
        LambdaPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}

impl Neg for LambdaPolynomial {
    type Output = LambdaPolynomial;
    fn neg(mut self) -> LambdaPolynomial {
        for c in self.terms.values_mut() {
            *c = c.neg();
        }
        self
    }
}

impl fmt::Display for LambdaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for &(s, k) in &m.0 {
                if k == 1 {
                    write!(f, "*L{s}")?;
                } else {
                    write!(f, "*L{s}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly() -> impl Strategy<Value = LambdaPolynomial> {
        prop::collection::vec(
            (prop::collection::vec((0u16..4, 1u16..3), 0..3), -5i64..6, 1i64..4),
            0..5,
        )
        .prop_map(|terms| {
            let mut p = LambdaPolynomial::zero();
            for (syms, n, d) in terms {
                let mut m = Monomial::one();
                for (s, k) in syms {
                    for _ in 0..k {
                        m = m.mul(&Monomial::symbol(s));
                    }
                }
                p.add_term(m, rat_frac(n, d));
            }
            p
        })
    }

    #[test]
    fn zero_times_anything() {
        let p = &LambdaPolynomial::symbol(0) + &LambdaPolynomial::from_int(3);
        assert!((&LambdaPolynomial::zero() * &p).is_zero());
    }

    #[test]
    fn grading_is_additive() {
        let weights = [1, 2];
        let p = &LambdaPolynomial::symbol(0) * &LambdaPolynomial::symbol(1);
        assert!(p.is_homogeneous_of(&weights, 3));
    }

    #[test]
    fn substitution() {
        let p = &LambdaPolynomial::symbol(0).pow(2) + &LambdaPolynomial::symbol(1);
        let mut v = BTreeMap::new();
        v.insert(0, rat(3));
        let q = p.substitute(&v);
        assert_eq!(q, &LambdaPolynomial::from_int(9) + &LambdaPolynomial::symbol(1));
    }

    #[test]
    fn two_adic() {
        assert_eq!(two_adic_denominator(&rat_frac(3, 8)), (3, true));
        assert_eq!(two_adic_denominator(&rat_frac(1, 6)), (1, false));
        assert_eq!(two_adic_denominator(&rat(5)), (0, true));
    }

    proptest! {
        #[test]
        fn distributive(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            let lhs = &(&p + &q) * &r;
            let rhs = &(&p * &r) + &(&q * &r);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn associative(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn commutative(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
        }

        #[test]
        fn no_zero_coefficients(p in arb_poly(), q in arb_poly()) {
            let s = &(&p * &q) - &(&q * &p);
            prop_assert!(s.is_zero());
            prop_assert!((&p - &p).is_empty());
        }
    }
}
