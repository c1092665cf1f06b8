//! Exact rational coefficients with a machine-word fast path.
//!
//! Values whose reduced numerator and denominator fit in `i64` are always
//! stored as [`Coeff::Small`], so structural equality is value equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::lambda::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Coeff {
    /// Reduced `n / d` with `d > 0`.
    Small(i64, i64),
    Big(Box<Rational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Coeff {
    pub(crate) const ONE: Coeff = Coeff::Small(1, 1);

    pub(crate) fn int(n: i64) -> Coeff {
        Coeff::Small(n, 1)
    }

    /// Reduce `n / d` (`d != 0`) and pick the representation.
    fn from_i128(n: i128, d: i128) -> Coeff {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(Box::new(Rational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub(crate) fn from_rational(r: &Rational) -> Coeff {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(Box::new(r.clone())),
        }
    }

    fn from_big(r: Rational) -> Coeff {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(Box::new(r)),
        }
    }

    pub(crate) fn to_rational(&self) -> Rational {
        match self {
            Coeff::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coeff::Big(r) => (**r).clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0, _))
    }

    pub(crate) fn is_integer(&self) -> bool {
        match self {
            Coeff::Small(_, d) => *d == 1,
            Coeff::Big(r) => r.is_integer(),
        }
    }

    pub(crate) fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(n, d) => match n.checked_neg() {
                Some(m) => Coeff::Small(m, *d),
                None => Coeff::from_i128(-(*n as i128), *d as i128),
            },
            Coeff::Big(r) => Coeff::from_big(-(**r).clone()),
        }
    }

    pub(crate) fn add(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, 1), Coeff::Small(b, 1)) => match a.checked_add(*b) {
                Some(s) => Coeff::Small(s, 1),
                None => Coeff::from_i128(*a as i128 + *b as i128, 1),
            },
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Coeff::from_i128(a + c, b)
                } else {
                    Coeff::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Coeff::from_big(self.to_rational() + o.to_rational()),
        }
    }

    pub(crate) fn mul(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Small(a, 1), Coeff::Small(b, 1)) => match a.checked_mul(*b) {
                Some(p) => Coeff::Small(p, 1),
                None => Coeff::from_i128(*a as i128 * *b as i128, 1),
            },
            (Coeff::Small(0, _), _) | (_, Coeff::Small(0, _)) => Coeff::Small(0, 1),
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                let g1 = a.gcd(d).max(1);
                let g2 = c.gcd(b).max(1);
                let n = (*a / g1) as i128 * (*c / g2) as i128;
                let m = (*b / g2) as i128 * (*d / g1) as i128;
                match (i64::try_from(n), i64::try_from(m)) {
                    (Ok(n), Ok(m)) => Coeff::Small(n, m),
                    _ => Coeff::Big(Box::new(Rational::new_raw(BigInt::from(n), BigInt::from(m)))),
                }
            }
            _ => Coeff::from_big(self.to_rational() * o.to_rational()),
        }
    }

    pub(crate) fn add_assign(&mut self, o: &Coeff) {
        if let (Coeff::Small(a, 1), Coeff::Small(b, 1)) = (&*self, o) {
            if let Some(s) = a.checked_add(*b) {
                *self = Coeff::Small(s, 1);
                return;
            }
        }
        *self = self.add(o);
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(n, 1) => write!(f, "{n}"),
            Coeff::Small(n, d) => write!(f, "{n}/{d}"),
            Coeff::Big(r) => write!(f, "{r}"),
        }
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::Small(0, 1)
    }
}
