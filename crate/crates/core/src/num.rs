//! Simplex working numbers: exact rationals stored as a machine-word fraction
//! while they fit, spilling to [`Rational`] otherwise.
//!
//! Values are kept canonical (lowest terms, positive denominator, `Small`
//! whenever representable) so derived equality is numeric equality.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Num {
    Small(i64, i64),
    Big(Box<Rational>),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Num {
    pub fn zero() -> Self {
        Num::Small(0, 1)
    }

    pub fn one() -> Self {
        Num::Small(1, 1)
    }

    pub fn minus_one() -> Self {
        Num::Small(-1, 1)
    }

    /// Builds the canonical value of `n / d` (`d != 0`).
    fn from_wide(n: i128, d: i128) -> Self {
        let g = gcd(n, d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(Rational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: Rational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Num::Small(n, d),
            _ => Num::Big(Box::new(r)),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::from_big(r.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Num::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Num::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Num::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Num::Small(n, _) => *n > 0,
            Num::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Small(n, _) => *n < 0,
            Num::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        match self {
            Num::Small(n, d) => Self::from_wide(*d as i128, *n as i128),
            Num::Big(r) => Self::from_big(r.recip()),
        }
    }

    fn big_op(&self, other: &Num, op: impl Fn(&Rational, &Rational) -> Rational) -> Num {
        Self::from_big(op(&self.to_rational(), &other.to_rational()))
    }
}

impl Add for &Num {
    type Output = Num;
    fn add(self, other: &Num) -> Num {
        match (self, other) {
            (Num::Small(a, 1), Num::Small(c, 1)) => match a.checked_add(*c) {
                Some(s) => Num::Small(s, 1),
                None => Num::from_wide(*a as i128 + *c as i128, 1),
            },
            (Num::Small(a, b), Num::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a * d).checked_add(c * b) {
                    Some(n) => Num::from_wide(n, b * d),
                    None => self.big_op(other, |x, y| x + y),
                }
            }
            _ => self.big_op(other, |x, y| x + y),
        }
    }
}

impl Sub for &Num {
    type Output = Num;
    fn sub(self, other: &Num) -> Num {
        match (self, other) {
            (Num::Small(a, 1), Num::Small(c, 1)) => match a.checked_sub(*c) {
                Some(s) => Num::Small(s, 1),
                None => Num::from_wide(*a as i128 - *c as i128, 1),
            },
            (Num::Small(a, b), Num::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a * d).checked_sub(c * b) {
                    Some(n) => Num::from_wide(n, b * d),
                    None => self.big_op(other, |x, y| x - y),
                }
            }
            _ => self.big_op(other, |x, y| x - y),
        }
    }
}

impl Mul for &Num {
    type Output = Num;
    fn mul(self, other: &Num) -> Num {
        match (self, other) {
            (Num::Small(a, 1), Num::Small(c, 1)) => match a.checked_mul(*c) {
                Some(p) => Num::Small(p, 1),
                None => Num::from_wide(*a as i128 * *c as i128, 1),
            },
            (Num::Small(a, b), Num::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Num::from_wide(a * c, b * d)
            }
            _ => self.big_op(other, |x, y| x * y),
        }
    }
}

impl Div for &Num {
    type Output = Num;
    fn div(self, other: &Num) -> Num {
        match (self, other) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Num::from_wide(a * d, b * c)
            }
            _ => self.big_op(other, |x, y| x / y),
        }
    }
}

impl Neg for &Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Small(n, d) => match n.checked_neg() {
                Some(m) => Num::Small(m, *d),
                None => Num::from_wide(-(*n as i128), *d as i128),
            },
            Num::Big(r) => Num::from_big(-(**r).clone()),
        }
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        -&self
    }
}

macro_rules! by_value {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<&Num> for Num {
            type Output = Num;
            fn $f(self, other: &Num) -> Num {
                (&self).$f(other)
            }
        }
        impl $tr<Num> for &Num {
            type Output = Num;
            fn $f(self, other: Num) -> Num {
                self.$f(&other)
            }
        }
        impl $tr<Num> for Num {
            type Output = Num;
            fn $f(self, other: Num) -> Num {
                (&self).$f(&other)
            }
        }
    )*};
}

by_value!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Num> for Num {
    fn add_assign(&mut self, other: &Num) {
        *self = &*self + other;
    }
}

impl SubAssign<&Num> for Num {
    fn sub_assign(&mut self, other: &Num) {
        *self = &*self - other;
    }
}

impl SubAssign<Num> for Num {
    fn sub_assign(&mut self, other: Num) {
        *self = &*self - &other;
    }
}

impl MulAssign<&Num> for Num {
    fn mul_assign(&mut self, other: &Num) {
        *self = &*self * other;
    }
}

impl Ord for Num {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Num::Small(a, b), Num::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn n(a: i64, b: i64) -> Num {
        Num::from_rational(&ratio(a, b))
    }

    #[test]
    fn small_arithmetic_is_canonical() {
        assert_eq!(&n(1, 2) + &n(1, 3), n(5, 6));
        assert_eq!(&n(1, 2) - &n(1, 2), Num::zero());
        assert_eq!(&n(2, 3) * &n(3, 4), n(1, 2));
        assert_eq!(&n(2, 3) / &n(-4, 9), n(-3, 2));
        assert_eq!(n(-3, 7).recip(), n(-7, 3));
        assert!(n(1, 3) < n(1, 2));
        assert_eq!(n(-5, 2).abs(), n(5, 2));
    }

    #[test]
    fn overflow_spills_and_returns() {
        let big = Num::from_rational(&int(i64::MAX));
        let sum = &big + &big;
        assert!(matches!(sum, Num::Big(_)));
        assert_eq!(sum.to_rational(), int(i64::MAX) * int(2));
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Num::Small(..)));
        let tiny = &n(1, i64::MAX) * &n(1, 3);
        assert_eq!(tiny.to_rational(), ratio(1, i64::MAX) * ratio(1, 3));
        assert!(tiny < n(1, i64::MAX));
        assert_eq!(
            -Num::from_rational(&int(i64::MIN)),
            Num::from_rational(&-int(i64::MIN))
        );
    }
}
