//! Arbitrary-precision integers with an inline machine-word fast path.
//!
//! Boundary matrices are almost entirely `0`/`±1`, and elimination rarely
//! leaves `i64`, so values are kept unboxed until an operation overflows.
//! Every operation is exact: overflow promotes to [`BigInt`] and results that
//! fit back into `i64` are demoted again, so equal values always share one
//! representation.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

use Int::{Big, Small};

impl Int {
    #[inline]
    pub const fn zero() -> Self {
        Small(0)
    }

    #[inline]
    pub const fn one() -> Self {
        Small(1)
    }

    fn from_big(b: BigInt) -> Self {
        match b.to_i64() {
            Some(v) => Small(v),
            None => Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Small(v) => BigInt::from(*v),
            Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Small(v) => Some(*v),
            Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, Small(0))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self, Small(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Small(v) => v.signum() as i32,
            Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        match self {
            Small(v) => match v.checked_abs() {
                Some(a) => Small(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Big(b) => Int::from_big(b.abs()),
        }
    }

    /// Compares absolute values.
    pub fn cmp_abs(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Small(a), Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            _ => self.to_big().abs().cmp(&other.to_big().abs()),
        }
    }

    /// Floor division and remainder; the remainder takes the sign of `d`.
    ///
    /// Panics on division by zero.
    pub fn div_mod_floor(&self, d: &Int) -> (Int, Int) {
        assert!(!d.is_zero(), "division by zero");
        if let (Small(a), Small(b)) = (self, d) {
            if !(*a == i64::MIN && *b == -1) {
                let (q, r) = a.div_mod_floor(b);
                return (Small(q), Small(r));
            }
        }
        let (q, r) = self.to_big().div_mod_floor(&d.to_big());
        (Int::from_big(q), Int::from_big(r))
    }

    pub fn mod_floor(&self, d: &Int) -> Int {
        self.div_mod_floor(d).1
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Int) -> Option<Int> {
        let (q, r) = self.div_mod_floor(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Int) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.mod_floor(self).is_zero()
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Small(a), Small(b)) if *a != i64::MIN && *b != i64::MIN => Small(a.gcd(b)),
            _ => Int::from_big(self.to_big().gcd(&other.to_big())),
        }
    }

    /// `self += a * b`.
    #[inline]
    pub fn add_mul_assign(&mut self, a: &Int, b: &Int) {
        if let (Small(s), Small(x), Small(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(v) = s.checked_add(p) {
                    *self = Small(v);
                    return;
                }
            }
        }
        let v = self.to_big() + a.to_big() * b.to_big();
        *self = Int::from_big(v);
    }

    /// `self -= a * b`.
    #[inline]
    pub fn sub_mul_assign(&mut self, a: &Int, b: &Int) {
        if let (Small(s), Small(x), Small(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(v) = s.checked_sub(p) {
                    *self = Small(v);
                    return;
                }
            }
        }
        let v = self.to_big() - a.to_big() * b.to_big();
        *self = Int::from_big(v);
    }

    pub fn negate(&mut self) {
        *self = -&*self;
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::zero()
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        match i64::try_from(v) {
            Ok(s) => Small(s),
            Err(_) => Int::from_big(BigInt::from(v)),
        }
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        Int::from(v as u64)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Small(a), Small(b)) => a == b,
            (Big(a), Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl PartialEq<i64> for Int {
    fn eq(&self, other: &i64) -> bool {
        matches!(self, Small(v) if v == other)
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Small(a), Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Int {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Small(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Big(b) => {
                1u8.hash(state);
                b.hash(state)
            }
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Small(v) => write!(f, "{v}"),
            Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Small(v));
        }
        s.parse::<BigInt>().map(Int::from_big)
    }
}

/// Machine-sized values serialize as JSON numbers, larger ones as decimal strings.
impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Small(v) => s.serialize_i64(*v),
            Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Small(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Small(v) => match v.checked_neg() {
                Some(n) => Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident, $op:tt) => {
        impl $tr<&Int> for &Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &Int) -> Int {
                if let (Small(a), Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Small(v);
                    }
                }
                Int::from_big(self.to_big() $op rhs.to_big())
            }
        }
        impl $tr<Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Int> for Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: &Int) -> Int {
                (&self).$method(rhs)
            }
        }
        impl $tr<Int> for &Int {
            type Output = Int;
            #[inline]
            fn $method(self, rhs: Int) -> Int {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl AddAssign<&Int> for Int {
    #[inline]
    fn add_assign(&mut self, rhs: &Int) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Int> for Int {
    #[inline]
    fn add_assign(&mut self, rhs: Int) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Int> for Int {
    #[inline]
    fn sub_assign(&mut self, rhs: &Int) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Int> for Int {
    #[inline]
    fn sub_assign(&mut self, rhs: Int) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Int> for Int {
    #[inline]
    fn mul_assign(&mut self, rhs: &Int) {
        *self = &*self * rhs;
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::zero()
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::one()
    }
}

impl std::iter::Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Int> for Int {
    fn sum<I: Iterator<Item = &'a Int>>(iter: I) -> Int {
        iter.fold(Int::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl std::iter::Product for Int {
    fn product<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::one(), |acc, x| acc * x)
    }
}
