//! Exact base fields: the rationals and prime fields.
//!
//! Every scalar in the crate is an [`Elem`], an arbitrary-precision rational.
//! Over `F_p` the value is kept as the canonical integer representative in
//! `[0, p)`, so equality of elements is structural equality in both cases.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

pub type Elem = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    /// Brings `x` into canonical form for this field.
    pub fn norm(&self, x: Elem) -> Elem {
        match self {
            Field::Rationals => x,
            Field::Prime(p) => {
                if x.is_integer() && !x.is_negative() && x.numer() < &BigInt::from(*p) {
                    return x;
                }
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                assert!(!den.is_zero(), "denominator divisible by the characteristic");
                let inv = mod_inverse(&den, &p);
                BigRational::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::zero()
    }

    pub fn one(&self) -> Elem {
        Elem::one()
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.norm(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::zero();
        }
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.norm(-a.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rationals => a.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                BigRational::from_integer(mod_inverse(a.numer(), &p))
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Elem {
        self.mul(a, &self.inv(b))
    }

    /// `(-1)^k` as a field element.
    pub fn sign(&self, k: i64) -> Elem {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parses an integer or a `"p/q"` string.
    pub fn parse(&self, s: &str) -> Result<Elem, LinalgError> {
        let s = s.trim();
        let bad = || LinalgError::Parse(s.to_string());
        let v = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            if let Field::Prime(p) = self {
                if (&d % BigInt::from(*p)).is_zero() {
                    return Err(bad());
                }
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(s.parse().map_err(|_| bad())?)
        };
        Ok(self.norm(v))
    }

    /// Renders an element as an integer or `"p/q"` string.
    pub fn render(&self, a: &Elem) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    /// Small integer value of an element, when it has one.
    pub fn to_i64(&self, a: &Elem) -> Option<i64> {
        if a.is_integer() {
            a.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let a = a.mod_floor(p);
    let e = a.extended_gcd(p);
    assert!(e.gcd.is_one(), "element not invertible modulo p");
    e.x.mod_floor(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let two = f.from_i64(2);
        assert_eq!(f.inv(&two), f.from_i64(3));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(3));
        assert!(Field::prime(6).is_err());
    }

    #[test]
    fn rational_parse_and_render() {
        let q = Field::Rationals;
        let x = q.parse("-6/4").unwrap();
        assert_eq!(q.render(&x), "-3/2");
        assert_eq!(q.render(&q.from_i64(7)), "7");
        assert!(q.parse("1/0").is_err());
    }
}
