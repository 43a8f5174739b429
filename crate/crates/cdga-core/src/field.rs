//! Exact scalars over the rationals or a prime field.
//!
//! A [`Field`] is a lightweight context value (ℚ or GF(p)); a
//! [`FieldElement`] is either a reduced fraction of big integers or a
//! residue in `[0, p)`. All arithmetic is exact; equality is decidable.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The ground field: ℚ or GF(p) for a prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    MixedFields,
    DivisionByZero,
    NotPrime(u64),
    Parse(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::MixedFields => write!(f, "elements from different fields"),
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::Parse(s) => write!(f, "cannot parse scalar: {s}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational {
                num: BigInt::zero(),
                den: BigInt::one(),
            },
            Field::Prime(_) => FieldElement::Residue(0),
        }
    }

    pub fn one(&self) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational {
                num: BigInt::one(),
                den: BigInt::one(),
            },
            Field::Prime(_) => FieldElement::Residue(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational {
                num: BigInt::from(n),
                den: BigInt::one(),
            },
            Field::Prime(p) => {
                let p = *p as i128;
                let r = ((n as i128 % p) + p) % p;
                FieldElement::Residue(r as u64)
            }
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (Field::Rationals, FieldElement::Rational { num: n1, den: d1 }, FieldElement::Rational { num: n2, den: d2 }) => {
                rational(n1 * d2 + n2 * d1, d1 * d2)
            }
            (Field::Prime(p), FieldElement::Residue(a), FieldElement::Residue(b)) => {
                FieldElement::Residue(((*a as u128 + *b as u128) % *p as u128) as u64)
            }
            _ => panic!("field element does not match field"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (Field::Rationals, FieldElement::Rational { num, den }) => FieldElement::Rational {
                num: -num,
                den: den.clone(),
            },
            (Field::Prime(p), FieldElement::Residue(a)) => FieldElement::Residue(if *a == 0 { 0 } else { p - a }),
            _ => panic!("field element does not match field"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (Field::Rationals, FieldElement::Rational { num: n1, den: d1 }, FieldElement::Rational { num: n2, den: d2 }) => {
                rational(n1 * n2, d1 * d2)
            }
            (Field::Prime(p), FieldElement::Residue(a), FieldElement::Residue(b)) => {
                FieldElement::Residue(((*a as u128 * *b as u128) % *p as u128) as u64)
            }
            _ => panic!("field element does not match field"),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match (self, a) {
            (Field::Rationals, FieldElement::Rational { num, den }) => Ok(rational(den.clone(), num.clone())),
            (Field::Prime(p), FieldElement::Residue(a)) => {
                // Fermat: a^(p-2) mod p.
                let mut base = *a as u128;
                let mut exp = p - 2;
                let m = *p as u128;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Ok(FieldElement::Residue(acc as u64))
            }
            _ => panic!("field element does not match field"),
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Parses "a" or "a/b" with optional leading minus; prime-field literals
    /// are integers reduced mod p.
    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num: i128 = num_s.parse().map_err(|_| bad())?;
        match self {
            Field::Rationals => {
                let den: i128 = match den_s {
                    Some(d) => d.parse().map_err(|_| bad())?,
                    None => 1,
                };
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(rational(BigInt::from(num), BigInt::from(den)))
            }
            Field::Prime(p) => {
                let p_i = *p as i128;
                let r = ((num % p_i) + p_i) % p_i;
                let a = FieldElement::Residue(r as u64);
                match den_s {
                    None => Ok(a),
                    Some(d) => {
                        let den: i128 = d.parse().map_err(|_| bad())?;
                        let rd = ((den % p_i) + p_i) % p_i;
                        self.div(&a, &FieldElement::Residue(rd as u64))
                    }
                }
            }
        }
    }

    /// All field elements, for exhaustive prime-field loops in tests.
    pub fn enumerate(&self, bound: i64) -> Vec<FieldElement> {
        match self {
            Field::Rationals => (-bound..=bound).map(|n| self.from_i64(n)).collect(),
            Field::Prime(p) => (0..*p).map(FieldElement::Residue).collect(),
        }
    }
}

/// An exact scalar. Rationals are kept reduced with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElement {
    Rational { num: BigInt, den: BigInt },
    Residue(u64),
}

fn rational(num: BigInt, den: BigInt) -> FieldElement {
    debug_assert!(!den.is_zero());
    let g = num.gcd(&den);
    let (mut num, mut den) = if g.is_zero() {
        (num, BigInt::one())
    } else {
        (&num / &g, &den / &g)
    };
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    FieldElement::Rational { num, den }
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational { num, .. } => num.is_zero(),
            FieldElement::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational { num, den } => num.is_one() && den.is_one(),
            FieldElement::Residue(r) => *r == 1,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational { num, den } => {
                if den.is_one() {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{den}")
                }
            }
            FieldElement::Residue(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_reduced() {
        let f = Field::Rationals;
        let a = f.parse("2/4").unwrap();
        assert_eq!(a, f.parse("1/2").unwrap());
        let b = f.parse("-3/6").unwrap();
        assert!(f.add(&a, &b).is_zero());
        let c = f.div(&f.from_i64(1), &f.from_i64(2)).unwrap();
        assert_eq!(a, c);
        assert_eq!(f.parse("-5").unwrap(), f.from_i64(-5));
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for r in 1..7 {
            let a = FieldElement::Residue(r);
            assert!(f.mul(&a, &f.inv(&a).unwrap()).is_one());
        }
        assert!(Field::prime(6).is_err());
        assert_eq!(f.parse("-1").unwrap(), FieldElement::Residue(6));
        assert_eq!(f.parse("3/5").unwrap(), f.div(&f.from_i64(3), &f.from_i64(5)).unwrap());
    }

    #[test]
    fn display_round_trips() {
        let f = Field::Rationals;
        for s in ["0", "7", "-7", "22/7", "-22/7"] {
            let e = f.parse(s).unwrap();
            assert_eq!(alloc::format!("{e}"), s);
        }
    }
}
