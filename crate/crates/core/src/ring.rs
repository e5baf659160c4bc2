//! Exact commutative rings with identity: `Q`, `Z` and `Z/n`.
//!
//! Elements carry their own representation (and modulus, for residues), so
//! arithmetic needs no ring handle. The [`RingSpec`] is needed only to build
//! constants, parse scalars and answer structural questions such as
//! [`RingSpec::is_two_torsion_free`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Rationals,
    Integers,
    /// `Z/n` with `n >= 2`.
    Modular(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Rational(BigRational),
    Integer(BigInt),
    /// Canonical residue in `[0, modulus)`.
    Residue {
        value: u64,
        modulus: u64,
    },
}

impl RingSpec {
    pub fn modular(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidRing(format!("Z/{modulus}")));
        }
        Ok(RingSpec::Modular(modulus))
    }

    pub fn zero(&self) -> RingElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> RingElement {
        match *self {
            RingSpec::Rationals => RingElement::Rational(BigRational::from_integer(value.into())),
            RingSpec::Integers => RingElement::Integer(value.into()),
            RingSpec::Modular(modulus) => RingElement::Residue {
                value: value.rem_euclid(modulus as i64) as u64,
                modulus,
            },
        }
    }

    /// Whether `element` belongs to this ring (same representation and modulus).
    pub fn contains(&self, element: &RingElement) -> bool {
        matches!(
            (self, element),
            (RingSpec::Rationals, RingElement::Rational(_))
                | (RingSpec::Integers, RingElement::Integer(_))
        ) || matches!((self, element), (RingSpec::Modular(n), RingElement::Residue { modulus, .. }) if n == modulus)
    }

    /// `2x = 0` implies `x = 0`. For `Z/n` this is exactly `n` odd.
    pub fn is_two_torsion_free(&self) -> bool {
        match *self {
            RingSpec::Rationals | RingSpec::Integers => true,
            RingSpec::Modular(n) => n % 2 == 1,
        }
    }

    pub fn is_field(&self) -> bool {
        match *self {
            RingSpec::Rationals => true,
            RingSpec::Integers => false,
            RingSpec::Modular(n) => is_prime(n),
        }
    }

    pub fn inverse(&self, element: &RingElement) -> Result<RingElement> {
        let fail = || Error::NotInvertible {
            value: element.to_string(),
            ring: self.to_string(),
        };
        match element {
            RingElement::Rational(q) if !q.is_zero() => Ok(RingElement::Rational(q.recip())),
            RingElement::Integer(z) if z.abs().is_one() => Ok(element.clone()),
            RingElement::Residue { value, modulus } => {
                let ext = (*value as i128).extended_gcd(&(*modulus as i128));
                if ext.gcd != 1 {
                    return Err(fail());
                }
                Ok(RingElement::Residue {
                    value: ext.x.rem_euclid(*modulus as i128) as u64,
                    modulus: *modulus,
                })
            }
            _ => Err(fail()),
        }
    }

    /// Parses an exact scalar: `"a/b"` or an integer for `Q`, a decimal
    /// integer for `Z` and `Z/n` (residues are reduced).
    pub fn parse_element(&self, text: &str) -> Result<RingElement> {
        let fail = || Error::InvalidScalar {
            text: text.to_string(),
            ring: self.to_string(),
        };
        let trimmed = text.trim();
        match *self {
            RingSpec::Rationals => {
                let q = match trimmed.split_once('/') {
                    Some((num, den)) => {
                        let num: BigInt = num.trim().parse().map_err(|_| fail())?;
                        let den: BigInt = den.trim().parse().map_err(|_| fail())?;
                        if den.is_zero() {
                            return Err(fail());
                        }
                        BigRational::new(num, den)
                    }
                    None => BigRational::from_integer(trimmed.parse().map_err(|_| fail())?),
                };
                Ok(RingElement::Rational(q))
            }
            RingSpec::Integers => Ok(RingElement::Integer(trimmed.parse().map_err(|_| fail())?)),
            RingSpec::Modular(modulus) => {
                let z: BigInt = trimmed.parse().map_err(|_| fail())?;
                let r = z.mod_floor(&BigInt::from(modulus));
                Ok(RingElement::Residue {
                    value: r.try_into().map_err(|_| fail())?,
                    modulus,
                })
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Modular(n) => write!(f, "Z/{n}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(RingSpec::Rationals),
            "Z" => Ok(RingSpec::Integers),
            other => {
                let modulus = other
                    .strip_prefix("Z/")
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidRing(s.to_string()))?;
                RingSpec::modular(modulus).map_err(|_| Error::InvalidRing(s.to_string()))
            }
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Rational(q) => q.is_zero(),
            RingElement::Integer(z) => z.is_zero(),
            RingElement::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingElement::Rational(q) => q.is_one(),
            RingElement::Integer(z) => z.is_one(),
            RingElement::Residue { value, .. } => *value == 1,
        }
    }

    pub fn ring(&self) -> RingSpec {
        match self {
            RingElement::Rational(_) => RingSpec::Rationals,
            RingElement::Integer(_) => RingSpec::Integers,
            RingElement::Residue { modulus, .. } => RingSpec::Modular(*modulus),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            RingElement::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            RingElement::Integer(z) => write!(f, "{z}"),
            RingElement::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &RingElement, b: &RingElement) -> ! {
    panic!("mixed ring elements: {} and {}", a.ring(), b.ring())
}

impl Add for &RingElement {
    type Output = RingElement;

    fn add(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Rational(a), RingElement::Rational(b)) => RingElement::Rational(a + b),
            (RingElement::Integer(a), RingElement::Integer(b)) => RingElement::Integer(a + b),
            (
                RingElement::Residue { value: a, modulus },
                RingElement::Residue {
                    value: b,
                    modulus: m,
                },
            ) if modulus == m => RingElement::Residue {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        match self {
            RingElement::Rational(a) => RingElement::Rational(-a),
            RingElement::Integer(a) => RingElement::Integer(-a),
            RingElement::Residue { value, modulus } => RingElement::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;

    fn sub(self, rhs: &RingElement) -> RingElement {
        self + &(-rhs)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;

    fn mul(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Rational(a), RingElement::Rational(b)) => RingElement::Rational(a * b),
            (RingElement::Integer(a), RingElement::Integer(b)) => RingElement::Integer(a * b),
            (
                RingElement::Residue { value: a, modulus },
                RingElement::Residue {
                    value: b,
                    modulus: m,
                },
            ) if modulus == m => RingElement::Residue {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        -&self
    }
}
