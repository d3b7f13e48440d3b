//! Exact scalars over ℤ, ℚ and ℤ/n.
//!
//! A [`Scalar`] carries enough information to recover its [`RingSpec`], so
//! mixed-ring arithmetic is detected rather than silently coerced. The
//! `checked_*` methods report a mismatch as [`Error::RingMismatch`]; the
//! operator impls (`+`, `*`, `-`) panic on mismatch and are meant for code
//! that has already validated its operands share one ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RingSpec {
    Integers,
    Rationals,
    /// ℤ/n with n ≥ 2.
    IntegersMod(u64),
}

impl RingSpec {
    pub fn integers_mod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("modulus must be at least 2, got {n}")));
        }
        Ok(RingSpec::IntegersMod(n))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::IntegersMod(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Integers => false,
            RingSpec::Rationals => true,
            RingSpec::IntegersMod(n) => is_prime(*n),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(&self, v: BigInt) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Int(v),
            RingSpec::Rationals => Scalar::Rat(BigRational::from_integer(v)),
            RingSpec::IntegersMod(n) => {
                let r = v.mod_floor(&BigInt::from(*n));
                Scalar::Mod(r.to_u64().expect("residue fits in u64"), *n)
            }
        }
    }

    /// Parses a scalar literal: `-?[0-9]+` or `p/q`. Over ℤ/n, integers are
    /// reduced and `p/q` is accepted when `q` is invertible.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Schema(format!("invalid scalar literal `{text}`"));
        let (num, den) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), Some(q.trim())),
            None => (text, None),
        };
        let num = parse_int(num).ok_or_else(bad)?;
        let Some(den) = den else {
            return Ok(self.from_bigint(num));
        };
        let den = parse_int(den).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            RingSpec::Integers => Err(Error::Schema(format!(
                "fraction `{text}` is not an element of the integers"
            ))),
            RingSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
            RingSpec::IntegersMod(_) => {
                let d = self.from_bigint(den);
                let inv = d.mod_unit_inverse().ok_or_else(|| {
                    Error::Schema(format!("denominator of `{text}` is not invertible in {self}"))
                })?;
                Ok(self.from_bigint(num) * inv)
            }
        }
    }

    pub(crate) fn require_field(&self) -> Result<()> {
        if self.is_field() {
            Ok(())
        } else {
            Err(Error::SolverRequiresField(self.to_string()))
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
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
            RingSpec::Integers => write!(f, "int"),
            RingSpec::Rationals => write!(f, "rat"),
            RingSpec::IntegersMod(n) => write!(f, "mod:{n}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Accepts `int`, `rat` or `mod:<n>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "int" => Ok(RingSpec::Integers),
            "rat" => Ok(RingSpec::Rationals),
            other => {
                let n = other
                    .strip_prefix("mod:")
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidRing(format!("expected int, rat or mod:<n>, got `{other}`"))
                    })?;
                RingSpec::integers_mod(n)
            }
        }
    }
}

impl TryFrom<String> for RingSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RingSpec> for String {
    fn from(r: RingSpec) -> String {
        r.to_string()
    }
}

/// An exact ring element. Rationals are kept in lowest terms with a positive
/// denominator and residues lie in `[0, n)`, so structural equality is ring
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    /// `(residue, modulus)`
    Mod(u64, u64),
}

impl Scalar {
    pub fn ring(&self) -> RingSpec {
        match self {
            Scalar::Int(_) => RingSpec::Integers,
            Scalar::Rat(_) => RingSpec::Rationals,
            Scalar::Mod(_, n) => RingSpec::IntegersMod(*n),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::RingMismatch(self.ring().to_string(), other.ring().to_string())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(a, n), Scalar::Mod(b, m)) if n == m => {
                Scalar::Mod(((*a as u128 + *b as u128) % *n as u128) as u64, *n)
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(a, n), Scalar::Mod(b, m)) if n == m => {
                Scalar::Mod(((*a as u128 * *b as u128) % *n as u128) as u64, *n)
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_add(&other.clone().neg())
    }

    /// Multiplicative inverse; only defined over a field.
    pub fn inverse(&self) -> Result<Scalar> {
        if !self.ring().is_field() {
            return Err(Error::InverseRequiresField);
        }
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(v) => Scalar::Rat(v.recip()),
            Scalar::Mod(..) => self.mod_unit_inverse().expect("nonzero element of a prime field"),
            Scalar::Int(_) => unreachable!("integers are not a field"),
        })
    }

    fn mod_unit_inverse(&self) -> Option<Scalar> {
        let Scalar::Mod(a, n) = self else { return None };
        let g = BigInt::from(*a).extended_gcd(&BigInt::from(*n));
        if !g.gcd.is_one() {
            return None;
        }
        Some(RingSpec::IntegersMod(*n).from_bigint(g.x))
    }

    /// Integer value when the scalar has one (ℤ, ℚ with denominator 1, or a residue).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Rat(v) if v.is_integer() => Some(v.to_integer()),
            Scalar::Rat(_) => None,
            Scalar::Mod(v, _) => Some(BigInt::from(*v)),
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative_literal(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_negative(),
            Scalar::Rat(v) => v.is_negative(),
            Scalar::Mod(..) => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Scalar::Rat(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(v) => Scalar::Int(-v),
            Scalar::Rat(v) => Scalar::Rat(-v),
            Scalar::Mod(0, n) => Scalar::Mod(0, n),
            Scalar::Mod(v, n) => Scalar::Mod(n - v, n),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.clone().neg()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$checked(&rhs).expect("ring mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> Scalar {
        Scalar::Rat(BigRational::new(p.into(), q.into()))
    }

    #[test]
    fn spec_examples() {
        let m5 = RingSpec::IntegersMod(5);
        assert_eq!(m5.from_i64(3) + m5.from_i64(4), m5.from_i64(2));
        assert_eq!(rat(1, 2) * rat(2, 3), rat(1, 3));
        let z = RingSpec::Integers;
        assert!((z.from_i64(7) + z.from_i64(-7)).is_zero());

        assert_eq!(rat(2, 3).inverse().unwrap(), rat(3, 2));
        assert_eq!(m5.from_i64(2).inverse().unwrap(), m5.from_i64(3));
        assert_eq!(
            RingSpec::IntegersMod(6).from_i64(2).inverse(),
            Err(Error::InverseRequiresField)
        );
        assert_eq!(rat(0, 1).inverse(), Err(Error::DivisionByZero));
        assert_eq!(z.from_i64(3).inverse(), Err(Error::InverseRequiresField));
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = RingSpec::IntegersMod(5).one();
        let b = RingSpec::IntegersMod(7).one();
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(..))));
        assert!(matches!(rat(1, 1).checked_mul(&RingSpec::Integers.one()), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn ring_spec_parsing_and_fields() {
        assert_eq!("rat".parse::<RingSpec>().unwrap(), RingSpec::Rationals);
        assert_eq!("mod:7".parse::<RingSpec>().unwrap(), RingSpec::IntegersMod(7));
        assert!("mod:1".parse::<RingSpec>().is_err());
        assert!("real".parse::<RingSpec>().is_err());
        assert!(RingSpec::IntegersMod(13).is_field());
        assert!(!RingSpec::IntegersMod(12).is_field());
        assert!(!RingSpec::Integers.is_field());
        assert_eq!(RingSpec::IntegersMod(9).modulus(), Some(9));
        assert_eq!(RingSpec::Rationals.modulus(), None);
    }

    #[test]
    fn literal_parsing() {
        let q = RingSpec::Rationals;
        assert_eq!(q.parse_scalar("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(q.parse_scalar("4/-6").unwrap(), rat(-2, 3));
        assert_eq!(q.parse_scalar("1/0"), Err(Error::DivisionByZero));
        let m5 = RingSpec::IntegersMod(5);
        assert_eq!(m5.parse_scalar("-1").unwrap(), m5.from_i64(4));
        assert_eq!(m5.parse_scalar("1/2").unwrap(), m5.from_i64(3));
        assert!(RingSpec::Integers.parse_scalar("1/2").is_err());
        assert!(q.parse_scalar("x").is_err());
        assert_eq!(rat(-2, 3).to_string(), "-2/3");
        assert_eq!(rat(4, 2).to_string(), "2");
    }

    fn ring_strategy() -> impl Strategy<Value = RingSpec> {
        prop_oneof![
            Just(RingSpec::Integers),
            Just(RingSpec::Rationals),
            Just(RingSpec::IntegersMod(5)),
            Just(RingSpec::IntegersMod(6)),
            Just(RingSpec::IntegersMod(97)),
        ]
    }

    fn element(ring: RingSpec, p: i64, q: i64) -> Scalar {
        match ring {
            RingSpec::Rationals => rat(p, q),
            _ => ring.from_i64(p),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(
            ring in ring_strategy(),
            (a, b, c) in (-50i64..50, -50i64..50, -50i64..50),
            (qa, qb, qc) in (1i64..9, 1i64..9, 1i64..9),
        ) {
            let (x, y, z) = (element(ring, a, qa), element(ring, b, qb), element(ring, c, qc));
            prop_assert_eq!((&x + &y) + z.clone(), &x + &(&y + &z));
            prop_assert_eq!((&x * &y) * z.clone(), &x * &(&y * &z));
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x + &ring.zero(), x.clone());
            prop_assert_eq!(&x * &ring.one(), x.clone());
            prop_assert!((&x + &(-&x)).is_zero());
            if ring.is_field() && !x.is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_form(ring in ring_strategy(), a in -50i64..50, k in 1i64..7) {
            // a and (a*k)/k, or a and a + k*n, must share one representation
            let lhs = element(ring, a, 1);
            let rhs = match ring {
                RingSpec::Rationals => rat(a * k, k),
                RingSpec::IntegersMod(n) => ring.from_i64(a + k * n as i64),
                RingSpec::Integers => ring.from_i64(a + k) - ring.from_i64(k),
            };
            prop_assert_eq!(lhs, rhs);
        }
    }
}
