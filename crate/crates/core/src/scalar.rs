//! Extended exact rationals used for every persistence parameter.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number. All finite births, deaths and spectrum points use this.
pub type Rational = BigRational;

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p/q` in lowest terms with `q > 0`, including `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or an integer literal. Decimal and exponent notation are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    let parse_int = |s: &str| -> Result<BigInt, Error> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|_| bad())
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

/// A point of the extended line: an exact rational or one of the two infinities.
///
/// The derived order puts `NegInf` below every finite value and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Finite(Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Finite(int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Finite(rat(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Scalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Scalar::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Distance on the extended line: same-sign infinities are at distance 0,
    /// an infinity and anything else at distance `+inf`.
    pub fn abs_diff(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite((a - b).abs()),
            (Scalar::NegInf, Scalar::NegInf) | (Scalar::PosInf, Scalar::PosInf) => Scalar::zero(),
            _ => Scalar::PosInf,
        }
    }

    /// Adds a finite offset; infinities are fixed points.
    pub fn shift(&self, t: &Rational) -> Scalar {
        match self {
            Scalar::Finite(a) => Scalar::Finite(a + t),
            other => other.clone(),
        }
    }

    /// Half of a finite value; infinities are unchanged.
    pub fn half(&self) -> Scalar {
        match self {
            Scalar::Finite(a) => Scalar::Finite(a / int(2)),
            other => other.clone(),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Finite(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::NegInf => f.write_str("-inf"),
            Scalar::PosInf => f.write_str("inf"),
            Scalar::Finite(r) => f.write_str(&format_rational(r)),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" => Ok(Scalar::NegInf),
            "inf" | "+inf" => Ok(Scalar::PosInf),
            other => parse_rational(other).map(Scalar::Finite),
        }
    }
}

impl PartialEq<Rational> for Scalar {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Scalar::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for Scalar {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Scalar::NegInf => Ordering::Less,
            Scalar::PosInf => Ordering::Greater,
            Scalar::Finite(r) => r.cmp(other),
        })
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::NegInf => Scalar::PosInf,
            Scalar::PosInf => Scalar::NegInf,
            Scalar::Finite(r) => Scalar::Finite(-r),
        }
    }
}

/// Finite-only arithmetic. `inf + (-inf)` has no value and panics.
impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(a + b),
            (Scalar::PosInf, Scalar::NegInf) | (Scalar::NegInf, Scalar::PosInf) => {
                panic!("inf - inf is undefined")
            }
            (Scalar::PosInf, _) | (_, Scalar::PosInf) => Scalar::PosInf,
            _ => Scalar::NegInf,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

/// Midpoint of two rationals.
pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// `floor(x)` as a big integer.
pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub(crate) fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_extended_line() {
        let mut v = vec![
            Scalar::PosInf,
            Scalar::from_int(3),
            Scalar::NegInf,
            Scalar::from_ratio(-1, 2),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                Scalar::NegInf,
                Scalar::from_ratio(-1, 2),
                Scalar::from_int(3),
                Scalar::PosInf
            ]
        );
    }

    #[test]
    fn text_form() {
        assert_eq!(Scalar::from_ratio(6, 4).to_string(), "3/2");
        assert_eq!(Scalar::from_ratio(3, -6).to_string(), "-1/2");
        assert_eq!(Scalar::zero().to_string(), "0/1");
        assert_eq!("inf".parse::<Scalar>().unwrap(), Scalar::PosInf);
        assert_eq!("-inf".parse::<Scalar>().unwrap(), Scalar::NegInf);
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from_int(7));
        assert_eq!("-2/4".parse::<Scalar>().unwrap(), Scalar::from_ratio(-1, 2));
    }

    #[test]
    fn floats_and_garbage_rejected() {
        for bad in ["0.5", "1e3", "1/0", "", "/", "a/b", "1/2/3", "--1"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad}");
        }
    }

    #[test]
    fn infinite_distances() {
        assert_eq!(Scalar::PosInf.abs_diff(&Scalar::PosInf), Scalar::zero());
        assert_eq!(Scalar::NegInf.abs_diff(&Scalar::PosInf), Scalar::PosInf);
        assert_eq!(
            Scalar::from_int(2).abs_diff(&Scalar::PosInf),
            Scalar::PosInf
        );
        assert_eq!(
            Scalar::from_int(2).abs_diff(&Scalar::from_int(-3)),
            Scalar::from_int(5)
        );
    }

    proptest::proptest! {
        #[test]
        fn text_round_trip(p in -10_000i64..10_000, q in 1i64..500) {
            let s = Scalar::from_ratio(p, q);
            let text = s.to_string();
            proptest::prop_assert_eq!(text.parse::<Scalar>().unwrap(), s.clone());
            proptest::prop_assert_eq!(text.parse::<Scalar>().unwrap().to_string(), text);
        }
    }
}
