//! The exact ordered field every geometric routine is generic over.
//!
//! All decisions are made with exact arithmetic. The crate root fixes
//! [`crate::Scalar`] to arbitrary-precision rationals; fixed-width rationals
//! (`Ratio<i64>`, `Ratio<i128>`) also satisfy [`Field`] and are handy in
//! small tests, but they panic on overflow rather than round.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Num
    + Signed
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self;

    fn frac(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn half() -> Self {
        Self::frac(1, 2)
    }

    /// Non-negative integer power.
    fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// Parses `"p/q"` or `"p"`, reducing to lowest terms.
    fn parse_exact(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n = Self::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
            let d = Self::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(n / d)
        } else {
            Self::from_str(t).map_err(|_| Error::Parse(format!("bad scalar `{s}`")))
        }
    }

    /// Lossy decimal rendering for reports only.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Positive `s` such that `s·x` are coprime integers (1 for an all-zero slice).
    fn primitive_scale(xs: &[Self]) -> Self;

    /// The rational square root, when one exists.
    fn sqrt_exact(&self) -> Option<Self>;
}

impl<T> Field for Ratio<T>
where
    T: Clone
        + Integer
        + Roots
        + Signed
        + Hash
        + Debug
        + Display
        + FromStr
        + From<i64>
        + Send
        + Sync
        + 'static,
    Ratio<T>: ToPrimitive,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(T::from(v))
    }

    fn primitive_scale(xs: &[Self]) -> Self {
        let mut den = T::one();
        let mut num = T::zero();
        for x in xs.iter().filter(|x| !x.is_zero()) {
            den = den.lcm(x.denom());
            num = num.gcd(x.numer());
        }
        if num.is_zero() {
            return Self::one();
        }
        Ratio::new(den, num)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let (n, d) = (self.numer().sqrt(), self.denom().sqrt());
        (n.clone() * n.clone() == *self.numer() && d.clone() * d.clone() == *self.denom())
            .then(|| Ratio::new(n, d))
    }
}

pub fn max_of<F: Field>(items: impl IntoIterator<Item = F>) -> Option<F> {
    items.into_iter().max()
}

pub fn sum<F: Field>(items: impl IntoIterator<Item = F>) -> F {
    items.into_iter().fold(F::zero(), |a, b| a + b)
}

/// Canonical textual form: `"p/q"` in lowest terms, integers as `"p"`.
pub fn to_exact_string<F: Field>(x: &F) -> String {
    x.to_string()
}

/// Converts a big rational to the `Scalar` used across the crate root.
pub fn big(num: i64, den: i64) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// Serde adapters writing scalars as exact strings.
pub mod serde_exact {
    use super::Field;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<F: Field, S: Serializer>(x: &F, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> Result<F, D::Error> {
        let raw = ScalarRepr::deserialize(d)?;
        raw.into_field().map_err(D::Error::custom)
    }

    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    pub(crate) enum ScalarRepr {
        Text(String),
        Int(i64),
    }

    impl ScalarRepr {
        pub(crate) fn into_field<F: Field>(self) -> Result<F, String> {
            match self {
                ScalarRepr::Text(t) => F::parse_exact(&t).map_err(|e| e.to_string()),
                ScalarRepr::Int(i) => Ok(F::from_int(i)),
            }
        }
    }

    pub mod vec {
        use super::super::Field;
        use super::ScalarRepr;
        use serde::de::Error as _;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<F: Field, S: Serializer>(xs: &[F], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(d: D) -> Result<Vec<F>, D::Error> {
            let raw: Vec<ScalarRepr> = Vec::deserialize(d)?;
            raw.into_iter()
                .map(|r| r.into_field().map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::super::Field;
        use super::ScalarRepr;
        use serde::de::Error as _;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<F: Field, S: Serializer>(x: &Option<F>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, F: Field, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<F>, D::Error> {
            let raw: Option<ScalarRepr> = Option::deserialize(d)?;
            raw.map(|r| r.into_field().map_err(D::Error::custom)).transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;
    use num_traits::One;

    #[test]
    fn parse_forms() {
        assert_eq!(Scalar::parse_exact("-6/14").unwrap(), big(-3, 7));
        assert_eq!(Scalar::parse_exact("5").unwrap(), big(5, 1));
        assert_eq!(Scalar::parse_exact("5/1").unwrap(), big(5, 1));
        assert!(Scalar::parse_exact("1/0").is_err());
        assert!(Scalar::parse_exact("x").is_err());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(to_exact_string(&big(-6, 14)), "-3/7");
        assert_eq!(to_exact_string(&big(10, 2)), "5");
    }

    #[test]
    fn fixed_width_ratio_is_a_field() {
        type R = Ratio<i64>;
        let x = R::frac(2, 3);
        assert_eq!(x.powu(3), R::frac(8, 27));
        assert_eq!(R::half() + R::half(), R::one());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(big(25, 9).sqrt_exact(), Some(big(5, 3)));
        assert_eq!(big(2, 1).sqrt_exact(), None);
        assert_eq!(big(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn primitive_scaling() {
        let xs = [big(2, 3), big(-4, 9), big(0, 1)];
        let s = Scalar::primitive_scale(&xs);
        assert_eq!(s, big(9, 2));
        let scaled: Vec<_> = xs.iter().map(|x| x * &s).collect();
        assert_eq!(scaled, vec![big(3, 1), big(-2, 1), big(0, 1)]);
    }
}
