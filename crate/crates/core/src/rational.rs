//! Exact rationals and their textual encoding.
//!
//! Every number that crosses a file or process boundary is written as a
//! string `"p/q"` (or `"n"` for integers). Floating point literals are
//! rejected on input so that results stay bit-exact across platforms.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integral(q: &Q) -> bool {
    q.denom().is_one()
}

/// Parses `"p/q"`, `"-p/q"` or an integer literal. Decimal points and
/// exponents are refused.
pub fn parse(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::input("empty rational"));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::input(format!(
            "'{t}' is not an exact rational (floats are not accepted)"
        )));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::input(format!("bad rational numerator in '{t}'")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::input(format!("bad rational denominator in '{t}'")))?;
    if den.is_zero() {
        return Err(Error::input(format!("zero denominator in '{t}'")));
    }
    Ok(Q::new(num, den))
}

/// Comma separated list of rationals, e.g. `"1/2,0,-3"`.
pub fn parse_list(text: &str) -> Result<Vec<Q>> {
    text.split(',').map(parse).collect()
}

pub fn to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub struct Show<'a>(pub &'a [Q]);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

pub fn min(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn abs(q: &Q) -> Q {
    q.abs()
}

/// Serde adapter: a single rational as `"p/q"`; accepts JSON integers too.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }

    pub(crate) struct QVisitor;

    impl Visitor<'_> for QVisitor {
        type Value = Q;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            write!(f, "an exact rational as \"p/q\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
            parse(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
            Ok(Q::from_integer(BigInt::from(v)))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Q, E> {
            Err(E::custom(format!(
                "float {v} is not an exact rational; write it as a \"p/q\" string"
            )))
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_qvec {
    use super::*;
    use serde::de::SeqAccess;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Vec<Q>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of exact rationals")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut a: A) -> std::result::Result<Vec<Q>, A::Error> {
                let mut out = Vec::new();
                while let Some(q) = a.next_element::<Wrapped>()? {
                    out.push(q.0);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V)
    }

    pub(crate) struct Wrapped(pub Q);

    impl<'de> serde::Deserialize<'de> for Wrapped {
        fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
            d.deserialize_any(serde_q::QVisitor).map(Wrapped)
        }
    }
}
