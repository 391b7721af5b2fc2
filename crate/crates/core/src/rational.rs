//! Exact rationals used throughout the crate.
//!
//! All quantities handled here (intersection numbers, Zariski coefficients,
//! integrals of piecewise polynomials) have small denominators, so a reduced
//! `i128` ratio never comes close to overflowing.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => s.parse::<i128>().ok().map(Q::from_integer),
    }
}

/// `"num/den"`, or just `"num"` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn min_q(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_q(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

/// JSON form of a rational: `{"num": n, "den": d}` with `d > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QJson {
    pub num: i128,
    pub den: i128,
}

impl From<Q> for QJson {
    fn from(x: Q) -> Self {
        QJson {
            num: *x.numer(),
            den: *x.denom(),
        }
    }
}

impl QJson {
    pub fn to_q(self) -> Option<Q> {
        (self.den != 0).then(|| Q::new(self.num, self.den))
    }
}

impl fmt::Display for QJson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&Q::new(self.num, self.den)))
    }
}

/// `serde(with = "qserde")` adapter storing a `Q` as `{num, den}`.
pub mod qserde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        QJson::from(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let j = QJson::deserialize(d)?;
        j.to_q()
            .ok_or_else(|| serde::de::Error::custom("zero denominator"))
    }
}

/// `serde(with = "qvec_serde")` adapter for `Vec<Q>`.
pub mod qvec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<QJson> = xs.iter().map(|x| QJson::from(*x)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let v = Vec::<QJson>::deserialize(d)?;
        v.into_iter()
            .map(|j| {
                j.to_q()
                    .ok_or_else(|| serde::de::Error::custom("zero denominator"))
            })
            .collect()
    }
}

/// Sign of `x` as -1, 0 or 1.
pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn one() -> Q {
    Q::one()
}

pub fn zero() -> Q {
    Q::zero()
}
