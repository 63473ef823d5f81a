//! Slopes: isotopy classes of essential simple closed curves on the torus.
//!
//! A slope `p/q` is stored in lowest terms with `q >= 0`; the slope at
//! infinity is `1/0`. Its homology class is the integer vector `(q, p)`,
//! i.e. `q` steps along the `0/1` curve and `p` steps along the `1/0` curve.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A canonical reduced slope `p/q`; `1/0` is infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ZERO: Slope = Slope { p: 0, q: 1 };

    /// Reduces `p/q` to canonical form. Fails only for `0/0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSlope("0/0".into()));
        }
        Ok(Self::reduce(p, q))
    }

    /// Integer slope `n/1`.
    pub fn integer(n: i64) -> Self {
        Slope { p: n, q: 1 }
    }

    /// Slope of a nonzero homology vector `(x, y) = (q, p)`; sign is ignored.
    pub fn from_homology(x: i64, y: i64) -> Result<Self> {
        Self::new(y, x)
    }

    fn reduce(p: i64, q: i64) -> Self {
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Slope { p, q }
    }

    pub fn numerator(&self) -> i64 {
        self.p
    }

    pub fn denominator(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    /// Homology vector `(q, p)`.
    pub fn homology(&self) -> [i64; 2] {
        [self.q, self.p]
    }

    pub fn to_f64(&self) -> f64 {
        if self.q == 0 {
            f64::INFINITY
        } else {
            self.p as f64 / self.q as f64
        }
    }

    /// Key used for deterministic geodesic tie-breaking.
    pub fn height_key(&self) -> (i64, i64) {
        (self.q, self.p)
    }
}

/// Ordered by value, with infinity above every finite slope.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.q == 0, other.q == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let lhs = self.p as i128 * other.q as i128;
                let rhs = other.p as i128 * self.q as i128;
                lhs.cmp(&rhs)
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSlope(s.to_string());
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| bad())?,
                q.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        Slope::new(p, q).map_err(|_| bad())
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
