//! Momenta of the walk, restricted to the incoming interval `(-π, 0)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A momentum `k ∈ (-π, 0)`, preferably stored as an exact rational multiple
/// of π: the pair `(p, q)` denotes `k = -π p / q` with `0 < p < q` and
/// `gcd(p, q) = 1`. Irrational momenta carry only the float value.
///
/// The dispersion relation of the infinite path gives each momentum the
/// energy `E(k) = 2 cos k` and group speed `|2 sin k|`.
#[derive(Clone, Copy, Debug)]
pub struct Momentum {
    fraction: Option<(u64, u64)>,
    value: f64,
}

impl Momentum {
    /// Momentum `-π p / q`. Requires `0 < p < q`.
    pub fn from_fraction(p: u64, q: u64) -> Result<Self> {
        if p == 0 || p >= q {
            return Err(Error::InvalidMomentum(format!(
                "fraction {p}/{q} must satisfy 0 < p/q < 1"
            )));
        }
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        Ok(Momentum {
            fraction: Some((p, q)),
            value: -PI * p as f64 / q as f64,
        })
    }

    /// Free-standing momentum in radians, strictly inside `(-π, 0)`.
    pub fn from_radians(value: f64) -> Result<Self> {
        if !(value > -PI && value < 0.0) {
            return Err(Error::InvalidMomentum(format!(
                "{value} is outside (-π, 0)"
            )));
        }
        Ok(Momentum {
            fraction: None,
            value,
        })
    }

    pub fn radians(&self) -> f64 {
        self.value
    }

    /// `E(k) = 2 cos k`.
    pub fn energy(&self) -> f64 {
        2.0 * self.value.cos()
    }

    /// Group speed `|2 sin k|` of a packet centered at this momentum.
    pub fn group_speed(&self) -> f64 {
        (2.0 * self.value.sin()).abs()
    }

    /// The reduced `(p, q)` pair when the momentum is `-π p / q`.
    pub fn fraction(&self) -> Option<(u64, u64)> {
        self.fraction
    }

    /// The grid `{-π j / q : j = 1 .. q-1}`, sorted ascending in `k`.
    pub fn grid(q: u64) -> Vec<Momentum> {
        (1..q)
            .rev()
            .map(|j| Momentum::from_fraction(j, q).expect("0 < j < q"))
            .collect()
    }

    /// Equality that prefers the exact fraction when both sides carry one.
    pub fn same_as(&self, other: &Momentum) -> bool {
        match (self.fraction, other.fraction) {
            (Some(a), Some(b)) => a == b,
            _ => self.value == other.value,
        }
    }
}

impl PartialEq for Momentum {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl PartialOrd for Momentum {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fraction {
            Some((p, q)) => write!(f, "-{p}π/{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Parses the CLI form `"p/q"`, meaning `k = -π p / q`.
impl FromStr for Momentum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidMomentum(format!("expected p/q, got {s:?}")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidMomentum(format!("bad numerator in {s:?}")))?;
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidMomentum(format!("bad denominator in {s:?}")))?;
        Momentum::from_fraction(p, q)
    }
}

impl Serialize for Momentum {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self.fraction {
            Some((p, q)) => ser.serialize_str(&format!("{p}/{q}")),
            None => ser.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Momentum {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Value(f64),
        }
        match Raw::deserialize(de)? {
            Raw::Text(s) => s.parse().map_err(D::Error::custom),
            Raw::Value(v) => Momentum::from_radians(v).map_err(D::Error::custom),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_reduce() {
        let k = Momentum::from_fraction(2, 8).unwrap();
        assert_eq!(k.fraction(), Some((1, 4)));
        assert!((k.radians() + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Momentum::from_fraction(0, 3).is_err());
        assert!(Momentum::from_fraction(3, 3).is_err());
        assert!(Momentum::from_fraction(4, 3).is_err());
        assert!(Momentum::from_radians(0.0).is_err());
        assert!(Momentum::from_radians(-PI).is_err());
        assert!(Momentum::from_radians(0.5).is_err());
    }

    #[test]
    fn parses_cli_syntax() {
        let k: Momentum = "1/2".parse().unwrap();
        assert_eq!(k.fraction(), Some((1, 2)));
        assert!((k.energy()).abs() < 1e-15);
        assert!("1".parse::<Momentum>().is_err());
        assert!("0/2".parse::<Momentum>().is_err());
        assert!("x/2".parse::<Momentum>().is_err());
    }

    #[test]
    fn grid_is_sorted_and_reduced() {
        let grid = Momentum::grid(4);
        assert_eq!(grid.len(), 3);
        assert!(grid.windows(2).all(|w| w[0].radians() < w[1].radians()));
        assert_eq!(grid[1].fraction(), Some((1, 2)));
    }
}
