//! Exact non-negative rationals for thresholds such as `k/16` or `2^-18`.

use core::cmp::Ordering;
use core::fmt;

/// A non-negative fraction `num / den`, kept in lowest terms.
///
/// Every threshold that the analysis writes as a real number is held as a
/// `Frac` so comparisons against integer counts stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Frac {
    pub const ZERO: Frac = Frac { num: 0, den: 1 };
    pub const ONE: Frac = Frac { num: 1, den: 1 };

    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Frac {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Frac { num: num / g, den: den / g }
    }

    pub fn integer(n: u64) -> Frac {
        Frac { num: n, den: 1 }
    }

    /// `2^-e`.
    pub fn pow2_inv(e: u32) -> Frac {
        Frac::new(1, 1u64 << e)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    /// `self * x` as an exact fraction.
    pub fn times(self, x: u64) -> Frac {
        let g = gcd(x, self.den).max(1);
        Frac::new(self.num * (x / g), self.den / g)
    }

    /// `⌊self⌋`.
    pub fn floor(self) -> u64 {
        self.num / self.den
    }

    /// `⌈self⌉`.
    pub fn ceil(self) -> u64 {
        self.num.div_ceil(self.den)
    }

    /// `⌊self · x⌋`.
    pub fn floor_mul(self, x: u64) -> u64 {
        ((self.num as u128 * x as u128) / self.den as u128) as u64
    }

    /// `⌈self · x⌉`.
    pub fn ceil_mul(self, x: u64) -> u64 {
        (self.num as u128 * x as u128).div_ceil(self.den as u128) as u64
    }

    /// Compares `self` against the integer `x`.
    pub fn cmp_int(self, x: u64) -> Ordering {
        (self.num as u128).cmp(&(x as u128 * self.den as u128))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Error returned when parsing a fraction from text.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid fraction {0:?}: expected `a/b` or an integer with b > 0")]
pub struct ParseFracError(pub alloc::string::String);

impl core::str::FromStr for Frac {
    type Err = ParseFracError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseFracError(s.into());
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let num: u64 = a.trim().parse().map_err(|_| err())?;
                let den: u64 = b.trim().parse().map_err(|_| err())?;
                if den == 0 {
                    return Err(err());
                }
                Ok(Frac::new(num, den))
            }
            None => s.parse().map(Frac::integer).map_err(|_| err()),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Frac {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Frac {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <alloc::string::String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl core::ops::Mul for Frac {
    type Output = Frac;

    fn mul(self, other: Frac) -> Frac {
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        Frac::new((self.num / g1) * (other.num / g2), (self.den / g2) * (other.den / g1))
    }
}
