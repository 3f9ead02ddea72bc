//! Exact ε and the weight threshold `εn`.
//!
//! ε is kept as a reduced fraction so that every "at least εn points"
//! decision is an integer comparison. Decimal input such as `0.01` is read
//! digit-exactly, never through binary floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_DENOMINATOR: u128 = 1_000_000_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Epsilon {
    pub fn new(num: u128, den: u128) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if den > MAX_DENOMINATOR || num > MAX_DENOMINATOR {
            return Err(Error::InvalidConfig("epsilon needs at most 18 significant digits".into()));
        }
        Ok(Epsilon { num, den })
    }

    /// Uses the shortest decimal that round-trips to `v`.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {v}")));
        }
        format!("{v}").parse()
    }

    pub fn numer(&self) -> u128 {
        self.num
    }

    pub fn denom(&self) -> u128 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn threshold(&self, n: u64) -> Threshold {
        Threshold {
            num: self.num * u128::from(n),
            den: self.den,
        }
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `0.01`, `1e-3`, `2.5E-2` and `1/3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot read epsilon {s:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: u128 = a.trim().parse().map_err(|_| bad())?;
            let b: u128 = b.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(a, b);
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if (int.is_empty() && frac.is_empty()) || !(int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit())) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let digits = digits.trim_start_matches('0');
        let scale = frac.len() as i32 - exp;
        if digits.len() > 36 || scale.abs() > 36 {
            return Err(bad());
        }
        let mut num: u128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let mut den: u128 = 1;
        if scale >= 0 {
            den = 10u128.pow(scale as u32);
        } else {
            num = num.checked_mul(10u128.pow((-scale) as u32)).ok_or_else(bad)?;
        }
        // Strip common factors of ten before the range check in `new`.
        while num.is_multiple_of(10) && den.is_multiple_of(10) && num != 0 {
            num /= 10;
            den /= 10;
        }
        Epsilon::new(num, den)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The exact threshold `τ = εn`. Recursion keeps τ fixed: a subproblem of
/// weight `W` has `ε' = τ / W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    num: u128,
    den: u128,
}

impl Threshold {
    /// A whole-number threshold `k`.
    pub fn integer(k: u64) -> Self {
        Threshold {
            num: u128::from(k),
            den: 1,
        }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Compares `a·τ` with `b·w`.
    #[inline]
    pub fn cmp_scaled(&self, a: u64, b: u64, w: u64) -> Ordering {
        (u128::from(a) * self.num).cmp(&(u128::from(b) * u128::from(w) * self.den))
    }

    /// `w ≥ τ`: a range of weight `w` is heavy.
    #[inline]
    pub fn reached_by(&self, w: u64) -> bool {
        self.cmp_scaled(1, 1, w) != Ordering::Greater
    }

    /// `τ < k`.
    pub fn below(&self, k: u64) -> bool {
        self.cmp_scaled(1, 1, k) == Ordering::Less
    }

    /// `ε' = τ / w`.
    pub fn relative_to(&self, w: u64) -> f64 {
        self.value() / w as f64
    }
}
