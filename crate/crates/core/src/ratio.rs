//! Exact nonnegative rationals for approximation parameters.
//!
//! Algorithm parameters like the price cap `2*ceil(1/eps)` must be computed
//! exactly; floating point `ceil(1.0 / 0.2)` rounds the wrong way.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
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

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::input("ratio with zero denominator"));
        }
        let g = gcd(num.max(1), den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True when 0 < self < 1.
    pub fn is_proper(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    /// ceil(1/self); requires a nonzero value.
    pub fn ceil_inv(&self) -> u64 {
        assert!(self.num > 0, "ceil_inv of zero ratio");
        self.den.div_ceil(self.num)
    }

    /// ceil(self * x)
    pub fn mul_ceil(&self, x: u64) -> u64 {
        ((self.num as u128 * x as u128).div_ceil(self.den as u128)) as u64
    }

    /// floor(self * x)
    pub fn mul_floor(&self, x: u64) -> u64 {
        ((self.num as u128 * x as u128) / self.den as u128) as u64
    }

    pub fn halve(&self) -> Ratio {
        Ratio::new(self.num, self.den.checked_mul(2).expect("ratio overflow")).unwrap()
    }

    pub fn quarter(&self) -> Ratio {
        self.halve().halve()
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts "a/b", decimals like "0.25", and integers.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num = a
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::input(format!("bad ratio '{s}': {e}")))?;
            let den = b
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::input(format!("bad ratio '{s}': {e}")))?;
            return Ratio::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse()
                    .map_err(|e| Error::input(format!("bad ratio '{s}': {e}")))?
            };
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::input(format!("bad ratio '{s}'")));
            }
            let den = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac
                .parse()
                .map_err(|e| Error::input(format!("bad ratio '{s}': {e}")))?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(|| Error::input(format!("ratio '{s}' overflows")))?;
            return Ratio::new(num, den);
        }
        let num = s
            .parse::<u64>()
            .map_err(|e| Error::input(format!("bad ratio '{s}': {e}")))?;
        Ratio::new(num, 1)
    }
}

/// ceil(x^(1/k)) for integer x, k >= 1.
pub fn iroot_ceil(x: u128, k: u32) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut lo = 1u128;
    let mut hi = 1u128 << (128 / k + 1).min(64);
    // smallest v with v^k >= x
    while hi.checked_pow(k).map(|p| p < x).unwrap_or(false) {
        hi *= 2;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        let pow = mid.checked_pow(k);
        match pow {
            Some(p) if p >= x => hi = mid,
            Some(_) => lo = mid + 1,
            None => hi = mid,
        }
    }
    lo as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("1/4".parse::<Ratio>().unwrap(), Ratio::new(1, 4).unwrap());
        assert_eq!("0.25".parse::<Ratio>().unwrap(), Ratio::new(1, 4).unwrap());
        assert_eq!("0.2".parse::<Ratio>().unwrap(), Ratio::new(1, 5).unwrap());
        assert!("1/0".parse::<Ratio>().is_err());
    }

    #[test]
    fn ceil_inv_exact() {
        assert_eq!("0.2".parse::<Ratio>().unwrap().ceil_inv(), 5);
        assert_eq!("1/3".parse::<Ratio>().unwrap().ceil_inv(), 3);
        assert_eq!("2/5".parse::<Ratio>().unwrap().ceil_inv(), 3);
    }

    #[test]
    fn mul_rounding() {
        let r = Ratio::new(1, 4).unwrap();
        assert_eq!(r.mul_ceil(10), 3);
        assert_eq!(r.mul_floor(10), 2);
    }

    #[test]
    fn iroot() {
        assert_eq!(iroot_ceil(8, 3), 2);
        assert_eq!(iroot_ceil(9, 3), 3);
        assert_eq!(iroot_ceil(4096 / 512, 3), 2);
        assert_eq!(iroot_ceil(512 * 64, 3), 32);
        for x in 1..2000u128 {
            let c = iroot_ceil(x, 2);
            assert!((c as u128).pow(2) >= x && ((c - 1) as u128).pow(2) < x);
        }
    }
}
