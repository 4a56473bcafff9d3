//! Exact rationals used for weights and expansions.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

/// Parses `"3/7"`, `"0.25"`, `"12"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(bad)?;
        let den = parse_decimal(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(num / den);
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer.checked_mul(10)?.checked_add((b - b'0') as i128)?;
    }
    let scale = exponent.checked_sub(frac_part.len() as i32)?;
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    let mut value =
        if scale >= 0 { Rational::from_integer(numer.checked_mul(pow)?) } else { Rational::new(numer, pow) };
    if negative {
        value = -value;
    }
    Some(value)
}

/// `p/q` form, always with an explicit denominator.
pub fn format_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Shortest form: integers without a denominator.
pub fn format_compact(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format_exact(r)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Fifteen significant digits in scientific notation; marks a value as approximate.
pub fn format_approx(x: f64) -> String {
    format!("{:.14e}", x)
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

pub(crate) fn lcm_checked(a: i128, b: i128) -> Option<i128> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

/// Nonnegative fraction of scaled integer sums, compared exactly by cross-multiplication.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frac {
    pub num: u64,
    pub den: u64,
}

impl Frac {
    pub fn to_rational(self) -> Rational {
        Rational::new(self.num as i128, self.den as i128)
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!(parse_rational("3/7").unwrap(), Rational::new(3, 7));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("12").unwrap(), Rational::from_integer(12));
        assert_eq!(parse_rational("1.5e-3").unwrap(), Rational::new(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), Rational::from_integer(200));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new(-1, 2));
        assert_eq!(parse_rational("0.5/0.25").unwrap(), Rational::from_integer(2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1..2", "--1", "1/", "e5", "0x10"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn frac_order_is_exact() {
        let a = Frac { num: 1, den: 3 };
        let b = Frac { num: 2, den: 6 };
        let c = Frac { num: 333_333_333_333, den: 1_000_000_000_000 };
        assert_eq!(a, b);
        assert!(c < a);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_exact(&Rational::from_integer(2)), "2/1");
        assert_eq!(format_compact(&Rational::from_integer(2)), "2");
        assert_eq!(format_compact(&Rational::new(2, 6)), "1/3");
        assert_eq!(format_approx(1.0 / 3.0), "3.33333333333333e-1");
    }
}
