use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}

/// Canonical `"p/q"` form; integers print as `"p"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_positive(r: &Rational) -> bool {
    *r > Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let r = parse_rational("10/4").unwrap();
        assert_eq!(format_rational(&r), "5/2");
        assert_eq!(format_rational(&parse_rational("3").unwrap()), "3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
