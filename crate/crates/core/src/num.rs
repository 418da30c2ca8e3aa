//! Exact rational arithmetic helpers used by interval-graph geometry and the
//! JSON spec format.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for the exact rational type used throughout.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse a number written as `"p/q"`, an integer, or a plain decimal
/// (`"0.25"`, `"-1.5"`). Exact: decimals become p/10^k.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::BadSpec("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::BadSpec(format!("bad numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::BadSpec(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::BadSpec(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            "0"
        } else {
            int_part
        };
        let i: BigInt = int_part
            .parse()
            .map_err(|_| Error::BadSpec(format!("bad decimal `{s}`")))?;
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::BadSpec(format!("bad decimal `{s}`")));
        }
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| Error::BadSpec(format!("bad decimal `{s}`")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(f, scale);
        let whole = Rat::from_integer(i.abs());
        let v = whole + frac;
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::BadSpec(format!("bad number `{s}`")))?;
    Ok(Rat::from_integer(n))
}

/// Canonical text form: integers print bare, everything else as `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for very large components
        let n = r.numer();
        let d = r.denom();
        big_ln_int(&n.abs().to_biguint().unwrap()).exp()
            / big_ln_int(&d.to_biguint().unwrap()).exp()
            * if r.is_negative() { -1.0 } else { 1.0 }
    })
}

fn big_ln_int(b: &BigUint) -> f64 {
    big_ln(b)
}

/// Natural log of a big unsigned integer, accurate to ~1e-15 relative.
/// `ln(0)` is returned as 0 so that empty counts do not poison slopes;
/// callers guard emptiness themselves.
pub fn big_ln(b: &BigUint) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    let bits = b.bits();
    if bits <= 53 {
        return (b.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top = (b >> shift).to_u64().unwrap() as f64;
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_integers() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat(" 7/4 ").unwrap(), rat(7, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(rat_to_string(&rat(1, 2)), "1/2");
        assert_eq!(rat_to_string(&rat(4, 2)), "2");
        assert_eq!(rat_to_string(&parse_rat("0.50").unwrap()), "1/2");
    }

    #[test]
    fn big_ln_matches_f64() {
        let b = BigUint::from(1_000_000u64);
        assert!((big_ln(&b) - (1e6f64).ln()).abs() < 1e-12);
        // 2^200
        let b = BigUint::from(1u8) << 200;
        assert!((big_ln(&b) - 200.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
