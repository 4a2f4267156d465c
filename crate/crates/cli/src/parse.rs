//! Argument value parsers.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::Zero;

/// A nonnegative integer written in decimal or as a sum and difference of
/// terms `a` and `a^e`, e.g. `2^64+1` or `10^30-7`.
pub fn integer(s: &str) -> Result<BigUint, String> {
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err("empty integer".into());
    }
    let mut total = BigInt::zero();
    let mut rest = text.as_str();
    let mut sign = 1;
    if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    loop {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = power(&rest[..end]).map_err(|e| format!("'{s}': {e}"))?;
        total += if sign > 0 {
            BigInt::from(term)
        } else {
            -BigInt::from(term)
        };
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'+' { 1 } else { -1 };
        rest = &rest[end + 1..];
    }
    match total.sign() {
        Sign::Minus => Err(format!("'{s}' is negative")),
        _ => Ok(total.magnitude().clone()),
    }
}

fn power(term: &str) -> Result<BigUint, String> {
    let (base, exp) = match term.split_once('^') {
        Some((b, e)) => (b, Some(e)),
        None => (term, None),
    };
    let digits = |t: &str| -> Result<BigUint, String> {
        if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
            return Err(format!("'{t}' is not a decimal integer"));
        }
        Ok(t.parse().expect("checked digits"))
    };
    let base = digits(base)?;
    match exp {
        None => Ok(base),
        Some(e) => {
            let e: u32 = e.parse().map_err(|_| format!("bad exponent '{e}'"))?;
            if e > 1 << 24 {
                return Err(format!("exponent {e} too large"));
            }
            Ok(base.pow(e))
        }
    }
}

/// `x` or `x/y` with `y > 0`.
pub fn rational(s: &str) -> Result<BigRational, String> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in '{s}'"))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in '{s}'"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        assert_eq!(integer("4097").unwrap(), BigUint::from(4097u32));
        assert_eq!(integer("2^12+1").unwrap(), BigUint::from(4097u32));
        assert_eq!(integer("10^3-7").unwrap(), BigUint::from(993u32));
        assert_eq!(integer("2^1024+2^512+1").unwrap().bits(), 1025);
        assert!(integer("3-5").is_err());
        assert!(integer("x").is_err());
        assert!(integer("").is_err());
        assert!(integer("2^").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(
            rational("-6/4").unwrap(),
            BigRational::new((-3).into(), 2.into())
        );
        assert_eq!(rational("5").unwrap(), BigRational::from_integer(5.into()));
        assert!(rational("1/0").is_err());
    }
}
