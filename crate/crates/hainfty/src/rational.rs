//! Exact rational scalars.
//!
//! Rationals are arbitrary-precision and always kept in lowest terms with a
//! positive denominator (the invariants of `BigRational`). In file formats
//! they read and print as `"p/q"` or `"p"`.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The scalar field: arbitrary-precision rationals.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"p/q"` or `"p"`. Rejects zero denominators and garbage.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidInput(alloc::format!("malformed rational {s:?}")))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::InvalidInput(alloc::format!("malformed rational {s:?}")))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::InvalidInput(alloc::format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(-1)^e` for a possibly negative exponent.
pub fn sign_pow(e: i64) -> Rat {
    if e.rem_euclid(2) == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}
