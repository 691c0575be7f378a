//! Exact rational scalars.
//!
//! Exponents and all polynomial coefficients in this crate are arbitrary
//! precision rationals kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-ish f64 view, good enough for reporting.
pub fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Scale down so both parts fit in f64 range.
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as u64;
    let num = num >> shift;
    let den = den >> shift;
    let nf = bigint_to_f64(&num);
    let df = bigint_to_f64(&den);
    if df == 0.0 {
        if nf >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        nf / df
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    let mut out = 0.0f64;
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    for d in x.magnitude().to_u64_digits().iter().rev() {
        out = out * 18446744073709551616.0 + *d as f64;
    }
    sign * out
}

/// 2^e as an exact rational, with e of either sign.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// floor(log2(|r|)) for nonzero r; rough but sound within ±1.
pub fn approx_log2(r: &Rational) -> i64 {
    debug_assert!(!r.is_zero());
    r.numer().bits() as i64 - r.denom().bits() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_forms() {
        assert_eq!(rational_to_string(&rat(5)), "5");
        assert_eq!(rational_to_string(&rat_frac(-3, 6)), "-1/2");
    }

    #[test]
    fn f64_view() {
        assert!((rational_to_f64(&rat_frac(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rational_to_f64(&rat(-7)), -7.0);
    }

    #[test]
    fn pow2_signs() {
        assert_eq!(pow2(3), rat(8));
        assert_eq!(pow2(-2), rat_frac(1, 4));
    }
}
