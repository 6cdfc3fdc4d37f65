//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All math is written once against [`Scalar`] and instantiated for `f64`,
//! `f32` and the exact [`Rational`] type. Floating types treat values below a
//! small threshold as zero when pivoting or validating; [`Rational`] is exact.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Granularity used when turning floats into rationals.
pub const RATIONALIZE_DENOMINATOR: i64 = 1_000_000_000_000;

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// True when the value is zero for the purposes of pivoting and
    /// feasibility checks.
    fn is_negligible(&self) -> bool;

    /// Converts an exact rational into this type (rounding for floats).
    fn from_rational(r: &Rational) -> Self;

    /// Exact rational view of the value. Floats are rounded to the nearest
    /// multiple of `1 / RATIONALIZE_DENOMINATOR`.
    fn to_rational(&self) -> Rational;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(num: u128, den: u128) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in scalar")
    }

    fn is_finite_value(&self) -> bool {
        self.to_f64().is_some_and(f64::is_finite)
    }

    /// `|self - other| <= tol`.
    fn within(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).abs() <= Self::lit(tol)
    }
}

/// Rounds `x` to the nearest multiple of `1e-12` and returns it exactly.
pub fn rationalize(x: f64) -> Rational {
    let scaled = (x * RATIONALIZE_DENOMINATOR as f64).round();
    let numer = BigInt::from_f64(scaled).unwrap_or_else(BigInt::zero);
    Rational::new(numer, BigInt::from(RATIONALIZE_DENOMINATOR))
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }

            fn from_rational(r: &Rational) -> Self {
                // a single division of exactly representable operands is
                // correctly rounded, unlike the generic conversion
                const EXACT: i64 = 1 << 53;
                match (r.numer().to_i64(), r.denom().to_i64()) {
                    (Some(n), Some(d)) if n.abs() <= EXACT && d <= EXACT => {
                        (n as f64 / d as f64) as $t
                    }
                    _ => r.to_f64().unwrap_or(f64::NAN) as $t,
                }
            }

            fn to_rational(&self) -> Rational {
                rationalize(*self as f64)
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-6);

impl Scalar for Rational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn lit(x: f64) -> Self {
        Rational::from_float(x).expect("finite literal")
    }

    fn from_count(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

/// Sums scalars left to right; the fixed order keeps float results
/// independent of how the terms were produced.
pub fn ordered_sum<S: Scalar, I: IntoIterator<Item = S>>(terms: I) -> S {
    terms.into_iter().fold(S::zero(), |acc, t| acc + t)
}
