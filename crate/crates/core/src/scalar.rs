//! Real scalar abstraction for the floating representation route.
//!
//! Everything numeric on the representation side is written against
//! [`RealScalar`], so the same code runs in `f32`, `f64` or double-double
//! ([`twofloat::TwoFloat`]).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

pub trait RealScalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer representable in scalar")
    }
}

impl<T> RealScalar for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

/// `exp(2πi·k/m)`, accurate to the working precision of `T`.
///
/// The library trigonometric functions of extended-precision types are not
/// always accurate to full width, so the seed is polished by Newton steps on
/// `z^m - 1`.
pub fn root_of_unity<T: RealScalar>(k: i64, m: u32) -> Complex<T> {
    let m_i = m as i64;
    let k = k.rem_euclid(m_i);
    if k == 0 {
        return Complex::one();
    }
    let two_pi = T::PI() + T::PI();
    let theta = two_pi * <T as RealScalar>::from_i64(k) / <T as RealScalar>::from_i64(m_i);
    let mut z = Complex::new(theta.cos(), theta.sin());
    let m_t = Complex::new(<T as RealScalar>::from_i64(m_i), T::zero());
    for _ in 0..3 {
        let zm1 = num_traits::pow(z, (m - 1) as usize);
        let f = zm1 * z - Complex::one();
        z = z - f / (m_t * zm1);
    }
    z
}

/// Splits `x` into the nearest integer and the signed remainder.
///
/// Works for multi-component floats: the integer part is peeled off one
/// `f64`-sized chunk at a time until the remainder is below one half.
pub fn round_to_integer<T: RealScalar>(x: T) -> (BigInt, T) {
    let mut rest = x;
    let mut acc = BigInt::zero();
    for _ in 0..8 {
        let hi = rest.to_f64().unwrap_or(0.0).round();
        if hi == 0.0 {
            break;
        }
        acc += BigInt::from_f64(hi).expect("finite coefficient");
        rest = rest - <T as num_traits::NumCast>::from(hi).expect("f64 fits scalar");
    }
    // Ties and sub-ulp carries: one more correction step in the scalar itself.
    let r = rest.round();
    if !r.is_zero() {
        acc += BigInt::from_f64(r.to_f64().unwrap()).unwrap();
        rest = rest - r;
    }
    (acc, rest)
}
