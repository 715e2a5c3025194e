//! Small helpers over `rug` floats shared by the numerical modules.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float};

/// Extra bits carried internally by routines that round their result back to
/// the caller's precision.
pub const GUARD_BITS: u32 = 32;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn e(prec: u32) -> Float {
    Float::with_val(prec, 1).exp()
}

/// `2^exp` at the given precision.
pub fn pow2(prec: u32, exp: i32) -> Float {
    let mut f = Float::with_val(prec, 1);
    f <<= exp;
    f
}

pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64()
}

pub fn i_unit(prec: u32) -> Complex {
    Complex::with_val(prec, (0, 1))
}

/// `log(1 + u)` for complex `u`, accurate when `u` is small.
pub fn clog1p(u: &Complex) -> Complex {
    let prec = u.prec().0;
    let (re, im) = (u.real(), u.imag());
    // |1+u|^2 - 1 = 2 Re u + |u|^2
    let norm_u = Float::with_val(prec, u.norm_ref());
    let t = Float::with_val(prec, re * 2u32) + norm_u;
    let modulus = t.ln_1p() / 2u32;
    let one_plus_re = Float::with_val(prec, re + 1u32);
    let arg = Float::with_val(prec, im.atan2_ref(&one_plus_re));
    Complex::with_val(prec, (modulus, arg))
}

/// Number of significant decimal digits that a `prec`-bit mantissa supports.
pub fn decimal_digits(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Renders a float as a decimal string at its full precision. The output is a
/// pure function of the value and its precision.
pub fn to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

pub fn to_decimal_at(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Parses a decimal string. Accepts `e` (Euler's number) and `pi` as symbolic
/// constants.
pub fn parse_decimal(s: &str, prec: u32) -> Option<Float> {
    match s.trim() {
        "e" | "E" => Some(e(prec)),
        "pi" | "π" => Some(pi(prec)),
        t => Float::parse(t).ok().map(|p| Float::with_val(prec, p)),
    }
}

/// `10^exp` at the given precision.
pub fn pow10(prec: u32, exp: i32) -> Float {
    Float::with_val(prec, 10).pow(exp)
}

pub fn set_prec(x: &Float, prec: u32) -> Float {
    let mut y = Float::new(prec);
    y.assign(x);
    y
}
