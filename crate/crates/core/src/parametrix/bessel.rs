//! Modified Bessel functions `I_0, I_1, K_0, K_1` of complex argument.
//!
//! Power series near the origin; for `K` and `Re z > 0` beyond
//! [`asymptotic_cutover`] the Hankel expansion
//! `K_ν(z) ~ √(π/2z) e^{-z} Σ a_k(ν)/z^k`.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numeric::{cabs, euler_gamma, pi, GUARD_BITS};

/// `|z|` beyond which `K_ν` switches to the asymptotic expansion. Its
/// smallest term is about `e^{-2|z|}`, so the cutover grows with precision.
pub fn asymptotic_cutover(prec: u32) -> f64 {
    0.37 * (prec as f64 + 16.0)
}

/// Bits lost to cancellation when the series is summed at `|z|`: the terms
/// grow like `e^{|z|}` while `K` decays like `e^{-|z|}`.
fn series_guard(z: &Complex) -> u32 {
    let r = cabs(z).to_f64();
    GUARD_BITS + (2.0 * r / std::f64::consts::LN_2).ceil() as u32
}

/// `Σ_k t^k/(k!)²` and companions, accumulated together.
struct Series {
    i0: Complex,
    i1_over_half_z: Complex,
    k0_tail: Complex,
    k1_tail: Complex,
}

fn series(z: &Complex, wp: u32) -> Series {
    let t = Complex::with_val(wp, z.square_ref()) / 4u32;
    let eps = Float::with_val(wp, 1) >> (wp as i32);
    let gamma = euler_gamma(wp);
    // term0 = t^k/(k!)², term1 = t^k/(k!(k+1)!)
    let mut term0 = Complex::with_val(wp, 1);
    let mut term1 = Complex::with_val(wp, 1);
    let mut harmonic = Float::with_val(wp, 0);
    let mut i0 = Complex::with_val(wp, 0);
    let mut i1 = Complex::with_val(wp, 0);
    let mut k0_tail = Complex::with_val(wp, 0);
    let mut k1_tail = Complex::with_val(wp, 0);
    let mut k = 0u32;
    loop {
        // ψ(k+1) + ψ(k+2) = 2 H_k + 1/(k+1) - 2γ
        let psi_sum = Float::with_val(wp, &harmonic * 2u32) + Float::with_val(wp, 1) / (k + 1)
            - Float::with_val(wp, &gamma * 2u32);
        i0 += &term0;
        i1 += &term1;
        k0_tail += Complex::with_val(wp, &term0 * &harmonic);
        k1_tail += Complex::with_val(wp, &term1 * &psi_sum);
        k += 1;
        harmonic += Float::with_val(wp, 1) / k;
        term0 *= &t;
        term0 /= k * k;
        term1 *= &t;
        term1 /= k * (k + 1);
        let size = cabs(&term0) * Float::with_val(wp, harmonic.clone() + 1u32);
        if k > 2 && size < Float::with_val(wp, cabs(&i0) * &eps) {
            break;
        }
    }
    Series {
        i0,
        i1_over_half_z: i1,
        k0_tail,
        k1_tail,
    }
}

fn check_cut(z: &Complex) -> Result<()> {
    if z.imag().is_zero() && *z.real() <= 0 {
        return Err(Error::BranchCut(format!(
            "K is evaluated off (-∞, 0] (z = {})",
            z.real().to_f64()
        )));
    }
    Ok(())
}

/// `(K_0(z), K_1(z))` from the asymptotic expansion.
fn k_asymptotic(z: &Complex, wp: u32) -> (Complex, Complex) {
    let eps = Float::with_val(wp, 1) >> (wp as i32);
    let recip = Complex::with_val(wp, z.recip_ref());
    let mut s0 = Complex::with_val(wp, 1);
    let mut s1 = Complex::with_val(wp, 1);
    let mut t0 = Complex::with_val(wp, 1);
    let mut t1 = Complex::with_val(wp, 1);
    let mut prev0 = cabs(&t0);
    let mut k = 1i64;
    loop {
        let odd = (2 * k - 1) * (2 * k - 1);
        // a_k(ν) = a_{k-1}(ν) (4ν² - (2k-1)²) / (8k)
        t0 *= &recip;
        t0 *= Float::with_val(wp, -odd) / (8 * k);
        t1 *= &recip;
        t1 *= Float::with_val(wp, 4 - odd) / (8 * k);
        let size = cabs(&t0);
        if size > prev0 {
            break;
        }
        s0 += &t0;
        s1 += &t1;
        if size < eps {
            break;
        }
        prev0 = size;
        k += 1;
    }
    let pref = Complex::with_val(wp, pi(wp) / Complex::with_val(wp, z * 2u32)).sqrt()
        * Complex::with_val(wp, (-z.clone()).exp_ref());
    (Complex::with_val(wp, &pref * s0), Complex::with_val(wp, &pref * s1))
}

fn use_asymptotic(z: &Complex, prec: u32) -> bool {
    *z.real() > 0 && cabs(z) > asymptotic_cutover(prec)
}

/// `(K_0(z), K_1(z))`, `z ∉ (-∞, 0]`.
pub fn bessel_k01(z: &Complex) -> Result<(Complex, Complex)> {
    check_cut(z)?;
    let prec = z.prec().0;
    if use_asymptotic(z, prec) {
        let wp = prec + GUARD_BITS;
        let (k0, k1) = k_asymptotic(&Complex::with_val(wp, z), wp);
        return Ok((Complex::with_val(prec, k0), Complex::with_val(prec, k1)));
    }
    let wp = prec + series_guard(z);
    let zw = Complex::with_val(wp, z);
    let s = series(&zw, wp);
    let log_half_z = Complex::with_val(wp, Complex::with_val(wp, &zw / 2u32).ln_ref());
    let half_z = Complex::with_val(wp, &zw / 2u32);
    let i1 = Complex::with_val(wp, &half_z * &s.i1_over_half_z);
    let lg = Complex::with_val(wp, &log_half_z + euler_gamma(wp));
    let k0 = Complex::with_val(wp, &s.k0_tail - Complex::with_val(wp, &lg * &s.i0));
    let k1 = Complex::with_val(wp, zw.recip_ref()) + Complex::with_val(wp, &log_half_z * &i1)
        - Complex::with_val(wp, &zw / 4u32) * &s.k1_tail;
    Ok((Complex::with_val(prec, k0), Complex::with_val(prec, k1)))
}

pub fn bessel_k0(z: &Complex) -> Result<Complex> {
    Ok(bessel_k01(z)?.0)
}

pub fn bessel_k1(z: &Complex) -> Result<Complex> {
    Ok(bessel_k01(z)?.1)
}

/// `(I_0(z), I_1(z))` by the power series, for any `z`.
pub fn bessel_i01(z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let wp = prec + series_guard(z);
    let zw = Complex::with_val(wp, z);
    let s = series(&zw, wp);
    let i1 = Complex::with_val(wp, &zw / 2u32) * &s.i1_over_half_z;
    (Complex::with_val(prec, s.i0), Complex::with_val(prec, i1))
}

pub fn bessel_i0(z: &Complex) -> Complex {
    bessel_i01(z).0
}

pub fn bessel_i1(z: &Complex) -> Complex {
    bessel_i01(z).1
}

/// `I_0(x) K_0'(x) - I_0'(x) K_0(x) = -(I_0 K_1 + I_1 K_0)`, which equals
/// `-1/x`.
pub fn wronskian_i0_k0(x: &Float) -> Result<Float> {
    let prec = x.prec();
    let z = Complex::with_val(prec, x);
    let (i0, i1) = bessel_i01(&z);
    let (k0, k1) = bessel_k01(&z)?;
    let w = Complex::with_val(prec, &i0 * &k1) + Complex::with_val(prec, &i1 * &k0);
    Ok(-Float::with_val(prec, w.real()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn re(x: f64) -> Complex {
        Complex::with_val(P, x)
    }

    fn rel(a: &Complex, b: f64) -> f64 {
        (a.real().to_f64() - b).abs() / b.abs()
    }

    #[test]
    fn known_values() {
        assert_eq!(bessel_i0(&re(0.0)), 1);
        // Reference values to 16 digits.
        assert!(rel(&bessel_k0(&re(1.0)).unwrap(), 0.421_024_438_240_708_3) < 1e-15);
        assert!(rel(&bessel_k1(&re(1.0)).unwrap(), 0.601_907_230_197_234_6) < 1e-15);
        assert!(rel(&bessel_i0(&re(1.0)), 1.266_065_877_752_008_4) < 1e-15);
        assert!(rel(&bessel_i1(&re(1.0)), 0.565_159_103_992_485) < 1e-15);
        assert!(rel(&bessel_k0(&re(2.0)).unwrap(), 0.113_893_872_749_533_4) < 1e-15);
    }

    #[test]
    fn wronskian_across_cutover() {
        let c = asymptotic_cutover(P);
        for x in [0.5, 1.0, 5.0, 20.0, 0.9 * c, 1.1 * c] {
            let xf = Float::with_val(P, x);
            let w = wronskian_i0_k0(&xf).unwrap();
            let expect = -Float::with_val(P, xf.recip_ref());
            let err = Float::with_val(P, &w - &expect).abs() * x;
            assert!(err < 1e-45, "x = {x}: {}", err.to_f64());
        }
    }

    #[test]
    fn branches_agree_at_cutover() {
        let c = asymptotic_cutover(P);
        for z in [Complex::with_val(P, (c, 0.0)), Complex::with_val(P, (c * 0.8, c * 0.6))] {
            let (a0, a1) = k_asymptotic(&z, P + GUARD_BITS);
            let wp = P + series_guard(&z);
            let zw = Complex::with_val(wp, &z);
            let s = series(&zw, wp);
            let lg = Complex::with_val(wp, Complex::with_val(wp, &zw / 2u32).ln_ref()) + euler_gamma(wp);
            let k0 = Complex::with_val(wp, &s.k0_tail - Complex::with_val(wp, &lg * &s.i0));
            let d = Complex::with_val(P, &k0 - &a0);
            assert!(cabs(&d) < Float::with_val(P, cabs(&a0) * 1e-50));
            assert!(cabs(&a1) > 0);
        }
    }

    #[test]
    fn k0_large_argument_scaling() {
        // K_0(x) e^x √x = √(π/2) (1 - 1/(8x) + ...)
        let x = 50.0;
        let k = bessel_k0(&re(x)).unwrap();
        let scaled = k.real().to_f64() * x.exp() * x.sqrt();
        let limit = (std::f64::consts::PI / 2.0).sqrt();
        let dev = (scaled / limit - 1.0).abs();
        assert!(dev < 3e-3);
        assert!((dev * 8.0 * x - 1.0).abs() < 0.05);
    }

    #[test]
    fn conjugate_symmetry() {
        let z = Complex::with_val(P, (3.0, 4.0));
        let a = bessel_k0(&z).unwrap();
        let b = bessel_k0(&Complex::with_val(P, z.conj_ref())).unwrap();
        let d = Complex::with_val(P, &a - Complex::with_val(P, b.conj_ref()));
        assert!(cabs(&d) < 1e-50);
    }

    #[test]
    fn cut_is_rejected() {
        assert!(bessel_k0(&re(0.0)).is_err());
        assert!(bessel_k0(&re(-1.0)).is_err());
    }
}
