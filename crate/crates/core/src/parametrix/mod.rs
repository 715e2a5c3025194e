//! Local parametrix at `+1`: the conformal map `f = log²φ/4`, the second
//! column of the Bessel model `Ψ`, the matrices `N` and `E`, and the leading
//! contribution of the right endpoint to the jump integral.

pub mod bessel;
mod matrix;

pub use bessel::{
    asymptotic_cutover, bessel_i0, bessel_i01, bessel_i1, bessel_k0, bessel_k01, bessel_k1,
    wronskian_i0_k0,
};
pub use matrix::Matrix2;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numeric::{cabs, clog1p, i_unit, pi, pow2, GUARD_BITS};
use crate::quadrature::{integrate_de, DeOptions};
use crate::szego::f2_over_w_cancellation;
use crate::weights::WeightSpec;

#[derive(Debug, Clone)]
pub struct ParametrixEval {
    pub zeta: Complex,
    /// `(i/π) K_0(2ζ^{1/2})`.
    pub psi12: Complex,
    /// `-2ζ^{1/2} K_0'(2ζ^{1/2}) = 2ζ^{1/2} K_1(2ζ^{1/2})`.
    pub psi22: Complex,
}

pub fn psi2(zeta: &Complex) -> Result<ParametrixEval> {
    let prec = zeta.prec().0;
    if zeta.imag().is_zero() && *zeta.real() <= 0 {
        return Err(Error::BranchCut(format!(
            "Ψ₂ is analytic off (-∞, 0] (ζ = {})",
            zeta.real().to_f64()
        )));
    }
    let two_root = Complex::with_val(prec, zeta.sqrt_ref()) * 2u32;
    let (k0, k1) = bessel_k01(&two_root)?;
    let psi12 = Complex::with_val(prec, &k0 * i_unit(prec)) / pi(prec);
    let psi22 = Complex::with_val(prec, &two_root * &k1);
    Ok(ParametrixEval {
        zeta: zeta.clone(),
        psi12,
        psi22,
    })
}

fn check_disc(zm1: &Complex) -> Result<()> {
    if !(cabs(zm1) < 0.5) {
        return Err(Error::Domain(format!(
            "f is only used in |z - 1| < 1/2 (|z - 1| = {})",
            cabs(zm1).to_f64()
        )));
    }
    Ok(())
}

/// `log φ(1 + zm1) = log1p(zm1 + (zm1 (zm1 + 2))^{1/2})`, accurate for small
/// offsets.
fn log_phi_near_one(zm1: &Complex) -> Complex {
    let prec = zm1.prec().0;
    let root = Complex::with_val(prec, Complex::with_val(prec, zm1 + 2u32).sqrt_ref())
        * Complex::with_val(prec, zm1.sqrt_ref());
    clog1p(&Complex::with_val(prec, zm1 + &root))
}

/// `f(1 + zm1)` for `|zm1| < 1/2`.
pub fn f_conformal_near_one(zm1: &Complex) -> Result<Complex> {
    check_disc(zm1)?;
    let prec = zm1.prec().0;
    let l = log_phi_near_one(zm1);
    Ok(Complex::with_val(prec, l.square_ref()) / 4u32)
}

/// `f(z) = log²φ(z)/4` for `|z - 1| < 1/2`.
pub fn f_conformal(z: &Complex) -> Result<Complex> {
    let prec = z.prec().0;
    f_conformal_near_one(&Complex::with_val(prec, z - 1u32))
}

/// `a(z) = ((z-1)/(z+1))^{1/4}`, analytic off `[-1, 1]`, positive on `z > 1`.
fn a_of(zp1: &Complex, zm1: &Complex) -> Complex {
    let prec = zm1.prec().0;
    let q = Complex::with_val(prec, zm1 / zp1);
    q.sqrt().sqrt()
}

fn n_from_a(a: &Complex) -> Matrix2 {
    let prec = a.prec().0;
    let inv = Complex::with_val(prec, a.recip_ref());
    let plus = Complex::with_val(prec, a + &inv) / 2u32;
    let minus = Complex::with_val(prec, a - &inv);
    let i2 = Complex::with_val(prec, (0, 2));
    let off12 = Complex::with_val(prec, &minus / &i2);
    let off21 = -off12.clone();
    Matrix2::new(plus.clone(), off12, off21, plus)
}

fn check_off_cut(zp1: &Complex, zm1: &Complex) -> Result<()> {
    if zm1.imag().is_zero() && *zm1.real() <= 0 && *zp1.real() >= 0 {
        return Err(Error::BranchCut("N and E are defined off [-1, 1]".into()));
    }
    Ok(())
}

/// `N(z)`, `z ∉ [-1, 1]`.
pub fn n_matrix(z: &Complex) -> Result<Matrix2> {
    let prec = z.prec().0;
    let zp1 = Complex::with_val(prec, z + 1u32);
    let zm1 = Complex::with_val(prec, z - 1u32);
    check_off_cut(&zp1, &zm1)?;
    Ok(n_from_a(&a_of(&zp1, &zm1)))
}

/// `E(1 + zm1) = N (1/√2)[[1, -i], [-i, 1]] f^{σ₃/4}`.
pub fn e_matrix_near_one(zm1: &Complex) -> Result<Matrix2> {
    let prec = zm1.prec().0;
    let zp1 = Complex::with_val(prec, zm1 + 2u32);
    check_off_cut(&zp1, zm1)?;
    let f = f_conformal_near_one(zm1)?;
    let f4 = f.sqrt().sqrt();
    let f4_inv = Complex::with_val(prec, f4.recip_ref());
    let n = n_from_a(&a_of(&zp1, zm1));
    let r = Float::with_val(prec, 2).sqrt().recip();
    let mi = Complex::with_val(prec, (0, -&r));
    let m = Matrix2::new(Complex::with_val(prec, &r), mi.clone(), mi, Complex::with_val(prec, &r));
    let d = Matrix2::new(f4, Complex::with_val(prec, 0), Complex::with_val(prec, 0), f4_inv);
    Ok(n.mul(&m).mul(&d))
}

pub fn e_matrix(z: &Complex) -> Result<Matrix2> {
    let prec = z.prec().0;
    e_matrix_near_one(&Complex::with_val(prec, z - 1u32))
}

/// `E(1)`, realized as `E(1 + 2^{-prec/2})`; `E` is analytic at 1 and the
/// error is of the size of the offset.
pub fn e_matrix_at_one(prec: u32) -> Matrix2 {
    let wp = prec + GUARD_BITS;
    let off = Complex::with_val(wp, pow2(wp, -(prec as i32) / 2));
    let e = e_matrix_near_one(&off).expect("offset lies in the disc");
    e.with_prec(prec)
}

/// `(1/√2)[[1, -i], [-i, 1]]`.
pub fn e_one_expected(prec: u32) -> Matrix2 {
    let r = Float::with_val(prec, 2).sqrt().recip();
    let mi = Complex::with_val(prec, (0, -&r));
    Matrix2::new(Complex::with_val(prec, &r), mi.clone(), mi, Complex::with_val(prec, r))
}

/// Truncation point `T` with `K_0²(T) T` below `2^{-prec}`.
fn k0_decay_point(prec: u32) -> Float {
    Float::with_val(prec, (prec as f64 + 16.0) * std::f64::consts::LN_2 / 2.0 + 4.0)
}

/// `∫_0^∞ K_0²(v) v dv`, truncated where the integrand drops below the
/// working precision. The exact value is 1/2.
pub fn k0_moment_check(prec: u32) -> Result<Float> {
    let wp = prec + GUARD_BITS;
    let top = k0_decay_point(wp);
    let lo = Float::with_val(wp, 0);
    let opts = DeOptions::new(wp).singular(true, false);
    let r = integrate_de(
        |a| {
            let k0 = bessel_k0(&Complex::with_val(wp, &a.from_lo)).expect("positive abscissa");
            Float::with_val(wp, k0.real().square_ref()) * &a.x
        },
        &lo,
        &top,
        &opts,
    )
    .require("K0 moment")?;
    Ok(Float::with_val(prec, r))
}

/// `∫_0^∞ K_0²(2u) u du`, which is 1/8.
pub fn k0_moment_scaled(prec: u32) -> Result<Float> {
    let wp = prec + GUARD_BITS;
    let top = Float::with_val(wp, k0_decay_point(wp) / 2u32);
    let lo = Float::with_val(wp, 0);
    let opts = DeOptions::new(wp).singular(true, false);
    let r = integrate_de(
        |a| {
            let v = Complex::with_val(wp, Float::with_val(wp, &a.from_lo * 2u32));
            let k0 = bessel_k0(&v).expect("positive abscissa");
            Float::with_val(wp, k0.real().square_ref()) * &a.x
        },
        &lo,
        &top,
        &opts,
    )
    .require("scaled K0 moment")?;
    Ok(Float::with_val(prec, r))
}

/// `J(n) = (1/2πi) ∫_1^{1+1/n} Ψ₁₂²(n² f(s)) D(s) ds`, with
/// `D = F²/w_+ + F²/w_- - 2`.
///
/// With `2u = 2(n²f)^{1/2} = n log φ(s)` the Bessel argument becomes `2u`,
/// `s = cosh(2u/n)`, `s - 1 = 2 sinh²(u/n)` and `ds = (2/n) sinh(2u/n) du`.
/// The range `u ∈ [0, (n/2) acosh(1 + 1/n)]` is cut where `K_0²(2u)` drops
/// below the working precision.
pub fn leading_endpoint_integral(weight: &WeightSpec, n: u64, prec: u32) -> Result<Complex> {
    if weight.is_legendre() {
        return Ok(Complex::with_val(prec, 0));
    }
    let wp = prec + GUARD_BITS;
    let nn = Float::with_val(wp, n);
    let recip_n = Float::with_val(wp, nn.recip_ref());
    let u_end = Float::with_val(wp, Float::with_val(wp, &recip_n + 1u32).acosh_ref()) * &nn / 2u32;
    let u_decay = k0_decay_point(wp) / 2u32;
    let top = if u_end < u_decay { u_end } else { u_decay };
    let lo = Float::with_val(wp, 0);
    let negligible = pow2(wp, -(wp as i32));
    let mut failure: Option<Error> = None;
    let opts = DeOptions::new(wp)
        .singular(true, false)
        .rel_tol(pow2(wp, -(prec as i32) / 2));
    let r = integrate_de(
        |a| {
            let u = &a.from_lo;
            let two_u = Complex::with_val(wp, Float::with_val(wp, u * 2u32));
            let k0 = bessel_k0(&two_u).expect("positive abscissa");
            let k0sq = Float::with_val(wp, k0.real().square_ref());
            let jac = Float::with_val(wp, Float::with_val(wp, u * 2u32) / &nn).sinh() * 2u32 / &nn;
            let bound = Float::with_val(wp, &k0sq * &jac) * &nn * &nn;
            // |D| < 1, so such nodes cannot matter.
            if bound < negligible {
                return Float::with_val(wp, 0);
            }
            let gap = Float::with_val(wp, Float::with_val(wp, u / &nn).sinh_ref()).square() * 2u32;
            match f2_over_w_cancellation(weight, &gap, wp) {
                Ok(d) => k0sq * jac * d.real(),
                Err(e) => {
                    failure.get_or_insert(e);
                    Float::with_val(wp, 0)
                }
            }
        },
        &lo,
        &top,
        &opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let integral = r.require("leading integral")?;
    // Ψ₁₂² = -K_0²/π², then divide by 2πi.
    let pi_wp = pi(wp);
    let scale = Float::with_val(wp, pi_wp.square_ref()) * &pi_wp * 2u32;
    let value = Float::with_val(wp, -integral / scale);
    let j = Complex::with_val(wp, (0, -value));
    Ok(Complex::with_val(prec, j))
}

/// `3/(16πi n² log² n)`, the leading term of `J(n)`.
pub fn leading_integral_target(n: u64, prec: u32) -> Complex {
    let nn = Float::with_val(prec, n);
    let l = Float::with_val(prec, nn.ln_ref());
    let den = pi(prec) * 16u32 * Float::with_val(prec, nn.square_ref()) * l.square();
    // 3/(16π i D) = -3i/(16π D)
    Complex::with_val(prec, (0, -(Float::with_val(prec, 3) / den)))
}

/// `J(n) / target`, which tends to 1 at the rate `O(1/log n)`.
pub fn leading_integral_ratio(j: &Complex, n: u64) -> Complex {
    let prec = j.prec().0;
    Complex::with_val(prec, j / leading_integral_target(n, prec))
}

/// `2πn E(1) [[0, 1], [0, 0]] E(1)^{-1} J(n)`, the dominant right-endpoint
/// contribution with the small-norm correction taken as the identity.
pub fn endpoint_correction_matrix(weight: &WeightSpec, n: u64, prec: u32) -> Result<Matrix2> {
    let j = leading_endpoint_integral(weight, n, prec)?;
    Ok(endpoint_correction_from_integral(&j, n, prec))
}

pub fn endpoint_correction_from_integral(j: &Complex, n: u64, prec: u32) -> Matrix2 {
    let e1 = e_matrix_at_one(prec);
    let zero = Complex::with_val(prec, 0);
    let raise = Matrix2::new(zero.clone(), Complex::with_val(prec, 1), zero.clone(), zero);
    let core = e1.mul(&raise).mul(&e1.inverse());
    let scale = Complex::with_val(prec, j * (pi(prec) * 2u32 * n));
    core.scale(&scale)
}

/// `3/(16 n log² n) [[1, -i], [-i, -1]]`.
pub fn endpoint_correction_expected(n: u64, prec: u32) -> Matrix2 {
    let nn = Float::with_val(prec, n);
    let l = Float::with_val(prec, nn.ln_ref());
    let c = Float::with_val(prec, 3) / (nn * 16u32 * l.square());
    let one = Complex::with_val(prec, &c);
    let mi = Complex::with_val(prec, (0, -c.clone()));
    Matrix2::new(one.clone(), mi.clone(), mi, -one)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(P, (re, im))
    }

    #[test]
    fn psi2_at_one() {
        let e = psi2(&c(1.0, 0.0)).unwrap();
        let k1 = bessel_k1(&c(2.0, 0.0)).unwrap();
        let d = Complex::with_val(P, &e.psi22 - Complex::with_val(P, &k1 * 2u32));
        assert!(cabs(&d) < 1e-35);
        assert!(psi2(&c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn psi2_small_zeta_behaviour() {
        // psi12 ~ (i/π)(-log ζ/2 + ...) grows, psi22 → 1
        let a = psi2(&c(1e-20, 0.0)).unwrap();
        let b = psi2(&c(1e-40, 0.0)).unwrap();
        assert!(cabs(&b.psi12) > cabs(&a.psi12));
        assert!((b.psi22.real().to_f64() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn f_values() {
        assert!(cabs(&f_conformal(&c(1.0, 0.0)).unwrap()) == 0);
        let f = f_conformal_near_one(&c(1e-8, 0.0)).unwrap();
        let dev = (f.real().to_f64() / 5e-9 - 1.0).abs();
        assert!(dev < 1e-7 && dev > 1e-10);
        let f = f_conformal(&c(1.1, 0.0)).unwrap();
        assert!(*f.real() > 0 && f.imag().is_zero());
        assert!(f_conformal(&c(2.0, 0.0)).is_err());
    }

    #[test]
    fn f_matches_log_phi() {
        for s in [1.01, 1.1, 1.19] {
            let z = c(s, 0.0);
            let f = f_conformal(&z).unwrap();
            let lhs = Complex::with_val(P, f.sqrt_ref()) * 2u32;
            let phi = crate::szego::phi(&z).unwrap().phi;
            let d = Complex::with_val(P, &lhs - phi.ln());
            assert!(cabs(&d) < 1e-35);
        }
    }

    #[test]
    fn e_at_one() {
        let e = e_matrix_at_one(P);
        assert!(e.max_distance(&e_one_expected(P)) < 1e-15);
        let e12 = e_matrix_near_one(&c(1e-12, 0.0)).unwrap();
        assert!(e12.max_distance(&e_one_expected(P)) < 1e-6);
    }

    #[test]
    fn determinants_are_one() {
        for z in [c(2.0, 0.0), c(0.3, 0.2), c(-3.0, -1.0), c(1.2, -0.1)] {
            let d = Complex::with_val(P, n_matrix(&z).unwrap().det() - 1u32);
            assert!(cabs(&d) < 1e-35);
        }
        let d = Complex::with_val(P, e_matrix(&c(1.2, 0.3)).unwrap().det() - 1u32);
        assert!(cabs(&d) < 1e-35);
    }

    #[test]
    fn n_tends_to_identity() {
        let n = n_matrix(&c(1e8, 0.0)).unwrap();
        assert!(n.max_distance(&Matrix2::identity(P)) < 1e-7);
    }

    #[test]
    fn k0_moment_scaled_is_an_eighth() {
        let v = k0_moment_scaled(P).unwrap();
        assert!(Float::with_val(P, v - 0.125).abs() < 1e-30);
        let k = bessel_k0(&c(40.0, 0.0)).unwrap();
        assert!(k.real().to_f64().powi(2) * 40.0 < 1e-30);
    }

    #[test]
    fn legendre_integral_vanishes() {
        assert!(leading_endpoint_integral(&WeightSpec::legendre(), 1000, P).unwrap().is_zero());
    }

    #[test]
    fn prop_c2_structure_from_target() {
        let n = 10_000;
        let m = endpoint_correction_from_integral(&leading_integral_target(n, P), n, P);
        assert!(m.max_distance(&endpoint_correction_expected(n, P)) < 1e-12 * endpoint_correction_expected(n, P).max_abs().to_f64());
    }
}
