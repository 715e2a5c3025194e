//! The exterior map `φ(z) = z + (z²-1)^{1/2}` and the Szegő function
//!
//! ```text
//! F(z) = exp( (z²-1)^{1/2}/(2π) ∫_0^π L(cos θ)/(z - cos θ) dθ ),  L = log w,
//! ```
//!
//! which is the Cauchy-transform definition after `s = cos θ`, using
//! `(s²-1)_+^{1/2} = i√(1-s²)` on `(-1, 1)`.
//!
//! `(z²-1)^{1/2}` is always `(z+1)^{1/2}(z-1)^{1/2}` with principal roots:
//! analytic off `[-1, 1]` and positive for `z > 1`.
//!
//! The integral is evaluated in one of four ways. Close to `±1` the kernel
//! has a near-pole of width `|z ∓ 1|^{1/2}` at the end of the θ range, which a
//! `θ = σ sinh u` substitution spreads out. Close to the interior of the cut
//! the near-pole sits at `θ_0 = arccos(Re z)`; there we split at `θ_0` and
//! subtract `L(Re z)`, whose integral is known in closed form. Everywhere
//! else plain tanh-sinh on `[0, π]` is enough.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numeric::{cabs, pi, GUARD_BITS};
use crate::quadrature::{integrate_de, Abscissa, DeOptions};
use crate::weights::{boundary_values_w_at_gap, eval_weight_complex, BoundaryValuePair, WeightKind, WeightSpec};

/// Distance to `[-1, 1]` below which evaluations are flagged as losing digits.
pub const NEAR_CUT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct PhiEval {
    pub z: Complex,
    pub phi: Complex,
    /// The branch of `(z²-1)^{1/2}` used.
    pub sqrt_z2m1: Complex,
}

#[derive(Debug, Clone)]
pub struct SzegoEval {
    pub z: Complex,
    pub f: Complex,
    pub log_f: Complex,
    /// `∫_0^π L(cos θ)/(z - cos θ) dθ`.
    pub integral_value: Complex,
    pub error_estimate: Float,
    /// Set when `z` is within [`NEAR_CUT`] of `[-1, 1]`.
    pub near_cut: bool,
}

/// A point given redundantly as `z`, `z + 1` and `z - 1`, so that points very
/// close to `±1` keep their offset exactly.
#[derive(Debug, Clone)]
struct Point {
    z: Complex,
    zp1: Complex,
    zm1: Complex,
}

impl Point {
    fn from_z(z: &Complex, prec: u32) -> Self {
        Point {
            z: Complex::with_val(prec, z),
            zp1: Complex::with_val(prec, z + 1u32),
            zm1: Complex::with_val(prec, z - 1u32),
        }
    }

    fn from_zm1(zm1: &Complex, prec: u32) -> Self {
        let zm1 = Complex::with_val(prec, zm1);
        Point {
            z: Complex::with_val(prec, &zm1 + 1u32),
            zp1: Complex::with_val(prec, &zm1 + 2u32),
            zm1,
        }
    }

    fn from_zp1(zp1: &Complex, prec: u32) -> Self {
        let zp1 = Complex::with_val(prec, zp1);
        Point {
            z: Complex::with_val(prec, &zp1 - 1u32),
            zm1: Complex::with_val(prec, &zp1 - 2u32),
            zp1,
        }
    }

    fn on_cut(&self) -> bool {
        self.z.imag().is_zero() && *self.zp1.real() >= 0 && *self.zm1.real() <= 0
    }

    fn sqrt_z2m1(&self) -> Complex {
        let prec = self.z.prec().0;
        Complex::with_val(prec, self.zp1.sqrt_ref()) * Complex::with_val(prec, self.zm1.sqrt_ref())
    }

    /// Distance to `[-1, 1]`.
    fn cut_distance(&self) -> Float {
        let prec = self.z.prec().0;
        if *self.zm1.real() > 0 {
            cabs(&self.zm1)
        } else if *self.zp1.real() < 0 {
            cabs(&self.zp1)
        } else {
            Float::with_val(prec, self.z.imag().abs_ref())
        }
    }
}

/// `(z²-1)^{1/2}` as `(z+1)^{1/2}(z-1)^{1/2}`.
pub fn sqrt_z2m1(z: &Complex) -> Complex {
    Point::from_z(z, z.prec().0).sqrt_z2m1()
}

pub fn phi(z: &Complex) -> Result<PhiEval> {
    let prec = z.prec().0;
    let p = Point::from_z(z, prec);
    if p.on_cut() {
        return Err(Error::BranchCut(format!("φ is not defined on [-1, 1] (z = {})", z.real().to_f64())));
    }
    let r = p.sqrt_z2m1();
    Ok(PhiEval {
        z: z.clone(),
        phi: Complex::with_val(prec, z + &r),
        sqrt_z2m1: r,
    })
}

/// `φ_±(x) = x ± i√(1-x²)` for `-1 < x < 1`.
pub fn phi_boundary(x: &Float) -> Result<BoundaryValuePair> {
    let prec = x.prec();
    if !(*x > -1 && *x < 1) {
        return Err(Error::Domain(format!("φ boundary values need -1 < x < 1, got {}", x.to_f64())));
    }
    let s = (Float::with_val(prec, 1u32 - x) * Float::with_val(prec, 1u32 + x)).sqrt();
    Ok(BoundaryValuePair {
        plus: Complex::with_val(prec, (x, &s)),
        minus: Complex::with_val(prec, (x, -s)),
    })
}

/// An angle θ ∈ [0, π] held through `sin²(θ/2)` and `cos²(θ/2)`, each
/// computed from the nearer of `θ` and `π - θ`.
struct HalfAngle {
    s2: Float,
    c2: Float,
}

impl HalfAngle {
    fn new(theta: &Float, theta_from_pi: &Float) -> Self {
        let prec = theta.prec();
        let s = Float::with_val(prec, theta / 2u32).sin();
        let c = Float::with_val(prec, theta_from_pi / 2u32).sin();
        HalfAngle {
            s2: s.square(),
            c2: c.square(),
        }
    }

    fn log_s2(&self) -> Float {
        if self.s2 <= 0.5 {
            Float::with_val(self.s2.prec(), self.s2.ln_ref())
        } else {
            Float::with_val(self.c2.prec(), -&self.c2).ln_1p()
        }
    }
}

/// `L(cos θ) = log(log k - log sin²(θ/2))`, since `2k/(1 - cos θ) = k/sin²(θ/2)`.
fn log_w(log_k: &Float, angle: &HalfAngle) -> Float {
    let w = Float::with_val(log_k.prec(), log_k - angle.log_s2());
    w.ln()
}

fn options(wp: u32) -> DeOptions {
    DeOptions::new(wp).max_level(12)
}

struct Integral {
    value: Complex,
    error: Float,
    converged: bool,
}

impl Integral {
    fn add(mut self, other: Integral) -> Integral {
        self.value += other.value;
        self.error += other.error;
        self.converged &= other.converged;
        self
    }
}

fn run(f: impl FnMut(&Abscissa) -> Complex, lo: &Float, hi: &Float, opts: &DeOptions) -> Integral {
    let r = integrate_de(f, lo, hi, opts);
    Integral {
        value: r.value,
        error: r.error_estimate,
        converged: r.converged,
    }
}

/// `θ = σ sinh u` on `u ∈ [0, asinh(π/σ)]`, with `θ` and `π - θ` returned
/// accurately from the node.
fn sinh_map(a: &Abscissa, sigma: &Float, sinh_top: &Float) -> (Float, Float, Float) {
    let prec = sigma.prec();
    let theta = Float::with_val(prec, a.x.sinh_ref()) * sigma;
    // π - θ = σ (sinh U - sinh u) = 2σ cosh((U+u)/2) sinh((U-u)/2)
    let top = Float::with_val(prec, sinh_top.asinh_ref());
    let mid = Float::with_val(prec, &top + &a.x) / 2u32;
    let half_gap = Float::with_val(prec, &a.from_hi / 2u32);
    let rest = mid.cosh() * half_gap.sinh() * sigma * 2u32;
    let jac = Float::with_val(prec, a.x.cosh_ref()) * sigma;
    (theta, rest, jac)
}

/// `∫_0^π L(cos θ)/(z - cos θ) dθ` for `|z - 1|` small: `θ = σ sinh u`,
/// `σ = √(2|z-1|)`, and `z - cos θ = (z - 1) + 2 sin²(θ/2)`.
fn integral_near_plus_one(log_k: &Float, p: &Point, wp: u32) -> Integral {
    let sigma = Float::with_val(wp, cabs(&p.zm1) * 2u32).sqrt();
    let sinh_top = Float::with_val(wp, pi(wp) / &sigma);
    let top = Float::with_val(wp, sinh_top.asinh_ref());
    let lo = Float::with_val(wp, 0);
    run(
        |a| {
            let (theta, rest, jac) = sinh_map(a, &sigma, &sinh_top);
            let angle = HalfAngle::new(&theta, &rest);
            let l = log_w(log_k, &angle);
            let den = Complex::with_val(wp, &p.zm1 + Float::with_val(wp, &angle.s2 * 2u32));
            Complex::with_val(wp, l * jac) / den
        },
        &lo,
        &top,
        &options(wp),
    )
}

/// Mirror image of [`integral_near_plus_one`]: `π - θ = σ sinh u`,
/// `z - cos θ = (z + 1) - 2 cos²(θ/2)`.
fn integral_near_minus_one(log_k: &Float, p: &Point, wp: u32) -> Integral {
    let sigma = Float::with_val(wp, cabs(&p.zp1) * 2u32).sqrt();
    let sinh_top = Float::with_val(wp, pi(wp) / &sigma);
    let top = Float::with_val(wp, sinh_top.asinh_ref());
    let lo = Float::with_val(wp, 0);
    run(
        |a| {
            let (phi, theta, jac) = sinh_map(a, &sigma, &sinh_top);
            let angle = HalfAngle::new(&theta, &phi);
            let l = log_w(log_k, &angle);
            let den = Complex::with_val(wp, &p.zp1 - Float::with_val(wp, &angle.c2 * 2u32));
            Complex::with_val(wp, l * jac) / den
        },
        &lo,
        &top,
        &options(wp),
    )
}

/// Plain tanh-sinh on `[0, π]`.
fn integral_direct(log_k: &Float, p: &Point, wp: u32) -> Integral {
    let lo = Float::with_val(wp, 0);
    let hi = pi(wp);
    run(
        |a| {
            let angle = HalfAngle::new(&a.from_lo, &a.from_hi);
            let l = log_w(log_k, &angle);
            let den = if angle.s2 <= 0.5 {
                Complex::with_val(wp, &p.zm1 + Float::with_val(wp, &angle.s2 * 2u32))
            } else {
                Complex::with_val(wp, &p.zp1 - Float::with_val(wp, &angle.c2 * 2u32))
            };
            Complex::with_val(wp, l) / den
        },
        &lo,
        &hi,
        &options(wp),
    )
}

/// Near the interior of the cut: split at `θ_0 = arccos x_0`, `x_0 = Re z`,
/// and integrate `(L(cos θ) - L(x_0))/(z - cos θ)`; the subtracted constant
/// contributes `L(x_0) π/(z²-1)^{1/2}`.
fn integral_near_cut(log_k: &Float, p: &Point, wp: u32) -> Integral {
    let x0 = p.z.real().clone();
    let y = p.z.imag().clone();
    let theta0 = Float::with_val(wp, x0.acos_ref());
    let pi_wp = pi(wp);
    let theta0_from_pi = Float::with_val(wp, &pi_wp - &theta0);
    let l0 = log_w(log_k, &HalfAngle::new(&theta0, &theta0_from_pi));
    let term = |theta: &Float, theta_from_pi: &Float, d: &Float| -> Complex {
        let angle = HalfAngle::new(theta, theta_from_pi);
        let num = Float::with_val(wp, log_w(log_k, &angle) - &l0);
        // cos θ_0 - cos θ = 2 sin((θ + θ_0)/2) sin((θ - θ_0)/2)
        let s_sum = Float::with_val(wp, (Float::with_val(wp, theta + &theta0) / 2u32).sin_ref());
        let s_diff = Float::with_val(wp, (Float::with_val(wp, d / 2u32)).sin_ref());
        let re = s_sum * s_diff * 2u32;
        Complex::with_val(wp, num) / Complex::with_val(wp, (re, &y))
    };
    let zero = Float::with_val(wp, 0);
    let left = run(
        |a| {
            let theta = a.from_lo.clone();
            let from_pi = Float::with_val(wp, &theta0_from_pi + &a.from_hi);
            let d = Float::with_val(wp, -&a.from_hi);
            term(&theta, &from_pi, &d)
        },
        &zero,
        &theta0,
        &options(wp),
    );
    let right = run(
        |a| {
            let theta = Float::with_val(wp, &theta0 + &a.from_lo);
            term(&theta, &a.from_hi, &a.from_lo)
        },
        &theta0,
        &pi_wp,
        &options(wp),
    );
    let mut total = left.add(right);
    let constant = Complex::with_val(wp, pi_wp * &l0) / p.sqrt_z2m1();
    total.value += constant;
    total
}

fn szego_at(weight: &WeightSpec, p: Point, prec: u32) -> Result<SzegoEval> {
    if p.on_cut() {
        return Err(Error::BranchCut(format!(
            "F is evaluated off [-1, 1]; use boundary approaches (z = {})",
            p.z.real().to_f64()
        )));
    }
    let near_cut = p.cut_distance() < NEAR_CUT;
    let k = match &weight.kind {
        WeightKind::Legendre => {
            return Ok(SzegoEval {
                z: Complex::with_val(prec, &p.z),
                f: Complex::with_val(prec, 1),
                log_f: Complex::with_val(prec, 0),
                integral_value: Complex::with_val(prec, 0),
                error_estimate: Float::with_val(prec, 0),
                near_cut,
            })
        }
        WeightKind::Log { k } => k,
    };
    let wp = prec + GUARD_BITS;
    let log_k = Float::with_val(wp, k).ln();
    let re = p.z.real();
    let im_abs = Float::with_val(wp, p.z.imag().abs_ref());
    let re_abs = Float::with_val(wp, re.abs_ref());
    let integral = if re_abs < 1 && im_abs <= Float::with_val(wp, 1u32 - &re_abs) {
        integral_near_cut(&log_k, &p, wp)
    } else if cabs(&p.zm1) < 0.5 {
        integral_near_plus_one(&log_k, &p, wp)
    } else if cabs(&p.zp1) < 0.5 {
        integral_near_minus_one(&log_k, &p, wp)
    } else {
        integral_direct(&log_k, &p, wp)
    };
    if !integral.converged {
        return Err(Error::NotConverged {
            what: "Szegő integral".into(),
            levels: options(wp).max_level as usize,
            estimate: integral.error.to_f64(),
        });
    }
    let r = p.sqrt_z2m1();
    let two_pi = pi(wp) * 2u32;
    let log_f = Complex::with_val(wp, &r * &integral.value) / two_pi;
    let f = Complex::with_val(wp, log_f.exp_ref());
    Ok(SzegoEval {
        z: Complex::with_val(prec, &p.z),
        f: Complex::with_val(prec, f),
        log_f: Complex::with_val(prec, log_f),
        integral_value: Complex::with_val(prec, &integral.value),
        error_estimate: Float::with_val(prec, integral.error * cabs(&r)),
        near_cut,
    })
}

/// `F(z)` for `z ∉ [-1, 1]`.
pub fn szego_f(weight: &WeightSpec, z: &Complex, prec: u32) -> Result<SzegoEval> {
    szego_at(weight, Point::from_z(z, prec + GUARD_BITS), prec)
}

/// `F(1 + zm1)`, keeping the offset exact for points very close to `+1`.
pub fn szego_f_near_one(weight: &WeightSpec, zm1: &Complex, prec: u32) -> Result<SzegoEval> {
    szego_at(weight, Point::from_zm1(zm1, prec + GUARD_BITS), prec)
}

/// `F(-1 + zp1)`.
pub fn szego_f_near_minus_one(weight: &WeightSpec, zp1: &Complex, prec: u32) -> Result<SzegoEval> {
    szego_at(weight, Point::from_zp1(zp1, prec + GUARD_BITS), prec)
}

/// `F(x ± iε)` as stand-ins for the boundary values `F_±(x)` on `(-1, 1)`.
pub fn szego_boundary(weight: &WeightSpec, x: &Float, eps: &Float, prec: u32) -> Result<BoundaryValuePair> {
    let plus = szego_f(weight, &Complex::with_val(prec, (x, eps)), prec)?.f;
    let minus = szego_f(weight, &Complex::with_val(prec, (x, -eps.clone())), prec)?.f;
    Ok(BoundaryValuePair { plus, minus })
}

/// `F²/w_±` at `x = 1 + gap`, `gap > 0`. `F` is analytic there, `w` is not.
pub fn f2_over_w_boundary(weight: &WeightSpec, gap: &Float, prec: u32) -> Result<BoundaryValuePair> {
    let wp = prec + GUARD_BITS;
    let w = boundary_values_w_at_gap(weight, &Float::with_val(wp, gap))?;
    let f = szego_f_near_one(weight, &Complex::with_val(wp, gap), wp)?.f;
    let f2 = Complex::with_val(wp, f.square_ref());
    Ok(BoundaryValuePair {
        plus: Complex::with_val(prec, Complex::with_val(wp, &f2 / &w.plus)),
        minus: Complex::with_val(prec, Complex::with_val(wp, &f2 / &w.minus)),
    })
}

/// `D(x) = F²/w_+(x) + F²/w_-(x) - 2` at `x = 1 + gap`. Identically zero for
/// the Legendre weight.
pub fn f2_over_w_cancellation(weight: &WeightSpec, gap: &Float, prec: u32) -> Result<Complex> {
    if weight.is_legendre() {
        return Ok(Complex::with_val(prec, 0));
    }
    let v = f2_over_w_boundary(weight, gap, prec)?;
    Ok(Complex::with_val(prec, &v.plus + &v.minus) - 2u32)
}

/// One row of the cancellation sweep: `D`, `D log²(2k/(x-1))` and the limit
/// `-3π²` it should approach.
#[derive(Debug, Clone)]
pub struct CancellationRecord {
    pub x_minus_1: Float,
    pub d: Complex,
    pub d_times_log2: Complex,
    pub target: Float,
}

impl CancellationRecord {
    /// `D log²/(-3π²)`, which tends to 1.
    pub fn ratio(&self) -> Float {
        Float::with_val(self.target.prec(), self.d_times_log2.real() / &self.target)
    }
}

pub fn cancellation_record(weight: &WeightSpec, gap: &Float, prec: u32) -> Result<CancellationRecord> {
    let k = weight
        .k()
        .ok_or_else(|| Error::Domain("cancellation sweep needs the log weight".into()))?;
    let d = f2_over_w_cancellation(weight, gap, prec)?;
    let log = (Float::with_val(prec, k) * 2u32 / gap).ln();
    let d_times_log2 = Complex::with_val(prec, &d * log.square());
    let target = pi(prec).square() * -3i32;
    Ok(CancellationRecord {
        x_minus_1: gap.clone(),
        d,
        d_times_log2,
        target,
    })
}

/// `F²/w(z) - 1` at `z = -1 + zp1`, which is `O(|z+1|^{1/2})`.
pub fn f2_over_w_near_minus1(weight: &WeightSpec, zp1: &Complex, prec: u32) -> Result<Complex> {
    if weight.is_legendre() {
        return Ok(Complex::with_val(prec, 0));
    }
    let wp = prec + GUARD_BITS;
    let p = Point::from_zp1(zp1, wp);
    let f = szego_f_near_minus_one(weight, zp1, wp)?.f;
    let w = eval_weight_complex(weight, &p.z)?;
    let v = Complex::with_val(wp, Complex::with_val(wp, f.square_ref()) / w) - 1u32;
    Ok(Complex::with_val(prec, v))
}

/// `S(n) = Σ_± [F²/w_±(1 + r) - F²/w_±(1 + r̃)]` with `r = ρ/n²` and
/// `r̃ = r/(1 + 1/n)`, so that `n(r/r̃ - 1) = 1`.
pub fn f_difference_scaling(weight: &WeightSpec, n: u64, rho: &Float, prec: u32) -> Result<Complex> {
    if weight.is_legendre() {
        return Ok(Complex::with_val(prec, 0));
    }
    let wp = prec + GUARD_BITS;
    let nn = Float::with_val(wp, n);
    let r = Float::with_val(wp, rho / Float::with_val(wp, nn.square_ref()));
    let r_tilde = Float::with_val(wp, &r * &nn) / Float::with_val(wp, &nn + 1u32);
    let a = f2_over_w_boundary(weight, &r, wp)?;
    let b = f2_over_w_boundary(weight, &r_tilde, wp)?;
    let s = Complex::with_val(wp, &a.plus - &b.plus) + Complex::with_val(wp, &a.minus - &b.minus);
    Ok(Complex::with_val(prec, s))
}

/// `F_∞ = exp((1/2π) ∫_0^π L(cos θ) dθ)`, the limit of `F` at infinity.
pub fn f_infinity(weight: &WeightSpec, prec: u32) -> Result<Float> {
    let k = match &weight.kind {
        WeightKind::Legendre => return Ok(Float::with_val(prec, 1)),
        WeightKind::Log { k } => k,
    };
    let wp = prec + GUARD_BITS;
    let log_k = Float::with_val(wp, k).ln();
    let lo = Float::with_val(wp, 0);
    let hi = pi(wp);
    let r = integrate_de(
        |a| log_w(&log_k, &HalfAngle::new(&a.from_lo, &a.from_hi)),
        &lo,
        &hi,
        &options(wp),
    )
    .require("F_∞ integral")?;
    let v = (r / (pi(wp) * 2u32)).exp();
    Ok(Float::with_val(prec, v))
}

/// `F_∞` and `F_1` estimated from `F(z_0)` and `F(2 z_0)` on the real axis by
/// eliminating the `1/z` term.
pub fn f_infinity_richardson(weight: &WeightSpec, z0: &Float, prec: u32) -> Result<(Float, Float)> {
    let wp = prec + GUARD_BITS;
    let f1 = szego_f(weight, &Complex::with_val(wp, z0), wp)?.f;
    let f2 = szego_f(weight, &Complex::with_val(wp, Float::with_val(wp, z0 * 2u32)), wp)?.f;
    let f_inf = Float::with_val(wp, f2.real() * 2u32) - f1.real();
    let f_1 = Float::with_val(wp, f1.real() - f2.real()) * z0 * 2u32;
    Ok((Float::with_val(prec, f_inf), Float::with_val(prec, f_1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(P, (re, im))
    }

    fn dist(a: &Complex, b: &Complex) -> f64 {
        cabs(&Complex::with_val(P, a - b)).to_f64()
    }

    #[test]
    fn phi_at_five_quarters() {
        let e = phi(&c(1.25, 0.0)).unwrap();
        assert!(dist(&e.phi, &c(2.0, 0.0)) < 1e-35);
        let e = phi(&c(-1.25, 0.0)).unwrap();
        assert!(dist(&e.phi, &c(-2.0, 0.0)) < 1e-35);
    }

    #[test]
    fn phi_grows_like_2z() {
        let e = phi(&c(1e6, 0.0)).unwrap();
        let ratio = e.phi.real().to_f64() / 2e6;
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_rejects_the_cut() {
        assert!(phi(&c(0.3, 0.0)).is_err());
        assert!(phi(&c(1.0, 0.0)).is_err());
        assert!(phi(&c(0.3, 1e-30)).is_ok());
    }

    #[test]
    fn phi_boundary_at_zero() {
        let b = phi_boundary(&Float::with_val(P, 0)).unwrap();
        assert!(dist(&b.plus, &c(0.0, 1.0)) < 1e-35);
        assert!(phi_boundary(&Float::with_val(P, 1)).is_err());
    }

    #[test]
    fn legendre_szego_is_one() {
        let e = szego_f(&WeightSpec::legendre(), &c(0.2, 0.5), P).unwrap();
        assert_eq!(e.f, 1);
    }

    #[test]
    fn szego_real_on_real_axis() {
        let w = WeightSpec::log_e(P);
        for x in [2.0, 1.3, -1.3, -4.0] {
            let e = szego_f(&w, &c(x, 0.0), P).unwrap();
            assert!(e.f.imag().clone().abs() < 1e-30, "x = {x}");
            assert!(*e.f.real() > 0);
        }
    }

    #[test]
    fn szego_schwarz_symmetry() {
        let w = WeightSpec::log_f64(2.0).unwrap();
        for z in [c(0.3, 0.2), c(1.1, 0.05), c(-1.2, 0.3), c(3.0, -2.0), c(0.99, 0.001)] {
            let a = szego_f(&w, &z, P).unwrap().f;
            let zc = Complex::with_val(P, z.conj_ref());
            let b = szego_f(&w, &zc, P).unwrap().f;
            assert!(dist(&a, &Complex::with_val(P, b.conj_ref())) < 1e-30);
        }
    }

    #[test]
    fn regimes_agree_on_their_borders() {
        // Points just either side of a regime switch give the same F.
        let w = WeightSpec::log_e(P);
        let pairs = [
            (c(1.4999, 0.0), c(1.5001, 0.0)),
            (c(-1.4999, 0.0), c(-1.5001, 0.0)),
            (c(0.5, 0.4999), c(0.5, 0.5001)),
        ];
        for (a, b) in pairs {
            let fa = szego_f(&w, &a, P).unwrap().f;
            let fb = szego_f(&w, &b, P).unwrap().f;
            assert!(dist(&fa, &fb) < 1e-3);
        }
        let z = c(1.25, 0.125);
        let direct = szego_f(&w, &z, P).unwrap().f;
        let offset = szego_f_near_one(&w, &c(0.25, 0.125), P).unwrap().f;
        assert!(dist(&direct, &offset) < 1e-30);
    }

    #[test]
    fn boundary_product_is_the_weight() {
        let w = WeightSpec::log_e(P);
        let eps = Float::with_val(P, 1e-10);
        for x in [-0.9, 0.0, 0.9] {
            let x = Float::with_val(P, x);
            let b = szego_boundary(&w, &x, &eps, P).unwrap();
            let prod = Complex::with_val(P, &b.plus * &b.minus);
            let expect = crate::weights::eval_weight(&w, &x).unwrap();
            assert!(dist(&prod, &Complex::with_val(P, expect)) < 1e-6, "x = {}", x.to_f64());
        }
    }

    #[test]
    fn flags_points_near_the_cut() {
        let w = WeightSpec::log_e(P);
        assert!(szego_f(&w, &c(0.1, 1e-8), P).unwrap().near_cut);
        assert!(!szego_f(&w, &c(0.1, 1e-2), P).unwrap().near_cut);
    }

    #[test]
    fn f_infinity_matches_richardson() {
        let w = WeightSpec::log_e(P);
        let exact = f_infinity(&w, P).unwrap();
        let (est, _) = f_infinity_richardson(&w, &Float::with_val(P, 1e6), P).unwrap();
        assert!(Float::with_val(P, &exact - &est).abs() < 1e-10);
    }
}
