//! The two weights on `[-1, 1)`: the log weight `w(x) = log(2k/(1-x))` with
//! `k > 1`, and the constant Legendre weight `w = 1`.
//!
//! `w` continues analytically to `C \ [1, ∞)` with the principal logarithm.
//! On `(1, ∞)` its boundary values from above and below are
//! `log(2k/(x-1)) ± iπ`.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numeric::{pi, to_decimal};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// `log(2k/(1-x))`.
    Log { k: Float },
    /// `1` on `[-1, 1]`.
    Legendre,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    pub kind: WeightKind,
    /// Set when the weight was built with `k = 1`, which is only allowed for
    /// exploratory runs.
    pub exploratory: bool,
}

/// Values of a function approached from the upper (`plus`) and lower
/// (`minus`) half-planes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryValuePair {
    pub plus: Complex,
    pub minus: Complex,
}

impl WeightSpec {
    /// Log weight with parameter `k > 1`.
    pub fn log(k: Float) -> Result<Self> {
        if !(k > 1) {
            return Err(Error::InvalidK(to_decimal(&k)));
        }
        Ok(WeightSpec {
            kind: WeightKind::Log { k },
            exploratory: false,
        })
    }

    /// Log weight with `k >= 1`. `k = 1` makes `w(-1) = 0`, a case outside
    /// the validated regime.
    pub fn log_exploratory(k: Float) -> Result<Self> {
        if !(k >= 1) {
            return Err(Error::InvalidK(to_decimal(&k)));
        }
        Ok(WeightSpec {
            kind: WeightKind::Log { k },
            exploratory: true,
        })
    }

    pub fn log_f64(k: f64) -> Result<Self> {
        Self::log(Float::with_val(128, k))
    }

    /// Log weight with `k = e`, with `k` held at `prec` bits.
    pub fn log_e(prec: u32) -> Self {
        Self::log(crate::numeric::e(prec)).expect("e > 1")
    }

    pub fn legendre() -> Self {
        WeightSpec {
            kind: WeightKind::Legendre,
            exploratory: false,
        }
    }

    pub fn is_legendre(&self) -> bool {
        matches!(self.kind, WeightKind::Legendre)
    }

    pub fn k(&self) -> Option<&Float> {
        match &self.kind {
            WeightKind::Log { k } => Some(k),
            WeightKind::Legendre => None,
        }
    }

    /// `log(2k)` at `prec` bits, or `None` for Legendre.
    pub fn log_2k(&self, prec: u32) -> Option<Float> {
        self.k().map(|k| (Float::with_val(prec, k) * 2u32).ln())
    }

    /// `w` evaluated from the gap `t = 1 - x > 0`. This is the accurate entry
    /// point near the singular endpoint `x = 1`.
    pub fn eval_at_gap(&self, t: &Float) -> Float {
        let prec = t.prec();
        match &self.kind {
            WeightKind::Legendre => Float::with_val(prec, 1),
            WeightKind::Log { k } => {
                let two_k = Float::with_val(prec, k) * 2u32;
                (two_k / t).ln()
            }
        }
    }

    /// `log w` from the gap `t = 1 - x`; zero for the Legendre weight.
    pub fn log_w_at_gap(&self, t: &Float) -> Float {
        match &self.kind {
            WeightKind::Legendre => Float::with_val(t.prec(), 0),
            WeightKind::Log { .. } => self.eval_at_gap(t).ln(),
        }
    }
}

/// `w(x)` for `x ∈ [-1, 1)`, at the precision of `x`.
pub fn eval_weight(spec: &WeightSpec, x: &Float) -> Result<Float> {
    if !(*x >= -1 && *x < 1) {
        return Err(Error::Domain(format!(
            "weight evaluated at x = {} outside [-1, 1)",
            to_decimal(x)
        )));
    }
    let gap = Float::with_val(x.prec(), 1u32 - x);
    Ok(spec.eval_at_gap(&gap))
}

/// Analytic continuation of `w` to `C \ [1, ∞)`.
pub fn eval_weight_complex(spec: &WeightSpec, z: &Complex) -> Result<Complex> {
    let prec = z.prec().0;
    if z.imag().is_zero() && *z.real() >= 1 {
        return Err(Error::BranchCut(format!(
            "z = {} on [1, ∞)",
            to_decimal(z.real())
        )));
    }
    match &spec.kind {
        WeightKind::Legendre => Ok(Complex::with_val(prec, 1)),
        WeightKind::Log { .. } => {
            let log_2k = spec.log_2k(prec).expect("log weight");
            // 1 - z stays off (-∞, 0], so log(2k) - log(1-z) is the principal
            // branch of log(2k/(1-z)).
            let one_minus = Complex::with_val(prec, 1u32 - z);
            Ok(log_2k - one_minus.ln())
        }
    }
}

/// Boundary values `w_±(x) = log(2k/(x-1)) ± iπ` for `x > 1`.
pub fn boundary_values_w(spec: &WeightSpec, x: &Float) -> Result<BoundaryValuePair> {
    if !(*x > 1) {
        return Err(Error::Domain(format!(
            "boundary values need x > 1, got {}",
            to_decimal(x)
        )));
    }
    let gap = Float::with_val(x.prec(), x - 1u32);
    boundary_values_w_at_gap(spec, &gap)
}

/// Same as [`boundary_values_w`] with the point given as `x - 1 > 0`.
pub fn boundary_values_w_at_gap(spec: &WeightSpec, gap: &Float) -> Result<BoundaryValuePair> {
    let prec = gap.prec();
    if !(*gap > 0) {
        return Err(Error::Domain("boundary values need x - 1 > 0".into()));
    }
    match &spec.kind {
        WeightKind::Legendre => Err(Error::Domain(
            "the Legendre weight has no cut on (1, ∞)".into(),
        )),
        WeightKind::Log { k } => {
            let re = (Float::with_val(prec, k) * 2u32 / gap).ln();
            let p = pi(prec);
            Ok(BoundaryValuePair {
                plus: Complex::with_val(prec, (&re, &p)),
                minus: Complex::with_val(prec, (&re, -p)),
            })
        }
    }
}
