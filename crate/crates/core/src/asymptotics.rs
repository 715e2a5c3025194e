//! Large-`n` predictions for the recurrence coefficients and extraction of the
//! constant `C` in
//!
//! ```text
//! a_n - ã_n = 2C/(n log n)² + O(1/(n² log³ n)),
//! b_n - b̃_n =  C/(n log n)² + O(1/(n² log³ n)),
//! ```
//!
//! with `ã_n, b̃_n` the Legendre coefficients and `C = -3/32`.
//!
//! The scaled residual `R_n` tends to `C` with a relative error `O(1/log n)`,
//! which is still ~17% at `n = 400`, so `C` is read off a least-squares fit
//! `R_n ≈ C + D/log n` rather than from the last `R_n`.

use rug::Float;

use crate::error::{Error, Result};
use crate::recurrence::RecurrenceTable;

/// The proven value of `C` for `k > 1`.
pub const C_THEOREM: f64 = -3.0 / 32.0;
/// Value of `C` for the `-log x` weight on `[0, 1]` (the `k = 1` case).
pub const C_MAGNUS: f64 = -3.0 / 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelForm {
    /// `a_n = 2C/(n log n)²`
    ProvenA,
    /// `b_n = 1/2 + 1/(16n²) + C/(n log n)²`
    ProvenB,
    /// `a_n = 1/2 - 1/(8n²) - 2C/(n log n)²`, weight `-log x` on `[0, 1]`
    MagnusA,
    /// `b_n = 1/4 - 1/(32n²) + C/(n log n)²`
    MagnusB,
}

#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    pub c: Float,
    pub form: ModelForm,
}

impl AsymptoticModel {
    pub fn new(c: f64, form: ModelForm, prec: u32) -> Self {
        AsymptoticModel {
            c: Float::with_val(prec, c),
            form,
        }
    }

    pub fn with_known_c(form: ModelForm, prec: u32) -> Self {
        let c = match form {
            ModelForm::ProvenA | ModelForm::ProvenB => C_THEOREM,
            ModelForm::MagnusA | ModelForm::MagnusB => C_MAGNUS,
        };
        Self::new(c, form, prec)
    }
}

/// The model's prediction at `n >= 2`, natural logarithm throughout.
pub fn predict(model: &AsymptoticModel, n: u64, prec: u32) -> Result<Float> {
    if n < 2 {
        return Err(Error::InvalidArgument("predictions need n >= 2".into()));
    }
    let nn = Float::with_val(prec, n);
    let n2 = Float::with_val(prec, nn.square_ref());
    let nl = Float::with_val(prec, nn.ln_ref()) * &nn;
    let term = Float::with_val(prec, &model.c / nl.square());
    let v = match model.form {
        ModelForm::ProvenA => term * 2u32,
        ModelForm::ProvenB => Float::with_val(prec, 0.5) + Float::with_val(prec, 16u32 * &n2).recip() + term,
        ModelForm::MagnusA => {
            Float::with_val(prec, 0.5) - Float::with_val(prec, 8u32 * &n2).recip() - term * 2u32
        }
        ModelForm::MagnusB => {
            Float::with_val(prec, 0.25) - Float::with_val(prec, 32u32 * &n2).recip() + term
        }
    };
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    A,
    B,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::A => "a",
            Target::B => "b",
        }
    }
}

/// `R_n = (b_n - b̃_n)(n log n)²` or `(a_n - ã_n)(n log n)²/2` for
/// `2 <= n < N`. The differences are formed at table precision before
/// rounding to `f64`.
pub fn residual_series(
    table: &RecurrenceTable,
    reference: &RecurrenceTable,
    target: Target,
) -> Result<Vec<(u64, f64)>> {
    if table.len() != reference.len() {
        return Err(Error::LengthMismatch(table.len(), reference.len()));
    }
    residual_series_against(table, &reference.a, &reference.b, target)
}

/// As `residual_series`, against bare reference columns.
pub fn residual_series_against(
    table: &RecurrenceTable,
    ref_a: &[Float],
    ref_b: &[Float],
    target: Target,
) -> Result<Vec<(u64, f64)>> {
    let reference = match target {
        Target::A => ref_a,
        Target::B => ref_b,
    };
    if table.len() != reference.len() {
        return Err(Error::LengthMismatch(table.len(), reference.len()));
    }
    let prec = table.precision_bits;
    let column = match target {
        Target::A => &table.a,
        Target::B => &table.b,
    };
    let mut out = Vec::with_capacity(table.len());
    for n in 2..table.len() {
        let nn = Float::with_val(prec, n as u64);
        let nl = Float::with_val(prec, nn.ln_ref()) * &nn;
        let mut r = Float::with_val(prec, &column[n] - &reference[n]) * nl.square();
        if target == Target::A {
            r /= 2u32;
        }
        out.push((n as u64, r.to_f64()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub c_hat: f64,
    /// Coefficient of the `1/log n` correction. No value is known for it.
    pub d_hat: f64,
    pub rms_residual: f64,
    pub n_range: (u64, u64),
    pub count: usize,
}

/// Least squares `R_n ≈ C + D/log n`. Needs at least 8 points spanning a
/// factor of 4 in `n`.
pub fn fit_constant(series: &[(u64, f64)]) -> Result<FitResult> {
    let count = series.len();
    if count < 8 {
        return Err(Error::FitRange(format!("{count} points, need at least 8")));
    }
    let lo = series.iter().map(|p| p.0).min().expect("non-empty");
    let hi = series.iter().map(|p| p.0).max().expect("non-empty");
    if lo < 2 || hi < 4 * lo {
        return Err(Error::FitRange(format!(
            "n in [{lo}, {hi}] does not span a factor of 4"
        )));
    }
    // Centered normal equations in x = 1/log n.
    let xs: Vec<f64> = series.iter().map(|&(n, _)| 1.0 / (n as f64).ln()).collect();
    let ys: Vec<f64> = series.iter().map(|p| p.1).collect();
    let m = count as f64;
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    if sxx <= 0.0 {
        return Err(Error::FitRange("degenerate abscissae".into()));
    }
    let d_hat = sxy / sxx;
    let c_hat = y_mean - d_hat * x_mean;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - c_hat - d_hat * x).powi(2))
        .sum();
    Ok(FitResult {
        c_hat,
        d_hat,
        rms_residual: (ss / m).sqrt(),
        n_range: (lo, hi),
        count,
    })
}

/// The residual series restricted to `lo <= n <= hi`.
pub fn restrict(series: &[(u64, f64)], lo: u64, hi: u64) -> Vec<(u64, f64)> {
    series.iter().copied().filter(|&(n, _)| n >= lo && n <= hi).collect()
}
