//! Modified moments `m_j = ∫ w(x) P_j(x) dx` against the Legendre
//! polynomials, the input of the modified Chebyshev algorithm.
//!
//! For the log weight, `w = log(2k) - log(1-x)` and `P_j ⊥ 1` for `j ≥ 1`, so
//! only `m_0` depends on `k`:
//! `m_0 = 2 log k + 2`, `m_j = 2/(j(j+1))`.

use rug::Float;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_de, DeOptions};
use crate::weights::{WeightKind, WeightSpec};

#[derive(Debug, Clone)]
pub struct ModifiedMomentVector {
    /// `m_0 .. m_{2N+1}`: a table of `N` coefficient pairs needs `N + 1`
    /// levels of the Chebyshev recursion, hence `2N + 2` moments.
    pub m: Vec<Float>,
    pub weight: WeightSpec,
    pub n: usize,
    pub precision_bits: u32,
}

/// Number of moments needed for a table of `n` rows.
pub fn moment_count(n: usize) -> usize {
    2 * n + 2
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    Ok(())
}

pub fn modified_moments_closed_form(
    weight: &WeightSpec,
    n: usize,
    precision_bits: u32,
) -> Result<ModifiedMomentVector> {
    check_n(n)?;
    let count = moment_count(n);
    let mut m = Vec::with_capacity(count);
    match &weight.kind {
        WeightKind::Legendre => {
            m.push(Float::with_val(precision_bits, 2));
            m.extend((1..count).map(|_| Float::with_val(precision_bits, 0)));
        }
        WeightKind::Log { k } => {
            let log_k = Float::with_val(precision_bits, k).ln();
            m.push(log_k * 2u32 + 2u32);
            for j in 1..count as u64 {
                m.push(Float::with_val(precision_bits, 2u32) / (j * (j + 1)) as f64);
            }
        }
    }
    Ok(ModifiedMomentVector {
        m,
        weight: weight.clone(),
        n,
        precision_bits,
    })
}

/// `P_0(x) .. P_{count-1}(x)`.
pub fn legendre_values(x: &Float, count: usize) -> Vec<Float> {
    let prec = x.prec();
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(Float::with_val(prec, 1));
    if count == 1 {
        return out;
    }
    out.push(x.clone());
    for j in 1..count - 1 {
        let mut p = Float::with_val(prec, x * &out[j]) * (2 * j + 1) as u32;
        p -= Float::with_val(prec, &out[j - 1] * j as u32);
        p /= (j + 1) as u32;
        out.push(p);
    }
    out
}

/// The same moments by tanh-sinh quadrature of `w P_j` with the log
/// singularity at `x = 1` flagged. An independent check on the closed form.
pub fn modified_moments_quadrature(
    weight: &WeightSpec,
    n: usize,
    precision_bits: u32,
) -> Result<ModifiedMomentVector> {
    check_n(n)?;
    let count = moment_count(n);
    let wp = precision_bits + 32;
    let opts = DeOptions::new(wp).singular(false, true).max_level(14);
    let lo = Float::with_val(wp, -1);
    let hi = Float::with_val(wp, 1);
    let r = integrate_de(
        |a| {
            let w = weight.eval_at_gap(&a.from_hi);
            let mut p = legendre_values(&a.x, count);
            for v in p.iter_mut() {
                *v *= &w;
            }
            p
        },
        &lo,
        &hi,
        &opts,
    );
    let m = r
        .require("modified moments")?
        .into_iter()
        .map(|v| Float::with_val(precision_bits, v))
        .collect();
    Ok(ModifiedMomentVector {
        m,
        weight: weight.clone(),
        n,
        precision_bits,
    })
}
