//! Orthonormal recurrence coefficients
//! `x p_n = b_n p_{n+1} + a_n p_n + b_{n-1} p_{n-1}`.
//!
//! `modified_chebyshev` is the production path. `stieltjes_discretized` is an
//! independent oracle that orthogonalizes against a discretized measure, and
//! `legendre_exact` is the closed-form reference table.

use rug::Float;

use crate::error::{Error, Result};
use crate::moments::ModifiedMomentVector;
use crate::quadrature::{tanh_sinh_discretization, DeOptions};
use crate::weights::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ModifiedChebyshev,
    StieltjesDiscretized,
    LegendreExact,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ModifiedChebyshev => "modified_chebyshev",
            Method::StieltjesDiscretized => "stieltjes_discretized",
            Method::LegendreExact => "legendre_exact",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "modified_chebyshev" => Some(Method::ModifiedChebyshev),
            "stieltjes_discretized" => Some(Method::StieltjesDiscretized),
            "legendre_exact" => Some(Method::LegendreExact),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecurrenceTable {
    pub a: Vec<Float>,
    pub b: Vec<Float>,
    /// `∫ w`, which fixes `p_0 = mass^{-1/2}`.
    pub mass: Float,
    pub weight: WeightSpec,
    pub precision_bits: u32,
    pub method: Method,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `p_0(x) .. p_deg(x)`, with `deg <= len()`.
    pub fn orthonormal_values(&self, x: &Float, deg: usize) -> Vec<Float> {
        assert!(deg <= self.len(), "degree {deg} beyond table length {}", self.len());
        let prec = x.prec();
        let mut p = Vec::with_capacity(deg + 1);
        p.push(Float::with_val(prec, self.mass.clone().sqrt().recip()));
        for n in 0..deg {
            let mut next = Float::with_val(prec, x - &self.a[n]) * &p[n];
            if n > 0 {
                next -= Float::with_val(prec, &self.b[n - 1] * &p[n - 1]);
            }
            next /= &self.b[n];
            p.push(next);
        }
        p
    }

    /// Largest componentwise difference in `a` and `b` over the first `n` rows.
    pub fn max_difference(&self, other: &RecurrenceTable, n: usize) -> Float {
        let mut m = Float::with_val(self.precision_bits, 0);
        for i in 0..n.min(self.len()).min(other.len()) {
            for (x, y) in [(&self.a[i], &other.a[i]), (&self.b[i], &other.b[i])] {
                let d = Float::with_val(self.precision_bits, x - y).abs();
                if d > m {
                    m = d;
                }
            }
        }
        m
    }
}

/// Wheeler's modified Chebyshev algorithm with the monic Legendre recurrence
/// (`ã_l = 0`, `β̃_l = l²/(4l² - 1)`) as reference.
pub fn modified_chebyshev(moments: &ModifiedMomentVector, n: usize) -> Result<RecurrenceTable> {
    let levels = n + 1;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if moments.m.len() < 2 * levels {
        return Err(Error::LengthMismatch(moments.m.len(), 2 * levels));
    }
    let prec = moments.precision_bits;
    let count = 2 * levels;

    // Moments against the monic Legendre polynomials: P_l = π_l / c_l.
    let mut sigma_prev: Vec<Float> = Vec::with_capacity(count);
    let mut c = Float::with_val(prec, 1);
    for l in 0..count {
        if l > 0 {
            c = c * l as u32 / (2 * l - 1) as u32;
        }
        sigma_prev.push(Float::with_val(prec, &moments.m[l] * &c));
    }
    let beta_ref = |l: usize| -> Float {
        let l2 = (l * l) as u64;
        Float::with_val(prec, l2 as f64) / (4 * l2 - 1) as f64
    };

    let mut alpha = Vec::with_capacity(levels);
    let mut beta = Vec::with_capacity(levels);
    if !(sigma_prev[0] > 0) {
        return Err(Error::NonPositiveBeta { n: 0 });
    }
    alpha.push(Float::with_val(prec, &sigma_prev[1] / &sigma_prev[0]));
    beta.push(sigma_prev[0].clone());

    // sigma_prev holds row k-1, sigma_prev2 row k-2 (zero for k = 1).
    let mut sigma_prev2: Vec<Float> = vec![Float::with_val(prec, 0); count];
    for k in 1..levels {
        let mut row: Vec<Float> = vec![Float::with_val(prec, 0); count];
        for l in k..(count - k) {
            let mut s = sigma_prev[l + 1].clone();
            s -= Float::with_val(prec, &alpha[k - 1] * &sigma_prev[l]);
            s -= Float::with_val(prec, &beta[k - 1] * &sigma_prev2[l]);
            s += beta_ref(l) * &sigma_prev[l - 1];
            row[l] = s;
        }
        if !(row[k] > 0) {
            return Err(Error::NonPositiveBeta { n: k });
        }
        let a_k = Float::with_val(prec, &row[k + 1] / &row[k])
            - Float::with_val(prec, &sigma_prev[k] / &sigma_prev[k - 1]);
        let b_k = Float::with_val(prec, &row[k] / &sigma_prev[k - 1]);
        alpha.push(a_k);
        beta.push(b_k);
        sigma_prev2 = std::mem::replace(&mut sigma_prev, row);
    }

    let a = alpha.into_iter().take(n).collect();
    let b = beta[1..=n].iter().map(|v| v.clone().sqrt()).collect();
    Ok(RecurrenceTable {
        a,
        b,
        mass: beta[0].clone(),
        weight: moments.weight.clone(),
        precision_bits: prec,
        method: Method::ModifiedChebyshev,
    })
}

/// Discrete measure `Σ λ_i δ(x - x_i)` approximating `w(x) dx`: the composite
/// tanh-sinh rule at the given level, with the weight evaluated from the gap
/// `1 - x_i` so the log singularity is resolved.
pub fn discretized_measure(weight: &WeightSpec, level: u32, precision_bits: u32) -> Vec<(Float, Float)> {
    let opts = DeOptions::new(precision_bits).singular(false, true);
    let lo = Float::with_val(precision_bits, -1);
    let hi = Float::with_val(precision_bits, 1);
    tanh_sinh_discretization(&lo, &hi, &opts, level)
        .into_iter()
        .map(|(a, lambda)| {
            let w = weight.eval_at_gap(&a.from_hi);
            (a.x, lambda * w)
        })
        .collect()
}

/// Smallest discretization level with at least `m` points.
pub fn level_for_size(m: usize, precision_bits: u32) -> u32 {
    let lo = Float::with_val(precision_bits, -1);
    let hi = Float::with_val(precision_bits, 1);
    let opts = DeOptions::new(precision_bits).singular(false, true);
    let mut level = 0;
    while tanh_sinh_discretization(&lo, &hi, &opts, level).len() < m && level < 20 {
        level += 1;
    }
    level
}

/// Stieltjes (Lanczos) orthogonalization against a discrete measure.
pub fn stieltjes(measure: &[(Float, Float)], n: usize, weight: &WeightSpec, precision_bits: u32) -> Result<RecurrenceTable> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if measure.len() <= n {
        return Err(Error::InvalidArgument(format!(
            "discretization of {} points cannot support {n} coefficients",
            measure.len()
        )));
    }
    let prec = precision_bits;
    let mass = measure.iter().fold(Float::with_val(prec, 0), |s, (_, l)| s + l);
    let p0 = Float::with_val(prec, mass.clone().sqrt().recip());
    let mut p: Vec<Float> = vec![p0; measure.len()];
    let mut p_prev: Vec<Float> = vec![Float::with_val(prec, 0); measure.len()];
    let mut a = Vec::with_capacity(n);
    let mut b: Vec<Float> = Vec::with_capacity(n);
    for k in 0..n {
        let mut a_k = Float::with_val(prec, 0);
        for ((x, lambda), pk) in measure.iter().zip(&p) {
            a_k += Float::with_val(prec, pk.square_ref()) * x * lambda;
        }
        let mut q = Vec::with_capacity(measure.len());
        let mut norm2 = Float::with_val(prec, 0);
        for (i, (x, lambda)) in measure.iter().enumerate() {
            let mut v = Float::with_val(prec, x - &a_k) * &p[i];
            if k > 0 {
                v -= Float::with_val(prec, &b[k - 1] * &p_prev[i]);
            }
            norm2 += Float::with_val(prec, v.square_ref()) * lambda;
            q.push(v);
        }
        if !(norm2 > 0) {
            return Err(Error::NonPositiveBeta { n: k + 1 });
        }
        let b_k = norm2.sqrt();
        for v in q.iter_mut() {
            *v /= &b_k;
        }
        p_prev = std::mem::replace(&mut p, q);
        a.push(a_k);
        b.push(b_k);
    }
    Ok(RecurrenceTable {
        a,
        b,
        mass,
        weight: weight.clone(),
        precision_bits: prec,
        method: Method::StieltjesDiscretized,
    })
}

/// The Stieltjes oracle on a tanh-sinh discretization with at least `m`
/// points.
pub fn stieltjes_discretized(
    weight: &WeightSpec,
    n: usize,
    m: usize,
    precision_bits: u32,
) -> Result<RecurrenceTable> {
    let level = level_for_size(m, precision_bits);
    let measure = discretized_measure(weight, level, precision_bits);
    stieltjes(&measure, n, weight, precision_bits)
}

/// Self-convergence of the oracle: the largest change in the first `n` rows
/// when the discretization size is doubled from `m`.
pub fn stieltjes_refinement_gap(
    weight: &WeightSpec,
    n: usize,
    m: usize,
    precision_bits: u32,
) -> Result<Float> {
    let level = level_for_size(m, precision_bits);
    let coarse = stieltjes(&discretized_measure(weight, level, precision_bits), n, weight, precision_bits)?;
    let fine = stieltjes(&discretized_measure(weight, level + 1, precision_bits), n, weight, precision_bits)?;
    Ok(coarse.max_difference(&fine, n))
}

/// `ã_n = 0`, `b̃_n = (n+1)/√((2n+1)(2n+3))`.
pub fn legendre_b(n: u64, precision_bits: u32) -> Float {
    let d = Float::with_val(precision_bits, ((2 * n + 1) * (2 * n + 3)) as f64).sqrt();
    Float::with_val(precision_bits, (n + 1) as f64) / d
}

pub fn legendre_exact(n: usize, precision_bits: u32) -> RecurrenceTable {
    RecurrenceTable {
        a: (0..n).map(|_| Float::with_val(precision_bits, 0)).collect(),
        b: (0..n as u64).map(|i| legendre_b(i, precision_bits)).collect(),
        mass: Float::with_val(precision_bits, 2),
        weight: WeightSpec::legendre(),
        precision_bits,
        method: Method::LegendreExact,
    }
}

/// Orthonormal coefficients for the Jacobi weight `1 + x`:
/// `a_n = 1/((2n+1)(2n+3))`, `b_n = √((n+1)(n+2))/(2n+3)`.
///
/// This is the `k = 1` analogue of the Legendre table, since
/// `log(2/(1-x))` vanishes linearly at `x = -1`.
pub fn jacobi_0_1_exact(n: usize, precision_bits: u32) -> (Vec<Float>, Vec<Float>) {
    let p = precision_bits;
    let a = (0..n as u64)
        .map(|i| Float::with_val(p, ((2 * i + 1) * (2 * i + 3)) as f64).recip())
        .collect();
    let b = (0..n as u64)
        .map(|i| Float::with_val(p, ((i + 1) * (i + 2)) as f64).sqrt() / (2 * i + 3) as f64)
        .collect();
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::modified_moments_closed_form;

    const P: u32 = 256;

    fn cheb(weight: &WeightSpec, n: usize, prec: u32) -> RecurrenceTable {
        let m = modified_moments_closed_form(weight, n, prec).unwrap();
        modified_chebyshev(&m, n).unwrap()
    }

    #[test]
    fn legendre_moments_reproduce_legendre_table() {
        let t = cheb(&WeightSpec::legendre(), 30, P);
        let e = legendre_exact(30, P);
        assert!(t.max_difference(&e, 30) < 1e-70);
        let b0 = Float::with_val(P, 3).sqrt().recip();
        assert!(Float::with_val(P, &t.b[0] - &b0).abs() < 1e-70);
    }

    #[test]
    fn stieltjes_reproduces_legendre() {
        let t = stieltjes_discretized(&WeightSpec::legendre(), 6, 200, P).unwrap();
        let e = legendre_exact(6, P);
        assert!(t.max_difference(&e, 6) < 1e-40);
    }

    #[test]
    fn first_coefficient_for_k_e() {
        let t = cheb(&WeightSpec::log_e(P), 3, P);
        let quarter = Float::with_val(P, 0.25);
        assert!(Float::with_val(P, &t.a[0] - &quarter).abs() < 1e-70);
        let s = stieltjes_discretized(&WeightSpec::log_e(P), 1, 400, P).unwrap();
        assert!(Float::with_val(P, &s.a[0] - &quarter).abs() < 1e-40);
    }

    #[test]
    fn small_table_methods_agree() {
        let w = WeightSpec::log_f64(2.0).unwrap();
        let c = cheb(&w, 10, P);
        let s = stieltjes_discretized(&w, 10, 400, P).unwrap();
        assert!(c.max_difference(&s, 10) < 1e-40);
    }

    #[test]
    fn legendre_exact_first_entry() {
        let t = legendre_exact(4, 128);
        assert!((t.b[0].to_f64() - 0.577_350_269_189_625_8).abs() < 1e-15);
        assert!(t.a.iter().all(|a| a.is_zero()));
    }

    #[test]
    fn too_few_moments_is_an_error() {
        let mut m = modified_moments_closed_form(&WeightSpec::log_e(P), 5, P).unwrap();
        m.m.truncate(9);
        assert!(matches!(modified_chebyshev(&m, 5), Err(Error::LengthMismatch(9, 12))));
    }

    #[test]
    fn corrupt_moments_are_rejected() {
        let mut m = modified_moments_closed_form(&WeightSpec::log_e(P), 5, P).unwrap();
        m.m[2] = Float::with_val(P, 10);
        assert!(matches!(modified_chebyshev(&m, 5), Err(Error::NonPositiveBeta { .. })));
    }

    #[test]
    fn orthonormal_values_of_legendre() {
        let t = legendre_exact(3, P);
        let x = Float::with_val(P, 0.5);
        let p = t.orthonormal_values(&x, 2);
        // p_2 = sqrt(5/2) P_2(x), P_2(1/2) = -1/8
        let expect = Float::with_val(P, 2.5).sqrt() * -0.125;
        assert!(Float::with_val(P, &p[2] - &expect).abs() < 1e-70);
    }

    #[test]
    fn jacobi_reference_matches_pipeline() {
        // (1 + x) has modified moments 2, 2/3, 0, 0, ...
        let w = WeightSpec::legendre();
        let mut m = modified_moments_closed_form(&w, 30, P).unwrap();
        m.m[1] = Float::with_val(P, 2) / 3u32;
        let t = modified_chebyshev(&m, 30).unwrap();
        let (a, b) = jacobi_0_1_exact(30, P);
        for i in 0..30 {
            assert!(Float::with_val(P, &t.a[i] - &a[i]).abs() < 1e-60);
            assert!(Float::with_val(P, &t.b[i] - &b[i]).abs() < 1e-60);
        }
    }
}
