//! Tanh-sinh quadrature, `x = tanh(π/2 sinh t)`.
//!
//! The integrand receives every abscissa together with its distances to both
//! endpoints. Near an endpoint `x` itself rounds to the endpoint long before
//! the distance underflows, so integrands with `log(1 - x)` or
//! `(1 - x)^{-1/2}` behaviour must read the distance, not `x`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::numeric::{pi, pow2};

/// A point of the rule: `x = lo + from_lo = hi - from_hi`.
#[derive(Debug, Clone)]
pub struct Abscissa {
    pub x: Float,
    pub from_lo: Float,
    pub from_hi: Float,
}

#[derive(Debug, Clone)]
pub struct DeOptions {
    pub prec: u32,
    /// Integrand is allowed to blow up (log, inverse square root) at `lo`.
    pub singular_lo: bool,
    pub singular_hi: bool,
    /// Finest level; level `l` uses step `2^{-l}` in `t`.
    pub max_level: u32,
    /// Converged once consecutive levels differ by less than `rel_tol` times
    /// the integral of `|f|`. Defaults to `2^{-(prec - 24)}`.
    pub rel_tol: Option<Float>,
}

impl DeOptions {
    pub fn new(prec: u32) -> Self {
        DeOptions {
            prec,
            singular_lo: true,
            singular_hi: true,
            max_level: 12,
            rel_tol: None,
        }
    }

    pub fn smooth(prec: u32) -> Self {
        DeOptions {
            singular_lo: false,
            singular_hi: false,
            ..Self::new(prec)
        }
    }

    pub fn singular(mut self, lo: bool, hi: bool) -> Self {
        self.singular_lo = lo;
        self.singular_hi = hi;
        self
    }

    pub fn max_level(mut self, level: u32) -> Self {
        self.max_level = level;
        self
    }

    pub fn rel_tol(mut self, tol: Float) -> Self {
        self.rel_tol = Some(tol);
        self
    }
}

#[derive(Debug, Clone)]
pub struct IntegrationResult<V> {
    pub value: V,
    /// Difference between the two finest levels.
    pub error_estimate: Float,
    pub evaluations: usize,
    pub levels: u32,
    pub converged: bool,
}

impl<V> IntegrationResult<V> {
    /// The value, or `NotConverged` if the level cap was hit first.
    pub fn require(self, what: &str) -> Result<V> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                what: what.to_string(),
                levels: self.levels as usize,
                estimate: self.error_estimate.to_f64(),
            })
        }
    }
}

/// Values that can be summed by the integrator.
pub trait QuadValue: Sized {
    fn scaled(&self, w: &Float) -> Self;
    fn add_scaled(&mut self, other: &Self, w: &Float);
    /// Max-norm of `self - other`.
    fn distance(&self, other: &Self) -> Float;
    /// Max-norm of `self`.
    fn magnitude(&self) -> Float;
}

impl QuadValue for Float {
    fn scaled(&self, w: &Float) -> Self {
        Float::with_val(w.prec(), self * w)
    }
    fn add_scaled(&mut self, other: &Self, w: &Float) {
        *self += Float::with_val(w.prec(), other * w);
    }
    fn distance(&self, other: &Self) -> Float {
        Float::with_val(self.prec(), self - other).abs()
    }
    fn magnitude(&self) -> Float {
        self.clone().abs()
    }
}

impl QuadValue for Complex {
    fn scaled(&self, w: &Float) -> Self {
        Complex::with_val(w.prec(), self * w)
    }
    fn add_scaled(&mut self, other: &Self, w: &Float) {
        *self += Complex::with_val(w.prec(), other * w);
    }
    fn distance(&self, other: &Self) -> Float {
        let d = Complex::with_val(self.prec().0, self - other);
        Float::with_val(self.prec().0, d.abs_ref())
    }
    fn magnitude(&self) -> Float {
        Float::with_val(self.prec().0, self.abs_ref())
    }
}

impl QuadValue for Vec<Float> {
    fn scaled(&self, w: &Float) -> Self {
        self.iter().map(|v| v.scaled(w)).collect()
    }
    fn add_scaled(&mut self, other: &Self, w: &Float) {
        for (a, b) in self.iter_mut().zip(other) {
            a.add_scaled(b, w);
        }
    }
    fn distance(&self, other: &Self) -> Float {
        let prec = self.first().map_or(64, |v| v.prec());
        self.iter()
            .zip(other)
            .map(|(a, b)| a.distance(b))
            .fold(Float::with_val(prec, 0), |m, d| if d > m { d } else { m })
    }
    fn magnitude(&self) -> Float {
        let prec = self.first().map_or(64, |v| v.prec());
        self.iter()
            .map(|a| a.magnitude())
            .fold(Float::with_val(prec, 0), |m, d| if d > m { d } else { m })
    }
}

/// One node of the standard rule on `[-1, 1]` for `t >= 0`. The mirrored node
/// at `-t` swaps the two gaps.
#[derive(Debug)]
struct Node {
    /// Gap to the nearer endpoint divided by the interval length:
    /// `1/(1 + e^{2s})`, `s = π/2 sinh t`.
    c: Float,
    /// Jacobian `(π/2) cosh t / cosh² s`, for an interval of length 2.
    w: Float,
    is_origin: bool,
}

type LevelTable = Vec<Arc<Vec<Node>>>;

fn cache() -> &'static Mutex<HashMap<u32, LevelTable>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, LevelTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Smallest relative gap kept in the table: small enough for integrands that
/// grow like `gap^{-1/2}` at a singular endpoint.
fn min_gap(prec: u32) -> Float {
    pow2(prec, -(2 * prec as i32) - 8)
}

fn build_level(prec: u32, level: u32) -> Vec<Node> {
    let wp = prec + 16;
    let h = pow2(wp, -(level as i32));
    let half_pi = pi(wp) / 2u32;
    let cutoff = min_gap(wp);
    let mut nodes = Vec::new();
    let (start, step) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
    let mut j = start;
    loop {
        let t = Float::with_val(wp, &h * j);
        let s = Float::with_val(wp, t.sinh_ref()) * &half_pi;
        // q = e^{-2s}, c = q/(1+q), w = 2π cosh t · c(1-c)
        let q = Float::with_val(wp, -2 * s).exp();
        let c = Float::with_val(wp, &q / Float::with_val(wp, &q + 1u32));
        if c < cutoff {
            break;
        }
        let one_minus_c = Float::with_val(wp, 1u32 - &c);
        let w = Float::with_val(wp, t.cosh_ref()) * &half_pi * 4u32 * &c * one_minus_c;
        nodes.push(Node {
            c: Float::with_val(prec, &c),
            w: Float::with_val(prec, &w),
            is_origin: j == 0,
        });
        j += step;
    }
    nodes
}

fn level_nodes(prec: u32, level: u32) -> Arc<Vec<Node>> {
    let mut map = cache().lock().expect("node cache poisoned");
    let levels = map.entry(prec).or_default();
    while levels.len() <= level as usize {
        let l = levels.len() as u32;
        levels.push(Arc::new(build_level(prec, l)));
    }
    Arc::clone(&levels[level as usize])
}

/// Visits the nodes first introduced at `level`, mapped to `[lo, hi]`, with
/// their weights scaled by the half-length (but not by the step).
fn for_each_new_node(
    lo: &Float,
    hi: &Float,
    opts: &DeOptions,
    level: u32,
    mut visit: impl FnMut(Abscissa, &Float),
) {
    let prec = opts.prec;
    let len = Float::with_val(prec, hi - lo);
    let half = Float::with_val(prec, &len / 2u32);
    let regular_cut = pow2(prec, -(prec as i32) - 8);
    let singular_cut = min_gap(prec);
    let lo_cut = if opts.singular_lo { &singular_cut } else { &regular_cut };
    let hi_cut = if opts.singular_hi { &singular_cut } else { &regular_cut };
    let nodes = level_nodes(prec, level);
    for node in nodes.iter() {
        let w = Float::with_val(prec, &node.w * &half);
        let near = Float::with_val(prec, &len * &node.c);
        let far = Float::with_val(prec, &len - &near);
        if node.is_origin {
            let x = Float::with_val(prec, lo + &near);
            visit(Abscissa { x, from_lo: near, from_hi: far }, &w);
            continue;
        }
        // t > 0: close to hi
        if node.c >= *hi_cut {
            let x = Float::with_val(prec, hi - &near);
            visit(
                Abscissa { x, from_lo: far.clone(), from_hi: near.clone() },
                &w,
            );
        }
        // t < 0: close to lo
        if node.c >= *lo_cut {
            let x = Float::with_val(prec, lo + &near);
            visit(Abscissa { x, from_lo: near, from_hi: far }, &w);
        }
    }
}

/// Integrates `f` over `[lo, hi]`, halving the step until two consecutive
/// levels agree. The result carries a `converged` flag rather than failing,
/// so callers can decide whether a best effort is good enough.
pub fn integrate_de<V, F>(mut f: F, lo: &Float, hi: &Float, opts: &DeOptions) -> IntegrationResult<V>
where
    V: QuadValue,
    F: FnMut(&Abscissa) -> V,
{
    let prec = opts.prec;
    let rel_tol = opts
        .rel_tol
        .clone()
        .unwrap_or_else(|| pow2(prec, -(prec as i32) + 24));
    let mut raw: Option<V> = None;
    let mut raw_abs = Float::with_val(prec, 0);
    let mut evaluations = 0usize;
    let mut prev: Option<V> = None;
    let mut error_estimate = Float::with_val(prec, f64::INFINITY);

    for level in 0..=opts.max_level {
        for_each_new_node(lo, hi, opts, level, |a, w| {
            let v = f(&a);
            evaluations += 1;
            raw_abs += Float::with_val(prec, v.magnitude() * w);
            match raw.as_mut() {
                Some(acc) => acc.add_scaled(&v, w),
                None => raw = Some(v.scaled(w)),
            }
        });
        let h = pow2(prec, -(level as i32));
        let current = raw
            .as_ref()
            .expect("level 0 always has the origin node")
            .scaled(&h);
        if let Some(p) = prev.as_ref() {
            error_estimate = current.distance(p);
            let scale = Float::with_val(prec, &raw_abs * &h);
            if error_estimate <= Float::with_val(prec, &scale * &rel_tol) {
                return IntegrationResult {
                    value: current,
                    error_estimate,
                    evaluations,
                    levels: level,
                    converged: true,
                };
            }
        }
        prev = Some(current);
    }
    IntegrationResult {
        value: prev.expect("at least one level"),
        error_estimate,
        evaluations,
        levels: opts.max_level,
        converged: false,
    }
}

/// The nodes and step-scaled weights of the composite rule at a fixed level,
/// as a discrete measure on `[lo, hi]`. Abscissae are sorted ascending.
pub fn tanh_sinh_discretization(
    lo: &Float,
    hi: &Float,
    opts: &DeOptions,
    level: u32,
) -> Vec<(Abscissa, Float)> {
    let prec = opts.prec;
    let h = pow2(prec, -(level as i32));
    let mut out = Vec::new();
    for l in 0..=level {
        for_each_new_node(lo, hi, opts, l, |a, w| {
            out.push((a, Float::with_val(prec, w * &h)));
        });
    }
    out.sort_by(|a, b| a.0.x.partial_cmp(&b.0.x).expect("finite abscissae"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn f(x: f64) -> Float {
        Float::with_val(P, x)
    }

    #[test]
    fn log_singularity_at_zero() {
        // ∫_0^1 log(1/x) dx = 1
        let r = integrate_de(|a| Float::with_val(P, a.from_lo.ln_ref()) * -1i32, &f(0.0), &f(1.0), &DeOptions::new(P));
        assert!(r.converged);
        assert!(Float::with_val(P, &r.value - 1u32).abs() < 1e-70);
    }

    #[test]
    fn log_weight_mass() {
        // ∫_{-1}^{1} log(2/(1-x)) dx = 2
        let r = integrate_de(
            |a| Float::with_val(P, 2u32 / &a.from_hi).ln(),
            &f(-1.0),
            &f(1.0),
            &DeOptions::new(P),
        );
        assert!(Float::with_val(P, &r.value - 2u32).abs() < 1e-70);
    }

    #[test]
    fn log_weight_mass_midpoint_oracle() {
        // Independent check of the same value with a plain midpoint rule.
        let panels = 10_000;
        let h = 2.0 / panels as f64;
        let s: f64 = (0..panels)
            .map(|i| {
                let x = -1.0 + (i as f64 + 0.5) * h;
                (2.0 / (1.0 - x)).ln() * h
            })
            .sum();
        assert!((s - 2.0).abs() < 1e-3);
    }

    #[test]
    fn arcsine() {
        let r = integrate_de(
            |a| Float::with_val(P, &a.from_lo * &a.from_hi).sqrt().recip(),
            &f(-1.0),
            &f(1.0),
            &DeOptions::new(P),
        );
        assert!(r.converged);
        assert!(Float::with_val(P, &r.value - pi(P)).abs() < 1e-70);
    }

    #[test]
    fn smooth_complex_integrand() {
        // ∫_0^1 e^{ix} dx = (e^i - 1)/i
        let r = integrate_de(
            |a| Complex::with_val(P, (0, &a.x)).exp(),
            &f(0.0),
            &f(1.0),
            &DeOptions::smooth(P),
        );
        let i = Complex::with_val(P, (0, 1));
        let expect = Complex::with_val(P, (Complex::with_val(P, i.exp_ref()) - 1u32) / &i);
        assert!(r.value.distance(&expect) < 1e-70);
    }

    #[test]
    fn vector_values_integrate_componentwise() {
        let r = integrate_de(
            |a| vec![Float::with_val(P, 1), Float::with_val(P, &a.x * &a.x)],
            &f(-1.0),
            &f(1.0),
            &DeOptions::smooth(P),
        );
        assert!(Float::with_val(P, &r.value[0] - 2u32).abs() < 1e-70);
        assert!(Float::with_val(P, &r.value[1] - f(2.0) / 3u32).abs() < 1e-70);
    }

    #[test]
    fn level_differences_shrink() {
        let mut diffs = Vec::new();
        let mut last: Option<Float> = None;
        for level in 0..6 {
            let opts = DeOptions::smooth(P).max_level(level).rel_tol(f(0.0));
            let r = integrate_de(|a| Float::with_val(P, a.x.cos_ref()), &f(-1.0), &f(1.0), &opts);
            if let Some(l) = last {
                diffs.push(r.value.distance(&l));
            }
            last = Some(r.value);
        }
        for w in diffs.windows(2).skip(1) {
            assert!(w[1] < w[0] || w[1] < 1e-70);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let opts = DeOptions::new(P).max_level(1);
        let r = integrate_de(|a| Float::with_val(P, a.from_lo.ln_ref()), &f(0.0), &f(1.0), &opts);
        assert!(!r.converged);
        assert!(r.require("log").is_err());
    }

    #[test]
    fn discretization_weights_sum_to_length() {
        let d = tanh_sinh_discretization(&f(-1.0), &f(1.0), &DeOptions::new(P), 5);
        let s = d.iter().fold(f(0.0), |acc, (_, w)| acc + w);
        assert!(Float::with_val(P, s - 2u32).abs() < 1e-60);
        assert!(d.windows(2).all(|p| p[0].0.x <= p[1].0.x));
    }
}
