//! Gauss–Legendre rules by Newton iteration on the Legendre recurrence.

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::{pi, pow2, GUARD_BITS};

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
    pub precision_bits: u32,
    pub interval: (Float, Float),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`, summed in node order.
    pub fn apply(&self, mut f: impl FnMut(&Float) -> Float) -> Float {
        let mut s = Float::with_val(self.precision_bits, 0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(x) * w;
        }
        s
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for j in 1..n {
        // (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
        let mut p2 = Float::with_val(prec, x * &p1) * (2 * j as u32 + 1);
        p2 -= Float::with_val(prec, &p0 * j as u32);
        p2 /= j as u32 + 1;
        p0 = std::mem::replace(&mut p1, p2);
    }
    // (1 - x²) P_n' = n (P_{n-1} - x P_n)
    let one_minus_x2 = Float::with_val(prec, 1u32 - Float::with_val(prec, x.square_ref()));
    let dp = Float::with_val(prec, &p0 - Float::with_val(prec, x * &p1)) * n as u32 / one_minus_x2;
    (p1, dp)
}

/// The `n`-point rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre_rule(n: usize, precision_bits: u32) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss–Legendre rule needs n >= 1".into()));
    }
    let wp = precision_bits + GUARD_BITS;
    let tol = pow2(wp, -(precision_bits as i32) - 8);
    let pi_wp = pi(wp);
    let half = n / 2;
    // Positive nodes, largest first, from the classical cosine guess.
    let mut positive: Vec<(Float, Float)> = Vec::with_capacity(half + 1);
    for i in 0..half {
        let guess = Float::with_val(wp, &pi_wp * ((4.0 * i as f64 + 3.0) / (4.0 * n as f64 + 2.0)));
        let mut x = guess.cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, &x);
            let dx = Float::with_val(wp, &p / &dp);
            x -= &dx;
            if dx.abs() < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeNotConverged { index: i, n });
        }
        let (_, dp) = legendre_with_derivative(n, &x);
        let one_minus_x2 = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32 / (one_minus_x2 * Float::with_val(wp, dp.square_ref())));
        positive.push((x, w));
    }

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (x, w) in positive.iter() {
        nodes.push(Float::with_val(precision_bits, -x));
        weights.push(Float::with_val(precision_bits, w));
    }
    if n % 2 == 1 {
        let zero = Float::with_val(wp, 0);
        let (_, dp) = legendre_with_derivative(n, &zero);
        nodes.push(Float::with_val(precision_bits, 0));
        weights.push(Float::with_val(precision_bits, 2u32 / Float::with_val(wp, dp.square_ref())));
    }
    for (x, w) in positive.iter().rev() {
        nodes.push(Float::with_val(precision_bits, x));
        weights.push(Float::with_val(precision_bits, w));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        precision_bits,
        interval: (
            Float::with_val(precision_bits, -1),
            Float::with_val(precision_bits, 1),
        ),
    })
}
