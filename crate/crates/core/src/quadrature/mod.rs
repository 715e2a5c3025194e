//! Extended-precision quadrature: Gauss–Legendre rules for smooth integrands
//! and a tanh-sinh integrator for integrands with endpoint singularities.

mod gauss;
mod tanh_sinh;

pub use gauss::{gauss_legendre_rule, QuadratureRule};
pub use tanh_sinh::{
    integrate_de, tanh_sinh_discretization, Abscissa, DeOptions, IntegrationResult, QuadValue,
};
