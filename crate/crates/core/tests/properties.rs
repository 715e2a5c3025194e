use proptest::prelude::*;
use rug::{Complex, Float};

use logorth::moments::modified_moments_closed_form;
use logorth::parametrix::n_matrix;
use logorth::quadrature::{integrate_de, DeOptions};
use logorth::recurrence::{discretized_measure, modified_chebyshev, RecurrenceTable};
use logorth::szego::{phi, szego_f};
use logorth::weights::eval_weight_complex;
use logorth::WeightSpec;

const P: u32 = 128;

fn cheb(weight: &WeightSpec, n: usize, prec: u32) -> RecurrenceTable {
    let m = modified_moments_closed_form(weight, n, prec).unwrap();
    modified_chebyshev(&m, n).unwrap()
}

fn off_cut(re: f64, im: f64) -> bool {
    !(im.abs() < 1e-9 && re.abs() <= 1.0)
}

fn cdist(a: &Complex, b: &Complex) -> f64 {
    Complex::with_val(P, a - b).abs().real().to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_has_schwarz_symmetry(k in 1.01f64..20.0, re in -4.0f64..4.0, im in 0.001f64..3.0) {
        let w = WeightSpec::log_f64(k).unwrap();
        let z = Complex::with_val(P, (re, im));
        let up = eval_weight_complex(&w, &z).unwrap();
        let down = eval_weight_complex(&w, &Complex::with_val(P, z.conj_ref())).unwrap();
        prop_assert!(cdist(&down, &Complex::with_val(P, up.conj_ref())) < 1e-30);
    }

    #[test]
    fn phi_is_outside_and_inverts(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!(off_cut(re, im));
        let z = Complex::with_val(P, (re, im));
        let p = phi(&z).unwrap().phi;
        prop_assert!(*Complex::with_val(P, p.abs_ref()).real() > 1);
        let back = Complex::with_val(P, &p + Complex::with_val(P, p.recip_ref())) / 2u32;
        prop_assert!(cdist(&back, &z) < 1e-30);
    }

    #[test]
    fn n_matrix_is_unimodular(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!(off_cut(re, im));
        let d = n_matrix(&Complex::with_val(P, (re, im))).unwrap().det();
        prop_assert!(cdist(&d, &Complex::with_val(P, 1)) < 1e-30);
    }

    #[test]
    fn quadrature_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let lo = Float::with_val(P, 0);
        let hi = Float::with_val(P, 1);
        let opts = DeOptions::new(P).singular(true, false);
        let integrate = |c_log: f64, c_sqrt: f64| {
            integrate_de(
                |a| {
                    let x = &a.from_lo;
                    Float::with_val(P, x.ln_ref()) * -c_log + Float::with_val(P, x.sqrt_ref()) * c_sqrt
                },
                &lo,
                &hi,
                &opts,
            )
            .require("linearity")
            .unwrap()
        };
        let combined = integrate(alpha, beta);
        // ∫ -log x = 1, ∫ √x = 2/3
        let exact = Float::with_val(P, alpha) + Float::with_val(P, beta) * 2u32 / 3u32;
        prop_assert!(Float::with_val(P, &combined - &exact).abs() < 1e-30);
        let parts = integrate(alpha, 0.0) + integrate(0.0, beta);
        prop_assert!(Float::with_val(P, &combined - &parts).abs() < 1e-30);
    }
}

#[test]
fn polynomials_are_orthonormal() {
    let prec = 256;
    let w = WeightSpec::log_e(prec);
    let deg = 20;
    let t = cheb(&w, deg + 1, prec);
    let measure = discretized_measure(&w, 7, prec);
    let mut gram = vec![vec![Float::with_val(prec, 0); deg + 1]; deg + 1];
    for (x, lambda) in &measure {
        let p = t.orthonormal_values(x, deg);
        for i in 0..=deg {
            for j in 0..=i {
                gram[i][j] += Float::with_val(prec, &p[i] * &p[j]) * lambda;
            }
        }
    }
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate().take(i + 1) {
            let expect = if i == j { 1.0 } else { 0.0 };
            let err = (g.to_f64() - expect).abs();
            assert!(err < 1e-20, "<p_{i}, p_{j}> off by {err:e}");
        }
    }
}

#[test]
fn doubling_precision_changes_nothing_visible() {
    let w = |prec| WeightSpec::log(Float::with_val(prec, 3)).unwrap();
    let lo = cheb(&w(256), 200, 256);
    let hi = cheb(&w(512), 200, 512);
    let d = lo.max_difference(&hi, 200).to_f64();
    assert!(d < 1e-60, "tables differ by {d:e}");
}

#[test]
fn diagonal_coefficients_are_negative() {
    let t = cheb(&WeightSpec::log_e(512), 400, 512);
    for n in 20..400 {
        assert!(t.a[n] < 0, "a_{n} = {}", t.a[n].to_f64());
    }
}

#[test]
fn szego_function_is_positive_right_of_the_support() {
    let w = WeightSpec::log_f64(2.0).unwrap();
    for x in [1.0 + 1e-8, 1.001, 1.5, 3.0, 100.0] {
        let f = szego_f(&w, &Complex::with_val(P, (x, 0.0)), P).unwrap().f;
        assert!(*f.real() > 0, "F({x}) = {f}");
        assert!(f.imag().to_f64().abs() < 1e-30 * f.real().to_f64(), "F({x}) = {f}");
    }
}
