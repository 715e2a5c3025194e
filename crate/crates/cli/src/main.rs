use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Complex, Float};
use serde_json::{json, Value};

use logorth::asymptotics::{fit_constant, residual_series_against, restrict, Target, C_MAGNUS, C_THEOREM};
use logorth::moments::modified_moments_closed_form;
use logorth::numeric::{parse_decimal, to_decimal};
use logorth::parametrix::bessel::{asymptotic_cutover, wronskian_i0_k0};
use logorth::parametrix::{
    leading_endpoint_integral, leading_integral_ratio, leading_integral_target, e_matrix, e_matrix_at_one, e_one_expected,
    k0_moment_check, n_matrix, endpoint_correction_from_integral,
};
use logorth::recurrence::{jacobi_0_1_exact, legendre_exact, modified_chebyshev, stieltjes_discretized, RecurrenceTable};
use logorth::szego::{cancellation_record, f_infinity, f_infinity_richardson, szego_boundary, szego_f};
use logorth::table_io::{to_csv, to_document, ARTIFACT_VERSION};
use logorth::weights::eval_weight;
use logorth::{Error, WeightSpec};

#[derive(Parser)]
#[command(name = "logorth", version, about = "Orthogonal polynomials for the weight log(2k/(1-x)) on (-1, 1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recurrence coefficients a_n, b_n for n < n-max
    Coeffs(CommonArgs),
    /// Extract the constant C from the (n log n)^-2 residuals and compare with -3/32
    Verify(CommonArgs),
    /// Szegő function checks: F+F- = w and the cancellation near x = 1
    SzegoCheck(CommonArgs),
    /// Bessel parametrix checks: K0 moment, Wronskian, E(1), det E
    ParametrixCheck(CommonArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightArg {
    Log,
    Legendre,
    /// -log x on [0, 1], the k = 1 weight after x -> (1 - x)/2 (needs --exploratory)
    Magnus01,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// The constant k > 1; decimals, "e" and "pi" are accepted
    #[arg(long, default_value = "2")]
    k: String,
    #[arg(long, value_enum, default_value_t = WeightArg::Log)]
    weight: WeightArg,
    /// coeffs: number of rows; verify: largest n in the fit
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 512)]
    precision_bits: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// coeffs: also run the Stieltjes procedure and report the difference
    #[arg(long)]
    cross_check: bool,
    /// verify: allowed |C_hat - C|
    #[arg(long, default_value = "0.01")]
    tolerance: f64,
    /// verify: smallest n in the fit
    #[arg(long, default_value_t = 100)]
    fit_lo: u64,
    /// parametrix-check: evaluate the leading endpoint integral J(n) at these n (slow)
    #[arg(long, value_delimiter = ',')]
    integral_n: Vec<u64>,
    /// Allow k = 1 and the magnus01 weight
    #[arg(long)]
    exploratory: bool,
}

enum Failure {
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

type CmdResult = Result<bool, Failure>;

const COEFFS_DEFAULT_N: usize = 100;
const VERIFY_DEFAULT_N: usize = 400;
const CROSS_CHECK_TOL: f64 = 1e-25;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Coeffs(a) => validate(a).and_then(|_| cmd_coeffs(a)),
        Command::Verify(a) => validate(a).and_then(|_| cmd_verify(a)),
        Command::SzegoCheck(a) => validate(a).and_then(|_| cmd_szego_check(a)),
        Command::ParametrixCheck(a) => validate(a).and_then(|_| cmd_parametrix_check(a)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn validate(a: &CommonArgs) -> Result<(), Failure> {
    if !(128..=4096).contains(&a.precision_bits) {
        return Err(Failure::Numerical(format!(
            "precision-bits must lie in [128, 4096], got {}",
            a.precision_bits
        )));
    }
    if let Some(n) = a.n_max {
        if n == 0 || n > 2000 {
            return Err(Failure::Numerical(format!("n-max must lie in [1, 2000], got {n}")));
        }
    }
    if a.weight == WeightArg::Magnus01 && !a.exploratory {
        return Err(Failure::Numerical("the magnus01 weight needs --exploratory".into()));
    }
    if a.tolerance.is_nan() || a.tolerance < 0.0 {
        return Err(Failure::Numerical("tolerance must be non-negative".into()));
    }
    weight_spec(a).map(|_| ())
}

fn weight_spec(a: &CommonArgs) -> Result<WeightSpec, Failure> {
    let prec = a.precision_bits;
    match a.weight {
        WeightArg::Legendre => Ok(WeightSpec::legendre()),
        WeightArg::Magnus01 => Ok(WeightSpec::log_exploratory(Float::with_val(prec, 1))?),
        WeightArg::Log => {
            let k = parse_decimal(&a.k, prec)
                .ok_or_else(|| Failure::Numerical(format!("cannot parse k = {:?}", a.k)))?;
            if a.exploratory {
                Ok(WeightSpec::log_exploratory(k)?)
            } else {
                Ok(WeightSpec::log(k)?)
            }
        }
    }
}

fn weight_name(w: WeightArg) -> &'static str {
    match w {
        WeightArg::Log => "log",
        WeightArg::Legendre => "legendre",
        WeightArg::Magnus01 => "magnus01",
    }
}

fn config_json(command: &str, a: &CommonArgs, n_max: usize) -> Value {
    json!({
        "command": command,
        "weight": weight_name(a.weight),
        "k": if a.weight == WeightArg::Log { Value::from(a.k.clone()) } else { Value::Null },
        "n_max": n_max,
        "precision_bits": a.precision_bits,
        "format": match a.format { Format::Json => "json", Format::Csv => "csv" },
        "cross_check": a.cross_check,
        "tolerance": a.tolerance,
        "fit_lo": a.fit_lo,
        "integral_n": a.integral_n,
        "exploratory": a.exploratory,
    })
}

fn emit(a: &CommonArgs, text: &str) -> Result<(), Failure> {
    match &a.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn emit_json(a: &CommonArgs, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    emit(a, &s)
}

fn chebyshev_table(weight: &WeightSpec, n: usize, prec: u32) -> Result<RecurrenceTable, Failure> {
    let m = modified_moments_closed_form(weight, n, prec)?;
    Ok(modified_chebyshev(&m, n)?)
}

fn cmd_coeffs(a: &CommonArgs) -> CmdResult {
    let n = a.n_max.unwrap_or(COEFFS_DEFAULT_N);
    let prec = a.precision_bits;
    let weight = weight_spec(a)?;
    let table = chebyshev_table(&weight, n, prec)?;
    let oracle = if a.cross_check {
        Some(stieltjes_discretized(&weight, n, (16 * n).max(1000), prec)?)
    } else {
        None
    };
    let difference = oracle.as_ref().map(|o| table.max_difference(o, n));
    let agree = difference.as_ref().is_none_or(|d| d.to_f64() <= CROSS_CHECK_TOL);

    match a.format {
        Format::Json => {
            let mut doc = json!({
                "artifact_version": ARTIFACT_VERSION,
                "config": config_json("coeffs", a, n),
                "table": to_document(&table),
            });
            if let (Some(o), Some(d)) = (&oracle, &difference) {
                doc["cross_check"] = json!({
                    "table": to_document(o),
                    "max_difference": to_decimal(d),
                    "tolerance": CROSS_CHECK_TOL,
                    "pass": agree,
                });
            }
            if a.weight == WeightArg::Magnus01 {
                doc["interval_01"] = interval_01_rows(&table);
            }
            emit_json(a, &doc)?;
        }
        Format::Csv => {
            let mut s = format!(
                "# artifact_version: {ARTIFACT_VERSION}\n# config: {}\n",
                config_json("coeffs", a, n)
            );
            s.push_str(&to_csv(&table));
            if let (Some(o), Some(d)) = (&oracle, &difference) {
                s.push_str(&format!("\n# max_difference: {}\n", to_decimal(d)));
                s.push_str(&to_csv(o));
            }
            emit(a, &s)?;
        }
    }
    if !agree {
        eprintln!("error: the two methods differ by more than {CROSS_CHECK_TOL:e}");
    }
    Ok(agree)
}

/// Coefficients for `-log x` on `[0, 1]`: `a = (1 - a_t)/2`, `b = b_t/2`.
fn interval_01_rows(t: &RecurrenceTable) -> Value {
    let rows: Vec<Value> = (0..t.len())
        .map(|n| {
            let a = Float::with_val(t.precision_bits, 1u32 - &t.a[n]) / 2u32;
            let b = Float::with_val(t.precision_bits, &t.b[n] / 2u32);
            json!({"n": n, "a": to_decimal(&a), "b": to_decimal(&b)})
        })
        .collect();
    Value::Array(rows)
}

fn cmd_verify(a: &CommonArgs) -> CmdResult {
    let n_max = a.n_max.unwrap_or(VERIFY_DEFAULT_N);
    let prec = a.precision_bits;
    let weight = weight_spec(a)?;
    // Rows 0..=n_max so the fit reaches n_max.
    let rows = n_max + 1;
    if (a.fit_lo as usize) > n_max {
        return Err(Error::FitRange(format!("[{}, {n_max}] is empty", a.fit_lo)).into());
    }
    let table = chebyshev_table(&weight, rows, prec)?;
    let (ref_a, ref_b) = match a.weight {
        WeightArg::Magnus01 => jacobi_0_1_exact(rows, prec),
        _ => {
            let t = legendre_exact(rows, prec);
            (t.a, t.b)
        }
    };
    let (target, scale, reference_name) = match a.weight {
        WeightArg::Log => (C_THEOREM, 1.0, "legendre"),
        WeightArg::Legendre => (0.0, 1.0, "legendre"),
        // On [0, 1] both residuals are half those of the k = 1 weight on (-1, 1).
        WeightArg::Magnus01 => (C_MAGNUS, 0.5, "jacobi(0, 1)"),
    };
    let r_b = residual_series_against(&table, &ref_a, &ref_b, Target::B)?;
    let r_a = residual_series_against(&table, &ref_a, &ref_b, Target::A)?;
    let scaled = |s: Vec<(u64, f64)>| -> Vec<(u64, f64)> { s.into_iter().map(|(n, r)| (n, r * scale)).collect() };
    let (r_b, r_a) = (scaled(r_b), scaled(r_a));

    let fit_b = fit_constant(&restrict(&r_b, a.fit_lo, n_max as u64))?;
    let fit_a = fit_constant(&restrict(&r_a, a.fit_lo, n_max as u64))?;
    let tol_a = 1.5 * a.tolerance;
    let pass_b = (fit_b.c_hat - target).abs() <= a.tolerance;
    let pass_a = (fit_a.c_hat - target).abs() <= tol_a;
    let fit_json = |f: &logorth::asymptotics::FitResult, tol: f64, pass: bool| {
        json!({
            "c_hat": f.c_hat,
            "d_hat": f.d_hat,
            "rms_residual": f.rms_residual,
            "n_range": [f.n_range.0, f.n_range.1],
            "count": f.count,
            "target": target,
            "deviation": f.c_hat - target,
            "tolerance": tol,
            "pass": pass,
        })
    };
    let residuals: Vec<Value> = r_b
        .iter()
        .zip(&r_a)
        .map(|(&(n, b), &(_, av))| json!({"n": n, "r_b": b, "r_a": av}))
        .collect();
    let doc = json!({
        "artifact_version": ARTIFACT_VERSION,
        "config": config_json("verify", a, n_max),
        "reference": reference_name,
        "fit_b": fit_json(&fit_b, a.tolerance, pass_b),
        "fit_a": fit_json(&fit_a, tol_a, pass_a),
        "pass": pass_b,
        "residuals": residuals,
    });
    emit_json(a, &doc)?;
    eprintln!(
        "C_hat (b) = {:.6}, C_hat (a) = {:.6}, target {:.6}: {}",
        fit_b.c_hat,
        fit_a.c_hat,
        target,
        if pass_b { "PASS" } else { "FAIL" }
    );
    Ok(pass_b)
}

fn record(name: &str, measured: Value, target: Value, error: f64, tolerance: f64) -> (Value, bool) {
    let pass = error <= tolerance;
    (
        json!({
            "check": name,
            "measured": measured,
            "target": target,
            "error": error,
            "tolerance": tolerance,
            "pass": pass,
        }),
        pass,
    )
}

fn complex_json(z: &Complex) -> Value {
    json!({"re": to_decimal(z.real()), "im": to_decimal(z.imag())})
}

fn finish_checks(a: &CommonArgs, command: &str, n_max: usize, records: Vec<(Value, bool)>) -> CmdResult {
    let pass = records.iter().all(|r| r.1);
    let doc = json!({
        "artifact_version": ARTIFACT_VERSION,
        "config": config_json(command, a, n_max),
        "checks": records.into_iter().map(|r| r.0).collect::<Vec<_>>(),
        "pass": pass,
    });
    emit_json(a, &doc)?;
    Ok(pass)
}

fn cmd_szego_check(a: &CommonArgs) -> CmdResult {
    let prec = a.precision_bits;
    let weight = weight_spec(a)?;
    let mut records = Vec::new();

    // F+ F- = w, approaching the cut from distance 1e-10.
    let eps = Float::with_val(prec, 1e-10);
    for x in [-0.9, 0.0, 0.9] {
        let xf = Float::with_val(prec, x);
        let bv = szego_boundary(&weight, &xf, &eps, prec)?;
        let prod = Complex::with_val(prec, &bv.plus * &bv.minus);
        let w = eval_weight(&weight, &xf)?;
        let err = Complex::with_val(prec, &prod - &w).abs().real().to_f64() / w.to_f64().abs().max(1e-300);
        records.push(record(
            &format!("F+F- = w at x = {x}"),
            complex_json(&prod),
            Value::from(to_decimal(&w)),
            err,
            1e-6,
        ));
    }

    if weight.is_legendre() {
        for (re, im) in [(2.0, 0.0), (0.3, 0.5), (-1.5, -0.25)] {
            let f = szego_f(&weight, &Complex::with_val(prec, (re, im)), prec)?.f;
            let err = Complex::with_val(prec, &f - 1u32).abs().real().to_f64();
            records.push(record(
                &format!("F = 1 at z = {re}{im:+}i"),
                complex_json(&f),
                Value::from("1"),
                err,
                1e-30,
            ));
        }
    } else {
        let exact = f_infinity(&weight, prec)?;
        let (est, f1) = f_infinity_richardson(&weight, &Float::with_val(prec, 1e6), prec)?;
        let err = Float::with_val(prec, &exact - &est).abs().to_f64();
        let (mut rec, pass) = record("F at infinity", Value::from(to_decimal(&est)), Value::from(to_decimal(&exact)), err, 1e-10);
        rec["f_1"] = Value::from(to_decimal(&f1));
        records.push((rec, pass));

        // D log²(2k/(x-1)) -> -3π² with a deviation shrinking as x -> 1.
        let mut previous: Option<f64> = None;
        for e in [12, 24, 48] {
            let gap = logorth::numeric::pow10(prec, -e);
            let rec = cancellation_record(&weight, &gap, prec)?;
            let deviation = (rec.ratio().to_f64() - 1.0).abs();
            let (mut v, mut pass) = record(
                &format!("cancellation at x - 1 = 1e-{e}"),
                complex_json(&rec.d_times_log2),
                Value::from(to_decimal(&rec.target)),
                deviation,
                0.15,
            );
            v["x_minus_1"] = Value::from(format!("1e-{e}"));
            v["D"] = complex_json(&rec.d);
            if let Some(prev) = previous {
                let shrink = prev / deviation;
                v["shrink_factor"] = Value::from(shrink);
                pass &= shrink >= 1.7;
                v["pass"] = Value::from(pass);
            }
            previous = Some(deviation);
            records.push((v, pass));
        }
    }
    finish_checks(a, "szego-check", 0, records)
}

fn cmd_parametrix_check(a: &CommonArgs) -> CmdResult {
    let prec = a.precision_bits;
    let mut records = Vec::new();

    let m = k0_moment_check(prec)?;
    let err = Float::with_val(prec, &m - 0.5f64).abs().to_f64();
    records.push(record("integral of K0(v)^2 v", Value::from(to_decimal(&m)), Value::from("0.5"), err, 1e-12));

    let cut = asymptotic_cutover(prec + logorth::numeric::GUARD_BITS);
    for x in [0.5, 5.0, 0.9 * cut, 1.1 * cut] {
        let xf = Float::with_val(prec, x);
        let w = wronskian_i0_k0(&xf)?;
        let err = (Float::with_val(prec, &w * &xf) + 1u32).abs().to_f64();
        records.push(record(
            &format!("Wronskian times x at x = {x}"),
            Value::from(to_decimal(&Float::with_val(prec, &w * &xf))),
            Value::from("-1"),
            err,
            1e-20,
        ));
    }

    let e1 = e_matrix_at_one(prec);
    let err = e1.max_distance(&e_one_expected(prec)).to_f64();
    records.push(record(
        "E(1) = (1/sqrt 2)[[1, -i], [-i, 1]]",
        Value::Array(e1.m.iter().flatten().map(complex_json).collect()),
        Value::from("(1/sqrt 2)[[1, -i], [-i, 1]]"),
        err,
        1e-6,
    ));

    // det E = det N = 1 on a ring around 1.
    let mut worst = 0.0f64;
    for j in 0..24 {
        let t = (j as f64 + 0.5) * std::f64::consts::TAU / 24.0;
        let r = 0.1 + 0.3 * (j % 3) as f64 / 2.0;
        let z = Complex::with_val(prec, (1.0 + r * t.cos(), r * t.sin()));
        for d in [e_matrix(&z)?.det(), n_matrix(&z)?.det()] {
            worst = worst.max(Complex::with_val(prec, &d - 1u32).abs().real().to_f64());
        }
    }
    let tol = 2f64.powi(-(prec.min(1000) as i32) + 16);
    records.push(record("det E = det N = 1 at 24 points", Value::from(worst), Value::from(1), worst, tol));

    if !a.integral_n.is_empty() {
        let weight = weight_spec(a)?;
        for &n in &a.integral_n {
            if n < 2 {
                return Err(Failure::Numerical("integral-n values must be at least 2".into()));
            }
            let j = leading_endpoint_integral(&weight, n, prec)?;
            let ratio = leading_integral_ratio(&j, n);
            let err = Complex::with_val(prec, &ratio - 1u32).abs().real().to_f64();
            let (mut v, pass) = record(
                &format!("J(n) times 16 pi i n^2 log^2 n / 3 at n = {n}"),
                complex_json(&ratio),
                Value::from(1),
                err,
                0.25,
            );
            v["n"] = Value::from(n);
            v["J"] = complex_json(&j);
            v["J_target"] = complex_json(&leading_integral_target(n, prec));
            let corr = endpoint_correction_from_integral(&j, n, prec);
            let entry_ratio = Complex::with_val(prec, &corr.m[0][1] / &corr.m[0][0]);
            v["correction_entry_ratio"] = complex_json(&entry_ratio);
            v["correction_trace"] = complex_json(&corr.trace());
            records.push((v, pass));
        }
    }
    finish_checks(a, "parametrix-check", 0, records)
}
