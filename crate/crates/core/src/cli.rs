//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 infeasible instance.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{exact_mkc, exact_p, DEFAULT_MKC_CAP, DEFAULT_P_CAP};
use crate::formulation::{
    build_eps_1mkc, build_uniform_perfect, emit_lp, hull_y, HullYParams, PieceIndex, UniformInstance, DEFAULT_PIECE_CAP,
};
use crate::fptas::{one_mkc_fptas, p1_fptas, FptasConfig, PolyEta};
use crate::instance::{generate, CoverInstance, GenConfig, MkcInstance, Sense};
use crate::ptas::{mkc_ptas, mkp_ptas, p_ptas, PtasConfig};
use crate::rational::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "covermip",
    version,
    about = "Exact and approximate solvers for covering and packing MIPs with fixed charges"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Ptas,
    Fptas,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Perfect,
    Approx,
    HullY,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SenseArg {
    Cover,
    Pack,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a random instance as JSON.
    Gen {
        /// Number of items.
        #[arg(long)]
        n: usize,
        /// Number of constraint rows.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        /// Largest cost or bound coefficient.
        #[arg(long, default_value_t = 10)]
        coeff_max: i64,
        #[arg(long, value_enum, default_value = "cover")]
        sense: SenseArg,
    },
    /// Solve an instance and print a JSON report.
    Solve {
        /// Instance JSON, either the full problem or a knapsack subproblem.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Accuracy as an integer, `p/q` or decimal; required by ptas and fptas.
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<Rational>,
        /// Cost-spread polynomial for fptas: `eta`, `eta^2` or `const:k`.
        #[arg(long, value_parser = parse_poly, default_value = "eta")]
        poly_eta: PolyEta,
        /// Report a wall time of zero so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Write an LP file.
    Emit {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Instance JSON for `perfect` and `approx`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Accuracy for `approx`.
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<Rational>,
        /// Right-hand side for `hull-y`.
        #[arg(long, value_parser = parse_rational)]
        delta: Option<Rational>,
        /// Bound on the continuous variable for `hull-y`, in (0, 1].
        #[arg(long, value_parser = parse_rational)]
        sigma: Option<Rational>,
        /// Number of binary variables for `hull-y`.
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run every applicable method and check the approximation ratios.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Rational,
        #[arg(long, value_parser = parse_poly, default_value = "eta")]
        poly_eta: PolyEta,
        /// Report a wall time of zero so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_epsilon(s: &str) -> std::result::Result<Rational, String> {
    let r = parse_rational(s)?;
    if r.is_positive() {
        Ok(r)
    } else {
        Err(format!("epsilon must be positive, got {r}"))
    }
}

fn parse_poly(s: &str) -> std::result::Result<PolyEta, String> {
    s.parse::<PolyEta>().map_err(|e| e.to_string())
}

enum Input {
    P(CoverInstance),
    Mkc(MkcInstance),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path)?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if raw.get("eta").is_some() {
        Ok(Input::Mkc(MkcInstance::from_json(&text)?))
    } else {
        Ok(Input::P(CoverInstance::from_json(&text)?))
    }
}

fn rational_json(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string(), "decimal": r.to_decimal_string() })
}

#[derive(Debug, Serialize)]
struct RunReport {
    method: String,
    value: Value,
    certified_ratio: Option<Value>,
    wall_time_ms: u64,
    solution: Value,
    warnings: Vec<String>,
}

struct Outcome {
    value: Rational,
    ratio: Option<Rational>,
    solution: Value,
    warnings: Vec<String>,
}

fn run_method(input: &Input, method: Method, epsilon: Option<&Rational>, poly: PolyEta) -> Result<Outcome> {
    let need_eps =
        || epsilon.cloned().ok_or_else(|| Error::Precondition("--epsilon is required for this method".into()));
    match (input, method) {
        (Input::P(inst), Method::Exact) => {
            let sol = exact_p(inst, DEFAULT_P_CAP)?.ok_or_else(|| Error::Infeasible("no feasible selection".into()))?;
            Ok(Outcome {
                value: sol.value.clone(),
                ratio: Some(Rational::one()),
                solution: to_value(&sol),
                warnings: vec![],
            })
        }
        (Input::Mkc(inst), Method::Exact) => {
            let sol =
                exact_mkc(inst, DEFAULT_MKC_CAP)?.ok_or_else(|| Error::Infeasible("no feasible selection".into()))?;
            Ok(Outcome {
                value: sol.value.clone(),
                ratio: Some(Rational::one()),
                solution: to_value(&sol),
                warnings: vec![],
            })
        }
        (Input::P(inst), Method::Ptas) => {
            let eps = need_eps()?;
            let sol = p_ptas(inst, &PtasConfig::new(eps.clone())?)?;
            Ok(Outcome {
                value: sol.value.clone(),
                ratio: Some(Rational::one() + eps),
                solution: to_value(&sol),
                warnings: vec![],
            })
        }
        (Input::Mkc(inst), Method::Ptas) => {
            let eps = need_eps()?;
            let cfg = PtasConfig::new(eps.clone())?;
            if !inst.is_feasible() {
                return Err(Error::Infeasible("the instance admits no feasible selection".into()));
            }
            let sol = match inst.sense {
                Sense::Cover => mkc_ptas(inst, &cfg)?,
                Sense::Pack => mkp_ptas(inst, &cfg)?,
            };
            Ok(Outcome {
                value: sol.value.clone(),
                ratio: Some(Rational::one() + eps),
                solution: to_value(&sol),
                warnings: vec![],
            })
        }
        (Input::P(inst), Method::Fptas) => {
            let eps = need_eps()?;
            let mut cfg = FptasConfig::new(eps.clone())?;
            cfg.poly_eta = poly;
            let out = p1_fptas(inst, &cfg)?;
            let ratio = if out.all_lambda_one {
                Some(Rational::one())
            } else if out.hypothesis_holds {
                Some(Rational::one() + eps)
            } else {
                None
            };
            Ok(Outcome {
                value: out.solution.value.clone(),
                ratio,
                solution: to_value(&out.solution),
                warnings: out.warnings,
            })
        }
        (Input::Mkc(inst), Method::Fptas) => {
            let eps = need_eps()?;
            let mut cfg = FptasConfig::new(eps.clone())?;
            cfg.poly_eta = poly;
            let out = one_mkc_fptas(inst, &cfg)?;
            let fmax = inst.fbar.iter().copied().max().unwrap_or(0);
            let fmin = inst.fbar.iter().copied().min().unwrap_or(0);
            let spread_ok = fmax == 0 || (fmin > 0 && Rational::new(fmax, fmin) <= poly.eval(inst.eta));
            let mut warnings = Vec::new();
            let ratio = if out.lambda.is_one() {
                Some(Rational::one())
            } else if spread_ok {
                Some(Rational::one() + eps)
            } else {
                warnings.push(format!(
                    "cost spread f_max/f_min exceeds poly(η) = {}; the (1+ε) bound is not certified",
                    poly.eval(inst.eta)
                ));
                None
            };
            Ok(Outcome { value: out.solution.value.clone(), ratio, solution: to_value(&out.solution), warnings })
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("solutions serialize")
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Ptas => "ptas",
        Method::Fptas => "fptas",
    }
}

fn report(method: Method, out: Outcome, elapsed_ms: u64) -> RunReport {
    RunReport {
        method: method_name(method).into(),
        value: rational_json(&out.value),
        certified_ratio: out.ratio.as_ref().map(rational_json),
        wall_time_ms: elapsed_ms,
        solution: out.solution,
        warnings: out.warnings,
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn elapsed(start: Instant, no_timing: bool) -> u64 {
    if no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    }
}

fn cmd_gen(n: usize, m: usize, seed: u64, coeff_max: i64, sense: SenseArg, out: &mut dyn Write) -> Result<()> {
    if coeff_max < 1 || n == 0 || m == 0 {
        return Err(Error::Precondition("n, m and coeff-max must be at least 1".into()));
    }
    let sense = match sense {
        SenseArg::Cover => Sense::Cover,
        SenseArg::Pack => Sense::Pack,
    };
    let inst = generate(&GenConfig { seed, n, m, coeff_max, sense })?;
    out.write_all(inst.to_json().as_bytes())?;
    Ok(())
}

fn cmd_solve(
    input: &Path,
    method: Method,
    epsilon: Option<&Rational>,
    poly: PolyEta,
    no_timing: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let inst = read_input(input)?;
    if let (Input::P(p), Method::Fptas) = (&inst, method) {
        if p.m != 1 {
            return Err(Error::Precondition(format!("fptas needs a one-row instance, this one has m = {}", p.m)));
        }
    }
    let start = Instant::now();
    let outcome = run_method(&inst, method, epsilon, poly)?;
    let rep = report(method, outcome, elapsed(start, no_timing));
    out.write_all(pretty(&rep).as_bytes())?;
    Ok(())
}

struct EmitArgs<'a> {
    kind: Kind,
    input: Option<&'a Path>,
    epsilon: Option<&'a Rational>,
    delta: Option<&'a Rational>,
    sigma: Option<&'a Rational>,
    nu: Option<usize>,
    output: &'a Path,
}

fn cmd_emit(a: EmitArgs<'_>, out: &mut dyn Write) -> Result<()> {
    let need_input = || a.input.ok_or_else(|| Error::Precondition("--input is required for this kind".into()));
    let (model, extra) = match a.kind {
        Kind::HullY => {
            let missing = || Error::Precondition("hull-y needs --delta, --sigma and --nu".into());
            let params = HullYParams {
                delta: a.delta.ok_or_else(missing)?.clone(),
                sigma: a.sigma.ok_or_else(missing)?.clone(),
                nu: a.nu.ok_or_else(missing)?,
            };
            (hull_y(&params)?, String::new())
        }
        Kind::Perfect => {
            let inst = match read_input(need_input()?)? {
                Input::P(p) => p,
                Input::Mkc(_) => return Err(Error::Precondition("perfect needs a one-row uniform instance".into())),
            };
            let u = UniformInstance::from_cover(&inst)?;
            let model = build_uniform_perfect(&u)?;
            let pieces = PieceIndex::new(&u).count();
            (model, format!(", {pieces} pieces"))
        }
        Kind::Approx => {
            let eps = a.epsilon.ok_or_else(|| Error::Precondition("approx needs --epsilon".into()))?;
            let inst = match read_input(need_input()?)? {
                Input::Mkc(k) => k,
                Input::P(_) => {
                    return Err(Error::Precondition("approx needs a one-dimensional knapsack cover instance".into()))
                }
            };
            let f = build_eps_1mkc(&inst, eps, DEFAULT_PIECE_CAP)?;
            let extra = format!(", {} polyhedra of {} candidates", f.pieces.len(), f.candidates);
            (f.model, extra)
        }
    };
    let text = emit_lp(&model)?;
    std::fs::write(a.output, text)?;
    writeln!(
        out,
        "wrote {}: {} variables, {} constraints{extra}",
        a.output.display(),
        model.num_vars(),
        model.num_constraints()
    )?;
    Ok(())
}

/// Exit code of `check`: 0 when every certified ratio holds.
fn cmd_check(input: &Path, eps: &Rational, poly: PolyEta, no_timing: bool, out: &mut dyn Write) -> Result<i32> {
    let inst = read_input(input)?;
    let (sense, fptas_ok) = match &inst {
        Input::P(p) => (p.sense, p.m == 1 && p.sense == Sense::Cover),
        Input::Mkc(k) => (k.sense, k.mu == 1 && k.sense == Sense::Cover),
    };
    let mut methods = vec![Method::Exact, Method::Ptas];
    if fptas_ok {
        methods.push(Method::Fptas);
    }
    let mut reports = Vec::new();
    let mut outcomes = Vec::new();
    for &m in &methods {
        let start = Instant::now();
        let o = run_method(&inst, m, Some(eps), poly)?;
        outcomes.push((m, o.value.clone(), o.ratio.clone()));
        reports.push(report(m, o, elapsed(start, no_timing)));
    }
    let opt = outcomes[0].1.clone();
    let mut checks = Vec::new();
    let mut all_ok = true;
    for (m, value, ratio) in outcomes.iter().skip(1) {
        let (holds, bound) = match ratio {
            Some(r) => {
                let ok = match sense {
                    Sense::Cover => *value <= r * &opt,
                    Sense::Pack => r * value >= opt,
                };
                (Some(ok), Some(rational_json(r)))
            }
            None => (None, None),
        };
        all_ok &= holds.unwrap_or(true);
        checks.push(json!({
            "method": method_name(*m),
            "ratio_to_exact": if opt.is_zero() { Value::Null } else { rational_json(&(value / &opt)) },
            "certified_ratio": bound,
            "holds": holds,
        }));
    }
    let doc = json!({ "reports": reports, "checks": checks, "all_hold": all_ok });
    out.write_all(pretty(&doc).as_bytes())?;
    Ok(if all_ok { 0 } else { 1 })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => 2,
        _ => 1,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen { n, m, seed, coeff_max, sense } => cmd_gen(n, m, seed, coeff_max, sense, out).map(|_| 0),
        Command::Solve { input, method, epsilon, poly_eta, no_timing } => {
            cmd_solve(&input, method, epsilon.as_ref(), poly_eta, no_timing, out).map(|_| 0)
        }
        Command::Emit { kind, input, epsilon, delta, sigma, nu, output } => cmd_emit(
            EmitArgs {
                kind,
                input: input.as_deref(),
                epsilon: epsilon.as_ref(),
                delta: delta.as_ref(),
                sigma: sigma.as_ref(),
                nu,
                output: &output,
            },
            out,
        )
        .map(|_| 0),
        Command::Check { input, epsilon, poly_eta, no_timing } => cmd_check(&input, &epsilon, poly_eta, no_timing, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
