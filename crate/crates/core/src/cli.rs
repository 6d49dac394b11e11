//! Command-line front end. Every command produces one JSON document
//! `{"command", "inputs", "result", "mode", "residual", "warnings"}` and an
//! exit code: 0 on success or pass, 1 on failure or rejection, 2 on bad input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::ckwords::{normalize, parse_word, NormalForm};
use crate::classify::{
    afd_tensor_rule, detect_lambda, exponent_over, iii1_family, power_type_ck2, power_type_direct, tensor_type,
    Mode, TypeLabel,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::matrix01::ZeroOneMatrix;
use crate::par::Execution;
use crate::perron::{
    canonical_point, characteristic_polynomial, in_lambda, perron_root, pf_data, solve_beta, solve_power_equation,
    Certificate, FrequencyVector, Membership, NonnegMatrix, ParamVector, DEFAULT_MAX_ITERATIONS,
};
use crate::report::reproduce;
use crate::scalars::{parse_rational, Interval, Scalar};
use crate::states::{eval_state, kms_check, kms_sweep, Enclosed, StateSpec};
use crate::tensorops::{
    check_coassociativity, product_spec, tensor_state_eval_nf, verify_tensor_identity, IndexSplit,
};

#[derive(Parser, Debug)]
#[command(name = "cuntz-kms", version, about = "KMS states on Cuntz-Krieger algebras and their type labels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Acceptance tolerance for membership, identities and residuals.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Target width of eigenvalue and root enclosures.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub precision: f64,
    /// Longest word used by verification sweeps (at most 8).
    #[arg(long, global = true, default_value_t = 3)]
    pub max_word_len: usize,
    /// Largest matrix or vector dimension built by Kronecker products.
    #[arg(long, global = true, default_value_t = 4096)]
    pub dimension_cap: usize,
    /// Largest denominator trusted by the continued-fraction route.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub denominator_bound: u64,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the document to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// A vector given either directly or as powers of one base.
#[derive(Args, Debug, Clone)]
pub struct VectorArgs {
    /// JSON array of scalars, or comma-separated rationals such as `1/2,1/2`.
    #[arg(long)]
    pub vector: Option<String>,
    /// Base scalar of a power-form vector (with --exponents).
    #[arg(long)]
    pub base: Option<String>,
    /// Comma-separated exponents of a power-form vector.
    #[arg(long)]
    pub exponents: Option<String>,
}

/// A state `ρ_a` over one matrix.
#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// Matrix: shorthand `F3`, a JSON rows array, or {"n":…, "rows":…}.
    #[arg(long)]
    pub matrix: String,
    /// The point a ∈ Λ(A).
    #[arg(long, conflicts_with_all = ["omega", "canonical"])]
    pub vector: Option<String>,
    /// Frequencies ω; a comes from the inverse-temperature solve.
    #[arg(long, conflicts_with = "canonical")]
    pub omega: Option<String>,
    /// Use e(A) = (1/c_A, …, 1/c_A).
    #[arg(long)]
    pub canonical: bool,
}

/// Two states, for tensor-product commands.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    pub matrix_a: String,
    #[arg(long)]
    pub vector_a: Option<String>,
    #[arg(long)]
    pub omega_a: Option<String>,
    #[arg(long)]
    pub matrix_b: String,
    #[arg(long)]
    pub vector_b: Option<String>,
    #[arg(long)]
    pub omega_b: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// The label λ(a) of a vector.
    Classify {
        #[command(flatten)]
        vector: VectorArgs,
        /// Certify membership of the vector in Λ(A) for this matrix.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// The label λ(a⊠b).
    TensorType {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The label of a^{⊠k}: from the formula for (x^p, x^q), directly, or both.
    PowerType {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        q: Option<u32>,
        #[command(flatten)]
        vector: VectorArgs,
    },
    /// The label of a tensor product of factors with labels λ and μ.
    AfdRule {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
    /// Rational vectors with label 1 in every dimension n ≥ 2.
    Iii1Family {
        #[arg(long)]
        n: usize,
    },
    /// Perron-Frobenius eigenvalue and eigenvector of A or diag(scale)·A.
    Pf {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        scale: Option<String>,
    },
    /// The inverse temperature β with PFE(diag(e^{-βω})·A) = 1.
    SolveBeta {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        omega: String,
    },
    /// Whether PFE(diag(a)·A) = 1.
    Membership {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        vector: String,
    },
    /// ρ_a of a word or a normal form.
    StateEval {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, conflicts_with = "nf")]
        word: Option<String>,
        /// Normal form as JSON [{"J":[…],"K":[…],"coeff":…}].
        #[arg(long)]
        nf: Option<String>,
    },
    /// The KMS condition for one pair of words, or for all short monomials.
    KmsCheck {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        omega: String,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// (ρ_a ⊗_φ ρ_b) of a word over A⊠B, next to ρ_{a⊠b}.
    TensorState {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        word: String,
    },
    /// ρ_a ⊗_φ ρ_b = ρ_{a⊠b} on all monomials up to --max-word-len.
    VerifyHomomorphism {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Index-level coassociativity of the embedding for three dimensions.
    Coassoc {
        /// Comma-separated dimensions, e.g. `2,3,2`.
        #[arg(long)]
        dims: String,
    },
    /// Reduce a word to the s_J s_K* basis.
    Normalize {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        word: String,
    },
    /// Recompute every worked example and compare with its stated value.
    ReproducePaper,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::TensorType { .. } => "tensor-type",
            Command::PowerType { .. } => "power-type",
            Command::AfdRule { .. } => "afd-rule",
            Command::Iii1Family { .. } => "iii1-family",
            Command::Pf { .. } => "pf",
            Command::SolveBeta { .. } => "solve-beta",
            Command::Membership { .. } => "membership",
            Command::StateEval { .. } => "state-eval",
            Command::KmsCheck { .. } => "kms-check",
            Command::TensorState { .. } => "tensor-state",
            Command::VerifyHomomorphism { .. } => "verify-homomorphism",
            Command::Coassoc { .. } => "coassoc",
            Command::Normalize { .. } => "normalize",
            Command::ReproducePaper => "reproduce-paper",
        }
    }
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            tolerance: self.tolerance,
            precision: self.precision,
            max_word_len: self.max_word_len,
            dimension_cap: self.dimension_cap,
            denominator_bound: self.denominator_bound,
            seed: self.seed,
            execution: if self.sequential { Execution::Sequential } else { Execution::Parallel },
            ..RunConfig::default()
        }
    }
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    pub exit_code: i32,
    /// Plain-text rendering for `--format table`.
    pub table: Option<String>,
}

/// Exit code for a library error.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) | Error::EnumerationOverflow { .. } | Error::DimensionOverflow { .. } => 1,
        _ => 2,
    }
}

/// Formats `x` with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        let decimals = (14 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

pub fn interval_json(i: &Interval) -> Value {
    json!({"lo": i.lo(), "hi": i.hi(), "value": sig15(i.mid()), "width": i.width()})
}

fn enclosed_json(e: &Enclosed) -> Value {
    match e {
        Enclosed::Exact(q) => json!({"exact": q.to_string(), "value": sig15(q.to_f64().unwrap_or(f64::NAN)), "width": 0.0}),
        Enclosed::Interval(i) => interval_json(i),
    }
}

fn scalar_json(s: &Scalar) -> Value {
    json!({"render": s.render(), "value": sig15(s.approx()), "scalar": s.to_json()})
}

fn rational_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// One scalar: a JSON scalar object, a rational `p/q` or decimal, or a
/// JSON number (floats are inexact).
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    if t.starts_with('{') {
        return Scalar::from_json(&parse_json(t, "scalar")?);
    }
    if t.contains(['e', 'E']) {
        let f: f64 = t.parse().map_err(|_| Error::Parse(format!("cannot parse scalar \"{t}\"")))?;
        return Scalar::float(f);
    }
    Ok(Scalar::Rational(parse_rational(t)?))
}

fn scalar_from_value(v: &Value) -> Result<Scalar> {
    match v {
        Value::Object(_) => Scalar::from_json(v),
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Scalar::rational(i, 1)),
            None => Scalar::float(n.as_f64().unwrap_or(f64::NAN)),
        },
        other => Err(Error::Parse(format!("not a scalar: {other}"))),
    }
}

/// A JSON array of scalars, or comma-separated scalars.
pub fn parse_scalar_vector(text: &str) -> Result<Vec<Scalar>> {
    let t = text.trim();
    let out: Vec<Scalar> = if t.starts_with('[') {
        parse_json(t, "vector")?
            .as_array()
            .expect("starts with [")
            .iter()
            .map(scalar_from_value)
            .collect::<Result<_>>()?
    } else {
        t.split(',').map(parse_scalar).collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    Ok(out)
}

fn parse_frequencies(text: &str) -> Result<FrequencyVector> {
    FrequencyVector::from_scalars(&parse_scalar_vector(text)?)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad {what} \"{s}\""))))
        .collect()
}

fn vector_input(v: &VectorArgs) -> Result<Vec<Scalar>> {
    match (&v.vector, &v.base, &v.exponents) {
        (Some(text), None, None) => parse_scalar_vector(text),
        (None, Some(base), Some(exps)) => {
            let base = parse_scalar(base)?;
            let exps: Vec<u32> = parse_list(exps, "exponent")?;
            if exps.contains(&0) {
                return Err(Error::Parse("exponents must be positive".into()));
            }
            Ok(exps.into_iter().map(|e| Scalar::power(base.clone(), e)).collect())
        }
        _ => Err(Error::Parse("give either --vector or both --base and --exponents".into())),
    }
}

fn membership_param(a: &ZeroOneMatrix, v: &[Scalar], tol: f64) -> Result<ParamVector> {
    match in_lambda(a, v, tol)? {
        Membership::Accepted(p) => Ok(p),
        Membership::Rejected { pfe } => Err(Error::Precondition(format!(
            "vector is not in Λ(A): PFE(diag(a)·A) ∈ {pfe}"
        ))),
    }
}

struct BuiltState {
    spec: StateSpec,
    description: Value,
}

fn build_state(
    matrix: &str,
    vector: Option<&str>,
    omega: Option<&str>,
    canonical: bool,
    cfg: &RunConfig,
) -> Result<BuiltState> {
    let a = ZeroOneMatrix::parse(matrix)?;
    let (param, description) = match (vector, omega) {
        (Some(v), None) if !canonical => {
            let p = membership_param(&a, &parse_scalar_vector(v)?, cfg.tolerance)?;
            (p, json!({"source": "vector"}))
        }
        (None, Some(w)) if !canonical => {
            let sol = solve_beta(&a, &parse_frequencies(w)?, cfg.precision)?;
            (sol.param, json!({"source": "omega", "beta": interval_json(&sol.beta)}))
        }
        (None, None) => (canonical_point(&a, cfg.precision)?, json!({"source": "canonical"})),
        _ => return Err(Error::Parse("give at most one of --vector, --omega, --canonical".into())),
    };
    let entries: Vec<Value> = param.entries().iter().map(scalar_json).collect();
    let spec = StateSpec::new(&param, cfg.precision)?;
    let mut description = description;
    description["a"] = Value::Array(entries);
    Ok(BuiltState { spec, description })
}

fn label_mode(l: &TypeLabel) -> &'static str {
    l.mode.as_str()
}

fn doc(command: &str, inputs: Value, result: Value, mode: &str, residual: Value, warnings: Vec<String>) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "result": result,
        "mode": mode,
        "residual": residual,
        "warnings": warnings,
    })
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::ExactByConstruction => json!("exact-by-construction"),
        Certificate::ExactRational => json!("exact-rational"),
        Certificate::Verified { tolerance } => json!({"verified": tolerance}),
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.global.config();
    cfg.validate()?;
    let h = cfg.heuristic();
    let name = cli.command.name();
    let ok = |document: Value| Outcome { document, exit_code: 0, table: None };
    Ok(match &cli.command {
        Command::Classify { vector, matrix } => {
            let a = vector_input(vector)?;
            let label = detect_lambda(&a, &h)?;
            let mut warnings = label.warnings.clone();
            match matrix {
                Some(m) => {
                    let mat = ZeroOneMatrix::parse(m)?;
                    if let Membership::Rejected { pfe } = in_lambda(&mat, &a, cfg.tolerance)? {
                        warnings.push(format!("vector is not in Λ(A) for the given matrix (PFE ∈ {pfe})"));
                    }
                }
                None => warnings.push("membership in Λ(A) was not checked; pass --matrix to certify".into()),
            }
            let inputs = json!({"vector": a.iter().map(Scalar::to_json).collect::<Vec<_>>()});
            ok(doc(name, inputs, label.to_json(), label_mode(&label), Value::Null, warnings))
        }
        Command::TensorType { a, b } => {
            let (va, vb) = (parse_scalar_vector(a)?, parse_scalar_vector(b)?);
            let label = tensor_type(&va, &vb, &h)?;
            let inputs = json!({
                "a": va.iter().map(Scalar::to_json).collect::<Vec<_>>(),
                "b": vb.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            });
            let warnings = label.warnings.clone();
            ok(doc(name, inputs, label.to_json(), label_mode(&label), Value::Null, warnings))
        }
        Command::PowerType { k, p, q, vector } => {
            let mut result = json!({"k": k});
            let mut mode = Mode::Exact;
            let mut consistent = true;
            let mut warnings = Vec::new();
            match (p, q) {
                (Some(p), Some(q)) => {
                    let r = power_type_ck2(u64::from(*p), u64::from(*q), u64::from(*k))?;
                    let x = solve_power_equation(&[*p, *q], cfg.precision)?;
                    let a = vec![Scalar::power(x.clone(), *p), Scalar::power(x.clone(), *q)];
                    result["formula_exponent"] = json!(r);
                    result["x"] = scalar_json(&x);
                    match power_type_direct(&a, *k, cfg.dimension_cap, &h) {
                        Ok(label) => {
                            let direct = exponent_over(&label, &x, &h)?;
                            consistent = direct == Some(r);
                            mode = label.mode;
                            result["direct_exponent"] = json!(direct);
                            result["label"] = label.to_json();
                        }
                        Err(Error::DimensionOverflow { requested, cap }) => {
                            warnings.push(format!(
                                "direct check skipped: 2^k = {requested} exceeds the dimension cap {cap}"
                            ));
                        }
                        Err(e) => return Err(e),
                    }
                    result["consistent"] = json!(consistent);
                }
                (None, None) => {
                    let a = vector_input(vector)?;
                    let label = power_type_direct(&a, *k, cfg.dimension_cap, &h)?;
                    mode = label.mode;
                    warnings.extend(label.warnings.clone());
                    result["label"] = label.to_json();
                }
                _ => return Err(Error::Parse("give both --p and --q, or a vector".into())),
            }
            let inputs = json!({"k": k, "p": p, "q": q});
            Outcome {
                document: doc(name, inputs, result, mode.as_str(), Value::Null, warnings),
                exit_code: if consistent { 0 } else { 1 },
                table: None,
            }
        }
        Command::AfdRule { lambda, mu } => {
            let (l, m) = (parse_scalar(lambda)?, parse_scalar(mu)?);
            let label = afd_tensor_rule(&l, &m, &h)?;
            let inputs = json!({"lambda": l.to_json(), "mu": m.to_json()});
            let warnings = label.warnings.clone();
            ok(doc(name, inputs, label.to_json(), label_mode(&label), Value::Null, warnings))
        }
        Command::Iii1Family { n } => {
            let v = iii1_family(*n)?;
            let scalars: Vec<Scalar> = v.iter().cloned().map(Scalar::Rational).collect();
            let label = detect_lambda(&scalars, &h)?;
            let sum: BigRational = v.iter().sum();
            let result = json!({"vector": rational_strings(&v), "sum": sum.to_string(), "label": label.to_json()});
            ok(doc(name, json!({"n": n}), result, label_mode(&label), Value::Null, vec![]))
        }
        Command::Pf { matrix, scale } => {
            let a = ZeroOneMatrix::parse(matrix)?;
            let (m, exact_root) = match scale {
                None => (NonnegMatrix::from_zero_one(&a), Some(perron_root(&a, cfg.precision)?)),
                Some(s) => {
                    let enc: Vec<Interval> = parse_scalar_vector(s)?.iter().map(|x| x.enclose(cfg.precision * 1e-3)).collect();
                    (NonnegMatrix::scaled_rows(&a, &enc)?, None)
                }
            };
            let pf = pf_data(&m, cfg.precision, DEFAULT_MAX_ITERATIONS)?;
            let mut result = json!({
                "eigenvalue": interval_json(&pf.eigenvalue),
                "eigenvector": pf.eigenvector.iter().map(interval_json).collect::<Vec<_>>(),
                "iterations": pf.iterations,
            });
            if let Some(root) = &exact_root {
                result["perron_root"] = scalar_json(root);
                result["characteristic_polynomial"] =
                    json!(characteristic_polynomial(&a).coeffs().iter().map(ToString::to_string).collect::<Vec<_>>());
            }
            let inputs = json!({"matrix": a.to_json(), "scale": scale});
            ok(doc(name, inputs, result, "enclosure", json!(pf.eigenvalue.width()), vec![]))
        }
        Command::SolveBeta { matrix, omega } => {
            let a = ZeroOneMatrix::parse(matrix)?;
            let w = parse_frequencies(omega)?;
            let sol = solve_beta(&a, &w, cfg.precision)?;
            let result = json!({
                "beta": interval_json(&sol.beta),
                "a": sol.param.enclosures().iter().map(interval_json).collect::<Vec<_>>(),
                "certificate": certificate_json(sol.param.certificate()),
            });
            let inputs = json!({"matrix": a.to_json(), "omega": omega});
            ok(doc(name, inputs, result, "enclosure", json!(sol.beta.width()), vec![]))
        }
        Command::Membership { matrix, vector } => {
            let a = ZeroOneMatrix::parse(matrix)?;
            let v = parse_scalar_vector(vector)?;
            let inputs = json!({"matrix": a.to_json(), "vector": v.iter().map(Scalar::to_json).collect::<Vec<_>>()});
            match in_lambda(&a, &v, cfg.tolerance)? {
                Membership::Accepted(p) => {
                    let exact = matches!(p.certificate(), Certificate::ExactRational);
                    let result = json!({"accepted": true, "certificate": certificate_json(p.certificate())});
                    ok(doc(name, inputs, result, if exact { "exact" } else { "enclosure" }, Value::Null, vec![]))
                }
                Membership::Rejected { pfe } => Outcome {
                    document: doc(
                        name,
                        inputs,
                        json!({"accepted": false, "pfe": interval_json(&pfe)}),
                        "enclosure",
                        json!((pfe.mid() - 1.0).abs()),
                        vec![],
                    ),
                    exit_code: 1,
                    table: None,
                },
            }
        }
        Command::StateEval { state, word, nf } => {
            let built = build_state(&state.matrix, state.vector.as_deref(), state.omega.as_deref(), state.canonical, &cfg)?;
            let a = built.spec.matrix().clone();
            let x = match (word, nf) {
                (Some(w), None) => normalize(&a, &parse_word(w)?)?,
                (None, Some(text)) => NormalForm::from_json(&parse_json(text, "normal form")?, &a)?,
                _ => return Err(Error::Parse("give --word or --nf".into())),
            };
            let value = eval_state(&built.spec, &x)?;
            let mode = if value.exact().is_some() { "exact" } else { "enclosure" };
            let result = json!({"value": enclosed_json(&value), "normal_form": x.to_json(), "state": built.description});
            let inputs = json!({"matrix": a.to_json(), "word": word, "nf": nf});
            ok(doc(name, inputs, result, mode, json!(value.width()), vec![]))
        }
        Command::KmsCheck { matrix, omega, x, y } => {
            let a = ZeroOneMatrix::parse(matrix)?;
            let w = parse_frequencies(omega)?;
            let sol = solve_beta(&a, &w, cfg.precision)?;
            let spec = StateSpec::new(&sol.param, cfg.precision)?;
            let inputs = json!({"matrix": a.to_json(), "omega": omega, "x": x, "y": y});
            let (result, residual, pass) = match (x, y) {
                (Some(xs), Some(ys)) => {
                    let xm = single_monomial(&a, xs)?;
                    let ym = single_monomial(&a, ys)?;
                    let r = kms_check(&spec, &w, sol.beta, &xm, &ym, cfg.tolerance)?;
                    (
                        json!({"lhs": enclosed_json(&r.lhs), "rhs": enclosed_json(&r.rhs), "pass": r.pass, "beta": interval_json(&sol.beta)}),
                        r.residual,
                        r.pass,
                    )
                }
                _ => {
                    let r = kms_sweep(&spec, &w, sol.beta, cfg.max_word_len, cfg.tolerance, cfg.execution)?;
                    (
                        json!({
                            "checked": r.checked,
                            "pass": r.pass,
                            "max_word_len": cfg.max_word_len,
                            "worst": r.worst.map(|(x, y)| json!([x.to_string(), y.to_string()])),
                            "beta": interval_json(&sol.beta),
                        }),
                        r.max_residual,
                        r.pass,
                    )
                }
            };
            Outcome {
                document: doc(name, inputs, result, "enclosure", json!(residual), vec![]),
                exit_code: if pass { 0 } else { 1 },
                table: None,
            }
        }
        Command::TensorState { pair, word } => {
            let (sa, sb) = build_pair(pair, &cfg)?;
            let prod = product_spec(&sa.spec, &sb.spec, cfg.dimension_cap, cfg.tolerance, cfg.precision)?;
            let x = normalize(prod.matrix(), &parse_word(word)?)?;
            let tensor = tensor_state_eval_nf(&sa.spec, &sb.spec, &x)?;
            let direct = eval_state(&prod, &x)?;
            let residual = tensor.distance(&direct);
            let result = json!({
                "tensor_product": enclosed_json(&tensor),
                "product_state": enclosed_json(&direct),
                "normal_form": x.to_json(),
            });
            let mode = if tensor.exact().is_some() && direct.exact().is_some() { "exact" } else { "enclosure" };
            let inputs = json!({"a": sa.description, "b": sb.description, "word": word});
            Outcome {
                document: doc(name, inputs, result, mode, json!(residual), vec![]),
                exit_code: if residual <= cfg.tolerance { 0 } else { 1 },
                table: None,
            }
        }
        Command::VerifyHomomorphism { pair } => {
            let (sa, sb) = build_pair(pair, &cfg)?;
            let r = verify_tensor_identity(&sa.spec, &sb.spec, cfg.max_word_len, cfg.tolerance, cfg.enumeration_cap, cfg.execution)?;
            let result = json!({
                "pass": r.pass,
                "checked": r.checked,
                "max_word_len": cfg.max_word_len,
                "worst": r.worst,
            });
            let inputs = json!({"a": sa.description, "b": sb.description});
            Outcome {
                document: doc(name, inputs, result, "enclosure", json!(r.max_residual), vec![]),
                exit_code: if r.pass { 0 } else { 1 },
                table: None,
            }
        }
        Command::Coassoc { dims } => {
            let d: Vec<usize> = parse_list(dims, "dimension")?;
            let [na, nb, nc] = d[..] else {
                return Err(Error::Parse("coassoc needs exactly three dimensions".into()));
            };
            let pass = check_coassociativity(na, nb, nc)?;
            let split = IndexSplit::new(na * nb, nc)?;
            Outcome {
                document: doc(
                    name,
                    json!({"dims": d}),
                    json!({"pass": pass, "generators": split.size()}),
                    "exact",
                    Value::Null,
                    vec![],
                ),
                exit_code: if pass { 0 } else { 1 },
                table: None,
            }
        }
        Command::Normalize { matrix, word } => {
            let a = ZeroOneMatrix::parse(matrix)?;
            let w = parse_word(word)?;
            let nf = normalize(&a, &w)?;
            let inputs = json!({"matrix": a.to_json(), "word": word});
            ok(doc(name, inputs, nf.to_json(), "exact", Value::Null, vec![]))
        }
        Command::ReproducePaper => {
            let report = reproduce(&cfg)?;
            let flagged = report
                .lines
                .iter()
                .filter(|l| l.status == crate::report::Status::Flagged)
                .map(|l| format!("{}: stated {}, computed {}", l.id, l.expected, l.got))
                .collect();
            Outcome {
                document: doc(name, json!({}), report.to_json(), "exact", Value::Null, flagged),
                exit_code: if report.all_consistent() { 0 } else { 1 },
                table: Some(report.to_table()),
            }
        }
    })
}

fn single_monomial(a: &ZeroOneMatrix, text: &str) -> Result<crate::ckwords::Monomial> {
    let nf = normalize(a, &parse_word(text)?)?;
    let mut terms = nf.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) if c == &BigRational::from_integer(1.into()) => Ok(m.clone()),
        _ => Err(Error::Parse(format!("\"{text}\" does not reduce to a single monomial (it is {nf})"))),
    }
}

fn build_pair(p: &PairArgs, cfg: &RunConfig) -> Result<(BuiltState, BuiltState)> {
    let a = build_state(&p.matrix_a, p.vector_a.as_deref(), p.omega_a.as_deref(), false, cfg)?;
    let b = build_state(&p.matrix_b, p.vector_b.as_deref(), p.omega_b.as_deref(), false, cfg)?;
    Ok((a, b))
}

/// Plain-text rendering of a document.
pub fn render_table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
                out.push_str(&format!("{prefix}: [{}]\n", items.iter().map(plain).collect::<Vec<_>>().join(", ")));
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            other => out.push_str(&format!("{prefix}: {}\n", plain(other))),
        }
    }
    fn plain(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

/// Parses `args`, runs the command and returns `(stdout text, stderr text,
/// exit code)`. Writes `--out` when given.
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (text, String::new(), 0) } else { (String::new(), text, 2) };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let text = match cli.global.format {
                Format::Json => serde_json::to_string_pretty(&outcome.document).expect("JSON values serialize") + "\n",
                Format::Table => outcome.table.clone().unwrap_or_else(|| render_table(&outcome.document)),
            };
            if let Some(path) = &cli.global.out {
                if let Err(e) = std::fs::write(path, &text) {
                    return (text, format!("error: cannot write {}: {e}\n", path.display()), 2);
                }
            }
            (text, String::new(), outcome.exit_code)
        }
        Err(e) => (String::new(), format!("error: {e}\n"), error_exit_code(&e)),
    }
}
