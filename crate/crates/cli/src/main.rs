//! `chernpos`: seeded verification runs and exact model computations.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report
//! carries the witness), 2 for malformed input or unmet hypotheses.

use std::fs;
use std::io::{Read as _, Write as _};
use std::process::ExitCode;

use chernpos::chern::{chern_forms, chern_product, top_coefficient, ChernFormSet, PrefactorMode};
use chernpos::curvature::{
    bott_chern_curvature, factor_from_tensor, CurvatureMatrix, CurvatureMatrixLiteral,
    CurvatureTensor, InstanceLiteral,
};
use chernpos::forms::{nonnegative_sampled, FormLiteral, DEFAULT_TOL};
use chernpos::literal::{CoeffLiteral, ComplexLiteral};
use chernpos::models::{
    chern_numbers, evaluate_polynomial, kodaira_leading, parse_line, parse_model,
    rational_string, rr_polynomial, verify_number_bounds, ModelManifold,
};
use chernpos::random::{float_tensor, gaussian_integer_tensor, random_shape, TensorDistribution};
use chernpos::schur::{
    bounds_chain_check, evaluate_on_forms, partitions, schur_polynomial, verify_schur_nonnegativity,
    Partition,
};
use chernpos::{Error, Form, GaussianRational, TangentVector};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const SCHEMA: u32 = 1;
/// Entry bound for exact random instances.
const EXACT_ENTRY_BOUND: i64 = 2;

#[derive(Parser, Debug)]
#[command(name = "chernpos", version, about = "Chern and Schur forms, Chern numbers and their bounds")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Seed for instance generation and direction sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sampled direction tuples per form.
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,
    /// Relative tolerance for sampled nonnegativity.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Differential forms at a point.
    #[command(subcommand)]
    Forms(FormsCommand),
    /// Curvature matrices and their Chern forms.
    #[command(subcommand)]
    Curvature(CurvatureCommand),
    /// Schur polynomials and Schur-form nonnegativity.
    #[command(subcommand)]
    Schur(SchurCommand),
    /// The chain 0 ≤ c_i ≤ c_λ ≤ c_1^i on instances.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Cohomology models of projective spaces, tori and products.
    #[command(subcommand)]
    Model(ModelCommand),
}

#[derive(Subcommand, Debug)]
enum FormsCommand {
    /// Evaluate a form on vectors, or sample it for nonnegativity.
    Eval {
        /// Form literal file (`-` for stdin).
        #[arg(long)]
        form: String,
        /// JSON list of tangent vectors, each a list of {re, im}.
        #[arg(long)]
        vectors: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum CurvatureCommand {
    /// Build Ω from an instance and emit its Chern forms.
    Build(InstanceArgs),
}

#[derive(Subcommand, Debug)]
enum SchurCommand {
    /// List Γ(i, r) with the expanded Schur polynomials.
    Table {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        r: usize,
    },
    /// Sample every Schur form of the instance.
    Verify(InstanceArgs),
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Check each inequality step of the chain by sampling.
    Chain {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated partition; all of Γ(i, r), 1 ≤ i ≤ n, when omitted.
        #[arg(long)]
        partition: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ModelCommand {
    /// All Chern numbers c_λ[M], λ ∈ Γ(n, n).
    ChernNumbers {
        #[arg(long)]
        model: String,
    },
    /// Check 0 ≤ c_n[M] ≤ c_λ[M] ≤ c_1^n[M].
    Bounds {
        #[arg(long)]
        model: String,
        /// Use cotangent classes (numbers multiplied by (-1)^n).
        #[arg(long)]
        signed: bool,
    },
    /// χ(M, L^m) from the Riemann–Roch polynomial.
    Rr {
        #[arg(long)]
        model: String,
        /// `K`, `O`, `O(d)` or `O(d1,...,dp)`.
        #[arg(long, default_value = "O(1)")]
        line: String,
        /// A value `m` or an inclusive range `a..b`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        m: String,
    },
}

#[derive(Args, Debug, Clone)]
struct InstanceArgs {
    /// Instance file: tensor `{n,r,m,T}`, matrix `{n,r,omega}`, or an earlier report.
    #[arg(long, conflicts_with = "random")]
    instance: Option<String>,
    /// Generate instances from `--seed`.
    #[arg(long)]
    random: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Number of random instances; instance `j` uses seed `seed + j`.
    #[arg(long, default_value_t = 1)]
    instances: usize,
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    json: Value,
    text: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = match cli.run.output {
                Output::Json => {
                    serde_json::to_string_pretty(&outcome.json).expect("report serializes") + "\n"
                }
                Output::Text => outcome.text,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("check FAILED");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = &cli.run;
    if cfg.trials == 0 {
        return Err(Failure::Input("--trials must be positive".into()));
    }
    if !(cfg.tol.is_finite() && cfg.tol >= 0.0) {
        return Err(Failure::Input("--tol must be a nonnegative number".into()));
    }
    match &cli.command {
        Command::Forms(FormsCommand::Eval { form, vectors }) => match cfg.mode {
            Mode::Exact => forms_eval::<GaussianRational>(cfg, form, vectors.as_deref()),
            Mode::Float => forms_eval::<Complex64>(cfg, form, vectors.as_deref()),
        },
        Command::Curvature(CurvatureCommand::Build(args)) => dispatch(
            cfg,
            args,
            curvature_build_runs::<GaussianRational>,
            curvature_build_runs::<Complex64>,
        ),
        Command::Schur(SchurCommand::Table { i, r }) => Ok(schur_table(*i, *r)),
        Command::Schur(SchurCommand::Verify(args)) => dispatch(
            cfg,
            args,
            schur_verify_runs::<GaussianRational>,
            schur_verify_runs::<Complex64>,
        ),
        Command::Bounds(BoundsCommand::Chain {
            instance,
            partition,
        }) => {
            let parts = partition.as_deref().map(parse_parts).transpose()?;
            match cfg.mode {
                Mode::Exact => {
                    let runs = load_runs::<GaussianRational>(cfg, instance)?;
                    bounds_chain(cfg, runs, parts.as_deref())
                }
                Mode::Float => {
                    let runs = load_runs::<Complex64>(cfg, instance)?;
                    bounds_chain(cfg, runs, parts.as_deref())
                }
            }
        }
        Command::Model(cmd) => model_command(cmd),
    }
}

/// Scalars the CLI can ingest and generate.
trait CliScalar: CoeffLiteral {
    const DISTRIBUTION: &'static str;
    fn random_tensor(n: usize, r: usize, m: usize, seed: u64) -> chernpos::Result<CurvatureTensor<Self>>;
}

impl CliScalar for GaussianRational {
    const DISTRIBUTION: &'static str = "gaussian-integer-uniform[-2,2]";
    fn random_tensor(n: usize, r: usize, m: usize, seed: u64) -> chernpos::Result<CurvatureTensor<Self>> {
        gaussian_integer_tensor(n, r, m, EXACT_ENTRY_BOUND, seed)
    }
}

impl CliScalar for Complex64 {
    const DISTRIBUTION: &'static str = "complex-normal";
    fn random_tensor(n: usize, r: usize, m: usize, seed: u64) -> chernpos::Result<CurvatureTensor<Self>> {
        float_tensor(n, r, m, seed)
    }
}

enum Instance<C> {
    Tensor(CurvatureTensor<C>),
    Matrix(CurvatureMatrix<C>),
}

impl<C: CliScalar> Instance<C> {
    fn literal(&self) -> Value {
        match self {
            Instance::Tensor(t) => serde_json::to_value(t.to_literal()),
            Instance::Matrix(omega) => {
                let mut v = serde_json::to_value(omega.to_literal()).expect("literal serializes");
                v["schema"] = json!(SCHEMA);
                Ok(v)
            }
        }
        .expect("literal serializes")
    }

    fn curvature(&self) -> CurvatureMatrix<C> {
        match self {
            Instance::Tensor(t) => bott_chern_curvature(&factor_from_tensor(t)),
            Instance::Matrix(omega) => omega.clone(),
        }
    }

    fn shape(&self) -> (usize, usize) {
        match self {
            Instance::Tensor(t) => (t.base_dim(), t.rank()),
            Instance::Matrix(omega) => (omega.base_dim(), omega.rank()),
        }
    }
}

struct Run<C> {
    instance: Instance<C>,
    distribution: Option<TensorDistribution>,
    /// Seed for direction sampling on this instance.
    seed: u64,
}

impl<C: CliScalar> Run<C> {
    fn header(&self) -> Value {
        let literal = self.instance.literal();
        let bytes = serde_json::to_vec(&literal).expect("literal serializes");
        json!({
            "instance": literal,
            "instance_hash": hex::encode(Sha256::digest(&bytes)),
            "distribution": self.distribution,
            "sampling_seed": self.seed,
        })
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn parse_json(path: &str) -> Result<Value, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: invalid JSON: {e}")))
}

fn field_error(field: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("field `{field}`: {e}"))
}

/// Deserializes with the path of the first offending field in the error.
fn from_value_at<T: serde::de::DeserializeOwned>(v: &Value, field: &str) -> Result<T, Failure> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { field.to_string() } else { format!("{field}.{path}") };
        field_error(&at, e.into_inner())
    })
}

fn instance_from_value<C: CliScalar>(v: &Value, field: &str) -> Result<Instance<C>, Failure> {
    let obj = v
        .as_object()
        .ok_or_else(|| field_error(field, "expected a JSON object"))?;
    if let Some(schema) = obj.get("schema") {
        if schema.as_u64() != Some(SCHEMA as u64) {
            return Err(field_error(&format!("{field}.schema"), format!("unsupported schema {schema}")));
        }
    }
    let at = |e: Error| match e {
        Error::Parse { field: inner, message } => field_error(&format!("{field}.{inner}"), message),
        other => field_error(field, other),
    };
    if obj.contains_key("T") {
        let lit: InstanceLiteral = from_value_at(v, field)?;
        Ok(Instance::Tensor(CurvatureTensor::from_literal(&lit).map_err(at)?))
    } else if obj.contains_key("omega") {
        let lit: CurvatureMatrixLiteral = from_value_at(v, field)?;
        Ok(Instance::Matrix(CurvatureMatrix::from_literal(&lit).map_err(at)?))
    } else {
        Err(field_error(field, "expected a tensor (`T`) or a curvature matrix (`omega`)"))
    }
}

fn load_runs<C: CliScalar>(cfg: &RunArgs, args: &InstanceArgs) -> Result<Vec<Run<C>>, Failure> {
    if args.instances == 0 {
        return Err(Failure::Input("--instances must be positive".into()));
    }
    if args.random {
        return (0..args.instances as u64)
            .map(|j| {
                let seed = cfg.seed.wrapping_add(j);
                let (n0, r0, m0) = random_shape(seed, 4, 5);
                let (n, r, m) = (args.n.unwrap_or(n0), args.r.unwrap_or(r0), args.m.unwrap_or(m0));
                let tensor = C::random_tensor(n, r, m, seed)?;
                Ok(Run {
                    instance: Instance::Tensor(tensor),
                    distribution: Some(TensorDistribution {
                        kind: C::DISTRIBUTION.to_string(),
                        n,
                        r,
                        m,
                        seed,
                    }),
                    seed,
                })
            })
            .collect();
    }
    let path = args
        .instance
        .as_deref()
        .ok_or_else(|| Failure::Input("one of --instance or --random is required".into()))?;
    let value = parse_json(path)?;
    // A previous report: re-ingest every embedded instance with its sampling seed.
    if let Some(runs) = value.get("runs").and_then(Value::as_array) {
        return runs
            .iter()
            .enumerate()
            .map(|(j, run)| {
                let field = format!("runs[{j}].instance");
                let inst = run
                    .get("instance")
                    .ok_or_else(|| field_error(&field, "missing"))?;
                Ok(Run {
                    instance: instance_from_value(inst, &field)?,
                    distribution: run
                        .get("distribution")
                        .and_then(|d| serde_json::from_value(d.clone()).ok()),
                    seed: run
                        .get("sampling_seed")
                        .and_then(Value::as_u64)
                        .unwrap_or(cfg.seed),
                })
            })
            .collect();
    }
    Ok(vec![Run {
        instance: instance_from_value(&value, "instance")?,
        distribution: None,
        seed: cfg.seed,
    }])
}

type Handler<C> = fn(&RunArgs, Vec<Run<C>>) -> Result<Outcome, Failure>;

fn dispatch(
    cfg: &RunArgs,
    args: &InstanceArgs,
    exact: Handler<GaussianRational>,
    float: Handler<Complex64>,
) -> Result<Outcome, Failure> {
    match cfg.mode {
        Mode::Exact => exact(cfg, load_runs(cfg, args)?),
        Mode::Float => float(cfg, load_runs(cfg, args)?),
    }
}

fn config_json(cfg: &RunArgs) -> Value {
    json!({
        "seed": cfg.seed,
        "trials": cfg.trials,
        "tol": cfg.tol,
        "mode": cfg.mode,
    })
}

fn report(command: &str, cfg: &RunArgs, body: Value) -> Value {
    let mut out = json!({
        "schema": SCHEMA,
        "command": command,
        "config": config_json(cfg),
    });
    for (k, v) in body.as_object().expect("report body is an object") {
        out[k] = v.clone();
    }
    out
}

fn short_hash(header: &Value) -> String {
    header["instance_hash"].as_str().unwrap_or("")[..12].to_string()
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn forms_eval<C: CliScalar>(cfg: &RunArgs, path: &str, vectors: Option<&str>) -> Result<Outcome, Failure> {
    let value = parse_json(path)?;
    let lit: FormLiteral = from_value_at(&value, "form")?;
    let form = Form::<C>::from_literal(&lit).map_err(|e| match e {
        Error::Parse { field, message } => field_error(&format!("form.{field}"), message),
        other => field_error("form", other),
    })?;
    let bidegree = form.bidegree();
    let mut body = json!({
        "form": form.to_literal(),
        "bidegree": bidegree,
        "real": form.is_real(chernpos::forms::REALITY_RTOL),
    });
    let mut text = format!("form of bidegree {bidegree:?} on C^{}\n", form.base_dim());
    let pass = if let Some(vpath) = vectors {
        let raw: Vec<Vec<ComplexLiteral>> = from_value_at(&parse_json(vpath)?, "vectors")?;
        let vs = raw
            .iter()
            .enumerate()
            .map(|(a, v)| {
                v.iter()
                    .enumerate()
                    .map(|(b, c)| C::from_literal(c, &format!("vectors[{a}][{b}]")))
                    .collect::<chernpos::Result<Vec<C>>>()
                    .map(TangentVector::new)
            })
            .collect::<chernpos::Result<Vec<_>>>()?;
        let value = form.evaluate(&vs)?;
        text.push_str(&format!("value = {}\n", value.to_c64()));
        body["value"] = serde_json::to_value(value.to_literal()).expect("literal serializes");
        true
    } else {
        let verdict = nonnegative_sampled(&form, cfg.trials, cfg.seed, cfg.tol)?;
        text.push_str(&format!(
            "{} nonnegative over {} samples: min = {:e}\n",
            pass_word(verdict.pass),
            verdict.trials,
            verdict.min_value
        ));
        let pass = verdict.pass;
        body["verdict"] = serde_json::to_value(verdict).expect("verdict serializes");
        pass
    };
    body["pass"] = json!(pass);
    Ok(Outcome {
        json: report("forms eval", cfg, body),
        text,
        pass,
    })
}

fn top_entry<C: CliScalar>(form: chernpos::Result<Form<C>>, scale: f64) -> Value {
    match form.and_then(|f| top_coefficient(&f)) {
        Ok(v) => json!({ "stored": v.to_literal(), "value": v.to_c64().re * scale }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn curvature_build_runs<C: CliScalar>(cfg: &RunArgs, runs: Vec<Run<C>>) -> Result<Outcome, Failure> {
    let mut out = Vec::new();
    let mut text = String::new();
    for run in &runs {
        let header = run.header();
        let omega = run.instance.curvature();
        let cs: ChernFormSet<C> = chern_forms(&omega);
        let (n, r) = run.instance.shape();
        let top_scale = cs.degree_scale(n);
        let mut chern_table = Vec::new();
        let mut schur_table = Vec::new();
        for lambda in partitions(n, r) {
            let parts: Vec<u32> = lambda.nonzero_parts().collect();
            chern_table.push(json!({
                "partition": parts,
                "top": top_entry(chern_product(&cs, &parts), top_scale),
            }));
            schur_table.push(json!({
                "partition": parts,
                "top": top_entry(evaluate_on_forms(&schur_polynomial(&lambda), &cs), top_scale),
            }));
        }
        text.push_str(&format!(
            "instance {} n={n} r={r}: {} Chern forms, {} top-degree partitions\n",
            short_hash(&header),
            cs.top_degree(),
            chern_table.len()
        ));
        let mut entry = header;
        entry["curvature"] = serde_json::to_value(omega.to_literal()).expect("literal serializes");
        entry["witnessed"] = json!(omega.is_witnessed());
        entry["prefactor"] = json!(PrefactorMode::Exact);
        entry["chern_forms"] = json!(cs
            .forms()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, f)| json!({ "degree": i, "scale": cs.degree_scale(i), "form": f.to_literal() }))
            .collect::<Vec<_>>());
        entry["top_chern"] = json!(chern_table);
        entry["top_schur"] = json!(schur_table);
        out.push(entry);
    }
    Ok(Outcome {
        json: report("curvature build", cfg, json!({ "runs": out, "pass": true })),
        text,
        pass: true,
    })
}

fn schur_table(i: usize, r: usize) -> Outcome {
    let rows: Vec<Value> = partitions(i, r)
        .iter()
        .map(|lambda| {
            json!({
                "partition": lambda.nonzero_parts().collect::<Vec<_>>(),
                "schur": schur_polynomial(lambda).to_string(),
            })
        })
        .collect();
    let mut text = String::new();
    for lambda in partitions(i, r) {
        text.push_str(&format!("{lambda}\t{}\n", schur_polynomial(&lambda)));
    }
    Outcome {
        json: json!({ "schema": SCHEMA, "command": "schur table", "i": i, "r": r, "partitions": rows }),
        text,
        pass: true,
    }
}

fn schur_verify_runs<C: CliScalar>(cfg: &RunArgs, runs: Vec<Run<C>>) -> Result<Outcome, Failure> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for (j, run) in runs.iter().enumerate() {
        let Instance::Tensor(tensor) = &run.instance else {
            return Err(field_error(
                &format!("runs[{j}].instance"),
                "schur verify needs a tensor instance `T`",
            ));
        };
        let header = run.header();
        let rep = verify_schur_nonnegativity(tensor, 1..=tensor.base_dim(), cfg.trials, run.seed, cfg.tol)?;
        all &= rep.pass;
        text.push_str(&format!(
            "instance {} n={} r={} m={}: {} ({} Schur forms, min = {:e})\n",
            short_hash(&header),
            rep.n,
            rep.r,
            rep.m,
            pass_word(rep.pass),
            rep.entries.len(),
            rep.min_value()
        ));
        for e in &rep.entries {
            text.push_str(&format!(
                "  {} S = {}: {} min = {:e}\n",
                Partition::new(&e.partition, rep.r as u32)
                    .map(|p| p.to_string())
                    .unwrap_or_default(),
                e.polynomial,
                pass_word(e.verdict.pass),
                e.verdict.min_value
            ));
        }
        let mut entry = header;
        entry["report"] = serde_json::to_value(&rep).expect("report serializes");
        out.push(entry);
    }
    Ok(Outcome {
        json: report("schur verify", cfg, json!({ "runs": out, "pass": all })),
        text,
        pass: all,
    })
}

fn parse_parts(s: &str) -> Result<Vec<u32>, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| field_error("partition", format!("expected comma-separated integers, got {s:?}")))
}

fn bounds_chain<C: CliScalar>(
    cfg: &RunArgs,
    runs: Vec<Run<C>>,
    parts: Option<&[u32]>,
) -> Result<Outcome, Failure> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for (j, run) in runs.iter().enumerate() {
        if matches!(run.instance, Instance::Matrix(_)) {
            return Err(field_error(
                &format!("runs[{j}].instance"),
                "bounds chain needs a factored tensor instance `T`",
            ));
        }
        let header = run.header();
        let cs = chern_forms(&run.instance.curvature());
        let (n, r) = run.instance.shape();
        let lambdas = match parts {
            Some(p) => vec![Partition::new(p, r as u32)?],
            None => (1..=n).flat_map(|i| partitions(i, r)).collect(),
        };
        let mut reports = Vec::new();
        text.push_str(&format!("instance {} n={n} r={r}\n", short_hash(&header)));
        for (k, lambda) in lambdas.iter().enumerate() {
            let seed = chernpos::random::mix_seed(run.seed, k as u64);
            let rep = bounds_chain_check(&cs, lambda, cfg.trials, seed, cfg.tol)?;
            all &= rep.pass;
            text.push_str(&format!("  {lambda}: {} ({} steps)\n", pass_word(rep.pass), rep.steps.len()));
            for s in &rep.steps {
                text.push_str(&format!(
                    "    {} <= {}: {} min = {:e}\n",
                    s.lhs,
                    s.rhs,
                    pass_word(s.verdict.pass),
                    s.verdict.min_value
                ));
            }
            if let Some(t) = &rep.top {
                text.push_str(&format!(
                    "    top: 0 <= {:e} <= {:e} <= {:e}: {}\n",
                    t.c_top,
                    t.c_lambda,
                    t.c1_power,
                    pass_word(t.pass)
                ));
            }
            reports.push(serde_json::to_value(&rep).expect("report serializes"));
        }
        let mut entry = header;
        entry["chains"] = json!(reports);
        out.push(entry);
    }
    Ok(Outcome {
        json: report("bounds chain", cfg, json!({ "runs": out, "pass": all })),
        text,
        pass: all,
    })
}

fn big_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn model_arg(text: &str) -> Result<ModelManifold, Failure> {
    parse_model(text).map_err(|e| match e {
        Error::Parse { message, .. } => field_error("model", message),
        other => field_error("model", other),
    })
}

fn parse_m_range(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || field_error("m", format!("expected an integer or a range a..b, got {s:?}"));
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b || b - a > 10_000 {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![parse(s)?]),
    }
}

fn model_command(cmd: &ModelCommand) -> Result<Outcome, Failure> {
    match cmd {
        ModelCommand::ChernNumbers { model } => {
            let m = model_arg(model)?;
            let numbers = chern_numbers(&m)?;
            let mut text = format!("{} (n = {})\n", m.label(), m.dim());
            for (lambda, v) in &numbers {
                text.push_str(&format!("  c{lambda} = {v}\n"));
            }
            Ok(Outcome {
                json: json!({
                    "schema": SCHEMA,
                    "command": "model chern-numbers",
                    "model": m.label(),
                    "dim": m.dim(),
                    "tangent_chern": m.tangent_classes().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "numbers": numbers.iter().map(|(l, v)| json!({
                        "partition": l.nonzero_parts().collect::<Vec<_>>(),
                        "value": big_json(v),
                    })).collect::<Vec<_>>(),
                    "pass": true,
                }),
                text,
                pass: true,
            })
        }
        ModelCommand::Bounds { model, signed } => {
            let m = model_arg(model)?;
            let rep = verify_number_bounds(&m, *signed)?;
            let middle: Vec<String> = rep.numbers.iter().map(|(_, v)| v.to_string()).collect();
            let text = format!(
                "{}{}: 0 <= {} <= {{{}}} <= {}: {} (vanishing: {})\n",
                rep.model,
                if rep.signed { " signed" } else { "" },
                rep.lower,
                middle.join(", "),
                rep.upper,
                pass_word(rep.ordering_pass),
                pass_word(rep.vanishing_pass)
            );
            Ok(Outcome {
                json: json!({
                    "schema": SCHEMA,
                    "command": "model bounds",
                    "model": rep.model,
                    "signed": rep.signed,
                    "lower": big_json(&rep.lower),
                    "upper": big_json(&rep.upper),
                    "numbers": rep.numbers.iter().map(|(l, v)| json!({
                        "partition": l.nonzero_parts().collect::<Vec<_>>(),
                        "value": big_json(v),
                    })).collect::<Vec<_>>(),
                    "ordering_pass": rep.ordering_pass,
                    "vanishing_pass": rep.vanishing_pass,
                    "pass": rep.pass,
                }),
                text,
                pass: rep.pass,
            })
        }
        ModelCommand::Rr { model, line, m } => {
            let mf = model_arg(model)?;
            let l = parse_line(&mf, line).map_err(|e| match e {
                Error::Parse { message, .. } => field_error("line", message),
                other => field_error("line", other),
            })?;
            let values = parse_m_range(m)?;
            let coeffs = rr_polynomial(&mf, &l)?;
            let mut rows = Vec::new();
            let mut text = format!("{}, L = {line}\n", mf.label());
            for &mm in &values {
                let chi = chernpos::models::euler_characteristic(&mf, &l, mm)?;
                debug_assert_eq!(evaluate_polynomial(&coeffs, mm), chi.clone().into());
                text.push_str(&format!("  chi({}, L^{mm}) = {chi}\n", mf.label()));
                rows.push(json!({ "m": mm, "chi": big_json(&chi) }));
            }
            let is_canonical = line.trim().eq_ignore_ascii_case("K");
            let leading = if is_canonical {
                Some(rational_string(&kodaira_leading(&mf)?))
            } else {
                None
            };
            Ok(Outcome {
                json: json!({
                    "schema": SCHEMA,
                    "command": "model rr",
                    "model": mf.label(),
                    "line": line,
                    "line_class": l.to_string(),
                    "polynomial": coeffs.iter().map(rational_string).collect::<Vec<_>>(),
                    "kodaira_leading": leading,
                    "values": rows,
                    "pass": true,
                }),
                text,
                pass: true,
            })
        }
    }
}
