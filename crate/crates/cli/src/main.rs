mod report;

use clap::{Parser, Subcommand, ValueEnum};
use powersign::algebraic::{ComplexAlgebraic, RootSet};
use powersign::decision::{self, DecisionError, Property, Route, Verdict};
use powersign::exact::{format_rational, parse_rational, QMatrix, Rational};
use powersign::lrs::Lrs;
use powersign::perturbation::{algorithm1_reduce, choose_epsilons, decompose_all, EpsilonMode, PerturbationError};
use powersign::reductions::{somset_to_lrs, unnlrs_to_ennsom, uplrs_to_epsom, WeightedMatrixSet};
use powersign::spectral::{classify, minimal_poly, SpectralError};
use report::{envelope, RunConfig};
use serde_json::{json, Map, Value};
use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

const IDENTITY_HORIZON: u64 = 20;
const PRECISION_HORIZON: u64 = 30;

#[derive(Parser)]
#[command(name = "powersign", version, about = "Eventual sign properties of weighted sums of rational matrix powers")]
struct Cli {
    /// Simulation horizon used to cross-check analytic verdicts.
    #[arg(long, global = true, env = "POWERSIGN_HORIZON", default_value_t = decision::DEFAULT_GUARD,
          value_parser = clap::value_parser!(u64).range(1..))]
    horizon: u64,
    #[arg(long, global = true, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
    /// Precision mode for `perturb`: keep the reduced sum within εⁿ of the input.
    #[arg(long, global = true, value_parser = positive_rational)]
    epsilon: Option<Rational>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral class, characteristic and minimal polynomial of every matrix.
    Classify { input: String },
    /// Decide eventual non-negativity (enn) or positivity (ep) of the weighted sum.
    Decide {
        input: String,
        #[arg(long, value_parser = sign_property)]
        property: Property,
    },
    /// Translate between matrix sets and linear recurrences.
    Reduce {
        #[command(subcommand)]
        direction: Direction,
    },
    /// Reduce diagonalizable inputs to simple matrices and check the identity.
    Perturb { input: String },
    /// Exact power sums up to a horizon, logging violations.
    Simulate {
        input: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, value_parser = sign_property)]
        property: Property,
    },
}

#[derive(Subcommand)]
enum Direction {
    /// One recurrence running through every entry of the weighted sum.
    ToLrs { input: String },
    /// The two-matrix set built from a recurrence.
    FromLrs {
        input: String,
        #[arg(long, value_parser = lrs_property)]
        property: Property,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Direct,
    Perturb,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Direct => Route::Direct,
            RouteArg::Perturb => Route::Perturb,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let q = parse_rational(s).map_err(|e| e.to_string())?;
    if q <= Rational::from_integer(0.into()) {
        return Err("epsilon must be positive".into());
    }
    Ok(q)
}

fn sign_property(s: &str) -> Result<Property, String> {
    match s {
        "enn" => Ok(Property::NonNegative),
        "ep" => Ok(Property::Positive),
        _ => s.parse().map_err(|_| format!("unknown property {s:?} (expected enn or ep)")),
    }
}

fn lrs_property(s: &str) -> Result<Property, String> {
    match s {
        "unn" => Ok(Property::NonNegative),
        "up" => Ok(Property::Positive),
        _ => s.parse().map_err(|_| format!("unknown property {s:?} (expected unn or up)")),
    }
}

struct Failure {
    message: String,
    hint: Option<String>,
}

impl Failure {
    fn new(message: impl ToString) -> Failure {
        Failure { message: message.to_string(), hint: None }
    }
}

const DEFECTIVE_HINT: &str =
    "non-diagonalizable inputs are outside the decision procedure; `powersign reduce to-lrs` gives the equivalent recurrence";

impl From<DecisionError> for Failure {
    fn from(e: DecisionError) -> Failure {
        let defective = matches!(
            e,
            DecisionError::Defective { .. } | DecisionError::Perturbation(PerturbationError::Spectral(SpectralError::Defective))
        );
        Failure { message: e.to_string(), hint: defective.then(|| DEFECTIVE_HINT.to_string()) }
    }
}

impl From<PerturbationError> for Failure {
    fn from(e: PerturbationError) -> Failure {
        Failure::from(DecisionError::from(e))
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(Failure::new)?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::new(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn read_set(path: &str) -> Result<WeightedMatrixSet, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Failure::new(format!("{path}: {e}")))
}

fn read_lrs(path: &str) -> Result<Lrs, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Failure::new(format!("{path}: {e}")))
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("report bodies are objects"),
    }
}

fn eigenvalue_summary(a: &QMatrix) -> Vec<Value> {
    let cp = a.char_poly().expect("square");
    let mut out = Vec::new();
    for (i, f) in cp.squarefree_decomposition().iter().enumerate() {
        if f.degree().unwrap_or(0) < 1 {
            continue;
        }
        let roots = Arc::new(RootSet::new(f));
        for r in 0..roots.len() {
            let v = ComplexAlgebraic::from_root(&roots, r);
            out.push(json!({"value": v.to_string(), "multiplicity": i + 1}));
        }
    }
    out
}

fn cmd_classify(path: &str) -> Result<(Map<String, Value>, u8), Failure> {
    let set = read_set(path)?;
    let mut matrices = Vec::new();
    for (i, (_, a)) in set.pairs().iter().enumerate() {
        let class = classify(a).map_err(Failure::new)?;
        matrices.push(json!({
            "index": i + 1,
            "class": class,
            "char_poly": a.char_poly().expect("square").to_string(),
            "min_poly": minimal_poly(a).to_string(),
            "eigenvalues": eigenvalue_summary(a),
        }));
    }
    Ok((obj(json!({ "matrices": matrices })), EXIT_YES))
}

fn cmd_decide(path: &str, prop: Property, cfg: &Cli) -> Result<(Map<String, Value>, u8), Failure> {
    let set = read_set(path)?;
    let report = decision::decide(&set, prop, cfg.route.into(), cfg.horizon)?;
    let code = match report.verdict {
        Verdict::Yes { .. } => EXIT_YES,
        Verdict::No { .. } => EXIT_NO,
        Verdict::Unknown { .. } => EXIT_UNKNOWN,
    };
    let mut body = obj(report.to_json());
    body.insert("routes_compared".into(), json!(report.routes_compared));
    Ok((body, code))
}

fn cmd_to_lrs(path: &str) -> Result<(Map<String, Value>, u8), Failure> {
    let set = read_set(path)?;
    let k = set.dim();
    let lrs = somset_to_lrs(&set);
    Ok((
        obj(json!({
            "k": k,
            "lrs": lrs,
            "index_map": format!(
                "term r·{k2} + s·{k} + t is entry (s+1, t+1) of the weighted sum at power r+1, 0 ≤ s, t < {k}",
                k2 = k * k
            ),
        })),
        EXIT_YES,
    ))
}

fn cmd_from_lrs(path: &str, prop: Property) -> Result<(Map<String, Value>, u8), Failure> {
    let lrs = read_lrs(path)?;
    let (set, target) = match prop {
        Property::NonNegative => (unnlrs_to_ennsom(&lrs), "enn"),
        Property::Positive => (uplrs_to_epsom(&lrs), "ep"),
    };
    Ok((obj(json!({ "target_property": target, "set": set })), EXIT_YES))
}

fn pow(q: &Rational, n: u64) -> Rational {
    num_traits::pow(q.clone(), n as usize)
}

fn cmd_perturb(path: &str, cfg: &Cli) -> Result<(Map<String, Value>, u8), Failure> {
    let set = read_set(path)?;
    let decs = decompose_all(&set)?;
    let mode = match &cfg.epsilon {
        Some(e) => EpsilonMode::Precision(e.clone()),
        None => EpsilonMode::Exact,
    };
    let plan = choose_epsilons(&set, &decs, mode)?;
    let red = algorithm1_reduce(&set, &decs, &plan)?;

    let f_n = red.epsilon_strings().iter().map(|e| format!("({e})^n")).collect::<Vec<_>>().join(" + ");
    let classes: Vec<Value> = red
        .pairs
        .iter()
        .map(|p| classify(&p.matrix).map(|c| json!(c)).unwrap_or(Value::Null))
        .collect();

    let mut transcript = Vec::new();
    let mut all = true;
    for n in 1..=IDENTITY_HORIZON {
        let lhs = set.weighted_power_sum(n).expect("n ≥ 1").scale(&red.scale_factor(n));
        let holds = lhs == red.weighted_power_sum(n);
        all &= holds;
        transcript.push(json!({"n": n, "holds": holds}));
    }
    let mut body = obj(json!({
        "mu": plan.mu,
        "epsilons": red.epsilon_strings(),
        "forbidden_ratios": plan.forbidden.iter().map(format_rational).collect::<Vec<_>>(),
        "f_n": f_n,
        "pairs": red.pairs,
        "output_classes": classes,
        "identity_check": {
            "statement": "f(n) · Σ w_i A_i^n = Σ v B^n",
            "horizon": IDENTITY_HORIZON,
            "result": if all { "pass" } else { "fail" },
            "transcript": transcript,
        },
    }));
    if let Some(eps) = &cfg.epsilon {
        let mut rows = Vec::new();
        let mut ok = true;
        for n in 1..=PRECISION_HORIZON {
            let diff = set.weighted_power_sum(n).expect("n ≥ 1").sub(&red.weighted_power_sum(n)).expect("same size");
            let dev = diff.entries().iter().map(|d| num_traits::Signed::abs(d)).max().expect("nonempty");
            let bound = pow(eps, n);
            let holds = dev < bound;
            ok &= holds;
            rows.push(json!({"n": n, "max_deviation": format_rational(&dev), "holds": holds}));
        }
        body.insert(
            "precision_check".into(),
            json!({
                "statement": "max |Σ w_i A_i^n − Σ v B^n| < ε^n",
                "epsilon": format_rational(eps),
                "horizon": PRECISION_HORIZON,
                "result": if ok { "pass" } else { "fail" },
                "transcript": rows,
            }),
        );
    }
    Ok((body, EXIT_YES))
}

fn cmd_simulate(path: &str, steps: u64, prop: Property) -> Result<(Map<String, Value>, u8), Failure> {
    let set = read_set(path)?;
    let log = decision::violations(&set, steps, prop);
    let candidate = match log.last() {
        None => Some(1),
        Some(v) if v.n < steps => Some(v.n + 1),
        Some(_) => None,
    };
    let rows: Vec<Value> = log
        .iter()
        .map(|v| json!({"n": v.n, "entry": [v.entry.0, v.entry.1], "value": format_rational(&v.value)}))
        .collect();
    Ok((
        obj(json!({
            "property": prop.name(),
            "steps": steps,
            "violation_count": rows.len(),
            "violations": rows,
            "candidate_threshold": candidate,
        })),
        EXIT_YES,
    ))
}

fn run(cli: &Cli) -> (&'static str, Result<(Map<String, Value>, u8), Failure>) {
    match &cli.command {
        Command::Classify { input } => ("classify", cmd_classify(input)),
        Command::Decide { input, property } => ("decide", cmd_decide(input, *property, cli)),
        Command::Reduce { direction: Direction::ToLrs { input } } => ("reduce to-lrs", cmd_to_lrs(input)),
        Command::Reduce { direction: Direction::FromLrs { input, property } } => {
            ("reduce from-lrs", cmd_from_lrs(input, *property))
        }
        Command::Perturb { input } => ("perturb", cmd_perturb(input, cli)),
        Command::Simulate { input, steps, property } => ("simulate", cmd_simulate(input, *steps, *property)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_YES });
        }
    };
    let config = RunConfig {
        guard_horizon: cli.horizon,
        route: Route::from(cli.route).name().to_string(),
        precision_eps: cli.epsilon.as_ref().map(format_rational),
        output: match cli.output {
            Output::Json => "json".into(),
            Output::Text => "text".into(),
        },
    };
    let (command, result) = run(&cli);
    let (body, code) = match result {
        Ok(ok) => ok,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(h) = &f.hint {
                eprintln!("hint: {h}");
            }
            (obj(json!({ "error": f.message, "hint": f.hint })), EXIT_ERROR)
        }
    };
    let report = envelope(command, &config, body);
    match cli.output {
        Output::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        Output::Text => print!("{}", report::to_text(&report)),
    }
    ExitCode::from(code)
}
