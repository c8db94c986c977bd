//! `thoma-lab`: command-line access to the computations in `thoma-core`.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Value};
use thoma_core::entropy::{entropy_growth_experiment, EntropyReport};
use thoma_core::groupalg::{block_weights, commuting_square_check, find_small_projection, SmallProjectionSearch};
use thoma_core::tensorrep::{
    jones_projections, pimsner_popa_bound, pimsner_popa_inequality, verification_suite, PimsnerPopa,
};
use thoma_core::perm::factorial;
use thoma_core::thoma::parse_rational;
use thoma_core::{Error, Limits, Permutation, ThomaParameter};

use output::{document, real, table, Numbers};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Structured,
    Table,
}

/// Exact computations for Thoma characters of the infinite symmetric group.
#[derive(Parser, Debug)]
#[command(name = "thoma-lab", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    format: Format,
    /// Print rationals exactly as "p/q" strings or as floating-point numbers.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Tolerance for floating-point verifications.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of group elements enumerated at once.
    #[arg(long, global = true, env = "THOMA_LAB_ENUM_CAP")]
    enum_cap: Option<u128>,
    /// Maximum tensor-power dimension.
    #[arg(long, global = true, env = "THOMA_LAB_DIM_CAP")]
    dim_cap: Option<u128>,
    /// Largest degree for block weights.
    #[arg(long, global = true, env = "THOMA_LAB_WEIGHT_CAP")]
    weight_cap: Option<usize>,
    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Irreducibility, faithfulness, index and Pimsner-Popa constant.
    Classify { kappa: String },
    /// Character value on a permutation, e.g. "(0 1 2)".
    Char { kappa: String, permutation: String },
    /// Block weights of the trace on the group algebra of S_n.
    Weights { kappa: String, n: usize },
    /// Invariant suite of the tensor representation (requires g=0).
    RepVerify { kappa: String, n: usize },
    /// Quick necessary condition and full commuting-square verdict.
    CommutingSquare { kappa: String, n: usize },
    /// First staircase block with a minimal projection of trace below eps^n.
    SmallProj {
        kappa: String,
        epsilon: String,
        /// Scan every diagram of each size, not only the staircase.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Entropy bounds and the finite-level growth table.
    Entropy { kappa: String, n_max: usize },
    /// Jones projections and their Temperley-Lieb relations.
    Jones { alpha1: String, chain: usize },
    /// Every applicable computation in one document.
    Report {
        kappa: String,
        /// Degree used by the size-dependent sections.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

/// Why a run did not produce a clean document.
enum Failure {
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

impl RunConfig {
    fn limits(&self) -> std::result::Result<Limits, Failure> {
        let mut limits = Limits::default();
        if let Some(v) = self.enum_cap {
            limits.enumeration = positive(v, "enumeration cap")?;
        }
        if let Some(v) = self.dim_cap {
            limits.dimension = positive(v, "dimension cap")?;
        }
        if let Some(v) = self.weight_cap {
            limits.weight_degree = positive(v as u128, "weight cap")? as usize;
        }
        Ok(limits)
    }
}

fn positive(v: u128, what: &str) -> std::result::Result<u128, Failure> {
    if v == 0 {
        Err(Failure::Usage(format!("{what} must be positive")))
    } else {
        Ok(v)
    }
}

fn parameter(text: &str) -> std::result::Result<ThomaParameter, Failure> {
    Ok(text.parse::<ThomaParameter>()?)
}

fn classify(kappa: &ThomaParameter, nums: Numbers) -> Value {
    let c = kappa.classify_irreducible();
    json!({
        "parameter": kappa.to_string(),
        "alpha": nums.rationals(kappa.alpha()),
        "beta": nums.rationals(kappa.beta()),
        "gamma": nums.rational(kappa.gamma()),
        "tag": c.tag.to_string(),
        "irreducible": c.tag.is_irreducible(),
        "moment_identity": c.moment_identity,
        "degenerate": c.degenerate,
        "transposition_value": nums.rational(&c.transposition_value),
        "three_cycle_value": nums.rational(&c.three_cycle_value),
        "faithful": kappa.is_faithful(),
        "infinite_index": kappa.has_infinite_index(),
        "pimsner_popa": pimsner_popa(kappa, nums),
    })
}

fn pimsner_popa(kappa: &ThomaParameter, nums: Numbers) -> Value {
    match pimsner_popa_bound(kappa) {
        PimsnerPopa::Finite {
            delta,
            constant,
            index_bound,
        } => json!({
            "finite": true,
            "delta": nums.rational(&delta),
            "constant": nums.rational(&constant),
            "index_bound": nums.rational(&index_bound),
        }),
        PimsnerPopa::InfiniteIndex => json!({ "finite": false }),
    }
}

fn character(kappa: &ThomaParameter, text: &str, nums: Numbers) -> Outcome {
    let s: Permutation = text.parse()?;
    let class = s.cycle_type();
    Ok((
        json!({
            "parameter": kappa.to_string(),
            "permutation": s.to_string(),
            "cycle_type": class.lengths(),
            "value": nums.rational(&kappa.character(&class)),
        }),
        true,
    ))
}

fn weights(kappa: &ThomaParameter, n: usize, nums: Numbers, limits: &Limits) -> Outcome {
    let w = block_weights(kappa, n, limits)?;
    let nonnegative = w.entries.iter().all(|e| e.weight >= BigRational::from_integer(0.into()));
    let normalized = w.is_normalized();
    let entries: Vec<Value> = w
        .entries
        .iter()
        .map(|e| {
            json!({
                "diagram": e.diagram.to_string(),
                "dimension": e.dimension.to_string(),
                "weight": nums.rational(&e.weight),
                "minimal_projection_trace": nums.rational(&e.minimal_projection_trace()),
            })
        })
        .collect();
    Ok((
        json!({
            "n": n,
            "entries": entries,
            "total": nums.rational(&w.total()),
            "normalized": normalized,
            "nonnegative": nonnegative,
        }),
        normalized && nonnegative,
    ))
}

fn rep_verify(kappa: &ThomaParameter, n: usize, config: &RunConfig, limits: &Limits) -> Outcome {
    let checks = verification_suite(kappa, n, config.tolerance, config.seed, limits)?;
    let passed = checks.iter().all(|c| c.passed);
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
        .collect();
    Ok((json!({ "n": n, "tolerance": config.tolerance, "seed": config.seed, "checks": rows }), passed))
}

fn commuting_square(kappa: &ThomaParameter, n: usize, nums: Numbers, limits: &Limits) -> Outcome {
    let r = commuting_square_check(kappa, n, limits)?;
    // the quick test is necessary, so a commuting verdict without it is a bug
    let consistent = r.quick_test_passes() || !r.commuting;
    Ok((
        json!({
            "n": n,
            "quick": {
                "three_cycle": nums.rational(&r.three_cycle),
                "product": nums.rational(&r.product),
                "passes": r.quick_test_passes(),
            },
            "commuting": r.commuting,
            "consistent": consistent,
        }),
        consistent,
    ))
}

fn small_projection(kappa: &ThomaParameter, epsilon: &str, exhaustive: bool, nums: Numbers, limits: &Limits) -> Outcome {
    let eps = parse_rational(epsilon, 0)?;
    let search = SmallProjectionSearch {
        exhaustive,
        ..SmallProjectionSearch::default()
    };
    let found = find_small_projection(kappa, &eps, &search, limits)?;
    let result = match found {
        Some(p) => json!({
            "found": true,
            "n": p.n,
            "diagram": p.diagram.to_string(),
            "dimension": p.dimension.to_string(),
            "weight": nums.rational(&p.weight),
            "trace": nums.rational(&p.trace),
            "trace_over_factorial": format!("{}/{}", &p.trace * BigRational::from_integer(factorial(p.n as u64).into()), factorial(p.n as u64)),
            "bound": nums.rational(&num::pow(eps.clone(), p.n)),
        }),
        None => json!({ "found": false, "searched_up_to": limits.weight_degree.min(limits.partition_degree) }),
    };
    Ok((json!({ "epsilon": nums.rational(&eps), "projection": result }), true))
}

fn entropy_value(r: &EntropyReport) -> Value {
    let rows: Vec<Value> = r
        .growth_table
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "total": real(row.total),
                "center": real(row.center),
                "total_per_n": real(row.total_per_n),
            })
        })
        .collect();
    json!({
        "shift_entropy": real(r.shift_entropy),
        "upper_bound": real(r.upper_bound),
        "equality_applicable": r.equality_applicable,
        "equality_value": r.equality_value.map(real),
        "growth_table": rows,
    })
}

fn entropy(kappa: &ThomaParameter, n_max: usize, limits: &Limits) -> Outcome {
    let r = entropy_growth_experiment(kappa, n_max, limits)?;
    Ok((entropy_value(&r), true))
}

fn jones(alpha1: &str, chain: usize, config: &RunConfig, limits: &Limits) -> Outcome {
    let a = parse_rational(alpha1, 0)?;
    let r = jones_projections(&a, chain, limits)?;
    let passed = r.passes(config.tolerance);
    Ok((
        json!({
            "alpha1": real(r.alpha1),
            "alpha2": real(r.alpha2),
            "delta": real(r.delta),
            "chain": chain,
            "tolerance": config.tolerance,
            "max_idempotent_error": real(r.max_idempotent_error),
            "max_self_adjoint_error": real(r.max_self_adjoint_error),
            "max_tl_error": real(r.max_tl_error),
            "max_far_commutator": real(r.max_far_commutator),
        }),
        passed,
    ))
}

fn report(kappa: &ThomaParameter, n: usize, config: &RunConfig, nums: Numbers, limits: &Limits) -> Outcome {
    let mut passed = true;
    let mut sections = serde_json::Map::new();
    sections.insert("classify".into(), classify(kappa, nums));

    let (w, ok) = weights(kappa, n, nums, limits)?;
    passed &= ok;
    sections.insert("weights".into(), w);

    let square_n = n.min(limits.square_degree.saturating_sub(1)).max(1);
    let (c, ok) = commuting_square(kappa, square_n, nums, limits)?;
    passed &= ok;
    sections.insert("commuting_square".into(), c);

    let (s, _) = small_projection(kappa, "1/2", false, nums, limits)?;
    sections.insert("small_projection".into(), s);

    let (e, _) = entropy(kappa, n, limits)?;
    sections.insert("entropy".into(), e);

    if kappa.gamma() == &BigRational::from_integer(0.into()) {
        let (r, ok) = rep_verify(kappa, n, config, limits)?;
        passed &= ok;
        sections.insert("rep_verify".into(), r);
        let ineq = pimsner_popa_inequality(kappa, 100, config.seed)?;
        let ok = ineq.min_eigenvalue >= -config.tolerance;
        passed &= ok;
        sections.insert(
            "pimsner_popa_inequality".into(),
            json!({
                "constant": real(ineq.constant),
                "samples": ineq.samples,
                "min_eigenvalue": real(ineq.min_eigenvalue),
                "passed": ok,
            }),
        );
    }
    Ok((json!({ "parameter": kappa.to_string(), "n": n, "sections": sections }), passed))
}

fn run(cli: &Cli) -> std::result::Result<(String, Value, bool), Failure> {
    let config = &cli.config;
    if config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(Failure::Usage("tolerance must be positive".into()));
    }
    let limits = config.limits()?;
    let nums = Numbers { mode: config.mode };
    let (name, (value, passed)) = match &cli.command {
        Command::Classify { kappa } => ("classify", (classify(&parameter(kappa)?, nums), true)),
        Command::Char { kappa, permutation } => ("char", character(&parameter(kappa)?, permutation, nums)?),
        Command::Weights { kappa, n } => ("weights", weights(&parameter(kappa)?, *n, nums, &limits)?),
        Command::RepVerify { kappa, n } => ("rep-verify", rep_verify(&parameter(kappa)?, *n, config, &limits)?),
        Command::CommutingSquare { kappa, n } => {
            ("commuting-square", commuting_square(&parameter(kappa)?, *n, nums, &limits)?)
        }
        Command::SmallProj {
            kappa,
            epsilon,
            exhaustive,
        } => ("small-proj", small_projection(&parameter(kappa)?, epsilon, *exhaustive, nums, &limits)?),
        Command::Entropy { kappa, n_max } => ("entropy", entropy(&parameter(kappa)?, *n_max, &limits)?),
        Command::Jones { alpha1, chain } => ("jones", jones(alpha1, *chain, config, &limits)?),
        Command::Report { kappa, n } => ("report", report(&parameter(kappa)?, *n, config, nums, &limits)?),
    };
    Ok((name.to_string(), value, passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, value, passed) = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
        Err(Failure::Cap(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(3);
        }
    };
    let doc = document(&name, passed, value);
    let text = match cli.config.format {
        Format::Structured => serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n",
        Format::Table => table(&doc),
    };
    match &cli.config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
