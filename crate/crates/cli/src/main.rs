//! `bcoop`: balanced cooperation probabilities from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use balanced_coop::apps::{
    attrition_distribution, attrition_pair_table, diner_conjecture_test, diner_p, diner_table2,
    diner_table3, diner_table_n, public_goods_distribution, public_goods_p_star,
    traveler_distribution, traveler_mean, AttritionMode, AttritionSpec, DinerSpec, PublicGoodsSpec,
    TravelerSpec,
};
use balanced_coop::balance::TableEntry;
use balanced_coop::oracle::iterate2;
use balanced_coop::{
    balanced_p3_with, balanced_p_asym_with, balanced_p_with, classify2, classify3, classify_n,
    equiprobability, equiprobability3, expected_payoff2, expected_payoff3, maximin_alternative,
    maximin_p, payoff_max_p, AsymmetricTable2, ClassTag, Error, GameClass, NumericPolicy,
    PayoffTable2, PayoffTable3, PayoffTableN,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{Format, OutputEnvelope};

const EXIT_DOMAIN: u8 = 2;
const EXIT_ROOT: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "bcoop",
    version,
    about = "Balanced-player cooperation probabilities"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Zero threshold for polynomial coefficients (relative to the payoff
    /// spread) and slack for admitting roots into [0, 1].
    #[arg(long, global = true, allow_negative_numbers = true)]
    policy_eps: Option<f64>,

    /// Convergence tolerance of the fixed-point iteration.
    #[arg(long, global = true, allow_negative_numbers = true)]
    policy_tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Game class of a 2-player (a,b,c,d), 3-player (f,g,h,j,k,m) or
    /// n-player ladder table.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        table: String,
    },
    /// Cooperation probability of a 2-player table.
    Estimate {
        #[arg(long, allow_hyphen_values = true)]
        table: String,
        #[arg(long, value_enum, default_value_t = EstimateMethod::Balanced)]
        method: EstimateMethod,
        /// Starting point for `--method oracle`.
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
    },
    /// Balanced probability of a 3-player Prisoner's Dilemma.
    Estimate3 {
        #[arg(long, allow_hyphen_values = true)]
        table: String,
    },
    /// Balanced probabilities of an asymmetric 2-player Prisoner's Dilemma,
    /// given as ax,bx,cx,dx,ay,by,cy,dy.
    Asym {
        #[arg(long, allow_hyphen_values = true)]
        table: String,
    },
    /// Whether balanced players lean toward cooperation.
    Equiprob {
        #[arg(long, allow_hyphen_values = true)]
        table: String,
        #[arg(long)]
        players: Option<usize>,
    },
    /// Multi-option applications.
    App {
        #[command(subcommand)]
        app: App,
    },
    /// Check every table of a JSON file against its target.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimateMethod {
    Balanced,
    Maximin,
    PayoffMax,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Dispatch,
}

#[derive(Debug, Subcommand)]
enum App {
    /// Unscrupulous diner: cooperation probability for n players
    Diner {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        w: f64,
        #[arg(long)]
        n: usize,
    },
    /// Public goods contribution distribution over options 0..=N
    PublicGoods {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        options: usize,
    },
    /// Traveler's dilemma claim distribution
    Traveler {
        #[arg(long)]
        max: f64,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        bonus: f64,
        #[arg(long)]
        steps: usize,
        /// Also report the mean claim.
        #[arg(long)]
        mean: bool,
    },
    /// War of attrition bid distribution
    Attrition {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        max_bid: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
    },
}

#[derive(Debug)]
enum Failure {
    Solver(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Solver(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Solver(Error::NoValidRoot { .. } | Error::Ambiguous { .. }) => EXIT_ROOT,
            Self::Solver(Error::Internal(_)) => EXIT_INTERNAL,
            Self::Solver(_) | Self::Io(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> String {
        match self {
            Self::Solver(e) => e.to_string(),
            Self::Io(m) => m.clone(),
        }
    }
}

type CmdResult = std::result::Result<OutputEnvelope, Failure>;

fn parse_values(raw: &str) -> std::result::Result<Vec<f64>, Failure> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    Failure::Solver(Error::InvalidTable(format!(
                        "malformed number {:?}",
                        s.trim()
                    )))
                })
        })
        .collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

fn tie_warnings(env: &mut OutputEnvelope, class: &GameClass) {
    for tie in &class.boundary_flags {
        env.warn(format!(
            "boundary case: payoffs {}={} are equal, the class ordering holds only weakly",
            tie.0, tie.1
        ));
    }
}

fn build_policy(cli: &Cli) -> std::result::Result<NumericPolicy, Failure> {
    let mut policy = NumericPolicy::default();
    if let Some(eps) = cli.policy_eps {
        policy.eps_coeff = eps;
        policy.eps_root = eps;
    }
    if let Some(tol) = cli.policy_tol {
        policy.fp_tol = tol;
    }
    policy.validate()?;
    Ok(policy)
}

/// A three-player table whose published balance target (p = 0.5, mu = 1.25)
/// contradicts its own fixed-point equation.
const INCONSISTENT_TABLE3: [f64; 6] = [10.0, 4.0, 1.0, -2.0, -2.0, -4.0];

fn inconsistent3_warning(values: &[f64]) -> Option<String> {
    (values == INCONSISTENT_TABLE3).then(|| {
        "this table is commonly listed with p = 0.5 and mu = 1.25, but its fixed-point \
         equation p(2p^2 + 5p - 1) = 0 gives p = (sqrt(33) - 5)/4 and the equiprobability \
         check fails; the computed value is reported"
            .to_string()
    })
}

fn classify(raw: &str) -> CmdResult {
    let values = parse_values(raw)?;
    let class = match values.len() {
        4 => classify2(&PayoffTable2::try_from(&values[..])?)?,
        6 => classify3(&PayoffTable3::try_from(&values[..])?)?,
        _ => classify_n(&PayoffTableN::from_ladder(&values)?),
    };
    let mut env = OutputEnvelope::new("classify", json!({ "table": values }), to_json(&class));
    tie_warnings(&mut env, &class);
    Ok(env)
}

fn estimate(raw: &str, method: EstimateMethod, p0: f64, policy: &NumericPolicy) -> CmdResult {
    let values = parse_values(raw)?;
    let t = PayoffTable2::try_from(&values[..])?;
    let class = classify2(&t)?;
    let inputs = json!({
        "table": values,
        "method": method.to_possible_value().map(|v| v.get_name().to_string()),
        "p0": p0,
    });
    let mut warnings = Vec::new();
    let result = match method {
        EstimateMethod::Balanced => {
            let e = balanced_p_with(&t, policy)?;
            let mu = expected_payoff2(&t, e.p)?;
            json!({ "estimate": to_json(&e), "mu": mu })
        }
        EstimateMethod::Maximin => json!({
            "outcome": to_json(&maximin_p(&t)?),
            "alternative": maximin_alternative(&t),
        }),
        EstimateMethod::PayoffMax => {
            let e = payoff_max_p(&t)?;
            let mu = expected_payoff2(&t, e.p)?;
            json!({ "estimate": to_json(&e), "mu": mu })
        }
        EstimateMethod::Oracle => {
            if class.tag == ClassTag::Unclassified {
                return Err(Error::UnsupportedClass(class.tag).into());
            }
            let trace = iterate2(&t, class.tag, p0, policy)?;
            if trace.stagnated {
                warnings.push(format!(
                    "iteration settled into a rounding-level 2-cycle after {} steps",
                    trace.iterations_used
                ));
            } else if !trace.converged {
                warnings.push(format!(
                    "iteration did not converge within {} steps",
                    policy.fp_max_iter
                ));
            }
            json!({
                "p": trace.last(),
                "converged": trace.converged,
                "stagnated": trace.stagnated,
                "iterations_used": trace.iterations_used,
                "class_used": to_json(&class),
            })
        }
    };
    let mut env = OutputEnvelope::new("estimate", inputs, result);
    tie_warnings(&mut env, &class);
    for w in warnings {
        env.warn(w);
    }
    Ok(env)
}

fn estimate3(raw: &str, policy: &NumericPolicy) -> CmdResult {
    let values = parse_values(raw)?;
    let t = PayoffTable3::try_from(&values[..])?;
    let e = balanced_p3_with(&t, policy)?;
    let mu = expected_payoff3(&t, e.p)?;
    let result = json!({ "estimate": to_json(&e), "mu": mu });
    let mut env = OutputEnvelope::new("estimate3", json!({ "table": values }), result);
    tie_warnings(&mut env, &e.class_used);
    if let Some(w) = inconsistent3_warning(&values) {
        env.warn(w);
    }
    Ok(env)
}

fn asym(raw: &str, policy: &NumericPolicy) -> CmdResult {
    let values = parse_values(raw)?;
    let t = AsymmetricTable2::try_from(&values[..])?;
    let (x, y) = balanced_p_asym_with(&t, policy)?;
    let result = json!({ "x": to_json(&x), "y": to_json(&y) });
    Ok(OutputEnvelope::new(
        "asym",
        json!({ "table": values }),
        result,
    ))
}

fn equiprob(raw: &str, players: Option<usize>) -> CmdResult {
    let values = parse_values(raw)?;
    let players = players.unwrap_or(values.len() / 2);
    let report = match (players, values.len()) {
        (2, 4) => equiprobability(&PayoffTable2::try_from(&values[..])?),
        (3, 6) => equiprobability3(&PayoffTable3::try_from(&values[..])?),
        (2 | 3, n) => {
            return Err(Error::InvalidTable(format!(
                "{players} players need {} payoffs, got {n}",
                2 * players
            ))
            .into())
        }
        (p, _) => {
            return Err(Error::OutOfDomain(format!(
                "equiprobability is defined for 2 or 3 players, got {p}"
            ))
            .into())
        }
    };
    let inputs = json!({ "table": values, "players": players });
    Ok(OutputEnvelope::new("equiprob", inputs, to_json(&report)))
}

fn app(app: &App) -> CmdResult {
    match *app {
        App::Diner { r, s, u, w, n } => {
            let spec = DinerSpec { r, s, u, w, n };
            spec.validate()?;
            let result = match n {
                2 => json!({
                    "r_cb": spec.r_cb(),
                    "table": to_json(&diner_table2(&spec)?),
                    "estimate": to_json(&diner_p(&spec)?),
                }),
                3 => json!({
                    "r_cb": spec.r_cb(),
                    "table": to_json(&diner_table3(&spec)?),
                    "estimate": to_json(&diner_p(&spec)?),
                }),
                _ => json!({
                    "r_cb": spec.r_cb(),
                    "ladder": diner_table_n(&spec)?.ladder(),
                    "conjecture": to_json(&diner_conjecture_test(spec.r_cb(), n)?),
                }),
            };
            let mut env = OutputEnvelope::new("app diner", to_json(&spec), result);
            if n > 3 {
                env.warn("no closed form is known beyond 3 diners; p = 2 - n/R_cb is a conjecture and the numeric gap is reported");
            }
            Ok(env)
        }
        App::PublicGoods { r, k, options } => {
            let spec = PublicGoodsSpec { r, k, options };
            let dist = public_goods_distribution(&spec)?;
            let result = json!({
                "p_star": public_goods_p_star(k)?,
                "amounts": (0..=options).map(|i| spec.amount(i)).collect::<Vec<_>>(),
                "distribution": to_json(&dist),
            });
            Ok(OutputEnvelope::new(
                "app public-goods",
                to_json(&spec),
                result,
            ))
        }
        App::Traveler {
            max,
            min,
            bonus,
            steps,
            mean,
        } => {
            let spec = TravelerSpec {
                r: max,
                s: min,
                t: bonus,
                steps,
            };
            let dist = traveler_distribution(&spec)?;
            let mut result = json!({
                "v": spec.v(),
                "claims": (0..=steps).map(|i| spec.claim(i)).collect::<Vec<_>>(),
                "distribution": to_json(&dist),
            });
            if mean {
                result["mean"] = json!(traveler_mean(&spec)?);
            }
            let mut inputs = to_json(&spec);
            inputs["mean"] = json!(mean);
            Ok(OutputEnvelope::new("app traveler", inputs, result))
        }
        App::Attrition { x, max_bid, mode } => {
            let spec = AttritionSpec { x, max_bid };
            let mode = match mode {
                ModeArg::Paper => AttritionMode::Paper,
                ModeArg::Dispatch => AttritionMode::Dispatch,
            };
            let dist = attrition_distribution(&spec, mode)?;
            let mut inputs = to_json(&spec);
            inputs["mode"] = to_json(&mode);
            let mut env = OutputEnvelope::new(
                "app attrition",
                inputs,
                json!({ "distribution": to_json(&dist) }),
            );
            if mode == AttritionMode::Paper && (max_bid as f64) > x / 2.0 {
                let t = attrition_pair_table(&spec, max_bid, 0)?;
                env.warn(format!(
                    "pairs with bid gap above x/2 = {} have {:?} tables; paper mode still applies the Prisoner's Dilemma root to them",
                    x / 2.0,
                    classify2(&t)?.tag
                ));
            }
            if x == 2.0 && max_bid == 4 {
                env.warn(
                    "the commonly printed vector (29.2, 25.5, 20, 14.5, 10.8)% for x = 2, N = 4 is not reproduced; only p_2 = 20% and the symmetric deviations are forced by the model",
                );
            }
            Ok(env)
        }
    }
}

fn verify(file: &PathBuf) -> CmdResult {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", file.display())))?;
    let entries: Vec<TableEntry> = serde_json::from_str(&text)
        .map_err(|e| Failure::Solver(Error::InvalidTable(format!("tables file: {e}"))))?;
    let mut warnings = Vec::new();
    let mut reports = Vec::new();
    for entry in &entries {
        let values: Vec<f64> = match entry.table {
            balanced_coop::balance::Table::Two(t) => t.values().to_vec(),
            balanced_coop::balance::Table::Three(t) => t.values().to_vec(),
        };
        if let Some(w) = inconsistent3_warning(&values) {
            warnings.push(format!("{}: {w}", entry.name));
        }
        let report = match entry.verify() {
            Ok(r) => json!({ "name": entry.name, "report": to_json(&r) }),
            Err(e) => json!({ "name": entry.name, "error": e.to_string() }),
        };
        reports.push(report);
    }
    let all_pass = reports.iter().all(|r| r["report"]["pass"] == json!(true));
    let inputs = json!({ "file": file.display().to_string(), "entries": to_json(&entries) });
    let mut env = OutputEnvelope::new(
        "verify",
        inputs,
        json!({ "all_pass": all_pass, "tables": reports }),
    );
    for w in warnings {
        env.warn(w);
    }
    Ok(env)
}

fn run(cli: &Cli) -> CmdResult {
    let policy = build_policy(cli)?;
    match &cli.command {
        Command::Classify { table } => classify(table),
        Command::Estimate { table, method, p0 } => estimate(table, *method, *p0, &policy),
        Command::Estimate3 { table } => estimate3(table, &policy),
        Command::Asym { table } => asym(table, &policy),
        Command::Equiprob { table, players } => equiprob(table, *players),
        Command::App { app: a } => app(a),
        Command::Verify { file } => verify(file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                // A flag value that failed to parse, e.g. `--r abc`.
                ErrorKind::ValueValidation => EXIT_DOMAIN,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(env) => {
            print!("{}", env.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
