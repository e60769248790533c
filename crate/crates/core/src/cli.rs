//! Command-line front end. Data goes to stdout, diagnostics and progress to
//! stderr. Exit status: 0 success, 1 a checked inequality failed, 2 usage.

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{self, modular, CharacterGroup, Interval, ProductBump};
use crate::bt_constants::{self as bt, Assumptions, CurveId, CurveInstance, CurveParams};
use crate::error::{Error, Result};
use crate::exponent_pairs::{self as ep, ExponentPair, Objective, ProcessWord};
use crate::numfmt::sig;
use crate::prime_counts as pc;
use crate::rational::{self, Rational};
use crate::sieve_functions;

/// Environment variable with the default worker count.
pub const THREADS_ENV: &str = "BTLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "btlab", version, about = "Brun-Titchmarsh constants workbench")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    pub format: Format,
    /// Seed for every randomized sweep.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads; defaults to $BTLAB_THREADS, then the CPU count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent pairs from the A and B processes.
    Exppairs(ExppairsArgs),
    /// Tabulate the linear sieve functions F and f.
    SieveFns(SieveFnsArgs),
    /// Evaluate constant curves and envelopes.
    Constants(ConstantsArgs),
    /// Prime-modulus constants against Iwaniec's 8/(6-7ϖ).
    Table1,
    /// Curve values on a ϖ grid.
    Figures(FiguresArgs),
    /// Kloosterman, character and large-sieve experiments.
    Sums(SumsArgs),
    /// Prime counts in progressions against the Montgomery-Vaughan bound.
    VerifyBt(VerifyBtArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    MinSum,
    MaxF,
    MaxG,
}

#[derive(Debug, Args)]
pub struct ExppairsArgs {
    #[arg(long, value_enum)]
    pub optimize: Option<ObjectiveArg>,
    /// ϖ for max-g.
    #[arg(long)]
    pub varpi: Option<String>,
    /// Longest word searched.
    #[arg(long, default_value_t = ep::DEFAULT_DEPTH)]
    pub depth: usize,
    /// Evaluate a word such as ABA^3B.
    #[arg(long, conflicts_with_all = ["optimize", "list", "akb"])]
    pub word: Option<String>,
    /// List every pair reachable within the depth.
    #[arg(long, conflicts_with_all = ["optimize", "akb"])]
    pub list: bool,
    /// Closed form of A^(k-1)B.
    #[arg(long, conflicts_with = "optimize")]
    pub akb: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SieveFnsArgs {
    #[arg(long, default_value_t = 10.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 0.001)]
    pub step: f64,
    /// Report only these points instead of the whole grid.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Assumptions, e.g. prime,smooth,rp=0,moment=1/10,rstar,lindelof.
    #[arg(long, default_value = "")]
    pub assume: String,
    /// Exponent-pair search depth for the smooth-modulus family.
    #[arg(long, default_value_t = ep::DEFAULT_DEPTH)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Exponent pair as "kappa,lambda" or a process word.
    #[arg(long)]
    pub pair: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub varpi: Option<String>,
    /// Evaluate a single curve instead of the envelope.
    #[arg(long)]
    pub curve: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub curves: CurveArgs,
    /// Dump the curve catalog.
    #[arg(long, conflicts_with_all = ["varpi", "curve", "list"])]
    pub catalog: bool,
    /// List the curves admitted by the assumptions.
    #[arg(long, conflicts_with_all = ["varpi", "curve"])]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, default_value = "1/100")]
    pub min: String,
    #[arg(long, default_value = "1/2")]
    pub max: String,
    #[arg(long, default_value = "1/200")]
    pub step: String,
    #[command(flatten)]
    pub curves: CurveArgs,
}

#[derive(Debug, Args)]
pub struct SumsArgs {
    #[command(subcommand)]
    pub experiment: SumsCommand,
}

#[derive(Debug, Subcommand)]
pub enum SumsCommand {
    /// S(m, n; q) by direct summation.
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        q: u64,
    },
    /// Random checks of the Weil and Ramanujan bounds.
    Weil {
        #[arg(long, default_value_t = 300)]
        prime_cases: usize,
        #[arg(long, default_value_t = 100)]
        composite_cases: usize,
        #[arg(long, default_value_t = 100)]
        ramanujan_cases: usize,
        #[arg(long, default_value_t = 5000)]
        q_max: u64,
    },
    /// Random instances of the large sieve with both evaluation routes.
    LargeSieve {
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 100)]
        q_max: u64,
        #[arg(long, default_value_t = 300)]
        n_max: usize,
    },
    /// Fourier transform of Kl(ax)Kl(bx) over F_p.
    Vp {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Moments of Kloosterman sums twisted by random signs.
    Moment {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        nu: u32,
        #[arg(long, default_value_t = 20)]
        size: usize,
    },
    /// Weighted congruence count against its main term.
    Congruence {
        #[arg(long, default_value_t = 53)]
        q: u64,
        #[arg(long, default_value_t = 20)]
        m: u64,
        #[arg(long, default_value_t = 200.0)]
        n: f64,
    },
    /// Incomplete character sums over random characters and intervals.
    Characters {
        #[arg(long, default_value_t = 30030)]
        q: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Interval length; defaults to round(q^0.4).
        #[arg(long)]
        len: Option<u64>,
        /// Exponent pair for the smooth ratio, as a word or "kappa,lambda".
        #[arg(long, default_value = "AB")]
        pair: String,
    },
    /// Incomplete Kloosterman sums against square-root cancellation.
    Rstar {
        #[arg(long, default_value_t = 30030)]
        q: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value = "AB")]
        pair: String,
    },
}

#[derive(Debug, Args)]
pub struct VerifyBtArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub x: u64,
    /// Moduli to test.
    #[arg(long, value_delimiter = ',', default_value = "3,10,101,997")]
    pub q: Vec<u64>,
    /// Curve reported next to the empirical ratio.
    #[arg(long, default_value = "van-lint-richert")]
    pub curve: String,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Run the Montgomery-Vaughan grid q = 2..min(q_max, x/10) for each x.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_delimiter = ',', default_value = "10000,100000,1000000,10000000")]
    pub xs: Vec<u64>,
    #[arg(long, default_value_t = 1000)]
    pub q_max: u64,
    /// Print per-residue counts.
    #[arg(long)]
    pub residues: bool,
}

/// What a subcommand produced.
struct Outcome {
    command: &'static str,
    inputs: Value,
    result: Value,
    table: String,
    csv: String,
    failed: bool,
}

impl Outcome {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table.clone(),
            Format::Csv => self.csv.clone(),
            Format::Json => {
                let doc = json!({
                    "command": self.command,
                    "status": if self.failed { "fail" } else { "ok" },
                    "inputs": self.inputs,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("json output");
                s.push('\n');
                s
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Parses argv, runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // Unlocked handles: progress lines from worker threads also use stderr.
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let threads = cli.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
    });
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 2;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.render(cli.format).as_bytes());
            if outcome.failed {
                let _ = writeln!(err, "{}: a checked inequality failed", outcome.command);
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn progress(message: &str) {
    eprintln!("{message}");
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Exppairs(a) => exppairs(a),
        Command::SieveFns(a) => sieve_fns(a),
        Command::Constants(a) => constants(a),
        Command::Table1 => table1(),
        Command::Figures(a) => figures(a),
        Command::Sums(a) => sums(&a.experiment, cli.seed),
        Command::VerifyBt(a) => verify_bt(a),
    }
}

fn parse_rational(name: &str, text: &str) -> Result<Rational> {
    rational::parse(text).map_err(|e| Error::InvalidArgument(format!("--{name}: {e}")))
}

/// A word such as `ABA^3B` or an explicit `kappa,lambda[,nu]`.
fn parse_pair(text: &str) -> Result<(Option<ProcessWord>, ExponentPair)> {
    if text.contains(',') {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::InvalidArgument(format!("pair {text:?}: expected kappa,lambda[,nu]")));
        }
        let kappa = parse_rational("pair", parts[0])?;
        let lambda = parse_rational("pair", parts[1])?;
        let nu = match parts.get(2) {
            Some(t) => parse_rational("pair", t)?,
            None => rational::int(0),
        };
        return Ok((None, ExponentPair::new(kappa, lambda, nu)));
    }
    let word: ProcessWord = text.parse()?;
    let pair = ep::eval_word(&word);
    Ok((Some(word), pair))
}

fn curve_params(p: &ParamArgs) -> Result<CurveParams> {
    Ok(CurveParams {
        theta: p.theta.as_deref().map(|t| parse_rational("theta", t)).transpose()?,
        delta: p.delta.as_deref().map(|t| parse_rational("delta", t)).transpose()?,
        pair: p.pair.as_deref().map(|t| parse_pair(t).map(|x| x.1)).transpose()?,
    })
}

fn pair_cells(p: &ExponentPair) -> [String; 3] {
    [
        rational::to_string(&p.kappa),
        rational::to_string(&p.lambda),
        rational::to_string(&p.nu),
    ]
}

fn exppairs(a: &ExppairsArgs) -> Result<Outcome> {
    if let Some(text) = &a.word {
        let word: ProcessWord = text.parse()?;
        let pair = ep::eval_word(&word);
        let [k, l, n] = pair_cells(&pair);
        return Ok(Outcome {
            command: "exppairs",
            inputs: json!({ "word": text }),
            result: json!({ "word": word.to_string(), "compact": word.compact(), "pair": to_value(&pair) }),
            table: format!("word {}\npair {k} {l} {n}\n", word.compact()),
            csv: format!("word,kappa,lambda,nu\n{word},{k},{l},{n}\n"),
            failed: false,
        });
    }
    if let Some(k) = a.akb {
        let pair = ep::akb_formula(k)?;
        let [kk, l, n] = pair_cells(&pair);
        return Ok(Outcome {
            command: "exppairs",
            inputs: json!({ "akb": k }),
            result: json!({ "k": k, "pair": to_value(&pair) }),
            table: format!("k {k}\npair {kk} {l} {n}\n"),
            csv: format!("k,kappa,lambda,nu\n{k},{kk},{l},{n}\n"),
            failed: false,
        });
    }
    if a.list {
        let all = ep::enumerate_pairs(a.depth);
        let mut csv = String::from("word,kappa,lambda,nu\n");
        let mut rows = Vec::new();
        for (w, p) in &all {
            let [k, l, n] = pair_cells(p);
            let _ = writeln!(csv, "{w},{k},{l},{n}");
            rows.push(json!({ "word": w.to_string(), "pair": to_value(p) }));
        }
        return Ok(Outcome {
            command: "exppairs",
            inputs: json!({ "list": true, "depth": a.depth }),
            result: json!({ "count": all.len(), "pairs": rows }),
            table: csv.clone(),
            csv,
            failed: false,
        });
    }
    let objective = match a.optimize.unwrap_or(ObjectiveArg::MinSum) {
        ObjectiveArg::MinSum => Objective::MinSum,
        ObjectiveArg::MaxF => Objective::MaxF,
        ObjectiveArg::MaxG => Objective::MaxG(
            a.varpi.as_deref().map(|v| parse_rational("varpi", v)).transpose()?,
        ),
    };
    let best = ep::optimize(&objective, a.depth)?;
    let [k, l, n] = pair_cells(&best.pair);
    let value = rational::to_string(&best.value);
    Ok(Outcome {
        command: "exppairs",
        inputs: json!({ "optimize": objective.name(), "depth": a.depth, "varpi": a.varpi }),
        result: to_value(&best),
        table: format!(
            "word {}\npair {k} {l} {n}\nvalue {value} ({})\n",
            best.word,
            sig(rational::to_f64(&best.value), 10)
        ),
        csv: format!("objective,word,kappa,lambda,nu,value\n{},{},{k},{l},{n},{value}\n", objective.name(), best.word),
        failed: false,
    })
}

#[derive(Serialize)]
struct SievePoint {
    s: f64,
    upper: f64,
    lower: f64,
}

fn sieve_fns(a: &SieveFnsArgs) -> Result<Outcome> {
    let table = sieve_functions::solve(a.s_max, a.step)?;
    // Invariants on the computed grid: F decreasing, f increasing, f <= 1 <= F.
    let tol = 1e-12;
    let mut violations = 0usize;
    for i in 0..table.len() {
        let (u, l) = (table.upper[i], table.lower[i]);
        if l > 1.0 + tol || u < 1.0 - tol {
            violations += 1;
        }
        if i > 0 && (u > table.upper[i - 1] + tol || l < table.lower[i - 1] - tol) {
            violations += 1;
        }
    }
    let points: Vec<SievePoint> = if a.at.is_empty() {
        table
            .grid()
            .enumerate()
            .map(|(i, s)| SievePoint { s, upper: table.upper[i], lower: table.lower[i] })
            .collect()
    } else {
        a.at.iter()
            .map(|&s| {
                Ok(SievePoint {
                    s,
                    upper: table.upper_at(s)?,
                    lower: table.lower_at(s)?,
                })
            })
            .collect::<Result<_>>()?
    };
    let mut csv = String::from("s,F,f\n");
    for p in &points {
        let _ = writeln!(csv, "{},{},{}", sig(p.s, 12), sig(p.upper, 12), sig(p.lower, 12));
    }
    Ok(Outcome {
        command: "sieve-fns",
        inputs: json!({ "s_max": a.s_max, "step": a.step, "at": a.at }),
        result: json!({
            "effective_step": table.step,
            "s_max": table.s_max,
            "violations": violations,
            "points": to_value(&points),
        }),
        table: csv.clone(),
        csv,
        failed: violations > 0,
    })
}

fn constants(a: &ConstantsArgs) -> Result<Outcome> {
    let assumptions = Assumptions::parse_list(&a.curves.assume)?;
    if a.catalog {
        let cat = bt::catalog();
        let mut table = String::new();
        for c in &cat {
            let _ = writeln!(table, "{:<22} {:<40} {}", c.id, c.formula, c.source);
        }
        let mut csv = String::from("id,formula,source\n");
        for c in &cat {
            let _ = writeln!(csv, "{},\"{}\",\"{}\"", c.id, c.formula, c.source);
        }
        return Ok(Outcome {
            command: "constants",
            inputs: json!({ "catalog": true }),
            result: to_value(&cat),
            table,
            csv,
            failed: false,
        });
    }
    if a.list {
        let labels: Vec<String> = bt::list_curves(&assumptions).iter().map(|c| c.label()).collect();
        let text = labels.join("\n") + "\n";
        return Ok(Outcome {
            command: "constants",
            inputs: json!({ "list": true, "assume": a.curves.assume }),
            result: json!({ "curves": labels }),
            table: text.clone(),
            csv: format!("curve_id\n{text}"),
            failed: false,
        });
    }
    let varpi_text = a
        .varpi
        .as_deref()
        .ok_or(Error::MissingParameter("varpi"))?;
    let varpi = parse_rational("varpi", varpi_text)?;
    if let Some(name) = &a.curve {
        let id: CurveId = name.parse()?;
        let inst = CurveInstance::new(id, curve_params(&a.params)?);
        let value = inst.eval(&varpi)?;
        let shown = value.as_ref().map(rational::to_string).unwrap_or_else(|| "undefined".into());
        let approx = value
            .as_ref()
            .map(|v| sig(rational::to_f64(v), 10))
            .unwrap_or_default();
        return Ok(Outcome {
            command: "constants",
            inputs: json!({ "varpi": varpi_text, "curve": name }),
            result: json!({
                "curve": inst.label(),
                "varpi": rational::to_string(&varpi),
                "value": value.as_ref().map(rational::to_string),
            }),
            table: format!("{} at {}: {} {}\n", inst.label(), rational::to_string(&varpi), shown, approx),
            csv: format!("varpi,curve_id,value\n{},{},{}\n", rational::to_string(&varpi), inst.label(), shown),
            failed: false,
        });
    }
    let env = bt::envelope(&varpi, &assumptions, a.curves.depth)?;
    let mut table = format!("varpi {}\n", rational::to_string(&env.varpi));
    let mut csv = String::from("varpi,curve_id,value,best\n");
    for e in &env.admissible {
        let best = env.best.iter().any(|b| b.curve == e.curve);
        let _ = writeln!(
            table,
            "{} {:<48} {:<24} {}",
            if best { "*" } else { " " },
            e.curve,
            rational::to_string(&e.value),
            sig(rational::to_f64(&e.value), 10)
        );
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            rational::to_string(&env.varpi),
            e.curve,
            rational::to_string(&e.value),
            best
        );
    }
    if let Some(v) = env.best_value() {
        let _ = writeln!(table, "best {} ({})", rational::to_string(v), sig(rational::to_f64(v), 10));
    } else {
        table.push_str("best undefined\n");
    }
    Ok(Outcome {
        command: "constants",
        inputs: json!({ "varpi": varpi_text, "assume": a.curves.assume, "depth": a.curves.depth }),
        result: to_value(&env),
        table,
        csv,
        failed: false,
    })
}

fn table1() -> Result<Outcome> {
    let rows = bt::table1();
    let mut table = format!("{:<8} {:>8} {:>8} {:>6}\n", "varpi", "ours", "iwaniec", "gain%");
    for r in &rows {
        let _ = writeln!(
            table,
            "{:<8} {:>8} {:>8} {:>6}",
            rational::to_string(&r.varpi),
            r.ours_4dp,
            r.iwaniec_4dp,
            r.improvement_1dp
        );
    }
    Ok(Outcome {
        command: "table1",
        inputs: json!({}),
        result: to_value(&rows),
        table,
        csv: bt::table1_csv(&rows),
        failed: false,
    })
}

fn figures(a: &FiguresArgs) -> Result<Outcome> {
    let lo = parse_rational("min", &a.min)?;
    let hi = parse_rational("max", &a.max)?;
    let step = parse_rational("step", &a.step)?;
    let assumptions = Assumptions::parse_list(&a.curves.assume)?;
    progress(&format!("figures: evaluating curves on [{}, {})", a.min, a.max));
    let rows = bt::figure_data(&lo, &hi, &step, &assumptions, a.curves.depth)?;
    let csv = bt::figure_csv(&rows);
    Ok(Outcome {
        command: "figures",
        inputs: json!({ "min": a.min, "max": a.max, "step": a.step, "assume": a.curves.assume, "depth": a.curves.depth }),
        result: json!({ "rows": to_value(&rows) }),
        table: csv.clone(),
        csv,
        failed: false,
    })
}

fn random_prime(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    loop {
        let n = rng.gen_range(lo..=hi);
        if modular::is_prime(n) {
            return n;
        }
    }
}

fn sums(cmd: &SumsCommand, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *cmd {
        SumsCommand::Kloosterman { m, n, q } => {
            let s = arith::kloosterman(m, n, q)?;
            let d = modular::gcd(modular::gcd(modular::reduce(m, q), modular::reduce(n, q)), q);
            let bound = modular::tau(q) as f64 * (d as f64).sqrt() * (q as f64).sqrt();
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "kloosterman", "m": m, "n": n, "q": q }),
                result: json!({ "re": s.re, "im": s.im, "abs": s.norm(), "bound": bound }),
                table: format!("S({m},{n};{q}) = {} (bound {})\n", sig(s.re, 12), sig(bound, 8)),
                csv: format!("m,n,q,re,im,bound\n{m},{n},{q},{},{},{}\n", sig(s.re, 12), sig(s.im, 12), sig(bound, 12)),
                failed: s.norm() > bound + 1e-9,
            })
        }
        SumsCommand::Weil { prime_cases, composite_cases, ramanujan_cases, q_max } => {
            if q_max < 5 {
                return Err(crate::error::out_of_range("q_max", q_max, ">= 5"));
            }
            let mut rows = Vec::new();
            for _ in 0..prime_cases {
                let p = random_prime(&mut rng, 3, q_max);
                let m = rng.gen_range(1..p) as i64;
                let n = rng.gen_range(1..p) as i64;
                rows.push(("prime", m, n, p));
            }
            for _ in 0..composite_cases {
                let q = loop {
                    let q = rng.gen_range(4..=q_max);
                    if !modular::is_prime(q) {
                        break q;
                    }
                };
                let m = rng.gen_range(-(q as i64)..=q as i64);
                let n = rng.gen_range(-(q as i64)..=q as i64);
                rows.push(("composite", m, n, q));
            }
            for _ in 0..ramanujan_cases {
                let q = rng.gen_range(2..=q_max);
                let m = rng.gen_range(-(q as i64) * 3..=q as i64 * 3);
                rows.push(("ramanujan", m, 0, q));
            }
            let checked: Vec<Result<(f64, f64)>> = rows
                .par_iter()
                .map(|&(kind, m, n, q)| {
                    let s = arith::kloosterman(m, n, q)?.norm();
                    let bound = match kind {
                        "prime" => 2.0 * (q as f64).sqrt(),
                        "composite" => {
                            let d = modular::gcd(modular::gcd(modular::reduce(m, q), modular::reduce(n, q)), q);
                            modular::tau(q) as f64 * (d as f64).sqrt() * (q as f64).sqrt()
                        }
                        _ => modular::gcd(modular::reduce(m, q), q) as f64,
                    };
                    Ok((s, bound))
                })
                .collect();
            let mut csv = String::from("kind,m,n,q,abs,bound\n");
            let mut json_rows = Vec::new();
            let mut failures = 0;
            for (&(kind, m, n, q), r) in rows.iter().zip(checked) {
                let (s, bound) = r?;
                if s > bound + 1e-9 {
                    failures += 1;
                }
                let _ = writeln!(csv, "{kind},{m},{n},{q},{},{}", sig(s, 12), sig(bound, 12));
                json_rows.push(json!({ "kind": kind, "m": m, "n": n, "q": q, "abs": s, "bound": bound }));
            }
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "weil", "prime_cases": prime_cases, "composite_cases": composite_cases, "ramanujan_cases": ramanujan_cases, "q_max": q_max }),
                result: json!({ "failures": failures, "cases": json_rows }),
                table: format!("weil: {} cases, {failures} violations\n", rows.len()),
                csv,
                failed: failures > 0,
            })
        }
        SumsCommand::LargeSieve { cases, q_max, n_max } => {
            if q_max < 1 || n_max < 1 {
                return Err(Error::InvalidArgument("q_max and n_max must be positive".into()));
            }
            let mut inst = Vec::new();
            for _ in 0..cases {
                let q = rng.gen_range(1..=q_max);
                let len = rng.gen_range(1..=n_max);
                let start = rng.gen_range(-1000i64..=1000);
                let alpha: Vec<Complex64> = (0..len)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                inst.push((q, start, alpha));
            }
            let checks: Vec<arith::LargeSieveCheck> = inst
                .par_iter()
                .map(|(q, start, alpha)| arith::large_sieve_check(*q, *start, alpha))
                .collect::<Result<_>>()?;
            let mut csv = String::from("q,len,lhs,lhs_congruence,rhs,pass\n");
            let mut failures = 0;
            let mut worst_gap: f64 = 0.0;
            for c in &checks {
                let gap = c.route_gap() / c.lhs.abs().max(1.0);
                worst_gap = worst_gap.max(gap);
                if !c.pass || gap > 1e-9 {
                    failures += 1;
                }
                let _ = writeln!(csv, "{},{},{},{},{},{}", c.q, c.len, sig(c.lhs, 12), sig(c.lhs_congruence, 12), sig(c.rhs, 12), c.pass);
            }
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "large-sieve", "cases": cases, "q_max": q_max, "n_max": n_max }),
                result: json!({ "failures": failures, "max_relative_route_gap": worst_gap, "cases": to_value(&checks) }),
                table: format!("large sieve: {cases} cases, {failures} failures, route gap {}\n", sig(worst_gap, 3)),
                csv,
                failed: failures > 0,
            })
        }
        SumsCommand::Vp { p, a, b } => {
            let table = arith::kloosterman_table(p)?;
            let v = arith::vp_transform(&table, a, b)?;
            let max = v.max_abs();
            let distinct = modular::reduce(a, p) != modular::reduce(b, p);
            let failed = distinct && max > arith::VP_BOUND;
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "vp", "p": p, "a": a, "b": b }),
                result: json!({ "max_abs": max, "energy": v.energy(), "threshold": arith::VP_BOUND, "bounded_case": distinct }),
                table: format!("p {p} a {a} b {b}: max |V| {} energy {} threshold {}\n", sig(max, 8), sig(v.energy(), 10), arith::VP_BOUND),
                csv: format!("p,a,b,max_abs,energy\n{p},{a},{b},{},{}\n", sig(max, 12), sig(v.energy(), 12)),
                failed,
            })
        }
        SumsCommand::Moment { p, nu, size } => {
            let table = arith::kloosterman_table(p)?;
            if size as u64 > p {
                return Err(crate::error::out_of_range("size", size, format!("<= {p}")));
            }
            let subset = rand::seq::index::sample(&mut rng, p as usize, size)
                .into_iter()
                .map(|i| i as u64 + 1)
                .collect::<Vec<_>>();
            let beta: Vec<f64> = (0..size).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let m = arith::kl_moment(&table, nu, &subset, &beta)?;
            let failed = nu == 2 && m.ratio > arith::KL_MOMENT_NU2_BOUND;
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "moment", "p": p, "nu": nu, "size": size }),
                result: json!({ "moment": m.moment, "ratio": m.ratio, "subset": subset }),
                table: format!("p {p} nu {nu} |N| {size}: moment {} ratio {}\n", sig(m.moment, 10), sig(m.ratio, 6)),
                csv: format!("p,nu,size,moment,ratio\n{p},{nu},{size},{},{}\n", sig(m.moment, 12), sig(m.ratio, 12)),
                failed,
            })
        }
        SumsCommand::Congruence { q, m, n } => {
            let ones = vec![1.0; m as usize];
            let c = arith::congruence_count(q, m, &ones, &ones, &ProductBump::new(n))?;
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "congruence", "q": q, "m": m, "n": n }),
                result: to_value(&c),
                table: format!(
                    "q {q} M {m} N {n}: R {} main {} relative error {}\n",
                    sig(c.r_exact, 12),
                    sig(c.main_term, 12),
                    sig(c.relative_error, 4)
                ),
                csv: format!(
                    "q,m,n,r_exact,main_term,relative_error\n{q},{m},{n},{},{},{}\n",
                    sig(c.r_exact, 15),
                    sig(c.main_term, 15),
                    sig(c.relative_error, 6)
                ),
                failed: false,
            })
        }
        SumsCommand::Characters { q, cases, len, ref pair } => {
            let (_, pair) = parse_pair(pair)?;
            let group = CharacterGroup::new(q)?;
            if group.size() < 2 {
                return Err(Error::InvalidArgument(format!("q = {q} has no non-principal character")));
            }
            let len = len.unwrap_or_else(|| (q as f64).powf(0.4).round() as u64).max(1);
            let mut csv = String::from("q,chi,interval_start,interval_len,abs_sum,burgess_r2,smooth_ratio\n");
            let mut rows = Vec::new();
            let pv = arith::incomplete::polya_vinogradov_bound(q);
            let mut over_pv = 0;
            for _ in 0..cases {
                let chi = rng.gen_range(1..group.size());
                let start = rng.gen_range(0..q as i64);
                let s = arith::incomplete_char_sum(&group, chi, Interval::new(start, len))?;
                let smooth = arith::incomplete::smooth_char_ratio(s.abs, q, len, &pair);
                if s.abs > pv {
                    over_pv += 1;
                }
                let _ = writeln!(csv, "{q},{chi},{start},{len},{},{},{}", sig(s.abs, 10), sig(s.burgess_ratios[1], 8), sig(smooth, 8));
                rows.push(json!({ "chi": chi, "start": start, "len": len, "abs": s.abs, "burgess_ratios": s.burgess_ratios, "smooth_ratio": smooth }));
            }
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "characters", "q": q, "cases": cases, "len": len, "pair": to_value(&pair) }),
                result: json!({ "polya_vinogradov": pv, "violations": over_pv, "cases": rows }),
                table: csv.clone(),
                csv,
                failed: over_pv > 0,
            })
        }
        SumsCommand::Rstar { q, cases, ref pair } => {
            let (_, pair) = parse_pair(pair)?;
            if q < 3 {
                return Err(crate::error::out_of_range("q", q, ">= 3"));
            }
            let mut inst = Vec::new();
            for _ in 0..cases {
                let h = rng.gen_range(1..q as i64);
                let len = rng.gen_range(2..=q);
                let start = rng.gen_range(0..q as i64);
                inst.push((h, start, len));
            }
            let sums: Vec<arith::IncompleteKloosterman> = inst
                .par_iter()
                .map(|&(h, start, len)| arith::incomplete_kloosterman(h, q, Interval::new(start, len), &pair))
                .collect::<Result<_>>()?;
            let mut csv = String::from("q,h,interval_start,interval_len,abs_sum,rstar_ratio,smooth_ratio\n");
            let mut violations = 0;
            for (&(h, start, len), s) in inst.iter().zip(&sums) {
                if s.abs > arith::incomplete::kloosterman_completion_bound(h, q) {
                    violations += 1;
                }
                let _ = writeln!(csv, "{q},{h},{start},{len},{},{},{}", sig(s.abs, 10), sig(s.rstar_ratio, 8), sig(s.smooth_ratio, 8));
            }
            let max_rstar = sums.iter().map(|s| s.rstar_ratio).fold(0.0, f64::max);
            Ok(Outcome {
                command: "sums",
                inputs: json!({ "experiment": "rstar", "q": q, "cases": cases, "pair": to_value(&pair) }),
                result: json!({ "violations": violations, "max_rstar_ratio": max_rstar, "cases": to_value(&sums) }),
                table: csv.clone(),
                csv,
                failed: violations > 0,
            })
        }
    }
}

fn verify_bt(a: &VerifyBtArgs) -> Result<Outcome> {
    if a.grid {
        let mut all = Vec::new();
        for &x in &a.xs {
            progress(&format!("verify-bt: Montgomery-Vaughan grid at x = {x}"));
            all.extend(pc::mv_grid(&[x], a.q_max)?);
        }
        let failures: Vec<&pc::MvCheck> = all.iter().filter(|c| !c.pass).collect();
        let mut csv = String::from("x,q,max_a,max_count,mv_bound,pass\n");
        for c in &all {
            let _ = writeln!(csv, "{},{},{},{},{},{}", c.x, c.q, c.max_residue, c.max_count, sig(c.bound, 10), c.pass);
        }
        let tightest = all
            .iter()
            .map(|c| c.max_count as f64 / c.bound)
            .fold(0.0, f64::max);
        return Ok(Outcome {
            command: "verify-bt",
            inputs: json!({ "grid": true, "xs": a.xs, "q_max": a.q_max }),
            result: json!({ "checks": all.len(), "failures": failures.len(), "max_count_over_bound": tightest, "failed_cases": to_value(&failures) }),
            table: format!(
                "Montgomery-Vaughan grid: {} checks, {} failures, largest count/bound {}\n",
                all.len(),
                failures.len(),
                sig(tightest, 6)
            ),
            csv,
            failed: !failures.is_empty(),
        });
    }
    let id: CurveId = a.curve.parse()?;
    let mut params = curve_params(&a.params)?;
    if id == CurveId::BurgessLike && params.theta.is_none() {
        params.theta = Some(bt::kim_sarnak_theta());
    }
    let curve = CurveInstance::new(id, params);
    progress(&format!("verify-bt: sieving to {}", a.x));
    let primes = pc::prime_list_u32(a.x)?;
    let mut rows = Vec::new();
    let mut residues = String::from("x,q,a,count\n");
    let mut failed = false;
    for &q in &a.q {
        if q < 2 || q >= a.x {
            return Err(crate::error::out_of_range("q", q, format!("[2, {})", a.x)));
        }
        let counts = pc::pi_in_ap_from(&primes, a.x, q)?;
        if a.residues {
            residues.push_str(counts.to_csv().trim_start_matches("x,q,a,count\n"));
        }
        let emp = pc::bt_empirical_from(&counts, &curve)?;
        if emp.max_count as f64 > emp.mv_bound {
            failed = true;
        }
        rows.push(emp);
    }
    let mut table = format!("{:>12} {:>8} {:>8} {:>10} {:>12} {:>10} {:>10}\n", "x", "q", "varpi", "max_count", "mv_bound", "ratio", "C");
    for r in &rows {
        let _ = writeln!(
            table,
            "{:>12} {:>8} {:>8} {:>10} {:>12} {:>10} {:>10}",
            r.x,
            r.q,
            sig(r.varpi, 4),
            r.max_count,
            sig(r.mv_bound, 8),
            sig(r.ratio, 6),
            r.c_value.map(|c| sig(c, 6)).unwrap_or_else(|| "undefined".into())
        );
    }
    let csv = if a.residues { residues } else { pc::summary_csv(&rows) };
    Ok(Outcome {
        command: "verify-bt",
        inputs: json!({ "x": a.x, "q": a.q, "curve": curve.label() }),
        result: json!({ "rows": to_value(&rows) }),
        table,
        csv,
        failed,
    })
}
