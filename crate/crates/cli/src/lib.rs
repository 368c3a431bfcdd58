//! Command-line front end: tables of winnable counts and percentages,
//! optimal positions, limits, invariant checks, simulation and the Dyck
//! path bijection for single inputs.
//!
//! [`run`] does all the work and returns the bytes to emit plus an exit
//! status, so the binary is a thin wrapper and tests can drive commands
//! without spawning processes.

mod render;
mod sizes;
mod verify;

use std::fmt::Write as _;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use bestchoice::count::{catalan, s_combo, win_probability_321, EvalMode, EXACT_MODE_LIMIT};
use bestchoice::dyck::{dyck_from_perm, ne_corners, perm_from_dyck};
use bestchoice::oracle::{brute_count_grid_cached, Enumerator, OracleCache, FILTER_DEFAULT_LIMIT};
use bestchoice::perm::{avoids, left_to_right_maxima, winnable_interval};
use bestchoice::sampler::{estimate_win_rate_parallel, RngStream};
use bestchoice::strategy::{asymptotic_success, limit_of_combo, optimal_k_321, win_probability_231, ModelId};
use bestchoice::{DyckPath, Pattern, Permutation, WinTable};

pub use render::{render_table, truncate_float, truncated_percent, Format, View};
pub use sizes::parse_sizes;

#[derive(Debug, Parser)]
#[command(name = "bestchoice", version, about = "Positional strategies on pattern-avoiding interview orders")]
pub struct Cli {
    /// Output format; tables default to csv, `verify` to plain text and
    /// everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Destination file, or `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub output: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of k-winnable avoiders for each N, columns k-N = -11..-1.
    Counts(CountsArgs),
    /// Percentage of k-winnable avoiders, same layout.
    Probs(ProbsArgs),
    /// Best position for each N, with every tie.
    OptimalK(OptimalArgs),
    /// Limiting success probabilities and the combinations they come from.
    Limits(LimitsArgs),
    /// Check every invariant up to a size; exits 1 on the first failure.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of a positional strategy's win rate.
    Simulate(SimulateArgs),
    /// Permutation, Dyck path and corner set for one input.
    Bijection(BijectionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    #[value(name = "321")]
    P321,
    #[value(name = "231")]
    P231,
}

impl PatternArg {
    fn pattern(self) -> Pattern {
        match self {
            PatternArg::P321 => Pattern::P321,
            PatternArg::P231 => Pattern::P231,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exact,
    Ratio,
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    #[arg(long, value_enum, default_value = "321")]
    pub pattern: PatternArg,
    /// Sizes, e.g. `2..12` or `2..18,100`.
    #[arg(long, default_value = "2..12")]
    pub n: String,
    /// Count by exhaustive enumeration instead of the closed form.
    #[arg(long)]
    pub brute: bool,
}

#[derive(Debug, Args)]
pub struct ProbsArgs {
    #[arg(long, value_enum, default_value = "321")]
    pub pattern: PatternArg,
    /// Sizes, e.g. `2..18,10^5`.
    #[arg(long, default_value = "2..18")]
    pub n: String,
    /// `auto` is exact up to N = 5000 and ratio mode beyond.
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    #[arg(long, value_enum, default_value = "321")]
    pub pattern: PatternArg,
    #[arg(long)]
    pub n: String,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Also list the limits of S_1 .. S_upto.
    #[arg(long, default_value_t = 11)]
    pub upto: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "321")]
    pub pattern: PatternArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent RNG streams, run in parallel; the result depends only on
    /// the arguments.
    #[arg(long, default_value_t = 1)]
    pub streams: u64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BijectionArgs {
    /// A 321-avoiding permutation, e.g. `41728356` or `4,1,7,2`.
    #[arg(long)]
    pub perm: Option<String>,
    /// A Dyck path over N and E, e.g. `NNNNEENNNEENEEEE`.
    #[arg(long)]
    pub path: Option<String>,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// 0 on success, 1 when `verify` found a counterexample.
    pub status: u8,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { status: 0, output }
    }
}

/// Executes one parsed request. Errors are usage or input errors; the
/// binary reports them with exit status 2.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let table_fmt = cli.format.unwrap_or(Format::Csv);
    let fmt = cli.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Counts(a) => counts(a, table_fmt),
        Command::Probs(a) => probs(a, table_fmt),
        Command::OptimalK(a) => optimal(a, fmt),
        Command::Limits(a) => limits(a, fmt),
        Command::Verify(a) => verify_cmd(a, cli.format.unwrap_or(Format::Pretty)),
        Command::Simulate(a) => simulate(a, fmt),
        Command::Bijection(a) => bijection(a, fmt),
    }
}

fn sizes_at_least(text: &str, min: usize) -> Result<Vec<usize>> {
    let sizes = parse_sizes(text)?;
    if let Some(bad) = sizes.iter().find(|&&n| n < min) {
        bail!("N = {bad} is too small; sizes start at {min}");
    }
    Ok(sizes)
}

fn counts(a: &CountsArgs, fmt: Format) -> Result<Outcome> {
    let sizes = sizes_at_least(&a.n, 2)?;
    let q = a.pattern.pattern();
    if a.brute {
        let max = *sizes.iter().max().expect("nonempty");
        let enumerator = if max <= FILTER_DEFAULT_LIMIT {
            Enumerator::default()
        } else {
            Enumerator::structural()
        };
        let cache = OracleCache::from_env();
        let grid = brute_count_grid_cached(sizes.iter().copied(), q, &enumerator, cache.as_ref())?;
        // reuse the closed-form table's layout, with brute-force numbers
        let mut table = WinTable::build(q, sizes.iter().copied(), EvalMode::Exact)?;
        for row in &mut table.rows {
            for cell in &mut row.cells {
                let c = grid.get(row.n, cell.k).context("grid entry missing")?.clone();
                cell.fraction = BigRational::new(c.clone().into(), catalan(row.n).into())
                    .to_f64()
                    .unwrap_or(f64::NAN);
                cell.count = Some(c);
            }
        }
        return Ok(Outcome::ok(render_table(&table, View::Counts, fmt)));
    }
    if let Some(big) = sizes.iter().find(|&&n| n > EXACT_MODE_LIMIT) {
        bail!("exact counts are limited to N <= {EXACT_MODE_LIMIT} (got {big}); use `probs` for larger N");
    }
    let table = WinTable::build(q, sizes, EvalMode::Exact)?;
    Ok(Outcome::ok(render_table(&table, View::Counts, fmt)))
}

fn probs(a: &ProbsArgs, fmt: Format) -> Result<Outcome> {
    let sizes = sizes_at_least(&a.n, 2)?;
    let mode = match a.mode {
        ModeArg::Auto => EvalMode::Auto,
        ModeArg::Exact => EvalMode::Exact,
        ModeArg::Ratio => EvalMode::Ratio,
    };
    let table = WinTable::build(a.pattern.pattern(), sizes, mode)?;
    Ok(Outcome::ok(render_table(&table, View::Percent, fmt)))
}

#[derive(Serialize)]
struct OptimalLine {
    #[serde(rename = "N")]
    n: usize,
    k_star: usize,
    ties: Vec<usize>,
    prob_num: String,
    prob_den: String,
    prob_float: f64,
}

fn optimal(a: &OptimalArgs, fmt: Format) -> Result<Outcome> {
    let sizes = sizes_at_least(&a.n, 2)?;
    let mut lines = Vec::new();
    for n in sizes {
        let line = match a.pattern {
            PatternArg::P321 => {
                let s = optimal_k_321(n)?;
                OptimalLine {
                    n,
                    k_star: s.k_star,
                    ties: s.ties,
                    prob_num: s.win_prob.numerator().to_string(),
                    prob_den: s.win_prob.denominator().to_string(),
                    prob_float: s.win_prob.to_f64(),
                }
            }
            PatternArg::P231 => {
                // every position ties; report the largest, as for 321
                let p = win_probability_231(n)?;
                OptimalLine {
                    n,
                    k_star: n - 1,
                    ties: (0..n).collect(),
                    prob_num: p.numerator().to_string(),
                    prob_den: p.denominator().to_string(),
                    prob_float: p.to_f64(),
                }
            }
        };
        lines.push(line);
    }
    let mut out = String::new();
    match fmt {
        Format::Json => {
            for l in &lines {
                out.push_str(&serde_json::to_string(l)?);
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("N,k_star,ties,prob_num,prob_den,prob_float\n");
            for l in &lines {
                let ties: Vec<String> = l.ties.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    l.n,
                    l.k_star,
                    ties.join(";"),
                    l.prob_num,
                    l.prob_den,
                    l.prob_float
                );
            }
        }
        Format::Pretty => {
            for l in &lines {
                let ties = if l.ties.len() > 1 {
                    format!("  (ties: {:?})", l.ties)
                } else {
                    String::new()
                };
                let _ = writeln!(
                    out,
                    "N={:<6} k*={:<6} (N-{})  {}/{} = {:.4}%{ties}",
                    l.n,
                    l.k_star,
                    l.n - l.k_star,
                    l.prob_num,
                    l.prob_den,
                    100.0 * l.prob_float
                );
            }
        }
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct ModelLimit {
    model: String,
    position: String,
    combo: String,
    limit: String,
    float: f64,
}

#[derive(Serialize)]
struct ShiftLimit {
    i: usize,
    position: String,
    combo: String,
    limit: String,
    float: f64,
}

#[derive(Serialize)]
struct LimitsDoc {
    models: Vec<ModelLimit>,
    s_limits: Vec<ShiftLimit>,
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn limits(a: &LimitsArgs, fmt: Format) -> Result<Outcome> {
    ensure!(a.upto >= 1, "--upto must be at least 1");
    let models = [(ModelId::Model231, 1), (ModelId::Model321, 3)]
        .into_iter()
        .map(|(m, i)| {
            let lim = asymptotic_success(m);
            Ok(ModelLimit {
                model: m.to_string(),
                // in the 231 model every position does equally well
                position: if m == ModelId::Model231 { "any".into() } else { format!("N-{i}") },
                combo: s_combo(i)?.to_string(),
                float: ratio_f64(&lim),
                limit: lim.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s_limits = (1..=a.upto)
        .map(|i| {
            let combo = s_combo(i)?;
            let lim = limit_of_combo(&combo);
            Ok(ShiftLimit {
                i,
                position: format!("N-{i}"),
                combo: combo.to_string(),
                float: ratio_f64(&lim),
                limit: lim.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = LimitsDoc { models, s_limits };
    let out = match fmt {
        Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
        Format::Csv => {
            let mut out = String::from("i,position,limit,float,combo\n");
            for s in &doc.s_limits {
                let _ = writeln!(out, "{},{},{},{},\"{}\"", s.i, s.position, s.limit, s.float, s.combo);
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for m in &doc.models {
                let _ = writeln!(
                    out,
                    "{}: k = {} wins {} = {} in the limit, from {}",
                    m.model, m.position, m.limit, m.float, m.combo
                );
            }
            out.push('\n');
            for s in &doc.s_limits {
                let _ = writeln!(out, "S_{:<3} {:>16} = {:<10.6}  {}", s.i, s.limit, s.float, s.combo);
            }
            out
        }
    };
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct CheckLine<'a> {
    check: &'a str,
    upto: usize,
    ok: bool,
    counterexample: Option<&'a str>,
}

fn verify_cmd(a: &VerifyArgs, fmt: Format) -> Result<Outcome> {
    ensure!(a.n_max >= 2, "--n-max must be at least 2");
    let mut out = String::new();
    let checks = verify::run_checks(a.n_max, |_| {});
    for c in &checks {
        match fmt {
            Format::Json => {
                let line = CheckLine {
                    check: c.name,
                    upto: c.upto,
                    ok: c.outcome.is_ok(),
                    counterexample: c.outcome.as_ref().err().map(String::as_str),
                };
                out.push_str(&serde_json::to_string(&line)?);
                out.push('\n');
            }
            _ => match &c.outcome {
                Ok(()) => {
                    let _ = writeln!(out, "ok   {} (N <= {})", c.name, c.upto);
                }
                Err(e) => {
                    let _ = writeln!(out, "FAIL {}: {e}", c.name);
                }
            },
        }
    }
    let failed = checks.last().is_some_and(|c| c.outcome.is_err());
    Ok(Outcome {
        status: u8::from(failed),
        output: out,
    })
}

fn simulate(a: &SimulateArgs, fmt: Format) -> Result<Outcome> {
    ensure!(a.n >= 1, "--n must be at least 1");
    ensure!(a.k < a.n, "--k must be below N");
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let q = a.pattern.pattern();
    let e = estimate_win_rate_parallel(a.n, a.k, q, a.trials, a.seed, a.streams)?;
    let out = match fmt {
        Format::Json => serde_json::to_string(&e)? + "\n",
        Format::Csv => format!(
            "trials,wins,p_hat,stderr\n{},{},{},{}\n",
            e.trials, e.wins, e.p_hat, e.stderr
        ),
        Format::Pretty => {
            let mut out = format!(
                "N={} k={} pattern={q} seed={} streams={} rng={}\n{} wins in {} trials: p_hat = {:.6} +- {:.6}\n",
                a.n,
                a.k,
                a.seed,
                a.streams,
                RngStream::ALGORITHM,
                e.wins,
                e.trials,
                e.p_hat,
                e.stderr
            );
            let exact = match q {
                Pattern::P321 if a.n <= EXACT_MODE_LIMIT => Some(win_probability_321(a.k, a.n)?),
                Pattern::P231 if a.n <= EXACT_MODE_LIMIT => Some(win_probability_231(a.n)?),
                _ => None,
            };
            if let Some(p) = exact {
                let _ = writeln!(
                    out,
                    "exact {} = {:.6}, {:.2} standard errors away",
                    p,
                    p.to_f64(),
                    e.z_score(p.to_f64())
                );
            }
            out
        }
    };
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct BijectionDoc {
    #[serde(rename = "N")]
    n: usize,
    perm: String,
    path: String,
    corners: Vec<[usize; 2]>,
    lr_maxima: Vec<[usize; 2]>,
    winnable_k: [usize; 2],
    avoids_231: bool,
}

fn bijection(a: &BijectionArgs, fmt: Format) -> Result<Outcome> {
    let (perm, path) = match (&a.perm, &a.path) {
        (Some(p), None) => {
            let perm: Permutation = p.parse()?;
            let path = dyck_from_perm(&perm)?;
            (perm, path)
        }
        (None, Some(d)) => {
            let path: DyckPath = d.parse()?;
            (perm_from_dyck(&path), path)
        }
        _ => bail!("give exactly one of --perm and --path"),
    };
    let iv = winnable_interval(&perm);
    let doc = BijectionDoc {
        n: perm.len(),
        perm: perm.to_string(),
        path: path.to_string(),
        corners: ne_corners(&path)
            .corners()
            .iter()
            .map(|c| [c.column, c.height])
            .collect(),
        lr_maxima: left_to_right_maxima(&perm)
            .entries()
            .iter()
            .map(|&(pos, v)| [pos, v as usize])
            .collect(),
        winnable_k: [iv.start, iv.end - 1],
        avoids_231: avoids(&perm, Pattern::P231),
    };
    let pairs = |v: &[[usize; 2]]| v.iter().map(|[a, b]| format!("({a},{b})")).collect::<Vec<_>>();
    let out = match fmt {
        Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
        Format::Csv => format!(
            "N,perm,path,corners,winnable_k_min,winnable_k_max\n{},{},{},\"{}\",{},{}\n",
            doc.n,
            doc.perm,
            doc.path,
            pairs(&doc.corners).join(","),
            doc.winnable_k[0],
            doc.winnable_k[1]
        ),
        Format::Pretty => format!(
            "permutation  {}\ndyck path    {}\ncorners      {{{}}}\nLR maxima    {}\nwinnable for {} <= k <= {}\n",
            doc.perm,
            doc.path,
            pairs(&doc.corners).join(","),
            pairs(&doc.lr_maxima).join(" "),
            doc.winnable_k[0],
            doc.winnable_k[1]
        ),
    };
    Ok(Outcome::ok(out))
}

/// Parses `args` (program name first), runs the command and honours
/// `--output`. Returns `(status, stdout, stderr)`; usage and input errors
/// map to status 2.
pub fn run_args<I, T>(args: I) -> (u8, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    match run(&cli).and_then(|o| deliver(&cli.output, o)) {
        Ok(o) => (o.status, o.output, String::new()),
        Err(e) => (2, String::new(), format!("error: {e:#}\n")),
    }
}

// Writes to the requested file, leaving nothing for standard output.
fn deliver(dest: &str, o: Outcome) -> Result<Outcome> {
    if dest == "-" {
        return Ok(o);
    }
    std::fs::write(dest, &o.output).with_context(|| format!("cannot write {dest}"))?;
    Ok(Outcome {
        status: o.status,
        output: String::new(),
    })
}
