//! Argument definitions and dispatch for the `lynprof` binary.
//!
//! Every command returns one JSON payload. Diagnostics go to stderr and
//! never into the payload, so identical arguments give identical stdout.

use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lynprof::construction::{
    build, certify_det_nonzero, context, homomorphism_set_with_budget, jacobian_at, leading_monomial,
    leading_monomial_coefficient, symbolic_jacobian,
};
use lynprof::flagalg::{dimension, express, lemma_reduce, lyndon_densities, multi_product, product};
use lynprof::poly::det_rational;
use lynprof::rational::{format_rational, parse_rational, to_f64};
use lynprof::solver::{default_params, probe_ball, solve, target_densities};
use lynprof::tournamentons::{density, normalization_check, sample};
use lynprof::tournaments::{are_isomorphic, direct_sum, enumerate_exact, strongly_connected_components};
use lynprof::verify::{self, Level};
use lynprof::words::{
    cfl_factorize, enumerate_lyndon, is_lyndon, is_lyndon_tournament, lex_compare, multi_shuffle, shuffle,
    sigma_rank, tournament_less, tournament_of, word_of,
};
use lynprof::{Budget, Error, Polynomial, Rational, SolveOptions, StepTournamenton, TieBreak, Tournament, Word, WkContext, WkParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lynprof", version, about = "Tournament densities, Lyndon words and the W_k construction")]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock cap for the heavy enumerations.
    #[arg(long, global = true, default_value_t = 600.0)]
    pub budget_seconds: f64,
    /// Worker threads for data-parallel steps; the output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Newton tolerance on the log-residual.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Include Newton iterates in solver reports.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// All isomorphism classes on n vertices, as canonical encodings.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Canonical form and automorphism count.
    Canon {
        tournament: String,
        /// Also test isomorphism with this tournament.
        #[arg(long)]
        other: Option<String>,
        /// Include the edge list.
        #[arg(long)]
        adjacency: bool,
    },
    /// Strong components; several arguments are joined by direct sum first.
    Scc {
        #[arg(required = true)]
        parts: Vec<String>,
    },
    /// Word of a tournament, or the reverse and comparisons.
    #[command(group(ArgGroup::new("mode").args(["from_word", "rank", "compare", "less"])))]
    Word {
        input: String,
        /// Read INPUT as a word and print its tournament.
        #[arg(long)]
        from_word: bool,
        /// Position of a strong tournament in the letter order.
        #[arg(long)]
        rank: bool,
        /// Lexicographic comparison of INPUT and this word.
        #[arg(long)]
        compare: Option<String>,
        /// Whether INPUT precedes this tournament in the total order.
        #[arg(long)]
        less: Option<String>,
    },
    /// Lyndon tournaments on at most k vertices, or a single check.
    #[command(group(ArgGroup::new("target").args(["k", "check"]).required(true)))]
    Lyndon {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        check: Option<String>,
    },
    /// Chen-Fox-Lyndon factorization of a word.
    Factorize { word: String },
    /// Shuffle product of two or more words.
    Shuffle {
        #[arg(num_args = 2.., required = true)]
        words: Vec<String>,
    },
    /// Flag product of two or more tournaments.
    Product {
        #[arg(num_args = 2.., required = true)]
        parts: Vec<String>,
    },
    /// Density of a tournament as a polynomial in Lyndon densities.
    Express {
        tournament: String,
        /// Print the one-step reduction instead.
        #[arg(long, conflicts_with = "at")]
        reduce: bool,
        /// Evaluate at the Lyndon densities of this tournamenton file.
        #[arg(long)]
        at: Option<PathBuf>,
    },
    /// Number of Lyndon tournaments on at most k vertices.
    Dimension {
        #[arg(long)]
        k: usize,
    },
    /// Exact density in a step tournamenton.
    #[command(group(ArgGroup::new("what").args(["tournament", "normalization"]).required(true)))]
    Density {
        tournament: Option<String>,
        #[arg(long)]
        tournamenton: PathBuf,
        /// Sum of densities over all classes on this many vertices.
        #[arg(long)]
        normalization: Option<usize>,
    },
    /// The blow-up W_k at given or default parameters.
    BuildWk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        params: Option<PathBuf>,
        /// Include the density polynomials.
        #[arg(long)]
        symbolic: bool,
        /// Include the homomorphism sets into the host.
        #[arg(long)]
        homomorphisms: bool,
    },
    /// Jacobian of the Lyndon densities with respect to s.
    Jacobian {
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "symbolic")]
        params: Option<PathBuf>,
        /// Polynomial entries instead of values.
        #[arg(long)]
        symbolic: bool,
        /// Include the exact determinant.
        #[arg(long, conflicts_with = "symbolic")]
        det: bool,
    },
    /// A rational point where the Jacobian determinant is non-zero.
    Certify {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Coefficient of the leading monomial of the determinant instead.
        #[arg(long)]
        leading: bool,
    },
    /// Newton inversion of target Lyndon densities.
    Solve {
        #[arg(long)]
        k: usize,
        /// Comma-separated decimals or p/q.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        target: Vec<String>,
        /// Take the fixed t-values from this parameter file.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        initial: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100)]
        max_iterations: usize,
    },
    /// Solver success rate on random targets near a centre.
    Probe {
        #[arg(long)]
        k: usize,
        /// Centre; defaults to the densities at the default parameters.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        center: Option<Vec<String>>,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// A random tournament drawn from a step tournamenton.
    Sample {
        #[arg(long)]
        tournamenton: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Run the built-in invariant checks.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Fast)]
        level: VerifyLevel,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Fast,
    Full,
}

/// Where a library operation is exposed: `command`, plus `flag` when the
/// operation is behind an option of that command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Route {
    pub operation: &'static str,
    pub command: &'static str,
    pub flag: Option<&'static str>,
}

const fn route(operation: &'static str, command: &'static str, flag: Option<&'static str>) -> Route {
    Route { operation, command, flag }
}

pub const ROUTES: &[Route] = &[
    route("tournaments::parse", "canon", None),
    route("tournaments::encode", "canon", None),
    route("tournaments::canonicalize", "canon", None),
    route("tournaments::are_isomorphic", "canon", Some("other")),
    route("tournaments::automorphism_count", "canon", None),
    route("tournaments::enumerate_exact", "enumerate", None),
    route("tournaments::strongly_connected_components", "scc", None),
    route("tournaments::is_strongly_connected", "scc", None),
    route("tournaments::direct_sum", "scc", Some("parts")),
    route("words::sigma_rank", "word", Some("rank")),
    route("words::word_of", "word", None),
    route("words::tournament_of", "word", Some("from_word")),
    route("words::lex_compare", "word", Some("compare")),
    route("words::tournament_less", "word", Some("less")),
    route("words::is_lyndon", "factorize", None),
    route("words::cfl_factorize", "factorize", None),
    route("words::shuffle", "shuffle", None),
    route("words::multi_shuffle", "shuffle", Some("words")),
    route("words::is_lyndon_tournament", "lyndon", Some("check")),
    route("words::enumerate_lyndon", "lyndon", Some("k")),
    route("flagalg::product", "product", None),
    route("flagalg::multi_product", "product", Some("parts")),
    route("flagalg::lemma_reduce", "express", Some("reduce")),
    route("flagalg::express", "express", None),
    route("flagalg::dimension", "dimension", None),
    route("poly::add", "express", None),
    route("poly::mul", "express", None),
    route("poly::scale", "express", None),
    route("poly::evaluate", "express", Some("at")),
    route("poly::partial_derivative", "jacobian", Some("symbolic")),
    route("poly::restrict_univariate", "jacobian", None),
    route("poly::det_rational", "jacobian", Some("det")),
    route("tournamentons::validate", "density", Some("tournamenton")),
    route("tournamentons::density", "density", None),
    route("tournamentons::normalization_check", "density", Some("normalization")),
    route("tournamentons::sample", "sample", None),
    route("construction::context", "build-wk", None),
    route("construction::build", "build-wk", None),
    route("construction::symbolic_density", "build-wk", Some("symbolic")),
    route("construction::homomorphism_set", "build-wk", Some("homomorphisms")),
    route("construction::jacobian_at", "jacobian", None),
    route("construction::certify_det_nonzero", "certify", None),
    route("construction::leading_monomial_coefficient", "certify", Some("leading")),
    route("solver::default_params", "build-wk", None),
    route("solver::solve", "solve", None),
    route("solver::probe_ball", "probe", None),
    route("verify::run", "verify", None),
];

/// A failed command: exit status plus a message for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_USAGE,
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_DOMAIN,
        };
        CliError { code, message: e.to_string() }
    }
}

/// A completed command. `code` is non-zero when the computation ran but
/// reached a negative verdict, such as a solve that did not converge.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub payload: Value,
    pub code: i32,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { payload, code: EXIT_OK, diagnostics: Vec::new() }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs one command, on a dedicated pool when `--threads` is given.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match cli.threads {
        Some(0) => Err(CliError::usage("--threads must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}

/// Serializes a payload the way the binary prints it.
pub fn render(payload: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(payload).expect("JSON values serialize")
    } else {
        payload.to_string()
    }
}

fn tournament(text: &str) -> CliResult<Tournament> {
    Ok(Tournament::parse(text)?)
}

fn word(text: &str) -> CliResult<Word> {
    Ok(Word::parse(text, TieBreak::Ascending)?)
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn tournamenton(path: &Path) -> CliResult<StepTournamenton> {
    Ok(StepTournamenton::from_json(&read_json(path)?)?)
}

fn params(ctx: &WkContext, path: Option<&Path>) -> CliResult<WkParams> {
    let p = match path {
        Some(path) => WkParams::from_json(&read_json(path)?)?,
        None => default_params(ctx),
    };
    p.validate(ctx)?;
    Ok(p)
}

/// Decimal or `p/q`; scientific notation falls back to float parsing.
fn real(text: &str) -> CliResult<f64> {
    match parse_rational(text) {
        Ok(q) => Ok(to_f64(&q)),
        Err(e) => text.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| e.into()),
    }
}

fn rational_matrix(m: &[Vec<Rational>]) -> Value {
    m.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect()
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn prepared_context(cli: &Cli, k: usize) -> CliResult<WkContext> {
    let ctx = context(k)?;
    ctx.prepare(&budget(cli))?;
    Ok(ctx)
}

fn budget(cli: &Cli) -> Budget {
    Budget::unlimited().with_seconds(cli.budget_seconds)
}

fn solve_options(cli: &Cli) -> SolveOptions {
    let mut opts = SolveOptions { trace: cli.trace, ..Default::default() };
    if let Some(tol) = cli.tolerance {
        opts.tolerance = tol;
    }
    opts
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    if !(cli.budget_seconds > 0.0) {
        return Err(CliError::usage("--budget-seconds must be positive"));
    }
    match &cli.command {
        Command::Enumerate { n } => {
            let all = enumerate_exact(*n)?;
            let list: Vec<String> = all.iter().map(Tournament::encode).collect();
            Ok(Outcome::ok(json!({ "n": n, "count": list.len(), "tournaments": list })))
        }
        Command::Canon { tournament: text, other, adjacency } => {
            let t = tournament(text)?;
            let mut out = json!({
                "input": t.encode(),
                "canonical": t.canonicalize().encode(),
                "automorphisms": t.automorphism_count()?,
            });
            if let Some(other) = other {
                out["isomorphic"] = json!(are_isomorphic(&t, &tournament(other)?));
            }
            if *adjacency {
                out["adjacency"] = t.adjacency_json();
            }
            Ok(Outcome::ok(out))
        }
        Command::Scc { parts } => {
            let parts = parts.iter().map(|p| tournament(p)).collect::<CliResult<Vec<_>>>()?;
            let t = if parts.len() == 1 { parts[0].clone() } else { direct_sum(&parts) };
            let dec = strongly_connected_components(&t);
            let components: Vec<Value> = dec
                .parts
                .iter()
                .zip(dec.components(&t))
                .map(|(vs, c)| json!({ "vertices": vs, "tournament": c.canonicalize().encode() }))
                .collect();
            Ok(Outcome::ok(json!({
                "tournament": t.encode(),
                "strongly_connected": t.is_strongly_connected(),
                "components": components,
            })))
        }
        Command::Word { input, from_word, rank, compare, less } => {
            if *from_word {
                let w = word(input)?;
                let t = tournament_of(&w);
                return Ok(Outcome::ok(json!({ "word": w.pretty(), "tournament": t.encode() })));
            }
            if let Some(other) = compare {
                let ord = lex_compare(&word(input)?, &word(other)?);
                return Ok(Outcome::ok(json!({ "ordering": ordering_name(ord) })));
            }
            let t = tournament(input)?;
            if *rank {
                return Ok(Outcome::ok(json!({ "tournament": t.encode(), "rank": sigma_rank(&t)? })));
            }
            if let Some(other) = less {
                return Ok(Outcome::ok(json!({ "less": tournament_less(&t, &tournament(other)?) })));
            }
            let w = word_of(&t);
            let letters: Vec<Value> = w
                .letters()
                .iter()
                .map(|l| json!({ "name": l.name(), "rank": l.rank(), "tournament": l.tournament().encode() }))
                .collect();
            Ok(Outcome::ok(json!({ "tournament": t.encode(), "word": w.pretty(), "letters": letters })))
        }
        Command::Lyndon { k, check } => {
            if let Some(text) = check {
                let t = tournament(text)?;
                return Ok(Outcome::ok(json!({ "tournament": t.encode(), "lyndon": is_lyndon_tournament(&t) })));
            }
            let k = k.expect("clap requires --k or --check");
            let list: Vec<Value> = enumerate_lyndon(k)?
                .iter()
                .map(|t| json!({ "word": word_of(t).pretty(), "tournament": t.encode() }))
                .collect();
            Ok(Outcome::ok(json!({ "k": k, "count": list.len(), "tournaments": list })))
        }
        Command::Factorize { word: text } => {
            let w = word(text)?;
            let factors = cfl_factorize(w.letters())
                .into_iter()
                .map(|f| Word::new(f.to_vec()).map(|x| x.pretty()))
                .collect::<lynprof::Result<Vec<_>>>()?;
            Ok(Outcome::ok(json!({ "word": w.pretty(), "lyndon": is_lyndon(w.letters()), "factors": factors })))
        }
        Command::Shuffle { words } => {
            let words = words.iter().map(|w| word(w)).collect::<CliResult<Vec<_>>>()?;
            let combo = if words.len() == 2 {
                shuffle(words[0].letters(), words[1].letters())?
            } else {
                multi_shuffle(&words.iter().map(Word::letters).collect::<Vec<_>>())?
            };
            Ok(Outcome::ok(json!({ "total": combo.total(), "terms": combo.to_json() })))
        }
        Command::Product { parts } => {
            let parts = parts.iter().map(|p| tournament(p)).collect::<CliResult<Vec<_>>>()?;
            let lc = if parts.len() == 2 { product(&parts[0], &parts[1])? } else { multi_product(&parts)? };
            Ok(Outcome::ok(json!({ "terms": lc.to_json() })))
        }
        Command::Express { tournament: text, reduce, at } => {
            let t = tournament(text)?;
            if *reduce {
                return Ok(Outcome::ok(json!({ "reduction": lemma_reduce(&t)?.to_json() })));
            }
            let p = express(&t)?;
            let mut out = json!({ "polynomial": p.to_json() });
            if let Some(path) = at {
                let w = tournamenton(path)?;
                let value = p.evaluate(&lyndon_densities(t.len(), &w)?)?;
                out["value"] = json!(format_rational(&value));
            }
            Ok(Outcome::ok(out))
        }
        Command::Dimension { k } => Ok(Outcome::ok(json!({ "dimension": dimension(*k)? }))),
        Command::Density { tournament: text, tournamenton: path, normalization } => {
            let w = tournamenton(path)?;
            if let Some(k) = normalization {
                let total = normalization_check(*k, &w)?;
                return Ok(Outcome::ok(json!({ "k": k, "total": format_rational(&total) })));
            }
            let t = tournament(text.as_deref().expect("clap requires a tournament or --normalization"))?;
            Ok(Outcome::ok(json!({ "density": format_rational(&density(&t, &w)?) })))
        }
        Command::BuildWk { k, params: path, symbolic, homomorphisms } => {
            let ctx = context(*k)?;
            let p = params(&ctx, path.as_deref())?;
            let w = build(&ctx, &p)?;
            let mut out = json!({ "context": ctx.to_json(), "params": p.to_json(), "tournamenton": w.to_json() });
            if *symbolic {
                let b = budget(cli);
                let polys = (0..ctx.ell())
                    .map(|i| ctx.symbolic_density_with_budget(i, &b).map(|p| p.to_json()))
                    .collect::<lynprof::Result<Vec<_>>>()?;
                out["densities"] = json!(polys);
            }
            if *homomorphisms {
                let b = budget(cli);
                let sets = ctx
                    .lyndon_seq()
                    .iter()
                    .map(|t| {
                        homomorphism_set_with_budget(t, ctx.host(), &b)
                            .map(|maps| json!({ "tournament": t.encode(), "count": maps.len(), "maps": maps }))
                    })
                    .collect::<lynprof::Result<Vec<_>>>()?;
                out["homomorphisms"] = json!(sets);
            }
            Ok(Outcome::ok(out))
        }
        Command::Jacobian { k, params: path, symbolic, det } => {
            let ctx = prepared_context(cli, *k)?;
            if *symbolic {
                let m: Vec<Vec<Value>> = symbolic_jacobian(&ctx)?
                    .iter()
                    .map(|row| row.iter().map(|p| p.to_json()).collect())
                    .collect();
                return Ok(Outcome::ok(json!({ "k": k, "matrix": m })));
            }
            let p = params(&ctx, path.as_deref())?;
            let m = jacobian_at(&ctx, &p)?;
            let mut out = json!({ "k": k, "params": p.to_json(), "matrix": rational_matrix(&m) });
            if *det {
                out["det"] = json!(format_rational(&det_rational(&m)));
            }
            Ok(Outcome::ok(out))
        }
        Command::Certify { k, trials, leading } => {
            let ctx = prepared_context(cli, *k)?;
            if *leading {
                let c = leading_monomial_coefficient(&ctx)?;
                let mut term = Polynomial::zero();
                term.add_term(leading_monomial(&ctx), c.clone());
                return Ok(Outcome::ok(json!({
                    "k": k,
                    "leading_term": term.to_json(),
                    "coefficient": format_rational(&c),
                })));
            }
            Ok(Outcome::ok(certify_det_nonzero(&ctx, *trials, cli.seed)?.to_json()))
        }
        Command::Solve { k, target, params: path, initial, max_iterations } => {
            let ctx = prepared_context(cli, *k)?;
            let target = target.iter().map(|x| real(x)).collect::<CliResult<Vec<_>>>()?;
            let mut opts = solve_options(cli);
            opts.max_iterations = *max_iterations;
            opts.initial_s = initial.clone();
            if let Some(path) = path {
                opts.fixed_t = Some(params(&ctx, Some(path))?.t);
            }
            let report = solve(&ctx, &target, &opts)?;
            let code = if report.converged() { EXIT_OK } else { EXIT_DOMAIN };
            let mut diagnostics = Vec::new();
            if let Some(m) = &report.message {
                diagnostics.push(m.clone());
            }
            Ok(Outcome { payload: report.to_json(), code, diagnostics })
        }
        Command::Probe { k, center, eps, samples } => {
            let ctx = prepared_context(cli, *k)?;
            let x0 = match center {
                Some(c) => c.iter().map(|x| real(x)).collect::<CliResult<Vec<_>>>()?,
                None => target_densities(&ctx, &default_params(&ctx))?,
            };
            let report = probe_ball(&ctx, &x0, *eps, *samples, cli.seed, &solve_options(cli))?;
            Ok(Outcome::ok(report.to_json()))
        }
        Command::Sample { tournamenton: path, n } => {
            let w = tournamenton(path)?;
            let t = sample(&w, *n, cli.seed);
            Ok(Outcome::ok(json!({ "tournament": t.encode(), "canonical": t.canonicalize().encode() })))
        }
        Command::Verify { level } => {
            let level = match level {
                VerifyLevel::Fast => Level::Fast,
                VerifyLevel::Full => Level::Full,
            };
            let checks = verify::run(level, cli.seed);
            let passed = checks.iter().all(|c| c.passed);
            let diagnostics = checks.iter().map(|c| format!("{}: {:.3}s", c.name, c.seconds)).collect();
            let list: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            Ok(Outcome {
                payload: json!({ "passed": passed, "checks": list }),
                code: if passed { EXIT_OK } else { EXIT_DOMAIN },
                diagnostics,
            })
        }
    }
}
