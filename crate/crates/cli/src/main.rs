use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pglca::builder::{assemble_extended, assembled_size, read_starters, write_starters};
use pglca::classes::{binomial, enumerate_classes};
use pglca::postopt::post_optimize;
use pglca::search::{
    residual_obligations, search_extension, search_residual_matrix, search_starters, LocalSearchParams, Objective, SearchConfig,
    StarterMode,
};
use pglca::verifier::{coverage_brute, coverage_by_classes, is_covering_array};
use pglca::{assemble, starter_check, AssemblyOptions, Context, StarterVector, TestingArray};

#[derive(Parser)]
#[command(name = "pglca", version, about = "Strength-4 covering arrays from PGL(2,q) starter vectors")]
struct Cli {
    /// Worker threads for verification and search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the orbits of PGL(2,g-1) on 4-tuples.
    Orbits {
        #[arg(long)]
        g: usize,
    },
    /// List the cyclic classes of row 4-subsets for degree k.
    Classes {
        #[arg(long)]
        k: usize,
    },
    /// Report classes whose d-set misses a non-constant orbit.
    StarterCheck(Starters),
    /// Assemble an array from starter vectors.
    Build {
        #[command(flatten)]
        starters: Starters,
        /// Completion matrix file.
        #[arg(long)]
        c1: Option<PathBuf>,
        #[command(flatten)]
        assembly: Assembly,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that an array file is a strength-4 covering array.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Coverage measure of an array file, or of the array built from starters.
    Coverage {
        #[arg(long = "in", conflicts_with_all = ["g", "u", "v", "starters"])]
        input: Option<PathBuf>,
        #[command(flatten)]
        starters: OptStarters,
        #[arg(long)]
        no_constants: bool,
        /// Also build the array and count by brute force.
        #[arg(long)]
        brute: bool,
    },
    /// Hill-climb for starter vectors.
    Search {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Two)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Goal::Full)]
        objective: Goal,
        #[command(flatten)]
        search: SearchFlags,
        /// Starter file used as the first restart's starting point.
        #[arg(long)]
        init: Option<PathBuf>,
        /// Write the best vectors to this starter file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a completion matrix covering the residual of a starter set.
    SearchC1 {
        #[command(flatten)]
        starters: Starters,
        /// Number of columns of the completion matrix.
        #[arg(long)]
        width: usize,
        #[command(flatten)]
        search: SearchFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Try every fixed-row placement that extends the degree by one.
    Extend {
        #[command(flatten)]
        starters: Starters,
        #[command(flatten)]
        assembly: Assembly,
        /// Write the array of the first passing placement.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shrink a covering array by exploiting flexible entries.
    Postopt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        /// Remove this many trailing rows before optimizing.
        #[arg(long, default_value_t = 0)]
        drop_rows: usize,
    },
}

#[derive(Args)]
struct Starters {
    #[arg(long)]
    g: usize,
    /// Expected degree; checked against the vectors.
    #[arg(long)]
    k: Option<usize>,
    /// First vector as a token string, `*` for infinity.
    #[arg(long, required_unless_present = "starters", conflicts_with = "starters")]
    u: Option<String>,
    #[arg(long, requires = "u")]
    v: Option<String>,
    /// Starter file with one or two vectors.
    #[arg(long)]
    starters: Option<PathBuf>,
}

#[derive(Args)]
struct OptStarters {
    #[arg(long, requires = "u_or_file")]
    g: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, group = "u_or_file")]
    u: Option<String>,
    #[arg(long, requires = "u")]
    v: Option<String>,
    #[arg(long, group = "u_or_file")]
    starters: Option<PathBuf>,
}

#[derive(Args)]
struct Assembly {
    /// Leave out the constant columns.
    #[arg(long)]
    no_constants: bool,
    /// Append the completion matrix as given instead of developing it.
    #[arg(long)]
    undeveloped_c1: bool,
}

impl Assembly {
    fn options(&self) -> AssemblyOptions {
        AssemblyOptions { include_constants: !self.no_constants, develop_c1: !self.undeveloped_c1 }
    }
}

#[derive(Args)]
struct SearchFlags {
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = LocalSearchParams::DEFAULT_PLATEAU_CAP)]
    plateau_cap: u64,
    #[arg(long)]
    seed: u64,
}

impl SearchFlags {
    fn params(&self) -> LocalSearchParams {
        let mut p = LocalSearchParams::new(self.budget, self.restarts, self.seed);
        p.plateau_cap = self.plateau_cap;
        p
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    One,
    Two,
}

#[derive(Clone, Copy, ValueEnum)]
enum Goal {
    Full,
    MaxCoverage,
}

/// Failure of a run: usage and input problems exit 2, failed checks exit 1.
enum Failure {
    Usage(String),
    Check,
}

impl From<pglca::Error> for Failure {
    fn from(e: pglca::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn load_starters(
    g: usize,
    k: Option<usize>,
    u: Option<&str>,
    v: Option<&str>,
    file: Option<&PathBuf>,
) -> Result<Vec<StarterVector>, Failure> {
    let vectors = match (u, file) {
        (Some(u), _) => {
            let mut vs = vec![StarterVector::parse(u, g)?];
            if let Some(v) = v {
                vs.push(StarterVector::parse(v, g)?);
            }
            vs
        }
        (None, Some(path)) => read_starters(path, g)?,
        (None, None) => return Err(Failure::Usage("--u or --starters is required".into())),
    };
    if vectors.is_empty() || vectors.len() > 2 {
        return Err(Failure::Usage(format!("expected one or two starter vectors, found {}", vectors.len())));
    }
    let len = vectors[0].len();
    if vectors.iter().any(|w| w.len() != len) {
        return Err(Failure::Usage("--u and --v differ in length".into()));
    }
    if let Some(k) = k {
        if k != len {
            return Err(Failure::Usage(format!("--k {k} does not match vector length {len}")));
        }
    }
    Ok(vectors)
}

impl Starters {
    fn load(&self) -> Result<Vec<StarterVector>, Failure> {
        load_starters(self.g, self.k, self.u.as_deref(), self.v.as_deref(), self.starters.as_ref())
    }
}

fn context(g: usize) -> Result<Context, Failure> {
    Context::new(g).map_err(|e| Failure::Usage(format!("--g {g}: {e}")))
}

fn verdict_line(a: &TestingArray, valid: bool) -> String {
    let status = if valid { "VALID" } else { "INVALID" };
    format!("4-CA({},{},{}): {status}", a.cols(), a.rows(), a.symbol_count())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Orbits { g } => {
            let ctx = context(g)?;
            for id in ctx.orbits.ids() {
                let orbit = ctx.orbits.orbit(id);
                let members: Vec<String> = orbit
                    .members
                    .iter()
                    .map(|&m| pglca::field::format_symbols(&pglca::orbit::unpack(m as usize, g), g))
                    .collect();
                println!("Orb {} ({}): {}", ctx.orbits.label(id), orbit.size(), members.join(" "));
            }
            println!("{} orbits", ctx.orbits.len());
        }
        Command::Classes { k } => {
            let classes = enumerate_classes(k)?;
            for c in &classes {
                println!("{c} {}", c.size);
            }
            let total: usize = classes.iter().map(|c| c.size).sum();
            println!("{} classes, {total} subsets of C({k},4) = {}", classes.len(), binomial(k, 4));
        }
        Command::StarterCheck(s) => {
            let ctx = context(s.g)?;
            let vs = s.load()?;
            let report = starter_check(&vs[0], vs.get(1), &ctx.orbits)?;
            print!("{}", report.render(&ctx.orbits));
            if !report.is_empty() {
                return Err(Failure::Check);
            }
        }
        Command::Build { starters, c1, assembly, out } => {
            let ctx = context(starters.g)?;
            let vs = starters.load()?;
            let c1 = c1.map(TestingArray::read).transpose()?;
            let a = assemble(&vs[0], vs.get(1), c1.as_ref(), &ctx.group, assembly.options())?;
            a.write(&out)?;
            println!("wrote {} x {} array to {}", a.rows(), a.cols(), out.display());
        }
        Command::Verify { input } => {
            let a = TestingArray::read(&input)?;
            let v = is_covering_array(&a);
            println!("{}", verdict_line(&a, v.valid));
            if let Some(w) = v.witness {
                println!("missing {} on rows {:?}", pglca::field::format_symbols(&w.tuple, a.symbol_count()), w.rows);
            }
            if !v.valid {
                return Err(Failure::Check);
            }
        }
        Command::Coverage { input, starters, no_constants, brute } => {
            let (n, cov) = match (input, starters.g) {
                (Some(path), _) => {
                    let a = TestingArray::read(&path)?;
                    (a.cols(), coverage_brute(&a))
                }
                (None, Some(g)) => {
                    let ctx = context(g)?;
                    let vs =
                        load_starters(g, starters.k, starters.u.as_deref(), starters.v.as_deref(), starters.starters.as_ref())?;
                    let opts = AssemblyOptions { include_constants: !no_constants, develop_c1: true };
                    let cov = coverage_by_classes(&vs[0], vs.get(1), &ctx.orbits, opts.include_constants)?;
                    if brute {
                        let a = assemble(&vs[0], vs.get(1), None, &ctx.group, opts)?;
                        let b = coverage_brute(&a);
                        if b.covered != cov.covered {
                            println!("brute-force count {} differs from class count {}", b.covered, cov.covered);
                            return Err(Failure::Check);
                        }
                    }
                    let n = assembled_size(vs[0].len(), vs.len(), 0, ctx.group.order(), g, opts);
                    (n, cov)
                }
                (None, None) => return Err(Failure::Usage("give --in or --g with starters".into())),
            };
            println!("n={n} mu={:.3}", cov.mu());
            println!("{}", cov.to_record());
        }
        Command::Search { g, k, mode, objective, search, init, out } => {
            let ctx = context(g)?;
            let initial = init.map(|p| read_starters(p, g)).transpose()?;
            let cfg = SearchConfig {
                k,
                g,
                mode: match mode {
                    Mode::One => StarterMode::One,
                    Mode::Two => StarterMode::Two,
                },
                objective: match objective {
                    Goal::Full => Objective::Full,
                    Goal::MaxCoverage => Objective::MaxCoverage,
                },
                params: search.params(),
                initial,
            };
            let outcome = search_starters(&cfg, &ctx.orbits)?;
            for r in &outcome.restarts {
                println!("restart {}: missing={} covered={} moves={}", r.restart, r.score.missing, r.score.covered, r.moves);
            }
            let record = json!({
                "vectors": outcome.vectors.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "deficient_classes": outcome.residual.entries.len(),
                "missing_pairs": outcome.residual.missing_pairs(),
                "covered": outcome.coverage.covered,
                "total": outcome.coverage.total,
                "mu": outcome.coverage.mu_rounded(),
            });
            println!("{record}");
            if let Some(out) = out {
                write_starters(out, &outcome.vectors)?;
            }
        }
        Command::SearchC1 { starters, width, search, out } => {
            let ctx = context(starters.g)?;
            let vs = starters.load()?;
            let report = starter_check(&vs[0], vs.get(1), &ctx.orbits)?;
            let total = residual_obligations(&report, &ctx.orbits).len();
            let outcome = search_residual_matrix(&report, width, search.params(), &ctx.orbits)?;
            println!(
                "{} deficient classes, {total} obligations, {} left open by a {} x {width} matrix",
                report.entries.len(),
                outcome.unsatisfied,
                report.k
            );
            if let Some(out) = out {
                outcome.matrix.write(out)?;
            }
            if outcome.success {
                let a = assemble(&vs[0], vs.get(1), Some(&outcome.matrix), &ctx.group, AssemblyOptions::default())?;
                let valid = is_covering_array(&a).valid;
                println!("{}", verdict_line(&a, valid));
                if !valid {
                    return Err(Failure::Check);
                }
            } else {
                return Err(Failure::Check);
            }
        }
        Command::Extend { starters, assembly, out } => {
            let ctx = context(starters.g)?;
            let vs = starters.load()?;
            let passing = search_extension(&vs[0], vs.get(1), &ctx.orbits)?;
            let g = starters.g;
            for (s, t) in &passing {
                match t {
                    Some(t) => println!("pass: u {} v {}", s.token(g), t.token(g)),
                    None => println!("pass: u {}", s.token(g)),
                }
            }
            println!("{} passing placements", passing.len());
            let Some(&(s, t)) = passing.first() else {
                return Err(Failure::Check);
            };
            if let Some(out) = out {
                let a = assemble_extended(&vs[0], vs.get(1), s, t, &ctx.group, assembly.options())?;
                let valid = is_covering_array(&a).valid;
                a.write(&out)?;
                println!("{}", verdict_line(&a, valid));
                if !valid {
                    return Err(Failure::Check);
                }
            }
        }
        Command::Postopt { input, out, budget, seed, drop_rows } => {
            let a = TestingArray::read(&input)?;
            if drop_rows + 4 > a.rows() {
                return Err(Failure::Usage(format!("--drop-rows {drop_rows} leaves fewer than 4 of {} rows", a.rows())));
            }
            let a = a.truncate_rows(a.rows() - drop_rows);
            let b = post_optimize(&a, budget, seed)?;
            b.write(&out)?;
            println!("n: {} -> {}", a.cols(), b.cols());
            println!("{}", verdict_line(&b, true));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads {n}: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
