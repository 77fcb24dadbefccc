//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 positivity
//! violation (or a failed internal consistency check), 3 resource cap.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::kring::{BasisCache, BasisTag, KRing, Parabolic};
use crate::laurent::LaurentPoly;
use crate::positivity::{
    claim_table, verify_claim, Claim, FaultInjection, PositivityReport, SubtorusBasis,
    VerifyOptions,
};
use crate::root_system::{CartanType, RootSystem, Weight};
use crate::weyl_group::{ElementId, WeylGroup, DEFAULT_ORDER_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "kflag",
    version,
    about = "Exact torus-equivariant K-theory of flag varieties",
    long_about = "Computes Schubert-basis structure constants of K_T(G/B) and K_T(G/P) \
                  and checks their sign alternation."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write structure-constant tables for the selected claims.
    Table(JobArgs),
    /// Run positivity checks and write reports; exits 2 on any violation.
    Verify(JobArgs),
    /// Build, locate or clear cached basis tables.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Cartan type: A, B, C, D, E, F or G.
    #[arg(long = "type", value_name = "TYPE")]
    cartan_type: String,
    #[arg(long)]
    rank: usize,
    /// Refuse to enumerate Weyl groups larger than this.
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
}

#[derive(Debug, Args)]
struct JobArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Simple reflections generating W_P, 1-based and comma-separated.
    #[arg(long, value_delimiter = ',')]
    parabolic: Vec<usize>,
    /// Comma-separated subset of grku51, grku52, grra53, dualizing, richardson.
    #[arg(long, value_delimiter = ',')]
    claims: Option<Vec<String>>,
    /// Basis for `table` when no claim is given: O_upper, xi_upper or dualizing.
    #[arg(long)]
    basis: Option<String>,
    /// File with an integer matrix whose column i is α_i restricted to the subtorus.
    #[arg(long)]
    subtorus: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached basis tables.
    #[arg(long, env = "KFLAG_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Largest y-degree explored before a coefficient is reported as a violation.
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Perturb one coefficient: `u,v,w,sign[,exponent]`, e.g. `s1,s1,s1,+` or
    /// `s1,s2,s1s2,-,0:-1`.
    #[arg(long, hide = true)]
    fault_inject: Option<String>,
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Compute and store the tables for one root system.
    Build {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, env = "KFLAG_CACHE_DIR")]
        cache_dir: PathBuf,
    },
    /// Print the cache file path for one root system.
    Path {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, env = "KFLAG_CACHE_DIR")]
        cache_dir: PathBuf,
    },
    /// Remove all cache files.
    Clear {
        #[arg(long, env = "KFLAG_CACHE_DIR")]
        cache_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub cartan_type: CartanType,
    pub rank: usize,
    /// 0-based simple reflection indices.
    pub parabolic: Vec<usize>,
    pub claims: Vec<Claim>,
    pub subtorus: Option<SubtorusBasis>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub degree_cap: Option<u32>,
    pub jobs: Option<usize>,
    pub max_order: usize,
    pub output: Option<PathBuf>,
    pub fault: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Table,
    Verify,
}

fn root_system(args: &GroupArgs) -> Result<RootSystem> {
    let t: CartanType = args.cartan_type.parse()?;
    RootSystem::new(t, args.rank)
}

impl JobConfig {
    fn from_args(args: JobArgs, mode: Mode) -> Result<Self> {
        let rs = root_system(&args.group)?;
        let rank = rs.rank();
        let mut parabolic = Vec::new();
        for &i in &args.parabolic {
            if i == 0 || i > rank {
                return Err(Error::Config(format!(
                    "--parabolic index {i} outside 1..={rank}"
                )));
            }
            parabolic.push(i - 1);
        }
        parabolic.sort_unstable();
        parabolic.dedup();

        let basis_claim = match &args.basis {
            None => None,
            Some(b) => Some(match b.parse::<BasisTag>()? {
                BasisTag::OUpper => Claim::Grra53,
                BasisTag::XiUpper => Claim::Grku52,
                BasisTag::Dualizing => Claim::Dualizing,
                other => {
                    return Err(Error::Config(format!(
                        "no claim is stated in the {} basis; use O_upper, xi_upper or dualizing",
                        other.name()
                    )))
                }
            }),
        };
        let claims: Vec<Claim> = match &args.claims {
            Some(list) => {
                let mut claims = list
                    .iter()
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Claim>>>()?;
                claims.sort();
                claims.dedup();
                if claims.is_empty() {
                    return Err(Error::Config(
                        "--claims is empty; name at least one claim".into(),
                    ));
                }
                if let Some(c) = basis_claim {
                    if claims != [c] {
                        return Err(Error::Config(format!(
                            "--basis selects {c}, which conflicts with --claims"
                        )));
                    }
                }
                claims
            }
            None => match (basis_claim, mode) {
                (Some(c), _) => vec![c],
                (None, Mode::Table) => vec![Claim::Grra53],
                (None, Mode::Verify) => Claim::DEFAULT.to_vec(),
            },
        };
        if !parabolic.is_empty() {
            if let Some(c) = claims
                .iter()
                .find(|c| matches!(c, Claim::Dualizing | Claim::Grku51 | Claim::Richardson))
            {
                return Err(Error::Config(format!(
                    "claim {c} is implemented for G/B only; drop --parabolic"
                )));
            }
        }

        let subtorus = match &args.subtorus {
            None => None,
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("--subtorus {}: {e}", path.display())))?;
                Some(SubtorusBasis::parse(&text, rank)?)
            }
        };
        if args.jobs == Some(0) {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        if args.degree_cap == Some(0) {
            return Err(Error::Config("--degree-cap must be at least 1".into()));
        }
        Ok(JobConfig {
            cartan_type: rs.cartan_type(),
            rank,
            parabolic,
            claims,
            subtorus,
            format: args.format,
            cache_dir: args.cache_dir,
            degree_cap: args.degree_cap,
            jobs: args.jobs,
            max_order: args.group.max_order,
            output: args.output,
            fault: args.fault_inject,
        })
    }

    fn build_ring(&self) -> Result<KRing> {
        let rs = RootSystem::new(self.cartan_type, self.rank)?;
        let group = WeylGroup::generate_with_cap(&rs, self.max_order)?;
        match &self.cache_dir {
            Some(dir) => Ok(BasisCache::new(dir).load_or_build(&group)?.0),
            None => KRing::new(group),
        }
    }

    fn options(&self, ring: &KRing) -> Result<VerifyOptions> {
        let parabolic = if self.parabolic.is_empty() {
            None
        } else {
            Some(Parabolic::new(ring.group(), &self.parabolic)?)
        };
        let fault = match &self.fault {
            None => None,
            Some(spec) => Some(parse_fault(ring.group(), spec)?),
        };
        Ok(VerifyOptions {
            degree_cap: self.degree_cap,
            subtorus: self.subtorus.clone(),
            parabolic,
            fault,
        })
    }
}

fn find_label(group: &WeylGroup, label: &str) -> Result<ElementId> {
    group
        .ids()
        .find(|&w| group.word_label(w) == label)
        .ok_or_else(|| {
            Error::Config(format!(
                "{label:?} is not a stored reduced word of {}",
                group.root_system().name()
            ))
        })
}

fn parse_fault(group: &WeylGroup, spec: &str) -> Result<FaultInjection> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        return Err(Error::Config(format!(
            "--fault-inject expects u,v,w,sign[,exponent], got {spec:?}"
        )));
    }
    let sign: i32 = match parts[3] {
        "+" | "+1" => 1,
        "-" | "-1" => -1,
        other => {
            return Err(Error::Config(format!(
                "fault sign must be + or -, got {other:?}"
            )))
        }
    };
    let n = group.rank();
    let exponent = match parts.get(4) {
        None => Weight::zero(n),
        Some(e) => {
            let coords = e
                .split(':')
                .map(|t| {
                    t.parse::<i32>()
                        .map_err(|_| Error::Config(format!("bad fault exponent {e:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: coords.len(),
                });
            }
            Weight::from_slice(&coords)
        }
    };
    Ok(FaultInjection {
        first: find_label(group, parts[0])?,
        second: find_label(group, parts[1])?,
        target: find_label(group, parts[2])?,
        delta: LaurentPoly::monomial(exponent, sign),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Invariant(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn write_output(path: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Error::Config(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Invariant(e.to_string()))
}

/// Renders the tables for every configured claim.
pub fn render_table(ring: &KRing, config: &JobConfig) -> Result<Vec<u8>> {
    let options = config.options(ring)?;
    let mut tables = Vec::new();
    for &claim in &config.claims {
        tables.push(claim_table(ring, claim, &options)?);
    }
    match config.format {
        Format::Json => {
            let mut out = String::new();
            for entry in tables.iter().flatten() {
                out.push_str(&to_json(entry)?);
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Invariant(e.to_string());
            w.write_record([
                "claim",
                "u_word",
                "v_word",
                "w_word",
                "grading_sign",
                "laurent",
                "y_poly",
            ])
            .map_err(csv_err)?;
            for entry in tables.iter().flatten() {
                for (w_word, c) in &entry.constants {
                    let y = match &c.y_poly {
                        Some(y) => to_json(y)?,
                        None => String::new(),
                    };
                    w.write_record([
                        entry.claim.name(),
                        &entry.u_word,
                        &entry.v_word,
                        w_word,
                        &c.grading_sign.to_string(),
                        &to_json(&c.laurent)?,
                        &y,
                    ])
                    .map_err(csv_err)?;
                }
            }
            w.into_inner().map_err(|e| Error::Invariant(e.to_string()))
        }
    }
}

/// Runs every configured claim.
pub fn run_verification(ring: &KRing, config: &JobConfig) -> Result<Vec<PositivityReport>> {
    let options = config.options(ring)?;
    config
        .claims
        .iter()
        .map(|&claim| verify_claim(ring, claim, &options))
        .collect()
}

pub fn render_reports(reports: &[PositivityReport], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports)
                .map_err(|e| Error::Invariant(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Invariant(e.to_string());
            w.write_record([
                "claim",
                "group",
                "parabolic",
                "exploratory",
                "instances",
                "violations",
                "status",
            ])
            .map_err(csv_err)?;
            for r in reports {
                let parabolic: Vec<String> = r.parabolic.iter().map(ToString::to_string).collect();
                w.write_record([
                    r.claim.name().to_string(),
                    r.group.clone(),
                    parabolic.join(" "),
                    r.exploratory.to_string(),
                    r.instances.to_string(),
                    r.violations.len().to_string(),
                    if r.passed() {
                        "pass".into()
                    } else {
                        "fail".into()
                    },
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::Invariant(e.to_string()))
        }
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn cmd_table(config: &JobConfig) -> Result<i32> {
    let bytes = with_pool(config.jobs, || {
        let ring = config.build_ring()?;
        render_table(&ring, config)
    })??;
    write_output(&config.output, &bytes)?;
    Ok(EXIT_OK)
}

fn cmd_verify(config: &JobConfig) -> Result<i32> {
    let reports = with_pool(config.jobs, || {
        let ring = config.build_ring()?;
        run_verification(&ring, config)
    })??;
    for r in &reports {
        let tag = if r.exploratory { " (exploratory)" } else { "" };
        eprintln!(
            "{} {}: {} ({} instances, {} violations){tag}",
            r.claim,
            r.group,
            if r.passed() { "pass" } else { "FAIL" },
            r.instances,
            r.violations.len()
        );
    }
    write_output(&config.output, &render_reports(&reports, config.format)?)?;
    let failed = reports.iter().any(|r| !r.passed() && !r.exploratory);
    Ok(if failed { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_cache(action: CacheAction) -> Result<i32> {
    match action {
        CacheAction::Build { group, cache_dir } => {
            let rs = root_system(&group)?;
            let g = WeylGroup::generate_with_cap(&rs, group.max_order)?;
            let cache = BasisCache::new(cache_dir);
            let (ring, status) = cache.load_or_build(&g)?;
            eprintln!(
                "{} ({:?}): {}",
                rs.name(),
                status,
                cache.path_for(ring.group()).display()
            );
        }
        CacheAction::Path { group, cache_dir } => {
            let rs = root_system(&group)?;
            let g = WeylGroup::generate_with_cap(&rs, group.max_order)?;
            println!("{}", BasisCache::new(cache_dir).path_for(&g).display());
        }
        CacheAction::Clear { cache_dir } => {
            let removed = BasisCache::new(cache_dir).clear()?;
            eprintln!("removed {removed} cache file(s)");
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Table(args) => JobConfig::from_args(args, Mode::Table).and_then(|c| cmd_table(&c)),
        Command::Verify(args) => {
            JobConfig::from_args(args, Mode::Verify).and_then(|c| cmd_verify(&c))
        }
        Command::Cache { action } => cmd_cache(action),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
