//! The `grassmann` command line.
//!
//! Exit codes: `0` when everything checked out, `1` when a property failed or
//! a computation could not be completed, `2` for usage and input errors.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use grassmann_core::incidence::admissible;
use grassmann_core::{
    big_phi, euclid_sequence, is_good, phi_fiber_sample, phi_step, sample_good_flag, Algebra, GoodnessVerdict,
    Reduction, Side, Subspace, MERSENNE_61,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::config::{SuiteConfig, DEFAULT_CASES};
use crate::error::{config_err, HarnessError, Result};
use crate::json::{field_for, flag_json, AlgebraSpec, CertificateJson, ChainReport, PointJson, SubspaceJson};
use crate::rng::{stream_index, stream_rng};
use crate::suites::{random_separable, run_suite};

#[derive(Debug, Parser)]
#[command(name = "grassmann", version, about = "Equivariant maps between Grassmannians of an algebra over F_p")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Field characteristic
    #[arg(long, global = true, env = "GRASSMANN_PRIME")]
    pub prime: Option<u64>,
    /// Master seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trials per property
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Retry budget per sampling stage
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Write the JSON result here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Allow primes below 2^31 - 1
    #[arg(long, global = true)]
    pub toy: bool,
    /// Coefficients c0,...,c_{n-1} of the monic f = t^n + c_{n-1} t^{n-1} + ... + c0
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "algebra")]
    pub poly: Option<Vec<i128>>,
    /// Negate the --poly coefficients
    #[arg(long, global = true)]
    pub neg: bool,
    /// Algebra JSON file
    #[arg(long, global = true)]
    pub algebra: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebra specifications
    #[command(subcommand)]
    Alg(AlgCommand),
    /// Goodness certificates
    #[command(subcommand)]
    Good(GoodCommand),
    /// The composite map
    #[command(subcommand)]
    Chain(ChainCommand),
    /// Run property suites
    Verify(VerifyArgs),
    /// Single reduction steps
    #[command(subcommand)]
    Point(PointCommand),
}

#[derive(Debug, Subcommand)]
pub enum AlgCommand {
    /// Construct the algebra and check its axioms
    Validate,
}

#[derive(Debug, Subcommand)]
pub enum GoodCommand {
    /// Certify a subspace for (r, s) pairs, or sample a certified flag for (n, r)
    Check(GoodCheckArgs),
}

#[derive(Debug, Args)]
pub struct GoodCheckArgs {
    /// Subspace JSON file for U, `-` for stdin
    #[arg(long, conflicts_with = "r")]
    pub u: Option<PathBuf>,
    /// Pairs r:s to certify; default is every admissible pair
    #[arg(long, value_delimiter = ',', requires = "u")]
    pub pairs: Option<Vec<String>>,
    /// Algebra dimension when no algebra is given
    #[arg(long)]
    pub n: Option<usize>,
    /// Sample and certify the flag of the chain (n, r)
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ChainCommand {
    /// Apply the composite to one subspace and print the trace
    Run(ChainRunArgs),
}

#[derive(Debug, Args)]
pub struct ChainRunArgs {
    #[arg(long)]
    pub r: usize,
    /// Algebra dimension when no algebra is given
    #[arg(long)]
    pub n: Option<usize>,
    /// Subspace JSON for Y, `-` for stdin; random when absent
    #[arg(long)]
    pub y: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// equivariance, dimension, roundtrip, identity, goodness-grid, fiber, stabilizer or all
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Ambient dimensions of the (n, r) cases, paired with --r
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<usize>,
    /// Largest n in the grid suites; defaults to the largest case n
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Points per grid tuple
    #[arg(long)]
    pub grid_trials: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum PointCommand {
    /// Apply the reduction step with U' to a point read from stdin
    Map(PointMapArgs),
    /// Sample a preimage of a target point read from stdin
    Fiber(PointFiberArgs),
}

#[derive(Debug, Args)]
pub struct PointMapArgs {
    /// Subspace JSON file for U'
    #[arg(long)]
    pub u_next: PathBuf,
    /// Point JSON; stdin when absent
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CaseArg {
    Dual,
    Primal,
}

#[derive(Debug, Args)]
pub struct PointFiberArgs {
    /// Subspace JSON file for the smaller U
    #[arg(long)]
    pub u: PathBuf,
    /// Which coordinate the step shrinks
    #[arg(long, value_enum)]
    pub case: CaseArg,
    /// Target point JSON; stdin when absent
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Alg(AlgCommand::Validate) => alg_validate(g),
        Command::Good(GoodCommand::Check(args)) => good_check(g, args),
        Command::Chain(ChainCommand::Run(args)) => chain_run(g, args),
        Command::Verify(args) => verify(g, args),
        Command::Point(PointCommand::Map(args)) => point_map(g, args),
        Command::Point(PointCommand::Fiber(args)) => point_fiber(g, args),
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> Result<T> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

fn emit<T: Serialize>(g: &GlobalArgs, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &g.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn prime(g: &GlobalArgs) -> u64 {
    g.prime.unwrap_or(MERSENNE_61)
}

fn budget(g: &GlobalArgs) -> usize {
    g.budget.unwrap_or(grassmann_core::DEFAULT_BUDGET)
}

/// The algebra named by `--algebra` or `--poly`, if any.
fn algebra_spec(g: &GlobalArgs) -> Result<Option<AlgebraSpec>> {
    if let Some(path) = &g.algebra {
        let spec: AlgebraSpec = read_json(Some(path))?;
        if let Some(p) = g.prime {
            if p != spec.prime()? {
                return Err(config_err("--prime differs from the prime in the algebra file"));
            }
        }
        return Ok(Some(spec));
    }
    let Some(poly) = &g.poly else { return Ok(None) };
    let field = field_for(prime(g), g.toy)?;
    let p = field.modulus() as i128;
    let coeffs: Vec<u64> = poly.iter().map(|&c| (if g.neg { -c } else { c }).rem_euclid(p) as u64).collect();
    Ok(Some(AlgebraSpec::monogenic(field, &coeffs)))
}

/// The given algebra, or a random étale one of dimension `n` drawn from the seed.
fn resolve_algebra(g: &GlobalArgs, n: Option<usize>) -> Result<Algebra> {
    if let Some(spec) = algebra_spec(g)? {
        let alg = spec.build(g.toy)?;
        if let Some(n) = n {
            if n != alg.dim() {
                return Err(config_err(format!("--n {n} differs from the algebra's dimension {}", alg.dim())));
            }
        }
        return Ok(alg);
    }
    let n = n.ok_or_else(|| config_err("give an algebra with --poly or --algebra, or its dimension with --n"))?;
    if n == 0 {
        return Err(config_err("--n must be positive"));
    }
    let field = field_for(prime(g), g.toy)?;
    random_separable(field, n, &mut stream_rng(g.seed, stream_index(0, 0, 0)), budget(g))
}

fn alg_validate(g: &GlobalArgs) -> Result<i32> {
    let spec = algebra_spec(g)?.ok_or_else(|| config_err("alg validate needs --poly or --algebra"))?;
    let alg = spec.build(g.toy)?;
    emit(
        g,
        &json!({
            "valid": true,
            "dim": alg.dim(),
            "prime": alg.field().modulus().to_string(),
            "commutative": alg.is_commutative(),
            "monogenic_etale": alg.monogenic().is_some(),
            "algebra": AlgebraSpec::from_algebra(&alg),
        }),
    )?;
    Ok(0)
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let (r, t) = s.split_once(':').ok_or_else(|| config_err(format!("pair {s:?} is not of the form r:s")))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| config_err(format!("bad pair {s:?}")));
    Ok((parse(r)?, parse(t)?))
}

fn good_check(g: &GlobalArgs, args: &GoodCheckArgs) -> Result<i32> {
    let budget = budget(g);
    if let Some(path) = &args.u {
        let alg = resolve_algebra(g, args.n)?;
        let n = alg.dim();
        let u = read_json::<SubspaceJson>(Some(path))?.to_subspace(alg.field())?;
        if u.side() != Side::Primal || u.ambient() != n {
            return Err(config_err("U must be a primal subspace of the algebra"));
        }
        let pairs = match &args.pairs {
            Some(list) => list.iter().map(|s| parse_pair(s)).collect::<Result<Vec<_>>>()?,
            None => (1..=n)
                .flat_map(|r| (1..=n).map(move |s| (r, s)))
                .filter(|&(r, s)| admissible(n, r, s, u.dim()))
                .collect(),
        };
        let mut verdicts = Vec::new();
        let mut all = true;
        for (k, &(r, s)) in pairs.iter().enumerate() {
            let stream = stream_index(0, 1, k as u64);
            let mut rng = stream_rng(g.seed, stream);
            let verdict = is_good(&alg, &u, &[(r, s)], &mut rng, budget).map_err(HarnessError::Input)?.remove(0);
            verdicts.push(match verdict {
                GoodnessVerdict::Certified(cert) => json!({
                    "r": r, "s": s, "certified": true, "certificate": CertificateJson::new(&cert, stream),
                }),
                GoodnessVerdict::NotProven { attempts, .. } => {
                    all = false;
                    json!({ "r": r, "s": s, "certified": false, "attempts": attempts, "stream": stream })
                }
            });
        }
        emit(g, &json!({ "U": SubspaceJson::from_subspace(&u), "verdicts": verdicts }))?;
        return Ok(if all { 0 } else { 1 });
    }
    let r = args.r.ok_or_else(|| config_err("good check needs --u or --r"))?;
    let alg = resolve_algebra(g, args.n)?;
    let chain = euclid_sequence(alg.dim(), r).map_err(HarnessError::Input)?;
    let stream = stream_index(0, 2, 0);
    let flag = sample_good_flag(&alg, &chain, &mut stream_rng(g.seed, stream), budget)?;
    let certificates: Vec<_> = flag.certificates().iter().map(|c| CertificateJson::new(c, stream)).collect();
    emit(
        g,
        &json!({
            "algebra": AlgebraSpec::from_algebra(&alg),
            "n": alg.dim(),
            "r": r,
            "flag_dims": chain.flag_dims(),
            "flag": flag_json(&flag),
            "certificates": certificates,
            "dual_certificate": flag.dual().map(|(_, c)| CertificateJson::new(c, stream)),
        }),
    )?;
    Ok(0)
}

fn chain_run(g: &GlobalArgs, args: &ChainRunArgs) -> Result<i32> {
    let budget = budget(g);
    let alg = resolve_algebra(g, args.n)?;
    let n = alg.dim();
    let chain = euclid_sequence(n, args.r).map_err(HarnessError::Input)?;
    let mut rng = stream_rng(g.seed, stream_index(0, 3, 0));
    let flag = sample_good_flag(&alg, &chain, &mut rng, budget)?;
    let given = match &args.y {
        Some(path) => {
            let y = read_json::<SubspaceJson>(Some(path))?.to_subspace(alg.field())?;
            if y.side() != Side::Primal || y.ambient() != n || y.dim() != args.r {
                return Err(config_err(format!("Y must be a primal subspace of dimension {} in A", args.r)));
            }
            Some(y)
        }
        None => None,
    };
    let mut attempt = 0;
    let (y, output, trace) = loop {
        let y = match &given {
            Some(y) => y.clone(),
            None => Subspace::random(alg.field(), Side::Primal, n, args.r, &mut rng, budget)?,
        };
        match big_phi(&alg, &y, &flag) {
            Ok((out, trace)) => break (y, out, trace),
            Err(e) if e.is_domain_violation() && given.is_none() && attempt + 1 < budget => attempt += 1,
            Err(e) => return Err(e.into()),
        }
    };
    let report = ChainReport::new(&flag, &y, &output, &trace);
    let mut value = serde_json::to_value(report)?;
    value["algebra"] = serde_json::to_value(AlgebraSpec::from_algebra(&alg))?;
    value["flag"] = flag_json(&flag);
    value["resamples"] = json!(attempt);
    emit(g, &value)?;
    Ok(0)
}

fn verify(g: &GlobalArgs, args: &VerifyArgs) -> Result<i32> {
    if args.n.len() != args.r.len() {
        return Err(config_err("--n and --r must list the same number of values"));
    }
    let algebra = algebra_spec(g)?;
    let cases: Vec<(usize, usize)> = if args.n.is_empty() {
        match &algebra {
            Some(spec) => {
                let n = spec.build(g.toy)?.dim();
                DEFAULT_CASES.iter().copied().filter(|&(m, _)| m == n).collect()
            }
            None => DEFAULT_CASES.to_vec(),
        }
    } else {
        args.n.iter().copied().zip(args.r.iter().copied()).collect()
    };
    let defaults = SuiteConfig::default();
    let config = SuiteConfig {
        prime: match &algebra {
            Some(spec) => spec.prime()?,
            None => prime(g),
        },
        algebra,
        max_n: args.max_n.unwrap_or_else(|| cases.iter().map(|c| c.0).max().unwrap_or(defaults.max_n)),
        cases,
        trials: g.trials.unwrap_or(defaults.trials),
        grid_trials: args.grid_trials.unwrap_or(defaults.grid_trials),
        seed: g.seed,
        budget: budget(g),
        toy: g.toy,
        out: g.out.clone(),
    };
    let report = run_suite(&args.suite, &config)?;
    for s in &report.suites {
        eprintln!(
            "{:<14} {}  passed {:>6}  failed {:>4}  resamples {:>3}  {} ms",
            s.suite,
            if s.ok { "PASS" } else { "FAIL" },
            s.passed,
            s.failed,
            s.resamples,
            s.elapsed_ms
        );
    }
    if config.out.is_none() {
        emit(g, &report)?;
    }
    Ok(if report.ok { 0 } else { 1 })
}

fn point_map(g: &GlobalArgs, args: &PointMapArgs) -> Result<i32> {
    let spec = algebra_spec(g)?.ok_or_else(|| config_err("point map needs --poly or --algebra"))?;
    let alg = spec.build(g.toy)?;
    let pt = read_json::<PointJson>(args.input.as_deref())?.to_point(&alg)?;
    let u_next = read_json::<SubspaceJson>(Some(&args.u_next))?.to_subspace(alg.field())?;
    let image = phi_step(&alg, &pt, &u_next)?;
    emit(g, &PointJson::from_point(&image))?;
    Ok(0)
}

fn point_fiber(g: &GlobalArgs, args: &PointFiberArgs) -> Result<i32> {
    let spec = algebra_spec(g)?.ok_or_else(|| config_err("point fiber needs --poly or --algebra"))?;
    let alg = spec.build(g.toy)?;
    let target = read_json::<PointJson>(args.input.as_deref())?.to_point(&alg)?;
    let u = read_json::<SubspaceJson>(Some(&args.u))?.to_subspace(alg.field())?;
    let case = match args.case {
        CaseArg::Dual => Reduction::Dual,
        CaseArg::Primal => Reduction::Primal,
    };
    let stream = stream_index(0, 4, 0);
    let pre = phi_fiber_sample(&alg, &target, &u, case, &mut stream_rng(g.seed, stream), budget(g))?;
    emit(g, &PointJson::from_point(&pre))?;
    Ok(0)
}
