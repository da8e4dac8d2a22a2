//! The `plocal` command line: homology, invariants, EM models, twisted
//! products, the pullback/truncate/prune pipeline, and bound evaluation,
//! all emitting deterministic structured reports.
//!
//! Exit codes: 0 when every verdict passes (skips allowed), 1 on a
//! verification failure, 2 on an input error (bad syntax, unresolved
//! references, violated hypotheses, exceeded budgets).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num::bigint::BigUint;
use num::rational::Ratio;

use crate::abelian::FiniteAbelianGroup;
use crate::bounds::{
    self, BoundConfig, FormulaMode, LEMMA53_ABSORPTION, PROP33_ABSORPTION,
};
use crate::em::{self, Budget, EmKind, EmSkeleton, EmSpace};
use crate::formats;
use crate::homology::{invariants, normalized_chain_complex, HomologyProfile};
use crate::postnikov::{run_pipeline_with, PipelineError, PipelineOptions};
use crate::report::{RunReport, Status};
use crate::sset::FinSimplicialSet;
use crate::twist::{check_twisting_axioms, e_as_twisted_product_iso, TwistingOperator};
use crate::util::is_prime;

#[derive(Parser)]
#[command(name = "plocal", version, about = "exact workbench for size-bounded p-locally equivalent simplicial sets")]
struct Cli {
    /// Emit the report as JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to this path instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Max simplices per degree for materializing constructions
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology groups of a simplicial set, integrally or over Z_(p)
    Homology {
        #[arg(long)]
        input: PathBuf,
        /// Localize at this prime
        #[arg(long)]
        local: Option<u64>,
        /// Highest degree to report (default: the top degree)
        #[arg(long)]
        through: Option<usize>,
        /// Skip the simplicial identity check
        #[arg(long)]
        no_verify: bool,
    },
    /// Homology invariants h_p, m_p, h, m, N of a set or a profile
    Invariants {
        #[arg(long, conflicts_with = "profile")]
        input: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Dimension d for the sums (default: top degree of the input)
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Eilenberg-MacLane model commands
    Em {
        #[command(subcommand)]
        command: EmCommand,
    },
    /// Twisting operator and twisted-product verification
    Twist {
        #[command(subcommand)]
        command: TwistCommand,
    },
    /// The pullback/truncate/prune pipeline
    Pipeline {
        #[command(subcommand)]
        command: PipelineCommand,
    },
    /// Evaluate every size bound for a homology profile
    Bound {
        #[arg(long)]
        profile: PathBuf,
        /// Homotopy degree n for the order bounds (default: max(2, d))
        #[arg(long)]
        degree: Option<usize>,
        /// The constant in the log^3 terms, as an integer, decimal or p/q
        #[arg(long)]
        constant: Option<String>,
        /// Which order-bound face to report: closed | pre
        #[arg(long)]
        mode: Option<String>,
        /// Also verify the bound proof chains at this profile
        #[arg(long)]
        chains: bool,
    },
    /// Parse a simplicial set and run its validity checks
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum EmCommand {
    /// Closed-form simplex count of K(pi,k)_n or E(pi,k)_n
    Size {
        /// Invariant factors of pi, comma separated (e.g. 2,4)
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// K or E
        #[arg(long, default_value = "K")]
        space: String,
    },
    /// Materialize a skeleton and write it as SSET/1
    Build {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "K")]
        space: String,
        #[arg(long)]
        up_to: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Free-label bijection, counting and identity checks
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        up_to: usize,
    },
}

#[derive(Subcommand)]
enum TwistCommand {
    /// Check the twisting axioms and the twisted-product decomposition
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        up_to: usize,
        /// Cap the number of base simplices checked per degree
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PipelineCommand {
    /// Run the full construction on an input set
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        prime: u64,
        /// k-invariant files for stages 3, 4, ... in order
        #[arg(long = "kinv")]
        kinvs: Vec<PathBuf>,
        /// Pipeline degree d (default: max(2, homological dim, top - 1))
        #[arg(long)]
        dim: Option<usize>,
        /// Write the pruned set as SSET/1
        #[arg(long)]
        out: Option<PathBuf>,
        /// The constant in the log^3 terms for the bound comparison
        #[arg(long)]
        constant: Option<String>,
    },
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<RunReport, CliError>;

pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parse arguments, run the command, emit the report. Returns the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let json = cli.json;
    let report_path = cli.report.clone();
    match execute(cli) {
        Ok(report) => {
            let body = if json {
                serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
            } else {
                report.render_text()
            };
            match &report_path {
                Some(path) => {
                    if let Err(e) = fs::write(path, body) {
                        eprintln!("error: cannot write report to {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{body}"),
            }
            report.exit_code()
        }
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
}

fn load_sset(path: &Path, report: &mut RunReport) -> Result<FinSimplicialSet, CliError> {
    let text = read_file(path)?;
    report.add_input(&path.display().to_string(), text.as_bytes());
    formats::parse_sset(&text)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn parse_group(spec: &str) -> Result<FiniteAbelianGroup, CliError> {
    let factors: Vec<u64> = spec
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError(format!("bad group factors `{spec}` (expected e.g. 2,4)")))?;
    Ok(FiniteAbelianGroup::from_factors(&factors)?)
}

fn parse_space(spec: &str) -> Result<EmKind, CliError> {
    match spec {
        "K" | "k" => Ok(EmKind::K),
        "E" | "e" => Ok(EmKind::E),
        other => Err(CliError(format!("unknown space `{other}`, expected K or E"))),
    }
}

fn parse_constant(spec: &str) -> Result<Ratio<i64>, CliError> {
    let bad = || CliError(format!("bad constant `{spec}` (expected an integer, decimal or p/q)"));
    let r = if let Some((a, b)) = spec.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| bad())?;
        let den: i64 = b.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ratio::new(num, den)
    } else if let Some((int, frac)) = spec.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 9 {
            return Err(bad());
        }
        let scale = 10i64.pow(digits);
        let int_part: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        if int_part < 0 {
            return Err(CliError("the constant must be non-negative".into()));
        }
        Ratio::new(int_part * scale + frac_part, scale)
    } else {
        Ratio::from_integer(spec.trim().parse().map_err(|_| bad())?)
    };
    if r < Ratio::from_integer(0) {
        return Err(CliError("the constant must be non-negative".into()));
    }
    Ok(r)
}

fn bound_config(constant: Option<&str>, mode: Option<&str>) -> Result<BoundConfig, CliError> {
    let mut cfg = BoundConfig::default();
    if let Some(c) = constant {
        cfg.c_log3 = parse_constant(c)?;
    }
    if let Some(m) = mode {
        cfg.mode = match m {
            "closed" => FormulaMode::Closed,
            "pre" | "pre-absorption" => FormulaMode::PreAbsorption,
            other => return Err(CliError(format!("unknown mode `{other}`, expected closed or pre"))),
        };
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> CliResult {
    let budget = Budget { per_degree: cli.budget };
    match cli.command {
        Command::Homology { input, local, through, no_verify } => {
            cmd_homology(&input, local, through, no_verify)
        }
        Command::Invariants { input, profile, dim } => cmd_invariants(input, profile, dim),
        Command::Em { command } => match command {
            EmCommand::Size { group, k, n, space } => cmd_em_size(&group, k, n, &space),
            EmCommand::Build { group, k, space, up_to, out } => {
                cmd_em_build(&group, k, &space, up_to, &out, &budget)
            }
            EmCommand::Verify { group, k, up_to } => cmd_em_verify(&group, k, up_to, &budget),
        },
        Command::Twist { command } => match command {
            TwistCommand::Verify { group, k, up_to, sample } => {
                cmd_twist_verify(&group, k, up_to, sample, &budget)
            }
        },
        Command::Pipeline { command } => match command {
            PipelineCommand::Run { input, prime, kinvs, dim, out, constant } => {
                cmd_pipeline(&input, prime, &kinvs, dim, out.as_deref(), constant.as_deref(), &budget)
            }
        },
        Command::Bound { profile, degree, constant, mode, chains } => {
            cmd_bound(&profile, degree, constant.as_deref(), mode.as_deref(), chains)
        }
        Command::Verify { input } => cmd_verify(&input),
    }
}

fn cmd_homology(
    input: &Path,
    local: Option<u64>,
    through: Option<usize>,
    no_verify: bool,
) -> CliResult {
    if let Some(p) = local {
        if !is_prime(p) {
            return Err(CliError(format!("{p} is not prime")));
        }
    }
    let mut report = RunReport::new(format!("homology --input {}", input.display()));
    let started = Instant::now();
    let set = load_sset(input, &mut report)?;
    if !no_verify {
        let id = set.check_simplicial_identities();
        report.check(
            "simplicial identities",
            id.is_valid(),
            format!("{} violations", id.violations.len()),
        );
    }
    let cx = normalized_chain_complex(&set);
    report.check("boundary squared is zero", cx.boundary_squared_is_zero(), "");
    let top = through.unwrap_or(cx.top()).min(cx.top());
    report.begin_section(match local {
        Some(p) => format!("homology with Z_({p}) coefficients"),
        None => "integral homology".to_string(),
    });
    for n in 0..=top {
        let h = match local {
            Some(p) => cx.local_homology(n, p),
            None => cx.homology(n),
        };
        report.kv(format!("H_{n}"), h.to_string());
    }
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_invariants(
    input: Option<PathBuf>,
    profile: Option<PathBuf>,
    dim: Option<usize>,
) -> CliResult {
    let mut report = RunReport::new("invariants");
    let started = Instant::now();
    let profile: HomologyProfile = match (input, profile) {
        (Some(path), None) => {
            let set = load_sset(&path, &mut report)?;
            let id = set.check_simplicial_identities();
            report.check(
                "simplicial identities",
                id.is_valid(),
                format!("{} violations", id.violations.len()),
            );
            let cx = normalized_chain_complex(&set);
            cx.homology_profile(cx.top())
        }
        (None, Some(path)) => {
            let text = read_file(&path)?;
            report.add_input(&path.display().to_string(), text.as_bytes());
            formats::parse_profile(&text)?
        }
        _ => return Err(CliError("provide exactly one of --input or --profile".into())),
    };
    let d = dim.unwrap_or_else(|| profile.dimension());
    let inv = invariants(&profile.resized(d))?;
    report.begin_section("homology profile");
    for (n, g) in profile.groups.iter().enumerate() {
        report.kv(format!("H_{n}"), g.to_string());
    }
    report.begin_section("invariants");
    report.kv("d", d.to_string());
    for pi in &inv.per_prime {
        report.kv(format!("p={}", pi.prime), format!("h_p={} m_p={}", pi.h_p, pi.m_p));
    }
    report.kv("h", inv.h.to_string());
    report.kv("m", inv.m.to_string());
    report.kv("N", inv.n_product.to_string());
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_em_size(group: &str, k: usize, n: usize, space: &str) -> CliResult {
    if k < 1 {
        return Err(CliError("k must be >= 1".into()));
    }
    let g = parse_group(group)?;
    let kind = parse_space(space)?;
    let mut report = RunReport::new(format!("em size --group {group} --k {k} --n {n} --space {kind}"));
    report.begin_section("cardinality");
    report.kv("group", format!("{g:?}"));
    report.kv(
        format!("|{kind}(pi,{k})_{n}|"),
        em::em_cardinality(&g, k, n, kind).to_string(),
    );
    Ok(report)
}

fn cmd_em_build(
    group: &str,
    k: usize,
    space: &str,
    up_to: usize,
    out: &Path,
    budget: &Budget,
) -> CliResult {
    if k < 1 {
        return Err(CliError("k must be >= 1".into()));
    }
    let g = parse_group(group)?;
    let kind = parse_space(space)?;
    let mut report = RunReport::new(format!(
        "em build --group {group} --k {k} --space {kind} --up-to {up_to}"
    ));
    let started = Instant::now();
    let space = EmSpace { group: g, degree: k, kind };
    let skel = EmSkeleton::build(space.clone(), up_to, budget)?;
    report.begin_section("skeleton");
    report.kv("space", space.name());
    report.kv(
        "nondegenerate",
        format!("{:?}", skel.set.nondegenerate_counts()),
    );
    report.check(
        "simplicial identities",
        skel.set.check_simplicial_identities().is_valid(),
        "",
    );
    for (n, actual, expected, ok) in em::verify_counts(&skel) {
        report.check(
            format!("degree-{n} count matches the closed form"),
            ok,
            format!("{actual} vs {expected}"),
        );
    }
    let text = formats::serialize_sset(&skel.set, Some(&space.name()));
    fs::write(out, text).map_err(|e| CliError(format!("cannot write {}: {e}", out.display())))?;
    report.kv("written", out.display().to_string());
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_em_verify(group: &str, k: usize, up_to: usize, budget: &Budget) -> CliResult {
    if k < 1 {
        return Err(CliError("k must be >= 1".into()));
    }
    let g = parse_group(group)?;
    let mut report = RunReport::new(format!("em verify --group {group} --k {k} --up-to {up_to}"));
    let started = Instant::now();
    for n in 0..=up_to {
        let r = em::verify_free_label_bijection(&g, k, n, budget);
        let detail = if r.onto_checked {
            format!("{} cocycles, round-trip and onto", r.enumerated)
        } else {
            format!("{} cocycles, round-trip (onto skipped: over budget)", r.enumerated)
        };
        report.check(format!("degree-{n} free-label bijection"), r.passed(), detail);
    }
    let skel = EmSkeleton::build(EmSpace::k(g, k), up_to, budget)?;
    report.check(
        "skeleton simplicial identities",
        skel.set.check_simplicial_identities().is_valid(),
        "",
    );
    for (n, actual, expected, ok) in em::verify_counts(&skel) {
        report.check(
            format!("degree-{n} count matches the closed form"),
            ok,
            format!("{actual} vs {expected}"),
        );
    }
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_twist_verify(
    group: &str,
    k: usize,
    up_to: usize,
    sample: Option<usize>,
    budget: &Budget,
) -> CliResult {
    if k < 1 {
        return Err(CliError("k must be >= 1".into()));
    }
    let g = parse_group(group)?;
    let mut report = RunReport::new(format!("twist verify --group {group} --k {k} --up-to {up_to}"));
    let started = Instant::now();
    let tau = TwistingOperator::canonical(g.clone(), k);
    let axioms = check_twisting_axioms(&tau, up_to, sample);
    report.check(
        "twisting axioms",
        axioms.passed(),
        format!("{} base simplices checked, {} violations", axioms.checked, axioms.violations.len()),
    );
    let iso = e_as_twisted_product_iso(&g, k, up_to);
    report.begin_section("twisted-product decomposition");
    report.kv("splitting", iso.section);
    for d in &iso.degrees {
        report.check(
            format!("degree-{} decomposition", d.n),
            d.cardinality_ok && d.bijection_ok && d.untwisted_ops_ok && d.d0_ok,
            format!(
                "cardinality {} bijection {} untwisted {} d0 {}",
                d.cardinality_ok, d.bijection_ok, d.untwisted_ops_ok, d.d0_ok
            ),
        );
    }
    // materialize the twisted product and run the identity gate when the
    // budget allows it
    let fiber = EmSpace::k(g.clone(), k);
    let base = EmSpace::k(g.clone(), k + 1);
    let affordable = (0..=up_to).all(|n| {
        fiber.cardinality(n) * base.cardinality(n) <= BigUint::from(budget.per_degree)
    });
    if affordable {
        let tw = crate::twist::twisted_product(&fiber, &base, &tau, up_to, budget)?;
        report.check(
            "twisted product simplicial identities",
            tw.set.check_simplicial_identities().is_valid(),
            format!("nondegenerate {:?}", tw.set.nondegenerate_counts()),
        );
    } else {
        report.verdict(
            "twisted product simplicial identities",
            Status::Skipped,
            "pair enumeration exceeds the budget",
        );
    }
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_pipeline(
    input: &Path,
    prime: u64,
    kinv_paths: &[PathBuf],
    dim: Option<usize>,
    out: Option<&Path>,
    constant: Option<&str>,
    budget: &Budget,
) -> CliResult {
    let mut report = RunReport::new(format!(
        "pipeline run --input {} --prime {prime}",
        input.display()
    ));
    let started = Instant::now();
    let set = load_sset(input, &mut report)?;
    let mut kinv_texts = Vec::new();
    for path in kinv_paths {
        let text = read_file(path)?;
        report.add_input(&path.display().to_string(), text.as_bytes());
        kinv_texts.push(text);
    }
    let opts = PipelineOptions {
        prime,
        dim,
        budget: *budget,
        bound_config: bound_config(constant, None)?,
    };
    let outcome = run_pipeline_with(
        &set,
        kinv_texts.len(),
        |stage, prev| {
            formats::parse_kinv(&kinv_texts[stage - 3], prev)
                .map_err(|e| PipelineError::KInvariantInput(stage, e.to_string()))
        },
        &opts,
    )
    .map_err(|e| CliError(e.to_string()))?;
    report.begin_section("pipeline");
    report.kv("prime", prime.to_string());
    report.kv("d", outcome.effective_d.to_string());
    report.kv(
        "invariants",
        format!(
            "h={} m={} N={}",
            outcome.invariants.h, outcome.invariants.m, outcome.invariants.n_product
        ),
    );
    report.kv("pi_2", format!("{:?}", outcome.stage2.pi2));
    report.kv(
        "stage-2 nondegenerate",
        format!("{:?}", outcome.stage2.skeleton.set.nondegenerate_counts()),
    );
    for s in &outcome.stages {
        report.kv(
            format!("stage-{} nondegenerate", s.stage),
            format!("{:?} (fiber {})", s.nondegenerate, s.fiber),
        );
    }
    report.kv("pruned nondegenerate", format!("{:?}", outcome.pruned.set.nondegenerate_counts()));
    report.kv("|Y|", outcome.y_size.to_string());
    report.kv(
        "headline bound",
        format!(
            "{} (C = {}{})",
            outcome.final_bound.value.approx_string(),
            opts.bound_config.c_log3,
            outcome.final_bound.note.as_deref().map(|n| format!("; {n}")).unwrap_or_default()
        ),
    );
    report.absorb_steps(&outcome.verdicts);
    if let Some(path) = out {
        let text = formats::serialize_sset(
            &outcome.pruned.set,
            Some(&format!("pruned p-locally equivalent set, p = {prime}")),
        );
        fs::write(path, text).map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))?;
        report.kv("written", path.display().to_string());
    }
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_bound(
    profile_path: &Path,
    degree: Option<usize>,
    constant: Option<&str>,
    mode: Option<&str>,
    chains: bool,
) -> CliResult {
    let mut report = RunReport::new(format!("bound --profile {}", profile_path.display()));
    let started = Instant::now();
    let text = read_file(profile_path)?;
    report.add_input(&profile_path.display().to_string(), text.as_bytes());
    let profile = formats::parse_profile(&text)?;
    let cfg = bound_config(constant, mode)?;
    let d = profile.dimension();
    let inv = invariants(&profile)?;
    let n = degree.unwrap_or(d.max(2)).max(2);
    report.begin_section("configuration");
    report.kv("C_log3", cfg.c_log3.to_string());
    report.kv(
        "mode",
        match cfg.mode {
            FormulaMode::Closed => "closed",
            FormulaMode::PreAbsorption => "pre-absorption",
        },
    );
    report.kv("degree n", n.to_string());
    report.kv("d", d.to_string());
    report.begin_section("per-prime bounds");
    for pi in &inv.per_prime {
        let rank = bounds::rank_bound(n, pi.h_p, &cfg);
        let tors = bounds::torsion_exponent_bound(n, pi.m_p);
        let order = bounds::homotopy_order_bound_p(n, pi.prime, pi.m_p, pi.h_p, &cfg);
        report.kv(
            format!("p={}", pi.prime),
            format!(
                "rank <= {}; torsion exponent <= {}; order <= {}{}; pre-absorption {}",
                rank.approx_string(),
                tors,
                order.value(cfg.mode).approx_string(),
                if order.degenerate { " [closed form degenerate: h_p <= 1]" } else { "" },
                order.pre_absorption.approx_string(),
            ),
        );
    }
    report.begin_section("combined bounds");
    let combined = bounds::homotopy_order_bound(n, inv.m, &inv.n_product, inv.h, &cfg);
    report.kv(
        format!("|pi_{n}|"),
        format!(
            "<= {}{}",
            combined.value(cfg.mode).approx_string(),
            if combined.degenerate { " [closed form degenerate: h <= 1]" } else { "" }
        ),
    );
    if d >= 1 && inv.h >= 1 {
        let orders: Vec<_> = (2..=d + 1)
            .map(|j| bounds::homotopy_order_bound(j, inv.m, &inv.n_product, inv.h, &cfg).value(cfg.mode))
            .collect();
        let ssb = bounds::stage_size_bound_log(n.max(d + 2), d + 1, &orders);
        report.kv(
            format!("stage size through degree {}", n.max(d + 2)),
            format!("<= {}", ssb.approx_string()),
        );
    } else {
        report.kv("stage size", "trivial profile: every stage is a point");
    }
    let fb = bounds::final_bound(d.max(2), inv.m, inv.h, &inv.n_product, &cfg);
    let ln_scale = fb.value.ln_midpoint().map(|l| format!("{l:.6e}")).unwrap_or_else(|| "-inf".into());
    report.kv(
        "headline bound",
        format!(
            "{} (ln = {}){}",
            fb.value.approx_string(),
            ln_scale,
            fb.note.as_deref().map(|s| format!("; {s}")).unwrap_or_default()
        ),
    );
    if chains {
        report.begin_section("proof chains");
        report.kv("absorption margins", format!("+{PROP33_ABSORPTION} / +{LEMMA53_ABSORPTION}"));
        if inv.h >= 2 && inv.m >= 1 {
            for pi in inv.per_prime.iter().filter(|pi| pi.h_p >= 2 && pi.m_p >= 1) {
                for step in bounds::prop33_chain(n, pi.prime, pi.m_p, pi.h_p, &cfg) {
                    report.check(
                        format!("order chain p={}: {}", pi.prime, step.label),
                        step.passed(),
                        step.skipped.unwrap_or_default(),
                    );
                }
            }
            for step in bounds::lemma53_chain(d.max(2), inv.m, inv.h, &inv.n_product, &cfg) {
                let skipped = step.skipped.is_some();
                let detail = step.skipped.clone().unwrap_or_default();
                if skipped {
                    report.verdict(format!("stage chain: {}", step.label), Status::Skipped, detail);
                } else {
                    report.check(format!("stage chain: {}", step.label), step.holds, detail);
                }
            }
        } else {
            report.verdict(
                "proof chains",
                Status::Skipped,
                "chains are stated for h >= 2 and m >= 1",
            );
        }
    }
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

fn cmd_verify(input: &Path) -> CliResult {
    let mut report = RunReport::new(format!("verify --input {}", input.display()));
    let started = Instant::now();
    let set = load_sset(input, &mut report)?;
    report.begin_section("shape");
    report.kv("top_degree", set.top_degree().to_string());
    report.kv("nondegenerate", format!("{:?}", set.nondegenerate_counts()));
    let id = set.check_simplicial_identities();
    if id.is_valid() {
        report.check("simplicial identities", true, "no violations");
    } else {
        for v in id.violations.iter().take(10) {
            report.check("simplicial identities", false, v.describe(&set));
        }
        if id.violations.len() > 10 {
            report.kv("suppressed", format!("{} further violations", id.violations.len() - 10));
        }
    }
    let cx = normalized_chain_complex(&set);
    report.check("boundary squared is zero", cx.boundary_squared_is_zero(), "");
    report.timing("total", started.elapsed().as_millis());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_parse() {
        assert_eq!(parse_constant("1").unwrap(), Ratio::from_integer(1));
        assert_eq!(parse_constant("0.5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_constant("3/2").unwrap(), Ratio::new(3, 2));
        assert!(parse_constant("-1").is_err());
        assert!(parse_constant("x").is_err());
    }

    #[test]
    fn groups_parse() {
        assert_eq!(parse_group("2,4").unwrap().factors(), &[2, 4]);
        assert_eq!(parse_group("2, 3").unwrap().factors(), &[6]);
        assert!(parse_group("0").is_err());
        assert!(parse_group("x").is_err());
    }
}
