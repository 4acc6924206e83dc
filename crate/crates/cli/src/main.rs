use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccproto::lemma_lab::{run_kl_trials, run_support_trials};
use ccproto_cli::config::{ExperimentConfig, InstanceKind, Policy, ProtocolId};
use ccproto_cli::csvout::{read_rows, write_rows, CsvRow};
use ccproto_cli::error::{HarnessError, Result};
use ccproto_cli::experiment::monte_carlo_error;
use ccproto_cli::fit::{fit_scaling, Model};
use ccproto_cli::regress::{default_golden_dir, regress};
use ccproto_cli::sweep::{cost_sweep, parse_list, scaling_points, sweep_rows};
use ccproto_congest::{
    brute_force_triangles, enumerate_triangles, enumerate_triangles_arboricity, enumerate_triangles_oriented,
    peel_orientation, CongestConfig, Graph,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ccproto", version, about = "Equality testing, ExistsEqual and set intersection experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte Carlo error estimate for one configuration.
    Run(RunArgs),
    /// Cost sweep over r (and optionally k, E), with an optional scaling fit.
    Sweep(SweepArgs),
    /// Triangle enumeration on a CONGEST network.
    Congest(CongestArgs),
    /// Random checks of the two entropy lemmas.
    VerifyLemmas(LemmaArgs),
    /// Compare (or rewrite with --bless) the golden transcripts.
    Regress(RegressArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, value_enum)]
    protocol: Option<ProtocolId>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long = "E")]
    e: Option<u64>,
    #[arg(long)]
    coord_bits: Option<u32>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    instance: Option<InstanceKind>,
    /// Common elements planted in setint instances.
    #[arg(long)]
    overlap: Option<usize>,
    /// Rewind budget factor.
    #[arg(long)]
    c: Option<u64>,
    #[arg(long, value_enum)]
    policy: Option<Policy>,
    #[arg(long)]
    threads: Option<usize>,
    /// Flat JSON config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    fault_plan: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    p: ParamArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    p: ParamArgs,
    /// Comma-separated r values.
    #[arg(long, default_value = "1,2,3,4,6")]
    rs: String,
    /// Comma-separated k values (default: --k).
    #[arg(long)]
    ks: Option<String>,
    /// Fit the swept bits against a model.
    #[arg(long, value_enum)]
    fit: Option<Model>,
    /// Exit 1 when the fit's max relative residual exceeds this.
    #[arg(long)]
    max_residual: Option<f64>,
    /// Fit an existing CSV instead of running.
    #[arg(long)]
    from_csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CongestMode {
    Degree,
    Oriented,
    Arboricity,
}

#[derive(Args)]
struct CongestArgs {
    /// Edge list, "u v" per line.
    #[arg(long, conflicts_with = "n")]
    graph: Option<PathBuf>,
    /// G(n, p) node count.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "degree")]
    mode: CongestMode,
    /// Arboricity bound for the peeling orientation.
    #[arg(long)]
    lambda: Option<usize>,
    /// Peeling constant.
    #[arg(long, default_value_t = 3)]
    peel_c: usize,
    #[arg(long, default_value_t = 4.0)]
    c_phase: f64,
    #[arg(long, default_value_t = 1)]
    c_msg: u32,
    /// Directory for triangles.csv and stats.json.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Compare against the brute-force oracle; exit 1 on mismatch.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 12)]
    max_s: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct RegressArgs {
    #[arg(long)]
    golden: Option<PathBuf>,
    #[arg(long)]
    bless: bool,
}

fn build_config(p: &ParamArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &p.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => {
            let missing = |f: &str| HarnessError::Usage(format!("--{f} is required without --config"));
            ExperimentConfig::new(
                p.protocol.ok_or_else(|| missing("protocol"))?,
                p.k.ok_or_else(|| missing("k"))?,
                p.r.ok_or_else(|| missing("r"))?,
                p.e.ok_or_else(|| missing("E"))?,
            )
        }
    };
    if let Some(v) = p.protocol {
        cfg.protocol = v;
    }
    if let Some(v) = p.k {
        cfg.k = v;
    }
    if let Some(v) = p.r {
        cfg.r = v;
    }
    if let Some(v) = p.e {
        cfg.e = v;
    }
    if let Some(v) = p.coord_bits {
        cfg.coord_bits = v;
    }
    if let Some(v) = p.trials {
        cfg.trials = v;
    }
    if let Some(v) = p.seed {
        cfg.seed = v;
    }
    if let Some(v) = p.instance {
        cfg.instance = v;
    }
    if let Some(v) = p.overlap {
        cfg.overlap = v;
    }
    if let Some(v) = p.c {
        cfg.c = v;
    }
    if let Some(v) = p.policy {
        cfg.policy = v;
    }
    if let Some(v) = p.threads {
        cfg.threads = v;
    }
    if p.fault_plan.is_some() {
        cfg.fault_plan = p.fault_plan.clone();
    }
    if p.out.is_some() {
        cfg.out = p.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn default_out(name: &str) -> PathBuf {
    Path::new("results").join(format!("{name}.csv"))
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let cfg = build_config(&a.p)?;
    let res = monte_carlo_error(&cfg)?;
    let out = cfg.out.clone().unwrap_or_else(|| default_out(&cfg.run_id()));
    write_rows(&out, &[CsvRow::from_result(&cfg, &res)])?;
    let e = &res.estimate;
    println!(
        "{}: failures {}/{} estimate {:.3e} 99% CI [{:.3e}, {:.3e}] mean bits {:.1} rounds {:.2} -> {}",
        cfg.run_id(),
        e.failures,
        e.trials,
        e.estimate,
        e.ci_lo,
        e.ci_hi,
        res.mean_bits,
        res.mean_rounds_merged,
        out.display()
    );
    if res.one_sided_violations > 0 {
        return Err(HarnessError::Assertion(format!(
            "{} trials refuted an equal coordinate",
            res.one_sided_violations
        )));
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let rows = match &a.from_csv {
        Some(path) => read_rows(path)?,
        None => {
            let mut p = a.p.clone();
            // scaling sweeps default to all-equal (maximum-volume) instances
            p.instance = p.instance.or(Some(InstanceKind::Equal));
            if p.r.is_none() {
                p.r = Some(1);
            }
            let base = build_config(&p)?;
            let rs: Vec<u32> = parse_list(&a.rs).ok_or_else(|| HarnessError::Usage(format!("bad --rs {}", a.rs)))?;
            let ks: Vec<usize> = match &a.ks {
                Some(s) => parse_list(s).ok_or_else(|| HarnessError::Usage(format!("bad --ks {s}")))?,
                None => vec![base.k],
            };
            let grid: Vec<(usize, u32, u64)> = ks.iter().flat_map(|&k| rs.iter().map(move |&r| (k, r, base.e))).collect();
            for &(k, r, e) in &grid {
                ExperimentConfig { k, r, e, ..base.clone() }.validate()?;
            }
            let rows = sweep_rows(&cost_sweep(&base, &grid)?);
            let out = base.out.clone().unwrap_or_else(|| default_out(&format!("sweep-{}", base.run_id())));
            write_rows(&out, &rows)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            rows
        }
    };
    for r in &rows {
        println!("{:<28} bits {:>12.1} rounds {:>6.2}", r.run_id, r.bits_total, r.rounds_merged);
    }
    if let Some(model) = a.fit {
        let f = fit_scaling(&scaling_points(&rows), model)?;
        println!("fit {:?}: a = {:.4}, max relative residual = {:.4}", model, f.a, f.max_rel_residual);
        if let Some(limit) = a.max_residual {
            if f.max_rel_residual > limit {
                return Err(HarnessError::Assertion(format!(
                    "residual {:.4} exceeds {limit}",
                    f.max_rel_residual
                )));
            }
        }
    }
    Ok(())
}

fn cmd_congest(a: CongestArgs) -> Result<()> {
    let g = match (&a.graph, a.n) {
        (Some(path), _) => Graph::load(path)?,
        (None, Some(n)) => Graph::gnp(n, a.p, a.seed),
        (None, None) => return Err(HarnessError::Usage("give --graph FILE or --n N".into())),
    };
    let config = CongestConfig {
        c_phase: a.c_phase,
        c_msg: a.c_msg,
        ..CongestConfig::default()
    };
    let run = match a.mode {
        CongestMode::Degree => enumerate_triangles(&g, &config, a.seed)?,
        CongestMode::Oriented => {
            let lambda = a.lambda.ok_or_else(|| HarnessError::Usage("--lambda is required".into()))?;
            let o = peel_orientation(&g, lambda, a.peel_c)?;
            enumerate_triangles_oriented(&g, &o, None, None, &config, a.seed)?
        }
        CongestMode::Arboricity => {
            let lambda = a.lambda.ok_or_else(|| HarnessError::Usage("--lambda is required".into()))?;
            enumerate_triangles_arboricity(&g, lambda, a.peel_c, &config, a.seed)?.1
        }
    };
    println!(
        "n {} edges {} delta {} triangles {} rounds {} bits {} cap {} complete {}",
        g.n,
        g.edge_count(),
        g.max_degree(),
        run.triangles.len(),
        run.rounds,
        run.bits_total,
        run.cap_bits,
        run.complete
    );
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("triangles.csv"), run.triangles_csv())?;
        std::fs::write(dir.join("stats.json"), run.stats_json())?;
    }
    if a.check && run.triangles != brute_force_triangles(&g) {
        return Err(HarnessError::Assertion("triangles differ from the brute-force oracle".into()));
    }
    Ok(())
}

fn cmd_lemmas(a: LemmaArgs) -> Result<()> {
    let reports = [
        run_support_trials(a.trials, a.max_s, a.seed),
        run_kl_trials(a.trials, a.max_s, a.seed.wrapping_add(1)),
    ];
    println!("{:<16} {:>8} {:>10} {:>6} {:>12}  result", "lemma", "trials", "violations", "tight", "min margin");
    for r in &reports {
        println!(
            "{:<16} {:>8} {:>10} {:>6} {:>12.3e}  {}",
            r.lemma,
            r.trials,
            r.violations,
            r.tight,
            r.min_margin,
            if r.passed() { "pass" } else { "FAIL" }
        );
        if let Some(v) = &r.first_violation {
            println!("  first violation: {v}");
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(HarnessError::Assertion("lemma violations found".into()))
    }
}

fn cmd_regress(a: RegressArgs) -> Result<()> {
    let dir = a.golden.unwrap_or_else(default_golden_dir);
    let rep = regress(&dir, a.bless)?;
    if a.bless {
        println!("wrote {} golden files to {}", rep.checked, dir.display());
        return Ok(());
    }
    for m in &rep.missing {
        println!("missing  {m}");
    }
    for m in &rep.mismatched {
        println!("changed  {m}");
    }
    println!("{} golden files checked in {}", rep.checked, dir.display());
    if rep.missing.is_empty() && rep.mismatched.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Assertion("golden files differ".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Congest(a) => cmd_congest(a),
        Cmd::VerifyLemmas(a) => cmd_lemmas(a),
        Cmd::Regress(a) => cmd_regress(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, HarnessError::Usage(_)) {
                eprintln!("run `ccproto <subcommand> --help` for the flag grammar");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
