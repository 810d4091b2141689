//! `fdepth`: functional data depth experiments from the command line.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fdepth::depth::DEFAULT_RTD_PROJECTIONS;
use fdepth::diagnostics::{clt_check, rank_rank, slln_check, timing_bench, BenchMethod};
use fdepth::io::{load_dataset, write_dataset, write_depths};
use fdepth::lightcurve::{preprocess, read_manifest, LcConfig};
use fdepth::robust::{
    detection_experiment, mise_experiment, DetectionConfig, Estimator, IseScale, MiseConfig,
    TieRule, TrimSpec,
};
use fdepth::sim::{ModelId, ModelSampler, ModelSpec};
use fdepth::{compute_depth, DepthMethod};
use serde::Serialize;

use output::{write_csv, write_json, write_svg, RunConfig};

#[derive(Parser)]
#[command(name = "fdepth", version, about = "Functional data depth experiments")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FDEPTH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of every curve in a dataset.
    Depth(DepthArgs),
    /// Draw a sample from a contamination model.
    Simulate(SimulateArgs),
    /// MISE of location estimators across models.
    Mise(MiseArgs),
    /// Detection rate of a single planted shape outlier.
    Detect(DetectArgs),
    /// Rank-rank stability plot on a random half split.
    Rankrank(RankRankArgs),
    /// Fold, smooth and align light curves listed in a manifest.
    LcPrep(LcPrepArgs),
    /// Time depth computations and fit complexity slopes.
    Bench(BenchArgs),
    /// Empirical law of large numbers and normal limit of L∞ depth.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Args, Serialize)]
struct DepthArgs {
    /// linf, bd3, mbd, hrd, mhrd, rtd or spatd.
    #[arg(long)]
    method: String,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Random projections for RTD.
    #[arg(long, default_value_t = DEFAULT_RTD_PROJECTIONS)]
    n_proj: usize,
    /// Seed for RTD directions (random and printed when omitted).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Serialize)]
struct ContaminationArgs {
    /// Contamination magnitude (default 5).
    #[arg(long = "M")]
    magnitude: Option<f64>,
    /// Contamination probability (model default when omitted).
    #[arg(long)]
    q: Option<f64>,
    /// Roughness exponent of the outlier kernel (shape models).
    #[arg(long)]
    mu2: Option<f64>,
}

impl ContaminationArgs {
    fn spec(&self, id: ModelId) -> ModelSpec {
        let mut s = ModelSpec::new(id);
        if let Some(m) = self.magnitude {
            s = s.with_magnitude(m);
        }
        if let Some(q) = self.q {
            s = s.with_q(q);
        }
        if let Some(mu) = self.mu2 {
            s = s.with_roughness(mu);
        }
        s
    }
}

#[derive(Args, Serialize)]
struct ModelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    contamination: ContaminationArgs,
    /// Curves per sample.
    #[arg(long)]
    n: Option<usize>,
}

impl ModelArgs {
    fn spec(&self, id: ModelId) -> ModelSpec {
        let s = self.contamination.spec(id);
        match self.n {
            Some(n) => s.with_n(n),
            None => s,
        }
    }
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    model: String,
    #[command(flatten)]
    params: ModelArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Dataset CSV.
    #[arg(long)]
    out: PathBuf,
    /// JSON sidecar (default: the output path with extension `.json`).
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum IseScaleArg {
    PerPoint,
    Sum,
}

#[derive(Args, Serialize)]
struct MiseArgs {
    /// Comma-separated model ids, e.g. M0,M1,M2.
    #[arg(long, value_delimiter = ',', default_value = "M0,M1,M2,M3,M4")]
    models: Vec<String>,
    #[command(flatten)]
    params: ModelArgs,
    /// Comma-separated estimators: mean, med, and depth method tokens.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "mean,med,bd,mbd,hrd,mhrd,rtd,spatd,linf"
    )]
    estimators: Vec<String>,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_RTD_PROJECTIONS)]
    n_proj: usize,
    #[arg(long, value_enum, default_value_t = IseScaleArg::PerPoint)]
    ise_scale: IseScaleArg,
    /// Table CSV (estimator rows × model columns, `mise (se)` cells).
    #[arg(long)]
    out: PathBuf,
    /// Full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TieRuleArg {
    Count,
    Random,
}

#[derive(Args, Serialize)]
struct DetectArgs {
    #[arg(long, value_delimiter = ',', default_value = "M5,M6,M7,M8,M9")]
    models: Vec<String>,
    #[command(flatten)]
    params: ModelArgs,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "bd,mbd,hrd,mhrd,rtd,spatd,linf"
    )]
    methods: Vec<String>,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Least-deep fraction counted as a detection.
    #[arg(long, default_value_t = 0.2)]
    fraction: f64,
    #[arg(long, value_enum, default_value_t = TieRuleArg::Count)]
    tie_rule: TieRuleArg,
    #[arg(long, default_value_t = DEFAULT_RTD_PROJECTIONS)]
    n_proj: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RankRankArgs {
    #[arg(long)]
    method: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// Seed for the split, tie-breaking and RTD directions.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_RTD_PROJECTIONS)]
    n_proj: usize,
    /// Also report normalised cross ranks of the `k` deepest curves.
    #[arg(long)]
    deepest: Option<usize>,
    /// Rank pairs CSV.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LcPrepArgs {
    /// CSV with columns `star_id,period,path`.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 15)]
    knots: usize,
    #[arg(long, default_value_t = 100)]
    grid_size: usize,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    /// Methods to time; `mbd-naive` times pair enumeration.
    #[arg(long, value_delimiter = ',', default_value = "mbd,linf,bd3")]
    methods: Vec<String>,
    /// Sample sizes for every method (default: a per-method schedule).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 50)]
    p: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct AsymptoticsArgs {
    #[arg(long, default_value = "M0")]
    model: String,
    #[command(flatten)]
    params: ContaminationArgs,
    /// Query curve is the model mean plus this constant.
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Sample size of each CLT replicate.
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// Draws for the plug-in population parameters.
    #[arg(long, default_value_t = 100_000)]
    plugin: usize,
    /// Nested sample sizes for the law-of-large-numbers trace.
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000")]
    schedule: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed = {s}");
        s
    })
}

fn parse_method(token: &str, n_proj: usize, seed: u64) -> Result<DepthMethod> {
    let m: DepthMethod = token.parse()?;
    Ok(match m {
        DepthMethod::Rtd { .. } => DepthMethod::Rtd { n_proj, seed },
        other => other,
    })
}

fn parse_models(tokens: &[String], params: &ModelArgs) -> Result<Vec<ModelSpec>> {
    tokens
        .iter()
        .map(|t| Ok(params.spec(t.parse::<ModelId>()?)))
        .collect()
}

/// Run configuration with the resolved seed written back into the args.
fn config<A: Serialize>(sub: &'static str, args: &A, seed: Option<u64>) -> Result<RunConfig> {
    let mut c = RunConfig::new(sub, seed, args)?;
    if let Some(s) = seed {
        c.args["seed"] = s.into();
    }
    Ok(c)
}

fn dataset_csv(ds: &fdepth::FunctionalDataset) -> Result<String> {
    let mut buf = Vec::new();
    write_dataset(ds, &mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn sidecar_path(out: &Path, explicit: &Option<PathBuf>) -> PathBuf {
    explicit
        .clone()
        .unwrap_or_else(|| out.with_extension("json"))
}

fn run_depth(a: &DepthArgs) -> Result<()> {
    let token = a.method.to_ascii_lowercase();
    let seed = if token == "rtd" {
        Some(resolve_seed(a.seed))
    } else {
        a.seed
    };
    let method = parse_method(&a.method, a.n_proj, seed.unwrap_or(0))?;
    let ds = load_dataset(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let depth = compute_depth(&ds, method)?;
    let mut buf = Vec::new();
    write_depths(&ds, &depth, &mut buf)?;
    write_csv(&a.out, &config("depth", a, seed)?, &String::from_utf8(buf)?)
}

#[derive(Serialize)]
struct SimulationSidecar<'a> {
    spec: &'a ModelSpec,
    seed: u64,
    outlier_flags: &'a [bool],
    truth: &'a [f64],
}

fn run_simulate(a: &SimulateArgs) -> Result<()> {
    let seed = resolve_seed(a.seed);
    let spec = a.params.spec(a.model.parse()?);
    let sim = ModelSampler::new(&spec)?.generate(seed)?;
    let cfg = config("simulate", a, Some(seed))?;
    write_csv(&a.out, &cfg, &dataset_csv(&sim.dataset)?)?;
    write_json(
        &sidecar_path(&a.out, &a.sidecar),
        &cfg,
        &SimulationSidecar {
            spec: &spec,
            seed,
            outlier_flags: &sim.outliers,
            truth: &sim.truth,
        },
    )
}

fn run_mise(a: &MiseArgs) -> Result<()> {
    let seed = resolve_seed(a.seed);
    let models = parse_models(&a.models, &a.params)?;
    let estimators = a
        .estimators
        .iter()
        .map(|t| {
            Ok(match t.parse::<Estimator>()? {
                Estimator::Trimmed {
                    depth: DepthMethod::Rtd { .. },
                } => Estimator::Trimmed {
                    depth: DepthMethod::Rtd {
                        n_proj: a.n_proj,
                        seed: 0,
                    },
                },
                e => e,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cfg = MiseConfig {
        estimators,
        n_reps: a.reps,
        seed,
        trim: TrimSpec::new(a.alpha)?,
        ise_scale: match a.ise_scale {
            IseScaleArg::PerPoint => IseScale::PerPoint,
            IseScaleArg::Sum => IseScale::Sum,
        },
    };
    let report = mise_experiment(&models, &cfg)?;
    let rc = config("mise", a, Some(seed))?;
    write_csv(&a.out, &rc, &report.to_csv())?;
    if let Some(j) = &a.json {
        write_json(j, &rc, &report)?;
    }
    print!("{}", report.to_csv());
    Ok(())
}

fn run_detect(a: &DetectArgs) -> Result<()> {
    let seed = resolve_seed(a.seed);
    let models = parse_models(&a.models, &a.params)?;
    let methods = a
        .methods
        .iter()
        .map(|t| parse_method(t, a.n_proj, 0))
        .collect::<Result<Vec<_>>>()?;
    let cfg = DetectionConfig {
        methods,
        n_reps: a.reps,
        seed,
        fraction: a.fraction,
        tie_rule: match a.tie_rule {
            TieRuleArg::Count => TieRule::Count,
            TieRuleArg::Random => TieRule::Random,
        },
    };
    let report = detection_experiment(&models, &cfg)?;
    let rc = config("detect", a, Some(seed))?;
    write_csv(&a.out, &rc, &report.to_csv())?;
    if let Some(j) = &a.json {
        write_json(j, &rc, &report)?;
    }
    print!("{}", report.to_csv());
    Ok(())
}

#[derive(Serialize)]
struct RankRankJson<'a> {
    report: &'a fdepth::diagnostics::RankRankReport,
    deepest: Option<Vec<f64>>,
}

fn run_rankrank(a: &RankRankArgs) -> Result<()> {
    use fdepth::rng::{derive_seed, tags};
    let seed = resolve_seed(a.seed);
    let method = parse_method(&a.method, a.n_proj, derive_seed(seed, tags::RTD, 0))?;
    let ds = load_dataset(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let report = rank_rank(
        &ds,
        method,
        derive_seed(seed, tags::SPLIT, 0),
        derive_seed(seed, tags::TIES, 0),
    )?;
    let rc = config("rankrank", a, Some(seed))?;
    write_csv(&a.out, &rc, &report.to_csv(&ds))?;
    write_svg(&a.svg, &rc, &report.to_svg())?;
    let deepest = a.deepest.map(|k| report.deepest(k)).transpose()?;
    if let Some(j) = &a.json {
        write_json(
            j,
            &rc,
            &RankRankJson {
                report: &report,
                deepest: deepest.clone(),
            },
        )?;
    }
    println!("{} Spearman = {:.4}", method, report.spearman);
    if let Some(d) = deepest {
        println!("deepest normalised cross ranks: {d:?}");
    }
    Ok(())
}

fn run_lc_prep(a: &LcPrepArgs) -> Result<()> {
    let curves = read_manifest(&a.manifest)
        .with_context(|| format!("reading manifest {}", a.manifest.display()))?;
    let ds = preprocess(
        &curves,
        LcConfig {
            knots: a.knots,
            grid_size: a.grid_size,
        },
    )?;
    write_csv(&a.out, &config("lc-prep", a, None)?, &dataset_csv(&ds)?)?;
    println!("{} curves on {} phases", ds.n(), ds.p());
    Ok(())
}

fn default_schedule(m: &BenchMethod) -> Vec<usize> {
    match m {
        BenchMethod::Depth(DepthMethod::Mbd2) | BenchMethod::Depth(DepthMethod::Mhrd) => {
            vec![1000, 2000, 4000, 8000, 16000]
        }
        BenchMethod::Depth(DepthMethod::Bd3) => vec![25, 35, 50, 70, 100],
        BenchMethod::MbdNaive => vec![50, 100, 200, 400],
        _ => vec![200, 400, 800, 1600],
    }
}

fn run_bench(a: &BenchArgs) -> Result<()> {
    let seed = resolve_seed(a.seed);
    let plan = a
        .methods
        .iter()
        .map(|t| {
            let m = if t.eq_ignore_ascii_case("mbd-naive") {
                BenchMethod::MbdNaive
            } else {
                BenchMethod::Depth(parse_method(t, DEFAULT_RTD_PROJECTIONS, seed)?)
            };
            let sizes = a.sizes.clone().unwrap_or_else(|| default_schedule(&m));
            if sizes.contains(&0) {
                bail!("sample sizes must be positive");
            }
            Ok((m, sizes))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = timing_bench(&plan, a.p, seed)?;
    let rc = config("bench", a, Some(seed))?;
    write_csv(&a.out, &rc, &report.to_csv())?;
    if let Some(j) = &a.json {
        write_json(j, &rc, &report)?;
    }
    for (m, s) in &report.slopes {
        println!("{m}: log-log slope {s:.2}");
    }
    Ok(())
}

#[derive(Serialize)]
struct AsymptoticsJson {
    query: Vec<f64>,
    slln: fdepth::diagnostics::SllnReport,
    clt: fdepth::diagnostics::CltReport,
}

fn run_asymptotics(a: &AsymptoticsArgs) -> Result<()> {
    let seed = resolve_seed(a.seed);
    let spec = a.params.spec(a.model.parse()?);
    let sampler = ModelSampler::new(&spec)?;
    let x: Vec<f64> = sampler.truth().iter().map(|v| v + a.shift).collect();
    let reference_n = a.schedule.iter().copied().max().unwrap_or(1);
    let slln = slln_check(&x, &sampler, &a.schedule, reference_n, seed)?;
    let clt = clt_check(&x, &sampler, a.n, a.reps, a.plugin, seed)?;
    println!(
        "SLLN: max deviation beyond n={} is {:.2e}; CLT: sd {:.4} vs asymptotic {:.4}, coverage {:.3}",
        a.schedule[0],
        slln.max_deviation_from(a.schedule[0]),
        clt.empirical_sd,
        clt.asymptotic_sd,
        clt.coverage
    );
    write_json(
        &a.out,
        &config("asymptotics", a, Some(seed))?,
        &AsymptoticsJson {
            query: x,
            slln,
            clt,
        },
    )
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Depth(a) => run_depth(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Mise(a) => run_mise(a),
        Command::Detect(a) => run_detect(a),
        Command::Rankrank(a) => run_rankrank(a),
        Command::LcPrep(a) => run_lc_prep(a),
        Command::Bench(a) => run_bench(a),
        Command::Asymptotics(a) => run_asymptotics(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
