use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use jpsn::baselines::{
    cylindrical_prior, fit_abeley_mh, fit_cylindrical_jpsn, paired_blocks, validate_partition,
    AbeLeyPrior, CylBlock, MhConfig,
};
use jpsn::dists::niw::NiwParams;
use jpsn::linalg::{Matrix, Vector};
use jpsn::mcmc::{chain_rng, predict_missing, run_gibbs, ChainConfig, PriorSpec};
use jpsn::model::{dependence_matrix, simulate_jpsn};
use jpsn::scoring::{
    compare_models, AbeLeyFitter, CylindricalJpsnFitter, Fitter, HoldoutPlan, JointJpsnFitter,
    ScoreTable,
};
use jpsn::{Coord, PolyCylDataset};

use crate::config::{ModelKind, Overrides, RunConfig};
use crate::dataset::{dataset_to_csv, parse_dataset_csv};
use crate::draws::{self, entry_name, read_identified_params, read_meta, Table};
use crate::error::{CliError, CliResult};
use crate::manifest::write_manifest;
use crate::summary::{dependence_csv, summarize_table, summary_csv, summary_text};

// stdout may be a closed pipe; output is informational, so drop write errors
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn say_raw(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

#[derive(Debug, Parser)]
#[command(name = "jpsn", version, about = "Joint projected and skew normal models for poly-cylindrical data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a dataset from a preset parameter set.
    Simulate(SimulateArgs),
    /// Fit a model and write posterior draws.
    Fit(DataArgs),
    /// Impute masked entries of a dataset from stored JPSN draws.
    Predict(PredictArgs),
    /// Hold out observed entries and compare models by CRPS.
    Score(ScoreArgs),
    /// Posterior means, 95% intervals, ESS and the dependence matrix.
    Summarize(SummarizeArgs),
}

#[derive(Debug, Clone, Args)]
struct RunFlags {
    /// TOML configuration file, or a manifest written by an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    burnin: Option<usize>,
    #[arg(long)]
    thin: Option<usize>,
    #[arg(long)]
    holdout_fraction: Option<f64>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Independent chains, run concurrently.
    #[arg(long)]
    chains: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    flags: RunFlags,
    /// example1, example2, example3 or units4.
    #[arg(long)]
    preset: Option<String>,
    /// Number of records.
    #[arg(long)]
    n: Option<usize>,
    /// Also write the latent radii and half-normal draws.
    #[arg(long)]
    latents: bool,
}

#[derive(Debug, Args)]
struct DataArgs {
    #[command(flatten)]
    flags: RunFlags,
    /// Dataset CSV.
    #[arg(long)]
    data: Option<String>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[command(flatten)]
    flags: RunFlags,
    #[arg(long)]
    data: Option<String>,
    /// Directory written by `fit --model jpsn`.
    #[arg(long)]
    draws: Option<String>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[command(flatten)]
    flags: RunFlags,
    #[arg(long)]
    data: Option<String>,
    /// Models to compare, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    models: Option<Vec<ModelKind>>,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    #[command(flatten)]
    flags: RunFlags,
    #[arg(long)]
    draws: Option<String>,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(a) => {
            let cfg = resolve(
                &a.flags,
                Overrides {
                    preset: a.preset,
                    n: a.n,
                    latents: a.latents,
                    ..Default::default()
                },
            )?;
            simulate(cfg)
        }
        Command::Fit(a) => {
            let cfg = resolve(
                &a.flags,
                Overrides {
                    data: a.data,
                    ..Default::default()
                },
            )?;
            fit(cfg)
        }
        Command::Predict(a) => {
            let cfg = resolve(
                &a.flags,
                Overrides {
                    data: a.data,
                    draws: a.draws,
                    ..Default::default()
                },
            )?;
            predict(cfg)
        }
        Command::Score(a) => {
            let cfg = resolve(
                &a.flags,
                Overrides {
                    data: a.data,
                    models: a.models,
                    ..Default::default()
                },
            )?;
            score(cfg)
        }
        Command::Summarize(a) => {
            let cfg = resolve(
                &a.flags,
                Overrides {
                    draws: a.draws,
                    ..Default::default()
                },
            )?;
            summarize(cfg)
        }
    }
}

fn resolve(flags: &RunFlags, mut o: Overrides) -> CliResult<RunConfig> {
    let mut cfg = match &flags.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    o.seed = flags.seed;
    o.iterations = flags.iterations;
    o.burnin = flags.burnin;
    o.thin = flags.thin;
    o.chains = flags.chains;
    o.holdout_fraction = flags.holdout_fraction;
    o.model = flags.model;
    o.out = flags.out.clone();
    cfg.apply(&o);
    cfg.validate()?;
    Ok(cfg)
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required (or set it in the [io] block)")))
}

fn out_dir(cfg: &RunConfig) -> CliResult<PathBuf> {
    let dir = PathBuf::from(required(&cfg.io.out, "out")?);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn load_data(cfg: &RunConfig, notes: &mut Vec<String>) -> CliResult<PolyCylDataset> {
    let path = required(&cfg.io.data, "data")?;
    let parsed = parse_dataset_csv(Path::new(path))?;
    if parsed.normalized > 0 {
        let note = format!("{} angle(s) outside [0, 2pi) were reduced", parsed.normalized);
        eprintln!("warning: {note}");
        notes.push(note);
    }
    Ok(parsed.data)
}

fn chain_config(cfg: &RunConfig) -> CliResult<ChainConfig> {
    let c = &cfg.chain;
    Ok(ChainConfig::new(c.iterations, c.burnin, c.thin, c.seed)?)
}

fn mh_config(cfg: &RunConfig) -> CliResult<MhConfig> {
    let c = &cfg.chain;
    let mut mh = MhConfig::new(c.iterations, c.burnin, c.thin, c.seed)?;
    mh.step_scales = [cfg.abeley.step; 5];
    mh.target_acceptance = cfg.abeley.target_acceptance;
    mh.adapt_window = cfg.abeley.adapt_window.unwrap_or(c.burnin);
    mh.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(mh)
}

fn jpsn_prior(cfg: &RunConfig, p: usize, q: usize) -> CliResult<PriorSpec> {
    let n = 2 * p + q;
    let pc = &cfg.prior;
    let nu0 = pc.nu0.unwrap_or((n + 10) as f64);
    let niw = NiwParams::new(Vector::zeros(n), pc.kappa0, nu0, Matrix::identity(n, n) * pc.psi_scale)
        .map_err(|e| CliError::Config(e.to_string()))?;
    PriorSpec::new(niw, Vector::zeros(q), Matrix::identity(q, q) * pc.lambda_var)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn blocks(cfg: &RunConfig, p: usize, q: usize) -> CliResult<Vec<CylBlock>> {
    let blocks = match &cfg.model.partition {
        Some(pairs) => pairs
            .iter()
            .map(|&[a, l]| {
                if a == 0 || l == 0 {
                    return Err(CliError::Config("partition indices are 1-based".into()));
                }
                Ok(CylBlock {
                    angle: a - 1,
                    linear: l - 1,
                })
            })
            .collect::<CliResult<Vec<_>>>()?,
        None if p == q => paired_blocks(p),
        None => {
            return Err(CliError::Config(format!(
                "p = {p} and q = {q} differ; give model.partition explicitly"
            )))
        }
    };
    validate_partition(p, q, &blocks).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(blocks)
}

/// Fills dimension-dependent defaults so the manifest records them.
fn materialize(cfg: &mut RunConfig, p: usize, q: usize, kinds: &[ModelKind]) -> CliResult<()> {
    cfg.prior.nu0.get_or_insert((2 * p + q + 10) as f64);
    cfg.abeley.adapt_window.get_or_insert(cfg.chain.burnin);
    if kinds.iter().any(|&k| k != ModelKind::Jpsn) {
        let b = blocks(cfg, p, q)?;
        cfg.model.partition = Some(b.iter().map(|b| [b.angle + 1, b.linear + 1]).collect());
    }
    Ok(())
}

fn simulate(cfg: RunConfig) -> CliResult<()> {
    let dir = out_dir(&cfg)?;
    let params = jpsn::presets::by_name(&cfg.simulate.preset)
        .ok_or_else(|| CliError::Config(format!("unknown preset `{}`", cfg.simulate.preset)))?;
    let mut rng = chain_rng(cfg.chain.seed, 0);
    let (data, latents) = simulate_jpsn(&params, cfg.simulate.n, &mut rng)?;
    write_text(&dir.join("data.csv"), &dataset_to_csv(&data))?;
    let mut outputs = vec!["data.csv".to_string()];
    if cfg.simulate.latents {
        let (p, q) = (params.p(), params.q());
        let table = Table {
            names: (1..=p)
                .map(|i| format!("r[{i}]"))
                .chain((1..=q).map(|j| format!("d[{j}]")))
                .collect(),
            rows: (0..data.len())
                .map(|t| {
                    (0..p)
                        .map(|i| latents.r[(t, i)])
                        .chain((0..q).map(|j| latents.d[(t, j)]))
                        .collect()
                })
                .collect(),
        };
        table.write(&dir.join("latents.csv"))?;
        outputs.push("latents.csv".into());
    }
    let m = write_manifest(&dir, "simulate", &cfg, outputs, vec![])?;
    say!("wrote {} records to {}", data.len(), dir.join("data.csv").display());
    say!("manifest: {}", dir.join(m).display());
    Ok(())
}

fn fit_one(cfg: &RunConfig, data: &PolyCylDataset, dir: &Path, chain: u64) -> CliResult<Vec<String>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let (p, q) = (data.p(), data.q());
    let labels = data.labels_or_default();
    let mut rng = chain_rng(cfg.chain.seed, chain);
    match cfg.model.kind {
        ModelKind::Jpsn => {
            let draws = run_gibbs(data, &jpsn_prior(cfg, p, q)?, &chain_config(cfg)?, &mut rng)?;
            draws::write_jpsn_draws(dir, "jpsn", &draws, &labels)
        }
        ModelKind::CylJpsn => {
            let blocks = blocks(cfg, p, q)?;
            let fit = fit_cylindrical_jpsn(data, &blocks, &cylindrical_prior(), &chain_config(cfg)?, &mut rng)?;
            let mut files = Vec::new();
            for (b, (block, draws)) in blocks.iter().zip(&fit.draws).enumerate() {
                let sub = format!("block{}", b + 1);
                let bdir = dir.join(&sub);
                std::fs::create_dir_all(&bdir).map_err(|e| CliError::io(&bdir, e))?;
                let l = vec![labels[block.angle].clone(), labels[p + block.linear].clone()];
                for f in draws::write_jpsn_draws(&bdir, "cyl-jpsn", draws, &l)? {
                    files.push(format!("{sub}/{f}"));
                }
            }
            Ok(files)
        }
        ModelKind::AbeLey => {
            let blocks = blocks(cfg, p, q)?;
            let mh = mh_config(cfg)?;
            let mut files = Vec::new();
            for (b, block) in blocks.iter().enumerate() {
                let sub_data = data.select(&[block.angle], &[block.linear])?;
                let draws = fit_abeley_mh(&sub_data, &AbeLeyPrior::default(), &mh, &mut rng)?;
                let sub = format!("block{}", b + 1);
                let bdir = dir.join(&sub);
                std::fs::create_dir_all(&bdir).map_err(|e| CliError::io(&bdir, e))?;
                for f in draws::write_abeley_draws(&bdir, &draws, &sub_data.labels_or_default())? {
                    files.push(format!("{sub}/{f}"));
                }
            }
            Ok(files)
        }
    }
}

fn fit(mut cfg: RunConfig) -> CliResult<()> {
    let mut notes = Vec::new();
    let data = load_data(&cfg, &mut notes)?;
    let kind = cfg.model.kind;
    materialize(&mut cfg, data.p(), data.q(), &[kind])?;
    let dir = out_dir(&cfg)?;
    let chains = cfg.chain.chains;
    let outputs = if chains == 1 {
        fit_one(&cfg, &data, &dir, 0)?
    } else {
        let results: Vec<CliResult<Vec<String>>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..chains)
                .map(|c| {
                    let (cfg, data, dir) = (&cfg, &data, &dir);
                    s.spawn(move || {
                        let sub = format!("chain{}", c + 1);
                        fit_one(cfg, data, &dir.join(&sub), c as u64)
                            .map(|fs| fs.into_iter().map(|f| format!("{sub}/{f}")).collect())
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain thread panicked"))
                .collect()
        });
        let mut all = Vec::new();
        for r in results {
            all.extend(r?);
        }
        all
    };
    let m = write_manifest(&dir, "fit", &cfg, outputs, notes)?;
    say!(
        "fitted {} to {} records ({} chain(s)); draws in {}",
        cfg.model.kind.name(),
        data.len(),
        chains,
        dir.display()
    );
    say!("manifest: {}", dir.join(m).display());
    Ok(())
}

fn predict(cfg: RunConfig) -> CliResult<()> {
    let mut notes = Vec::new();
    let data = load_data(&cfg, &mut notes)?;
    let draws_dir = PathBuf::from(required(&cfg.io.draws, "draws")?);
    let (p, q, params) = read_identified_params(&draws_dir)?;
    if (p, q) != (data.p(), data.q()) {
        return Err(CliError::Data(format!(
            "draws have (p, q) = ({p}, {q}) but the data has ({}, {})",
            data.p(),
            data.q()
        )));
    }
    if data.n_missing() == 0 {
        return Err(CliError::Data("the dataset has no NA entries to predict".into()));
    }
    let dir = out_dir(&cfg)?;
    let mut rng = chain_rng(cfg.chain.seed, 0);
    let preds = predict_missing(&data, &params, cfg.predict.sweeps, &mut rng)?;
    let labels = data.labels_or_default();
    let table = Table {
        names: preds.iter().map(|&((row, c), _)| entry_name(&labels, p, row, c)).collect(),
        rows: (0..params.len()).map(|k| preds.iter().map(|(_, v)| v[k]).collect()).collect(),
    };
    table.write(&dir.join("predictions.csv"))?;

    // posterior predictive means: circular mean for angles
    let mut completed = data.clone();
    for &((row, coord), ref v) in &preds {
        let obs = &mut completed.observations_mut()[row];
        match coord {
            Coord::Angle(i) => {
                let (s, c) = v.iter().fold((0.0, 0.0), |(s, c), x| (s + x.sin(), c + x.cos()));
                obs.angles[i] = jpsn::Angle::new(s.atan2(c));
                obs.angle_missing[i] = false;
            }
            Coord::Linear(j) => {
                obs.linears[j] = v.iter().sum::<f64>() / v.len() as f64;
                obs.linear_missing[j] = false;
            }
        }
    }
    write_text(&dir.join("completed.csv"), &dataset_to_csv(&completed))?;
    let outputs = vec!["predictions.csv".to_string(), "completed.csv".to_string()];
    let m = write_manifest(&dir, "predict", &cfg, outputs, notes)?;
    say!("predicted {} masked entries from {} draws", preds.len(), params.len());
    say!("manifest: {}", dir.join(m).display());
    Ok(())
}

fn score_csv(table: &ScoreTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "CRPS_circular", "CRPS_linear"]).expect("in-memory write");
    let f = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| format!("{v}"));
    for r in &table.rows {
        w.write_record([r.model.clone(), f(r.crps_circular), f(r.crps_linear)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

fn score(mut cfg: RunConfig) -> CliResult<()> {
    let mut notes = Vec::new();
    let data = load_data(&cfg, &mut notes)?;
    let (p, q) = (data.p(), data.q());
    let kinds = cfg.scoring.models.clone();
    materialize(&mut cfg, p, q, &kinds)?;
    let dir = out_dir(&cfg)?;
    let holdout = HoldoutPlan {
        fraction: cfg.scoring.holdout_fraction,
        seed: cfg.chain.seed,
    }
    .split(&data)?;
    for w in &holdout.warnings {
        eprintln!("warning: {w}");
        notes.push(w.clone());
    }
    let chain = chain_config(&cfg)?;
    let mut fitters: Vec<Box<dyn Fitter>> = Vec::new();
    for kind in &kinds {
        fitters.push(match kind {
            ModelKind::Jpsn => Box::new(JointJpsnFitter {
                prior: jpsn_prior(&cfg, p, q)?,
                config: chain.clone(),
            }),
            ModelKind::CylJpsn => Box::new(CylindricalJpsnFitter {
                blocks: blocks(&cfg, p, q)?,
                prior: cylindrical_prior(),
                config: chain.clone(),
            }),
            ModelKind::AbeLey => Box::new(AbeLeyFitter {
                blocks: blocks(&cfg, p, q)?,
                prior: AbeLeyPrior::default(),
                config: mh_config(&cfg)?,
            }),
        });
    }
    let refs: Vec<&dyn Fitter> = fitters.iter().map(|f| f.as_ref()).collect();
    let mut rng = chain_rng(cfg.chain.seed, 0);
    let table = compare_models(&holdout, &refs, &mut rng)?;

    write_text(&dir.join("masked.csv"), &dataset_to_csv(&holdout.masked))?;
    write_text(&dir.join("scores.csv"), &score_csv(&table))?;
    let labels = data.labels_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "entry", "truth", "crps"]).expect("in-memory write");
    for (e, h) in table.entries.iter().zip(holdout.key.iter().cycle()) {
        debug_assert_eq!((e.row, e.coord), (h.row, h.coord));
        w.write_record([
            e.model.clone(),
            entry_name(&labels, p, e.row, e.coord),
            format!("{}", h.truth),
            format!("{}", e.crps),
        ])
        .expect("in-memory write");
    }
    write_text(
        &dir.join("entries.csv"),
        &String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output"),
    )?;
    let observed = data.len() * (p + q) - data.n_missing();
    let json = serde_json::json!({
        "holdout_fraction": holdout.fraction,
        "realized_fraction": holdout.realized_fraction(observed),
        "held_out": holdout.key.len(),
        "scores": table.rows.iter().map(|r| serde_json::json!({
            "model": r.model,
            "crps_circular": r.crps_circular,
            "crps_linear": r.crps_linear,
        })).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&json).expect("serializable");
    text.push('\n');
    write_text(&dir.join("scores.json"), &text)?;
    let outputs = ["masked.csv", "scores.csv", "scores.json", "entries.csv"]
        .map(String::from)
        .to_vec();
    let m = write_manifest(&dir, "score", &cfg, outputs, notes)?;
    say_raw(&score_csv(&table));
    say!("manifest: {}", dir.join(m).display());
    Ok(())
}

fn summarize(mut cfg: RunConfig) -> CliResult<()> {
    let draws_dir = PathBuf::from(required(&cfg.io.draws, "draws")?);
    if cfg.io.out.is_none() {
        cfg.io.out = cfg.io.draws.clone();
    }
    let dir = out_dir(&cfg)?;
    let meta = read_meta(&draws_dir)?;
    let mut outputs = vec!["summary.csv".to_string()];
    let identified = draws_dir.join(draws::IDENTIFIED_FILE);
    let rows = if identified.exists() {
        let table = Table::read(&identified)?;
        if table.rows.is_empty() {
            return Err(CliError::Data("the draws file has no rows".into()));
        }
        let rows = summarize_table(&table);
        let (p, q, params) = read_identified_params(&draws_dir)?;
        let k = cfg.summarize.dependence_draws.min(params.len());
        let subset: Vec<_> = (0..k).map(|i| params[i * params.len() / k].clone()).collect();
        let mut rng = chain_rng(cfg.chain.seed, 0);
        let dep = dependence_matrix(&subset, cfg.summarize.mc_n, &mut rng)?;
        let labels = match &meta {
            Some(m) if m.labels.len() == p + q => m.labels.clone(),
            _ => (1..=p)
                .map(|i| format!("theta{i}"))
                .chain((1..=q).map(|j| format!("y{j}")))
                .collect(),
        };
        write_text(&dir.join("dependence.csv"), &dependence_csv(&dep, &labels))?;
        outputs.push("dependence.csv".into());
        rows
    } else {
        let path = draws_dir.join(draws::ABELEY_FILE);
        if !path.exists() {
            return Err(CliError::Data(format!(
                "{} holds neither {} nor {}",
                draws_dir.display(),
                draws::IDENTIFIED_FILE,
                draws::ABELEY_FILE
            )));
        }
        let table = Table::read(&path)?;
        if table.rows.is_empty() {
            return Err(CliError::Data("the draws file has no rows".into()));
        }
        summarize_table(&table)
    };
    write_text(&dir.join("summary.csv"), &summary_csv(&rows))?;
    let m = write_manifest(&dir, "summarize", &cfg, outputs, vec![])?;
    say_raw(&summary_text(&rows));
    say!("manifest: {}", dir.join(m).display());
    Ok(())
}
