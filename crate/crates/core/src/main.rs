use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pi_rules::backprop::{solve_omega, targeted_inputs, OmegaSystem, Pick};
use pi_rules::benchmarks::{
    evaluate, gen_addition_rules, gen_sudoku_rules, load_dataset, synthetic_dataset, write_dataset, AdditionSpec,
    ProbSample, Problem, SudokuSpec, SyntheticNoiseModel,
};
use pi_rules::io::{
    fmt_degree, read_possibility_csv, read_probability_csv, read_probability_jsonl, read_training_jsonl,
    write_degree_csv, IoError,
};
use pi_rules::learning::{cascade_learn, threshold_search, Sample, ThresholdConfig};
use pi_rules::poss::{poss_to_prob_antipignistic, prob_to_poss_antipignistic, prob_to_poss_minspec};
use pi_rules::rulefile::{coherence_warnings, params_from_file, params_to_file, ParamsFile, RuleFile};
use pi_rules::{Cascade, CascadeOptions, Env, Error, PossibilityDistribution, Transform};

#[derive(Parser)]
#[command(name = "pi-rules", version, about = "Possibilistic rule-based inference and learning")]
struct Cli {
    /// Worker threads for per-sample work.
    #[arg(long, global = true, env = "PI_RULES_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformArg {
    Antipignistic,
    Minspec,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Antipignistic => Transform::Antipignistic,
            TransformArg::Minspec => Transform::MinSpecificity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    Antipignistic,
    Minspec,
    /// Possibility to probability (inverse antipignistic).
    Inverse,
}

#[derive(Clone, Copy, ValueEnum)]
enum PickArg {
    Low,
    High,
}

#[derive(Subcommand)]
enum Command {
    /// Check a rule file and print a summary.
    Validate {
        #[arg(long)]
        rules: PathBuf,
    },
    /// Run the cascade on per-attribute distribution CSV files.
    Infer {
        #[arg(long)]
        rules: PathBuf,
        /// `ATTR=PATH`, one per source attribute.
        #[arg(long = "input", value_parser = parse_binding, required = true)]
        inputs: Vec<(String, PathBuf)>,
        /// Output attributes to write (default: final outputs).
        #[arg(long = "attr")]
        attrs: Vec<String>,
        /// Read inputs as probabilities and apply this transform.
        #[arg(long)]
        transform: Option<TransformArg>,
        /// Learned parameters to load before inference.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        renormalize: bool,
        /// Write one `<attr>.csv` per attribute here instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Learn rule parameters stage by stage.
    Learn {
        /// Rule file; generated from the manifest when omitted.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// JSON-lines training records.
        #[arg(long, conflicts_with = "manifest")]
        train: Option<PathBuf>,
        /// Dataset manifest for the training split.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Inputs are probabilities to transform (manifests always are).
        #[arg(long)]
        transform: Option<TransformArg>,
        /// `VALUE` for every family or `FAMILY=VALUE`.
        #[arg(long = "tau")]
        taus: Vec<String>,
        /// Validation manifest; enables the threshold search.
        #[arg(long)]
        valid: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        l: usize,
        #[arg(long, default_value_t = 5.0)]
        h: f64,
        #[arg(long, default_value_t = 0.001)]
        eps: f64,
        #[arg(long, default_value_t = 0.01)]
        min_improvement: f64,
        #[arg(long, default_value_t = 1)]
        stagnation: usize,
        #[arg(long)]
        renormalize: bool,
        /// Learned parameters JSON.
        #[arg(long)]
        out: PathBuf,
        /// Reliability report JSON (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Accuracy of a cascade on a labeled dataset.
    Eval {
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long, conflicts_with = "test")]
        manifest: Option<PathBuf>,
        /// JSON-lines records with probability inputs.
        #[arg(long)]
        test: Option<PathBuf>,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "antipignistic")]
        transform: TransformArg,
        #[arg(long)]
        renormalize: bool,
    },
    /// Apply a probability/possibility transform to every row of a CSV.
    Transform {
        #[arg(long, value_enum)]
        kind: TransformKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        renormalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate input distributions that make a stage produce a target.
    Backprop {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        stage: String,
        /// Target label (one-point target distribution).
        #[arg(long, conflicts_with = "target_csv")]
        target: Option<String>,
        /// CSV whose first row is the target distribution.
        #[arg(long)]
        target_csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "low")]
        pick: PickArg,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Write generated rule files or synthetic datasets.
    Generate {
        #[command(subcommand)]
        what: GenerateCmd,
    },
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Rule file for k-digit addition.
    Addition {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rule file for Sudoku validity.
    Sudoku {
        #[arg(long)]
        side: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthetic classifier outputs with a manifest.
    Dataset {
        #[arg(long, value_parser = ["addition", "sudoku"])]
        problem: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        side: Option<usize>,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        base_mass: f64,
        #[arg(long, default_value_t = 0.0)]
        temperature: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "train")]
        split: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn parse_binding(s: &str) -> Result<(String, PathBuf), String> {
    let (a, p) = s.split_once('=').ok_or_else(|| format!("expected ATTR=PATH, got {s:?}"))?;
    Ok((a.to_string(), PathBuf::from(p)))
}

fn main() -> ExitCode {
    // Usage errors exit with 1 so that 2 stays reserved for infeasible learning.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let infeasible = e.chain().any(|c| {
                matches!(c.downcast_ref::<Error>(), Some(Error::NoReliableSamples { .. }))
                    || matches!(c.downcast_ref::<IoError>(), Some(IoError::Model(Error::NoReliableSamples { .. })))
            });
            ExitCode::from(if infeasible { 2 } else { 1 })
        }
    }
}

fn load_rules(path: &Path) -> anyhow::Result<Cascade> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = RuleFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.to_cascade()?)
}

fn load_params(cascade: &mut Cascade, path: &Path) -> anyhow::Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ParamsFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let params = params_from_file(&file, cascade)?;
    cascade.set_params(&params)?;
    Ok(())
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Validate { rules } => validate(&rules),
        Command::Infer { rules, inputs, attrs, transform, params, renormalize, out_dir } => {
            infer_cmd(&rules, &inputs, &attrs, transform, params.as_deref(), renormalize, out_dir.as_deref())
        }
        Command::Learn {
            rules,
            train,
            manifest,
            transform,
            taus,
            valid,
            l,
            h,
            eps,
            min_improvement,
            stagnation,
            renormalize,
            out,
            report,
        } => {
            let config = ThresholdConfig { l, h, eps, min_improvement, stagnation };
            learn_cmd(LearnArgs { rules, train, manifest, transform, taus, valid, config, renormalize, out, report })
        }
        Command::Eval { rules, manifest, test, params, transform, renormalize } => {
            eval_cmd(rules.as_deref(), manifest.as_deref(), test.as_deref(), params.as_deref(), transform, renormalize)
        }
        Command::Transform { kind, input, renormalize, out } => {
            transform_cmd(kind, &input, renormalize, out.as_deref())
        }
        Command::Backprop { rules, stage, target, target_csv, pick, params, out_dir } => {
            backprop_cmd(&rules, &stage, target.as_deref(), target_csv.as_deref(), pick, params.as_deref(), &out_dir)
        }
        Command::Generate { what } => generate_cmd(what),
    }
}

fn validate(path: &Path) -> anyhow::Result<()> {
    let cascade = load_rules(path)?;
    println!(
        "{} rule sets, {} rules, {} attributes",
        cascade.stages().len(),
        cascade.rule_count(),
        cascade.attributes().len()
    );
    for s in cascade.stages() {
        println!(
            "  {} -> {}: {} rules, {} cells, family {}",
            s.name(),
            s.rules.output().name,
            s.rules.len(),
            s.rules.partition().omega(),
            s.family
        );
    }
    for w in coherence_warnings(&cascade) {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn emit(
    out_dir: Option<&Path>,
    name: &str,
    labels: &[String],
    rows: &[Vec<f64>],
    extra: Option<(&str, Vec<String>)>,
) -> anyhow::Result<()> {
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{name}.csv"));
            let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_degree_csv(file, labels, rows, extra)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            writeln!(lock, "# {name}")?;
            write_degree_csv(&mut lock, labels, rows, extra)?;
        }
    }
    Ok(())
}

fn infer_cmd(
    rules: &Path,
    inputs: &[(String, PathBuf)],
    attrs: &[String],
    transform: Option<TransformArg>,
    params: Option<&Path>,
    renormalize: bool,
    out_dir: Option<&Path>,
) -> anyhow::Result<()> {
    let mut cascade = load_rules(rules)?;
    if let Some(p) = params {
        load_params(&mut cascade, p)?;
    }
    let sources = cascade.source_attributes();
    let mut columns: BTreeMap<String, Vec<PossibilityDistribution>> = BTreeMap::new();
    for (name, path) in inputs {
        let attr = sources
            .iter()
            .find(|a| &a.name == name)
            .ok_or_else(|| anyhow!("{name:?} is not a source attribute of the rule file"))?;
        let rows = match transform {
            None => read_possibility_csv(path, &attr.domain, renormalize)?,
            Some(t) => read_probability_csv(path, &attr.domain, renormalize)?
                .iter()
                .map(|p| Transform::from(t).apply(p))
                .collect(),
        };
        columns.insert(name.clone(), rows);
    }
    let count = columns.values().next().map_or(0, Vec::len);
    if count == 0 {
        return Err(Error::NoSamples.into());
    }
    if let Some((name, c)) = columns.iter().find(|(_, c)| c.len() != count) {
        bail!("input {name:?} has {} rows, expected {count}", c.len());
    }
    let opts = CascadeOptions { renormalize };
    let envs: Vec<Env> = (0..count).map(|i| columns.iter().map(|(k, v)| (k.clone(), v[i].clone())).collect()).collect();
    let results: Vec<Env> = {
        use rayon::prelude::*;
        envs.par_iter().map(|env| cascade.infer(env, opts).map(|(e, _)| e)).collect::<Result<_, _>>()?
    };
    let wanted: Vec<String> =
        if attrs.is_empty() { cascade.final_outputs().into_iter().map(|a| a.name).collect() } else { attrs.to_vec() };
    for name in &wanted {
        let attr = cascade
            .attributes()
            .into_iter()
            .find(|a| &a.name == name)
            .ok_or_else(|| anyhow!("unknown attribute {name:?}"))?;
        let rows: Vec<Vec<f64>> = results.iter().map(|e| e[name].degrees().to_vec()).collect();
        let argmax: Vec<String> = results
            .iter()
            .map(|e| e[name].argmax().map_or_else(|| "ambiguous".to_string(), |i| attr.domain.label(i).to_string()))
            .collect();
        for (i, e) in results.iter().enumerate() {
            if !e[name].is_normalized() {
                eprintln!("warning: row {}: output {name:?} is not normalized", i + 1);
            }
        }
        emit(out_dir, name, attr.domain.labels(), &rows, Some(("argmax", argmax)))?;
    }
    Ok(())
}

struct LearnArgs {
    rules: Option<PathBuf>,
    train: Option<PathBuf>,
    manifest: Option<PathBuf>,
    transform: Option<TransformArg>,
    taus: Vec<String>,
    valid: Option<PathBuf>,
    config: ThresholdConfig,
    renormalize: bool,
    out: PathBuf,
    report: Option<PathBuf>,
}

/// Cascade and samples from a manifest, or a rule file plus JSON lines.
fn load_training(
    rules: Option<&Path>,
    train: Option<&Path>,
    manifest: Option<&Path>,
    transform: Option<TransformArg>,
    renormalize: bool,
) -> anyhow::Result<(Cascade, Vec<Sample>)> {
    if let Some(m) = manifest {
        let (_, problem, samples) = load_dataset(m)?;
        let cascade = match rules {
            Some(r) => load_rules(r)?,
            None => problem.rules()?,
        };
        let t = Transform::from(transform.unwrap_or(TransformArg::Antipignistic));
        return Ok((cascade, samples.iter().map(|s| s.to_sample(t)).collect()));
    }
    let rules = rules.ok_or_else(|| anyhow!("--rules is required with --train"))?;
    let train = train.ok_or_else(|| anyhow!("one of --train or --manifest is required"))?;
    let cascade = load_rules(rules)?;
    let samples = match transform {
        None => read_training_jsonl(train, &cascade, renormalize)?,
        Some(t) => {
            read_probability_jsonl(train, &cascade, renormalize)?.iter().map(|s| s.to_sample(t.into())).collect()
        }
    };
    Ok((cascade, samples))
}

fn parse_taus(cascade: &Cascade, specs: &[String]) -> anyhow::Result<BTreeMap<String, f64>> {
    let families: Vec<String> = cascade.stages().iter().map(|s| s.family.clone()).collect();
    let mut taus = BTreeMap::new();
    for spec in specs {
        match spec.split_once('=') {
            Some((f, v)) => {
                if !families.contains(&f.to_string()) {
                    bail!("unknown stage family {f:?}");
                }
                taus.insert(f.to_string(), v.parse::<f64>().with_context(|| format!("bad tau {v:?}"))?);
            }
            None => {
                let v: f64 = spec.parse().with_context(|| format!("bad tau {spec:?}"))?;
                for f in &families {
                    taus.entry(f.clone()).or_insert(v);
                }
            }
        }
    }
    for f in &families {
        if !taus.contains_key(f) {
            bail!("no threshold given for family {f:?}");
        }
        if taus[f] <= 0.0 {
            bail!("threshold for family {f:?} must be positive");
        }
    }
    Ok(taus)
}

fn learn_cmd(a: LearnArgs) -> anyhow::Result<()> {
    let (cascade, train) =
        load_training(a.rules.as_deref(), a.train.as_deref(), a.manifest.as_deref(), a.transform, a.renormalize)?;
    if train.is_empty() {
        return Err(Error::NoSamples.into());
    }
    let opts = CascadeOptions { renormalize: a.renormalize };
    let (learning, taus, search) = match &a.valid {
        Some(v) => {
            let (_, _, valid) = load_dataset(v)?;
            let t = Transform::from(a.transform.unwrap_or(TransformArg::Antipignistic));
            let metric = |c: &Cascade| evaluate(c, &valid, t, opts).map(|r| r.accuracy).unwrap_or(0.0);
            let out = threshold_search(&cascade, &train, &a.config, opts, metric)?;
            let history: Vec<_> = out.history.iter().map(|(t, s)| json!({"tau": t, "accuracy": s})).collect();
            let search = json!({"accuracy": out.accuracy, "history": history});
            (out.learning, out.taus, Some(search))
        }
        None => {
            let taus = parse_taus(&cascade, &a.taus)?;
            (cascade_learn(&cascade, &train, &taus, opts)?, taus, None)
        }
    };
    let params = params_to_file(&learning.cascade.params());
    fs::write(&a.out, serde_json::to_string_pretty(&params)? + "\n")
        .with_context(|| format!("writing {}", a.out.display()))?;
    let stages: Vec<_> = learning
        .reports
        .iter()
        .map(|r| {
            json!({
                "stage": r.stage,
                "tau": r.tau,
                "selected": r.selected,
                "total": r.samples.len(),
                "percent_reliable": 100.0 * r.selected as f64 / r.samples.len() as f64,
                "stacked_nabla": fmt_degree(r.stacked_nabla),
                "samples": r.samples.iter().map(|s| json!({"nabla": fmt_degree(s.nabla), "reliable": s.reliable})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut report = json!({"taus": taus, "stages": stages});
    if let Some(s) = search {
        report["threshold_search"] = s;
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match &a.report {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn eval_cmd(
    rules: Option<&Path>,
    manifest: Option<&Path>,
    test: Option<&Path>,
    params: Option<&Path>,
    transform: TransformArg,
    renormalize: bool,
) -> anyhow::Result<()> {
    let (mut cascade, samples): (Cascade, Vec<ProbSample>) = match (manifest, test) {
        (Some(m), _) => {
            let (_, problem, samples) = load_dataset(m)?;
            let cascade = match rules {
                Some(r) => load_rules(r)?,
                None => problem.rules()?,
            };
            (cascade, samples)
        }
        (None, Some(t)) => {
            let cascade = load_rules(rules.ok_or_else(|| anyhow!("--rules is required with --test"))?)?;
            let samples = read_probability_jsonl(t, &cascade, renormalize)?;
            (cascade, samples)
        }
        (None, None) => bail!("one of --manifest or --test is required"),
    };
    if let Some(p) = params {
        load_params(&mut cascade, p)?;
    }
    let report = evaluate(&cascade, &samples, transform.into(), CascadeOptions { renormalize })?;
    println!("samples {}", report.total);
    println!("correct {}", report.correct);
    println!("ambiguous {}", report.ambiguous);
    println!("accuracy {}", fmt_degree(report.accuracy));
    for (stage, t) in &report.stage_timings {
        eprintln!("time {stage} {:.3} ms", t.as_secs_f64() * 1e3);
    }
    Ok(())
}

fn transform_cmd(kind: TransformKind, input: &Path, renormalize: bool, out: Option<&Path>) -> anyhow::Result<()> {
    let (header, _) = pi_rules::io::read_degree_csv(input)?;
    let domain = std::sync::Arc::new(pi_rules::Domain::new(header.clone())?);
    let rows: Vec<Vec<f64>> = match kind {
        TransformKind::Antipignistic | TransformKind::Minspec => read_probability_csv(input, &domain, renormalize)?
            .iter()
            .map(|p| match kind {
                TransformKind::Antipignistic => prob_to_poss_antipignistic(p).into_degrees(),
                _ => prob_to_poss_minspec(p).into_degrees(),
            })
            .collect(),
        TransformKind::Inverse => read_possibility_csv(input, &domain, renormalize)?
            .iter()
            .map(|pi| poss_to_prob_antipignistic(pi).map(|p| p.masses().to_vec()))
            .collect::<Result<_, _>>()?,
    };
    if rows.is_empty() {
        return Err(Error::NoSamples.into());
    }
    match out {
        Some(p) => write_degree_csv(fs::File::create(p)?, &header, &rows, None)?,
        None => write_degree_csv(std::io::stdout().lock(), &header, &rows, None)?,
    }
    Ok(())
}

fn backprop_cmd(
    rules: &Path,
    stage: &str,
    target: Option<&str>,
    target_csv: Option<&Path>,
    pick: PickArg,
    params: Option<&Path>,
    out_dir: &Path,
) -> anyhow::Result<()> {
    let mut cascade = load_rules(rules)?;
    if let Some(p) = params {
        load_params(&mut cascade, p)?;
    }
    let set = &cascade.stage(stage).ok_or_else(|| anyhow!("no stage named {stage:?}"))?.rules;
    let domain = set.output().domain.clone();
    let target = match (target, target_csv) {
        (Some(label), _) => {
            let i = domain
                .position(label)
                .ok_or_else(|| anyhow!("label {label:?} is not in the domain of {:?}", set.output().name))?;
            PossibilityDistribution::one_point(domain.clone(), i)?
        }
        (None, Some(path)) => read_possibility_csv(path, &domain, false)?.into_iter().next().ok_or(Error::NoSamples)?,
        (None, None) => bail!("one of --target or --target-csv is required"),
    };
    let sys = OmegaSystem::new(set, &target)?;
    let sol = solve_omega(&sys);
    if !sol.consistent {
        eprintln!("warning: no premise degrees reproduce the target exactly");
    }
    let pick = match pick {
        PickArg::Low => Pick::Low,
        PickArg::High => Pick::High,
    };
    let inputs = targeted_inputs(set, &sol, pick)?;
    for (name, pi) in &inputs {
        let labels = pi.domain().labels();
        emit(Some(out_dir), &format!("{name}.poss"), labels, &[pi.degrees().to_vec()], None)?;
        match poss_to_prob_antipignistic(pi) {
            Ok(p) => emit(Some(out_dir), &format!("{name}.prob"), labels, &[p.masses().to_vec()], None)?,
            Err(e) => eprintln!("warning: {name}: no probability back-transform ({e})"),
        }
    }
    Ok(())
}

fn generate_cmd(what: GenerateCmd) -> anyhow::Result<()> {
    let write_rules = |cascade: &Cascade, out: &Path| -> anyhow::Result<()> {
        fs::write(out, RuleFile::from_cascade(cascade).to_json() + "\n")
            .with_context(|| format!("writing {}", out.display()))?;
        println!("{} rule sets, {} rules", cascade.stages().len(), cascade.rule_count());
        Ok(())
    };
    match what {
        GenerateCmd::Addition { k, out } => write_rules(&gen_addition_rules(AdditionSpec { k })?, &out),
        GenerateCmd::Sudoku { side, out } => write_rules(&gen_sudoku_rules(&SudokuSpec::new(side)?)?, &out),
        GenerateCmd::Dataset { problem, k, side, samples, base_mass, temperature, seed, split, out_dir } => {
            let problem = match problem.as_str() {
                "addition" => Problem::Addition(AdditionSpec { k: k.ok_or_else(|| anyhow!("--k is required"))? }),
                _ => Problem::Sudoku(SudokuSpec::new(side.ok_or_else(|| anyhow!("--side is required"))?)?),
            };
            let model = SyntheticNoiseModel { base_mass, temperature, seed };
            let data = synthetic_dataset(&problem, samples, &model)?;
            let path = write_dataset(&out_dir, &problem, &split, &data)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}
