//! Batch front end for the recognition pipeline: generate synthetic
//! glyphs, extract features, train and evaluate classifiers, merge
//! confused classes, and run the repeated hold-out protocol.
//!
//! Conventions: exit 0 on success, 1 on runtime failures, 2 on usage
//! errors. Logs go to standard error; results print to standard out;
//! artifacts go to files. Every subcommand is deterministic given its
//! flags and seed.

mod config;

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use glyphrec::eval::{confusion, macro_accuracy, report, ConfusionMatrix};
use glyphrec::features::{
    extract_dataset, extract_feature_vector, FeatureConfig, FeatureSet,
};
use glyphrec::grouping::{build_grouping, ClassGrouping};
use glyphrec::mlp::{init_model, sweep_hidden, train, MLPModel, TrainConfig};
use glyphrec::raster::{
    load_dataset, make_fold_pairs, read_image_as_binary, read_manifest, Fraction, Threshold,
};
use glyphrec::svm::{ovo_predict, ovo_train, SVMMulti, SvmParams};
use glyphrec::synthgen::{gen_dataset_on_canvas, write_dataset_pgm, PerturbParams};

#[derive(Parser)]
#[command(name = "glyphrec", version, about = "Handwritten-glyph recognition pipeline")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic glyph dataset (PGM images + manifest)
    Gen(GenArgs),
    /// Extract feature vectors for every image in a manifest
    Extract(ExtractArgs),
    /// Train the backpropagation MLP on a feature file
    TrainMlp(TrainMlpArgs),
    /// Train the one-vs-one RBF SVM on a feature file
    TrainSvm(TrainSvmArgs),
    /// Evaluate a trained model against a feature file
    Eval(EvalArgs),
    /// Merge mutually-confused classes from a confusion matrix
    Group(GroupArgs),
    /// Repeated hold-out protocol: split, extract, train, evaluate
    Crossval(CrossvalArgs),
}

#[derive(clap::Args)]
struct GenArgs {
    /// Number of glyph classes (built-in templates)
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=16))]
    classes: u64,
    /// Samples per class
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    per_class: u64,
    /// Master seed for all perturbations
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for images and manifest.csv
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Canvas side in pixels
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(16..=512))]
    canvas: u64,
    /// Rotation range in degrees (+/-)
    #[arg(long, default_value_t = 10.0)]
    rotation: f64,
    /// Minimum stroke thickness in pixels
    #[arg(long, default_value_t = 1)]
    thickness_min: u32,
    /// Maximum stroke thickness in pixels
    #[arg(long, default_value_t = 2)]
    thickness_max: u32,
    /// Per-endpoint jitter in pixels (+/-)
    #[arg(long, default_value_t = 1.5)]
    jitter: f64,
    /// Salt/pepper flip probability (< 0.05)
    #[arg(long, default_value_t = 0.01)]
    noise: f64,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExtractArgs {
    /// Dataset manifest (`path,label` CSV)
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Shadow-feature quad-tree depth
    #[arg(long, default_value_t = 1)]
    shadow_depth: usize,
    /// Longest-run quad-tree depth
    #[arg(long, default_value_t = 2)]
    run_depth: usize,
    /// Output feature CSV (label,v0,...)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Also write the sparse `label index:value` format here
    #[arg(long, value_name = "FILE")]
    sparse_out: Option<PathBuf>,
    /// Threshold rule for grayscale inputs: `otsu` or `fixed:N`
    #[arg(long, default_value = "otsu")]
    binarize: String,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TrainMlpArgs {
    /// Feature file (dense CSV or sparse), any of the two formats
    #[arg(long, value_name = "FILE")]
    features: PathBuf,
    /// Hidden-layer size
    #[arg(long)]
    hidden: usize,
    /// Learning rate
    #[arg(long, default_value_t = 0.8)]
    lr: f64,
    /// Momentum term
    #[arg(long, default_value_t = 0.7)]
    momentum: f64,
    /// Training epochs
    #[arg(long, default_value_t = 10000)]
    iters: usize,
    /// Seed for weight init and epoch shuffling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Uniform weight-init range (+/-)
    #[arg(long, default_value_t = 0.5)]
    init_range: f64,
    /// Output model file (JSON)
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Class-grouping JSON applied to the labels before training
    #[arg(long, value_name = "FILE")]
    grouping: Option<PathBuf>,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TrainSvmArgs {
    /// Feature file (dense CSV or sparse), any of the two formats
    #[arg(long, value_name = "FILE")]
    features: PathBuf,
    /// Soft-margin penalty C
    #[arg(long, default_value_t = 8.0)]
    c: f64,
    /// RBF gamma; defaults to 1/n_features (1/204 for default features)
    #[arg(long)]
    gamma: Option<f64>,
    /// KKT tolerance
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Solver pass budget per binary machine
    #[arg(long, default_value_t = 1000)]
    max_passes: usize,
    /// Seed for the solver's working-set selection
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output model file (text)
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Class-grouping JSON applied to the labels before training
    #[arg(long, value_name = "FILE")]
    grouping: Option<PathBuf>,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Trained model file (MLP JSON or SVM text; detected by content)
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Feature file to evaluate on
    #[arg(long, value_name = "FILE")]
    features: PathBuf,
    /// Write the evaluation report as JSON here
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Write the confusion matrix as CSV here
    #[arg(long, value_name = "FILE")]
    confusion: Option<PathBuf>,
    /// Class-grouping JSON applied to the labels before scoring
    #[arg(long, value_name = "FILE")]
    grouping: Option<PathBuf>,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GroupArgs {
    /// Confusion matrix CSV (square, no header)
    #[arg(long, value_name = "FILE")]
    confusion: PathBuf,
    /// Mutual-confusion threshold in (0, 1]
    #[arg(long)]
    tau: f64,
    /// Output grouping file (JSON)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Classifier {
    Mlp,
    Svm,
}

#[derive(clap::Args)]
struct CrossvalArgs {
    /// Dataset manifest (`path,label` CSV)
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,
    /// Number of independent train/test pairs
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pairs: u64,
    /// Classifier to run
    #[arg(long, value_enum)]
    classifier: Classifier,
    /// Train share as an exact ratio
    #[arg(long, default_value = "2/3")]
    train_fraction: String,
    /// Base seed; pair k splits with seed+k and training uses seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Threshold rule for grayscale inputs: `otsu` or `fixed:N`
    #[arg(long, default_value = "otsu")]
    binarize: String,
    /// Shadow-feature quad-tree depth
    #[arg(long, default_value_t = 1)]
    shadow_depth: usize,
    /// Longest-run quad-tree depth
    #[arg(long, default_value_t = 2)]
    run_depth: usize,
    /// Fixed MLP hidden size (disables the sweep)
    #[arg(long)]
    hidden: Option<usize>,
    /// MLP hidden-size sweep `lo:hi:step`
    #[arg(long, default_value = "40:140:10")]
    sweep: String,
    /// MLP learning rate
    #[arg(long, default_value_t = 0.8)]
    lr: f64,
    /// MLP momentum term
    #[arg(long, default_value_t = 0.7)]
    momentum: f64,
    /// MLP training epochs
    #[arg(long, default_value_t = 10000)]
    iters: usize,
    /// MLP uniform weight-init range (+/-)
    #[arg(long, default_value_t = 0.5)]
    init_range: f64,
    /// SVM soft-margin penalty C
    #[arg(long, default_value_t = 8.0)]
    c: f64,
    /// SVM RBF gamma; defaults to 1/n_features
    #[arg(long)]
    gamma: Option<f64>,
    /// SVM KKT tolerance
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// SVM solver pass budget per binary machine
    #[arg(long, default_value_t = 1000)]
    max_passes: usize,
    /// Write the hidden-size sweep table as CSV here (MLP only)
    #[arg(long, value_name = "FILE")]
    table: Option<PathBuf>,
    /// Flat `key = value` config file; flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Failures split by exit code: usage errors exit 2, runtime errors 1.
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    match run(argv) {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

fn run(argv: Vec<String>) -> Result<(), Failure> {
    let cli = Cli::parse_from(&argv);
    let config_path = match &cli.cmd {
        Cmd::Gen(a) => a.config.clone(),
        Cmd::Extract(a) => a.config.clone(),
        Cmd::TrainMlp(a) => a.config.clone(),
        Cmd::TrainSvm(a) => a.config.clone(),
        Cmd::Eval(a) => a.config.clone(),
        Cmd::Group(a) => a.config.clone(),
        Cmd::Crossval(a) => a.config.clone(),
    };

    let cli = if let Some(path) = config_path {
        // config keys become injected flags, but never shadow a flag the
        // user passed explicitly
        let sub = argv
            .get(1)
            .cloned()
            .ok_or_else(|| Failure::Usage("missing subcommand".into()))?;
        let pairs = config::load(&path)?;
        config::validate_keys(&sub, &pairs)?;
        let user_has = |key: &str| {
            argv[2..]
                .iter()
                .any(|a| a == &format!("--{key}") || a.starts_with(&format!("--{key}=")))
        };
        let mut merged = vec![argv[0].clone(), sub];
        for (k, v) in &pairs {
            if !user_has(k) {
                merged.push(format!("--{k}"));
                merged.push(v.clone());
            }
        }
        merged.extend(argv[2..].iter().cloned());
        Cli::parse_from(&merged)
    } else {
        cli
    };

    match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Extract(a) => cmd_extract(a),
        Cmd::TrainMlp(a) => cmd_train_mlp(a),
        Cmd::TrainSvm(a) => cmd_train_svm(a),
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Group(a) => cmd_group(a),
        Cmd::Crossval(a) => cmd_crossval(a),
    }
}

fn parse_threshold(s: &str) -> Result<Threshold, Failure> {
    if s == "otsu" {
        return Ok(Threshold::Otsu);
    }
    if let Some(t) = s.strip_prefix("fixed:") {
        let t: u8 = t
            .parse()
            .map_err(|_| Failure::Usage(format!("bad fixed threshold {t:?} (want 0..=255)")))?;
        return Ok(Threshold::Fixed(t));
    }
    Err(Failure::Usage(format!(
        "bad --binarize value {s:?} (want `otsu` or `fixed:N`)"
    )))
}

fn load_grouping(path: &PathBuf) -> Result<ClassGrouping, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read grouping {}", path.display()))?;
    let g: ClassGrouping = serde_json::from_str(&text)
        .with_context(|| format!("bad grouping file {}", path.display()))?;
    Ok(g)
}

fn load_features(path: &PathBuf, grouping: &Option<PathBuf>) -> Result<FeatureSet, Failure> {
    let set = FeatureSet::read_auto(path)
        .map_err(|e| anyhow!(e).context(format!("cannot load features {}", path.display())))?;
    match grouping {
        Some(gpath) => {
            let g = load_grouping(gpath)?;
            Ok(set.relabeled(&g.map, g.merged_count).map_err(anyhow::Error::new)?)
        }
        None => Ok(set),
    }
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    if a.noise >= 0.05 {
        return Err(Failure::Usage(format!(
            "--noise {} must stay below 0.05",
            a.noise
        )));
    }
    if a.thickness_min == 0 || a.thickness_min > a.thickness_max {
        return Err(Failure::Usage(format!(
            "bad thickness range {}..{}",
            a.thickness_min, a.thickness_max
        )));
    }
    let params = PerturbParams {
        rotation_deg: a.rotation,
        thickness: (a.thickness_min, a.thickness_max),
        jitter_px: a.jitter,
        noise: a.noise,
    };
    let dataset = gen_dataset_on_canvas(
        a.classes as usize,
        a.per_class as usize,
        a.canvas as usize,
        &params,
        a.seed,
    )
    .map_err(anyhow::Error::new)?;
    let manifest = write_dataset_pgm(&dataset, &a.out).map_err(anyhow::Error::new)?;
    eprintln!(
        "wrote {} images and {}",
        dataset.len(),
        manifest.display()
    );
    Ok(())
}

fn cmd_extract(a: ExtractArgs) -> Result<(), Failure> {
    let threshold = parse_threshold(&a.binarize)?;
    let cfg = FeatureConfig {
        shadow_depth: a.shadow_depth,
        run_depth: a.run_depth,
    };
    let entries = read_manifest(&a.manifest).map_err(anyhow::Error::new)?;
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    let mut class_count = 0usize;
    let mut failures = Vec::new();
    for e in &entries {
        let outcome = read_image_as_binary(&e.path, threshold)
            .and_then(|img| extract_feature_vector(&img, cfg));
        match outcome {
            Ok(fv) => {
                labels.push(e.label);
                class_count = class_count.max(e.label + 1);
                rows.push(fv.values);
            }
            Err(err) => failures.push((e.path.clone(), err)),
        }
    }
    if !failures.is_empty() {
        for (path, err) in &failures {
            eprintln!("unusable image {}: {err}", path.display());
        }
        return Err(Failure::Runtime(anyhow!(
            "{} of {} images were unreadable or empty",
            failures.len(),
            entries.len()
        )));
    }
    let set = FeatureSet::new(cfg.feature_len(), class_count, labels, rows)
        .map_err(anyhow::Error::new)?;
    let comments = vec![
        ("shadow-depth".to_string(), a.shadow_depth.to_string()),
        ("run-depth".to_string(), a.run_depth.to_string()),
        ("binarize".to_string(), a.binarize.clone()),
    ];
    set.write_csv(&a.out, &comments).map_err(anyhow::Error::new)?;
    if let Some(sparse) = &a.sparse_out {
        set.write_sparse(sparse).map_err(anyhow::Error::new)?;
    }
    eprintln!("extracted {} rows x {} features", set.len(), set.dim);
    Ok(())
}

fn train_macro(preds: &[usize], labels: &[usize], n: usize) -> Result<f64, Failure> {
    let cm = confusion(preds, labels, n).map_err(anyhow::Error::new)?;
    Ok(macro_accuracy(&cm).map_err(anyhow::Error::new)?)
}

fn cmd_train_mlp(a: TrainMlpArgs) -> Result<(), Failure> {
    if a.lr == 0.0 {
        eprintln!("warning: learning rate 0 leaves the weights unchanged");
    }
    let set = load_features(&a.features, &a.grouping)?;
    let cfg = TrainConfig {
        learning_rate: a.lr,
        momentum: a.momentum,
        iterations: a.iters,
        seed: a.seed,
        init_range: a.init_range,
    };
    let model = init_model(set.dim, a.hidden, set.class_count, a.seed, a.init_range);
    let (model, _) = train(&model, &set, &cfg).map_err(anyhow::Error::new)?;
    model.save_json(&a.model).map_err(anyhow::Error::new)?;
    let preds: Vec<usize> = set
        .rows
        .iter()
        .map(|r| model.predict(r))
        .collect::<Result<_, _>>()
        .map_err(anyhow::Error::new)?;
    println!(
        "train_macro_accuracy {:.6}",
        train_macro(&preds, &set.labels, set.class_count)?
    );
    Ok(())
}

fn cmd_train_svm(a: TrainSvmArgs) -> Result<(), Failure> {
    let set = load_features(&a.features, &a.grouping)?;
    let params = SvmParams {
        c: a.c,
        gamma: a.gamma,
        tol: a.tol,
        max_passes: a.max_passes,
        seed: a.seed,
    };
    let model = ovo_train(&set, &params).map_err(anyhow::Error::new)?;
    let unconverged = model
        .machines
        .iter()
        .filter(|pm| !pm.machine.converged)
        .count();
    if unconverged > 0 {
        eprintln!(
            "warning: {unconverged} of {} machines hit the pass budget before converging",
            model.machines.len()
        );
    }
    model.save(&a.model).map_err(anyhow::Error::new)?;
    let preds: Vec<usize> = set
        .rows
        .iter()
        .map(|r| ovo_predict(&model, r))
        .collect::<Result<_, _>>()
        .map_err(anyhow::Error::new)?;
    println!(
        "train_macro_accuracy {:.6}",
        train_macro(&preds, &set.labels, set.class_count)?
    );
    Ok(())
}

enum LoadedModel {
    Mlp(MLPModel),
    Svm(SVMMulti),
}

fn load_model(path: &PathBuf) -> Result<LoadedModel, Failure> {
    let head = fs::read_to_string(path)
        .with_context(|| format!("cannot read model {}", path.display()))?;
    let head = head.trim_start();
    if head.starts_with('{') {
        Ok(LoadedModel::Mlp(
            MLPModel::load_json(path).map_err(anyhow::Error::new)?,
        ))
    } else if head.starts_with("svmmulti") {
        Ok(LoadedModel::Svm(
            SVMMulti::load(path).map_err(anyhow::Error::new)?,
        ))
    } else {
        Err(Failure::Runtime(anyhow!(
            "{}: not a recognized model file",
            path.display()
        )))
    }
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let set = load_features(&a.features, &a.grouping)?;
    let model = load_model(&a.model)?;
    let (preds, n_classes) = match &model {
        LoadedModel::Mlp(m) => {
            let preds: Vec<usize> = set
                .rows
                .iter()
                .map(|r| m.predict(r))
                .collect::<Result<_, _>>()
                .map_err(anyhow::Error::new)?;
            (preds, m.output_size)
        }
        LoadedModel::Svm(m) => {
            let preds: Vec<usize> = set
                .rows
                .iter()
                .map(|r| ovo_predict(m, r))
                .collect::<Result<_, _>>()
                .map_err(anyhow::Error::new)?;
            (preds, m.class_count)
        }
    };
    let cm = confusion(&preds, &set.labels, n_classes).map_err(anyhow::Error::new)?;
    let rep = report(&cm);
    if let Some(path) = &a.confusion {
        cm.write_csv(path).map_err(anyhow::Error::new)?;
    }
    if let Some(path) = &a.report {
        fs::write(path, serde_json::to_string_pretty(&rep).map_err(anyhow::Error::new)?)
            .with_context(|| format!("cannot write report {}", path.display()))?;
    }
    println!("macro_accuracy {:.6}", rep.macro_accuracy);
    println!("overall_accuracy {:.6}", rep.overall_accuracy);
    Ok(())
}

fn cmd_group(a: GroupArgs) -> Result<(), Failure> {
    if !(a.tau > 0.0 && a.tau <= 1.0) {
        return Err(Failure::Usage(format!(
            "--tau {} must lie in (0, 1]",
            a.tau
        )));
    }
    let cm = ConfusionMatrix::read_csv(&a.confusion).map_err(anyhow::Error::new)?;
    let g = build_grouping(&cm, a.tau).map_err(anyhow::Error::new)?;
    fs::write(&a.out, serde_json::to_string_pretty(&g).map_err(anyhow::Error::new)?)
        .with_context(|| format!("cannot write grouping {}", a.out.display()))?;
    println!("classes {} merged_into {}", g.original_count, g.merged_count);
    Ok(())
}

fn parse_sweep(s: &str) -> Result<Vec<usize>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::Usage(format!("bad --sweep {s:?} (want lo:hi:step)"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: usize = parts[0].parse().map_err(|_| bad())?;
    let hi: usize = parts[1].parse().map_err(|_| bad())?;
    let step: usize = parts[2].parse().map_err(|_| bad())?;
    if lo == 0 || step == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step).collect())
}

fn cmd_crossval(a: CrossvalArgs) -> Result<(), Failure> {
    let fraction: Fraction = a
        .train_fraction
        .parse()
        .map_err(|e| Failure::Usage(format!("{e}")))?;
    let threshold = parse_threshold(&a.binarize)?;
    let feat_cfg = FeatureConfig {
        shadow_depth: a.shadow_depth,
        run_depth: a.run_depth,
    };
    let dataset = load_dataset(&a.manifest, threshold).map_err(anyhow::Error::new)?;
    let seeds: Vec<u64> = (0..a.pairs).map(|i| a.seed + i).collect();
    let pairs = make_fold_pairs(&dataset, fraction, &seeds).map_err(anyhow::Error::new)?;

    let sizes = match a.hidden {
        Some(h) => vec![h],
        None => parse_sweep(&a.sweep)?,
    };
    let mut accuracies = Vec::with_capacity(pairs.len());
    // sweep table: one row per hidden size, one column per pair
    let mut table: Vec<Vec<f64>> = vec![Vec::new(); sizes.len()];
    for (i, (train_ds, test_ds)) in pairs.iter().enumerate() {
        let train_f = extract_dataset(train_ds, feat_cfg).map_err(anyhow::Error::new)?;
        let test_f = extract_dataset(test_ds, feat_cfg).map_err(anyhow::Error::new)?;
        match a.classifier {
            Classifier::Mlp => {
                let cfg = TrainConfig {
                    learning_rate: a.lr,
                    momentum: a.momentum,
                    iterations: a.iters,
                    seed: a.seed,
                    init_range: a.init_range,
                };
                let rows = sweep_hidden(&train_f, &test_f, &cfg, &sizes)
                    .map_err(anyhow::Error::new)?;
                let best = rows
                    .iter()
                    .max_by(|x, y| x.accuracy.partial_cmp(&y.accuracy).unwrap())
                    .unwrap();
                println!(
                    "set {} accuracy {:.6} hidden {}",
                    i + 1,
                    best.accuracy,
                    best.hidden
                );
                accuracies.push(best.accuracy);
                for (r, row) in rows.iter().enumerate() {
                    table[r].push(row.accuracy);
                }
            }
            Classifier::Svm => {
                let params = SvmParams {
                    c: a.c,
                    gamma: a.gamma,
                    tol: a.tol,
                    max_passes: a.max_passes,
                    seed: a.seed,
                };
                let model = ovo_train(&train_f, &params).map_err(anyhow::Error::new)?;
                let preds: Vec<usize> = test_f
                    .rows
                    .iter()
                    .map(|r| ovo_predict(&model, r))
                    .collect::<Result<_, _>>()
                    .map_err(anyhow::Error::new)?;
                let cm = confusion(&preds, &test_f.labels, train_f.class_count)
                    .map_err(anyhow::Error::new)?;
                let acc = macro_accuracy(&cm).map_err(anyhow::Error::new)?;
                println!("set {} accuracy {:.6}", i + 1, acc);
                accuracies.push(acc);
            }
        }
    }
    let mean = accuracies.iter().sum::<f64>() / accuracies.len() as f64;
    println!("mean_accuracy {mean:.6}");

    if let Some(path) = &a.table {
        if a.classifier == Classifier::Mlp {
            let mut text = String::from("hidden");
            for i in 1..=pairs.len() {
                text.push_str(&format!(",set{i}"));
            }
            text.push('\n');
            for (h, row) in sizes.iter().zip(&table) {
                text.push_str(&h.to_string());
                for acc in row {
                    text.push_str(&format!(",{acc:.6}"));
                }
                text.push('\n');
            }
            fs::write(path, text)
                .with_context(|| format!("cannot write table {}", path.display()))?;
        } else {
            eprintln!("note: --table applies to the MLP sweep only; skipped");
        }
    }
    Ok(())
}
