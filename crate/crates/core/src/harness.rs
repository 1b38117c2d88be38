//! Paired cross-validation over the five experimental settings, the
//! primal-vs-dual timing benchmark, and report output.

use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adapt::{
    alternate, build_dual, build_primal, mmdtl2_recover_w, theta_step, AdaptOptions, Method, TransformMatrix, WStep,
    DEFAULT_W_STEP_TOL,
};
use crate::dataio::{gen_shifted, gen_toy_two_class, read_features, FeatureFormat, ShiftSpec};
use crate::domain::{compute_pair_weights, Dataset, Domain, HyperParams, PairWeightMode};
use crate::error::{Error, Result};
use crate::qp::{default_max_sweeps, solve_box_qp, solve_inequality_qp};
use crate::svm::{train_ovr_with, SvmOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    Baseline,
    SourceOnly,
    NotTransfer,
    Mmdt,
    Mmdtl2,
}

impl Setting {
    pub const ALL: [Setting; 5] = [
        Setting::Baseline,
        Setting::SourceOnly,
        Setting::NotTransfer,
        Setting::Mmdt,
        Setting::Mmdtl2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Setting::Baseline => "baseline",
            Setting::SourceOnly => "source-only",
            Setting::NotTransfer => "not-transfer",
            Setting::Mmdt => "mmdt",
            Setting::Mmdtl2 => "mmdtl2",
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown setting '{s}'")))
    }
}

/// Where the two domains come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataSource {
    Files {
        source: PathBuf,
        target: PathBuf,
        format: Option<FeatureFormat>,
    },
    /// Domain-shift generator with `M_S = M_T = dim`.
    Shifted { dim: usize },
    Toy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub setting: Setting,
    pub folds: usize,
    pub hyperparams: HyperParams,
    pub data: DataSource,
    pub seed: u64,
    /// Overrides the method's default augmentation for the transfer settings.
    pub augmented: Option<bool>,
    pub pair_weighting: PairWeightMode,
}

impl ExperimentConfig {
    pub fn new(setting: Setting, data: DataSource, seed: u64) -> Self {
        ExperimentConfig {
            setting,
            folds: 10,
            hyperparams: HyperParams::default(),
            data,
            seed,
            augmented: None,
            pair_weighting: PairWeightMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::invalid(format!("folds must be at least 2, got {}", self.folds)));
        }
        self.hyperparams.validate()?;
        match &self.data {
            DataSource::Files { source, target, .. } => {
                for p in [source, target] {
                    if !p.exists() {
                        return Err(Error::invalid(format!("file not found: {}", p.display())));
                    }
                }
            }
            DataSource::Shifted { dim } if *dim == 0 => return Err(Error::invalid("dimension must be positive")),
            _ => {}
        }
        Ok(())
    }

    /// Loads or generates both domains with a shared class count.
    pub fn load_data(&self) -> Result<(Dataset, Dataset)> {
        let (s, t) = match &self.data {
            DataSource::Files { source, target, format } => {
                let fs = format.unwrap_or_else(|| FeatureFormat::from_path(source));
                let ft = format.unwrap_or_else(|| FeatureFormat::from_path(target));
                (read_features(source, fs, Domain::Source)?, read_features(target, ft, Domain::Target)?)
            }
            DataSource::Shifted { dim } => gen_shifted(&ShiftSpec::random(*dim, *dim, self.seed)?)?,
            DataSource::Toy => gen_toy_two_class(self.seed)?,
        };
        let k = s.n_classes().max(t.n_classes());
        Ok((s.with_n_classes(k)?, t.with_n_classes(k)?))
    }

    fn dimension(&self, source: &Dataset) -> usize {
        match self.data {
            DataSource::Shifted { dim } => dim,
            _ => source.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub setting: Setting,
    pub fold: usize,
    pub dimension: usize,
    pub seed: u64,
    pub c_source: f64,
    pub c_target: f64,
    pub d_weight: f64,
    pub accuracy: f64,
    pub train_seconds: f64,
    pub test_seconds: f64,
}

/// Held-out indices of one fold in each domain; fold `f` of the source pairs with fold `f` of the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPair {
    pub source_test: Vec<usize>,
    pub target_test: Vec<usize>,
}

impl FoldPair {
    pub fn source_train(&self, n: usize) -> Vec<usize> {
        complement(&self.source_test, n)
    }

    pub fn target_train(&self, n: usize) -> Vec<usize> {
        complement(&self.target_test, n)
    }
}

fn complement(held_out: &[usize], n: usize) -> Vec<usize> {
    let mut mask = vec![true; n];
    held_out.iter().for_each(|&i| mask[i] = false);
    (0..n).filter(|&i| mask[i]).collect()
}

fn stratify(ds: &Dataset, folds: usize, rng: &mut ChaCha8Rng, name: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); folds];
    for class in 1..=ds.n_classes() {
        let mut members: Vec<usize> = (0..ds.len()).filter(|&i| ds.labels()[i] == class).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < folds {
            return Err(Error::invalid(format!(
                "{name} class {class} has {} samples, fewer than {folds} folds",
                members.len()
            )));
        }
        members.shuffle(rng);
        for (pos, idx) in members.into_iter().enumerate() {
            out[pos % folds].push(idx);
        }
    }
    out.iter_mut().for_each(|f| f.sort_unstable());
    Ok(out)
}

/// Stratified paired folds; deterministic under `seed`.
pub fn kfold_split(source: &Dataset, target: &Dataset, folds: usize, seed: u64) -> Result<Vec<FoldPair>> {
    if folds < 2 {
        return Err(Error::invalid("folds must be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = stratify(source, folds, &mut rng, "source")?;
    let t = stratify(target, folds, &mut rng, "target")?;
    Ok(s.into_iter()
        .zip(t)
        .map(|(source_test, target_test)| FoldPair { source_test, target_test })
        .collect())
}

pub fn run_setting(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let (source, target) = cfg.load_data()?;
    run_setting_on(cfg, &source, &target)
}

/// Runs one setting over all folds of the given data.
pub fn run_setting_on(cfg: &ExperimentConfig, source: &Dataset, target: &Dataset) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let same_space = source.dim() == target.dim();
    if matches!(cfg.setting, Setting::SourceOnly | Setting::NotTransfer) && !same_space {
        return Err(Error::invalid(format!(
            "setting {} needs equal source and target dimensions ({} vs {})",
            cfg.setting,
            source.dim(),
            target.dim()
        )));
    }
    let splits = kfold_split(source, target, cfg.folds, cfg.seed)?;
    let dimension = cfg.dimension(source);
    splits
        .iter()
        .enumerate()
        .map(|(fold, pair)| {
            run_fold(cfg, source, target, pair).map(|(accuracy, train_seconds, test_seconds)| ReportRow {
                setting: cfg.setting,
                fold,
                dimension,
                seed: cfg.seed,
                c_source: cfg.hyperparams.c_source,
                c_target: cfg.hyperparams.c_target,
                d_weight: cfg.hyperparams.d_weight,
                accuracy,
                train_seconds,
                test_seconds,
            })
            .map_err(|e| Error::Fold {
                fold,
                source: Box::new(e),
            })
        })
        .collect()
}

fn run_fold(cfg: &ExperimentConfig, source: &Dataset, target: &Dataset, pair: &FoldPair) -> Result<(f64, f64, f64)> {
    let hp = &cfg.hyperparams;
    let svm = SvmOptions::default();
    let k = source.n_classes();
    let s_train = source.subset(&pair.source_train(source.len()))?;
    let t_train = target.subset(&pair.target_train(target.len()))?;
    let s_test = source.subset(&pair.source_test)?;
    let t_test = target.subset(&pair.target_test)?;

    let start = Instant::now();
    match cfg.setting {
        Setting::Baseline | Setting::SourceOnly => {
            let c = vec![hp.c_source; s_train.len()];
            let model = train_ovr_with(s_train.features(), s_train.labels(), k, &c, &svm)?;
            let train = start.elapsed().as_secs_f64();
            let test_set = if cfg.setting == Setting::Baseline { &s_test } else { &t_test };
            let start = Instant::now();
            let acc = model.accuracy(test_set.features(), test_set.labels())?;
            Ok((acc, train, start.elapsed().as_secs_f64()))
        }
        Setting::NotTransfer => {
            let features = s_train.features().vstack(t_train.features());
            let labels: Vec<usize> = s_train.labels().iter().chain(t_train.labels()).copied().collect();
            let c: Vec<f64> = std::iter::repeat(hp.c_source)
                .take(s_train.len())
                .chain(std::iter::repeat(hp.c_target).take(t_train.len()))
                .collect();
            let model = train_ovr_with(&features, &labels, k, &c, &svm)?;
            let train = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let acc = model.accuracy(t_test.features(), t_test.labels())?;
            Ok((acc, train, start.elapsed().as_secs_f64()))
        }
        Setting::Mmdt | Setting::Mmdtl2 => {
            let method = if cfg.setting == Setting::Mmdt { Method::Mmdt } else { Method::Mmdtl2 };
            let opts = AdaptOptions {
                augmented: cfg.augmented,
                pair_weighting: cfg.pair_weighting,
                svm,
                ..AdaptOptions::new(method)
            };
            let outcome = alternate(&s_train, &t_train, hp, &opts)?;
            let train = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let mapped = outcome.transform.apply_all(t_test.features())?;
            let acc = outcome.model.accuracy(&mapped, t_test.labels())?;
            Ok((acc, train, start.elapsed().as_secs_f64()))
        }
    }
}

/// Mean accuracy over rows.
pub fn mean_accuracy(rows: &[ReportRow]) -> f64 {
    if rows.is_empty() {
        return f64::NAN;
    }
    rows.iter().map(|r| r.accuracy).sum::<f64>() / rows.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    /// `.csv` gives CSV, everything else JSON.
    pub fn from_path(path: &Path) -> ReportFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

/// Writes rows as a JSON array or as CSV with a header line.
pub fn emit_report<T: Serialize>(rows: &[T], format: ReportFormat, path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to report"));
    }
    let file = File::create(path)?;
    match format {
        ReportFormat::Json => serde_json::to_writer_pretty(file, rows)?,
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(file);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverPath {
    Primal,
    Dual,
}

/// Per-phase wall times of one `W`-step, medians over repeats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub dimension: usize,
    pub path: SolverPath,
    pub setup_seconds: Option<f64>,
    pub optimization_seconds: Option<f64>,
    /// `W` recovery; the primal has no such phase.
    pub calculation_seconds: Option<f64>,
    pub total_seconds: Option<f64>,
    pub skipped: bool,
    /// `‖W_dual − W_primal‖_F / (1 + ‖W_primal‖_F)`, on the primal row.
    pub w_agreement: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub dims: Vec<usize>,
    pub n_target: usize,
    pub n_source: usize,
    pub seed: u64,
    pub repeats: usize,
    pub hyperparams: HyperParams,
    /// Dimensions above this skip the primal path.
    pub primal_max_dim: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            dims: vec![16, 32, 64],
            n_target: 90,
            n_source: 200,
            seed: 0,
            repeats: 3,
            hyperparams: HyperParams::default(),
            primal_max_dim: 64,
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Times one `W`-step on both paths at each dimension. The instance is a
/// two-class shifted dataset with classifiers from a first θ-step at `W = 0`.
pub fn benchmark_primal_vs_dual(cfg: &BenchConfig) -> Result<Vec<TimingRow>> {
    if cfg.repeats == 0 {
        return Err(Error::invalid("repeats must be positive"));
    }
    if cfg.n_target < 2 || cfg.n_source < 2 {
        return Err(Error::invalid("need at least one sample per class in each domain"));
    }
    cfg.hyperparams.validate()?;
    let hp = &cfg.hyperparams;
    let mut rows = Vec::new();
    for &dim in &cfg.dims {
        let mut spec = ShiftSpec::random(dim, dim, cfg.seed)?;
        spec.source_per_class = cfg.n_source / 2;
        spec.target_per_class = cfg.n_target / 2;
        let (source, target) = gen_shifted(&spec)?;
        let pw = compute_pair_weights(source.labels(), target.labels(), PairWeightMode::default())?;
        let model = theta_step(&source, &target, &TransformMatrix::zeros(dim, dim, false), hp, &SvmOptions::default())?;
        let step = WStep {
            source: &source,
            target: &target,
            model: &model,
            pair_weights: Some(&pw),
            hp,
            augmented: false,
        };

        let mut phases = [Vec::new(), Vec::new(), Vec::new()];
        let mut dual_w = None;
        for _ in 0..cfg.repeats {
            let t0 = Instant::now();
            let (ds, qp) = build_dual(&step, hp.d_weight)?;
            let t1 = Instant::now();
            let sol = solve_box_qp(&qp, DEFAULT_W_STEP_TOL, default_max_sweeps(qp.dim()))?;
            let t2 = Instant::now();
            let w = mmdtl2_recover_w(&ds, &sol.a, &step)?;
            let t3 = Instant::now();
            phases[0].push((t1 - t0).as_secs_f64());
            phases[1].push((t2 - t1).as_secs_f64());
            phases[2].push((t3 - t2).as_secs_f64());
            dual_w = Some(w);
        }
        let [setup, opt, calc] = phases.map(median);
        rows.push(TimingRow {
            dimension: dim,
            path: SolverPath::Dual,
            setup_seconds: Some(setup),
            optimization_seconds: Some(opt),
            calculation_seconds: Some(calc),
            total_seconds: Some(setup + opt + calc),
            skipped: false,
            w_agreement: None,
        });

        if dim > cfg.primal_max_dim {
            rows.push(skipped_row(dim));
            continue;
        }
        let mut phases = [Vec::new(), Vec::new()];
        let mut primal_w = None;
        let mut skipped = false;
        for _ in 0..cfg.repeats {
            let t0 = Instant::now();
            let primal = match build_primal(&step, hp.d_weight) {
                Ok(p) => p,
                Err(Error::Capacity(_)) => {
                    skipped = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            let t1 = Instant::now();
            let sol = solve_inequality_qp(&primal.qp, 1e-8)?;
            let w = primal.transform(&sol.z, false)?;
            let t2 = Instant::now();
            phases[0].push((t1 - t0).as_secs_f64());
            phases[1].push((t2 - t1).as_secs_f64());
            primal_w = Some(w);
        }
        if skipped {
            rows.push(skipped_row(dim));
            continue;
        }
        let [setup, opt] = phases.map(median);
        let agreement = match (&dual_w, &primal_w) {
            (Some(d), Some(p)) => Some(d.matrix().frobenius_distance(p.matrix()) / (1.0 + p.matrix().frobenius_norm())),
            _ => None,
        };
        rows.push(TimingRow {
            dimension: dim,
            path: SolverPath::Primal,
            setup_seconds: Some(setup),
            optimization_seconds: Some(opt),
            calculation_seconds: None,
            total_seconds: Some(setup + opt),
            skipped: false,
            w_agreement: agreement,
        });
    }
    Ok(rows)
}

fn skipped_row(dim: usize) -> TimingRow {
    TimingRow {
        dimension: dim,
        path: SolverPath::Primal,
        setup_seconds: None,
        optimization_seconds: None,
        calculation_seconds: None,
        total_seconds: None,
        skipped: true,
        w_agreement: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DenseMatrix;

    fn labelled(labels: Vec<usize>, domain: Domain) -> Dataset {
        let n = labels.len();
        let f = DenseMatrix::from_vec(n, 1, (0..n).map(|i| i as f64).collect()).unwrap();
        Dataset::new(f, labels, 2, domain).unwrap()
    }

    #[test]
    fn fold_sizes_for_default_counts() {
        let s = labelled([vec![1; 200], vec![2; 200]].concat(), Domain::Source);
        let t = labelled([vec![1; 90], vec![2; 90]].concat(), Domain::Target);
        let folds = kfold_split(&s, &t, 10, 4).unwrap();
        assert_eq!(folds.len(), 10);
        for f in &folds {
            assert_eq!(f.source_test.len(), 40);
            assert_eq!(f.target_test.len(), 18);
        }
    }

    #[test]
    fn folds_partition_and_are_deterministic() {
        let s = labelled(vec![1, 2, 1, 2, 1, 2, 1, 1, 2, 2, 1], Domain::Source);
        let t = labelled(vec![1, 1, 2, 2], Domain::Target);
        let a = kfold_split(&s, &t, 2, 9).unwrap();
        assert_eq!(a, kfold_split(&s, &t, 2, 9).unwrap());
        let mut all: Vec<usize> = a.iter().flat_map(|f| f.source_test.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..s.len()).collect::<Vec<_>>());
        for f in &a {
            assert_eq!(f.target_test.len(), 2);
            let per_class = |c| f.target_test.iter().filter(|&&i| t.labels()[i] == c).count();
            assert_eq!((per_class(1), per_class(2)), (1, 1));
            let train = f.source_train(s.len());
            assert!(train.iter().all(|i| !f.source_test.contains(i)));
        }
    }

    #[test]
    fn too_few_samples_names_the_class() {
        let s = labelled(vec![1, 1, 1, 2], Domain::Source);
        let t = labelled(vec![1, 1, 2, 2], Domain::Target);
        match kfold_split(&s, &t, 2, 0) {
            Err(Error::InvalidArgument(msg)) => assert!(msg.contains("source class 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn setting_names_round_trip() {
        for s in Setting::ALL {
            assert_eq!(s.as_str().parse::<Setting>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.as_str()));
        }
        assert!("mmd".parse::<Setting>().is_err());
    }

    fn separable() -> (Dataset, Dataset) {
        let rows: Vec<[f64; 2]> = (0..20)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                [sign * (2.0 + 0.05 * i as f64), 0.1 * (i % 5) as f64]
            })
            .collect();
        let labels: Vec<usize> = (0..20).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect();
        let s = Dataset::new(DenseMatrix::from_rows(&rows).unwrap(), labels.clone(), 2, Domain::Source).unwrap();
        let t = Dataset::new(DenseMatrix::from_rows(&rows).unwrap(), labels, 2, Domain::Target).unwrap();
        (s, t)
    }

    #[test]
    fn baseline_on_separable_data_is_perfect() {
        let (s, t) = separable();
        let mut cfg = ExperimentConfig::new(Setting::Baseline, DataSource::Toy, 1);
        cfg.folds = 5;
        cfg.hyperparams.c_source = 100.0;
        let rows = run_setting_on(&cfg, &s, &t).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.accuracy == 1.0));
    }

    #[test]
    fn source_only_equals_baseline_when_domains_coincide() {
        let (s, _) = gen_toy_two_class(2).unwrap();
        let t = Dataset::new(s.features().clone(), s.labels().to_vec(), 2, Domain::Target).unwrap();
        let mut cfg = ExperimentConfig::new(Setting::Baseline, DataSource::Toy, 3);
        cfg.folds = 4;
        let base = run_setting_on(&cfg, &s, &t).unwrap();
        cfg.setting = Setting::SourceOnly;
        let only = run_setting_on(&cfg, &s, &t).unwrap();
        for (a, b) in base.iter().zip(&only) {
            assert_eq!(a.accuracy, b.accuracy);
        }
    }

    #[test]
    fn fold_errors_carry_the_index() {
        let (s, t) = separable();
        let t3 = Dataset::new(DenseMatrix::zeros(20, 3), t.labels().to_vec(), 2, Domain::Target).unwrap();
        let mut cfg = ExperimentConfig::new(Setting::SourceOnly, DataSource::Toy, 1);
        cfg.folds = 2;
        assert!(matches!(run_setting_on(&cfg, &s, &t3), Err(Error::InvalidArgument(_))));
        cfg.setting = Setting::Mmdtl2;
        cfg.hyperparams.d_weight = 1.0;
        assert!(run_setting_on(&cfg, &s, &t3).is_ok());
    }

    #[test]
    fn report_formats() {
        let dir = tempfile::tempdir().unwrap();
        let row = ReportRow {
            setting: Setting::Mmdtl2,
            fold: 0,
            dimension: 32,
            seed: 7,
            c_source: 1.0,
            c_target: 1.0,
            d_weight: 0.1,
            accuracy: 0.75,
            train_seconds: 0.5,
            test_seconds: 0.01,
        };
        let csv_path = dir.path().join("r.csv");
        emit_report(&[row.clone()], ReportFormat::Csv, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), "setting,fold,dimension,seed,c_source,c_target,d_weight,accuracy,train_seconds,test_seconds");

        let json_path = dir.path().join("r.json");
        let rows = vec![row.clone(), ReportRow { fold: 1, ..row }];
        emit_report(&rows, ReportFormat::Json, &json_path).unwrap();
        let back: Vec<ReportRow> = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(back, rows);

        assert!(emit_report::<ReportRow>(&[], ReportFormat::Json, &json_path).is_err());
        assert!(emit_report(&rows, ReportFormat::Json, Path::new("/nonexistent/dir/x.json")).is_err());
    }

    #[test]
    fn small_benchmark_agrees() {
        let cfg = BenchConfig {
            dims: vec![4],
            n_target: 10,
            n_source: 20,
            repeats: 1,
            ..Default::default()
        };
        let rows = benchmark_primal_vs_dual(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].w_agreement.unwrap() <= 1e-4);
        assert!(rows[1].calculation_seconds.is_none());
        let skip = benchmark_primal_vs_dual(&BenchConfig { primal_max_dim: 2, ..cfg }).unwrap();
        assert!(skip[1].skipped);
    }
}
