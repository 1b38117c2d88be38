//! Reading and writing feature files, plus synthetic generators.
//!
//! Two text formats are understood. CSV puts the label in the first column and
//! features in the rest; a header row is recognized by a non-numeric first
//! cell. SvmLight lines look like `label idx:val idx:val ...` with 1-based
//! indices, densified to the largest index in the file.
//!
//! Labels that are all positive integers are kept as class ids. Anything else
//! (`-1`/`+1`, strings) is remapped to `1..=K` in sorted order.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::domain::{Dataset, Domain};
use crate::error::{Error, Result};
use crate::numerics::{dot, spd_factorize, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureFormat {
    Csv,
    SvmLight,
}

impl FeatureFormat {
    /// Guesses from the file extension; anything that is not `.svm`,
    /// `.svmlight` or `.libsvm` is treated as CSV.
    pub fn from_path(path: &Path) -> FeatureFormat {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("svm" | "svmlight" | "libsvm") => FeatureFormat::SvmLight,
            _ => FeatureFormat::Csv,
        }
    }
}

impl std::str::FromStr for FeatureFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(FeatureFormat::Csv),
            "svmlight" | "libsvm" | "svm" => Ok(FeatureFormat::SvmLight),
            other => Err(Error::invalid(format!("unknown feature format '{other}'"))),
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value(cell: &str, line: usize) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_error(line, format!("'{}' is not a number", cell.trim())))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("non-finite value '{}'", cell.trim())));
    }
    Ok(v)
}

fn encode_labels(raw: Vec<String>) -> (Vec<usize>, usize) {
    let numeric: Option<Vec<usize>> = raw
        .iter()
        .map(|s| s.trim().parse::<usize>().ok().filter(|&v| v >= 1))
        .collect();
    if let Some(ids) = numeric {
        let k = ids.iter().copied().max().unwrap_or(1).max(2);
        return (ids, k);
    }
    let distinct: Vec<&str> = {
        let set: BTreeSet<&str> = raw.iter().map(|s| s.trim()).collect();
        let mut v: Vec<&str> = set.into_iter().collect();
        // numeric labels sort numerically so that -1 comes before +1
        if v.iter().all(|s| s.parse::<f64>().is_ok()) {
            v.sort_by(|a, b| a.parse::<f64>().unwrap().total_cmp(&b.parse::<f64>().unwrap()));
        }
        v
    };
    let ids = raw
        .iter()
        .map(|s| distinct.iter().position(|d| *d == s.trim()).unwrap() + 1)
        .collect();
    (ids, distinct.len().max(2))
}

/// Parses a dataset from a reader.
pub fn parse_features<R: Read>(reader: R, format: FeatureFormat, domain: Domain) -> Result<Dataset> {
    let (labels, rows) = match format {
        FeatureFormat::Csv => parse_csv_rows(reader)?,
        FeatureFormat::SvmLight => parse_svmlight_rows(BufReader::new(reader))?,
    };
    if rows.is_empty() {
        return Err(Error::invalid("feature file contains no samples"));
    }
    let (ids, k) = encode_labels(labels);
    Dataset::new(DenseMatrix::from_rows(&rows)?, ids, k, domain)
}

pub fn read_features(path: &Path, format: FeatureFormat, domain: Domain) -> Result<Dataset> {
    parse_features(File::open(path)?, format, domain)
}

fn parse_csv_rows<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        if std::mem::take(&mut first) && record.get(0).map_or(false, |c| c.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() < 2 {
            return Err(parse_error(line, "expected a label and at least one feature"));
        }
        if let Some(prev) = rows.first() {
            if prev.len() != record.len() - 1 {
                return Err(parse_error(
                    line,
                    format!("{} features, expected {}", record.len() - 1, prev.len()),
                ));
            }
        }
        let label = record.get(0).unwrap_or_default();
        if label.is_empty() {
            return Err(parse_error(line, "missing label"));
        }
        labels.push(label.to_string());
        rows.push(record.iter().skip(1).map(|c| parse_value(c, line)).collect::<Result<_>>()?);
    }
    Ok((labels, rows))
}

fn parse_svmlight_rows<R: BufRead>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut labels = Vec::new();
    let mut sparse: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_index = 0;
    for (n, line) in reader.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = tokens.next().unwrap_or_default();
        let mut entries = Vec::new();
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| parse_error(line_no, format!("expected idx:val, got '{tok}'")))?;
            let idx: usize = idx
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| parse_error(line_no, format!("bad feature index '{idx}'")))?;
            max_index = max_index.max(idx);
            entries.push((idx, parse_value(val, line_no)?));
        }
        labels.push(label.to_string());
        sparse.push(entries);
    }
    let rows = sparse
        .into_iter()
        .map(|entries| {
            let mut row = vec![0.0; max_index];
            for (idx, val) in entries {
                row[idx - 1] = val;
            }
            row
        })
        .collect();
    Ok((labels, rows))
}

/// Writes a dataset; reading it back yields the same features and labels.
pub fn write_features<W: Write>(ds: &Dataset, writer: W, format: FeatureFormat) -> Result<()> {
    match format {
        FeatureFormat::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            for (row, &label) in ds.features().row_iter().zip(ds.labels()) {
                let mut record = Vec::with_capacity(row.len() + 1);
                record.push(label.to_string());
                record.extend(row.iter().map(|v| v.to_string()));
                w.write_record(&record)?;
            }
            w.flush()?;
        }
        FeatureFormat::SvmLight => {
            let mut w = BufWriter::new(writer);
            let dim = ds.dim();
            for (row, &label) in ds.features().row_iter().zip(ds.labels()) {
                write!(w, "{label}")?;
                for (j, &v) in row.iter().enumerate() {
                    // the last index is always written so the dimension survives
                    if v != 0.0 || j + 1 == dim {
                        write!(w, " {}:{}", j + 1, v)?;
                    }
                }
                writeln!(w)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn save_features(ds: &Dataset, path: &Path, format: FeatureFormat) -> Result<()> {
    write_features(ds, File::create(path)?, format)
}

fn gaussian_cloud(rng: &mut ChaCha8Rng, mean: &[f64], spread: f64, count: usize) -> Vec<Vec<f64>> {
    let noise = Normal::new(0.0, spread).expect("spread is finite and non-negative");
    (0..count)
        .map(|_| mean.iter().map(|&m| m + noise.sample(rng)).collect())
        .collect()
}

fn two_domain_sets(
    source_rows: Vec<Vec<f64>>,
    source_labels: Vec<usize>,
    target_rows: Vec<Vec<f64>>,
    target_labels: Vec<usize>,
    k: usize,
) -> Result<(Dataset, Dataset)> {
    Ok((
        Dataset::new(DenseMatrix::from_rows(&source_rows)?, source_labels, k, Domain::Source)?,
        Dataset::new(DenseMatrix::from_rows(&target_rows)?, target_labels, k, Domain::Target)?,
    ))
}

pub const TOY_PER_CLASS: usize = 20;
pub const TOY_SPREAD: f64 = 0.4;

/// Two-class 2-D toy: source classes around (∓2, 0), target classes around (∓1, 3).
pub fn gen_toy_two_class(seed: u64) -> Result<(Dataset, Dataset)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source_means = [[-2.0, 0.0], [2.0, 0.0]];
    let target_means = [[-1.0, 3.0], [1.0, 3.0]];
    let mut src = Vec::new();
    let mut src_l = Vec::new();
    let mut tgt = Vec::new();
    let mut tgt_l = Vec::new();
    for (c, mean) in source_means.iter().enumerate() {
        src.extend(gaussian_cloud(&mut rng, mean, TOY_SPREAD, TOY_PER_CLASS));
        src_l.extend(std::iter::repeat(c + 1).take(TOY_PER_CLASS));
    }
    for (c, mean) in target_means.iter().enumerate() {
        tgt.extend(gaussian_cloud(&mut rng, mean, TOY_SPREAD, TOY_PER_CLASS));
        tgt_l.extend(std::iter::repeat(c + 1).take(TOY_PER_CLASS));
    }
    two_domain_sets(src, src_l, tgt, tgt_l, 2)
}

/// Parameters of the synthetic domain-shift generator.
///
/// `shift_map` is the ground-truth `M_S × M_T` transform: target samples are
/// drawn as `pinv(shift_map) z + noise` for a source-like draw `z`, so
/// `shift_map` carries them back to the source space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftSpec {
    pub dim_source: usize,
    pub dim_target: usize,
    pub class_means: DenseMatrix,
    pub class_spread: f64,
    pub shift_map: DenseMatrix,
    pub noise_sigma: f64,
    pub source_per_class: usize,
    pub target_per_class: usize,
    pub seed: u64,
}

pub const SHIFT_SOURCE_PER_CLASS: usize = 200;
pub const SHIFT_TARGET_PER_CLASS: usize = 90;
pub const SHIFT_MEAN_SEPARATION: f64 = 3.0;
pub const SHIFT_SPREAD: f64 = 1.0;
pub const SHIFT_NOISE: f64 = 0.1;

impl ShiftSpec {
    /// Two classes at `±separation/2` along a random unit direction and a random
    /// well-conditioned shift (orthogonal columns with gains in `[0.5, 2]`).
    pub fn random(dim_source: usize, dim_target: usize, seed: u64) -> Result<ShiftSpec> {
        if dim_source == 0 || dim_target == 0 {
            return Err(Error::invalid("dimensions must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
        let mut dir: Vec<f64> = (0..dim_source).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = dot(&dir, &dir).sqrt().max(f64::MIN_POSITIVE);
        dir.iter_mut().for_each(|v| *v *= 0.5 * SHIFT_MEAN_SEPARATION / norm);
        let neg: Vec<f64> = dir.iter().map(|v| -v).collect();
        let class_means = DenseMatrix::from_rows(&[neg, dir])?;

        let shift_map = random_shift(&mut rng, dim_source, dim_target)?;
        Ok(ShiftSpec {
            dim_source,
            dim_target,
            class_means,
            class_spread: SHIFT_SPREAD,
            shift_map,
            noise_sigma: SHIFT_NOISE,
            source_per_class: SHIFT_SOURCE_PER_CLASS,
            target_per_class: SHIFT_TARGET_PER_CLASS,
            seed,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.class_means.rows()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim_source == 0 || self.dim_target == 0 {
            return Err(Error::invalid("dimensions must be positive"));
        }
        if self.class_means.cols() != self.dim_source || self.class_means.rows() < 2 {
            return Err(Error::invalid("class_means must be K × dim_source with K ≥ 2"));
        }
        if self.shift_map.rows() != self.dim_source || self.shift_map.cols() != self.dim_target {
            return Err(Error::invalid("shift_map must be dim_source × dim_target"));
        }
        if !(self.class_spread > 0.0) || !(self.noise_sigma >= 0.0) {
            return Err(Error::invalid("spread must be positive and noise non-negative"));
        }
        if self.source_per_class == 0 || self.target_per_class == 0 {
            return Err(Error::invalid("per-class sample counts must be positive"));
        }
        let k = self.n_classes();
        for a in 0..k {
            for b in a + 1..k {
                if self.class_means.row(a) == self.class_means.row(b) {
                    return Err(Error::invalid(format!("class means {} and {} coincide", a + 1, b + 1)));
                }
            }
        }
        Ok(())
    }
}

/// Columns from Gram-Schmidt on Gaussian vectors, each scaled by a gain in `[0.5, 2]`.
fn random_shift(rng: &mut ChaCha8Rng, m_s: usize, m_t: usize) -> Result<DenseMatrix> {
    let tall = m_s >= m_t;
    let (long, short) = if tall { (m_s, m_t) } else { (m_t, m_s) };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(short);
    while basis.len() < short {
        let mut v: Vec<f64> = (0..long).map(|_| StandardNormal.sample(&mut *rng)).collect();
        for b in &basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    let gains: Vec<f64> = (0..short).map(|_| 2f64.powf(rand::Rng::gen_range(rng, -1.0..1.0))).collect();
    let mut a = DenseMatrix::zeros(m_s, m_t);
    for (c, (b, g)) in basis.iter().zip(&gains).enumerate() {
        for (r, &v) in b.iter().enumerate() {
            if tall {
                a[(r, c)] = g * v;
            } else {
                a[(c, r)] = g * v;
            }
        }
    }
    Ok(a)
}

/// Moore-Penrose pseudo-inverse of a full-rank matrix via its Gram matrix.
pub fn pseudo_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    if a.rows() >= a.cols() {
        // (AᵀA)⁻¹Aᵀ
        let gram = a.transpose().matmul(a);
        let f = spd_factorize(&gram).map_err(|_| Error::Degenerate("shift map is rank deficient".into()))?;
        Ok(f.solve_rows(a).transpose())
    } else {
        // Aᵀ(AAᵀ)⁻¹
        let gram = a.matmul_transposed(a);
        let f = spd_factorize(&gram).map_err(|_| Error::Degenerate("shift map is rank deficient".into()))?;
        Ok(f.solve_rows(&a.transpose()))
    }
}

pub fn gen_shifted(spec: &ShiftSpec) -> Result<(Dataset, Dataset)> {
    spec.validate()?;
    let pinv = pseudo_inverse(&spec.shift_map)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.n_classes();
    let mut src = Vec::new();
    let mut src_l = Vec::new();
    let mut tgt = Vec::new();
    let mut tgt_l = Vec::new();
    for c in 0..k {
        let mean = spec.class_means.row(c);
        src.extend(gaussian_cloud(&mut rng, mean, spec.class_spread, spec.source_per_class));
        src_l.extend(std::iter::repeat(c + 1).take(spec.source_per_class));
    }
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::invalid(e.to_string()))?;
    for c in 0..k {
        let mean = spec.class_means.row(c);
        for z in gaussian_cloud(&mut rng, mean, spec.class_spread, spec.target_per_class) {
            let mut x = pinv.matvec(&z);
            x.iter_mut().for_each(|v| *v += noise.sample(&mut rng));
            tgt.push(x);
        }
        tgt_l.extend(std::iter::repeat(c + 1).take(spec.target_per_class));
    }
    two_domain_sets(src, src_l, tgt, tgt_l, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::{distance_term, TransformMatrix, WStep};
    use crate::domain::{compute_pair_weights, HyperParams, PairWeightMode};
    use crate::svm::{train_ovr, SvmModel};
    use proptest::prelude::*;

    fn parse_str(s: &str, f: FeatureFormat) -> Result<Dataset> {
        parse_features(s.as_bytes(), f, Domain::Source)
    }

    #[test]
    fn csv_examples() {
        let ds = parse_str("1,0.5,2.0\n2,1.5,0.0", FeatureFormat::Csv).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.labels(), &[1, 2]);
        assert_eq!(ds.features().row(0), &[0.5, 2.0]);

        let ds = parse_str("label,a,b\r\n1,0.5,2.0\r\n2,1.5,0.0\r\n", FeatureFormat::Csv).unwrap();
        assert_eq!(ds.len(), 2);
    }

    #[test]
    fn csv_errors_carry_lines() {
        match parse_str("1,0.5,2.0\n2,1.5\n", FeatureFormat::Csv) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_str("1,0.5\n2,NaN\n", FeatureFormat::Csv) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_str("", FeatureFormat::Csv), Err(Error::InvalidArgument(_))));
        assert!(matches!(parse_str("", FeatureFormat::SvmLight), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn svmlight_examples() {
        let ds = parse_str("1 2:3.0\n2 1:1", FeatureFormat::SvmLight).unwrap();
        assert_eq!(ds.features().row(0), &[0.0, 3.0]);
        assert_eq!(ds.features().row(1), &[1.0, 0.0]);

        let ds = parse_str("-1 1:0.5 # comment\n+1 3:1\n", FeatureFormat::SvmLight).unwrap();
        assert_eq!(ds.labels(), &[1, 2]);
        assert_eq!(ds.dim(), 3);

        assert!(matches!(parse_str("1 0:3.0", FeatureFormat::SvmLight), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_str("1 1:3.0\n1 2:inf", FeatureFormat::SvmLight), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn string_labels_are_remapped() {
        let ds = parse_str("cat,1\ndog,2\ncat,3", FeatureFormat::Csv);
        // a non-numeric first cell reads as a header
        assert_eq!(ds.unwrap().labels(), &[2, 1]);
        let ds = parse_str("0,1\n5,1\n0,2\n5,3", FeatureFormat::Csv).unwrap();
        assert_eq!(ds.labels(), &[1, 2, 1, 2]);
    }

    fn dataset_strategy() -> impl Strategy<Value = Dataset> {
        (1usize..6, 1usize..10).prop_flat_map(|(dim, n)| {
            (
                proptest::collection::vec(prop_oneof![Just(0.0), -1e3f64..1e3], dim * n),
                proptest::collection::vec(1usize..=3, n),
            )
                .prop_map(move |(data, labels)| {
                    Dataset::new(DenseMatrix::from_vec(n, dim, data).unwrap(), labels, 3, Domain::Source).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn round_trip(ds in dataset_strategy()) {
            for format in [FeatureFormat::Csv, FeatureFormat::SvmLight] {
                let mut buf = Vec::new();
                write_features(&ds, &mut buf, format).unwrap();
                let back = parse_features(buf.as_slice(), format, Domain::Source).unwrap();
                prop_assert_eq!(back.labels(), ds.labels());
                prop_assert!(back.features().max_abs_diff(ds.features()) <= 1e-12);
                prop_assert_eq!(back.dim(), ds.dim());
            }
        }
    }

    #[test]
    fn toy_is_deterministic_and_separable() {
        let (s1, t1) = gen_toy_two_class(5).unwrap();
        let (s2, t2) = gen_toy_two_class(5).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(t1, t2);
        assert_eq!(s1.class_counts(), vec![20, 20]);
        assert_eq!(t1.class_counts(), vec![20, 20]);
        let model = train_ovr(s1.features(), s1.labels(), 2, &vec![1e3; s1.len()]).unwrap();
        for (x, &l) in s1.features().row_iter().zip(s1.labels()) {
            let v = model.decision_values(x).unwrap()[0];
            let y = if l == 1 { 1.0 } else { -1.0 };
            assert!(y * v >= 1.0 - 1e-6);
        }
    }

    #[test]
    fn shifted_defaults_and_identity_law() {
        let spec = ShiftSpec::random(8, 8, 3).unwrap();
        let (s, t) = gen_shifted(&spec).unwrap();
        assert_eq!((s.len(), t.len()), (400, 180));
        assert_eq!(gen_shifted(&spec).unwrap().1, t);

        let mut id = spec.clone();
        id.shift_map = DenseMatrix::identity(8);
        id.noise_sigma = 0.0;
        let (s, t) = gen_shifted(&id).unwrap();
        for c in 1..=2 {
            let mean = |ds: &Dataset| -> Vec<f64> {
                let rows: Vec<&[f64]> = ds.features().row_iter().zip(ds.labels()).filter(|(_, &l)| l == c).map(|(r, _)| r).collect();
                (0..8).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64).collect()
            };
            let (ms, mt) = (mean(&s), mean(&t));
            let bound = 3.0 * spec.class_spread / (spec.target_per_class as f64).sqrt()
                + 3.0 * spec.class_spread / (spec.source_per_class as f64).sqrt();
            for j in 0..8 {
                assert!((ms[j] - mt[j]).abs() <= bound);
            }
        }
    }

    #[test]
    fn true_shift_zeroes_distance_on_noiseless_data() {
        for (m_s, m_t) in [(4, 4), (3, 5), (5, 3)] {
            let mut spec = ShiftSpec::random(m_s, m_t, 11).unwrap();
            spec.noise_sigma = 0.0;
            spec.class_spread = 1e-9;
            spec.source_per_class = 6;
            spec.target_per_class = 4;
            let (s, t) = gen_shifted(&spec).unwrap();
            let pw = compute_pair_weights(s.labels(), t.labels(), PairWeightMode::ClassNormalized).unwrap();
            let model = SvmModel::new(DenseMatrix::zeros(2, m_s), vec![0.0, 0.0]).unwrap();
            let hp = HyperParams::default();
            let step = WStep { source: &s, target: &t, model: &model, pair_weights: Some(&pw), hp: &hp, augmented: false };
            let truth = distance_term(&step, &TransformMatrix::new(spec.shift_map.clone(), false).unwrap(), &pw).unwrap();
            let zero = distance_term(&step, &TransformMatrix::zeros(m_s, m_t, false), &pw).unwrap();
            // with M_S > M_T the class means need not lie in the range of the map
            if m_s <= m_t {
                assert!(truth <= 1e-12, "{truth}");
            }
            assert!(truth < zero);
        }
    }

    #[test]
    fn pseudo_inverse_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (r, c) in [(5, 3), (3, 5), (4, 4)] {
            let a = random_shift(&mut rng, r, c).unwrap();
            let p = pseudo_inverse(&a).unwrap();
            assert!(a.matmul(&p).matmul(&a).max_abs_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn format_guess() {
        assert_eq!(FeatureFormat::from_path(Path::new("a.svm")), FeatureFormat::SvmLight);
        assert_eq!(FeatureFormat::from_path(Path::new("a.csv")), FeatureFormat::Csv);
        assert_eq!("libsvm".parse::<FeatureFormat>().unwrap(), FeatureFormat::SvmLight);
    }
}
