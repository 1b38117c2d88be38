//! Datasets, labels, hyperparameters and source/target pair weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Source,
    Target,
}

/// Feature rows with dense 1-based class ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: DenseMatrix,
    labels: Vec<usize>,
    n_classes: usize,
    domain: Domain,
}

impl Dataset {
    pub fn new(features: DenseMatrix, labels: Vec<usize>, n_classes: usize, domain: Domain) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::invalid(format!(
                "{} feature rows but {} labels",
                features.rows(),
                labels.len()
            )));
        }
        if features.rows() == 0 {
            return Err(Error::invalid("dataset has no samples"));
        }
        if features.cols() == 0 {
            return Err(Error::invalid("feature dimension must be at least 1"));
        }
        if n_classes < 2 {
            return Err(Error::invalid(format!("need at least 2 classes, got {n_classes}")));
        }
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l == 0 || l > n_classes) {
            return Err(Error::invalid(format!(
                "label {l} of sample {i} is outside 1..={n_classes}"
            )));
        }
        // DenseMatrix already guarantees finite entries.
        Ok(Dataset {
            features,
            labels,
            n_classes,
            domain,
        })
    }

    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    /// Subset by sample index, keeping class count and domain.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        Dataset::new(
            self.features.select_rows(indices),
            indices.iter().map(|&i| self.labels[i]).collect(),
            self.n_classes,
            self.domain,
        )
    }

    /// Same samples with a larger class count (to harmonize two datasets).
    pub fn with_n_classes(self, n_classes: usize) -> Result<Dataset> {
        Dataset::new(self.features, self.labels, n_classes, self.domain)
    }

    /// Sample counts per class, index `k - 1` for class `k`.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &l in &self.labels {
            counts[l - 1] += 1;
        }
        counts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    /// Slack penalty on source hinge terms.
    pub c_source: f64,
    /// Slack penalty on target hinge terms.
    pub c_target: f64,
    /// Weight of the L2 distance term.
    pub d_weight: f64,
    pub max_outer_iters: usize,
    /// Relative Frobenius change of `W` that stops the alternation.
    pub w_tol: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            c_source: 1.0,
            c_target: 1.0,
            d_weight: 1.0,
            max_outer_iters: 5,
            w_tol: 1e-3,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_source > 0.0 && self.c_source.is_finite()) {
            return Err(Error::invalid("c_source must be positive"));
        }
        if !(self.c_target > 0.0 && self.c_target.is_finite()) {
            return Err(Error::invalid("c_target must be positive"));
        }
        if !(self.d_weight >= 0.0 && self.d_weight.is_finite()) {
            return Err(Error::invalid("d_weight must be non-negative"));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::invalid("max_outer_iters must be positive"));
        }
        if !(self.w_tol > 0.0) {
            return Err(Error::invalid("w_tol must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairWeightMode {
    /// 1 for every same-class (target, source) pair.
    Indicator,
    /// `1 / (n_T^k n_S^k)` per same-class pair, so every class carries total weight 1.
    #[default]
    ClassNormalized,
}

/// Non-negative weights between target sample `i` (row) and source sample `j` (column).
#[derive(Debug, Clone, PartialEq)]
pub struct PairWeights {
    weights: DenseMatrix,
    row_sums: Vec<f64>,
}

impl PairWeights {
    pub fn new(weights: DenseMatrix) -> Result<Self> {
        if weights.as_slice().iter().any(|&w| w < 0.0) {
            return Err(Error::invalid("pair weights must be non-negative"));
        }
        let row_sums = weights.row_iter().map(|r| r.iter().sum()).collect();
        Ok(PairWeights { weights, row_sums })
    }

    pub fn weights(&self) -> &DenseMatrix {
        &self.weights
    }

    pub fn weight(&self, target: usize, source: usize) -> f64 {
        self.weights[(target, source)]
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn n_target(&self) -> usize {
        self.weights.rows()
    }

    pub fn n_source(&self) -> usize {
        self.weights.cols()
    }
}

/// ±1 one-vs-rest encoding of class `k`.
pub fn binarize_labels(labels: &[usize], k: usize, n_classes: usize) -> Result<Vec<f64>> {
    if k == 0 || k > n_classes {
        return Err(Error::invalid(format!("class {k} is outside 1..={n_classes}")));
    }
    Ok(labels.iter().map(|&l| if l == k { 1.0 } else { -1.0 }).collect())
}

pub fn compute_pair_weights(
    source_labels: &[usize],
    target_labels: &[usize],
    mode: PairWeightMode,
) -> Result<PairWeights> {
    if source_labels.is_empty() || target_labels.is_empty() {
        return Err(Error::invalid("pair weights need non-empty label vectors"));
    }
    let n_classes = source_labels
        .iter()
        .chain(target_labels)
        .copied()
        .max()
        .unwrap_or(0);
    let mut src_counts = vec![0usize; n_classes + 1];
    let mut tgt_counts = vec![0usize; n_classes + 1];
    source_labels.iter().for_each(|&l| src_counts[l] += 1);
    target_labels.iter().for_each(|&l| tgt_counts[l] += 1);

    let mut weights = DenseMatrix::zeros(target_labels.len(), source_labels.len());
    for (i, &lt) in target_labels.iter().enumerate() {
        let value = match mode {
            PairWeightMode::Indicator => 1.0,
            PairWeightMode::ClassNormalized => 1.0 / (tgt_counts[lt] * src_counts[lt].max(1)) as f64,
        };
        let row = weights.row_mut(i);
        for (j, &ls) in source_labels.iter().enumerate() {
            if ls == lt {
                row[j] = value;
            }
        }
    }
    PairWeights::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binarize_examples() {
        assert_eq!(binarize_labels(&[1, 2, 1], 1, 2).unwrap(), vec![1.0, -1.0, 1.0]);
        assert_eq!(binarize_labels(&[1, 2, 1], 2, 2).unwrap(), vec![-1.0, 1.0, -1.0]);
        assert_eq!(binarize_labels(&[3, 3, 3], 3, 3).unwrap(), vec![1.0, 1.0, 1.0]);
        assert!(binarize_labels(&[1, 2], 3, 2).is_err());
        assert!(binarize_labels(&[1, 2], 0, 2).is_err());
    }

    #[test]
    fn pair_weight_examples() {
        let pw = compute_pair_weights(&[1, 2], &[1], PairWeightMode::Indicator).unwrap();
        assert_eq!(pw.weights().as_slice(), &[1.0, 0.0]);

        let pw = compute_pair_weights(&[1, 1], &[1], PairWeightMode::ClassNormalized).unwrap();
        assert_eq!(pw.weights().as_slice(), &[0.5, 0.5]);

        let pw = compute_pair_weights(&[1, 2, 2], &[2, 2], PairWeightMode::ClassNormalized).unwrap();
        assert_eq!(pw.weights().as_slice(), &[0.0, 0.25, 0.25, 0.0, 0.25, 0.25]);
        assert_eq!(pw.row_sums(), &[0.5, 0.5]);

        assert!(compute_pair_weights(&[], &[1], PairWeightMode::Indicator).is_err());
        assert!(compute_pair_weights(&[1], &[], PairWeightMode::Indicator).is_err());
    }

    #[test]
    fn dataset_invariants() {
        let f = DenseMatrix::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(Dataset::new(f.clone(), vec![1, 2], 2, Domain::Source).is_ok());
        assert!(Dataset::new(f.clone(), vec![1], 2, Domain::Source).is_err());
        assert!(Dataset::new(f.clone(), vec![1, 3], 2, Domain::Source).is_err());
        assert!(Dataset::new(f.clone(), vec![1, 1], 1, Domain::Source).is_err());
        assert!(Dataset::new(DenseMatrix::zeros(2, 0), vec![1, 2], 2, Domain::Source).is_err());
    }

    #[test]
    fn hyperparam_validation() {
        assert!(HyperParams::default().validate().is_ok());
        let bad = HyperParams { c_target: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = HyperParams { d_weight: -1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn binarize_partitions(labels in proptest::collection::vec(1usize..=4, 1..40)) {
            let positives: usize = (1..=4)
                .map(|k| binarize_labels(&labels, k, 4).unwrap().iter().filter(|&&y| y > 0.0).count())
                .sum();
            prop_assert_eq!(positives, labels.len());
        }

        #[test]
        fn class_normalized_weights(
            src in proptest::collection::vec(1usize..=3, 1..25),
            tgt in proptest::collection::vec(1usize..=3, 1..15),
        ) {
            let norm = compute_pair_weights(&src, &tgt, PairWeightMode::ClassNormalized).unwrap();
            let ind = compute_pair_weights(&src, &tgt, PairWeightMode::Indicator).unwrap();
            for k in 1..=3 {
                let mut total = 0.0;
                for (i, &lt) in tgt.iter().enumerate() {
                    for (j, &ls) in src.iter().enumerate() {
                        if lt == k && ls == k {
                            total += norm.weight(i, j);
                        }
                    }
                }
                let present = src.contains(&k) && tgt.contains(&k);
                if present {
                    prop_assert!((total - 1.0).abs() <= 1e-12);
                }
            }
            for (a, b) in norm.weights().as_slice().iter().zip(ind.weights().as_slice()) {
                prop_assert_eq!(*a == 0.0, *b == 0.0);
            }
            for (i, s) in norm.row_sums().iter().enumerate() {
                let direct: f64 = norm.weights().row(i).iter().sum();
                prop_assert!((s - direct).abs() <= 1e-12);
            }
        }
    }
}
