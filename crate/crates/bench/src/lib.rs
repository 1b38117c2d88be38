//! Fixtures shared by the criterion benches.

use adaptqp::adapt::theta_step;
use adaptqp::dataio::{gen_shifted, ShiftSpec};
use adaptqp::domain::{compute_pair_weights, PairWeightMode, PairWeights};
use adaptqp::svm::SvmOptions;
use adaptqp::{Dataset, HyperParams, Result, SvmModel, TransformMatrix, WStep};

/// Everything a `W`-step needs, owned so benches can borrow it repeatedly.
pub struct StepFixture {
    pub source: Dataset,
    pub target: Dataset,
    pub model: SvmModel,
    pub pair_weights: PairWeights,
    pub hp: HyperParams,
}

impl StepFixture {
    /// Shifted two-class data at `dim` with the classifier from the first θ-step.
    pub fn shifted(dim: usize, n_target: usize, n_source: usize, seed: u64) -> Result<Self> {
        let mut spec = ShiftSpec::random(dim, dim, seed)?;
        spec.target_per_class = n_target / 2;
        spec.source_per_class = n_source / 2;
        let (source, target) = gen_shifted(&spec)?;
        let hp = HyperParams::default();
        let pair_weights = compute_pair_weights(source.labels(), target.labels(), PairWeightMode::default())?;
        let model = theta_step(&source, &target, &TransformMatrix::zeros(dim, dim, false), &hp, &SvmOptions::default())?;
        Ok(StepFixture {
            source,
            target,
            model,
            pair_weights,
            hp,
        })
    }

    pub fn step(&self) -> WStep<'_> {
        WStep {
            source: &self.source,
            target: &self.target,
            model: &self.model,
            pair_weights: Some(&self.pair_weights),
            hp: &self.hp,
            augmented: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        let f = StepFixture::shifted(4, 10, 20, 1).unwrap();
        assert_eq!(f.target.len(), 10);
        assert_eq!(f.source.len(), 20);
        assert_eq!(f.model.n_classes(), 2);
        f.step().validate(1.0).unwrap();
    }
}
