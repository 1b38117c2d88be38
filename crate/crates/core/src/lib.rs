//! Max-margin domain transfer between a source and a target feature space.
//!
//! The crate estimates a linear map `W` from target features into the
//! source feature space jointly with one-vs-rest linear SVMs. Two methods
//! are provided: plain max-margin transfer (`Mmdt`), whose transform only
//! minimizes `‖W‖_F` subject to hinge constraints, and the L2-regularized
//! variant (`Mmdtl2`) which additionally pulls transformed target samples
//! towards same-class source samples. The `W`-step of the latter is solved
//! either as a large primal QP or through its box-constrained dual, which
//! only needs one `M_T × M_T` Cholesky factorization.
//!
//! Module map:
//! - [`domain`]: datasets, labels, hyperparameters, pair weights
//! - [`numerics`]: dense matrices, Cholesky, the `vec`/`U`/`v` algebra
//! - [`qp`]: box-constrained coordinate descent and a dense interior point solver
//! - [`svm`]: one-vs-rest linear SVM (SMO with an exact bias)
//! - [`adapt`]: `W`-steps, dual construction, `w` recovery, alternating driver
//! - [`oracle`]: brute-force references and KKT audits for small instances
//! - [`dataio`]: CSV / SVMlight I/O and synthetic generators
//! - [`harness`]: cross-validation runs, timing benchmark, reports

pub mod adapt;
pub mod dataio;
pub mod domain;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod oracle;
pub mod qp;
pub mod svm;

pub use adapt::{alternate, AdaptOptions, AdaptOutcome, DualSystem, Method, TransformMatrix, WStep};
pub use domain::{
    binarize_labels, compute_pair_weights, Dataset, Domain, HyperParams, PairWeightMode, PairWeights,
};
pub use dataio::{FeatureFormat, ShiftSpec};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, ReportRow, Setting};
pub use numerics::{DenseMatrix, SpdFactorization};
pub use qp::{BoxQp, BoxQpSolution, InequalityQp, InequalitySolution};
pub use svm::SvmModel;
