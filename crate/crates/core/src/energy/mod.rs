//! Energy functions on `{-1, +1}^N` with incremental single-flip updates.

mod cross_entropy;
mod perceptron;
mod table;

pub use cross_entropy::{argmax_lowest, ClassifierDataset, CrossEntropyCache, CrossEntropyEnergy, Reduction};
pub use perceptron::{
    generate_synthetic, rectified_margin, Parity, PatternSet, PerceptronCache, PerceptronEnergy,
};
pub use table::{TableCache, TableEnergy};

use crate::spin::SpinVector;

/// An energy `E: {-1,+1}^N -> R` that supports O(cheap) single-flip deltas
/// through a per-configuration cache.
///
/// The cache belongs to one configuration; the chain keeps one per replica.
/// `flip_delta` must equal `energy(w with i flipped) - energy(w)` and
/// `commit_flip` is called with the configuration *before* the flip.
pub trait EnergyModel: Sync {
    type Cache: Clone + Send + std::fmt::Debug;

    fn dim(&self) -> usize;

    /// Full recomputation, independent of any cache.
    fn energy(&self, w: &SpinVector) -> f64;

    fn init_cache(&self, w: &SpinVector) -> Self::Cache;

    fn cached_energy(&self, cache: &Self::Cache) -> f64;

    fn flip_delta(&self, cache: &Self::Cache, w: &SpinVector, i: usize) -> f64;

    fn commit_flip(&self, cache: &mut Self::Cache, w: &SpinVector, i: usize);

    /// Classification accuracy of `w`, for models that have one.
    fn accuracy(&self, _w: &SpinVector) -> Option<f64> {
        None
    }
}

pub(crate) fn check_dim(expected: usize, w: &SpinVector) -> crate::Result<()> {
    if w.len() != expected {
        return Err(crate::Error::LengthMismatch { expected, actual: w.len() });
    }
    Ok(())
}
