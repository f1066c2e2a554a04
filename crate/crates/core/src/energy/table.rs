use super::EnergyModel;
use crate::error::{Error, Result};
use crate::spin::SpinVector;

/// An explicit energy table over all `2^N` configurations, indexed by
/// [`SpinVector::to_index`]. Used for crafted landscapes in exact analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct TableEnergy {
    n: usize,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct TableCache {
    index: usize,
}

impl TableEnergy {
    pub const MAX_DIM: usize = 20;

    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > Self::MAX_DIM {
            return Err(Error::SizeLimit { what: "N", value: n, limit: Self::MAX_DIM });
        }
        if values.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, actual: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("energies must be finite".into()));
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(&SpinVector) -> f64) -> Result<Self> {
        let values = (0..1usize << n).map(|c| f(&SpinVector::from_index(c, n))).collect();
        Self::new(n, values)
    }

    /// Tabulates any other model.
    pub fn tabulate<M: EnergyModel>(model: &M) -> Result<Self> {
        Self::from_fn(model.dim(), |w| model.energy(w))
    }

    pub fn flat(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; 1 << n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, code: usize) -> f64 {
        self.values[code]
    }
}

impl EnergyModel for TableEnergy {
    type Cache = TableCache;

    fn dim(&self) -> usize {
        self.n
    }

    fn energy(&self, w: &SpinVector) -> f64 {
        self.values[w.to_index()]
    }

    fn init_cache(&self, w: &SpinVector) -> TableCache {
        TableCache { index: w.to_index() }
    }

    fn cached_energy(&self, cache: &TableCache) -> f64 {
        self.values[cache.index]
    }

    fn flip_delta(&self, cache: &TableCache, _w: &SpinVector, i: usize) -> f64 {
        self.values[cache.index ^ 1 << i] - self.values[cache.index]
    }

    fn commit_flip(&self, cache: &mut TableCache, _w: &SpinVector, i: usize) {
        cache.index ^= 1 << i;
    }
}
