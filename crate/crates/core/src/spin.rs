//! Spin vectors, replica ensembles and single-flip moves.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `{-1, +1}^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinVector(Vec<i8>);

impl SpinVector {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("spin vector must be non-empty".into()));
        }
        if let Some(&bad) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidSpin(bad as i64));
        }
        Ok(Self(values))
    }

    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "spin vector must be non-empty");
        Self(vec![1; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n > 0, "spin vector must be non-empty");
        Self((0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
    }

    /// Decodes `code` with bit `i` set meaning `s_i = +1`.
    pub fn from_index(code: usize, n: usize) -> Self {
        assert!(n > 0 && n < usize::BITS as usize);
        Self((0..n).map(|i| if code >> i & 1 == 1 { 1 } else { -1 }).collect())
    }

    /// Inverse of [`SpinVector::from_index`].
    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }

    pub fn inner_product(&self, other: &SpinVector) -> Result<i64> {
        check_len(self.len(), other.len())?;
        Ok(dot(&self.0, &other.0))
    }

    /// `(N - <x, z>) / 2`.
    pub fn hamming_distance(&self, other: &SpinVector) -> Result<usize> {
        let ip = self.inner_product(other)?;
        Ok(((self.len() as i64 - ip) / 2) as usize)
    }
}

impl TryFrom<Vec<i8>> for SpinVector {
    type Error = Error;

    fn try_from(values: Vec<i8>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SpinVector> for Vec<i8> {
    fn from(s: SpinVector) -> Self {
        s.0
    }
}

impl AsRef<[i8]> for SpinVector {
    fn as_ref(&self) -> &[i8] {
        &self.0
    }
}

pub(crate) fn dot(a: &[i8], b: &[i8]) -> i64 {
    a.iter().zip(b).map(|(&x, &z)| (x as i64) * (z as i64)).sum()
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Replica `a`, coordinate `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlipMove {
    pub replica: usize,
    pub coordinate: usize,
}

impl FlipMove {
    pub fn new(replica: usize, coordinate: usize) -> Self {
        Self { replica, coordinate }
    }
}

/// `y` coupled spin vectors together with the cached replica field
/// `fields[i] = Σ_a s^a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplicaEnsemble {
    replicas: Vec<SpinVector>,
    fields: Vec<i32>,
}

impl ReplicaEnsemble {
    pub fn new(replicas: Vec<SpinVector>) -> Result<Self> {
        let first = replicas
            .first()
            .ok_or_else(|| Error::InvalidArgument("ensemble needs at least one replica".into()))?;
        let n = first.len();
        for r in &replicas {
            check_len(n, r.len())?;
        }
        let fields = compute_fields(&replicas, n);
        Ok(Self { replicas, fields })
    }

    pub fn random<R: Rng + ?Sized>(y: usize, n: usize, rng: &mut R) -> Self {
        assert!(y > 0, "ensemble needs at least one replica");
        let replicas: Vec<_> = (0..y).map(|_| SpinVector::random(n, rng)).collect();
        let fields = compute_fields(&replicas, n);
        Self { replicas, fields }
    }

    /// Decodes an ensemble index `Σ_a code_a · 2^{aN}` (see
    /// [`SpinVector::from_index`] for the per-replica code).
    pub fn from_index(index: usize, n: usize, y: usize) -> Self {
        let mask = (1usize << n) - 1;
        let replicas: Vec<_> = (0..y)
            .map(|a| SpinVector::from_index(index >> (a * n) & mask, n))
            .collect();
        let fields = compute_fields(&replicas, n);
        Self { replicas, fields }
    }

    pub fn to_index(&self) -> usize {
        let n = self.dim();
        self.replicas
            .iter()
            .enumerate()
            .fold(0, |acc, (a, r)| acc | r.to_index() << (a * n))
    }

    pub fn dim(&self) -> usize {
        self.replicas[0].len()
    }

    pub fn replica_count(&self) -> usize {
        self.replicas.len()
    }

    pub fn replicas(&self) -> &[SpinVector] {
        &self.replicas
    }

    pub fn replica(&self, a: usize) -> &SpinVector {
        &self.replicas[a]
    }

    pub fn fields(&self) -> &[i32] {
        &self.fields
    }

    pub fn replica_field(&self, i: usize) -> Result<i32> {
        self.fields
            .get(i)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: i, len: self.dim() })
    }

    pub fn check_move(&self, m: FlipMove) -> Result<()> {
        if m.replica >= self.replica_count() {
            return Err(Error::IndexOutOfRange { index: m.replica, len: self.replica_count() });
        }
        if m.coordinate >= self.dim() {
            return Err(Error::IndexOutOfRange { index: m.coordinate, len: self.dim() });
        }
        Ok(())
    }

    /// Replica field at `m.coordinate` after the move would be applied.
    pub fn field_after(&self, m: FlipMove) -> i32 {
        self.fields[m.coordinate] - 2 * self.replicas[m.replica].get(m.coordinate) as i32
    }

    pub fn apply_flip(&mut self, m: FlipMove) -> Result<()> {
        self.check_move(m)?;
        self.fields[m.coordinate] = self.field_after(m);
        self.replicas[m.replica].flip(m.coordinate);
        Ok(())
    }

    /// Recomputes the fields and compares them with the cache.
    pub fn fields_consistent(&self) -> bool {
        compute_fields(&self.replicas, self.dim()) == self.fields
    }
}

fn compute_fields(replicas: &[SpinVector], n: usize) -> Vec<i32> {
    let mut fields = vec![0i32; n];
    for r in replicas {
        for (f, &v) in fields.iter_mut().zip(r.values()) {
            *f += v as i32;
        }
    }
    fields
}
