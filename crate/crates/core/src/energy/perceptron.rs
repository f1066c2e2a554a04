//! Binary perceptron energy: the number of weight flips still needed to
//! classify each pattern, summed over patterns.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, EnergyModel};
use crate::error::{Error, Result};
use crate::spin::{dot, SpinVector};

/// Patterns `ξ^μ ∈ {-1,+1}^N` with labels `ϑ^μ ∈ {-1,+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSet {
    patterns: Vec<SpinVector>,
    labels: Vec<i8>,
}

impl PatternSet {
    pub fn new(patterns: Vec<SpinVector>, labels: Vec<i8>) -> Result<Self> {
        let first = patterns
            .first()
            .ok_or_else(|| Error::InvalidArgument("pattern set needs at least one pattern".into()))?;
        if labels.len() != patterns.len() {
            return Err(Error::LengthMismatch { expected: patterns.len(), actual: labels.len() });
        }
        for p in &patterns {
            check_dim(first.len(), p)?;
        }
        if let Some(&bad) = labels.iter().find(|&&l| l != 1 && l != -1) {
            return Err(Error::InvalidSpin(bad as i64));
        }
        Ok(Self { patterns, labels })
    }

    pub fn dim(&self) -> usize {
        self.patterns[0].len()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Load `M / N`.
    pub fn alpha(&self) -> f64 {
        self.len() as f64 / self.dim() as f64
    }

    pub fn patterns(&self) -> &[SpinVector] {
        &self.patterns
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }
}

/// `count` i.i.d. uniform patterns of length `dim` with i.i.d. uniform labels.
pub fn generate_synthetic(count: usize, dim: usize, seed: u64) -> PatternSet {
    let mut rng = crate::rng::seeded(seed);
    let patterns = (0..count).map(|_| SpinVector::random(dim, &mut rng)).collect();
    let labels = (0..count).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    PatternSet::new(patterns, labels).expect("generated patterns are well formed")
}

/// Which form of the rectifier applies; set by the parity of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// `R(x) = (x + 1)/2 · Θ(x)`
    Odd,
    /// `R(x) = x/2 · Θ(x)`
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Flips needed to correct a pattern whose negated signed margin is `x`.
pub fn rectified_margin(x: i64, parity: Parity) -> i64 {
    if x <= 0 {
        return 0;
    }
    match parity {
        Parity::Odd => (x + 1) / 2,
        Parity::Even => x / 2,
    }
}

/// `E(W) = Σ_μ R(-ϑ^μ <W, ξ^μ>)`.
#[derive(Debug, Clone)]
pub struct PerceptronEnergy {
    data: PatternSet,
    parity: Parity,
    /// `signed[i * M + μ] = ϑ^μ ξ^μ_i`, coordinate-major for flip deltas.
    signed: Vec<i8>,
}

/// Signed margins `ϑ^μ <W, ξ^μ>` and the resulting energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronCache {
    margins: Vec<i64>,
    energy: i64,
}

impl PerceptronCache {
    pub fn margins(&self) -> &[i64] {
        &self.margins
    }
}

impl PerceptronEnergy {
    pub fn new(data: PatternSet) -> Result<Self> {
        let parity = Parity::of(data.dim());
        Ok(Self::with_parity(data, parity))
    }

    pub fn with_parity(data: PatternSet, parity: Parity) -> Self {
        let (n, m) = (data.dim(), data.len());
        let mut signed = vec![0i8; n * m];
        for (mu, (p, &label)) in data.patterns.iter().zip(&data.labels).enumerate() {
            for (i, &v) in p.values().iter().enumerate() {
                signed[i * m + mu] = v * label;
            }
        }
        Self { data, parity, signed }
    }

    pub fn data(&self) -> &PatternSet {
        &self.data
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn margins(&self, w: &SpinVector) -> Result<Vec<i64>> {
        check_dim(self.data.dim(), w)?;
        Ok(self
            .data
            .patterns
            .iter()
            .zip(&self.data.labels)
            .map(|(p, &l)| l as i64 * dot(w.values(), p.values()))
            .collect())
    }

    pub fn perceptron_energy(&self, w: &SpinVector) -> Result<f64> {
        Ok(self.energy_from_margins(&self.margins(w)?) as f64)
    }

    /// Fraction of patterns with `Θ(ϑ<W, ξ>) = 1`, taking `Θ(0) = 1` so that a
    /// zero-margin pattern, which costs no energy, also counts as classified.
    /// Only even `N` can produce a zero margin.
    pub fn train_accuracy(&self, w: &SpinVector) -> Result<f64> {
        let margins = self.margins(w)?;
        Ok(margins.iter().filter(|&&m| m >= 0).count() as f64 / margins.len() as f64)
    }

    fn energy_from_margins(&self, margins: &[i64]) -> i64 {
        margins.iter().map(|&m| rectified_margin(-m, self.parity)).sum()
    }

    fn column(&self, i: usize) -> &[i8] {
        let m = self.data.len();
        &self.signed[i * m..(i + 1) * m]
    }
}

impl EnergyModel for PerceptronEnergy {
    type Cache = PerceptronCache;

    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn energy(&self, w: &SpinVector) -> f64 {
        self.perceptron_energy(w).expect("weight dimension matches the patterns")
    }

    fn init_cache(&self, w: &SpinVector) -> PerceptronCache {
        let margins = self.margins(w).expect("weight dimension matches the patterns");
        let energy = self.energy_from_margins(&margins);
        PerceptronCache { margins, energy }
    }

    fn cached_energy(&self, cache: &PerceptronCache) -> f64 {
        cache.energy as f64
    }

    fn flip_delta(&self, cache: &PerceptronCache, w: &SpinVector, i: usize) -> f64 {
        let wi = w.get(i) as i64;
        let mut delta = 0i64;
        for (&m, &s) in cache.margins.iter().zip(self.column(i)) {
            let next = m - 2 * wi * s as i64;
            delta += rectified_margin(-next, self.parity) - rectified_margin(-m, self.parity);
        }
        delta as f64
    }

    fn commit_flip(&self, cache: &mut PerceptronCache, w: &SpinVector, i: usize) {
        let wi = w.get(i) as i64;
        let mut energy = 0;
        for (m, &s) in cache.margins.iter_mut().zip(self.column(i)) {
            *m -= 2 * wi * s as i64;
            energy += rectified_margin(-*m, self.parity);
        }
        cache.energy = energy;
    }

    fn accuracy(&self, w: &SpinVector) -> Option<f64> {
        self.train_accuracy(w).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert_eq, proptest};
    use rand::Rng;

    fn sv(v: &[i8]) -> SpinVector {
        SpinVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rectifier_examples() {
        assert_eq!(rectified_margin(3, Parity::Odd), 2);
        assert_eq!(rectified_margin(-5, Parity::Odd), 0);
        assert_eq!(rectified_margin(4, Parity::Even), 2);
        assert_eq!(rectified_margin(0, Parity::Even), 0);
    }

    #[test]
    fn energy_examples() {
        let one = PerceptronEnergy::new(PatternSet::new(vec![sv(&[1, 1, 1])], vec![-1]).unwrap()).unwrap();
        assert_eq!(one.perceptron_energy(&sv(&[1, 1, 1])).unwrap(), 2.0);
        // W = ϑ ξ classifies its own pattern
        assert_eq!(one.perceptron_energy(&sv(&[-1, -1, -1])).unwrap(), 0.0);

        let two = PerceptronEnergy::new(
            PatternSet::new(vec![sv(&[1, 1, -1]), sv(&[1, -1, 1])], vec![1, -1]).unwrap(),
        )
        .unwrap();
        assert_eq!(two.perceptron_energy(&sv(&[1, 1, 1])).unwrap(), 1.0);
        assert!(two.perceptron_energy(&sv(&[1, 1])).is_err());
    }

    #[test]
    fn delta_examples() {
        // pattern (1,1,1) label -1; W = (1,1,-1): margin -ϑ<W,ξ> = 1, E = 1
        let model = PerceptronEnergy::new(PatternSet::new(vec![sv(&[1, 1, 1])], vec![-1]).unwrap()).unwrap();
        let w = sv(&[1, 1, -1]);
        let cache = model.init_cache(&w);
        assert_eq!(model.cached_energy(&cache), 1.0);
        assert_eq!(model.flip_delta(&cache, &w, 0), -1.0);

        // already solved and stays solved
        let w = sv(&[-1, -1, -1]);
        let cache = model.init_cache(&w);
        assert_eq!(model.flip_delta(&cache, &w, 2), 0.0);

        // delta(i) then delta(i) on the flipped state cancel
        let w = sv(&[1, 1, 1]);
        let mut cache = model.init_cache(&w);
        let d1 = model.flip_delta(&cache, &w, 1);
        model.commit_flip(&mut cache, &w, 1);
        let mut w2 = w.clone();
        w2.flip(1);
        let d2 = model.flip_delta(&cache, &w2, 1);
        assert_eq!(d1 + d2, 0.0);
    }

    #[test]
    fn zero_energy_iff_all_classified_exhaustive() {
        // odd N so that margins never vanish
        for n in [1usize, 3, 5] {
            for m in 1..=4usize {
                let data = generate_synthetic(m, n, (n * 10 + m) as u64);
                let model = PerceptronEnergy::new(data.clone()).unwrap();
                for code in 0..1usize << n {
                    let w = SpinVector::from_index(code, n);
                    let all = data
                        .patterns()
                        .iter()
                        .zip(data.labels())
                        .all(|(p, &l)| l as i64 * w.inner_product(p).unwrap() > 0);
                    let e = model.perceptron_energy(&w).unwrap();
                    assert!(e >= 0.0 && e.fract() == 0.0);
                    assert_eq!(e == 0.0, all);
                    assert_eq!(model.train_accuracy(&w).unwrap() == 1.0, all);
                }
            }
        }
    }

    #[test]
    fn even_dimension_ties_count_as_classified() {
        for n in [2usize, 4] {
            for m in 1..=4usize {
                let model = PerceptronEnergy::new(generate_synthetic(m, n, (n * 10 + m) as u64)).unwrap();
                for code in 0..1usize << n {
                    let w = SpinVector::from_index(code, n);
                    let e = model.perceptron_energy(&w).unwrap();
                    assert_eq!(e == 0.0, model.train_accuracy(&w).unwrap() == 1.0);
                }
            }
        }
        let tie = PatternSet::new(vec![SpinVector::new(vec![1, -1]).unwrap()], vec![1]).unwrap();
        let model = PerceptronEnergy::new(tie).unwrap();
        let w = SpinVector::ones(2);
        assert_eq!(model.margins(&w).unwrap(), vec![0]);
        assert_eq!(model.perceptron_energy(&w).unwrap(), 0.0);
        assert_eq!(model.train_accuracy(&w).unwrap(), 1.0);
    }

    #[test]
    fn synthetic_generation() {
        let a = generate_synthetic(30, 100, 5);
        let b = generate_synthetic(30, 100, 5);
        assert_eq!(a, b);
        assert_eq!(a.len(), 30);
        assert_eq!(a.dim(), 100);
        assert_ne!(a, generate_synthetic(30, 100, 6));

        let mut total = 0i64;
        let mut count = 0i64;
        for seed in 0..10_000u64 {
            let p = generate_synthetic(30, 100, seed);
            total += p.patterns().iter().flat_map(|s| s.values()).map(|&v| v as i64).sum::<i64>();
            count += 3000;
        }
        // sd of the mean is 1/sqrt(3e7) ≈ 1.8e-4
        assert!((total as f64 / count as f64).abs() < 0.02);
    }

    proptest! {
        #[test]
        fn deltas_match_recomputation(seed in any::<u64>(), n in 1usize..40, m in 1usize..20) {
            let model = PerceptronEnergy::new(generate_synthetic(m, n, seed)).unwrap();
            let mut rng = crate::rng::seeded(seed ^ 0xABCD);
            let mut w = SpinVector::random(n, &mut rng);
            let mut cache = model.init_cache(&w);
            for _ in 0..50 {
                let i = rng.gen_range(0..n);
                let d = model.flip_delta(&cache, &w, i);
                let before = model.energy(&w);
                model.commit_flip(&mut cache, &w, i);
                w.flip(i);
                prop_assert_eq!(model.energy(&w) - before, d);
                prop_assert_eq!(model.cached_energy(&cache), model.energy(&w));
                prop_assert_eq!(cache.margins(), &model.margins(&w).unwrap()[..]);
            }
        }
    }
}
