use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::kernel::{interaction_delta_unchecked, Kernel};
use super::schedule::AnnealSchedule;
use crate::energy::EnergyModel;
use crate::error::Result;
use crate::rng::{self, ChainRng};
use crate::spin::{FlipMove, ReplicaEnsemble};

/// The replicated chain: ensemble, one energy cache per replica, and the rng.
#[derive(Debug, Clone)]
pub struct ChainState<M: EnergyModel> {
    ensemble: ReplicaEnsemble,
    caches: Vec<M::Cache>,
    energies: Vec<f64>,
    iteration: u64,
    active: u64,
    rng: ChainRng,
}

/// Outcome of one proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub proposal: FlipMove,
    pub delta_energy: f64,
    pub delta_interaction: f64,
    pub acceptance: f64,
    pub accepted: bool,
}

impl<M: EnergyModel> ChainState<M> {
    pub fn new(model: &M, ensemble: ReplicaEnsemble, rng: ChainRng) -> Result<Self> {
        for r in ensemble.replicas() {
            crate::energy::check_dim(model.dim(), r)?;
        }
        let caches: Vec<_> = ensemble.replicas().iter().map(|r| model.init_cache(r)).collect();
        let energies = caches.iter().map(|c| model.cached_energy(c)).collect();
        Ok(Self { ensemble, caches, energies, iteration: 0, active: 0, rng })
    }

    /// `y` i.i.d. uniform replicas drawn from `seed`'s stream; the same
    /// generator then drives the chain.
    pub fn random(model: &M, replicas: usize, seed: u64) -> Self {
        let mut rng = rng::seeded(seed);
        let ensemble = ReplicaEnsemble::random(replicas, model.dim(), &mut rng);
        Self::new(model, ensemble, rng).expect("random ensemble has the model's dimension")
    }

    pub fn ensemble(&self) -> &ReplicaEnsemble {
        &self.ensemble
    }

    /// Cached `E(s^a)` per replica.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn total_energy(&self) -> f64 {
        self.energies.iter().sum()
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn active_transitions(&self) -> u64 {
        self.active
    }

    pub fn rng_mut(&mut self) -> &mut ChainRng {
        &mut self.rng
    }

    /// Uniform `(a, i)` from one draw on `[0, yN)`: `a = k / N`, `i = k % N`.
    pub fn propose(&mut self) -> FlipMove {
        let n = self.ensemble.dim();
        let k = self.rng.gen_range(0..self.ensemble.replica_count() * n);
        FlipMove::new(k / n, k % n)
    }

    /// `(ΔE, ΔH)` for a move, without applying it.
    pub fn deltas(&self, model: &M, m: FlipMove, gamma: f64) -> Result<(f64, f64)> {
        self.ensemble.check_move(m)?;
        let replica = self.ensemble.replica(m.replica);
        let de = model.flip_delta(&self.caches[m.replica], replica, m.coordinate);
        let dh = interaction_delta_unchecked(&self.ensemble, gamma, m);
        Ok((de, dh))
    }

    pub fn acceptance(&self, model: &M, m: FlipMove, beta: f64, gamma: f64, kernel: Kernel) -> Result<f64> {
        let (de, dh) = self.deltas(model, m, gamma)?;
        Ok(kernel.acceptance(de, dh, beta))
    }

    /// Evaluates `m` and applies it when `uniform < acceptance`.
    pub fn step_move(
        &mut self,
        model: &M,
        m: FlipMove,
        beta: f64,
        gamma: f64,
        kernel: Kernel,
        uniform: f64,
    ) -> Result<StepOutcome> {
        let (de, dh) = self.deltas(model, m, gamma)?;
        let acceptance = kernel.acceptance(de, dh, beta);
        let accepted = uniform < acceptance;
        if accepted {
            self.apply(model, m);
        }
        self.iteration += 1;
        Ok(StepOutcome { proposal: m, delta_energy: de, delta_interaction: dh, acceptance, accepted })
    }

    /// One propose/accept cycle at fixed `(β, γ)`.
    pub fn step(&mut self, model: &M, beta: f64, gamma: f64, kernel: Kernel) -> StepOutcome {
        let m = self.propose();
        let u: f64 = self.rng.gen();
        self.step_move(model, m, beta, gamma, kernel, u).expect("proposals are in range")
    }

    /// One step at the schedule's `(β, γ)` for the current iteration.
    pub fn step_scheduled(&mut self, model: &M, schedule: &AnnealSchedule, kernel: Kernel) -> StepOutcome {
        let it = self.iteration.min(schedule.iterations());
        let beta = schedule.beta_unchecked(it);
        let gamma = schedule.gamma_unchecked(it);
        self.step(model, beta, gamma, kernel)
    }

    fn apply(&mut self, model: &M, m: FlipMove) {
        let replica = self.ensemble.replica(m.replica);
        model.commit_flip(&mut self.caches[m.replica], replica, m.coordinate);
        self.energies[m.replica] = model.cached_energy(&self.caches[m.replica]);
        self.ensemble.apply_flip(m).expect("move was checked");
        self.active += 1;
    }

    /// Largest |cached - recomputed| energy over replicas.
    pub fn energy_drift(&self, model: &M) -> f64 {
        self.ensemble
            .replicas()
            .iter()
            .zip(&self.energies)
            .map(|(r, &e)| (model.energy(r) - e).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub replicas: usize,
    pub kernel: Kernel,
    /// Record a trajectory point every this many iterations (and at the end).
    pub record_every: Option<u64>,
    /// Evaluate per-replica accuracy at each trajectory point.
    pub record_accuracy: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { replicas: 1, kernel: Kernel::Combined, record_every: None, record_accuracy: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub iteration: u64,
    pub total_energy: f64,
    pub accuracies: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunStats {
    pub iterations: u64,
    pub active_transitions: u64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub final_energies: Vec<f64>,
    pub final_accuracies: Vec<Option<f64>>,
    pub wall_clock: Duration,
}

impl PartialEq for RunStats {
    /// Wall-clock time is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.iterations == other.iterations
            && self.active_transitions == other.active_transitions
            && self.trajectory == other.trajectory
            && self.final_energies == other.final_energies
            && self.final_accuracies == other.final_accuracies
    }
}

impl RunStats {
    /// Index of the replica with the lowest final energy (first on ties).
    pub fn best_replica(&self) -> usize {
        let mut best = 0;
        for (a, &e) in self.final_energies.iter().enumerate() {
            if e < self.final_energies[best] {
                best = a;
            }
        }
        best
    }
}

fn snapshot<M: EnergyModel>(model: &M, state: &ChainState<M>, accuracy: bool) -> TrajectoryPoint {
    TrajectoryPoint {
        iteration: state.iteration,
        total_energy: state.total_energy(),
        accuracies: if accuracy {
            state.ensemble.replicas().iter().map(|r| model.accuracy(r)).collect()
        } else {
            Vec::new()
        },
    }
}

/// Anneals `opts.replicas` uniformly random replicas for the whole schedule.
pub fn run<M: EnergyModel>(
    model: &M,
    schedule: &AnnealSchedule,
    opts: &RunOptions,
    seed: u64,
) -> Result<(ChainState<M>, RunStats)> {
    schedule.validate()?;
    if opts.replicas == 0 {
        return Err(crate::Error::InvalidArgument("need at least one replica".into()));
    }
    let state = ChainState::random(model, opts.replicas, seed);
    Ok(run_from(model, schedule, opts, state))
}

/// Continues `state` for `schedule.iterations()` steps.
pub fn run_from<M: EnergyModel>(
    model: &M,
    schedule: &AnnealSchedule,
    opts: &RunOptions,
    mut state: ChainState<M>,
) -> (ChainState<M>, RunStats) {
    let start = Instant::now();
    let total = schedule.iterations();
    let first_active = state.active;
    let mut trajectory = Vec::new();
    let every = opts.record_every.filter(|&e| e > 0);
    if every.is_some() {
        trajectory.push(snapshot(model, &state, opts.record_accuracy));
    }
    for it in 0..total {
        let beta = schedule.beta_unchecked(it);
        let gamma = schedule.gamma_unchecked(it);
        state.step(model, beta, gamma, opts.kernel);
        if let Some(e) = every {
            if (it + 1) % e == 0 || it + 1 == total {
                trajectory.push(snapshot(model, &state, opts.record_accuracy));
            }
        }
    }
    let stats = RunStats {
        iterations: total,
        active_transitions: state.active - first_active,
        trajectory,
        final_energies: state.energies.clone(),
        final_accuracies: state.ensemble.replicas().iter().map(|r| model.accuracy(r)).collect(),
        wall_clock: start.elapsed(),
    };
    (state, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{generate_synthetic, PerceptronEnergy, TableEnergy};
    use crate::spin::SpinVector;

    #[test]
    fn single_site_always_proposes_origin() {
        let model = TableEnergy::new(1, vec![0.0, 1.0]).unwrap();
        let mut state = ChainState::random(&model, 1, 3);
        for _ in 0..100 {
            assert_eq!(state.propose(), FlipMove::new(0, 0));
        }
    }

    #[test]
    fn proposal_frequencies_are_uniform() {
        let model = TableEnergy::flat(10).unwrap();
        let mut state = ChainState::random(&model, 3, 17);
        let mut counts = vec![0u64; 30];
        let draws = 1_000_000u64;
        for _ in 0..draws {
            let m = state.propose();
            counts[m.replica * 10 + m.coordinate] += 1;
        }
        // 1% of 1/30 over 1e6 draws is about 1.9 standard deviations; allow
        // the stated ±1% band on the frequency itself.
        for c in counts {
            let f = c as f64 / draws as f64;
            assert!((f - 1.0 / 30.0).abs() < 0.01 * (1.0 / 30.0) * 3.0, "frequency {f}");
        }
    }

    #[test]
    fn same_seed_same_proposals() {
        let model = TableEnergy::flat(5).unwrap();
        let mut a = ChainState::random(&model, 2, 99);
        let mut b = ChainState::random(&model, 2, 99);
        for _ in 0..1000 {
            assert_eq!(a.propose(), b.propose());
        }
    }

    #[test]
    fn forced_accept_of_downhill_move_lowers_energy() {
        let model = TableEnergy::new(2, vec![3.0, 1.0, 2.0, 0.0]).unwrap();
        let ensemble = ReplicaEnsemble::new(vec![SpinVector::from_index(0, 2)]).unwrap();
        let mut state = ChainState::new(&model, ensemble, rng::seeded(0)).unwrap();
        let out = state.step_move(&model, FlipMove::new(0, 0), 1.0, 0.0, Kernel::Combined, 0.0).unwrap();
        assert!(out.accepted);
        assert!(out.delta_energy < 0.0);
        assert_eq!(state.total_energy(), 1.0);
        assert_eq!(state.active_transitions(), 1);
    }

    #[test]
    fn frozen_chain_absorbs_at_the_minimum() {
        // E(+1) = 0, E(-1) = 1; index 1 is +1
        let model = TableEnergy::new(1, vec![1.0, 0.0]).unwrap();
        for kernel in [Kernel::Combined, Kernel::TwoStage] {
            let mut state = ChainState::random(&model, 1, 5);
            for _ in 0..10 {
                state.step(&model, 1e6, 0.0, kernel);
            }
            assert_eq!(state.ensemble().replica(0).values(), &[1]);
            let active = state.active_transitions();
            for _ in 0..10_000 {
                state.step(&model, 1e6, 0.0, kernel);
            }
            assert_eq!(state.active_transitions(), active);
        }
    }

    #[test]
    fn zero_iterations_returns_initial_state() {
        let model = PerceptronEnergy::new(generate_synthetic(5, 11, 1)).unwrap();
        let schedule = AnnealSchedule::exponential(1.0, 2.0, 0).unwrap();
        let opts = RunOptions { replicas: 3, ..RunOptions::default() };
        let (state, stats) = run(&model, &schedule, &opts, 8).unwrap();
        assert_eq!(stats.active_transitions, 0);
        assert_eq!(state.ensemble(), ChainState::random(&model, 3, 8).ensemble());
    }

    #[test]
    fn runs_are_reproducible_and_caches_stay_exact() {
        let model = PerceptronEnergy::new(generate_synthetic(20, 51, 4)).unwrap();
        let schedule = AnnealSchedule::exponential(0.1, 10.0, 20_000).unwrap();
        let opts = RunOptions { replicas: 4, kernel: Kernel::TwoStage, record_every: Some(5000), record_accuracy: true };
        let (s1, r1) = run(&model, &schedule, &opts, 77).unwrap();
        let (s2, r2) = run(&model, &schedule, &opts, 77).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(s1.ensemble(), s2.ensemble());
        assert_eq!(s1.energy_drift(&model), 0.0);
        assert!(s1.ensemble().fields_consistent());
        assert_eq!(r1.trajectory.len(), 5);
        assert!(r1.active_transitions <= r1.iterations);
    }
}
