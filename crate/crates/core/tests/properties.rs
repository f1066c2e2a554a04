use proptest::prelude::*;
use replicated_annealing::anneal::{interaction_delta, run, AnnealSchedule, ChainState, Kernel, RunOptions};
use replicated_annealing::data::{read_results, write_results, CurvePoint, OutputFormat};
use replicated_annealing::energy::{generate_synthetic, EnergyModel, PerceptronEnergy, TableEnergy};
use replicated_annealing::exact::{
    build_kernel_matrix, detailed_balance_violation, enumerate_qbar, stationary_and_gap, ExactTables,
};
use replicated_annealing::experiments::{robustness_eval, PerturbationMode, RobustnessSpec};
use replicated_annealing::{FlipMove, ReplicaEnsemble};

fn table_strategy(max_n: usize) -> impl Strategy<Value = TableEnergy> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0u8..5, 1 << n)
            .prop_map(move |v| TableEnergy::new(n, v.into_iter().map(f64::from).collect()).unwrap())
    })
}

fn kernel_strategy() -> impl Strategy<Value = Kernel> {
    prop_oneof![Just(Kernel::Combined), Just(Kernel::TwoStage)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qbar_is_a_law_symmetric_in_replicas(table in table_strategy(3), y in 1usize..=3, beta in 0.0..3.0f64, gamma in 0.0..3.0f64) {
        let n = table.values().len().trailing_zeros() as usize;
        let q = ExactTables::new(&table, y, beta, gamma).unwrap().qbar;
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(q.iter().all(|&p| p > 0.0));
        // swapping the first two replicas leaves the law unchanged
        if y >= 2 {
            let mask = (1usize << n) - 1;
            for x in 0..q.len() {
                let (a, b) = (x & mask, x >> n & mask);
                let swapped = (x & !(mask | mask << n)) | b | a << n;
                prop_assert!((q[x] - q[swapped]).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn kernels_are_stochastic_and_reversible(
        table in table_strategy(3),
        y in 1usize..=2,
        beta in 0.0..4.0f64,
        gamma in 0.0..4.0f64,
        kernel in kernel_strategy(),
    ) {
        let q = enumerate_qbar(&table, y, beta, gamma).unwrap();
        prop_assert!(q.max_relative_gap() < 1e-10);
        let k = build_kernel_matrix(&table, y, beta, gamma, kernel).unwrap();
        prop_assert!(k.max_row_sum_error() < 1e-12);
        prop_assert!(detailed_balance_violation(&k, &q.folded) < 1e-12);
        let s = stationary_and_gap(&k, &q.folded).unwrap();
        prop_assert!(s.psi > 0.0 && s.psi <= 2.0 + 1e-12);
        prop_assert!((s.eigenvalues[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn interaction_delta_matches_recomputation(
        y in 1usize..6,
        n in 1usize..8,
        gamma in 0.0..5.0f64,
        seed in any::<u64>(),
        pick in any::<(usize, usize)>(),
    ) {
        let mut rng = replicated_annealing::rng::seeded(seed);
        let e = ReplicaEnsemble::random(y, n, &mut rng);
        let m = FlipMove::new(pick.0 % y, pick.1 % n);
        let h = |e: &ReplicaEnsemble| -> f64 {
            e.fields().iter().map(|&f| (gamma * f as f64).cosh().ln()).sum()
        };
        let mut after = e.clone();
        after.apply_flip(m).unwrap();
        prop_assert!((interaction_delta(&e, gamma, m).unwrap() - (h(&after) - h(&e))).abs() < 1e-9);
    }

    #[test]
    fn cached_energies_track_the_chain(seed in any::<u64>(), y in 1usize..4, gamma in 0.0..2.0f64, kernel in kernel_strategy()) {
        let model = PerceptronEnergy::new(generate_synthetic(12, 25, seed)).unwrap();
        let mut state = ChainState::random(&model, y, seed ^ 1);
        for _ in 0..400 {
            state.step(&model, 2.0, gamma, kernel);
        }
        prop_assert_eq!(state.energy_drift(&model), 0.0);
        let total: f64 = state.ensemble().replicas().iter().map(|r| model.energy(r)).sum();
        prop_assert_eq!(total, state.total_energy());
        prop_assert!(state.active_transitions() <= state.iteration());
    }

    #[test]
    fn curve_points_round_trip(p in 0.0..1.0f64, acc in 0.0..1.0f64, ci in 0.0..0.1f64, jsonl in any::<bool>()) {
        let row = CurvePoint {
            run_id: "r".into(),
            config_hash: "h".into(),
            gamma: 0.8,
            replica: 2,
            p,
            flips: 7,
            mean_accuracy: acc,
            ci_half_width: ci,
            repetitions: 300,
        };
        let dir = tempfile::tempdir().unwrap();
        let format = if jsonl { OutputFormat::Jsonl } else { OutputFormat::Csv };
        let path = dir.path().join("curve");
        write_results(std::slice::from_ref(&row), &path, format).unwrap();
        write_results(std::slice::from_ref(&row), &path, format).unwrap();
        let back: Vec<CurvePoint> = read_results(&path, format).unwrap();
        prop_assert_eq!(back.len(), 2);
        prop_assert!((back[1].mean_accuracy - acc).abs() <= 1e-5 * acc.max(1e-300));
        prop_assert_eq!(back[1].flips, 7);
    }
}

#[test]
fn robustness_curves_decrease_in_expectation() {
    let model = PerceptronEnergy::new(generate_synthetic(20, 61, 9)).unwrap();
    let schedule = AnnealSchedule::exponential(0.1, 1000.0, 30_000).unwrap();
    let (state, _) = run(&model, &schedule, &RunOptions::default(), 2).unwrap();
    let w = state.ensemble().replica(0).clone();
    assert_eq!(model.energy(&w), 0.0);
    let ps = vec![0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5];
    for mode in [PerturbationMode::ExactCount, PerturbationMode::Bernoulli] {
        let mut spec = RobustnessSpec::new(ps.clone(), 400);
        spec.mode = mode;
        let c = robustness_eval(&w, &model, &spec, 5).unwrap();
        for pair in c.windows(2) {
            assert!(pair[1].mean_accuracy <= pair[0].mean_accuracy + 2.0 * (pair[0].ci_half_width + pair[1].ci_half_width));
        }
    }
}
