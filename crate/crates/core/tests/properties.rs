use msqw_core::model::{build_diagonal, generate_instance, solve_ground_state};
use msqw_core::num::Complex;
use msqw_core::propagate::{driver_propagate, hamiltonian_matrix, phase_propagate, qw_propagate};
use msqw_core::protocol::{
    gamma_sequence, map_gamma_to_qaoa, measure_metrics, run_msqw, run_qaoa, DecayKind, MsqwSchedule,
    QaoaSchedule,
};
use msqw_core::state::StateVector;
use msqw_core::Diagonal;
use proptest::prelude::*;

fn instance(n: usize, seed: u64) -> Diagonal {
    build_diagonal(&generate_instance(n, seed).unwrap())
}

fn normalized_state(n: usize, raw: &[(f64, f64)]) -> StateVector<f64> {
    let amps: Vec<Complex<f64>> = raw.iter().take(1 << n).map(|&(r, i)| Complex::new(r, i)).collect();
    StateVector::from_amplitudes(n, amps).unwrap().normalized()
}

fn raw_amps() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 64).prop_filter("nonzero", |v| {
        v.iter().take(4).any(|&(r, i)| r.abs() + i.abs() > 1e-3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagators_preserve_norm(
        n in 2usize..=6, seed in 0u64..1000, raw in raw_amps(),
        gamma in 0.0..4.0f64, t in 0.0..6.0f64, alpha in -3.0..3.0f64, beta in -3.0..3.0f64,
    ) {
        let diag = instance(n, seed);
        let psi = normalized_state(n, &raw);
        for out in [
            qw_propagate(&psi, &diag, gamma, t).unwrap(),
            driver_propagate(&psi, alpha).unwrap(),
            phase_propagate(&psi, &diag, beta).unwrap(),
        ] {
            prop_assert!((out.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn protocol_runs_preserve_norm_and_bound_metrics(
        n in 2usize..=6, seed in 0u64..1000,
        stages in prop::collection::vec((0.0..4.0f64, 0.0..1.0f64), 1..6),
    ) {
        let diag = instance(n, seed);
        let gs = solve_ground_state("x", &diag);
        let walk = run_msqw(&diag, &MsqwSchedule::from_pairs(&stages).unwrap()).unwrap();
        let qaoa = run_qaoa(&diag, &QaoaSchedule::from_pairs(&stages).unwrap()).unwrap();
        for out in [walk, qaoa] {
            prop_assert!((out.norm() - 1.0).abs() < 1e-10);
            let m = measure_metrics(&out, &diag, &gs);
            prop_assert!(m.energy >= gs.e0 - 1e-10 && m.energy <= diag.max_energy() + 1e-10);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&m.success_prob));
        }
    }

    #[test]
    fn plus_state_has_zero_problem_energy(n in 2usize..=10, seed in 0u64..10_000) {
        let diag = instance(n, seed);
        let plus = StateVector::<f64>::plus(n).unwrap();
        prop_assert!(diag.expectation(&plus).abs() < 1e-10);
    }

    #[test]
    fn stage_mapping_identities(gamma in 0.0..50.0f64, t in 0.0..10.0f64) {
        let (alpha, beta) = map_gamma_to_qaoa(gamma, t).unwrap();
        prop_assert!((alpha + beta - t).abs() <= 1e-12 * t.max(1.0));
        if beta > 0.0 {
            prop_assert!((alpha / beta - gamma).abs() <= 1e-12 * gamma.max(1.0));
        }
    }

    #[test]
    fn walk_stages_compose(
        n in 2usize..=5, seed in 0u64..1000, gamma in 0.0..4.0f64,
        t1 in 0.0..3.0f64, t2 in 0.0..3.0f64,
    ) {
        let diag = instance(n, seed);
        let s = StateVector::<f64>::plus(n).unwrap();
        let two = qw_propagate(&qw_propagate(&s, &diag, gamma, t1).unwrap(), &diag, gamma, t2).unwrap();
        let one = qw_propagate(&s, &diag, gamma, t1 + t2).unwrap();
        prop_assert!(two.distance(&one).unwrap() < 1e-9);
    }

    #[test]
    fn driver_and_phase_compose(
        n in 2usize..=5, seed in 0u64..1000, a1 in -2.0..2.0f64, a2 in -2.0..2.0f64,
    ) {
        let diag = instance(n, seed);
        let s = StateVector::<f64>::plus(n).unwrap();
        let phase = phase_propagate(&phase_propagate(&s, &diag, a1).unwrap(), &diag, a2).unwrap();
        prop_assert!(phase.distance(&phase_propagate(&s, &diag, a1 + a2).unwrap()).unwrap() < 1e-9);
        let basis = StateVector::<f64>::basis(n, seed as usize % (1 << n)).unwrap();
        let drv = driver_propagate(&driver_propagate(&basis, a1).unwrap(), a2).unwrap();
        prop_assert!(drv.distance(&driver_propagate(&basis, a1 + a2).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn hamiltonian_is_symmetric(n in 1usize..=6, seed in 0u64..1000, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let diag = if n == 1 {
            Diagonal::from_energies(1, vec![-0.3, 0.3]).unwrap()
        } else {
            instance(n, seed)
        };
        let h = hamiltonian_matrix(&diag, a, b);
        prop_assert_eq!(h.transpose(), h);
    }

    #[test]
    fn geometric_rates_decrease(g0 in 0.0..20.0f64, dg in 0.0..1.0f64, p in 1usize..50) {
        let seq = gamma_sequence(g0, dg, p, DecayKind::Geometric);
        prop_assert_eq!(seq.gammas.len(), p);
        prop_assert!(!seq.clamped);
        prop_assert!(seq.gammas.windows(2).all(|w| w[1] <= w[0] && w[1] >= 0.0));
    }

    #[test]
    fn linear_rates_are_clamped_non_negative(g0 in 0.0..5.0f64, dg in 0.0..1.0f64, p in 1usize..50) {
        let seq = gamma_sequence(g0, dg, p, DecayKind::Linear);
        prop_assert!(seq.gammas.iter().all(|&g| g >= 0.0));
        prop_assert!(seq.gammas.windows(2).all(|w| w[1] <= w[0]));
        let last = g0 - (p - 1) as f64 * dg / g0;
        prop_assert_eq!(seq.clamped, g0 > 0.0 && last < 0.0);
    }
}
