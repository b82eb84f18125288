use cyclic_core::adiabatic::{polariton_energies, Schedule};
use cyclic_core::dynamics::{coherent_state, evolve_coherent, evolve_fock, CoherentAmplitudes};
use cyclic_core::oracle::expm_propagate;
use cyclic_core::polariton::evolution_matrix_numeric;
use cyclic_core::{CouplingConfig, ModeEvolution, ModeLabel, PolaritonBasis, TruncatedFockState, C64};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = CouplingConfig> {
    (0.1f64..3.0, -6.0f64..6.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(g, omega, phi)| CouplingConfig::new(g, omega, phi).unwrap())
}

fn amplitudes() -> impl Strategy<Value = CoherentAmplitudes> {
    prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0))
        .prop_map(|v| CoherentAmplitudes::from_array(v.map(|(re, im)| C64::new(re, im))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(cfg in config(), t in -100.0f64..100.0) {
        prop_assert!(cfg.evolution_at(t).unitarity_defect() < 1e-12);
    }

    #[test]
    fn spectral_and_numeric_maps_agree(cfg in config(), t in -20.0f64..20.0) {
        prop_assert!(cfg.evolution_at(t).max_abs_diff(&evolution_matrix_numeric(&cfg, t)) < 1e-11);
    }

    #[test]
    fn evolution_composes(cfg in config(), t1 in -10.0f64..10.0, t2 in -10.0f64..10.0) {
        let joined = cfg.evolution_at(t1).compose(&cfg.evolution_at(t2));
        prop_assert!(joined.max_abs_diff(&cfg.evolution_at(t1 + t2)) < 1e-12);
    }

    #[test]
    fn frequencies_multiply_to_minus_g_squared(g in 0.05f64..5.0, omega in -1e4f64..1e4) {
        let (e1, e3) = polariton_energies(g, omega);
        prop_assert!(e1 >= 0.0 && e3 <= 0.0);
        prop_assert!((e1 * e3 + g * g).abs() < 1e-12 * g * g);
        prop_assert!((e1 + e3 - omega).abs() < 1e-12 * omega.abs().max(1.0));
    }

    #[test]
    fn fock_evolution_preserves_norm(cfg in config(), t in 0.0f64..50.0, m in 0usize..4, n in 0usize..4) {
        let psi = evolve_fock(&cfg, m, n, t).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
        prop_assert_eq!(psi.sector(), Some(m + n));
    }

    #[test]
    fn closed_form_matches_sector_exponential(cfg in config(), t in 0.0f64..30.0, m in 0usize..3, n in 0usize..3) {
        let initial = TruncatedFockState::number_state([m, n, 0, 0], TruncatedFockState::sector_cutoffs(m + n)).unwrap();
        let exact = expm_propagate(&initial, &cfg, t).unwrap();
        prop_assert!(1.0 - evolve_fock(&cfg, m, n, t).unwrap().fidelity(&exact) < 1e-10);
    }

    #[test]
    fn real_drive_is_mirror_symmetric(g in 0.1f64..3.0, omega in -5.0f64..5.0, t in 0.0f64..30.0, m in 0usize..3, n in 0usize..3) {
        let cfg = CouplingConfig::real(g, omega).unwrap();
        let direct = evolve_fock(&cfg, n, m, t).unwrap();
        let mirrored = evolve_fock(&cfg, m, n, t)
            .unwrap()
            .swap_modes(ModeLabel::PhotonA, ModeLabel::PhotonB)
            .swap_modes(ModeLabel::AtomA, ModeLabel::AtomC);
        prop_assert!(direct.distance(&mirrored) < 1e-12);
    }

    #[test]
    fn coherent_labels_keep_their_norm(cfg in config(), amps in amplitudes(), t in -50.0f64..50.0) {
        let out = evolve_coherent(&amps, &cfg, t);
        prop_assert!((out.norm() - amps.norm()).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_moments_are_the_labels(amps in amplitudes()) {
        let psi = coherent_state(&amps, [18; 4]).unwrap();
        for mode in ModeLabel::ALL {
            prop_assert!((psi.mean_lowering(mode) - amps.get(mode)).norm() < 1e-8);
        }
    }

    #[test]
    fn limit_bases_are_orthonormal(theta in -3.2f64..3.2, e1 in -5.0f64..5.0, e3 in -5.0f64..5.0, phi in 0.0f64..6.3) {
        let m = PolaritonBasis::from_parts(theta, e1, e3, phi).transform().clone();
        let defect = (m * m.adjoint() - nalgebra::Matrix4::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(defect < 1e-14);
    }

    #[test]
    fn state_json_round_trips(cfg in config(), t in 0.0f64..10.0, m in 0usize..3, n in 0usize..3) {
        let psi = evolve_fock(&cfg, m, n, t).unwrap();
        let back = TruncatedFockState::from_json(&psi.to_json().unwrap()).unwrap();
        prop_assert!(back.distance(&psi) < 1e-14);
        prop_assert_eq!(back.sector(), psi.sector());
    }

    #[test]
    fn schedule_json_round_trips(g in 0.1f64..3.0, a in 1.0f64..30.0, b in 1.0f64..30.0, dur in 1.0f64..500.0, hold in 0.0f64..10.0) {
        let s = Schedule::tanh(g, a, -b, dur).unwrap().with_hold(hold).unwrap();
        let back = Schedule::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}
