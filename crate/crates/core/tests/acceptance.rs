use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cyclic_core::adiabatic::{
    adiabatic_evolve, decomposition_coefficients, distance_to_lattice, inverse_passage, photonic_basis,
    polariton_superposition, squared_binomial_coefficients, Schedule,
};
use cyclic_core::dynamics::{
    evolve_cat, evolve_coherent, evolve_fock, linspace, revival_fidelity, swap_fidelity, CatState, CoherentAmplitudes,
    Parity,
};
use cyclic_core::fock::entanglement_entropy;
use cyclic_core::oracle::{
    bosonization_error, coherent_first_moments, commutator_report, expm_propagate, mini_oracle_defect, SectorPropagator,
};
use cyclic_core::polariton::evolution_matrix_numeric;
use cyclic_core::{CouplingConfig, ModeEvolution, ModeLabel, PolaritonBasis, TruncatedFockState, C64};
use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collects every sub-check of a criterion so a failure reports all of them.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn random_config(rng: &mut ChaCha8Rng) -> CouplingConfig {
    CouplingConfig::new(rng.gen_range(0.2..3.0), rng.gen_range(-5.0..5.0), rng.gen_range(0.0..TAU)).unwrap()
}

fn max_abs(m: &Matrix4<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn diagonalization(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut diag_err, mut unit_err, mut closed_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let cfg = random_config(&mut rng);
        let basis = PolaritonBasis::new(&cfg).unwrap();
        let h = cyclic_core::single_particle_hamiltonian(&cfg);
        let m = basis.transform();
        let eps = basis.eps();
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| C64::new(eps[i], 0.0)));
        diag_err = diag_err.max(max_abs(&(m * h * m.adjoint() - d)));
        unit_err = unit_err.max(cfg.evolution_at(rng.gen_range(-50.0..50.0)).unitarity_defect());

        let real = CouplingConfig::real(cfg.g_n(), cfg.omega()).unwrap();
        let t = rng.gen_range(0.0..20.0);
        let closed = PolaritonBasis::new(&real).unwrap().closed_form_evolution(t);
        closed_err = closed_err.max(closed.max_abs_diff(&evolution_matrix_numeric(&real, t)));
    }
    c.check(diag_err < 1e-12, format!("M h M† − diag(ε) = {diag_err:.2e}"));
    c.check(unit_err < 1e-12, format!("F F† − I = {unit_err:.2e}"));
    c.check(closed_err < 1e-12, format!("closed form vs exp(−iht) = {closed_err:.2e}"));
    c.note(format!("diag {diag_err:.1e}, unitarity {unit_err:.1e}, closed form {closed_err:.1e}"));
}

fn noon_entanglement(c: &mut Checks) {
    let basis = PolaritonBasis::case_one_limit(1.0);
    let entropy = |phi3: f64| entanglement_entropy(&evolve_fock(&basis, 1, 1, phi3).unwrap(), &[ModeLabel::PhotonA]);
    let mut worst = 0.0f64;
    let mut expect = |phi3: f64, want: f64, c: &mut Checks| {
        let e = entropy(phi3);
        worst = worst.max((e - want).abs());
        c.check((e - want).abs() < 1e-9, format!("E({phi3:.6}) = {e:.12}, want {want:.10}"));
    };
    for k in 0..3 {
        let k = k as f64;
        expect((k + 0.25) * PI, 1.0, c);
        expect((k - 0.25) * PI, 1.0, c);
        expect(k * FRAC_PI_2, 0.0, c);
        for s2 in [(3.0 + 3f64.sqrt()) / 6.0, (3.0 - 3f64.sqrt()) / 6.0] {
            let base = s2.sqrt().asin();
            expect(k * PI + base, 3f64.log2(), c);
            expect(k * PI - base, 3f64.log2(), c);
        }
    }
    c.note(format!("max |E − target| = {worst:.1e}"));
}

fn oracle_equivalence(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let cfg = random_config(&mut rng);
        let t = rng.gen_range(0.0..30.0);
        for m in 0..=4usize {
            for n in 0..=(4 - m) {
                let closed = evolve_fock(&cfg, m, n, t).unwrap();
                let initial = TruncatedFockState::number_state([m, n, 0, 0], TruncatedFockState::sector_cutoffs(m + n))
                    .unwrap();
                let exact = expm_propagate(&initial, &cfg, t).unwrap();
                worst = worst.max(1.0 - closed.fidelity(&exact));
            }
        }
    }
    c.check(worst < 1e-10, format!("fidelity defect {worst:.2e}"));
    c.note(format!("max fidelity defect {worst:.1e}"));
}

fn revival_certificate(c: &mut Checks) {
    let cfg = CouplingConfig::real(1.0, 2.0 / 3f64.sqrt()).unwrap();
    let root3 = 3f64.sqrt();
    for (m, n) in [(1, 0), (1, 1), (2, 1)] {
        for k in 1..=3 {
            let t = TAU * root3 * k as f64;
            let f = revival_fidelity(&evolve_fock(&cfg, m, n, t).unwrap(), m, n);
            c.check((f - 1.0).abs() < 1e-10, format!("revival ({m},{n}) at 2π√3·{k}: {f:.12}"));
        }
        for k in 0..3 {
            let t = PI * root3 * (2 * k + 1) as f64;
            let f = swap_fidelity(&evolve_fock(&cfg, m, n, t).unwrap(), m, n);
            c.check((f - 1.0).abs() < 1e-10, format!("swap ({m},{n}) at π√3·{}: {f:.12}", 2 * k + 1));
        }
    }
    // p/q = 2/3: Ω = 2g·p/√(q² − p²).
    let cfg = CouplingConfig::real(1.0, 4.0 / 5f64.sqrt()).unwrap();
    let base = TAU / cfg.rabi_splitting();
    for (m, n) in [(1, 0), (2, 1)] {
        let best = linspace(0.0, 10.0 * base, 20_001)
            .into_iter()
            .map(|t| swap_fidelity(&evolve_fock(&cfg, m, n, t).unwrap(), m, n))
            .fold(0.0, f64::max);
        c.check(best < 1.0 - 1e-3, format!("p/q = 2/3 ({m},{n}) reaches swap fidelity {best:.6}"));
    }
}

fn coefficient_reconstruction(c: &mut Checks) {
    let mut worst = 0.0f64;
    let mut control_fails = 0;
    for m in 0..=4usize {
        for n in 0..=(4 - m) {
            let want = TruncatedFockState::number_state([m, n, 0, 0], TruncatedFockState::sector_cutoffs(m + n)).unwrap();
            let rebuilt =
                polariton_superposition(m, n, &decomposition_coefficients(m, n), &photonic_basis(), 0.0).unwrap();
            worst = worst.max(1.0 - want.fidelity(&rebuilt));
            let squared =
                polariton_superposition(m, n, &squared_binomial_coefficients(m, n), &photonic_basis(), 0.0).unwrap();
            let defect = 1.0 - want.fidelity(&squared) + (squared.norm() - 1.0).abs();
            if m >= 2 || n >= 2 {
                c.check(defect > 1e-3, format!("squared binomials reproduce |{m},{n}⟩"));
                control_fails += 1;
            }
        }
    }
    c.check(worst < 1e-12, format!("fidelity defect {worst:.2e}"));
    c.note(format!("max defect {worst:.1e}, negative control rejected on {control_fails} inputs"));
}

fn adiabatic_storage(c: &mut Checks) {
    let sweep = |duration: f64| Schedule::tanh(1.0, 20.0, -20.0, duration).unwrap().with_hold_tail(true);
    let mut summary = Vec::new();
    for (m, n) in [(1, 0), (0, 1), (1, 1)] {
        let short = adiabatic_evolve(m, n, &sweep(200.0)).unwrap();
        let long = adiabatic_evolve(m, n, &sweep(400.0)).unwrap();
        for r in [&short, &long] {
            let d = distance_to_lattice(r.dynamic_phase_integral);
            c.check(d < 1e-8, format!("({m},{n}) ∫ε₃ off the 2π lattice by {d:.2e}"));
        }
        c.check(short.fidelity_vs_target > 0.99, format!("storage ({m},{n}) fidelity {:.6}", short.fidelity_vs_target));
        c.check(
            long.fidelity_vs_target >= short.fidelity_vs_target - 1e-3,
            format!("({m},{n}) fidelity drops {:.6} → {:.6}", short.fidelity_vs_target, long.fidelity_vs_target),
        );
        summary.push(format!("({m},{n}) {:.4}/{:.4}", short.fidelity_vs_target, long.fidelity_vs_target));
    }
    let back = Schedule::tanh(1.0, -20.0, 20.0, 200.0).unwrap().with_hold_tail(true);
    for (na, nc) in [(1, 0), (0, 1), (1, 1)] {
        let r = inverse_passage(na, nc, &back).unwrap();
        c.check(r.fidelity_vs_target > 0.99, format!("retrieval ({na},{nc}) fidelity {:.6}", r.fidelity_vs_target));
        summary.push(format!("back ({na},{nc}) {:.4}", r.fidelity_vs_target));
    }
    c.note(summary.join(", "));
}

fn cat_transfer(c: &mut Checks) {
    let basis = PolaritonBasis::case_one_limit(1.0);
    let one = C64::new(1.0, 0.0);
    let cat = CatState::new(ModeLabel::PhotonA, one, Parity::Even).unwrap();
    let cut = Some([16, 16, 1, 1]);
    let out = evolve_cat(&cat, &basis, FRAC_PI_2).unwrap();
    let target = CatState::new(ModeLabel::PhotonB, C64::new(0.0, -1.0), Parity::Even).unwrap();
    let f = out.materialize(cut).unwrap().fidelity(&target.materialize(cut).unwrap());
    c.check(f > 1.0 - 1e-8, format!("transfer fidelity {f:.12}"));

    let out = evolve_cat(&cat, &basis, FRAC_PI_4).unwrap();
    let numeric = entanglement_entropy(&out.materialize(cut).unwrap(), &[ModeLabel::PhotonA]);
    let analytic = out.analytic_entropy(&[ModeLabel::PhotonA]);
    c.check((numeric - analytic).abs() < 1e-6, format!("entropy {numeric:.10} vs analytic {analytic:.10}"));
    c.note(format!("transfer defect {:.1e}, entropy {numeric:.6} vs {analytic:.6}", 1.0 - f));
}

fn bosonization_scaling(c: &mut Checks) {
    let cfg = CouplingConfig::real(1.0, 0.5).unwrap();
    let report = bosonization_error(&[20, 40], 1, &cfg, &linspace(0.0, TAU, 201)).unwrap();
    let errs: Vec<String> = report.entries.iter().map(|e| format!("err({}) = {:.2e}", e.n_atoms, e.max_error)).collect();
    match report.ratios.first().and_then(|r| r.ratio) {
        Some(ratio) => c.check((1.5..=2.5).contains(&ratio), format!("err(20)/err(40) = {ratio:.4}")),
        None => c.check(false, format!("err(20)/err(40) undefined: {}", errs.join(", "))),
    }
    for n in 1..=3 {
        let d = mini_oracle_defect(n).unwrap();
        c.check(d < 1e-13, format!("Dicke vs tensor operators at N = {n}: {d:.2e}"));
    }
    let comm = commutator_report(10).unwrap();
    c.check(comm.a_cdag < 1e-13, format!("‖[A, C†]‖ = {:.3e} at N = 10", comm.a_cdag));
    c.check(comm.tminus_adag < 1e-13, format!("‖[T⁻, A†] − C†‖ = {:.2e}", comm.tminus_adag));
    c.note(format!("{}, ‖[A,C†] + T⁻/N‖ = {:.1e}", errs.join(", "), comm.a_cdag_identity));
}

fn coherent_consistency(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..2 {
        let cfg = random_config(&mut rng);
        let prop = SectorPropagator::new(&cfg, 11);
        let raw: [C64; 4] = std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let amps = CoherentAmplitudes::from_array(raw);
        let amps = amps.scaled(C64::new(rng.gen_range(0.0..1.0) / amps.norm(), 0.0));
        for _ in 0..10 {
            let t = rng.gen_range(0.0..20.0);
            let d = coherent_first_moments(&prop, &amps, t).unwrap().max_abs_diff(&evolve_coherent(&amps, &cfg, t));
            worst = worst.max(d);
        }
    }
    c.check(worst < 1e-6, format!("first moments differ by {worst:.2e}"));
    c.note(format!("max deviation {worst:.1e}"));
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn(&mut Checks),
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, name: "polariton diagonalization", budget: Duration::from_secs(1), run: diagonalization },
    Criterion { id: 2, name: "two-photon entanglement", budget: Duration::from_secs(1), run: noon_entanglement },
    Criterion { id: 3, name: "oracle equivalence", budget: Duration::from_secs(5), run: oracle_equivalence },
    Criterion { id: 4, name: "revival and swap times", budget: Duration::from_secs(5), run: revival_certificate },
    Criterion { id: 5, name: "coefficient reconstruction", budget: Duration::from_secs(1), run: coefficient_reconstruction },
    Criterion { id: 6, name: "adiabatic storage", budget: Duration::from_secs(30), run: adiabatic_storage },
    Criterion { id: 7, name: "cat-state transfer", budget: Duration::from_secs(5), run: cat_transfer },
    Criterion { id: 8, name: "bosonization scaling", budget: Duration::from_secs(60), run: bosonization_scaling },
    Criterion { id: 9, name: "coherent amplitudes", budget: Duration::from_secs(10), run: coherent_consistency },
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected = CRITERIA.iter().filter(|c| {
        filters.is_empty() || filters.iter().any(|f| c.name.contains(f.as_str()) || c.id.to_string() == *f)
    });
    let mut failed = 0;
    for criterion in selected {
        let mut checks = Checks::default();
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (criterion.run)(&mut checks)));
        let elapsed = start.elapsed();
        if outcome.is_err() {
            checks.failures.push("panicked".into());
        }
        if elapsed > criterion.budget {
            checks.failures.push(format!("took {elapsed:.2?}, budget {:?}", criterion.budget));
        }
        let verdict = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} ({}): {verdict} [{elapsed:.2?}] {}", criterion.id, criterion.name, checks.notes.join("; "));
        for f in &checks.failures {
            println!("    - {f}");
        }
        failed += usize::from(!checks.failures.is_empty());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
