use cyclic_core::adiabatic::{adiabatic_evolve_with, inverse_passage_with, PassageOptions, PassageResult, ScheduleFile};
use cyclic_core::dynamics::{
    entanglement_scan, evolve_cat, evolve_coherent, evolve_number_state, resonance_times, CatState,
};
use cyclic_core::format::sig17;
use cyclic_core::oracle::{bosonization_error, SectorBasis, SectorPropagator};
use cyclic_core::{ModeEvolution, ModeLabel, PolaritonBasis, TruncatedFockState};
use serde::Serialize;
use serde_json::{json, Value};

use crate::par::map_ordered;
use crate::scenario::{Dynamics, Initial, Run, Scenario};
use crate::Failure;

/// One table entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Count(u64),
    Value(f64),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Value(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Count(n as u64)
    }
}

/// A run's result: one table plus a few headline numbers.
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Value,
    /// Human-readable headline lines.
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
}

impl Report {
    fn table(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: json!({}),
            lines: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, row: impl IntoIterator<Item = f64>) {
        self.rows.push(row.into_iter().map(Cell::Value).collect());
    }
}

fn collect<T>(rows: Vec<Result<T, cyclic_core::Error>>) -> Result<Vec<T>, Failure> {
    rows.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

pub fn execute(scenario: &Scenario, jobs: usize) -> Result<Report, Failure> {
    scenario.validate()?;
    let initial = scenario.initial.as_ref();
    match &scenario.run {
        Run::Spectrum => spectrum(&scenario.model.dynamics()?),
        Run::Evolve { times } => {
            let dynamics = scenario.model.dynamics()?;
            let model = dynamics.as_evolution();
            let times = times.times();
            match initial.expect("validated") {
                Initial::Coherent { amps } => {
                    let mut report = Report::table(&[
                        "t", "re_alpha", "im_alpha", "re_beta", "im_beta", "re_zeta", "im_zeta", "re_eta", "im_eta",
                    ]);
                    for &t in &times {
                        let v = evolve_coherent(amps, model, t).as_array();
                        report.push(std::iter::once(t).chain(v.iter().flat_map(|z| [z.re, z.im])));
                    }
                    Ok(report)
                }
                Initial::Cat { mode, alpha, parity } => {
                    let cat = CatState::new(*mode, *alpha, *parity)?;
                    let mut report =
                        Report::table(&["t", "re_branch_a", "im_branch_a", "re_branch_b", "im_branch_b", "entropy_bits"]);
                    let rows = collect(map_ordered(&times, jobs, |&t| {
                        let out = evolve_cat(&cat, model, t)?;
                        let (a, b) = (out.plus.get(ModeLabel::PhotonA), out.plus.get(ModeLabel::PhotonB));
                        Ok(vec![t, a.re, a.im, b.re, b.im, out.analytic_entropy(&[ModeLabel::PhotonA])])
                    }))?;
                    rows.into_iter().for_each(|r| report.push(r));
                    Ok(report)
                }
                number => {
                    let occ = number.occupation().expect("number state");
                    let basis = SectorBasis::new(occ.iter().sum());
                    let mut columns = vec!["t".to_string()];
                    for o in basis.states() {
                        let label = format!("psi_{}_{}_{}_{}", o[0], o[1], o[2], o[3]);
                        columns.push(format!("re_{label}"));
                        columns.push(format!("im_{label}"));
                    }
                    let rows = collect(map_ordered(&times, jobs, |&t| {
                        let psi = evolve_number_state(&model.evolution_at(t), occ)?;
                        let mut row = vec![t];
                        for o in basis.states() {
                            let z = psi.amplitude(*o);
                            row.extend([z.re, z.im]);
                        }
                        Ok(row)
                    }))?;
                    let mut report = Report { columns, ..Report::table(&[]) };
                    rows.into_iter().for_each(|r| report.push(r));
                    Ok(report)
                }
            }
        }
        Run::EntanglementScan { times } => {
            let dynamics = scenario.model.dynamics()?;
            let occ = initial.and_then(Initial::occupation).expect("validated");
            let times = times.times();
            let rows = collect(map_ordered(&times, jobs, |&t| {
                entanglement_scan(dynamics.as_evolution(), occ[0], occ[1], &[t]).map(|v| v[0])
            }))?;
            let mut report = Report::table(&["t", "entropy_bits"]);
            let (mut t_max, mut e_max) = (f64::NAN, f64::NEG_INFINITY);
            for (t, e) in rows {
                if e > e_max {
                    (t_max, e_max) = (t, e);
                }
                report.push([t, e]);
            }
            report.summary = json!({ "max_entropy_bits": e_max, "t_at_max": t_max });
            report.lines.push(format!("max entropy {} bits at t = {}", sig17(e_max), sig17(t_max)));
            Ok(report)
        }
        Run::ResonanceTimes { count } => {
            let times = resonance_times(&scenario.model.coupling()?)?;
            let mut report = Report::table(&["k", "revival_time", "swap_time"]);
            for k in 0..*count {
                report.rows.push(vec![
                    k.into(),
                    times.revival.nth(k).into(),
                    times.swap.map_or(Cell::Missing, |s| s.nth(k).into()),
                ]);
            }
            report.lines.push(format!("Omega/R = {}/{}, base period {}", times.p, times.q, sig17(times.base_period)));
            report.lines.push(format!("first revival at t = {}", sig17(times.revival.first)));
            report.lines.push(match times.swap {
                Some(s) => format!("first swap at t = {}", sig17(s.first)),
                None => "no swap time (odd denominator)".to_string(),
            });
            report.summary = serde_json::to_value(&times).expect("serialisable");
            Ok(report)
        }
        Run::Adiabatic(passage) | Run::InverseAdiabatic(passage) => {
            let schedule = scenario.model.schedule()?;
            let occ = initial.and_then(Initial::occupation).expect("validated");
            let mut opts = PassageOptions { tune_phase: passage.tune_phase, ..Default::default() };
            opts.integrator.tol = passage.tol.unwrap_or(opts.integrator.tol);
            opts.integrator.max_steps = passage.max_steps.unwrap_or(opts.integrator.max_steps);
            let result = if matches!(scenario.run, Run::Adiabatic(_)) {
                adiabatic_evolve_with(occ[0], occ[1], &schedule, &opts)?
            } else {
                inverse_passage_with(occ[2], occ[3], &schedule, &opts)?
            };
            Ok(passage_report(&result))
        }
        Run::Bosonization { atom_numbers, s, times } => {
            let report_data = bosonization_error(atom_numbers, *s, &scenario.model.coupling()?, &times.times())?;
            let mut report = Report::table(&["n_atoms", "max_error", "t_at_max"]);
            for e in &report_data.entries {
                report.rows.push(vec![e.n_atoms.into(), e.max_error.into(), e.t_at_max.into()]);
            }
            for r in &report_data.ratios {
                report.lines.push(match r.ratio {
                    Some(x) => format!("err({})/err({}) = {}", r.n_atoms, 2 * r.n_atoms, sig17(x)),
                    None => format!(
                        "err({})/err({}) undefined: an error is below the 1e-12 round-off floor",
                        r.n_atoms,
                        2 * r.n_atoms
                    ),
                });
            }
            report.summary = serde_json::to_value(&report_data).expect("serialisable");
            Ok(report)
        }
        Run::OracleCompare { times } => {
            let cfg = scenario.model.coupling()?;
            let occ = initial.and_then(Initial::occupation).expect("validated");
            let s: usize = occ.iter().sum();
            let oracle = SectorPropagator::new(&cfg, s);
            let psi0 = TruncatedFockState::number_state(occ, TruncatedFockState::sector_cutoffs(s))?;
            let rows = collect(map_ordered(&times.times(), jobs, |&t| {
                let closed = evolve_number_state(&cfg.evolution_at(t), occ)?;
                let exact = oracle.propagate(&psi0, t)?;
                Ok((t, (1.0 - closed.fidelity(&exact)).max(0.0)))
            }))?;
            let mut report = Report::table(&["t", "fidelity_defect"]);
            let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
            rows.into_iter().for_each(|(t, d)| report.push([t, d]));
            report.summary = json!({ "max_fidelity_defect": worst });
            report.lines.push(format!("max fidelity defect {}", sig17(worst)));
            Ok(report)
        }
    }
}

fn spectrum(dynamics: &Dynamics) -> Result<Report, Failure> {
    let basis = match dynamics {
        Dynamics::Coupling(cfg) => PolaritonBasis::new(cfg)?,
        Dynamics::Limit(basis) => basis.clone(),
    };
    let eps = basis.eps();
    let mut report = Report::table(&["eps1", "eps2", "eps3", "eps4", "theta"]);
    report.push([eps[0], eps[1], eps[2], eps[3], basis.theta()]);
    for (i, e) in eps.iter().enumerate() {
        report.lines.push(format!("eps{} = {}", i + 1, sig17(*e)));
    }
    report.lines.push(format!("theta = {}", sig17(basis.theta())));
    Ok(report)
}

fn passage_report(r: &PassageResult) -> Report {
    let mut report = Report::table(&[
        "fidelity_vs_target",
        "fidelity_vs_exact",
        "prediction_vs_target",
        "dynamic_phase_integral",
        "eps1_phase_integral",
        "hold",
        "t_end",
    ]);
    report.push([
        r.fidelity_vs_target,
        r.fidelity_vs_exact,
        r.prediction_vs_target,
        r.dynamic_phase_integral,
        r.eps1_phase_integral,
        r.schedule.hold(),
        r.schedule.t_end(),
    ]);
    report.summary = json!({
        "fidelity_vs_target": r.fidelity_vs_target,
        "fidelity_vs_exact": r.fidelity_vs_exact,
        "prediction_vs_target": r.prediction_vs_target,
        "dynamic_phase_integral": r.dynamic_phase_integral,
        "eps1_phase_integral": r.eps1_phase_integral,
        "storage_grade": r.storage_grade,
        "schedule_run": ScheduleFile::from(&r.schedule),
    });
    report.lines.push(format!("fidelity vs target {}", sig17(r.fidelity_vs_target)));
    report.lines.push(format!("fidelity vs mode-following prediction {}", sig17(r.fidelity_vs_exact)));
    if !r.storage_grade {
        report.warnings.push("sweep endpoints are not storage-grade (|Omega| < 10 g_N)".to_string());
    }
    report
}
