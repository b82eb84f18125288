//! Scenario files: what to simulate, from which initial state, and where to
//! write the result.

use std::path::{Path, PathBuf};

use cyclic_core::adiabatic::{Schedule, ScheduleFile};
use cyclic_core::dynamics::{linspace, photon_only_condition, CatState, CoherentAmplitudes, Parity};
use cyclic_core::{CouplingConfig, ModeEvolution, ModeLabel, PolaritonBasis, C64};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Initial>,
    pub run: Run,
    #[serde(default)]
    pub output: Output,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Model {
    Coupling {
        #[serde(rename = "g_N")]
        g_n: f64,
        omega: f64,
        #[serde(default)]
        phi: f64,
    },
    /// `Ω/g_N → +∞` with only `ε₃` left.
    CaseOneLimit { eps3: f64 },
    Schedule(ScheduleFile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    Fock { m: usize, n: usize },
    Fock4 { occupation: [usize; 4] },
    Coherent { amps: CoherentAmplitudes },
    Cat { mode: ModeLabel, alpha: C64, parity: Parity },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default)]
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Run {
    Spectrum,
    Evolve { times: TimeGrid },
    EntanglementScan { times: TimeGrid },
    ResonanceTimes { count: usize },
    Adiabatic(Passage),
    InverseAdiabatic(Passage),
    Bosonization { atom_numbers: Vec<usize>, s: usize, times: TimeGrid },
    OracleCompare { times: TimeGrid },
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Passage {
    /// Add the hold that puts `∫ε₃ dt` on the `2π` lattice.
    #[serde(default = "yes")]
    pub tune_phase: bool,
    /// Integrator error target; the library default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

impl Default for Passage {
    fn default() -> Self {
        Self { tune_phase: true, tol: None, max_steps: None }
    }
}

impl Run {
    pub fn name(&self) -> &'static str {
        match self {
            Run::Spectrum => "spectrum",
            Run::Evolve { .. } => "evolve",
            Run::EntanglementScan { .. } => "entanglement_scan",
            Run::ResonanceTimes { .. } => "resonance_times",
            Run::Adiabatic(_) => "adiabatic",
            Run::InverseAdiabatic(_) => "inverse_adiabatic",
            Run::Bosonization { .. } => "bosonization",
            Run::OracleCompare { .. } => "oracle_compare",
        }
    }

    pub fn grid(&self) -> Option<&TimeGrid> {
        match self {
            Run::Evolve { times }
            | Run::EntanglementScan { times }
            | Run::Bosonization { times, .. }
            | Run::OracleCompare { times } => Some(times),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Absent: write to standard output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// A model ready to propagate with.
pub enum Dynamics {
    Coupling(CouplingConfig),
    Limit(PolaritonBasis),
}

impl Dynamics {
    pub fn as_evolution(&self) -> &(dyn ModeEvolution + Sync) {
        match self {
            Dynamics::Coupling(cfg) => cfg,
            Dynamics::Limit(basis) => basis,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

impl Model {
    pub fn dynamics(&self) -> Result<Dynamics, Failure> {
        match *self {
            Model::Coupling { g_n, omega, phi } => Ok(Dynamics::Coupling(CouplingConfig::new(g_n, omega, phi)?)),
            Model::CaseOneLimit { eps3 } => {
                if !eps3.is_finite() {
                    return Err(invalid("case_one_limit: eps3 must be finite"));
                }
                Ok(Dynamics::Limit(PolaritonBasis::case_one_limit(eps3)))
            }
            Model::Schedule(_) => Err(invalid("this run needs a constant model (coupling or case_one_limit), not a schedule")),
        }
    }

    pub fn coupling(&self) -> Result<CouplingConfig, Failure> {
        match self.dynamics()? {
            Dynamics::Coupling(cfg) => Ok(cfg),
            Dynamics::Limit(_) => Err(invalid("this run needs a finite coupling model, not case_one_limit")),
        }
    }

    pub fn schedule(&self) -> Result<Schedule, Failure> {
        match self {
            Model::Schedule(file) => Ok(Schedule::try_from(file.clone())?),
            _ => Err(invalid("adiabatic runs need a schedule model")),
        }
    }
}

impl Passage {
    fn check(&self) -> Result<(), Failure> {
        if self.tol.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
            return Err(invalid("tol must be positive and finite"));
        }
        if self.max_steps == Some(0) {
            return Err(invalid("max_steps must be at least 1"));
        }
        Ok(())
    }
}

impl Initial {
    /// Occupation `(n_a, n_b, n_A, n_C)` of a number-state input.
    pub fn occupation(&self) -> Option<[usize; 4]> {
        match *self {
            Initial::Fock { m, n } => Some([m, n, 0, 0]),
            Initial::Fock4 { occupation } => Some(occupation),
            _ => None,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Initial::Fock { .. } => "fock",
            Initial::Fock4 { .. } => "fock4",
            Initial::Coherent { .. } => "coherent",
            Initial::Cat { .. } => "cat",
        }
    }
}

/// Largest photon number accepted for number-state inputs.
pub const MAX_FOCK_SECTOR: usize = 12;
/// Largest time grid accepted.
pub const MAX_POINTS: usize = 1_000_000;

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| invalid(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read scenario {}: {e}", path.display())))?;
        let mut scenario = Self::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        scenario.resolve_paths(path.parent().unwrap_or(Path::new("")));
        Ok(scenario)
    }

    /// Makes a relative output path relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let Some(p) = &self.output.path {
            if p.is_relative() && !base.as_os_str().is_empty() {
                self.output.path = Some(base.join(p));
            }
        }
    }

    fn initial(&self) -> Result<&Initial, Failure> {
        self.initial.as_ref().ok_or_else(|| invalid(format!("run `{}` needs an initial state", self.run.name())))
    }

    fn number_state(&self) -> Result<[usize; 4], Failure> {
        let initial = self.initial()?;
        let occ = initial.occupation().ok_or_else(|| {
            invalid(format!("run `{}` needs a fock or fock4 initial state, got {}", self.run.name(), initial.kind()))
        })?;
        if occ.iter().sum::<usize>() > MAX_FOCK_SECTOR {
            return Err(invalid(format!("at most {MAX_FOCK_SECTOR} excitations are supported")));
        }
        Ok(occ)
    }

    /// Checks that model, initial state and run fit together, before any work.
    pub fn validate(&self) -> Result<(), Failure> {
        if let Some(grid) = self.run.grid() {
            if !(grid.start.is_finite() && grid.stop.is_finite()) {
                return Err(invalid("time grid bounds must be finite"));
            }
            if grid.points == 0 || grid.points > MAX_POINTS {
                return Err(invalid(format!("time grid needs 1..={MAX_POINTS} points")));
            }
            if grid.stop < grid.start {
                return Err(invalid("time grid must not run backwards (stop < start)"));
            }
        }
        match &self.run {
            Run::Spectrum => {
                self.model.dynamics()?;
            }
            Run::ResonanceTimes { count } => {
                self.model.coupling()?;
                if *count == 0 {
                    return Err(invalid("resonance_times: count must be at least 1"));
                }
            }
            Run::Evolve { times } => {
                let dynamics = self.model.dynamics()?;
                match self.initial()? {
                    Initial::Fock { .. } | Initial::Fock4 { .. } => {
                        self.number_state()?;
                    }
                    Initial::Coherent { amps } => {
                        if !amps.is_finite() {
                            return Err(invalid("coherent amplitudes must be finite"));
                        }
                    }
                    Initial::Cat { mode, alpha, parity } => {
                        CatState::new(*mode, *alpha, *parity)?;
                        let model = dynamics.as_evolution();
                        if let Some(t) = times
                            .times()
                            .into_iter()
                            .find(|&t| !photon_only_condition(&model.evolution_at(t)).holds)
                        {
                            return Err(invalid(format!(
                                "cat evolution needs photon-only times; t = {t} leaks into the atoms \
                                 (use case_one_limit or a resonance time grid)"
                            )));
                        }
                    }
                }
            }
            Run::EntanglementScan { .. } => {
                self.model.dynamics()?;
                let occ = self.number_state()?;
                if occ[2] + occ[3] > 0 {
                    return Err(invalid("entanglement_scan starts from photons only: use a fock initial state"));
                }
            }
            Run::OracleCompare { .. } => {
                self.model.coupling()?;
                self.number_state()?;
            }
            Run::Adiabatic(passage) => {
                passage.check()?;
                self.model.schedule()?;
                let occ = self.number_state()?;
                if occ[2] + occ[3] > 0 {
                    return Err(invalid("adiabatic storage starts from photons: atomic occupations must be zero"));
                }
            }
            Run::InverseAdiabatic(passage) => {
                passage.check()?;
                self.model.schedule()?;
                let occ = self.number_state()?;
                if occ[0] + occ[1] > 0 {
                    return Err(invalid(
                        "inverse_adiabatic starts from atomic excitations: use fock4 with zero photon occupations",
                    ));
                }
            }
            Run::Bosonization { atom_numbers, s, .. } => {
                self.model.coupling()?;
                if atom_numbers.is_empty() {
                    return Err(invalid("bosonization: atom_numbers must not be empty"));
                }
                if let Some(&n) = atom_numbers.iter().find(|&&n| n == 0 || 4 * s > n) {
                    return Err(invalid(format!("bosonization needs 1 ≤ N and s ≤ N/4; N = {n}, s = {s}")));
                }
                if self.initial.is_some() {
                    return Err(invalid("bosonization builds its own |s, 0⟩ input: drop `initial`"));
                }
            }
        }
        Ok(())
    }
}
