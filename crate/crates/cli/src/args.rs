use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cyclic_core::adiabatic::{Family, RampParams, ScheduleFile};
use cyclic_core::dynamics::{CoherentAmplitudes, Parity};
use cyclic_core::{ModeLabel, C64};

use crate::scenario::{Format, Initial, Model, Output, Passage, Run, Scenario, TimeGrid};
use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "cyclic", version, about = "Polariton dynamics of a cyclic three-level atomic ensemble")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polariton frequencies ε₁..ε₄ and mixing angle θ.
    Spectrum(Common),
    /// Amplitudes of |m, n⟩_ab evolved on a time grid.
    EvolveFock(Common),
    /// Entanglement entropy across the a | (b, A, C) cut, in bits.
    EntanglementScan(Common),
    /// Revival and swap times of a resonant drive.
    RevivalTimes {
        #[command(flatten)]
        common: Common,
        /// Number of times listed per kind.
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Coherent amplitudes (α, β, ζ, η) on a time grid.
    EvolveCoherent {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        amps: AmplitudeArgs,
    },
    /// Cat-state branches and their entanglement at photon-only times.
    EvolveCat {
        #[command(flatten)]
        common: Common,
        /// Cat amplitude as `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Option<C64>,
        /// Photon mode carrying the cat.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<ModeLabel>,
        #[arg(long, value_parser = parse_parity)]
        parity: Option<Parity>,
    },
    /// Store photons |m, n⟩_ab in the atoms by sweeping Ω from positive to negative.
    AdiabaticTransfer {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Retrieve atomic excitations (--m = n_A, --n = n_C) into photons.
    InverseTransfer {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Finite-N photon dynamics against the bosonised model.
    ValidateBosonization {
        #[command(flatten)]
        common: Common,
        /// Comma-separated atom numbers.
        #[arg(long = "N", value_delimiter = ',')]
        atom_numbers: Vec<usize>,
        /// Excitation number of the |s, 0⟩ input.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Closed-form Fock evolution against sector matrix exponentials.
    OracleCompare(Common),
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file supplying defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub gn: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Use the Ω/g_N → ∞ limit with this ε₃ instead of a finite coupling.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["gn", "omega", "phi"])]
    pub eps3: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// End of the time grid.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of grid intervals (points = steps + 1).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output file; `.json` selects JSON unless --format says otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Worker threads for independent grid points.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeta: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub eta: Option<C64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub omega_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_end: Option<f64>,
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub steepness: Option<f64>,
    /// Run the sweep as given, without the phase-tuning hold.
    #[arg(long)]
    pub no_tune_phase: bool,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

fn parse_mode(s: &str) -> Result<ModeLabel, String> {
    ModeLabel::from_symbol(s).ok_or_else(|| format!("unknown mode `{s}` (a, b, A or C)"))
}

fn parse_parity(s: &str) -> Result<Parity, String> {
    match s {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        _ => Err(format!("parity must be `even` or `odd`, got `{s}`")),
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(format!("format must be `csv` or `json`, got `{s}`")),
    }
}

const DEFAULT_TMAX: f64 = 10.0;
const DEFAULT_STEPS: usize = 200;

fn default_coupling() -> Model {
    Model::Coupling { g_n: 1.0, omega: 0.0, phi: 0.0 }
}

fn default_sweep(forward: bool) -> Model {
    let (start, end) = if forward { (20.0, -20.0) } else { (-20.0, 20.0) };
    Model::Schedule(ScheduleFile {
        g_n: 1.0,
        family: Family::Tanh,
        params: RampParams { omega_start: Some(start), omega_end: Some(end), duration: Some(200.0), steepness: None },
        samples: None,
        interpolation: None,
        hold_tail: true,
        hold: None,
    })
}

/// A scenario under construction: the config file (if any) plus flag overrides.
struct Draft<'a> {
    base: Option<Scenario>,
    common: &'a Common,
}

impl<'a> Draft<'a> {
    fn new(common: &'a Common) -> Result<Self, Failure> {
        let base = common.config.as_deref().map(Scenario::load).transpose()?;
        Ok(Self { base, common })
    }

    fn constant_model(&self) -> Model {
        let c = self.common;
        if let Some(eps3) = c.eps3 {
            return Model::CaseOneLimit { eps3 };
        }
        let model = self.base.as_ref().map(|s| s.model.clone()).unwrap_or_else(default_coupling);
        let touched = c.gn.is_some() || c.omega.is_some() || c.phi.is_some();
        match model {
            Model::Coupling { g_n, omega, phi } => Model::Coupling {
                g_n: c.gn.unwrap_or(g_n),
                omega: c.omega.unwrap_or(omega),
                phi: c.phi.unwrap_or(phi),
            },
            Model::CaseOneLimit { .. } if !touched => model,
            _ => Model::Coupling { g_n: c.gn.unwrap_or(1.0), omega: c.omega.unwrap_or(0.0), phi: c.phi.unwrap_or(0.0) },
        }
    }

    fn schedule_model(&self, sweep: &SweepArgs, forward: bool) -> Model {
        let mut file = match self.base.as_ref().map(|s| &s.model) {
            Some(Model::Schedule(f)) => f.clone(),
            _ => match default_sweep(forward) {
                Model::Schedule(f) => f,
                _ => unreachable!(),
            },
        };
        if let Some(g) = self.common.gn {
            file.g_n = g;
        }
        let p = &mut file.params;
        p.omega_start = sweep.omega_start.or(p.omega_start);
        p.omega_end = sweep.omega_end.or(p.omega_end);
        p.duration = sweep.duration.or(p.duration);
        p.steepness = sweep.steepness.or(p.steepness);
        Model::Schedule(file)
    }

    fn passage(&self, sweep: &SweepArgs) -> Passage {
        let mut passage = match self.base.as_ref().map(|s| &s.run) {
            Some(Run::Adiabatic(p) | Run::InverseAdiabatic(p)) => *p,
            _ => Passage::default(),
        };
        if sweep.no_tune_phase {
            passage.tune_phase = false;
        }
        passage
    }

    fn fock(&self, default: (usize, usize)) -> Initial {
        let (m0, n0) = match self.base.as_ref().and_then(|s| s.initial.as_ref()) {
            Some(Initial::Fock { m, n }) => (*m, *n),
            _ => default,
        };
        Initial::Fock { m: self.common.m.unwrap_or(m0), n: self.common.n.unwrap_or(n0) }
    }

    fn grid(&self) -> TimeGrid {
        let base = self.base.as_ref().and_then(|s| s.run.grid().copied());
        let start = base.map_or(0.0, |g| g.start);
        let stop = self.common.tmax.or(base.map(|g| g.stop)).unwrap_or(DEFAULT_TMAX);
        let points = self.common.steps.map(|s| s + 1).or(base.map(|g| g.points)).unwrap_or(DEFAULT_STEPS + 1);
        TimeGrid { start, stop, points }
    }

    fn output(&self) -> Output {
        let mut out = self.base.as_ref().map(|s| s.output.clone()).unwrap_or_default();
        if let Some(path) = &self.common.out {
            out.path = Some(path.clone());
            if path.extension().is_some_and(|e| e == "json") {
                out.format = Format::Json;
            } else if path.extension().is_some_and(|e| e == "csv") {
                out.format = Format::Csv;
            }
        }
        if let Some(f) = self.common.format {
            out.format = f;
        }
        out
    }

    fn finish(self, model: Model, initial: Option<Initial>, run: Run) -> Scenario {
        Scenario { model, initial, run, output: self.output() }
    }
}

/// The scenario a subcommand describes, with its thread count.
pub fn scenario_for(command: &Command) -> Result<(Scenario, usize), Failure> {
    let scenario = match command {
        Command::Run { scenario, jobs } => return Ok((Scenario::load(scenario)?, *jobs)),
        Command::Spectrum(c) => {
            let d = Draft::new(c)?;
            let model = d.constant_model();
            d.finish(model, None, Run::Spectrum)
        }
        Command::EvolveFock(c) => {
            let d = Draft::new(c)?;
            let (model, initial, times) = (d.constant_model(), d.fock((1, 0)), d.grid());
            d.finish(model, Some(initial), Run::Evolve { times })
        }
        Command::EntanglementScan(c) => {
            let d = Draft::new(c)?;
            let (model, initial, times) = (d.constant_model(), d.fock((1, 1)), d.grid());
            d.finish(model, Some(initial), Run::EntanglementScan { times })
        }
        Command::OracleCompare(c) => {
            let d = Draft::new(c)?;
            let (model, initial, times) = (d.constant_model(), d.fock((1, 1)), d.grid());
            d.finish(model, Some(initial), Run::OracleCompare { times })
        }
        Command::RevivalTimes { common, count } => {
            let d = Draft::new(common)?;
            let model = d.constant_model();
            d.finish(model, None, Run::ResonanceTimes { count: *count })
        }
        Command::EvolveCoherent { common, amps } => {
            let d = Draft::new(common)?;
            let base = match d.base.as_ref().and_then(|s| s.initial.as_ref()) {
                Some(Initial::Coherent { amps }) => *amps,
                _ => CoherentAmplitudes::default(),
            };
            let amps = CoherentAmplitudes::new(
                amps.alpha.unwrap_or(base.alpha),
                amps.beta.unwrap_or(base.beta),
                amps.zeta.unwrap_or(base.zeta),
                amps.eta.unwrap_or(base.eta),
            );
            let (model, times) = (d.constant_model(), d.grid());
            d.finish(model, Some(Initial::Coherent { amps }), Run::Evolve { times })
        }
        Command::EvolveCat { common, alpha, mode, parity } => {
            let d = Draft::new(common)?;
            let (a0, m0, p0) = match d.base.as_ref().and_then(|s| s.initial.as_ref()) {
                Some(Initial::Cat { mode, alpha, parity }) => (*alpha, *mode, *parity),
                _ => (C64::new(1.0, 0.0), ModeLabel::PhotonA, Parity::Even),
            };
            let initial = Initial::Cat {
                mode: mode.unwrap_or(m0),
                alpha: alpha.unwrap_or(a0),
                parity: parity.unwrap_or(p0),
            };
            let (model, times) = (d.constant_model(), d.grid());
            d.finish(model, Some(initial), Run::Evolve { times })
        }
        Command::AdiabaticTransfer { common, sweep } => {
            let d = Draft::new(common)?;
            let (model, initial) = (d.schedule_model(sweep, true), d.fock((1, 0)));
            let passage = d.passage(sweep);
            d.finish(model, Some(initial), Run::Adiabatic(passage))
        }
        Command::InverseTransfer { common, sweep } => {
            let d = Draft::new(common)?;
            let model = d.schedule_model(sweep, false);
            let (na0, nc0) = match d.base.as_ref().and_then(|s| s.initial.as_ref()) {
                Some(Initial::Fock4 { occupation }) => (occupation[2], occupation[3]),
                _ => (1, 0),
            };
            let occupation = [0, 0, common.m.unwrap_or(na0), common.n.unwrap_or(nc0)];
            let passage = d.passage(sweep);
            d.finish(model, Some(Initial::Fock4 { occupation }), Run::InverseAdiabatic(passage))
        }
        Command::ValidateBosonization { common, atom_numbers, s } => {
            let d = Draft::new(common)?;
            let (n0, s0) = match d.base.as_ref().map(|s| &s.run) {
                Some(Run::Bosonization { atom_numbers, s, .. }) => (atom_numbers.clone(), *s),
                _ => (vec![20, 40], 1),
            };
            let atom_numbers = if atom_numbers.is_empty() { n0 } else { atom_numbers.clone() };
            let mut times = d.grid();
            if common.tmax.is_none() && d.base.is_none() {
                times.stop = std::f64::consts::TAU;
            }
            let model = d.constant_model();
            d.finish(model, None, Run::Bosonization { atom_numbers, s: s.unwrap_or(s0), times })
        }
    };
    let jobs = match command {
        Command::Spectrum(c) | Command::EvolveFock(c) | Command::EntanglementScan(c) | Command::OracleCompare(c) => c.jobs,
        Command::RevivalTimes { common, .. }
        | Command::EvolveCoherent { common, .. }
        | Command::EvolveCat { common, .. }
        | Command::AdiabaticTransfer { common, .. }
        | Command::InverseTransfer { common, .. }
        | Command::ValidateBosonization { common, .. } => common.jobs,
        Command::Run { .. } => unreachable!(),
    };
    Ok((scenario, jobs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(args: &[&str]) -> Scenario {
        let cli = Cli::try_parse_from(std::iter::once("cyclic").chain(args.iter().copied())).unwrap();
        scenario_for(&cli.command).unwrap().0
    }

    #[test]
    fn flags_build_the_scenario() {
        let s = scenario(&["evolve-fock", "--gn", "2", "--omega", "-0.5", "--m", "2", "--tmax", "4", "--steps", "8"]);
        assert_eq!(s.model, Model::Coupling { g_n: 2.0, omega: -0.5, phi: 0.0 });
        assert_eq!(s.initial, Some(Initial::Fock { m: 2, n: 0 }));
        assert_eq!(s.run, Run::Evolve { times: TimeGrid { start: 0.0, stop: 4.0, points: 9 } });
    }

    #[test]
    fn output_extension_picks_format() {
        let s = scenario(&["spectrum", "--out", "x.json"]);
        assert_eq!(s.output.format, Format::Json);
        let s = scenario(&["spectrum", "--out", "x.json", "--format", "csv"]);
        assert_eq!(s.output.format, Format::Csv);
    }

    #[test]
    fn complex_flags_accept_negative_parts() {
        assert_eq!(parse_complex("-1.5,0.25").unwrap(), C64::new(-1.5, 0.25));
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn inverse_transfer_defaults_to_a_rising_sweep() {
        let s = scenario(&["inverse-transfer", "--m", "1", "--n", "1"]);
        assert_eq!(s.initial, Some(Initial::Fock4 { occupation: [0, 0, 1, 1] }));
        match s.model {
            Model::Schedule(f) => assert_eq!((f.params.omega_start, f.params.omega_end), (Some(-20.0), Some(20.0))),
            other => panic!("unexpected model {other:?}"),
        }
    }

    #[test]
    fn case_one_limit_flag_conflicts_with_coupling() {
        assert!(Cli::try_parse_from(["cyclic", "spectrum", "--eps3", "1", "--gn", "1"]).is_err());
        let s = scenario(&["entanglement-scan", "--eps3", "1"]);
        assert_eq!(s.model, Model::CaseOneLimit { eps3: 1.0 });
    }
}
