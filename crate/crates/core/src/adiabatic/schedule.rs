use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polariton::CouplingConfig;

/// `|Ω|/g_N` at both ends at or above which a sweep counts as storage-grade.
pub const STORAGE_GRADE_RATIO: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    Linear,
    #[default]
    MonotoneCubic,
}

/// Sweep shape on `[t_start, t_start + duration]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Ramp {
    /// `Ω(t) = m − h·tanh(k(t − T/2))/tanh(kT/2)` with `m, h` the midpoint and
    /// half-range of the endpoints.
    Tanh { omega_start: f64, omega_end: f64, duration: f64, steepness: f64 },
    Linear { omega_start: f64, omega_end: f64, duration: f64 },
    Samples { points: Vec<(f64, f64)>, interpolation: Interpolation, slopes: Vec<f64> },
}

/// `Ω(t)` at fixed `g_N` (and `φ = 0`), optionally followed by a constant
/// hold at the final value.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    g_n: f64,
    ramp: Ramp,
    hold_tail: bool,
    hold: f64,
}

fn finite(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidSchedule(format!("{name} must be finite")));
    }
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidSchedule(format!("{name} must be positive and finite, got {x}")));
    }
    Ok(())
}

/// Fritsch–Butland slopes: zero at local extrema, weighted harmonic mean elsewhere.
fn monotone_slopes(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    let h: Vec<f64> = points.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let delta: Vec<f64> = points.windows(2).zip(&h).map(|(w, h)| (w[1].1 - w[0].1) / h).collect();
    let mut d = vec![0.0; n];
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d
}

impl Schedule {
    fn build(g_n: f64, ramp: Ramp) -> Result<Self> {
        positive("g_N", g_n)?;
        Ok(Self { g_n, ramp, hold_tail: false, hold: 0.0 })
    }

    /// Tanh ramp with steepness `6/duration`.
    pub fn tanh(g_n: f64, omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        Self::tanh_with_steepness(g_n, omega_start, omega_end, duration, 6.0 / duration)
    }

    pub fn tanh_with_steepness(g_n: f64, omega_start: f64, omega_end: f64, duration: f64, steepness: f64) -> Result<Self> {
        finite("omega_start", omega_start)?;
        finite("omega_end", omega_end)?;
        positive("duration", duration)?;
        positive("steepness", steepness)?;
        Self::build(g_n, Ramp::Tanh { omega_start, omega_end, duration, steepness })
    }

    pub fn linear(g_n: f64, omega_start: f64, omega_end: f64, duration: f64) -> Result<Self> {
        finite("omega_start", omega_start)?;
        finite("omega_end", omega_end)?;
        positive("duration", duration)?;
        Self::build(g_n, Ramp::Linear { omega_start, omega_end, duration })
    }

    pub fn from_samples(g_n: f64, points: Vec<(f64, f64)>, interpolation: Interpolation) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidSchedule("need at least two samples".into()));
        }
        if points.iter().any(|(t, w)| !t.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidSchedule("samples must be finite".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSchedule("sample times must be strictly ascending".into()));
        }
        let slopes = match interpolation {
            Interpolation::MonotoneCubic => monotone_slopes(&points),
            Interpolation::Linear => vec![],
        };
        Self::build(g_n, Ramp::Samples { points, interpolation, slopes })
    }

    /// Marks the schedule as ending in a tunable constant hold.
    pub fn with_hold_tail(mut self, on: bool) -> Self {
        self.hold_tail = on;
        if !on {
            self.hold = 0.0;
        }
        self
    }

    /// Sets the hold duration (and enables the hold).
    pub fn with_hold(mut self, hold: f64) -> Result<Self> {
        if !(hold.is_finite() && hold >= 0.0) {
            return Err(Error::InvalidSchedule(format!("hold must be non-negative, got {hold}")));
        }
        self.hold_tail = true;
        self.hold = hold;
        Ok(self)
    }

    pub fn g_n(&self) -> f64 {
        self.g_n
    }

    pub fn ramp(&self) -> &Ramp {
        &self.ramp
    }

    pub fn hold_tail(&self) -> bool {
        self.hold_tail
    }

    pub fn hold(&self) -> f64 {
        self.hold
    }

    pub fn t_start(&self) -> f64 {
        match &self.ramp {
            Ramp::Samples { points, .. } => points[0].0,
            _ => 0.0,
        }
    }

    pub fn sweep_end(&self) -> f64 {
        match &self.ramp {
            Ramp::Tanh { duration, .. } | Ramp::Linear { duration, .. } => *duration,
            Ramp::Samples { points, .. } => points[points.len() - 1].0,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.sweep_end() + self.hold
    }

    pub fn omega_start(&self) -> f64 {
        self.omega(self.t_start())
    }

    pub fn omega_end(&self) -> f64 {
        self.omega(self.sweep_end())
    }

    /// `Ω(t)`, clamped to the schedule's time range.
    pub fn omega(&self, t: f64) -> f64 {
        let t = t.clamp(self.t_start(), self.sweep_end());
        match &self.ramp {
            Ramp::Tanh { omega_start, omega_end, duration, steepness } => {
                let mid = 0.5 * (omega_start + omega_end);
                let half = 0.5 * (omega_start - omega_end);
                let edge = (steepness * duration / 2.0).tanh();
                mid - half * (steepness * (t - duration / 2.0)).tanh() / edge
            }
            Ramp::Linear { omega_start, omega_end, duration } => omega_start + (omega_end - omega_start) * t / duration,
            Ramp::Samples { points, interpolation, slopes } => {
                let k = points.partition_point(|p| p.0 <= t).clamp(1, points.len() - 1) - 1;
                let ((t0, w0), (t1, w1)) = (points[k], points[k + 1]);
                let h = t1 - t0;
                let x = (t - t0) / h;
                match interpolation {
                    Interpolation::Linear => w0 + (w1 - w0) * x,
                    Interpolation::MonotoneCubic => {
                        let (x2, x3) = (x * x, x * x * x);
                        let h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
                        let h10 = x3 - 2.0 * x2 + x;
                        let h01 = -2.0 * x3 + 3.0 * x2;
                        let h11 = x3 - x2;
                        h00 * w0 + h10 * h * slopes[k] + h01 * w1 + h11 * h * slopes[k + 1]
                    }
                }
            }
        }
    }

    pub fn config_at(&self, t: f64) -> CouplingConfig {
        CouplingConfig::real(self.g_n, self.omega(t)).expect("schedule values are finite")
    }

    /// Both ends satisfy `|Ω|/g_N ≥ 10`.
    pub fn is_storage_grade(&self) -> bool {
        let r = STORAGE_GRADE_RATIO * self.g_n;
        self.omega_start().abs() >= r && self.omega_end().abs() >= r
    }

    /// Times at which `Ω(t)` may fail to be smooth, including both ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = match &self.ramp {
            Ramp::Samples { points, .. } => points.iter().map(|p| p.0).collect(),
            _ => vec![self.t_start(), self.sweep_end()],
        };
        if self.hold > 0.0 {
            b.push(self.t_end());
        }
        b
    }

    /// `n ≥ 2` evenly spaced `(t, Ω)` pairs over the whole schedule.
    pub fn sampled(&self, n: usize) -> Vec<(f64, f64)> {
        let (a, b) = (self.t_start(), self.t_end());
        crate::dynamics::linspace(a, b, n.max(2)).into_iter().map(|t| (t, self.omega(t))).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        crate::format::to_json_string(&ScheduleFile::from(self)).map_err(|e| Error::InvalidSchedule(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScheduleFile = serde_json::from_str(text).map_err(|e| Error::InvalidSchedule(e.to_string()))?;
        file.try_into()
    }
}

/// `(ε₁, ε₃) = ((Ω + R)/2, (Ω − R)/2)`, `R = √(Ω² + 4g²)`, without cancellation.
pub fn polariton_energies(g_n: f64, omega: f64) -> (f64, f64) {
    let r = omega.hypot(2.0 * g_n);
    if omega >= 0.0 {
        let e1 = 0.5 * (omega + r);
        (e1, if e1 > 0.0 { -g_n * g_n / e1 } else { 0.0 })
    } else {
        let e3 = 0.5 * (omega - r);
        (-g_n * g_n / e3, e3)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RampParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steepness: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tanh,
    Linear,
    Samples,
}

/// On-disk schedule description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    #[serde(rename = "g_N")]
    pub g_n: f64,
    pub family: Family,
    #[serde(default)]
    pub params: RampParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<Interpolation>,
    #[serde(default)]
    pub hold_tail: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold: Option<f64>,
}

impl From<&Schedule> for ScheduleFile {
    fn from(s: &Schedule) -> Self {
        let (family, params, samples, interpolation) = match &s.ramp {
            Ramp::Tanh { omega_start, omega_end, duration, steepness } => (
                Family::Tanh,
                RampParams {
                    omega_start: Some(*omega_start),
                    omega_end: Some(*omega_end),
                    duration: Some(*duration),
                    steepness: Some(*steepness),
                },
                None,
                None,
            ),
            Ramp::Linear { omega_start, omega_end, duration } => (
                Family::Linear,
                RampParams {
                    omega_start: Some(*omega_start),
                    omega_end: Some(*omega_end),
                    duration: Some(*duration),
                    steepness: None,
                },
                None,
                None,
            ),
            Ramp::Samples { points, interpolation, .. } => (
                Family::Samples,
                RampParams::default(),
                Some(points.iter().map(|&(t, w)| [t, w]).collect()),
                Some(*interpolation),
            ),
        };
        ScheduleFile {
            g_n: s.g_n,
            family,
            params,
            samples,
            interpolation,
            hold_tail: s.hold_tail,
            hold: (s.hold > 0.0).then_some(s.hold),
        }
    }
}

impl TryFrom<ScheduleFile> for Schedule {
    type Error = Error;

    fn try_from(f: ScheduleFile) -> Result<Self> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::InvalidSchedule(format!("family {:?} needs params.{name}", f.family)))
        };
        let p = &f.params;
        let schedule = match f.family {
            Family::Tanh => {
                let duration = need("duration", p.duration)?;
                Schedule::tanh_with_steepness(
                    f.g_n,
                    need("omega_start", p.omega_start)?,
                    need("omega_end", p.omega_end)?,
                    duration,
                    p.steepness.unwrap_or(6.0 / duration),
                )?
            }
            Family::Linear => Schedule::linear(
                f.g_n,
                need("omega_start", p.omega_start)?,
                need("omega_end", p.omega_end)?,
                need("duration", p.duration)?,
            )?,
            Family::Samples => {
                let samples = f
                    .samples
                    .as_ref()
                    .ok_or_else(|| Error::InvalidSchedule("family samples needs a samples array".into()))?;
                Schedule::from_samples(
                    f.g_n,
                    samples.iter().map(|&[t, w]| (t, w)).collect(),
                    f.interpolation.unwrap_or_default(),
                )?
            }
        };
        let schedule = schedule.with_hold_tail(f.hold_tail);
        match f.hold {
            Some(h) if h > 0.0 => schedule.with_hold(h),
            Some(h) if h < 0.0 || !h.is_finite() => Err(Error::InvalidSchedule(format!("hold must be non-negative, got {h}"))),
            _ => Ok(schedule),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_hits_its_endpoints_exactly() {
        let s = Schedule::tanh(1.0, 20.0, -20.0, 200.0).unwrap();
        assert_eq!(s.omega_start(), 20.0);
        assert!((s.omega_end() + 20.0).abs() < 1e-12);
        assert!(s.omega(100.0).abs() < 1e-12);
        assert!(s.is_storage_grade());
        // Antisymmetric about the midpoint.
        for t in [3.0, 40.0, 99.0] {
            assert!((s.omega(t) + s.omega(200.0 - t)).abs() < 1e-12);
        }
    }

    #[test]
    fn hold_extends_with_the_final_value() {
        let s = Schedule::linear(1.0, 12.0, -12.0, 10.0).unwrap().with_hold(2.5).unwrap();
        assert_eq!(s.t_end(), 12.5);
        assert_eq!(s.omega(11.0), -12.0);
        assert_eq!(s.breakpoints(), vec![0.0, 10.0, 12.5]);
    }

    #[test]
    fn samples_validation() {
        assert!(Schedule::from_samples(1.0, vec![(0.0, 1.0)], Interpolation::Linear).is_err());
        assert!(Schedule::from_samples(1.0, vec![(0.0, 1.0), (0.0, 2.0)], Interpolation::Linear).is_err());
        assert!(Schedule::from_samples(1.0, vec![(0.0, 1.0), (1.0, f64::NAN)], Interpolation::Linear).is_err());
        assert!(Schedule::from_samples(0.0, vec![(0.0, 1.0), (1.0, 2.0)], Interpolation::Linear).is_err());
    }

    #[test]
    fn interpolation_passes_through_samples() {
        let pts = vec![(0.0, 20.0), (1.0, 15.0), (3.0, 0.0), (4.0, -18.0), (6.0, -20.0)];
        for interp in [Interpolation::Linear, Interpolation::MonotoneCubic] {
            let s = Schedule::from_samples(1.0, pts.clone(), interp).unwrap();
            for &(t, w) in &pts {
                assert!((s.omega(t) - w).abs() < 1e-12);
            }
        }
        assert!((Schedule::from_samples(1.0, pts.clone(), Interpolation::Linear).unwrap().omega(2.0) - 7.5).abs() < 1e-12);
    }

    #[test]
    fn monotone_cubic_does_not_overshoot() {
        let pts = vec![(0.0, 20.0), (1.0, 19.9), (2.0, -19.9), (3.0, -20.0)];
        let s = Schedule::from_samples(1.0, pts, Interpolation::MonotoneCubic).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=300 {
            let w = s.omega(k as f64 * 0.01);
            assert!(w <= prev + 1e-12 && (-20.0..=20.0).contains(&w));
            prev = w;
        }
    }

    #[test]
    fn energies_are_stable_and_ordered() {
        for w in [-1e8, -20.0, -0.3, 0.0, 0.3, 20.0, 1e8] {
            let (e1, e3) = polariton_energies(1.0, w);
            let r = f64::hypot(w, 2.0);
            assert!(e1 > 0.0 && e3 < 0.0);
            assert!((e1 * e3 + 1.0).abs() < 1e-12);
            assert!((e1 - e3 - r).abs() <= 1e-12 * r);
        }
        assert_eq!(polariton_energies(1.0, 0.0), (1.0, -1.0));
    }

    #[test]
    fn json_round_trip() {
        let s = Schedule::tanh_with_steepness(1.0, 20.0, -20.0, 200.0, 0.05).unwrap().with_hold(0.125).unwrap();
        assert_eq!(Schedule::from_json(&s.to_json().unwrap()).unwrap(), s);
        let s = Schedule::from_samples(2.0, vec![(0.0, 30.0), (5.0, 0.1), (9.0, -30.0)], Interpolation::Linear)
            .unwrap()
            .with_hold_tail(true);
        assert_eq!(Schedule::from_json(&s.to_json().unwrap()).unwrap(), s);
    }

    #[test]
    fn json_defaults_and_errors() {
        let s = Schedule::from_json(
            r#"{"g_N": 1.0, "family": "tanh", "params": {"omega_start": 20, "omega_end": -20, "duration": 100}}"#,
        )
        .unwrap();
        assert!(matches!(s.ramp(), Ramp::Tanh { steepness, .. } if (*steepness - 0.06).abs() < 1e-15));
        assert!(!s.hold_tail());
        assert!(Schedule::from_json(r#"{"g_N": 1.0, "family": "linear", "params": {"omega_start": 20}}"#).is_err());
        assert!(Schedule::from_json(r#"{"g_N": 1.0, "family": "samples"}"#).is_err());
        assert!(Schedule::from_json(r#"{"g_N": 1.0, "family": "cosine"}"#).is_err());
    }
}
