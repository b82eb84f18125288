use std::cell::Cell;
use std::f64::consts::TAU;

use quadrature::double_exponential;
use serde::Serialize;

use super::schedule::{polariton_energies, Schedule};
use crate::error::{Error, Result};

/// Absolute accuracy of dynamic-phase integrals.
pub const PHASE_TOLERANCE: f64 = 1e-9;

const INITIAL_PANELS: usize = 8;
const MAX_PANELS: usize = 4096;

/// `∫_a^b f` by composite double-exponential quadrature, bisecting the panel
/// with the largest error estimate until the summed estimate is below `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let span = b - a;
    let rule = |lo: f64, hi: f64| {
        let finite = Cell::new(true);
        let watched = |x: f64| {
            let y = f(x);
            if !y.is_finite() {
                finite.set(false);
            }
            y
        };
        let out = double_exponential::integrate(watched, lo, hi, 0.1 * tol * (hi - lo).abs() / span.abs());
        let integral = if finite.get() { out.integral } else { f64::NAN };
        (lo, hi, integral, out.error_estimate)
    };
    let mut panels: Vec<(f64, f64, f64, f64)> = (0..INITIAL_PANELS)
        .map(|k| {
            let lo = a + span * k as f64 / INITIAL_PANELS as f64;
            let hi = if k + 1 == INITIAL_PANELS { b } else { a + span * (k + 1) as f64 / INITIAL_PANELS as f64 };
            rule(lo, hi)
        })
        .collect();
    loop {
        let estimate: f64 = panels.iter().map(|p| if p.2.is_finite() { p.3 } else { f64::NAN }).sum();
        if estimate <= tol {
            return Ok(panels.iter().map(|p| p.2).sum());
        }
        if panels.len() >= MAX_PANELS || !estimate.is_finite() {
            return Err(Error::QuadratureFailure { tolerance: tol, estimate });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one panel");
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        panels.push(rule(lo, mid));
        panels.push(rule(mid, hi));
    }
}

/// `Φ₁ = ∫ε₁ dt` and `Φ₃ = ∫ε₃ dt` over a whole schedule, hold included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DynamicPhases {
    pub eps1: f64,
    pub eps3: f64,
}

fn integrate_energy(schedule: &Schedule, pick: impl Fn((f64, f64)) -> f64 + Copy) -> Result<f64> {
    let g = schedule.g_n();
    let knots: Vec<f64> = schedule.breakpoints().into_iter().filter(|&t| t <= schedule.sweep_end()).collect();
    let pieces = (knots.len() - 1).max(1);
    let mut total = 0.0;
    for w in knots.windows(2) {
        total += integrate(|t| pick(polariton_energies(g, schedule.omega(t))), w[0], w[1], PHASE_TOLERANCE / pieces as f64)?;
    }
    Ok(total + pick(polariton_energies(g, schedule.omega_end())) * schedule.hold())
}

pub fn dynamic_phases(schedule: &Schedule) -> Result<DynamicPhases> {
    Ok(DynamicPhases { eps1: integrate_energy(schedule, |e| e.0)?, eps3: integrate_energy(schedule, |e| e.1)? })
}

/// `∫ε₃(t) dt` over the schedule.
pub fn dynamic_phase(schedule: &Schedule) -> Result<f64> {
    integrate_energy(schedule, |e| e.1)
}

/// Distance from `x` to the nearest multiple of `2π`.
pub fn distance_to_lattice(x: f64) -> f64 {
    (x - TAU * (x / TAU).round()).abs()
}

/// The schedule with its hold set so that `∫ε₃ dt ∈ 2πℤ`. `ε₃` is constant
/// during the hold, so the shortest such hold follows directly.
pub fn phase_tuned(schedule: &Schedule) -> Result<Schedule> {
    phase_tuned_to(schedule, 0.0)
}

/// The schedule with `∫ε₃ dt ≡ target (mod 2π)`.
pub fn phase_tuned_to(schedule: &Schedule, target: f64) -> Result<Schedule> {
    let base = schedule.clone().with_hold(0.0)?;
    let sweep = dynamic_phase(&base)?;
    let (_, e3) = polariton_energies(schedule.g_n(), schedule.omega_end());
    base.with_hold((sweep - target).rem_euclid(TAU) / e3.abs())
}
