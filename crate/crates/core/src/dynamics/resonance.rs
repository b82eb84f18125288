//! Instants at which the photons decouple from the atoms and the two-mode
//! state either returns (revival) or has `a ↔ b` exchanged (swap).
//!
//! Photon-only instants need `φ₁ ≡ φ₃ (mod 2π)`, i.e. `√(Ω²+4g_N²) t ∈ 2πℤ`.
//! There `φ₁ = φ₃ = (Ω t)/2 (mod π)`; a revival needs `Ω t ∈ 2πℤ` and a swap
//! needs `Ω t ∈ π(2ℤ + 1)`. Writing `Ω/√(Ω²+4g_N²) = p/q` in lowest terms and
//! `T₀ = 2π/√(Ω²+4g_N²)`, revivals fall at `k q T₀` and swaps at
//! `(2k + 1)(q/2) T₀`, the latter only for even `q`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polariton::CouplingConfig;

pub const MAX_DENOMINATOR: i64 = 64;
pub const RATIO_TOLERANCE: f64 = 1e-12;

/// `first + k·period`, `k = 0, 1, 2, …`
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Progression {
    pub first: f64,
    pub period: f64,
}

impl Progression {
    pub fn nth(&self, k: usize) -> f64 {
        self.first + self.period * k as f64
    }

    pub fn take(&self, count: usize) -> Vec<f64> {
        (0..count).map(|k| self.nth(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceTimes {
    pub p: i64,
    pub q: i64,
    #[serde(rename = "g_N")]
    pub g_n: f64,
    pub omega: f64,
    /// `2π/√(Ω²+4g_N²)`, spacing of photon-only instants.
    pub base_period: f64,
    pub revival: Progression,
    pub swap: Option<Progression>,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

fn build(p: i64, q: i64, cfg: &CouplingConfig) -> ResonanceTimes {
    let base = TAU / cfg.rabi_splitting();
    let revival = Progression { first: q as f64 * base, period: q as f64 * base };
    let swap = (q % 2 == 0).then(|| Progression { first: (q / 2) as f64 * base, period: q as f64 * base });
    ResonanceTimes { p, q, g_n: cfg.g_n(), omega: cfg.omega(), base_period: base, revival, swap }
}

/// Detects `Ω/√(Ω²+4g_N²) = p/q` with `q ≤ 64` and returns the resonance times.
pub fn resonance_times(cfg: &CouplingConfig) -> Result<ResonanceTimes> {
    if cfg.g_n() == 0.0 {
        return Err(Error::InvalidInput("g_N = 0: the photons never couple to the atoms".into()));
    }
    let ratio = cfg.omega() / cfg.rabi_splitting();
    for q in 1..=MAX_DENOMINATOR {
        let p = (ratio * q as f64).round();
        if (ratio - p / q as f64).abs() < RATIO_TOLERANCE {
            let p = p as i64;
            let d = gcd(p, q);
            return Ok(build(p / d, q / d, cfg));
        }
    }
    Err(Error::IrrationalRatio { ratio })
}

/// Resonance times for the coupling with `Ω/√(Ω²+4g_N²) = p/q`, i.e.
/// `Ω = 2 g_N p / √(q² - p²)`. The fraction is reduced first.
pub fn resonance_times_from_ratio(p: i64, q: i64, g_n: f64) -> Result<ResonanceTimes> {
    if q <= 0 || p.abs() >= q {
        return Err(Error::InvalidInput(format!("need |p| < q with q > 0, got p = {p}, q = {q}")));
    }
    if g_n <= 0.0 {
        return Err(Error::InvalidInput("g_N must be positive".into()));
    }
    let d = gcd(p, q);
    let (p, q) = (p / d, q / d);
    let omega = 2.0 * g_n * p as f64 / (((q * q - p * p) as f64).sqrt());
    let cfg = CouplingConfig::real(g_n, omega)?;
    Ok(build(p, q, &cfg))
}

impl ResonanceTimes {
    pub fn config(&self) -> CouplingConfig {
        CouplingConfig::real(self.g_n, self.omega).expect("validated on construction")
    }
}
