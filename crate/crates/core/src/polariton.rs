//! The reduced four-mode model: coupling parameters, the single-particle
//! Hamiltonian on `(a, b, A, C)`, its polariton diagonalisation and the linear
//! map `F(t) = exp(-i h t)` acting on mode operators.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{HermitianEigen};

/// The four bosonic modes. The declaration order is the canonical basis order
/// of every 4×4 matrix and every occupation tuple in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeLabel {
    #[serde(rename = "a")]
    PhotonA,
    #[serde(rename = "b")]
    PhotonB,
    #[serde(rename = "A")]
    AtomA,
    #[serde(rename = "C")]
    AtomC,
}

impl ModeLabel {
    pub const ALL: [ModeLabel; 4] = [
        ModeLabel::PhotonA,
        ModeLabel::PhotonB,
        ModeLabel::AtomA,
        ModeLabel::AtomC,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ModeLabel::PhotonA => "a",
            ModeLabel::PhotonB => "b",
            ModeLabel::AtomA => "A",
            ModeLabel::AtomC => "C",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.symbol() == s)
    }

    pub fn is_photonic(self) -> bool {
        matches!(self, ModeLabel::PhotonA | ModeLabel::PhotonB)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Parameters of the reduced Hamiltonian
/// `H = g_N (a A† + b C†) + Ω e^{iφ} A†C + h.c.`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoupling", into = "RawCoupling")]
pub struct CouplingConfig {
    g_n: f64,
    omega: f64,
    phi: f64,
}

#[derive(Serialize, Deserialize)]
struct RawCoupling {
    #[serde(rename = "g_N")]
    g_n: f64,
    omega: f64,
    #[serde(default)]
    phi: f64,
}

impl TryFrom<RawCoupling> for CouplingConfig {
    type Error = Error;
    fn try_from(raw: RawCoupling) -> Result<Self> {
        CouplingConfig::new(raw.g_n, raw.omega, raw.phi)
    }
}

impl From<CouplingConfig> for RawCoupling {
    fn from(cfg: CouplingConfig) -> Self {
        RawCoupling { g_n: cfg.g_n, omega: cfg.omega, phi: cfg.phi }
    }
}

impl CouplingConfig {
    pub fn new(g_n: f64, omega: f64, phi: f64) -> Result<Self> {
        if !(g_n.is_finite() && omega.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidInput("coupling parameters must be finite".into()));
        }
        if g_n < 0.0 {
            return Err(Error::InvalidInput(format!("g_N must be non-negative, got {g_n}")));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { g_n, omega, phi })
    }

    /// `φ = 0`, the setting of all closed-form dynamics.
    pub fn real(g_n: f64, omega: f64) -> Result<Self> {
        Self::new(g_n, omega, 0.0)
    }

    pub fn g_n(&self) -> f64 {
        self.g_n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.g_n, omega, self.phi)
    }

    /// `√(Ω² + 4 g_N²)`, the splitting `ε₁ - ε₃`.
    pub fn rabi_splitting(&self) -> f64 {
        self.omega.hypot(2.0 * self.g_n)
    }

    pub fn is_degenerate(&self) -> bool {
        self.g_n == 0.0 && self.omega == 0.0
    }
}

/// Single-particle matrix `h` with `H = Σ h[x][y] x† y` in the basis `(a, b, A, C)`.
pub fn single_particle_hamiltonian(cfg: &CouplingConfig) -> Matrix4<C64> {
    let g = C64::new(cfg.g_n, 0.0);
    let drive = C64::from_polar(cfg.omega, cfg.phi);
    let (a, b, ea, ec) = (0, 1, 2, 3);
    let mut h = Matrix4::zeros();
    h[(ea, a)] = g;
    h[(a, ea)] = g;
    h[(ec, b)] = g;
    h[(b, ec)] = g;
    h[(ea, ec)] = drive;
    h[(ec, ea)] = drive.conj();
    h
}

/// Polariton normal modes `D_i = Σ_x M[i][x] x` with `H = Σ ε_i D_i† D_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolaritonBasis {
    theta: f64,
    eps: [f64; 4],
    phi: f64,
    m: Matrix4<C64>,
}

/// Mixing angle and the two independent frequencies, computed without
/// cancellation at either end of the Ω axis.
fn mixing(g: f64, omega: f64) -> (f64, f64, f64) {
    let r = omega.hypot(2.0 * g);
    if omega >= 0.0 {
        let eps1 = 0.5 * (omega + r);
        let eps3 = if eps1 > 0.0 { -g * g / eps1 } else { 0.0 };
        ((2.0 * g).atan2(omega + r), eps1, eps3)
    } else {
        let eps3 = 0.5 * (omega - r);
        let eps1 = -g * g / eps3;
        ((r - omega).atan2(2.0 * g), eps1, eps3)
    }
}

impl PolaritonBasis {
    pub fn new(cfg: &CouplingConfig) -> Result<Self> {
        if cfg.is_degenerate() {
            return Err(Error::DegenerateModel);
        }
        let (theta, eps1, eps3) = mixing(cfg.g_n, cfg.omega);
        Ok(Self::from_parts(theta, eps1, eps3, cfg.phi))
    }

    /// Assembles a basis from its mixing angle and frequencies directly. Used
    /// for limits (`Ω/g_N → ±∞`) that no finite coupling reaches exactly.
    pub fn from_parts(theta: f64, eps1: f64, eps3: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let r = |x: f64| C64::new(x * FRAC_1_SQRT_2, 0.0);
        #[rustfmt::skip]
        let m = Matrix4::new(
            r(s),  r(s) * e,  r(c),  r(c) * e,
            r(s), -r(s) * e, -r(c),  r(c) * e,
            r(c),  r(c) * e, -r(s), -r(s) * e,
            r(c), -r(c) * e,  r(s), -r(s) * e,
        );
        Self { theta, eps: [eps1, -eps1, eps3, -eps3], phi, m }
    }

    /// `Ω/g_N → +∞`: `θ = 0`, `D₃,₄ = (a ± b)/√2` carry the photons and only
    /// `ε₃` enters photonic dynamics. `ε₁` is irrelevant to the photons and
    /// set to zero.
    pub fn case_one_limit(eps3: f64) -> Self {
        Self::from_parts(0.0, 0.0, eps3, 0.0)
    }

    /// `Ω/g_N → -∞`: `θ = π/2`, photons live in `D₁,₂ = (a ± b)/√2`.
    pub fn case_two_limit(eps1: f64) -> Self {
        Self::from_parts(std::f64::consts::FRAC_PI_2, eps1, 0.0, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eps(&self) -> [f64; 4] {
        self.eps
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Rows are `D₁..D₄` in the basis `(a, b, A, C)`.
    pub fn transform(&self) -> &Matrix4<C64> {
        &self.m
    }

    /// Spectral form `F(t) = M† diag(e^{-iε t}) M`.
    pub fn evolution(&self, t: f64) -> EvolutionMatrix {
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| {
            C64::from_polar(1.0, -self.eps[i] * t)
        }));
        EvolutionMatrix { t, f: self.m.adjoint() * d * self.m }
    }

    /// The coefficient list for `φ = 0` written out entry by entry with
    /// `φ_j = ε_j t`. Serves as the regression target for [`Self::evolution`].
    pub fn closed_form_evolution(&self, t: f64) -> EvolutionMatrix {
        let (s, c) = self.theta.sin_cos();
        let (s2, c2, sc) = (s * s, c * c, s * c);
        let (sin1, cos1) = (self.eps[0] * t).sin_cos();
        let (sin3, cos3) = (self.eps[2] * t).sin_cos();
        let re = |x: f64| C64::new(x, 0.0);
        let im = |x: f64| C64::new(0.0, -x);

        let aa = re(cos1 * s2 + cos3 * c2);
        let ab = im(sin1 * s2 + sin3 * c2);
        let a_atom_a = im(sc * (sin1 - sin3));
        let a_atom_c = re(sc * (cos1 - cos3));
        let atom_aa = re(cos1 * c2 + cos3 * s2);
        let atom_ac = im(sin1 * c2 + sin3 * s2);
        #[rustfmt::skip]
        let f = Matrix4::new(
            aa,       ab,       a_atom_a, a_atom_c,
            ab,       aa,       a_atom_c, a_atom_a,
            a_atom_a, a_atom_c, atom_aa,  atom_ac,
            a_atom_c, a_atom_a, atom_ac,  atom_aa,
        );
        EvolutionMatrix { t, f }
    }
}

/// The linear map `F(t)`: entry `(β, α)` is `F_β^α(t)`, the amplitude on `β†`
/// of the evolved `α†`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionMatrix {
    pub t: f64,
    pub f: Matrix4<C64>,
}

impl EvolutionMatrix {
    pub fn identity() -> Self {
        Self { t: 0.0, f: Matrix4::identity() }
    }

    /// `F_out^in`.
    pub fn coeff(&self, out: ModeLabel, input: ModeLabel) -> C64 {
        self.f[(out.index(), input.index())]
    }

    /// Image of `input†` as coefficients on `(a†, b†, A†, C†)`.
    pub fn column(&self, input: ModeLabel) -> [C64; 4] {
        let j = input.index();
        [self.f[(0, j)], self.f[(1, j)], self.f[(2, j)], self.f[(3, j)]]
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.f * self.f.adjoint() - Matrix4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &EvolutionMatrix) -> f64 {
        (self.f - other.f).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn compose(&self, later: &EvolutionMatrix) -> EvolutionMatrix {
        EvolutionMatrix { t: self.t + later.t, f: later.f * self.f }
    }
}

/// Anything that yields `F(t)`: a finite coupling or an explicit (limit) basis.
pub trait ModeEvolution {
    fn evolution_at(&self, t: f64) -> EvolutionMatrix;
}

impl ModeEvolution for CouplingConfig {
    fn evolution_at(&self, t: f64) -> EvolutionMatrix {
        evolution_matrix(self, t)
    }
}

impl ModeEvolution for PolaritonBasis {
    fn evolution_at(&self, t: f64) -> EvolutionMatrix {
        self.evolution(t)
    }
}

pub fn polariton_basis(cfg: &CouplingConfig) -> Result<PolaritonBasis> {
    PolaritonBasis::new(cfg)
}

/// `F(t) = exp(-i h t)` through the polariton spectrum. For the degenerate
/// origin `h = 0` and the map is the identity.
pub fn evolution_matrix(cfg: &CouplingConfig, t: f64) -> EvolutionMatrix {
    match PolaritonBasis::new(cfg) {
        Ok(basis) => basis.evolution(t),
        Err(_) => EvolutionMatrix { t, f: Matrix4::identity() },
    }
}

/// `F(t)` from a numerical Hermitian eigendecomposition of `h`, independent of
/// the closed-form polariton modes.
pub fn evolution_matrix_numeric(cfg: &CouplingConfig, t: f64) -> EvolutionMatrix {
    let h = single_particle_hamiltonian(cfg);
    let dense = DMatrix::from_iterator(4, 4, h.iter().copied());
    let u = HermitianEigen::new(&dense).propagator(t);
    EvolutionMatrix { t, f: Matrix4::from_iterator(u.iter().copied()) }
}
