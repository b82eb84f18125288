//! Dense truncated Fock space over the four modes `(a, b, A, C)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;
use crate::polariton::ModeLabel;

pub type Occupation = [usize; 4];

/// Eigenvalues of a reduced density matrix below this are exact zeros.
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-14;

/// Amplitudes smaller than this are left out of the JSON form.
pub const JSON_AMPLITUDE_FLOOR: f64 = 1e-15;

/// Amplitude tensor `ψ[n_a][n_b][n_A][n_C]`, `0 ≤ n_x < cutoff_x`, stored
/// row-major with `C` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedFockState {
    cutoffs: Occupation,
    amplitudes: Vec<C64>,
    sector: Option<usize>,
}

fn check_cutoffs(cutoffs: Occupation) -> Result<()> {
    for mode in ModeLabel::ALL {
        if cutoffs[mode.index()] < 1 {
            return Err(Error::BadCutoff { mode, cutoff: cutoffs[mode.index()] });
        }
    }
    Ok(())
}

fn total(occ: &Occupation) -> usize {
    occ.iter().sum()
}

/// `√((n+k)!/n!)`.
fn ladder_factor(n: usize, k: usize) -> f64 {
    (n + 1..=n + k).map(|m| m as f64).product::<f64>().sqrt()
}

impl TruncatedFockState {
    pub fn zeros(cutoffs: Occupation) -> Result<Self> {
        check_cutoffs(cutoffs)?;
        let dim = cutoffs.iter().product();
        Ok(Self { cutoffs, amplitudes: vec![C64::new(0.0, 0.0); dim], sector: None })
    }

    pub fn vacuum(cutoffs: Occupation) -> Result<Self> {
        Self::number_state([0; 4], cutoffs)
    }

    /// `|n_a, n_b, n_A, n_C⟩`.
    pub fn number_state(occ: Occupation, cutoffs: Occupation) -> Result<Self> {
        let mut s = Self::zeros(cutoffs)?;
        s.check_fits(&occ)?;
        let i = s.linear_index(&occ);
        s.amplitudes[i] = C64::new(1.0, 0.0);
        s.sector = Some(total(&occ));
        Ok(s)
    }

    /// Cutoffs `(s+1, s+1, s+1, s+1)`, the smallest that hold all of sector `s`.
    pub fn sector_cutoffs(sector: usize) -> Occupation {
        [sector + 1; 4]
    }

    /// Builds a state from raw amplitudes. A declared sector is checked: every
    /// amplitude outside it must be exactly zero.
    pub fn from_amplitudes(cutoffs: Occupation, amplitudes: Vec<C64>, sector: Option<usize>) -> Result<Self> {
        check_cutoffs(cutoffs)?;
        let dim: usize = cutoffs.iter().product();
        if amplitudes.len() != dim {
            return Err(Error::InvalidInput(format!(
                "expected {dim} amplitudes for cutoffs {cutoffs:?}, got {}",
                amplitudes.len()
            )));
        }
        let s = Self { cutoffs, amplitudes, sector: None };
        if let Some(k) = sector {
            if s.iter_nonzero().any(|(occ, _)| total(&occ) != k) {
                return Err(Error::InvalidInput(format!("amplitudes leave sector {k}")));
            }
        }
        Ok(Self { sector, ..s })
    }

    /// Builds a state from an occupation → amplitude function.
    pub fn from_fn(cutoffs: Occupation, sector: Option<usize>, f: impl Fn(Occupation) -> C64) -> Result<Self> {
        let mut s = Self::zeros(cutoffs)?;
        for i in 0..s.amplitudes.len() {
            let occ = s.occupation(i);
            if sector.is_none_or(|k| total(&occ) == k) {
                s.amplitudes[i] = f(occ);
            }
        }
        s.sector = sector;
        Ok(s)
    }

    pub fn cutoffs(&self) -> Occupation {
        self.cutoffs
    }

    pub fn sector(&self) -> Option<usize> {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn linear_index(&self, occ: &Occupation) -> usize {
        let c = &self.cutoffs;
        ((occ[0] * c[1] + occ[1]) * c[2] + occ[2]) * c[3] + occ[3]
    }

    pub fn occupation(&self, mut i: usize) -> Occupation {
        let c = &self.cutoffs;
        let n_c = i % c[3];
        i /= c[3];
        let n_atom_a = i % c[2];
        i /= c[2];
        let n_b = i % c[1];
        [i / c[1], n_b, n_atom_a, n_c]
    }

    fn fits(&self, occ: &Occupation) -> bool {
        occ.iter().zip(&self.cutoffs).all(|(n, c)| n < c)
    }

    fn check_fits(&self, occ: &Occupation) -> Result<()> {
        for mode in ModeLabel::ALL {
            let (n, c) = (occ[mode.index()], self.cutoffs[mode.index()]);
            if n >= c {
                return Err(Error::CutoffOverflow { mode, needed: n, cutoff: c });
            }
        }
        Ok(())
    }

    /// Amplitude of `|occ⟩`; zero outside the truncated space.
    pub fn amplitude(&self, occ: Occupation) -> C64 {
        if self.fits(&occ) {
            self.amplitudes[self.linear_index(&occ)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (Occupation, C64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != C64::new(0.0, 0.0))
            .map(|(i, a)| (self.occupation(i), *a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidInput("cannot normalise the zero state".into()));
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    pub fn scaled(mut self, c: C64) -> Self {
        self.amplitudes.iter_mut().for_each(|a| *a *= c);
        self
    }

    /// `⟨self|other⟩`. Cutoffs may differ; amplitudes outside either space count as zero.
    pub fn inner(&self, other: &Self) -> C64 {
        if self.cutoffs == other.cutoffs {
            return self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| x.conj() * y).sum();
        }
        self.iter_nonzero().map(|(occ, x)| x.conj() * other.amplitude(occ)).sum()
    }

    /// `|⟨self|other⟩|`, insensitive to global phase. Both states are taken as
    /// they are, so this is the fidelity only for normalised inputs.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let diff: f64 = self.iter_nonzero().chain(other.iter_nonzero())
            .map(|(occ, _)| occ)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|occ| (self.amplitude(occ) - other.amplitude(occ)).norm_sqr())
            .sum();
        diff.sqrt()
    }

    /// Re-embeds into new cutoffs; fails if a nonzero amplitude would be dropped.
    pub fn resized(&self, cutoffs: Occupation) -> Result<Self> {
        let mut out = Self::zeros(cutoffs)?;
        for (occ, a) in self.iter_nonzero() {
            out.check_fits(&occ)?;
            let i = out.linear_index(&occ);
            out.amplitudes[i] = a;
        }
        out.sector = self.sector;
        Ok(out)
    }

    /// Applies `mode†`.
    pub fn create(&self, mode: ModeLabel) -> Result<Self> {
        let mut out = Self::zeros(self.cutoffs)?;
        let k = mode.index();
        for (mut occ, a) in self.iter_nonzero() {
            occ[k] += 1;
            out.check_fits(&occ)?;
            let i = out.linear_index(&occ);
            out.amplitudes[i] += a * (occ[k] as f64).sqrt();
        }
        out.sector = self.sector.map(|s| s + 1);
        Ok(out)
    }

    /// Applies `mode`.
    pub fn annihilate(&self, mode: ModeLabel) -> Self {
        let mut out = Self::zeros(self.cutoffs).expect("cutoffs already validated");
        let k = mode.index();
        for (mut occ, a) in self.iter_nonzero() {
            if occ[k] == 0 {
                continue;
            }
            let factor = (occ[k] as f64).sqrt();
            occ[k] -= 1;
            let i = out.linear_index(&occ);
            out.amplitudes[i] += a * factor;
        }
        out.sector = match self.sector {
            Some(0) => None,
            s => s.map(|s| s - 1),
        };
        out
    }

    /// `⟨ψ|x|ψ⟩`.
    pub fn mean_lowering(&self, mode: ModeLabel) -> C64 {
        self.inner(&self.annihilate(mode))
    }

    /// `⟨ψ|x†x|ψ⟩`.
    pub fn mean_number(&self, mode: ModeLabel) -> f64 {
        let k = mode.index();
        self.iter_nonzero().map(|(occ, a)| occ[k] as f64 * a.norm_sqr()).sum()
    }

    /// Probability weight in the given occupation subset.
    pub fn weight_where(&self, pred: impl Fn(&Occupation) -> bool) -> f64 {
        self.iter_nonzero().filter(|(occ, _)| pred(occ)).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Relabels two modes, e.g. `a ↔ b`.
    pub fn swap_modes(&self, x: ModeLabel, y: ModeLabel) -> Self {
        let mut cutoffs = self.cutoffs;
        cutoffs.swap(x.index(), y.index());
        let mut out = Self::zeros(cutoffs).expect("cutoffs already validated");
        for (mut occ, a) in self.iter_nonzero() {
            occ.swap(x.index(), y.index());
            let i = out.linear_index(&occ);
            out.amplitudes[i] = a;
        }
        out.sector = self.sector;
        out
    }

    pub fn to_json(&self) -> Result<String> {
        crate::format::to_json_string(&StateJson::from(self)).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::try_from(raw)
    }
}

impl Add for &TruncatedFockState {
    type Output = TruncatedFockState;

    fn add(self, rhs: &TruncatedFockState) -> TruncatedFockState {
        assert_eq!(self.cutoffs, rhs.cutoffs, "adding states with different cutoffs");
        let amplitudes = self.amplitudes.iter().zip(&rhs.amplitudes).map(|(x, y)| x + y).collect();
        let sector = if self.sector == rhs.sector { self.sector } else { None };
        TruncatedFockState { cutoffs: self.cutoffs, amplitudes, sector }
    }
}

#[derive(Serialize, Deserialize)]
struct AmplitudeJson {
    idx: Occupation,
    re: f64,
    im: f64,
}

/// `{cutoffs, sector, amplitudes: [{idx, re, im}]}`.
#[derive(Serialize, Deserialize)]
pub struct StateJson {
    cutoffs: Occupation,
    sector: Option<usize>,
    amplitudes: Vec<AmplitudeJson>,
}

impl From<&TruncatedFockState> for StateJson {
    fn from(s: &TruncatedFockState) -> Self {
        let amplitudes = s
            .iter_nonzero()
            .filter(|(_, a)| a.norm() >= JSON_AMPLITUDE_FLOOR)
            .map(|(idx, a)| AmplitudeJson { idx, re: a.re, im: a.im })
            .collect();
        StateJson { cutoffs: s.cutoffs, sector: s.sector, amplitudes }
    }
}

impl TryFrom<StateJson> for TruncatedFockState {
    type Error = Error;

    fn try_from(raw: StateJson) -> Result<Self> {
        let mut s = TruncatedFockState::zeros(raw.cutoffs)?;
        for amp in raw.amplitudes {
            s.check_fits(&amp.idx)?;
            let i = s.linear_index(&amp.idx);
            s.amplitudes[i] = C64::new(amp.re, amp.im);
        }
        TruncatedFockState::from_amplitudes(s.cutoffs, s.amplitudes, raw.sector)
    }
}

/// One term `c · a†^{p_a} b†^{p_b} A†^{p_A} C†^{p_C}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: C64,
    pub powers: [u32; 4],
}

/// A polynomial in the four creation operators. Like powers are merged.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CreationPolynomial {
    terms: BTreeMap<[u32; 4], C64>,
}

impl CreationPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(C64::new(1.0, 0.0), [0; 4])
    }

    pub fn monomial(coeff: C64, powers: [u32; 4]) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, powers);
        p
    }

    /// `Σ_x c_x x†`.
    pub fn linear(coeffs: [C64; 4]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            let mut powers = [0; 4];
            powers[k] = 1;
            p.add_term(c, powers);
        }
        p
    }

    /// `mode†`.
    pub fn creation(mode: ModeLabel) -> Self {
        let mut powers = [0; 4];
        powers[mode.index()] = 1;
        Self::monomial(C64::new(1.0, 0.0), powers)
    }

    fn add_term(&mut self, coeff: C64, powers: [u32; 4]) {
        if coeff == C64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry(powers).or_insert(C64::new(0.0, 0.0)) += coeff;
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(p, c)| Monomial { coeff: *c, powers: *p })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common total degree, or `None` for mixed degrees or the zero polynomial.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|p| p.iter().sum::<u32>() as usize);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn scale(mut self, c: C64) -> Self {
        self.terms.values_mut().for_each(|v| *v *= c);
        self
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Mul for &CreationPolynomial {
    type Output = CreationPolynomial;

    fn mul(self, rhs: &CreationPolynomial) -> CreationPolynomial {
        let mut out = CreationPolynomial::zero();
        for (p, c) in &self.terms {
            for (q, d) in &rhs.terms {
                let powers = [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]];
                out.add_term(c * d, powers);
            }
        }
        out
    }
}

impl Add for &CreationPolynomial {
    type Output = CreationPolynomial;

    fn add(self, rhs: &CreationPolynomial) -> CreationPolynomial {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(*c, *p);
        }
        out
    }
}

/// `P(a†, b†, A†, C†)|s⟩` with exact bosonic ladder factors and no
/// normalisation. Never truncates: a term reaching a cutoff is an error.
pub fn apply_creation_polynomial(p: &CreationPolynomial, s: &TruncatedFockState) -> Result<TruncatedFockState> {
    let mut out = TruncatedFockState::zeros(s.cutoffs)?;
    let source: Vec<(Occupation, C64)> = s.iter_nonzero().collect();
    for term in p.terms() {
        for &(occ, amp) in &source {
            let mut target = occ;
            let mut factor = 1.0;
            for k in 0..4 {
                let add = term.powers[k] as usize;
                factor *= ladder_factor(occ[k], add);
                target[k] += add;
            }
            out.check_fits(&target)?;
            let i = out.linear_index(&target);
            out.amplitudes[i] += term.coeff * amp * factor;
        }
    }
    out.sector = match (s.sector, p.homogeneous_degree()) {
        (Some(k), Some(d)) => Some(k + d),
        _ => None,
    };
    if p.is_empty() {
        out.sector = None;
    }
    Ok(out)
}

/// Multi-index order of the kept modes, canonical mode order.
fn split_dims(keep: &[ModeLabel]) -> (Vec<usize>, Vec<usize>) {
    let kept: Vec<usize> = ModeLabel::ALL.iter().filter(|m| keep.contains(m)).map(|m| m.index()).collect();
    let rest: Vec<usize> = (0..4).filter(|k| !kept.contains(k)).collect();
    (kept, rest)
}

fn flat(occ: &Occupation, modes: &[usize], cutoffs: &Occupation) -> usize {
    modes.iter().fold(0, |acc, &k| acc * cutoffs[k] + occ[k])
}

/// The state reshaped to a `(kept × rest)` matrix, normalised.
fn bipartite_matrix(s: &TruncatedFockState, keep: &[ModeLabel]) -> DMatrix<C64> {
    let (kept, rest) = split_dims(keep);
    let dk: usize = kept.iter().map(|&k| s.cutoffs[k]).product();
    let dr: usize = rest.iter().map(|&k| s.cutoffs[k]).product();
    let norm = s.norm();
    let mut psi = DMatrix::zeros(dk, dr);
    for (occ, a) in s.iter_nonzero() {
        psi[(flat(&occ, &kept, &s.cutoffs), flat(&occ, &rest, &s.cutoffs))] = a / norm;
    }
    psi
}

/// `ρ_keep = Tr_rest |ψ⟩⟨ψ|`, indexed lexicographically over the kept modes in
/// canonical order. The state is normalised first.
pub fn reduced_density(s: &TruncatedFockState, keep: &[ModeLabel]) -> DMatrix<C64> {
    let psi = bipartite_matrix(s, keep);
    &psi * psi.adjoint()
}

/// `-Σ λ log₂ λ` over the eigenvalues of `ρ`, dropping those below
/// [`ENTROPY_EIGEN_FLOOR`].
pub fn von_neumann_entropy(rho: &DMatrix<C64>) -> f64 {
    HermitianEigen::new(rho)
        .values
        .iter()
        .filter(|&&l| l > ENTROPY_EIGEN_FLOOR)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Entanglement entropy (bits) of a pure state across the cut `keep | rest`.
/// Diagonalises whichever reduced state is smaller.
pub fn entanglement_entropy(s: &TruncatedFockState, keep: &[ModeLabel]) -> f64 {
    let psi = bipartite_matrix(s, keep);
    let rho = if psi.nrows() <= psi.ncols() { &psi * psi.adjoint() } else { psi.adjoint() * &psi };
    von_neumann_entropy(&rho)
}

pub fn complement(keep: &[ModeLabel]) -> Vec<ModeLabel> {
    ModeLabel::ALL.into_iter().filter(|m| !keep.contains(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;
    use ModeLabel::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn vacuum_properties() {
        let v = TruncatedFockState::vacuum([2, 2, 2, 2]).unwrap();
        assert_eq!(v.sector(), Some(0));
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!((v.inner(&v) - c(1.0)).norm() < 1e-15);
        for m in ModeLabel::ALL {
            assert_eq!(v.mean_number(m), 0.0);
            assert_eq!(v.annihilate(m).norm(), 0.0);
        }
    }

    #[test]
    fn bad_cutoff_is_rejected() {
        assert_eq!(
            TruncatedFockState::vacuum([2, 0, 2, 2]),
            Err(Error::BadCutoff { mode: PhotonB, cutoff: 0 })
        );
    }

    #[test]
    fn single_and_double_creation() {
        let v = TruncatedFockState::vacuum([3, 3, 1, 1]).unwrap();
        let one = apply_creation_polynomial(&CreationPolynomial::creation(PhotonA), &v).unwrap();
        assert_eq!(one.amplitude([1, 0, 0, 0]), c(1.0));
        let two = apply_creation_polynomial(&CreationPolynomial::creation(PhotonA).pow(2), &v).unwrap();
        assert!((two.amplitude([2, 0, 0, 0]) - c(2f64.sqrt())).norm() < 1e-15);
        assert_eq!(two.sector(), Some(2));
    }

    #[test]
    fn two_mode_binomial_against_direct_expansion() {
        // ((a† + b†)/√2)² |0⟩ / √2 = (|20⟩ + √2|11⟩ + |02⟩)/2
        let v = TruncatedFockState::vacuum([3, 3, 1, 1]).unwrap();
        let p = CreationPolynomial::linear([c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0), c(0.0)]);
        let psi = apply_creation_polynomial(&p.pow(2), &v).unwrap().scaled(c(FRAC_1_SQRT_2));
        // oracle: Σ_k C(2,k) (a†)^k (b†)^{2-k} / 2 / √2 with a†^k|0⟩ = √k!|k⟩
        let fact = |n: usize| (1..=n).product::<usize>() as f64;
        for k in 0..=2usize {
            let binom = fact(2) / (fact(k) * fact(2 - k));
            let expected = binom * (fact(k) * fact(2 - k)).sqrt() / 2.0 * FRAC_1_SQRT_2;
            assert!((psi.amplitude([k, 2 - k, 0, 0]) - c(expected)).norm() < 1e-15);
        }
        assert!((psi.amplitude([1, 1, 0, 0]) - c(2f64.sqrt() / 2.0)).norm() < 1e-15);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overflow_is_an_error_not_a_truncation() {
        let v = TruncatedFockState::vacuum([2, 2, 2, 2]).unwrap();
        let err = apply_creation_polynomial(&CreationPolynomial::creation(AtomC).pow(2), &v).unwrap_err();
        assert_eq!(err, Error::CutoffOverflow { mode: AtomC, needed: 2, cutoff: 2 });
    }

    #[test]
    fn reduced_density_of_schmidt_states() {
        let cut = [3, 3, 1, 1];
        let product = TruncatedFockState::number_state([1, 0, 0, 0], cut).unwrap();
        let rho = reduced_density(&product, &[PhotonA]);
        assert_eq!(rho.shape(), (3, 3));
        assert!((rho[(1, 1)] - c(1.0)).norm() < 1e-15);
        assert!(entanglement_entropy(&product, &[PhotonA]).abs() < 1e-15);

        let bell = &TruncatedFockState::number_state([2, 0, 0, 0], cut).unwrap()
            + &TruncatedFockState::number_state([0, 2, 0, 0], cut).unwrap();
        let bell = bell.normalized().unwrap();
        let rho = reduced_density(&bell, &[PhotonA]);
        assert!((rho[(0, 0)] - c(0.5)).norm() < 1e-15);
        assert!((rho[(2, 2)] - c(0.5)).norm() < 1e-15);
        assert!(rho[(1, 1)].norm() < 1e-15);
        assert!((entanglement_entropy(&bell, &[PhotonA]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_level_maximal_entanglement() {
        let cut = [3, 3, 1, 1];
        let psi = TruncatedFockState::from_fn(cut, Some(2), |occ| match occ {
            [2, 0, 0, 0] | [0, 2, 0, 0] => c(1.0),
            [1, 1, 0, 0] => C64::new(0.0, 1.0),
            _ => c(0.0),
        })
        .unwrap()
        .normalized()
        .unwrap();
        assert!((entanglement_entropy(&psi, &[PhotonA]) - 3f64.log2()).abs() < 1e-12);
        assert!((entanglement_entropy(&psi, &[PhotonB, AtomA, AtomC]) - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_and_schema() {
        let psi = TruncatedFockState::from_fn([2, 2, 1, 1], Some(1), |occ| match occ {
            [1, 0, 0, 0] => C64::new(0.6, 0.0),
            [0, 1, 0, 0] => C64::new(0.0, -0.8),
            _ => c(0.0),
        })
        .unwrap();
        let text = psi.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cutoffs"], serde_json::json!([2, 2, 1, 1]));
        assert_eq!(v["sector"], serde_json::json!(1));
        assert_eq!(v["amplitudes"].as_array().unwrap().len(), 2);
        assert_eq!(TruncatedFockState::from_json(&text).unwrap(), psi);
    }

    #[test]
    fn json_rejects_amplitudes_outside_declared_sector() {
        let text = r#"{"cutoffs":[2,2,1,1],"sector":1,"amplitudes":[{"idx":[0,0,0,0],"re":1.0,"im":0.0}]}"#;
        assert!(TruncatedFockState::from_json(text).is_err());
    }
}
