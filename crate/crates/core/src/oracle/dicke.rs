//! Exact finite-`N` ensemble on the symmetric subspace.
//!
//! Basis labels are `(n_pa, n_pb, n_a, n_c)`: photon numbers of modes `a`, `b`
//! and the number of atoms in levels `a` and `c`, with `n_a + n_c ≤ N` and the
//! remaining atoms in the ground level `b`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::HermitianEigen;
use crate::polariton::{CouplingConfig, ModeLabel};

pub type DickeLabel = [usize; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct DickeSpace {
    n_atoms: usize,
    photon_cutoffs: [usize; 2],
    states: Vec<DickeLabel>,
    index: HashMap<DickeLabel, usize>,
}

fn check_atoms(n_atoms: usize) -> Result<()> {
    if n_atoms == 0 {
        return Err(Error::InvalidInput("need at least one atom".into()));
    }
    Ok(())
}

impl DickeSpace {
    /// Every label with photon numbers below `photon_cutoffs`.
    pub fn new(n_atoms: usize, photon_cutoffs: [usize; 2]) -> Result<Self> {
        check_atoms(n_atoms)?;
        for (mode, &c) in [ModeLabel::PhotonA, ModeLabel::PhotonB].iter().zip(&photon_cutoffs) {
            if c == 0 {
                return Err(Error::BadCutoff { mode: *mode, cutoff: 0 });
            }
        }
        let mut states = Vec::new();
        for pa in 0..photon_cutoffs[0] {
            for pb in 0..photon_cutoffs[1] {
                for na in 0..=n_atoms {
                    for nc in 0..=n_atoms - na {
                        states.push([pa, pb, na, nc]);
                    }
                }
            }
        }
        Ok(Self::from_states(n_atoms, photon_cutoffs, states))
    }

    /// Labels with total excitation `s`.
    pub fn sector(n_atoms: usize, s: usize) -> Result<Self> {
        check_atoms(n_atoms)?;
        let states = Self::new(n_atoms, [s + 1, s + 1])?
            .states
            .into_iter()
            .filter(|l| l.iter().sum::<usize>() == s)
            .collect();
        Ok(Self::from_states(n_atoms, [s + 1, s + 1], states))
    }

    fn from_states(n_atoms: usize, photon_cutoffs: [usize; 2], states: Vec<DickeLabel>) -> Self {
        let index = states.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        Self { n_atoms, photon_cutoffs, states, index }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn photon_cutoffs(&self) -> [usize; 2] {
        self.photon_cutoffs
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[DickeLabel] {
        &self.states
    }

    pub fn index_of(&self, label: &DickeLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Matrix of the map `|l⟩ → Σ coeff |l'⟩` given per label; targets outside
    /// the space are dropped.
    fn build(&self, f: impl Fn(&DickeLabel) -> Vec<(DickeLabel, C64)>) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (j, l) in self.states.iter().enumerate() {
            for (target, c) in f(l) {
                if let Some(i) = self.index_of(&target) {
                    m[(i, j)] += c;
                }
            }
        }
        m
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `√(n(N − n_a − n_c + 1))`: one atom leaves a level holding `n` for the ground level.
fn to_ground(n: usize, n_atoms: usize, occupied: usize) -> f64 {
    ((n * (n_atoms + 1 - occupied)) as f64).sqrt()
}

/// Operator matrices on a [`DickeSpace`]. Photon operators are truncated at the
/// space's cutoffs; the atomic ones are exact.
#[derive(Clone, Debug)]
pub struct DickeOperators {
    pub space: DickeSpace,
    pub a: DMatrix<C64>,
    pub b: DMatrix<C64>,
    /// `A = Σ_j σ_ba^{(j)} / √N`
    pub atom_a: DMatrix<C64>,
    /// `C = Σ_j σ_bc^{(j)} / √N`
    pub atom_c: DMatrix<C64>,
    /// `T⁺ = Σ_j σ_ac^{(j)}`
    pub t_plus: DMatrix<C64>,
    /// `T⁻ = Σ_j σ_ca^{(j)}`
    pub t_minus: DMatrix<C64>,
    /// `T^z = Σ_j (σ_aa^{(j)} − σ_cc^{(j)})`
    pub t_z: DMatrix<C64>,
}

pub fn dicke_operators(n_atoms: usize, photon_cutoffs: [usize; 2]) -> Result<DickeOperators> {
    let space = DickeSpace::new(n_atoms, photon_cutoffs)?;
    let n = n_atoms;
    let root_n = (n as f64).sqrt();
    let a = space.build(|&[pa, pb, na, nc]| {
        if pa == 0 { vec![] } else { vec![([pa - 1, pb, na, nc], re((pa as f64).sqrt()))] }
    });
    let b = space.build(|&[pa, pb, na, nc]| {
        if pb == 0 { vec![] } else { vec![([pa, pb - 1, na, nc], re((pb as f64).sqrt()))] }
    });
    let atom_a = space.build(|&[pa, pb, na, nc]| {
        if na == 0 { vec![] } else { vec![([pa, pb, na - 1, nc], re(to_ground(na, n, na + nc) / root_n))] }
    });
    let atom_c = space.build(|&[pa, pb, na, nc]| {
        if nc == 0 { vec![] } else { vec![([pa, pb, na, nc - 1], re(to_ground(nc, n, na + nc) / root_n))] }
    });
    let t_minus = space.build(|&[pa, pb, na, nc]| {
        if na == 0 { vec![] } else { vec![([pa, pb, na - 1, nc + 1], re(((na * (nc + 1)) as f64).sqrt()))] }
    });
    let t_plus = t_minus.adjoint();
    let t_z = space.build(|&l| vec![(l, re(l[2] as f64 - l[3] as f64))]);
    Ok(DickeOperators { space, a, b, atom_a, atom_c, t_plus, t_minus, t_z })
}

/// `H = g_N(a A† + b C†) + Ω e^{iφ} T⁺ + h.c.` on `space`. Exact when the
/// space is a full excitation sector.
pub fn finite_n_hamiltonian(space: &DickeSpace, cfg: &CouplingConfig) -> DMatrix<C64> {
    let n = space.n_atoms();
    let g = cfg.g_n() / (n as f64).sqrt();
    let drive = C64::from_polar(cfg.omega(), cfg.phi());
    space.build(|&[pa, pb, na, nc]| {
        let occ = na + nc;
        let mut out = Vec::with_capacity(6);
        if pa > 0 && occ < n {
            out.push(([pa - 1, pb, na + 1, nc], re(g * (pa as f64).sqrt() * to_ground(na + 1, n, occ + 1))));
        }
        if na > 0 {
            out.push(([pa + 1, pb, na - 1, nc], re(g * ((pa + 1) as f64).sqrt() * to_ground(na, n, occ))));
        }
        if pb > 0 && occ < n {
            out.push(([pa, pb - 1, na, nc + 1], re(g * (pb as f64).sqrt() * to_ground(nc + 1, n, occ + 1))));
        }
        if nc > 0 {
            out.push(([pa, pb + 1, na, nc - 1], re(g * ((pb + 1) as f64).sqrt() * to_ground(nc, n, occ))));
            out.push(([pa, pb, na + 1, nc - 1], drive * (((na + 1) * nc) as f64).sqrt()));
        }
        if na > 0 {
            out.push(([pa, pb, na - 1, nc + 1], drive.conj() * ((na * (nc + 1)) as f64).sqrt()));
        }
        out
    })
}

/// A normalised state on a [`DickeSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct DickeState {
    space: DickeSpace,
    amplitudes: DVector<C64>,
}

impl DickeState {
    pub fn new(space: DickeSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::InvalidInput(format!(
                "expected {} amplitudes, got {}",
                space.dim(),
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("Dicke state must be normalised, norm is {norm}")));
        }
        Ok(Self { space, amplitudes })
    }

    /// `|label⟩` in the space with the given photon cutoffs.
    pub fn basis_state(n_atoms: usize, photon_cutoffs: [usize; 2], label: DickeLabel) -> Result<Self> {
        let space = DickeSpace::new(n_atoms, photon_cutoffs)?;
        let i = space.index_of(&label).ok_or_else(|| {
            Error::InvalidInput(format!("{label:?} is not a valid label for N = {n_atoms}, cutoffs {photon_cutoffs:?}"))
        })?;
        let mut amps = DVector::zeros(space.dim());
        amps[i] = re(1.0);
        Ok(Self { space, amplitudes: amps })
    }

    /// Photons `|m, n⟩` with every atom in the ground level; cutoffs sized to
    /// hold all `m + n` excitations in either photon mode.
    pub fn photons_over_ground(n_atoms: usize, m: usize, n: usize) -> Result<Self> {
        let c = m + n + 1;
        Self::basis_state(n_atoms, [c, c], [m, n, 0, 0])
    }

    pub fn space(&self) -> &DickeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn entries(&self) -> impl Iterator<Item = (DickeLabel, C64)> + '_ {
        self.space.states.iter().copied().zip(self.amplitudes.iter().copied())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨n_pa + n_pb + n_a + n_c⟩`.
    pub fn mean_excitation(&self) -> f64 {
        self.entries().map(|(l, a)| l.iter().sum::<usize>() as f64 * a.norm_sqr()).sum()
    }

    fn sectors(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .entries()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(l, _)| l.iter().sum())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Reduced state of the two photon modes, indexed `n_pa · cutoff_b + n_pb`.
    pub fn photon_density(&self) -> DMatrix<C64> {
        photon_density(self.entries(), self.space.photon_cutoffs)
    }
}

/// `Tr_atoms |ψ⟩⟨ψ|` for amplitudes labelled `(n_pa, n_pb, atomic…)`, indexed
/// `n_pa · cutoffs[1] + n_pb`.
pub fn photon_density(entries: impl Iterator<Item = ([usize; 4], C64)>, cutoffs: [usize; 2]) -> DMatrix<C64> {
    let mut atomic: HashMap<[usize; 2], Vec<(usize, C64)>> = HashMap::new();
    for (l, a) in entries {
        if a == C64::new(0.0, 0.0) {
            continue;
        }
        assert!(l[0] < cutoffs[0] && l[1] < cutoffs[1], "photon label {l:?} exceeds cutoffs {cutoffs:?}");
        atomic.entry([l[2], l[3]]).or_default().push((l[0] * cutoffs[1] + l[1], a));
    }
    let dim = cutoffs[0] * cutoffs[1];
    let mut rho = DMatrix::zeros(dim, dim);
    for column in atomic.values() {
        for &(i, x) in column {
            for &(j, y) in column {
                rho[(i, j)] += x * y.conj();
            }
        }
    }
    rho
}

/// Exact propagator for the finite-`N` model on excitation sectors `0..=max_sector`.
#[derive(Clone, Debug)]
pub struct FiniteNPropagator {
    n_atoms: usize,
    blocks: Vec<(DickeSpace, HermitianEigen)>,
}

impl FiniteNPropagator {
    pub fn new(n_atoms: usize, cfg: &CouplingConfig, max_sector: usize) -> Result<Self> {
        let blocks = (0..=max_sector)
            .map(|s| {
                let space = DickeSpace::sector(n_atoms, s)?;
                let eig = HermitianEigen::new(&finite_n_hamiltonian(&space, cfg));
                Ok((space, eig))
            })
            .collect::<Result<_>>()?;
        Ok(Self { n_atoms, blocks })
    }

    pub fn sector_space(&self, s: usize) -> Option<&DickeSpace> {
        self.blocks.get(s).map(|b| &b.0)
    }

    pub fn propagate(&self, initial: &DickeState, t: f64) -> Result<DickeState> {
        if initial.space.n_atoms != self.n_atoms {
            return Err(Error::InvalidInput("atom number mismatch".into()));
        }
        let cut = initial.space.photon_cutoffs;
        let mut out = DVector::zeros(initial.space.dim());
        for s in initial.sectors() {
            for (mode, &c) in [ModeLabel::PhotonA, ModeLabel::PhotonB].iter().zip(&cut) {
                if c <= s {
                    return Err(Error::CutoffOverflow { mode: *mode, needed: s, cutoff: c });
                }
            }
            let (space, eig) = self.blocks.get(s).ok_or_else(|| {
                Error::InvalidInput(format!("sector {s} not prepared (max {})", self.blocks.len() - 1))
            })?;
            let v = DVector::from_iterator(
                space.dim(),
                space.states.iter().map(|l| initial.space.index_of(l).map_or(C64::new(0.0, 0.0), |i| initial.amplitudes[i])),
            );
            let w = eig.apply(t, &v);
            for (l, x) in space.states.iter().zip(w.iter()) {
                let i = initial.space.index_of(l).expect("photon cutoffs exceed the sector");
                out[i] = *x;
            }
        }
        Ok(DickeState { space: initial.space.clone(), amplitudes: out })
    }
}

pub fn exact_finite_n_propagate(initial: &DickeState, cfg: &CouplingConfig, t: f64) -> Result<DickeState> {
    let max_sector = initial.sectors().last().copied().unwrap_or(0);
    FiniteNPropagator::new(initial.space.n_atoms, cfg, max_sector)?.propagate(initial, t)
}
