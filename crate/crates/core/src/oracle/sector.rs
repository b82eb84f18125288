use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{Occupation, TruncatedFockState};
use crate::linalg::HermitianEigen;
use crate::polariton::{single_particle_hamiltonian, CouplingConfig};

/// All `(n_a, n_b, n_A, n_C)` with a fixed total, in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBasis {
    sector: usize,
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl SectorBasis {
    pub fn new(sector: usize) -> Self {
        let mut states = Vec::with_capacity((sector + 1) * (sector + 2) * (sector + 3) / 6);
        for n_a in 0..=sector {
            for n_b in 0..=sector - n_a {
                for n_atom_a in 0..=sector - n_a - n_b {
                    states.push([n_a, n_b, n_atom_a, sector - n_a - n_b - n_atom_a]);
                }
            }
        }
        let index = states.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        Self { sector, states, index }
    }

    pub fn sector(&self) -> usize {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn occupation(&self, i: usize) -> Occupation {
        self.states[i]
    }

    pub fn index_of(&self, occ: &Occupation) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Second quantisation of a single-particle matrix: `Σ_{βα} m[β][α] β†α`.
    pub fn lift(&self, m: &Matrix4<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (j, occ) in self.states.iter().enumerate() {
            for alpha in 0..4 {
                if occ[alpha] == 0 {
                    continue;
                }
                let mut lowered = *occ;
                lowered[alpha] -= 1;
                let down = (occ[alpha] as f64).sqrt();
                for beta in 0..4 {
                    let coeff = m[(beta, alpha)];
                    if coeff == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut target = lowered;
                    target[beta] += 1;
                    let up = (target[beta] as f64).sqrt();
                    out[(self.index[&target], j)] += coeff * down * up;
                }
            }
        }
        out
    }

    /// Sector components of `state`, in basis order. Amplitudes outside the
    /// sector are ignored.
    pub fn vector_from(&self, state: &TruncatedFockState) -> DVector<C64> {
        DVector::from_iterator(self.dim(), self.states.iter().map(|o| state.amplitude(*o)))
    }

    /// The vector as a state with sector-sized cutoffs.
    pub fn state_from(&self, v: &DVector<C64>) -> TruncatedFockState {
        let mut amps = vec![C64::new(0.0, 0.0); (self.sector + 1).pow(4)];
        let cut = TruncatedFockState::sector_cutoffs(self.sector);
        let probe = TruncatedFockState::zeros(cut).expect("sector cutoffs are positive");
        for (occ, a) in self.states.iter().zip(v.iter()) {
            amps[probe.linear_index(occ)] = *a;
        }
        TruncatedFockState::from_amplitudes(cut, amps, Some(self.sector)).expect("amplitudes stay in the sector")
    }
}

/// The bosonised many-body Hamiltonian on one excitation sector.
pub fn sector_hamiltonian(cfg: &CouplingConfig, basis: &SectorBasis) -> DMatrix<C64> {
    basis.lift(&single_particle_hamiltonian(cfg))
}

/// Exact propagator on a range of sectors, diagonalised once.
#[derive(Clone, Debug)]
pub struct SectorPropagator {
    cfg: CouplingConfig,
    blocks: Vec<(SectorBasis, HermitianEigen)>,
}

impl SectorPropagator {
    /// Diagonalises sectors `0..=max_sector`.
    pub fn new(cfg: &CouplingConfig, max_sector: usize) -> Self {
        let blocks = (0..=max_sector)
            .map(|s| {
                let basis = SectorBasis::new(s);
                let eig = HermitianEigen::new(&sector_hamiltonian(cfg, &basis));
                (basis, eig)
            })
            .collect();
        Self { cfg: *cfg, blocks }
    }

    pub fn config(&self) -> &CouplingConfig {
        &self.cfg
    }

    pub fn max_sector(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn basis(&self, sector: usize) -> &SectorBasis {
        &self.blocks[sector].0
    }

    fn block(&self, sector: usize) -> Result<&(SectorBasis, HermitianEigen)> {
        self.blocks.get(sector).ok_or_else(|| {
            Error::InvalidInput(format!("sector {sector} not prepared (max {})", self.max_sector()))
        })
    }

    pub fn propagate_vector(&self, sector: usize, v: &DVector<C64>, t: f64) -> Result<DVector<C64>> {
        Ok(self.block(sector)?.1.apply(t, v))
    }

    pub fn propagator(&self, sector: usize, t: f64) -> Result<DMatrix<C64>> {
        Ok(self.block(sector)?.1.propagator(t))
    }

    /// Propagates a state carrying sector metadata; the result has
    /// sector-sized cutoffs.
    pub fn propagate(&self, state: &TruncatedFockState, t: f64) -> Result<TruncatedFockState> {
        let s = state.sector().ok_or(Error::SectorMissing)?;
        let (basis, eig) = self.block(s)?;
        Ok(basis.state_from(&eig.apply(t, &basis.vector_from(state))))
    }
}

/// `exp(-iHt)|ψ⟩` by brute-force diagonalisation of `H` on the state's sector.
pub fn expm_propagate(initial: &TruncatedFockState, cfg: &CouplingConfig, t: f64) -> Result<TruncatedFockState> {
    let s = initial.sector().ok_or(Error::SectorMissing)?;
    let basis = SectorBasis::new(s);
    let eig = HermitianEigen::new(&sector_hamiltonian(cfg, &basis));
    Ok(basis.state_from(&eig.apply(t, &basis.vector_from(initial))))
}
