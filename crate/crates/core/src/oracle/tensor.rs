//! Full `3^N` product space for a handful of atoms, used to check the Dicke
//! matrix elements. Single-atom levels are ordered `b, a, c`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::dicke::{dicke_operators, DickeSpace};
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;

pub const MAX_TENSOR_ATOMS: usize = 6;

const B: usize = 0;
const A: usize = 1;
const C: usize = 2;

fn transition(to: usize, from: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(3, 3);
    m[(to, from)] = C64::new(1.0, 0.0);
    m
}

/// `Σ_j 1 ⊗ … ⊗ op^{(j)} ⊗ … ⊗ 1`.
fn collective(n_atoms: usize, op: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = 3usize.pow(n_atoms as u32);
    let mut out = DMatrix::zeros(dim, dim);
    for j in 0..n_atoms {
        let left = 3usize.pow(j as u32);
        let right = 3usize.pow((n_atoms - j - 1) as u32);
        let term = DMatrix::<C64>::identity(left, left).kronecker(op).kronecker(&DMatrix::identity(right, right));
        out += term;
    }
    out
}

#[derive(Clone, Debug)]
pub struct TensorOperators {
    pub n_atoms: usize,
    pub atom_a: DMatrix<C64>,
    pub atom_c: DMatrix<C64>,
    pub t_plus: DMatrix<C64>,
    pub t_minus: DMatrix<C64>,
    pub t_z: DMatrix<C64>,
}

pub fn tensor_operators(n_atoms: usize) -> Result<TensorOperators> {
    if n_atoms == 0 || n_atoms > MAX_TENSOR_ATOMS {
        return Err(Error::InvalidInput(format!("tensor oracle supports 1..={MAX_TENSOR_ATOMS} atoms")));
    }
    let scale = C64::new((n_atoms as f64).sqrt().recip(), 0.0);
    let z = transition(A, A) - transition(C, C);
    Ok(TensorOperators {
        n_atoms,
        atom_a: collective(n_atoms, &transition(B, A)) * scale,
        atom_c: collective(n_atoms, &transition(B, C)) * scale,
        t_plus: collective(n_atoms, &transition(A, C)),
        t_minus: collective(n_atoms, &transition(C, A)),
        t_z: collective(n_atoms, &z),
    })
}

/// Columns are the symmetrised product states `|n_a, n_c⟩` of `space`
/// (photon cutoffs must be 1).
pub fn symmetric_isometry(space: &DickeSpace) -> DMatrix<C64> {
    let n = space.n_atoms();
    let dim = 3usize.pow(n as u32);
    let mut v = DMatrix::zeros(dim, space.dim());
    let mut counts = vec![0usize; space.dim()];
    let mut members = Vec::with_capacity(dim);
    for config in 0..dim {
        let (mut na, mut nc, mut x) = (0, 0, config);
        for _ in 0..n {
            match x % 3 {
                A => na += 1,
                C => nc += 1,
                _ => {}
            }
            x /= 3;
        }
        let col = space.index_of(&[0, 0, na, nc]).expect("every configuration has a Dicke label");
        counts[col] += 1;
        members.push(col);
    }
    for (config, &col) in members.iter().enumerate() {
        v[(config, col)] = C64::new((counts[col] as f64).sqrt().recip(), 0.0);
    }
    v
}

/// Largest entrywise disagreement between the Dicke matrices and the
/// projected tensor operators, including any leakage out of the symmetric
/// subspace.
pub fn mini_oracle_defect(n_atoms: usize) -> Result<f64> {
    let full = tensor_operators(n_atoms)?;
    let dicke = dicke_operators(n_atoms, [1, 1])?;
    let v = symmetric_isometry(&dicke.space);
    let pairs = [
        (&full.atom_a, &dicke.atom_a),
        (&full.atom_c, &dicke.atom_c),
        (&full.t_plus, &dicke.t_plus),
        (&full.t_minus, &dicke.t_minus),
        (&full.t_z, &dicke.t_z),
    ];
    let mut worst = 0.0_f64;
    for (big, small) in pairs {
        let projected = v.adjoint() * big * &v;
        worst = worst.max(max_abs_diff(&projected, small));
        worst = worst.max(max_abs_diff(&(big * &v), &(&v * small)));
    }
    Ok(worst)
}
