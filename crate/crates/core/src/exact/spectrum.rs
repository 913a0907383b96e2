//! Eigendecomposition of a Hermitian operator, split along the connected
//! components of its sparsity graph so conserved quantities (excitation
//! number, parity) are diagonalized block by block.

use faer::Mat;

use super::operator::{DenseOperator, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct SpectralBlock {
    /// Global basis indices spanned by the block.
    pub indices: Vec<usize>,
    pub energies: Vec<f64>,
    /// Local eigenvectors, one per column.
    pub vectors: Mat<C64>,
}

/// `H = sum_k E_k |v_k><v_k|`, decomposed once and reused for every `tau`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    dim: usize,
    pub(crate) blocks: Vec<SpectralBlock>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl Spectrum {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        let n = h.dim();
        let scale = h.max_abs().max(1.0);
        if h.hermiticity_residual() > 1e-12 * scale {
            return Err(Error::Eigen("operator is not Hermitian".into()));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for j in 0..n {
            for i in 0..j {
                if h.get(i, j) != C64::new(0.0, 0.0) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        let blocks = groups
            .into_values()
            .map(|indices| {
                let k = indices.len();
                let local = Mat::<C64>::from_fn(k, k, |a, b| h.get(indices[a], indices[b]));
                let evd = local
                    .self_adjoint_eigen(faer::Side::Lower)
                    .map_err(|e| Error::Eigen(format!("{e:?}")))?;
                let energies = (0..k).map(|a| evd.S()[a].re).collect();
                Ok(SpectralBlock { indices, energies, vectors: evd.U().to_owned() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum { dim: n, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// All eigenvalues, grouped by block.
    pub fn energies(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(|b| b.energies.iter().copied()).collect()
    }

    /// `exp(-i H tau)`
    pub fn propagator(&self, tau: f64) -> DenseOperator {
        let mut u = Mat::<C64>::zeros(self.dim, self.dim);
        for block in &self.blocks {
            let phases: Vec<C64> = block.energies.iter().map(|e| C64::from_polar(1.0, -e * tau)).collect();
            let k = block.indices.len();
            for (a, &ia) in block.indices.iter().enumerate() {
                for (b, &ib) in block.indices.iter().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (c, phase) in phases.iter().enumerate().take(k) {
                        acc += block.vectors[(a, c)] * phase * block.vectors[(b, c)].conj();
                    }
                    u[(ia, ib)] = acc;
                }
            }
        }
        DenseOperator::from_mat(u)
    }
}

/// `U = exp(-i H tau)` via Hermitian eigendecomposition.
pub fn propagator(h: &DenseOperator, tau: f64) -> Result<DenseOperator> {
    Ok(Spectrum::new(h)?.propagator(tau))
}
