use std::fmt;
use std::str::FromStr;

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::operator::{DenseOperator, DensityMatrix, C64};
use crate::algebra::thermal_populations;
use crate::error::{Error, Result};
use crate::params::{Interaction, ModelParams};

/// Largest bath simulated spin by spin (dimension `2^(M+1)`).
pub const PRODUCT_SPACE_MAX_SPINS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Symmetric sector `J = M/2`: levels `m = 0..=M`.
    DickeSubspace,
    /// All `2^M` bath configurations.
    FullProductSpace,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::DickeSubspace => "dicke",
            Basis::FullProductSpace => "product",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dicke" | "dicke-subspace" => Ok(Basis::DickeSubspace),
            "product" | "full" | "full-product-space" => Ok(Basis::FullProductSpace),
            other => Err(Error::Config(format!("unknown basis '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// Rotating at the bath frequency: the free part reduces to `(Delta/2) sigma_z`.
    Rotating,
    /// Schroedinger picture with `omega0 = 1`, `omega1 = 1 - Delta`.
    Lab,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Rotating => "rotating",
            Frame::Lab => "lab",
        })
    }
}

impl FromStr for Frame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rotating" => Ok(Frame::Rotating),
            "lab" => Ok(Frame::Lab),
            other => Err(Error::Config(format!("unknown frame '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub params: ModelParams,
    pub basis: Basis,
    pub frame: Frame,
}

impl HamiltonianSpec {
    /// Natural frame for the interaction: lab frame for XX (its
    /// counter-rotating terms are time dependent in the rotating frame),
    /// rotating otherwise.
    pub fn new(params: ModelParams, basis: Basis) -> Self {
        let frame = match params.interaction {
            Interaction::XX => Frame::Lab,
            Interaction::XY | Interaction::XYZ => Frame::Rotating,
        };
        HamiltonianSpec { params, basis, frame }
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn geometry(&self) -> BathGeometry {
        match self.basis {
            Basis::DickeSubspace => BathGeometry::Dicke { spins: self.params.bath_size },
            Basis::FullProductSpace => BathGeometry::Product { spins: self.params.bath_size },
        }
    }

    /// Total Hilbert-space dimension.
    pub fn dimension(&self) -> usize {
        2 * self.geometry().dim()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.basis == Basis::FullProductSpace && self.params.bath_size > PRODUCT_SPACE_MAX_SPINS {
            return Err(Error::DimensionLimit {
                dimension: 1usize
                    .checked_shl(self.params.bath_size as u32 + 1)
                    .unwrap_or(usize::MAX),
                limit: 1 << (PRODUCT_SPACE_MAX_SPINS + 1),
            });
        }
        if self.params.interaction == Interaction::XX && self.frame == Frame::Rotating {
            return Err(Error::Config(
                "XX coupling has no time-independent rotating-frame form; use the lab frame".into(),
            ));
        }
        Ok(())
    }
}

/// Bath Hilbert space layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathGeometry {
    /// Index `m` = number of excitations in the symmetric sector.
    Dicke { spins: usize },
    /// Index = bit string, bit `j` set when spin `j` is excited.
    Product { spins: usize },
}

impl BathGeometry {
    pub fn spins(&self) -> usize {
        match *self {
            BathGeometry::Dicke { spins } | BathGeometry::Product { spins } => spins,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            BathGeometry::Dicke { spins } => spins + 1,
            BathGeometry::Product { spins } => 1 << spins,
        }
    }

    /// Excitation number of a bath basis state.
    pub fn excitations(&self, index: usize) -> usize {
        match self {
            BathGeometry::Dicke { .. } => index,
            BathGeometry::Product { .. } => index.count_ones() as usize,
        }
    }

    /// Diagonal of `J_z`.
    pub fn jz(&self) -> Vec<f64> {
        let half = 0.5 * self.spins() as f64;
        (0..self.dim()).map(|i| self.excitations(i) as f64 - half).collect()
    }

    /// Nonzero entries `(row, col, value)` of `J_+`.
    pub fn raising(&self) -> Vec<(usize, usize, f64)> {
        match *self {
            BathGeometry::Dicke { spins } => (0..spins)
                .map(|m| (m + 1, m, (((spins - m) * (m + 1)) as f64).sqrt()))
                .collect(),
            BathGeometry::Product { spins } => {
                let mut out = Vec::new();
                for state in 0..self.dim() {
                    for j in 0..spins {
                        if state & (1 << j) == 0 {
                            out.push((state | (1 << j), state, 1.0));
                        }
                    }
                }
                out
            }
        }
    }

    /// `Tr(rho J_+ J_-)`, the weight that sets the short-time depletion rate.
    pub fn flip_flop_moment(&self, rho: &DensityMatrix) -> f64 {
        match *self {
            BathGeometry::Dicke { spins } => (0..=spins)
                .map(|m| rho.get(m, m).re * (m * (spins - m + 1)) as f64)
                .sum(),
            BathGeometry::Product { spins } => {
                // <b'| s+_j s-_k |b> = 1 for b' = b - e_k + e_j
                let mut total = 0.0;
                for b in 0..self.dim() {
                    for k in (0..spins).filter(|k| b & (1 << k) != 0) {
                        let lowered = b & !(1 << k);
                        for j in (0..spins).filter(|j| lowered & (1 << j) == 0) {
                            let raised = lowered | (1 << j);
                            total += rho.get(b, raised).re;
                        }
                    }
                }
                total
            }
        }
    }

    /// Bath populations grouped by excitation number (`M + 1` entries).
    pub fn excitation_populations(&self, rho: &DensityMatrix) -> Vec<f64> {
        let mut out = vec![0.0; self.spins() + 1];
        for i in 0..self.dim() {
            out[self.excitations(i)] += rho.get(i, i).re;
        }
        out
    }

    /// Bath thermal state at `beta omega1`. In the product space each spin
    /// is in its own Gibbs state; inside the symmetric sector this reduces to
    /// the collective thermal populations.
    pub fn thermal_state(&self, params: &ModelParams) -> Result<DensityMatrix> {
        match self {
            BathGeometry::Dicke { .. } => {
                DensityMatrix::from_diagonal(thermal_populations(params).populations())
            }
            BathGeometry::Product { spins } => {
                let x = (-params.beta_omega1).exp();
                let norm = (1.0 + x).powi(*spins as i32);
                let diag: Vec<f64> = (0..self.dim())
                    .map(|i| x.powi(i.count_ones() as i32) / norm)
                    .collect();
                DensityMatrix::from_diagonal(&diag)
            }
        }
    }
}

/// Builds the central-spin plus bath Hamiltonian as a dense Hermitian matrix.
///
/// Central spin index is slowest (`|g>` block first), `sigma_z |e> = +|e>`.
/// Flip-flop part `2g (J_+ sigma_- + J_- sigma_+)`; XX adds
/// `2g (J_+ sigma_+ + J_- sigma_-)`; XYZ adds `g J_z sigma_z`.
pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<DenseOperator> {
    spec.validate()?;
    let p = &spec.params;
    let geometry = spec.geometry();
    let d = geometry.dim();
    let g = p.coupling;
    let jz = geometry.jz();
    let mut h = DenseOperator::zeros(2 * d);
    let (ground, excited) = (|b: usize| b, |b: usize| d + b);

    for (b, &jz_b) in jz.iter().enumerate() {
        let (zg, ze) = match spec.frame {
            Frame::Rotating => (-0.5 * p.detuning, 0.5 * p.detuning),
            Frame::Lab => {
                let bath = p.bath_frequency() * jz_b;
                (-0.5 + bath, 0.5 + bath)
            }
        };
        h.add_at(ground(b), ground(b), zg);
        h.add_at(excited(b), excited(b), ze);
        if p.interaction == Interaction::XYZ {
            h.add_at(ground(b), ground(b), -g * jz[b]);
            h.add_at(excited(b), excited(b), g * jz[b]);
        }
    }
    for (raised, lowered, amp) in geometry.raising() {
        let c = 2.0 * g * amp;
        // J_+ sigma_- : |e, lowered> -> |g, raised>
        h.add_at(ground(raised), excited(lowered), c);
        h.add_at(excited(lowered), ground(raised), c);
        if p.interaction == Interaction::XX {
            // J_+ sigma_+ : |g, lowered> -> |e, raised>
            h.add_at(excited(raised), ground(lowered), c);
            h.add_at(ground(lowered), excited(raised), c);
        }
    }
    Ok(h)
}

/// Total excitation number `n_central + n_bath` on the diagonal.
pub fn excitation_operator(spec: &HamiltonianSpec) -> DenseOperator {
    let geometry = spec.geometry();
    let d = geometry.dim();
    let mut mat = Mat::<C64>::zeros(2 * d, 2 * d);
    for b in 0..d {
        let n = geometry.excitations(b) as f64;
        mat[(b, b)] = C64::new(n, 0.0);
        mat[(d + b, d + b)] = C64::new(n + 1.0, 0.0);
    }
    DenseOperator::from_mat(mat)
}
