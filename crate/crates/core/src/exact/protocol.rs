//! Conditioned evolution of the full central-spin + bath system.
//!
//! Only the central-ground block of the propagator matters for a protocol
//! that starts with the central spin in `|g>` and measures it there after
//! every interval: with `A(tau) = <g| U(tau) |g>` acting on the bath, one
//! round maps `rho_b -> A rho_b A^dagger / p`.

use faer::Mat;

use super::hamiltonian::{build_hamiltonian, BathGeometry, HamiltonianSpec};
use super::operator::{DensityMatrix, C64};
use super::spectrum::Spectrum;
use crate::algebra::ANNIHILATION_THRESHOLD;
use crate::error::{Error, Result};
use crate::schedule::{run_schedule, ConditionedModel, Strategy};
use crate::trace::{Engine, ProtocolTrace};

/// Eigenvectors of one invariant block restricted to central-ground rows.
#[derive(Debug, Clone)]
struct GroundBlock {
    /// Bath indices of the central-ground rows in this block.
    bath: Vec<usize>,
    energies: Vec<f64>,
    /// `W[(r, c)]`: row `r` of `bath`, eigenvector `c`.
    w: Mat<C64>,
    /// `W^dagger W`
    gram: Mat<C64>,
    /// `W^dagger diag(jz) W`
    spin: Mat<C64>,
}

/// Quadratic forms giving the post-round probability (top `k` rows) and
/// `<J_z>` numerator (bottom `k` rows) as `v^T K conj(v)`, `v = exp(-i E tau)`.
struct Kernel {
    energies: Vec<f64>,
    stacked: Mat<C64>,
}

fn ratio(moment: f64, prob: f64, half: f64) -> f64 {
    if prob < ANNIHILATION_THRESHOLD {
        0.0
    } else {
        (moment / prob).abs() / half
    }
}

/// Exact simulator of the measured central-spin system.
#[derive(Debug, Clone)]
pub struct ExactDynamics {
    spec: HamiltonianSpec,
    geometry: BathGeometry,
    jz: Vec<f64>,
    blocks: Vec<GroundBlock>,
}

impl ExactDynamics {
    pub fn new(spec: &HamiltonianSpec) -> Result<Self> {
        let h = build_hamiltonian(spec)?;
        let spectrum = Spectrum::new(&h)?;
        let geometry = spec.geometry();
        let d = geometry.dim();
        let jz = geometry.jz();
        let blocks = spectrum
            .blocks
            .iter()
            .filter_map(|block| {
                let rows: Vec<usize> = (0..block.indices.len()).filter(|&a| block.indices[a] < d).collect();
                if rows.is_empty() {
                    return None;
                }
                let k = block.energies.len();
                let w = Mat::<C64>::from_fn(rows.len(), k, |r, c| block.vectors[(rows[r], c)]);
                let bath: Vec<usize> = rows.iter().map(|&a| block.indices[a]).collect();
                let gram = w.adjoint() * &w;
                let weighted = Mat::<C64>::from_fn(rows.len(), k, |r, c| w[(r, c)] * jz[bath[r]]);
                let spin = w.adjoint() * &weighted;
                Some(GroundBlock { bath, energies: block.energies.clone(), w, gram, spin })
            })
            .collect();
        Ok(ExactDynamics { spec: *spec, geometry, jz, blocks })
    }

    pub fn spec(&self) -> &HamiltonianSpec {
        &self.spec
    }

    pub fn geometry(&self) -> BathGeometry {
        self.geometry
    }

    /// Bath thermal state the protocol starts from.
    pub fn initial_state(&self) -> Result<DensityMatrix> {
        self.geometry.thermal_state(&self.spec.params)
    }

    /// `A(tau) = <g| exp(-i H tau) |g>` on the bath space.
    pub fn ground_amplitude(&self, tau: f64) -> Mat<C64> {
        let d = self.geometry.dim();
        let mut a = Mat::<C64>::zeros(d, d);
        for block in &self.blocks {
            let phases: Vec<C64> = block.energies.iter().map(|e| C64::from_polar(1.0, -e * tau)).collect();
            let scaled = Mat::<C64>::from_fn(block.w.nrows(), block.w.ncols(), |r, c| block.w[(r, c)] * phases[c]);
            let local = &scaled * block.w.adjoint();
            for (r, &i) in block.bath.iter().enumerate() {
                for (s, &j) in block.bath.iter().enumerate() {
                    a[(i, j)] = local[(r, s)];
                }
            }
        }
        a
    }

    /// Coherences between different blocks never reach the diagonal, so only
    /// the diagonal blocks of the state enter.
    fn kernels(&self, state: &DensityMatrix) -> Vec<Kernel> {
        self.blocks
            .iter()
            .map(|block| {
                let rows = block.bath.len();
                let rho = Mat::<C64>::from_fn(rows, rows, |r, s| state.get(block.bath[r], block.bath[s]));
                let b = block.w.adjoint() * &rho * &block.w;
                let k = b.nrows();
                let stacked = Mat::<C64>::from_fn(2 * k, k, |x, y| {
                    if x < k {
                        b[(x, y)] * block.gram[(y, x)]
                    } else {
                        b[(x - k, y)] * block.spin[(y, x - k)]
                    }
                });
                Kernel { energies: block.energies.clone(), stacked }
            })
            .collect()
    }

    /// `|<J_z>| / (M/2)` of a bath state.
    pub fn polarization_of(&self, rho: &DensityMatrix) -> f64 {
        let half = 0.5 * self.geometry.spins() as f64;
        let mean: f64 = (0..rho.dim()).map(|i| rho.get(i, i).re * self.jz[i]).sum();
        mean.abs() / half
    }
}

impl ConditionedModel for ExactDynamics {
    type State = DensityMatrix;

    fn bath_size(&self) -> usize {
        self.geometry.spins()
    }

    fn coupling(&self) -> f64 {
        self.spec.params.coupling
    }

    fn polarization(&self, state: &DensityMatrix) -> f64 {
        self.polarization_of(state)
    }

    fn entropy(&self, state: &DensityMatrix) -> Result<f64> {
        state.entropy()
    }

    fn flip_flop_moment(&self, state: &DensityMatrix) -> f64 {
        self.geometry.flip_flop_moment(state)
    }

    fn step(&self, state: &DensityMatrix, tau: f64) -> Result<(DensityMatrix, f64)> {
        let a = self.ground_amplitude(tau);
        let left = &a * state.as_mat();
        let out = &left * a.adjoint();
        let probability: f64 = (0..out.nrows()).map(|i| out[(i, i)].re).sum();
        if !(probability >= ANNIHILATION_THRESHOLD) {
            return Err(Error::Annihilated { probability });
        }
        let n = out.nrows();
        // average with the adjoint to keep rounding from breaking Hermiticity
        let mat = Mat::<C64>::from_fn(n, n, |i, j| (out[(i, j)] + out[(j, i)].conj()) * (0.5 / probability));
        Ok((DensityMatrix::from_mat_unchecked(mat), probability))
    }

    fn lookahead<'a>(&'a self, state: &'a DensityMatrix) -> Result<Box<dyn Fn(f64) -> f64 + 'a>> {
        let kernels = self.kernels(state);
        let half = 0.5 * self.geometry.spins() as f64;
        Ok(Box::new(move |tau| {
            let (mut prob, mut moment) = (0.0, 0.0);
            for kernel in &kernels {
                let k = kernel.energies.len();
                let v: Vec<C64> = kernel.energies.iter().map(|e| C64::from_polar(1.0, -e * tau)).collect();
                for (x, vx) in v.iter().enumerate() {
                    let (mut accp, mut accs) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                    for (y, vy) in v.iter().enumerate() {
                        let vyc = vy.conj();
                        accp += kernel.stacked[(x, y)] * vyc;
                        accs += kernel.stacked[(k + x, y)] * vyc;
                    }
                    prob += (vx * accp).re;
                    moment += (vx * accs).re;
                }
            }
            ratio(moment, prob, half)
        }))
    }

    fn lookahead_many(&self, state: &DensityMatrix, taus: &[f64]) -> Result<Vec<f64>> {
        const CHUNK: usize = 256;
        let kernels = self.kernels(state);
        let half = 0.5 * self.geometry.spins() as f64;
        let mut out = Vec::with_capacity(taus.len());
        for chunk in taus.chunks(CHUNK) {
            let mut prob = vec![0.0; chunk.len()];
            let mut moment = vec![0.0; chunk.len()];
            for kernel in &kernels {
                let k = kernel.energies.len();
                // column t holds conj(exp(-i E tau_t))
                let phases = Mat::<C64>::from_fn(k, chunk.len(), |y, t| C64::from_polar(1.0, kernel.energies[y] * chunk[t]));
                let products = &kernel.stacked * &phases;
                for t in 0..chunk.len() {
                    for x in 0..k {
                        let vx = phases[(x, t)].conj();
                        prob[t] += (vx * products[(x, t)]).re;
                        moment[t] += (vx * products[(k + x, t)]).re;
                    }
                }
            }
            out.extend(prob.iter().zip(&moment).map(|(p, m)| ratio(*m, *p, half)));
        }
        Ok(out)
    }

    fn excitation_populations(&self, state: &DensityMatrix) -> Vec<f64> {
        self.geometry.excitation_populations(state)
    }
}

/// Runs `rounds` rounds of `strategy` on the full system, starting from
/// `|g><g|` times the thermal bath.
pub fn run_exact_protocol(spec: &HamiltonianSpec, strategy: &Strategy, rounds: usize) -> Result<ProtocolTrace> {
    let model = ExactDynamics::new(spec)?;
    let initial = model.initial_state()?;
    run_schedule(
        &model,
        initial,
        &spec.params,
        strategy,
        rounds,
        Engine::Exact { basis: spec.basis, frame: spec.frame },
    )
}
