//! Dense simulation of the central spin coupled to its bath, in the
//! symmetric (Dicke) sector or spin by spin.

mod hamiltonian;
mod operator;
mod protocol;
mod spectrum;

pub use hamiltonian::{
    build_hamiltonian, excitation_operator, Basis, BathGeometry, Frame, HamiltonianSpec,
    PRODUCT_SPACE_MAX_SPINS,
};
pub use operator::{measure_central_ground, DenseOperator, DensityMatrix, C64};
pub use protocol::{run_exact_protocol, ExactDynamics};
pub use spectrum::{propagator, Spectrum};
