//! Dense complex linear algebra used by every other module.

mod eig;
mod funcs;
mod json;
mod matrix;
mod tensor;

pub use eig::{herm_eig, herm_eigvals, HermitianEig};
pub(crate) use eig::sym_eig_real;
pub(crate) use funcs::{power_from_eig, psd_eig};
pub use funcs::{fidelity, mat_power, op_norm, support_projector, trace_norm};
pub use json::MatrixJson;
pub use matrix::CMatrix;
pub use tensor::{kron, kron_all, partial_trace, partial_transpose, permute_systems, permute_vector};
