//! Relative-entropy bounds on two-way assisted quantum and private capacities.
//!
//! The dense linear algebra, state and channel layers and the divergence
//! family are generic over the scalar type ([`scalar::Real`], implemented
//! for `f32` and `f64`). The SDP engine and the bound reports work in `f64`.

pub mod bounds;
pub mod channels;
pub mod divergences;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod sdp;
pub mod states;
pub mod verify;

pub use error::{Error, Result};

pub type ComplexMatrix = linalg::CMatrix<f64>;
pub type ComplexMatrix32 = linalg::CMatrix<f32>;
pub type DensityMatrix = states::Density<f64>;
pub type DensityMatrix32 = states::Density<f32>;
pub type ChoiMatrix = channels::Choi<f64>;
pub type ChoiMatrix32 = channels::Choi<f32>;
