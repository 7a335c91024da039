//! Perfect state transfer of GHZ states across Johnson networks `J(2m, m)`.
//!
//! The pipeline runs from the network to the Jacobi parameters of its
//! distance stratification, then to the spectral measure and orthonormal
//! polynomial eigenmatrix, then to coupling constants `J_l` for the
//! Hamiltonian `sum_l J_l P_l(A)`, and finally to certification by
//! independent evolution oracles.
//!
//! ```
//! use johnson_pst::design::{design, DesignInput};
//! use johnson_pst::evolution::spectral_amplitudes;
//!
//! let (d, _) = design(&DesignInput::new(2)).unwrap();
//! let f = spectral_amplitudes(&d, 1.0).unwrap();
//! assert!((f[2].norm() - 1.0).abs() < 1e-12);
//! ```

// `!(x <= tol)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod document;
pub mod error;
pub mod evolution;
pub mod exact;
pub mod graph;
pub mod spectral;
pub mod spin;
pub mod subset;
pub mod tridiag;
pub mod verify;

pub use design::{design, DesignInput, PstDesign};
pub use error::{PstError, Result};
pub use graph::JohnsonGraph;
pub use spectral::{QdParameters, SpectralMeasure, Spectrum};
