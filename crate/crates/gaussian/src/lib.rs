//! Second-moment algebra for Gaussian bosonic states.
//!
//! Covariance matrices are real symmetric `2n x 2n` matrices in shot-noise
//! units (vacuum = identity) with quadratures ordered `(q1, p1, ..., qn, pn)`.
//! Everything here is a pure function of its inputs.
//!
//! The [`extended`] module repeats the spectral machinery in double-double
//! precision for states whose matrix entries span many orders of magnitude.

mod covariance;
mod entropy;
mod error;
pub mod extended;
mod separability;
mod spectrum;
mod symplectic;

pub use covariance::{
    apply_symplectic, heterodyne_condition, partial_trace, tensor, CovarianceMatrix, BONA_FIDE_TOL,
    SYMMETRY_TOL,
};
pub use entropy::{entropic_h, entropic_h_asymptotic, von_neumann_entropy};
pub use error::{GaussianError, Result};
pub use separability::{partial_transpose, ppt_separable};
pub use spectrum::{symplectic_spectrum, SymplecticSpectrum};
pub use symplectic::{beam_splitter, symplectic_form, SymplecticMatrix, SYMPLECTIC_TOL};
