//! Many-particle transition probabilities for partially distinguishable
//! bosons and fermions scattered by a linear mode-mixing network.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, permanents, determinants and the
//!   standard multiport unitaries.
//! - [`model`]: occupation vectors, particle-to-mode assignments and the
//!   Gram matrix of internal-state overlaps.
//! - [`engine`]: the double sum over many-particle paths, with closed-form
//!   fast paths for fully indistinguishable and fully distinguishable
//!   particles.
//! - [`decompose`]: splitting an event probability into contributions of
//!   a fixed number of interfering particles.
//! - [`oracle`]: a brute-force first-quantized simulator used to cross-check
//!   the engine.
//! - [`scenarios`]: ready-made setups (double slit, Hong-Ou-Mandel dip,
//!   three particles in a nine-mode Fourier multiport, single-photon
//!   projection).
//! - [`cli`]: argument parsing and CSV/JSON emission for the `interference`
//!   binary.
//!
//! ```
//! use interference::prelude::*;
//!
//! let bs = beamsplitter(0.5).unwrap();
//! let input = AssignmentList::new(vec![0, 1]).unwrap();
//! let coincidence = OccupationVector::new(vec![1, 1]);
//! let p = quantum_probability(&bs, &input, &coincidence, Statistics::Boson).unwrap();
//! assert!(p.abs() < 1e-12);
//! ```

pub mod cli;
pub mod decompose;
pub mod engine;
mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod permutations;
pub mod scenarios;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub mod prelude {
    pub use crate::decompose::{
        fit_orders, interference_orders, naive_interpolation, transition_polynomial,
        DecompositionResult,
    };
    pub use crate::engine::{
        classical_probability, event_probability, full_distribution, quantum_probability,
        EventSpec,
    };
    pub use crate::linalg::{
        beamsplitter, determinant, fourier_unitary, permanent, random_unitary,
        scattering_submatrix, ComplexMatrix,
    };
    pub use crate::model::{
        gram_from_positions, occupation_to_assignment, uniform_gram, AssignmentList, GramMatrix,
        OccupationVector, SourceConfig, Statistics,
    };
    pub use crate::{Complex64, Error, Result};
}
