//! Bipolar spreading matrices for sparse vector codes.
//!
//! * [`bitmatrix`]: bit-packed `{+1, -1}` matrices, inner products, Gram profiles.
//! * [`constructors`]: the OPHM and OCA optimizers plus five reference constructions.
//! * [`solver`]: exact feasibility search used by OCA.
//! * [`codec`]: sparse mapping, spreading, fading channel and multipath matching pursuit.
//! * [`sim`]: seeded Monte Carlo BLER sweeps and Gram histogram export.

pub mod bitmatrix;
pub mod codec;
pub mod constructors;
mod error;
pub mod matrix_file;
pub mod rng;
pub mod sim;
pub mod solver;

pub use bitmatrix::{inner_product, welch_bound, BipolarMatrix, GramProfile};
pub use constructors::{construct, ConstructionSpec, Method};
pub use error::{Error, Result};
