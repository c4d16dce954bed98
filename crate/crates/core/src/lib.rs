//! Surface-code deformation simulator.
//!
//! Builds chessboard surface codes, reshapes them by measuring new
//! stabilizer generators (smooth deformations, cut, paste, puncture, hole
//! movement and braiding), tracks the logical frame, and decodes Pauli noise
//! with a space-time matching decoder.

pub mod decoder;
pub mod deform;
pub mod doc;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod oracle;
pub mod pauli;
pub mod render;
pub mod stabilizer;
pub mod tableau;

pub use error::{Error, Result};
pub use lattice::{build_code, Color, LatticeSpec, Pos, Site, StringPath, SurfaceCode};
pub use pauli::{Letter, PauliOperator};
pub use stabilizer::{CodeParameters, LogicalBasis, StabilizerGroup};
pub use tableau::{Measurement, OutcomeSource, TableauState};
