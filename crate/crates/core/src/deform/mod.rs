//! Code deformation: the measurement-driven engine, the logical frame, and
//! the geometric operations built on them.

pub mod engine;
pub mod frame;
pub mod macros;
pub mod ops;

pub use engine::{EngineConfig, GenLabel, GenOutcome, LogicalOutcome, LoggedOp, Machine, StepReport, ONE_Z_SIGN};
pub use frame::{FrameMatrices, FrameQubit, LogicalFrame};
pub use ops::{enclosed_sites, surrounding_loop, BorderRef, Dir, Side, SmoothStep};
pub use macros::{InitState, HOLE_QUBIT_SIDES};
pub use macros::{cnot_layout, cnot_split_spec, CnotReport};
pub mod schedule;
pub use macros::Disconnected;
pub use schedule::{snapshot_id, Basis, DeformationStep, Runner, StepRecord, Transcript};
