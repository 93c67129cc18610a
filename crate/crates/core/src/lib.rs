//! Entanglement dynamics of two-qubit maximally entangled mixed states (MEMS)
//! under identical local decoherence channels.
//!
//! The crate computes concurrence along two independent routes (the Wootters
//! construction on the evolved density matrix, and closed-form spectra for
//! each channel), checks them against an X-state oracle, and locates the
//! strength intervals where entanglement dies and is reborn.
//!
//! All matrix, state and channel code is generic over [`Real`] (`f32` or
//! `f64`); the aliases below fix the scalar to `f64`, which is what the sweep
//! and zone analysis use.

pub mod channels;
pub mod concurrence;
mod error;
pub mod linalg;
pub mod scalar;
pub mod spectra;
pub mod states;
pub mod zonescan;

pub use channels::{
    apply_product_channel, check_completeness, kraus_set, ChannelKind, ChannelParam,
    KrausChannel,
};
pub use concurrence::{concurrence, spin_flip, xstate_concurrence};
pub use error::{Error, Result, StateViolation};
pub use linalg::{eig4, kron2, Mat2, Mat4, SquareMatrix};
pub use scalar::{tol, ComplexScalar, Real};
pub use spectra::{
    closed_form_spectrum, compare_spectrum, concurrence_from_spectrum, DiscrepancyRecord,
    Spectrum,
};
pub use states::{
    mems, reference_concurrence, validate_density, werner, DensityMatrix4, StateKind, StateParam,
};
pub use zonescan::{find_zones, sample_curve, ConcurrenceCurve, Engine, SweepConfig, Zone, ZoneReport};

pub type Complex64 = ComplexScalar<f64>;
pub type Complex32 = ComplexScalar<f32>;
pub type Mat2d = Mat2<f64>;
pub type Mat4d = Mat4<f64>;
pub type Mat2f = Mat2<f32>;
pub type Mat4f = Mat4<f32>;
pub type DensityMatrix4d = DensityMatrix4<f64>;
pub type DensityMatrix4f = DensityMatrix4<f32>;
pub type KrausChanneld = KrausChannel<f64>;
pub type KrausChannelf = KrausChannel<f32>;
pub type Spectrumd = Spectrum<f64>;
pub type DiscrepancyRecordd = DiscrepancyRecord<f64>;
