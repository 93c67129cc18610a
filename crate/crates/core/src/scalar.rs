//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All matrix and state code is written against [`Real`], which is
//! implemented for `f32` and `f64`. Each implementation carries the
//! tolerance set appropriate to its precision; the `f64` values are the
//! ones listed in [`tol`].

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Named tolerances for double precision.
pub mod tol {
    /// Accuracy target for each root returned by the 4x4 eigen-solver.
    pub const EIG_TOL: f64 = 1e-11;
    /// Root movement below which Durand-Kerner iteration stops.
    pub const EIG_STEP_TOL: f64 = 1e-14;
    /// Iteration cap for Durand-Kerner.
    pub const EIG_MAX_ITER: usize = 500;
    /// Max entrywise |M - M^dagger| accepted for a density matrix.
    pub const HERM_TOL: f64 = 1e-12;
    /// Max |tr(M) - 1| accepted for a density matrix.
    pub const TRACE_TOL: f64 = 1e-12;
    /// Most negative eigenvalue accepted for a density matrix.
    pub const PSD_TOL: f64 = 1e-10;
    /// Max entrywise deviation of the Kraus completeness sum from identity.
    pub const KRAUS_TOL: f64 = 1e-12;
    /// Imaginary parts and negative eigenvalues of rho * rho_flip within this
    /// bound are treated as rounding and clamped away.
    pub const CLAMP_TOL: f64 = 1e-8;
    /// Max magnitude of an entry outside the X pattern for an X-state.
    pub const XSTATE_TOL: f64 = 1e-12;
}

/// Floating-point scalar usable throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    const EIG_STEP_TOL: Self;
    const HERM_TOL: Self;
    const TRACE_TOL: Self;
    const PSD_TOL: Self;
    const KRAUS_TOL: Self;
    const CLAMP_TOL: Self;
    const XSTATE_TOL: Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const EIG_STEP_TOL: Self = tol::EIG_STEP_TOL;
    const HERM_TOL: Self = tol::HERM_TOL;
    const TRACE_TOL: Self = tol::TRACE_TOL;
    const PSD_TOL: Self = tol::PSD_TOL;
    const KRAUS_TOL: Self = tol::KRAUS_TOL;
    const CLAMP_TOL: Self = tol::CLAMP_TOL;
    const XSTATE_TOL: Self = tol::XSTATE_TOL;
}

// Single precision scales each bound with its epsilon (~1.2e-7).
impl Real for f32 {
    const EIG_STEP_TOL: Self = 1e-6;
    const HERM_TOL: Self = 1e-5;
    const TRACE_TOL: Self = 1e-5;
    const PSD_TOL: Self = 1e-4;
    const KRAUS_TOL: Self = 1e-5;
    const CLAMP_TOL: Self = 1e-3;
    const XSTATE_TOL: Self = 1e-5;
}

/// Complex scalar over a [`Real`] component type.
pub type ComplexScalar<T> = Complex<T>;

/// Builds a complex scalar, rejecting NaN and infinite components.
pub fn complex<T: Real>(re: T, im: T) -> crate::Result<Complex<T>> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex::new(re, im))
    } else {
        Err(crate::Error::NonFinite)
    }
}

#[inline]
pub(crate) fn finite<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}
