//! Werner and maximally entangled mixed states, plus density-matrix validation.

use num_complex::Complex;

use crate::linalg::{eig4, Mat4};
use crate::scalar::{re, Real};
use crate::{Error, Result, StateViolation};

/// Mixing parameter `gamma` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct StateParam<T>(T);

impl<T: Real> StateParam<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if gamma >= T::zero() && gamma <= T::one() {
            Ok(Self(gamma))
        } else {
            Err(Error::Domain {
                name: "gamma",
                value: gamma.as_f64(),
                domain: "[0, 1]",
            })
        }
    }

    pub fn gamma(self) -> T {
        self.0
    }
}

/// Validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4<T> {
    matrix: Mat4<T>,
}

impl<T: Real> DensityMatrix4<T> {
    /// Checks hermiticity, unit trace and positivity, in that order.
    pub fn validate(m: Mat4<T>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = m.hermiticity_deviation();
        if herm > T::HERM_TOL {
            return Err(Error::InvalidState(StateViolation::Hermiticity {
                deviation: herm.as_f64(),
            }));
        }
        let trace = m.trace().re;
        if (trace - T::one()).abs() > T::TRACE_TOL {
            return Err(Error::InvalidState(StateViolation::Trace {
                trace: trace.as_f64(),
            }));
        }
        let min_eig = eig4(&m)?
            .iter()
            .map(|z| z.re)
            .fold(T::infinity(), T::min);
        if min_eig < -T::PSD_TOL {
            return Err(Error::InvalidState(StateViolation::Positivity {
                min_eigenvalue: min_eig.as_f64(),
            }));
        }
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat4<T> {
        self.matrix
    }

    /// Entry `(i, j)` in the |00>,|01>,|10>,|11> basis.
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.matrix[(i, j)]
    }
}

/// Free function form of [`DensityMatrix4::validate`].
pub fn validate_density<T: Real>(m: Mat4<T>) -> Result<DensityMatrix4<T>> {
    DensityMatrix4::validate(m)
}

/// Diagonal weight of the MEMS family: 1/3 below gamma = 2/3, gamma/2 above.
pub fn mems_weight<T: Real>(gamma: T) -> T {
    let split = T::lit(2.0) / T::lit(3.0);
    if gamma < split {
        T::one() / T::lit(3.0)
    } else {
        gamma / T::lit(2.0)
    }
}

/// Maximally entangled mixed state with concurrence `gamma`:
///
/// ```text
/// [ g   0     0  γ/2 ]
/// [ 0   1-2g  0  0   ]
/// [ 0   0     0  0   ]
/// [ γ/2 0     0  g   ]
/// ```
pub fn mems<T: Real>(param: StateParam<T>) -> Result<DensityMatrix4<T>> {
    let gamma = param.gamma();
    let g = mems_weight(gamma);
    let half = gamma / T::lit(2.0);
    let z = T::zero();
    let m = Mat4::from_real([
        [g, z, z, half],
        [z, T::one() - T::lit(2.0) * g, z, z],
        [z, z, z, z],
        [half, z, z, g],
    ]);
    DensityMatrix4::validate(m)
}

/// Werner state `gamma |psi-><psi-| + (1 - gamma) I/4`, with
/// `|psi-> = (|01> - |10>)/sqrt(2)`.
pub fn werner<T: Real>(param: StateParam<T>) -> Result<DensityMatrix4<T>> {
    let gamma = param.gamma();
    let half = T::lit(0.5);
    let mut singlet = Mat4::zeros();
    singlet[(1, 1)] = re(half);
    singlet[(2, 2)] = re(half);
    singlet[(1, 2)] = re(-half);
    singlet[(2, 1)] = re(-half);
    let mixed = Mat4::identity().scale_real((T::one() - gamma) / T::lit(4.0));
    DensityMatrix4::validate(singlet.scale_real(gamma) + mixed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Mems,
    Werner,
}

/// `(3 gamma - 1)/2` without the clamp; negative below gamma = 1/3.
pub fn werner_concurrence_raw<T: Real>(gamma: T) -> T {
    (T::lit(3.0) * gamma - T::one()) / T::lit(2.0)
}

/// Known concurrence of each family: `gamma` for MEMS and
/// `max(0, (3 gamma - 1)/2)` for Werner.
pub fn reference_concurrence<T: Real>(kind: StateKind, param: StateParam<T>) -> T {
    match kind {
        StateKind::Mems => param.gamma(),
        StateKind::Werner => werner_concurrence_raw(param.gamma()).max(T::zero()),
    }
}
