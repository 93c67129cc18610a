//! Single-qubit Kraus channels applied identically and independently to both
//! qubits of a two-qubit state.
//!
//! Flip channels take a probability `p` in `[0, 1]`, where `p` weights the
//! identity operator, so `p = 1` leaves the state untouched. Damping channels
//! take a non-negative exponent `lt` (rate times time) and reduce to the
//! identity at `lt = 0`.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{kron2, pauli, Mat2, Mat4};
use crate::scalar::Real;
use crate::states::DensityMatrix4;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChannelKind {
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
    AmplitudeDamping,
    PhaseDamping,
    Depolarizing,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::Depolarizing,
    ];

    /// Lower-case name used on the command line and in output files.
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::BitFlip => "bitflip",
            ChannelKind::PhaseFlip => "phaseflip",
            ChannelKind::BitPhaseFlip => "bitphaseflip",
            ChannelKind::AmplitudeDamping => "amplitudedamping",
            ChannelKind::PhaseDamping => "phasedamping",
            ChannelKind::Depolarizing => "depolarizing",
        }
    }

    /// True for the three flip channels, whose strength is a probability.
    pub fn is_flip(self) -> bool {
        matches!(
            self,
            ChannelKind::BitFlip | ChannelKind::PhaseFlip | ChannelKind::BitPhaseFlip
        )
    }

    /// Strength at which the channel is the identity map.
    pub fn identity_strength(self) -> f64 {
        if self.is_flip() {
            1.0
        } else {
            0.0
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownChannel(pub String);

impl fmt::Display for UnknownChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown channel '{}'", self.0)
    }
}

impl std::error::Error for UnknownChannel {}

impl FromStr for ChannelKind {
    type Err = UnknownChannel;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownChannel(s.to_string()))
    }
}

/// Channel strength, validated against its kind's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParam<T> {
    strength: T,
}

impl<T: Real> ChannelParam<T> {
    pub fn new(kind: ChannelKind, strength: T) -> Result<Self> {
        let ok = if kind.is_flip() {
            strength >= T::zero() && strength <= T::one()
        } else {
            strength >= T::zero() && strength.is_finite()
        };
        if ok {
            Ok(Self { strength })
        } else if kind.is_flip() {
            Err(Error::Domain {
                name: "p",
                value: strength.as_f64(),
                domain: "[0, 1]",
            })
        } else {
            Err(Error::Domain {
                name: "lambda*t",
                value: strength.as_f64(),
                domain: "[0, inf)",
            })
        }
    }

    pub fn strength(self) -> T {
        self.strength
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T> {
    kind: ChannelKind,
    param: ChannelParam<T>,
    operators: Vec<Mat2<T>>,
}

impl<T: Real> KrausChannel<T> {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn param(&self) -> ChannelParam<T> {
        self.param
    }

    pub fn operators(&self) -> &[Mat2<T>] {
        &self.operators
    }

    pub fn completeness_deviation(&self) -> T {
        completeness_deviation(&self.operators)
    }
}

/// Kraus operators for `kind` at `param`.
///
/// | kind | operators |
/// |---|---|
/// | bit flip | `sqrt(p) I`, `sqrt(1-p) X` |
/// | phase flip | `sqrt(p) I`, `sqrt(1-p) Z` |
/// | bit-phase flip | `sqrt(p) I`, `sqrt(1-p) Y` |
/// | amplitude damping | `diag(1, e^{-lt/2})`, `[[0, sqrt(1-e^{-lt})], [0, 0]]` |
/// | phase damping | `e^{-lt/2} I`, `diag(sqrt(1-e^{-lt}), 0)`, `diag(0, sqrt(1-e^{-lt}))` |
/// | depolarizing | `e^{-lt/2} I`, `sqrt((1-e^{-lt})/3) {X, Y, Z}` |
pub fn kraus_set<T: Real>(kind: ChannelKind, param: ChannelParam<T>) -> KrausChannel<T> {
    let s = param.strength();
    let one = T::one();
    let zero = T::zero();
    let operators = match kind {
        ChannelKind::BitFlip | ChannelKind::PhaseFlip | ChannelKind::BitPhaseFlip => {
            let flip = match kind {
                ChannelKind::BitFlip => pauli::x(),
                ChannelKind::PhaseFlip => pauli::z(),
                _ => pauli::y(),
            };
            vec![
                Mat2::identity().scale_real(s.sqrt()),
                flip.scale_real((one - s).sqrt()),
            ]
        }
        ChannelKind::AmplitudeDamping => {
            let decay = (-s).exp();
            vec![
                Mat2::diag([one, decay.sqrt()]),
                Mat2::from_real([[zero, (one - decay).sqrt()], [zero, zero]]),
            ]
        }
        ChannelKind::PhaseDamping => {
            let decay = (-s).exp();
            let lost = (one - decay).sqrt();
            vec![
                Mat2::identity().scale_real(decay.sqrt()),
                Mat2::diag([lost, zero]),
                Mat2::diag([zero, lost]),
            ]
        }
        ChannelKind::Depolarizing => {
            let decay = (-s).exp();
            let w = ((one - decay) / T::lit(3.0)).sqrt();
            vec![
                Mat2::identity().scale_real(decay.sqrt()),
                pauli::x().scale_real(w),
                pauli::y().scale_real(w),
                pauli::z().scale_real(w),
            ]
        }
    };
    KrausChannel {
        kind,
        param,
        operators,
    }
}

/// Max entrywise `|sum_i E_i^dagger E_i - I|`.
pub fn completeness_deviation<T: Real>(operators: &[Mat2<T>]) -> T {
    let sum = operators
        .iter()
        .fold(Mat2::zeros(), |acc, e| acc + e.adjoint().multiply(e));
    sum.max_abs_diff(&Mat2::identity())
}

/// Same as [`KrausChannel::completeness_deviation`].
pub fn check_completeness<T: Real>(ch: &KrausChannel<T>) -> T {
    ch.completeness_deviation()
}

/// `sum_ij (E_i (x) E_j) rho (E_i (x) E_j)^dagger` on the raw matrix.
pub fn apply_product_operators<T: Real>(rho: &Mat4<T>, operators: &[Mat2<T>]) -> Mat4<T> {
    let mut out = Mat4::zeros();
    for a in operators {
        for b in operators {
            let k = kron2(a, b);
            out = out + k.multiply(rho).multiply(&k.adjoint());
        }
    }
    out
}

/// Evolves `rho` by the product channel `ch (x) ch`.
pub fn apply_product_channel<T: Real>(
    rho: &DensityMatrix4<T>,
    ch: &KrausChannel<T>,
) -> Result<DensityMatrix4<T>> {
    let deviation = ch.completeness_deviation();
    if deviation > T::KRAUS_TOL {
        return Err(Error::IncompleteChannel {
            deviation: deviation.as_f64(),
        });
    }
    DensityMatrix4::validate(apply_product_operators(rho.matrix(), ch.operators()))
}

/// Convenience: build the channel for `(kind, strength)` and apply it.
pub fn evolve<T: Real>(
    rho: &DensityMatrix4<T>,
    kind: ChannelKind,
    strength: T,
) -> Result<DensityMatrix4<T>> {
    let ch = kraus_set(kind, ChannelParam::new(kind, strength)?);
    apply_product_channel(rho, &ch)
}
