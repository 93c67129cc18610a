//! Closed-form eigenvalue spectra of `rho_dp * rho_dp_flip` for the MEMS
//! family under each channel, and their comparison with the numerical path.
//!
//! Each formula is evaluated as written (no simplification), with the
//! diagonal weight of the state fixed at 1/3. They are claims under test: the
//! numerical path (Kraus evolution, then [`eig4`](crate::linalg::eig4)) is
//! the reference, and any disagreement is reported as a
//! [`DiscrepancyRecord`] rather than corrected.

use rayon::prelude::*;

use crate::channels::{evolve, ChannelKind};
use crate::concurrence::{concurrence_from_eigenvalues, product_eigenvalues};
use crate::scalar::Real;
use crate::states::{mems, StateParam};
use crate::{Error, Result};

/// Default elementwise tolerance for [`compare_spectrum`].
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Four non-negative eigenvalues of `rho_dp * rho_dp_flip`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum<T> {
    lambdas: [T; 4],
}

impl<T: Real> Spectrum<T> {
    /// Applies the `-CLAMP_TOL` guard, then clamps at zero.
    pub fn new(lambdas: [T; 4]) -> Result<Self> {
        for l in lambdas {
            if !l.is_finite() {
                return Err(Error::NonFinite);
            }
            if l < -T::CLAMP_TOL {
                return Err(Error::Integrity {
                    detail: format!("spectrum value {l:e} below zero"),
                });
            }
        }
        Ok(Self {
            lambdas: lambdas.map(|l| l.max(T::zero())),
        })
    }

    pub fn lambdas(&self) -> [T; 4] {
        self.lambdas
    }

    /// Values in decreasing order.
    pub fn sorted_desc(&self) -> [T; 4] {
        let mut v = self.lambdas;
        v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        v
    }

    pub fn sum(&self) -> T {
        self.lambdas.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// Max elementwise difference after sorting both sides.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.sorted_desc()
            .iter()
            .zip(other.sorted_desc())
            .fold(T::zero(), |m, (a, b)| m.max((*a - b).abs()))
    }
}

/// `max(0, l1 - l2 - l3 - l4)` over descending square roots.
pub fn concurrence_from_spectrum<T: Real>(s: &Spectrum<T>) -> T {
    concurrence_from_eigenvalues(&s.lambdas)
}

fn check_domain<T: Real>(kind: ChannelKind, gamma: T, strength: T) -> Result<()> {
    StateParam::new(gamma)?;
    crate::channels::ChannelParam::new(kind, strength)?;
    Ok(())
}

/// Square root with the `-CLAMP_TOL` guard.
fn guarded_sqrt<T: Real>(kind: ChannelKind, location: &'static str, x: T) -> Result<T> {
    if x < -T::CLAMP_TOL {
        return Err(Error::FormulaDomain {
            kind,
            location,
            value: x.as_f64(),
        });
    }
    Ok(x.max(T::zero()).sqrt())
}

/// Closed-form spectrum for `kind` at state parameter `gamma` and channel
/// strength `strength` (`p` or `lt`).
pub fn closed_form_spectrum<T: Real>(
    kind: ChannelKind,
    gamma: T,
    strength: T,
) -> Result<Spectrum<T>> {
    check_domain(kind, gamma, strength)?;
    let c = T::lit;
    let g = gamma;
    let g2 = g * g;
    let lambdas = match kind {
        ChannelKind::BitFlip => {
            let p = strength;
            let l1 = (c(3.0) * g + c(2.0) * (c(3.0) * g - c(1.0)) * (p - c(1.0)) * p - c(2.0))
                .powi(2)
                / c(36.0);
            let l2 = (c(3.0) * g + c(2.0) * (c(3.0) * g + c(1.0)) * (p - c(1.0)) * p + c(2.0))
                .powi(2)
                / c(36.0);
            let radicand =
                g2 * (p - c(2.0)) * (p - c(1.0)).powi(3) * p.powi(3) * (p + c(1.0));
            let root = guarded_sqrt(kind, "radicand of lambda3/lambda4", radicand)?;
            let poly = p
                * (p * (p * p + c(9.0) * g2 * (p - c(1.0)).powi(2) - c(2.0) * p - c(1.0))
                    + c(2.0));
            let l3 = (poly - c(6.0) * root) / c(9.0);
            let l4 = (c(6.0) * root + poly) / c(9.0);
            [l1, l2, l3, l4]
        }
        ChannelKind::PhaseFlip => {
            let p = strength;
            let w = c(3.0) * g * (c(1.0) - c(2.0) * p).powi(2);
            [
                T::zero(),
                T::zero(),
                (c(2.0) - w).powi(2) / c(36.0),
                (w + c(2.0)).powi(2) / c(36.0),
            ]
        }
        ChannelKind::BitPhaseFlip => {
            let p = strength;
            let l1 = (c(3.0) * g + c(6.0) * (g - c(1.0)) * (p - c(1.0)) * p - c(2.0)).powi(2)
                / c(36.0);
            let l2 = (c(3.0) * g + c(6.0) * (g + c(1.0)) * (p - c(1.0)) * p + c(2.0)).powi(2)
                / c(36.0);
            let radicand = g2
                * (p - c(1.0)).powi(3)
                * p.powi(3)
                * (c(9.0) * (p - c(1.0)) * p + c(2.0));
            let root = guarded_sqrt(kind, "radicand of lambda3/lambda4", radicand)?;
            let poly = (p - c(1.0))
                * p
                * (c(9.0) * (g2 + c(1.0)) * (p - c(1.0)) * p + c(2.0));
            let l3 = (poly - c(6.0) * root) / c(9.0);
            let l4 = (c(6.0) * root + poly) / c(9.0);
            [l1, l2, l3, l4]
        }
        ChannelKind::AmplitudeDamping => {
            let t = strength;
            let e = |k: f64| (c(k) * t).exp();
            let l12 = e(-4.0) * (e(1.0) - c(1.0)) * (c(2.0) * e(1.0) - c(1.0)) / c(9.0);
            let radicand = g2
                * e(19.0)
                * (c(2.0) * t.sinh() + c(4.0) * t.cosh() - c(3.0));
            let root = guarded_sqrt(kind, "radicand of lambda3/lambda4", radicand)?;
            let head = e(8.0)
                * (c(3.0) * e(1.0) * ((c(3.0) * g2 + c(4.0)) * e(1.0) - c(4.0)) + c(4.0));
            let l3 = e(-12.0) * (head - c(12.0) * root) / c(36.0);
            let l4 = e(-12.0) * (head + c(12.0) * root) / c(36.0);
            [l12, l12, l3, l4]
        }
        ChannelKind::PhaseDamping => {
            let t = strength;
            let decay = (c(-4.0) * t).exp();
            let e2 = (c(2.0) * t).exp();
            [
                T::zero(),
                T::zero(),
                decay * (c(2.0) * e2 - c(3.0) * g).powi(2) / c(36.0),
                decay * (c(3.0) * g + c(2.0) * e2).powi(2) / c(36.0),
            ]
        }
        ChannelKind::Depolarizing => {
            let t = strength;
            let e = |k: f64| (c(k) * t).exp();
            let l12 = c(4.0) / c(81.0)
                * g2
                * e(-4.0)
                * (c(-5.0) * e(1.0) + e(2.0) + c(4.0)).powi(2);
            let l3 = e(-2.0)
                * ((c(45.0) * g - c(6.0)) * t.sinh() + (c(10.0) - c(75.0) * g) * t.cosh()
                    + c(48.0) * g
                    + c(8.0))
                .powi(2)
                / c(2916.0);
            let l4 = e(-4.0)
                * (e(1.0) * ((c(15.0) * g + c(2.0)) * e(1.0) - c(48.0) * g + c(8.0))
                    + c(60.0) * g
                    + c(8.0))
                .powi(2)
                / c(2916.0);
            [l12, l12, l3, l4]
        }
    };
    const NAMES: [&str; 4] = ["lambda1", "lambda2", "lambda3", "lambda4"];
    for (l, location) in lambdas.iter().zip(NAMES) {
        if *l < -T::CLAMP_TOL {
            return Err(Error::FormulaDomain {
                kind,
                location,
                value: l.as_f64(),
            });
        }
    }
    Spectrum::new(lambdas)
}

/// Spectrum from the numerical path: MEMS, product channel, `eig4`.
pub fn numeric_spectrum<T: Real>(kind: ChannelKind, gamma: T, strength: T) -> Result<Spectrum<T>> {
    let rho = mems(StateParam::new(gamma)?)?;
    let evolved = evolve(&rho, kind, strength)?;
    Spectrum::new(product_eigenvalues(&evolved)?)
}

/// One grid cell where the closed form and the numerical spectrum disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyRecord<T> {
    pub kind: ChannelKind,
    pub gamma: T,
    pub strength: T,
    /// Infinite when the closed form could not be evaluated.
    pub max_abs_error: T,
    pub closed_form: Option<Spectrum<T>>,
    pub numeric: Spectrum<T>,
    /// Set when the closed form hit a negative square-root argument or a
    /// negative eigenvalue.
    pub formula_error: Option<String>,
}

/// Deviation (when the closed form is defined) and the record, if any.
fn compare_cell<T: Real>(
    kind: ChannelKind,
    gamma: T,
    strength: T,
    tol: T,
) -> Result<(Option<T>, Option<DiscrepancyRecord<T>>)> {
    let numeric = numeric_spectrum(kind, gamma, strength)?;
    let record = |max_abs_error, closed_form, formula_error| DiscrepancyRecord {
        kind,
        gamma,
        strength,
        max_abs_error,
        closed_form,
        numeric,
        formula_error,
    };
    match closed_form_spectrum(kind, gamma, strength) {
        Ok(closed) => {
            let err = closed.max_abs_diff(&numeric);
            Ok((Some(err), (err > tol).then(|| record(err, Some(closed), None))))
        }
        Err(e @ Error::FormulaDomain { .. }) => {
            Ok((None, Some(record(T::infinity(), None, Some(e.to_string())))))
        }
        Err(e) => Err(e),
    }
}

/// Compares both spectra at one point; `Some` iff they differ by more than
/// `tol` or the closed form is undefined there.
pub fn compare_spectrum<T: Real>(
    kind: ChannelKind,
    gamma: T,
    strength: T,
    tol: T,
) -> Result<Option<DiscrepancyRecord<T>>> {
    Ok(compare_cell(kind, gamma, strength, tol)?.1)
}

/// Result of comparing one channel over a `(gamma, strength)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridComparison<T> {
    pub kind: ChannelKind,
    pub cells: usize,
    /// Max deviation over the cells where the closed form is defined.
    pub max_abs_error: T,
    /// Sorted by `(gamma, strength)`.
    pub records: Vec<DiscrepancyRecord<T>>,
}

/// Runs [`compare_spectrum`] over the cartesian grid `gammas x strengths`.
/// Cells are evaluated in parallel; the output does not depend on the
/// number of workers.
pub fn compare_grid<T: Real>(
    kind: ChannelKind,
    gammas: &[T],
    strengths: &[T],
    tol: T,
) -> Result<GridComparison<T>> {
    let cells: Vec<(T, T)> = gammas
        .iter()
        .flat_map(|&g| strengths.iter().map(move |&s| (g, s)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(g, s)| compare_cell(kind, g, s, tol))
        .collect::<Result<Vec<_>>>()?;

    let max_abs_error = results
        .iter()
        .filter_map(|(e, _)| *e)
        .fold(T::zero(), T::max);
    let mut records: Vec<_> = results.into_iter().filter_map(|(_, r)| r).collect();
    records.sort_by(|a, b| {
        (a.gamma, a.strength)
            .partial_cmp(&(b.gamma, b.strength))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(GridComparison {
        kind,
        cells: cells.len(),
        max_abs_error,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_desc(s: &Spectrum<f64>) -> [f64; 4] {
        s.sorted_desc().map(f64::sqrt)
    }

    #[test]
    fn bit_flip_half_by_hand() {
        // gamma = 0.2, p = 0.5: (p-1)p = -1/4
        //   l1 = (0.6 + 2(-0.4)(-0.25) - 2)^2/36 = (-1.2)^2/36 = 0.04
        //   l2 = (0.6 + 2(1.6)(-0.25) + 2)^2/36 = (1.8)^2/36 = 0.09
        //   radicand = 0.04 (-1.5)(-0.125)(0.125)(1.5) = 0.0014063
        //   poly = 0.5 (0.5 (0.25 + 0.09 - 1 - 1) + 2) = 0.585
        //   l3,l4 = (0.585 -+ 6 * 0.0375)/9 = 0.04, 0.09
        let s = closed_form_spectrum(ChannelKind::BitFlip, 0.2, 0.5).unwrap();
        let want = [0.3, 0.3, 0.2, 0.2];
        for (g, w) in sqrt_desc(&s).iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{s:?}");
        }
        assert_eq!(concurrence_from_spectrum(&s), 0.0);
    }

    #[test]
    fn phase_flip_at_zero() {
        for gamma in [0.0f64, 0.2, 0.5, 0.6] {
            let s = closed_form_spectrum(ChannelKind::PhaseFlip, gamma, 0.0).unwrap();
            let l = s.lambdas();
            assert_eq!(l[0], 0.0);
            assert_eq!(l[1], 0.0);
            assert!((l[2] - (2.0 - 3.0 * gamma).powi(2) / 36.0).abs() < 1e-15);
            assert!((l[3] - (3.0 * gamma + 2.0).powi(2) / 36.0).abs() < 1e-15);
            assert!((concurrence_from_spectrum(&s) - gamma).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_damping_concurrence() {
        let s = closed_form_spectrum(ChannelKind::PhaseDamping, 0.2f64, 0.5).unwrap();
        assert!((concurrence_from_spectrum(&s) - 0.2 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((concurrence_from_spectrum(&s) - 0.0735759).abs() < 1e-7);
    }

    #[test]
    fn concurrence_of_simple_spectra() {
        let s = |l: [f64; 4]| concurrence_from_spectrum(&Spectrum::new(l).unwrap());
        assert_eq!(s([1.0, 0.0, 0.0, 0.0]), 1.0);
        assert_eq!(s([0.25, 0.25, 0.0, 0.0]), 0.0);
        assert!((s([0.187778, 0.054444, 0.0, 0.0]) - 0.2).abs() < 1e-5);
    }

    #[test]
    fn spectrum_guard() {
        assert!(Spectrum::new([-1e-9, 0.1, 0.2, 0.3]).is_ok());
        assert_eq!(Spectrum::new([-1e-9f64, 0.1, 0.2, 0.3]).unwrap().lambdas()[0], 0.0);
        assert!(Spectrum::new([-1e-7, 0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn bit_phase_flip_radicand_negative_off_center() {
        // (p-1)^3 p^3 < 0 and 9(p-1)p + 2 > 0 for p < 1/3
        let err = closed_form_spectrum(ChannelKind::BitPhaseFlip, 0.4, 0.2).unwrap_err();
        assert!(matches!(err, Error::FormulaDomain { kind: ChannelKind::BitPhaseFlip, .. }));
        assert!(closed_form_spectrum(ChannelKind::BitPhaseFlip, 0.4, 0.5).is_ok());
    }

    #[test]
    fn compare_examples() {
        assert!(compare_spectrum(ChannelKind::PhaseDamping, 0.3, 0.7, 1e-8).unwrap().is_none());
        assert!(compare_spectrum(ChannelKind::BitFlip, 0.2, 0.5, 1e-8).unwrap().is_none());
        for kind in ChannelKind::ALL {
            assert!(compare_spectrum(kind, 0.4, 0.0, 1e-8).unwrap().is_none(), "{kind}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(closed_form_spectrum(ChannelKind::BitFlip, 1.2, 0.5).is_err());
        assert!(closed_form_spectrum(ChannelKind::BitFlip, 0.2, 1.5).is_err());
        assert!(closed_form_spectrum(ChannelKind::AmplitudeDamping, 0.2, -0.1).is_err());
    }
}
