//! Two-qubit concurrence, by the Wootters construction and by the X-state
//! closed form.

use crate::linalg::{eig4, kron2, pauli, Mat4};
use crate::scalar::Real;
use crate::states::DensityMatrix4;
use crate::{Error, Result};

/// `(sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`.
pub fn spin_flip<T: Real>(rho: &DensityMatrix4<T>) -> Mat4<T> {
    let yy = kron2(&pauli::y(), &pauli::y());
    yy.multiply(&rho.matrix().conjugate_entrywise()).multiply(&yy)
}

/// Eigenvalues of `rho * rho_flip`, cleaned to real non-negative values and
/// sorted in decreasing order.
///
/// Imaginary parts and negative real parts within `T::CLAMP_TOL` are rounding
/// and get dropped; anything larger means the input was not a physical state.
pub fn product_eigenvalues<T: Real>(rho: &DensityMatrix4<T>) -> Result<[T; 4]> {
    let product = rho.matrix().multiply(&spin_flip(rho));
    let raw = eig4(&product)?;
    let mut out = [T::zero(); 4];
    for (slot, z) in out.iter_mut().zip(raw) {
        if z.im.abs() > T::CLAMP_TOL {
            return Err(Error::Integrity {
                detail: format!("eigenvalue of rho*rho_flip has imaginary part {:e}", z.im),
            });
        }
        if z.re < -T::CLAMP_TOL {
            return Err(Error::Integrity {
                detail: format!("eigenvalue of rho*rho_flip is negative: {:e}", z.re),
            });
        }
        *slot = z.re.max(T::zero());
    }
    out.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// `max(0, l1 - l2 - l3 - l4)` over the descending square roots of
/// non-negative eigenvalues (given in any order).
pub fn concurrence_from_eigenvalues<T: Real>(eigenvalues: &[T; 4]) -> T {
    let mut roots = eigenvalues.map(|l| l.max(T::zero()).sqrt());
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    (roots[0] - roots[1] - roots[2] - roots[3]).max(T::zero())
}

pub fn concurrence<T: Real>(rho: &DensityMatrix4<T>) -> Result<T> {
    Ok(concurrence_from_eigenvalues(&product_eigenvalues(rho)?))
}

/// Indices outside the diagonal and anti-diagonal.
const NON_X: [(usize, usize); 8] = [
    (0, 1),
    (0, 2),
    (1, 0),
    (1, 3),
    (2, 0),
    (2, 3),
    (3, 1),
    (3, 2),
];

/// Largest entry outside the X pattern, as `(row, col, magnitude)`.
pub fn x_structure_violation<T: Real>(m: &Mat4<T>) -> (usize, usize, T) {
    NON_X
        .iter()
        .map(|&(i, j)| (i, j, m[(i, j)].norm()))
        .fold((0, 1, T::zero()), |best, cur| if cur.2 > best.2 { cur } else { best })
}

/// `2 max(0, |rho_14| - sqrt(rho_22 rho_33), |rho_23| - sqrt(rho_11 rho_44))`,
/// valid only for X-shaped states.
pub fn xstate_concurrence<T: Real>(rho: &DensityMatrix4<T>) -> Result<T> {
    let m = rho.matrix();
    let (row, col, magnitude) = x_structure_violation(m);
    if magnitude > T::XSTATE_TOL {
        return Err(Error::NotXState {
            row,
            col,
            magnitude: magnitude.as_f64(),
        });
    }
    let d = |i: usize| m[(i, i)].re.max(T::zero());
    let outer = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    let inner = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    Ok(T::lit(2.0) * outer.max(inner).max(T::zero()))
}
