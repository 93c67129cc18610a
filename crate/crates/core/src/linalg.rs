//! Fixed-size complex matrices and the 4x4 eigenvalue solver.
//!
//! Two-qubit basis order is |00>, |01>, |10>, |11> everywhere, so
//! `kron2(a, b)[2*i + k][2*j + l] = a[i][j] * b[k][l]`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{finite, re, Real};
use crate::{tol, Error, Result};

/// Dense `N x N` complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareMatrix<T, const N: usize> {
    entries: [[Complex<T>; N]; N],
}

pub type Mat2<T> = SquareMatrix<T, 2>;
pub type Mat4<T> = SquareMatrix<T, 4>;

impl<T: Real, const N: usize> SquareMatrix<T, N> {
    /// Wraps rows without checking finiteness. Use for literals built from
    /// finite arithmetic; [`SquareMatrix::try_from_rows`] validates.
    pub fn from_rows(entries: [[Complex<T>; N]; N]) -> Self {
        debug_assert!(entries.iter().flatten().all(finite));
        Self { entries }
    }

    pub fn try_from_rows(entries: [[Complex<T>; N]; N]) -> Result<Self> {
        if entries.iter().flatten().all(finite) {
            Ok(Self { entries })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Real-valued matrix.
    pub fn from_real(rows: [[T; N]; N]) -> Self {
        Self::from_fn(|i, j| re(rows[i][j]))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut entries = [[Complex::zero(); N]; N];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = f(i, j);
            }
        }
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self::from_fn(|_, _| Complex::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn diag(d: [T; N]) -> Self {
        Self::from_fn(|i, j| if i == j { re(d[i]) } else { Complex::zero() })
    }

    pub fn rows(&self) -> &[[Complex<T>; N]; N] {
        &self.entries
    }

    pub fn multiply(&self, rhs: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..N).fold(Complex::zero(), |acc, k| {
                acc + self.entries[i][k] * rhs.entries[k][j]
            })
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i])
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate_entrywise(&self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..N).fold(Complex::zero(), |acc, i| acc + self.entries[i][i])
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(re(s))
    }

    /// Max entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Max entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    /// Max entrywise |M - M^dagger|.
    pub fn hermiticity_deviation(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(finite)
    }
}

impl<T, const N: usize> Index<(usize, usize)> for SquareMatrix<T, N> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.entries[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for SquareMatrix<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[i][j]
    }
}

impl<T: Real, const N: usize> Add for SquareMatrix<T, N> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] + rhs.entries[i][j])
    }
}

impl<T: Real, const N: usize> Sub for SquareMatrix<T, N> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j] - rhs.entries[i][j])
    }
}

impl<T: Real, const N: usize> Mul for SquareMatrix<T, N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
    }
}

impl<T: Real, const N: usize> Mul for &SquareMatrix<T, N> {
    type Output = SquareMatrix<T, N>;

    fn mul(self, rhs: Self) -> SquareMatrix<T, N> {
        self.multiply(rhs)
    }
}

/// Pauli matrices and other single-qubit constants.
pub mod pauli {
    use super::*;

    pub fn x<T: Real>() -> Mat2<T> {
        Mat2::from_real([[T::zero(), T::one()], [T::one(), T::zero()]])
    }

    /// `[[0, -i], [i, 0]]`
    pub fn y<T: Real>() -> Mat2<T> {
        let z = Complex::zero();
        Mat2::from_rows([[z, -Complex::i()], [Complex::i(), z]])
    }

    pub fn z<T: Real>() -> Mat2<T> {
        Mat2::diag([T::one(), -T::one()])
    }
}

/// Kronecker product of two single-qubit operators.
pub fn kron2<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

// Multiples of eps applied to the running magnitudes. Worst-case constants
// overstate typical rounding by an order of magnitude and merge resolvable
// near-double roots.
const HORNER_ROUNDING: f64 = 4.0;
const COEFF_ROUNDING: f64 = 4.0;

/// Monic polynomial `z^n + c[n-1] z^(n-1) + .. + c[0]`, with a bound on the
/// uncertainty already present in each coefficient.
#[derive(Debug, Clone)]
struct Monic<T: Real> {
    c: Vec<Complex<T>>,
    err: Vec<T>,
}

impl<T: Real> Monic<T> {
    fn degree(&self) -> usize {
        self.c.len()
    }

    /// Coefficient of `z^deg` and its uncertainty.
    fn coeff(&self, deg: usize) -> (Complex<T>, T) {
        if deg == self.degree() {
            (Complex::one(), T::zero())
        } else {
            (self.c[deg], self.err[deg])
        }
    }

    /// `k`-th derivative at `z`.
    fn eval(&self, k: usize, z: Complex<T>) -> Complex<T> {
        (k..=self.degree()).rev().fold(Complex::zero(), |acc, deg| {
            acc * z + self.coeff(deg).0 * re(T::lit(falling(deg, k) as f64))
        })
    }

    /// Bound on the error of `eval(k, z)`: Horner rounding plus the
    /// propagated coefficient uncertainty.
    fn error_bound(&self, k: usize, z: Complex<T>) -> T {
        let (rounding, inherited) = self.error_terms(k, z);
        rounding + inherited
    }

    fn error_terms(&self, k: usize, z: Complex<T>) -> (T, T) {
        let r = z.norm();
        let (magnitude, inherited) =
            (k..=self.degree()).rev().fold((T::zero(), T::zero()), |(m, e), deg| {
                let f = T::lit(falling(deg, k) as f64);
                let (c, err) = self.coeff(deg);
                (m * r + c.norm() * f, e * r + err * f)
            });
        // min_positive covers residuals that have underflowed
        (T::lit(HORNER_ROUNDING) * T::epsilon() * magnitude + T::min_positive_value(), inherited)
    }

    /// Coefficients inside their own uncertainty become exact zeros, which
    /// keeps the zero eigenvalues of a rank-deficient matrix exactly zero.
    fn snap_zeros(&mut self) {
        for (c, &e) in self.c.iter_mut().zip(&self.err) {
            if c.norm() <= e {
                *c = Complex::zero();
            }
        }
    }
}

/// `deg! / (deg - k)!`
fn falling(deg: usize, k: usize) -> usize {
    ((deg - k + 1)..=deg).product()
}

/// Coefficients `[c0, c1, c2, c3]` of the monic characteristic polynomial
/// `z^4 + c3 z^3 + c2 z^2 + c1 z + c0`, via Faddeev-LeVerrier.
pub fn characteristic_polynomial<T: Real>(m: &Mat4<T>) -> [Complex<T>; 4] {
    let p = block_polynomial(m, &[0, 1, 2, 3]);
    [p.c[0], p.c[1], p.c[2], p.c[3]]
}

/// Faddeev-LeVerrier on the principal submatrix `idx`, with a running bound
/// on each coefficient from the same recursion run on `|M|` and `|c|`.
fn block_polynomial<T: Real>(m: &Mat4<T>, idx: &[usize]) -> Monic<T> {
    let n = idx.len();
    let a: Vec<Vec<Complex<T>>> = idx.iter().map(|&i| idx.iter().map(|&j| m[(i, j)]).collect()).collect();
    let abs: Vec<Vec<T>> = a.iter().map(|row| row.iter().map(|z| z.norm()).collect()).collect();

    fn mul<S: Copy + std::ops::Add<Output = S> + std::ops::Mul<Output = S>>(
        a: &[Vec<S>],
        b: &[Vec<S>],
        zero: S,
    ) -> Vec<Vec<S>> {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(zero, |acc, k| acc + a[i][k] * b[k][j])).collect())
            .collect()
    }

    let mut c = vec![Complex::zero(); n];
    let mut err = vec![T::zero(); n];
    let mut prev = Complex::one();
    let mut mk = vec![vec![Complex::zero(); n]; n];
    let mut mk_abs = vec![vec![T::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mul(&a, &mk, Complex::zero());
        let mut next_abs = mul(&abs, &mk_abs, T::zero());
        for i in 0..n {
            next[i][i] = next[i][i] + prev;
            next_abs[i][i] = next_abs[i][i] + prev.norm();
        }
        let k_t = T::lit(k as f64);
        let product = mul(&a, &next, Complex::zero());
        let product_abs = mul(&abs, &next_abs, T::zero());
        let coeff = -(0..n).fold(Complex::<T>::zero(), |acc, i| acc + product[i][i]) / re(k_t);
        let magnitude = (0..n).fold(T::zero(), |acc, i| acc + product_abs[i][i]) / k_t;
        c[n - k] = coeff;
        err[n - k] = T::lit(COEFF_ROUNDING) * T::epsilon() * magnitude;
        prev = coeff;
        mk = next;
        mk_abs = next_abs;
    }
    Monic { c, err }
}

/// Roots of the monic quartic with coefficients `[c0, c1, c2, c3]`.
///
/// Durand-Kerner (Weierstrass) iteration from points on a circle of radius
/// `1 + max|c_k|`. Iteration stops when no root moves more than
/// `T::EIG_STEP_TOL`, or when every residual is at the rounding floor of the
/// evaluation (the only reachable state near multiple roots). Clusters that a
/// multiple root smears out to `~eps^(1/m)` are then replaced by their
/// refined centre.
pub fn quartic_roots<T: Real>(coeffs: &[Complex<T>; 4]) -> Result<[Complex<T>; 4]> {
    let p = Monic {
        c: coeffs.to_vec(),
        err: vec![T::zero(); 4],
    };
    let r = polynomial_roots(&p)?;
    Ok([r[0], r[1], r[2], r[3]])
}

fn polynomial_roots<T: Real>(p: &Monic<T>) -> Result<Vec<Complex<T>>> {
    if p.c.iter().any(|c| !finite(c)) {
        return Err(Error::NonFinite);
    }
    let n = p.degree();
    if n == 1 {
        return Ok(vec![-p.c[0]]);
    }
    let radius = T::one() + p.c.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    let offset = T::lit(0.4);
    let mut roots: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let angle = T::TAU() * T::lit(k as f64) / T::lit(n as f64) + offset;
            Complex::from_polar(radius, angle)
        })
        .collect();

    let mut converged = false;
    for _ in 0..tol::EIG_MAX_ITER {
        // simultaneous (Jacobi) update: keeps sum(roots) = -c[n-1] at every
        // step, which is what makes cluster means accurate
        let steps: Vec<Complex<T>> = (0..n)
            .map(|i| {
                let zi = roots[i];
                let mut denom = (0..n)
                    .filter(|&j| j != i)
                    .fold(Complex::one(), |d, j| d * (zi - roots[j]));
                if denom.norm() == T::zero() {
                    // coincident iterates; nudge apart
                    denom = re(T::epsilon());
                }
                let w = p.eval(0, zi) / denom;
                if finite(&w) {
                    w
                } else {
                    Complex::zero()
                }
            })
            .collect();
        let mut max_step = T::zero();
        for (z, w) in roots.iter_mut().zip(&steps) {
            *z = *z - *w;
            max_step = max_step.max(w.norm());
        }
        // the coefficients are taken as exact here; their own uncertainty
        // only matters when deciding which roots coincide
        let at_floor = roots.iter().all(|&z| p.eval(0, z).norm() <= p.error_terms(0, z).0);
        if max_step < T::EIG_STEP_TOL || at_floor {
            converged = true;
            break;
        }
    }

    if !converged || roots.iter().any(|z| !finite(z)) {
        let residual = roots
            .iter()
            .map(|&z| p.eval(0, z).norm().as_f64())
            .fold(0.0, f64::max);
        return Err(Error::SolverFailure {
            iterations: tol::EIG_MAX_ITER,
            residual,
        });
    }

    merge_clusters(p, &mut roots);
    Ok(roots)
}

/// An m-fold root of p is a simple root of p^(m-1); Newton on that
/// derivative recovers the cluster centre to full precision.
fn refine_multiple_root<T: Real>(p: &Monic<T>, start: Complex<T>, m: usize) -> Complex<T> {
    let mut z = start;
    for _ in 0..64 {
        let f = p.eval(m - 1, z);
        let df = p.eval(m, z);
        if df.norm() == T::zero() {
            break;
        }
        let step = f / df;
        if !finite(&step) {
            break;
        }
        z = z - step;
        if step.norm() <= T::epsilon() * z.norm() || step.norm() == T::zero() {
            break;
        }
    }
    z
}

/// Centre of the roots `idx` if they are numerically one multiple root: at
/// the refined centre `p, p', .., p^(m-1)` must all vanish to rounding.
fn cluster_centre<T: Real>(p: &Monic<T>, roots: &[Complex<T>], idx: &[usize]) -> Option<Complex<T>> {
    let m = idx.len();
    let sum = idx.iter().fold(Complex::<T>::zero(), |acc, &i| acc + roots[i]);
    let mean = sum / re(T::lit(m as f64));
    let centre = refine_multiple_root(p, mean, m);
    if !finite(&centre) {
        return None;
    }
    let spread = idx.iter().fold(T::zero(), |d, &i| d.max((roots[i] - mean).norm()));
    if (centre - mean).norm() > T::lit(2.0) * spread + T::epsilon() * mean.norm() {
        return None;
    }
    (0..m)
        .all(|k| p.eval(k, centre).norm() <= p.error_bound(k, centre))
        .then_some(centre)
}

/// Index subsets of `0..n` with `m` members.
fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|bits| bits.count_ones() as usize == m)
        .map(|bits| (0..n).filter(|&i| bits & (1 << i) != 0).collect())
        .collect()
}

/// Replaces each numerically multiple root with its refined centre, largest
/// and tightest clusters first; a root joins at most one cluster.
///
/// DK converges only linearly to a multiple root and rounding smears it over
/// `~eps^(1/m)`; the centre is well conditioned even when the members are not.
fn merge_clusters<T: Real>(p: &Monic<T>, roots: &mut [Complex<T>]) {
    let n = roots.len();
    let mut used = vec![false; n];
    for m in (2..=n).rev() {
        let diameter = |idx: &[usize]| {
            idx.iter()
                .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
                .fold(T::zero(), |d, (i, j)| d.max((roots[i] - roots[j]).norm()))
        };
        let mut candidates = subsets(n, m);
        candidates.sort_by(|a, b| {
            diameter(a).partial_cmp(&diameter(b)).unwrap_or(std::cmp::Ordering::Equal)
        });
        for idx in candidates {
            if idx.iter().any(|&i| used[i]) {
                continue;
            }
            if let Some(c) = cluster_centre(p, roots, &idx) {
                for &i in &idx {
                    roots[i] = c;
                    used[i] = true;
                }
            }
        }
    }
}

/// Index sets of the diagonal blocks that `M` decouples into under a
/// simultaneous row/column permutation. Entries below `eps * max|M|` count
/// as zero.
fn decoupled_blocks<T: Real>(m: &Mat4<T>) -> Vec<Vec<usize>> {
    let cutoff = T::epsilon() * m.max_abs();
    let mut label = [0, 1, 2, 3];
    for i in 0..4 {
        for j in 0..4 {
            if m[(i, j)].norm() > cutoff || m[(j, i)].norm() > cutoff {
                let (from, to) = (label[j].max(label[i]), label[j].min(label[i]));
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for l in 0..4 {
        let block: Vec<usize> = (0..4).filter(|&i| label[i] == l).collect();
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    blocks
}

/// Eigenvalues of a 4x4 complex matrix, as an unordered multiset.
///
/// Decoupled diagonal blocks (an X-shaped matrix splits into `{0, 3}` and
/// `{1, 2}`) are solved separately, so small eigenvalues are not swamped by
/// rounding in the coefficients of the full quartic.
pub fn eig4<T: Real>(m: &Mat4<T>) -> Result<[Complex<T>; 4]> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut out = Vec::with_capacity(4);
    for block in decoupled_blocks(m) {
        let mut p = block_polynomial(m, &block);
        p.snap_zeros();
        out.extend(polynomial_roots(&p)?);
    }
    Ok([out[0], out[1], out[2], out[3]])
}
