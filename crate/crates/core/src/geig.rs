//! Largest generalized eigenpair of a Hermitian-definite pair and the
//! null-space machinery used by the capacity formulas.
//!
//! The pair `(A, B)` is solved by Cholesky whitening: with `B = L L†`, the
//! generalized eigenpairs of `(A, B)` are `(mu, L^-† y)` for the eigenpairs
//! `(mu, y)` of the Hermitian matrix `L^-1 A L^-†`. When several eigenvectors
//! share the largest eigenvalue, any of them maximizes the Rayleigh quotient;
//! the one returned is the first in the eigensolver's ordering, normalized to
//! unit norm with canonical phase.

use nalgebra::{Cholesky, Complex, DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::scalar::{c, inner, modulus, norm_sqr, CMatrix, CVector, Real};

/// Square complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    m: CMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Validates `m` and stores its Hermitian part `(m + m†)/2`.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if !crate::scalar::all_finite_mat(&m) {
            return Err(Error::NonFinite("Hermitian matrix"));
        }
        let n = m.nrows();
        let mut scale = T::one();
        let mut dev = T::zero();
        for i in 0..n {
            for j in 0..n {
                scale = scale.max(modulus(m[(i, j)]));
                dev = dev.max(modulus(m[(i, j)] - m[(j, i)].conj()));
            }
        }
        if dev > T::lit(T::HERMITIAN_TOL) * scale {
            return Err(Error::NotHermitian { max_deviation: dev.to_f64_lossy() });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part of a matrix known to be Hermitian up to round-off.
    pub(crate) fn symmetrized(m: CMatrix<T>) -> Self {
        let half = T::lit(0.5);
        let adj = m.adjoint();
        let m = (m + adj).map(|z| z * half);
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: CMatrix::identity(n, n) }
    }

    /// `a a†`.
    pub fn outer(a: &CVector<T>) -> Self {
        Self::symmetrized(a * a.adjoint())
    }

    /// `I + s·a a†`.
    pub fn identity_plus_outer(s: T, a: &CVector<T>) -> Self {
        let n = a.len();
        let mut m = a * a.adjoint();
        m.iter_mut().for_each(|z| *z = z.scale(s));
        for i in 0..n {
            m[(i, i)] += Complex::from(T::one());
        }
        Self::symmetrized(m)
    }

    /// `I + s·H† H` for an `n_e × n` matrix `H` (`I` when `H` has no rows).
    pub fn identity_plus_gram(s: T, h: &CMatrix<T>) -> Self {
        let n = h.ncols();
        let mut m = gram(h);
        m.iter_mut().for_each(|z| *z = z.scale(s));
        for i in 0..n {
            m[(i, i)] += Complex::from(T::one());
        }
        Self::symmetrized(m)
    }

    /// `H† H`.
    pub fn gram(h: &CMatrix<T>) -> Self {
        Self::symmetrized(gram(h))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<T> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        ev
    }

    /// Largest (regular) eigenvalue and a canonical-phase unit eigenvector.
    pub fn max_eigenpair(&self) -> (T, CVector<T>) {
        let eig = SymmetricEigen::new(self.m.clone());
        let k = argmax(eig.eigenvalues.iter().copied());
        let v = canonical_unit(eig.eigenvectors.column(k).into_owned());
        (eig.eigenvalues[k], v)
    }

    /// `psi† M psi` (real for Hermitian `M`).
    pub fn quadratic_form(&self, psi: &CVector<T>) -> T {
        inner(psi, &(&self.m * psi)).re
    }
}

fn gram<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    if h.nrows() == 0 {
        CMatrix::zeros(h.ncols(), h.ncols())
    } else {
        h.adjoint() * h
    }
}

fn argmax<T: Real>(it: impl Iterator<Item = T>) -> usize {
    let mut best = 0;
    let mut best_val: Option<T> = None;
    for (i, v) in it.enumerate() {
        if best_val.is_none_or(|b| v > b) {
            best = i;
            best_val = Some(v);
        }
    }
    best
}

/// Largest generalized eigenvalue with its unit, canonical-phase eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct GeigResult<T: Real> {
    pub lambda_max: T,
    pub psi_max: CVector<T>,
}

/// Scales `v` to unit norm and rotates it so the first entry that is not
/// negligible (relative to the norm) is real and nonnegative.
pub fn canonical_unit<T: Real>(v: CVector<T>) -> CVector<T> {
    let nrm = norm_sqr(&v).sqrt();
    if nrm == T::zero() {
        return v;
    }
    let mut v = v.map(|z| z.unscale(nrm));
    let thresh = T::lit(1e3) * T::default_epsilon();
    if let Some(k) = v.iter().position(|z| modulus(*z) > thresh) {
        let z = v[k];
        let phase = z.conj().unscale(modulus(z));
        v.iter_mut().for_each(|x| *x *= phase);
        v[k] = Complex::new(modulus(z), T::zero());
    }
    v
}

struct Whitened<T: Real> {
    chol: Cholesky<Complex<T>, nalgebra::Dyn>,
}

impl<T: Real> Whitened<T> {
    fn new(b: &HermitianMatrix<T>) -> Result<Self> {
        let ev = b.eigenvalues();
        let (lo, hi) = match (ev.first(), ev.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return Err(Error::DimensionMismatch("empty matrix".into())),
        };
        let not_pd = || Error::NotPositiveDefinite {
            min_eigenvalue: lo.to_f64_lossy(),
            max_eigenvalue: hi.to_f64_lossy(),
        };
        if hi <= T::zero() || lo <= T::lit(T::DEFINITE_TOL) * hi {
            return Err(not_pd());
        }
        let chol = Cholesky::new(b.matrix().clone()).ok_or_else(not_pd)?;
        Ok(Self { chol })
    }

    fn solve(&self, rhs: &CVector<T>) -> CVector<T> {
        self.chol.solve(rhs)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{a}x{a} vs {b}x{b}")));
    }
    if a == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    Ok(())
}

/// Largest generalized eigenvalue of `(A, B)` for Hermitian `A` and
/// positive-definite `B`: the maximum over `psi` of `psi†A psi / psi†B psi`.
pub fn lambda_max<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<GeigResult<T>> {
    check_dims(a.dim(), b.dim())?;
    let w = Whitened::new(b)?;
    let l = w.chol.l();
    // M = L^-1 A L^-† = L^-1 (L^-1 A)†
    let la = l
        .solve_lower_triangular(a.matrix())
        .ok_or_else(|| Error::InvalidArgument("singular Cholesky factor".into()))?;
    let m = l
        .solve_lower_triangular(&la.adjoint())
        .ok_or_else(|| Error::InvalidArgument("singular Cholesky factor".into()))?;
    let m = HermitianMatrix::symmetrized(m);
    let (mu, y) = m.max_eigenpair();
    let psi = l
        .adjoint()
        .solve_upper_triangular(&y)
        .ok_or_else(|| Error::InvalidArgument("singular Cholesky factor".into()))?;
    Ok(GeigResult { lambda_max: mu, psi_max: canonical_unit(psi) })
}

/// Rank-one shortcut: `lambda_max(a a†, B) = a† B^-1 a`, attained at `B^-1 a`.
pub fn lambda_max_rank_one<T: Real>(a: &CVector<T>, b: &HermitianMatrix<T>) -> Result<GeigResult<T>> {
    check_dims(a.len(), b.dim())?;
    if !crate::scalar::all_finite_vec(a) {
        return Err(Error::NonFinite("vector"));
    }
    let w = Whitened::new(b)?;
    let x = w.solve(a);
    let lambda = inner(a, &x).re.max(T::zero());
    let psi = if norm_sqr(&x) == T::zero() {
        let mut e = CVector::zeros(a.len());
        e[0] = Complex::from(T::one());
        e
    } else {
        canonical_unit(x)
    };
    Ok(GeigResult { lambda_max: lambda, psi_max: psi })
}

/// Solves `B x = rhs` for positive-definite `B`.
pub fn solve_definite<T: Real>(b: &HermitianMatrix<T>, rhs: &CVector<T>) -> Result<CVector<T>> {
    check_dims(rhs.len(), b.dim())?;
    Ok(Whitened::new(b)?.solve(rhs))
}

/// Orthonormal basis (as columns) of the row space of `H`, i.e. the column
/// space of `H†`. The number of columns is the numerical rank of `H`.
pub fn row_space_basis<T: Real>(h: &CMatrix<T>) -> CMatrix<T> {
    let n = h.ncols();
    if h.nrows() == 0 || n == 0 {
        return CMatrix::zeros(n, 0);
    }
    let svd = SVD::new(h.clone(), false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(T::zero(), T::max);
    if smax == T::zero() {
        return CMatrix::zeros(n, 0);
    }
    let tol = T::lit(T::RANK_TOL) * smax;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    let mut q = CMatrix::zeros(n, keep.len());
    for (col, &i) in keep.iter().enumerate() {
        // row i of V† is v_i†
        for r in 0..n {
            q[(r, col)] = v_t[(i, r)].conj();
        }
    }
    q
}

/// Numerical column rank of `H`.
pub fn column_rank<T: Real>(h: &CMatrix<T>) -> usize {
    row_space_basis(h).ncols()
}

/// Orthogonal projector onto `Null(H)`; zero when `H` has full column rank.
pub fn null_projector<T: Real>(h: &CMatrix<T>) -> HermitianMatrix<T> {
    let n = h.ncols();
    let q = row_space_basis(h);
    let mut p = CMatrix::identity(n, n);
    if q.ncols() > 0 {
        p -= &q * q.adjoint();
    }
    HermitianMatrix::symmetrized(p)
}

/// Equivalent lower-dimensional channel for a column-rank-deficient `H`:
/// `g = Q† h`, `G = H Q` with `Q` an orthonormal basis of the row space of `H`.
pub fn reduce_rank_deficient<T: Real>(h: &CVector<T>, hm: &CMatrix<T>) -> Result<(CVector<T>, CMatrix<T>)> {
    if h.len() != hm.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "h has {} entries, H has {} columns",
            h.len(),
            hm.ncols()
        )));
    }
    let q = row_space_basis(hm);
    if q.ncols() == hm.ncols() {
        return Err(Error::FullColumnRank(q.ncols()));
    }
    let g = q.adjoint() * h;
    let gm = if hm.nrows() == 0 { CMatrix::zeros(0, q.ncols()) } else { hm * &q };
    Ok((g, gm))
}

/// Real-valued helper: `e_k` as a complex vector.
pub fn basis_vector<T: Real>(n: usize, k: usize) -> CVector<T> {
    let mut e = CVector::from_element(n, c(T::zero(), T::zero()));
    e[k] = c(T::one(), T::zero());
    e
}

/// Diagonal Hermitian matrix with the given real entries.
pub fn diag<T: Real>(d: &[T]) -> HermitianMatrix<T> {
    let v = DVector::from_iterator(d.len(), d.iter().map(|&x| Complex::from(x)));
    HermitianMatrix::symmetrized(DMatrix::from_diagonal(&v))
}
