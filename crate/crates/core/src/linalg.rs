//! Dense complex vectors and square matrices.
//!
//! Everything here is small (a few thousand dimensions at most) and stored
//! row-major in a flat `Vec`. Predicates compare with the max-norm, i.e. the
//! largest absolute entry of a difference, so a tolerance reads directly as
//! "no entry is off by more than `tol`".

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_finite<T: Scalar>(values: &[Complex<T>]) -> Result<()> {
    match values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Square complex matrix. Plays every operator role: unitary, projector,
/// filter, context.
#[derive(Clone, PartialEq)]
pub struct Matrix<T = f64> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::MalformedMatrix { dim, found: entries.len() });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    /// Builds a real matrix from row-major `f64` entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect())
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::MalformedMatrix { dim, found: row.len() * dim });
            }
            entries.extend(row);
        }
        Self::from_entries(dim, entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &z) in diag.iter().enumerate() {
            m.entries[i * dim + i] = z;
        }
        m
    }

    pub fn real_diagonal(diag: &[T]) -> Self {
        let diag: Vec<_> = diag.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::diagonal(&diag)
    }

    /// Permutation matrix sending basis vector `j` to basis vector `image[j]`.
    pub fn permutation(image: &[usize]) -> Self {
        let dim = image.len();
        let mut m = Self::zeros(dim);
        for (j, &i) in image.iter().enumerate() {
            m.entries[i * dim + j] = Complex::one();
        }
        m
    }

    /// Rank-one projector `|v><v|`.
    pub fn outer(v: &StateVector<T>) -> Self {
        let dim = v.dim();
        let a = v.amplitudes();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(a[i] * a[j].conj());
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex<T>] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> StateVector<T> {
        let amps = (0..self.dim).map(|r| self.get(r, col)).collect();
        StateVector::from_amplitudes_unchecked(amps)
    }

    pub fn diagonal_entries(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i).conj());
            }
        }
        Self { dim: d, entries }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&z| z * c).collect() }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self.get(i, i)).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let d = self.dim;
        let mut entries = vec![Complex::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] = entries[i * d + j] + a * rhs.entries[k * d + j];
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Kronecker product; `self` acts on the more significant factor.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        let d = n * m;
        let mut entries = vec![Complex::zero(); d * d];
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..m {
                    for q in 0..m {
                        entries[(i * m + p) * d + (j * m + q)] = a * rhs.get(p, q);
                    }
                }
            }
        }
        Self { dim: d, entries }
    }

    /// Kronecker product of a sequence of factors, first factor most significant.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Option<Self> {
        factors.into_iter().fold(None, |acc: Option<Self>, f| match acc {
            None => Some(f.clone()),
            Some(a) => Some(a.kron(f)),
        })
    }

    pub fn apply(&self, v: &StateVector<T>) -> Result<StateVector<T>> {
        if self.dim != v.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        let out = self.mul_amplitudes(v.amplitudes());
        let normalized = v.is_normalized() && self.is_unitary(T::default_tolerance());
        Ok(StateVector { amplitudes: out, normalized })
    }

    pub(crate) fn mul_amplitudes(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.row(i).iter().zip(v).fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)).collect()
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> T {
        self.entries.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Max-norm of `self - other`; infinite when the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.entries.iter().zip(&other.entries).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// `‖m·m† − I‖_max`.
    pub fn unitarity_defect(&self) -> T {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_projector(&self, tol: T) -> bool {
        self.is_hermitian(tol) && (self * self).max_abs_diff(self) <= tol
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| i == j || self.get(i, j).norm() <= tol))
    }

    /// Entry-wise real check; used to read off eigenvalues of hermitian operators.
    pub fn is_real(&self, tol: T) -> bool {
        self.entries.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn commutes_with(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim && self.commutator(other).max_norm() <= tol
    }

    /// Permutation matrices have exactly one unit entry per row and column.
    pub fn is_permutation(&self, tol: T) -> bool {
        let d = self.dim;
        let one = Complex::<T>::one();
        let row_ok = (0..d).all(|i| {
            let row = self.row(i);
            row.iter().filter(|z| (**z - one).norm() <= tol).count() == 1
                && row.iter().filter(|z| z.norm() > tol).count() == 1
        });
        let col_ok = (0..d).all(|j| (0..d).filter(|&i| self.get(i, j).norm() > tol).count() == 1);
        row_ok && col_ok
    }

    /// Unitary similarity `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| Complex::new(U::lit(to_f64(z.re)), U::lit(to_f64(z.im)))).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on dimension mismatch; use [`Matrix::try_mul`] for a checked product.
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions agree");
        Matrix { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions agree");
        Matrix { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|z| format!("{z:.4}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Complex amplitude vector over a computational basis.
///
/// Vectors built with [`StateVector::new`] are checked to have unit norm and
/// are flagged as normalized. Raw vectors such as unnormalized sign patterns
/// go through [`StateVector::unnormalized`].
#[derive(Clone, PartialEq)]
pub struct StateVector<T = f64> {
    amplitudes: Vec<Complex<T>>,
    normalized: bool,
}

impl<T: Scalar> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let v = Self::unnormalized(amplitudes)?;
        let norm = v.norm();
        if (norm - T::one()).abs() > T::default_tolerance() {
            return Err(Error::NotNormalized { norm: to_f64(norm) });
        }
        Ok(Self { normalized: true, ..v })
    }

    pub fn unnormalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        check_finite(&amplitudes)?;
        Ok(Self { amplitudes, normalized: false })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect())
    }

    pub fn unnormalized_real(values: &[T]) -> Result<Self> {
        Self::unnormalized(values.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes, normalized: false }
    }

    /// Canonical basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Self { amplitudes, normalized: true }
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm <= T::zero() {
            return Err(Error::ZeroVector);
        }
        let inv = T::one() / norm;
        Ok(Self { amplitudes: self.amplitudes.iter().map(|z| z * inv).collect(), normalized: true })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes, normalized: self.normalized && other.normalized }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|z| z * c).collect(), normalized: false }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim() != other.dim() {
            return T::infinity();
        }
        self.amplitudes.iter().zip(&other.amplitudes).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Index of the single nonzero amplitude, if the vector is a basis state
    /// up to phase.
    pub fn basis_index(&self, tol: T) -> Option<usize> {
        let mut hits = self.amplitudes.iter().enumerate().filter(|(_, z)| z.norm() > tol);
        let (idx, z) = hits.next()?;
        if hits.next().is_some() || (z.norm() - T::one()).abs() > tol {
            return None;
        }
        Some(idx)
    }

    pub fn cast<U: Scalar>(&self) -> StateVector<U> {
        StateVector {
            amplitudes: self
                .amplitudes
                .iter()
                .map(|z| Complex::new(U::lit(to_f64(z.re)), U::lit(to_f64(z.im))))
                .collect(),
            normalized: self.normalized,
        }
    }
}

impl<T: Scalar> Neg for &StateVector<T> {
    type Output = StateVector<T>;

    fn neg(self) -> StateVector<T> {
        StateVector { amplitudes: self.amplitudes.iter().map(|z| -z).collect(), normalized: self.normalized }
    }
}

impl<T: Scalar> fmt::Debug for StateVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amps: Vec<String> = self.amplitudes.iter().map(|z| format!("{z:.4}")).collect();
        write!(f, "StateVector[{}]", amps.join(", "))
    }
}

pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.kron(b)
}

pub fn apply<T: Scalar>(m: &Matrix<T>, v: &StateVector<T>) -> Result<StateVector<T>> {
    m.apply(v)
}

pub fn is_unitary<T: Scalar>(m: &Matrix<T>, tol: T) -> bool {
    m.is_unitary(tol)
}

pub fn is_projector<T: Scalar>(m: &Matrix<T>, tol: T) -> bool {
    m.is_projector(tol)
}

pub fn is_hermitian<T: Scalar>(m: &Matrix<T>, tol: T) -> bool {
    m.is_hermitian(tol)
}

/// Returns `λ = ⟨v|m|v⟩` when `v` is an eigenvector of `m`, i.e. when
/// `‖m·v − λ·v‖_max ≤ tol`.
pub fn eigenvalue_of<T: Scalar>(m: &Matrix<T>, v: &StateVector<T>, tol: T) -> Result<Option<Complex<T>>> {
    Ok(eigen_residual(m, v)?.and_then(|(lambda, residual)| (residual <= tol).then_some(lambda)))
}

/// Rayleigh quotient and eigen-residual of `v` under `m`; `None` for a zero vector.
pub(crate) fn eigen_residual<T: Scalar>(m: &Matrix<T>, v: &StateVector<T>) -> Result<Option<(Complex<T>, T)>> {
    let mv = m.apply(v)?;
    let norm_sqr = v.norm_sqr();
    if norm_sqr <= T::zero() {
        return Ok(None);
    }
    let lambda = v.inner(&mv)? / norm_sqr;
    let residual =
        mv.amplitudes().iter().zip(v.amplitudes()).fold(T::zero(), |acc, (a, b)| acc.max((*a - lambda * b).norm()));
    Ok(Some((lambda, residual)))
}

/// `|⟨u|v⟩| ≥ 1 − tol`.
pub fn equal_up_to_global_phase<T: Scalar>(u: &StateVector<T>, v: &StateVector<T>, tol: T) -> Result<bool> {
    Ok(u.inner(v)?.norm() >= T::one() - tol)
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

fn pairs<T: Scalar>(zs: &[Complex<T>]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [to_f64(z.re), to_f64(z.im)]).collect()
}

fn unpairs<T: Scalar>(ps: &[[f64; 2]]) -> Vec<Complex<T>> {
    ps.iter().map(|[re, im]| Complex::new(T::lit(*re), T::lit(*im))).collect()
}

impl<T: Scalar> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr { dim: self.dim, entries: pairs(&self.entries) }.serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        Matrix::from_entries(repr.dim, unpairs(&repr.entries)).map_err(D::Error::custom)
    }
}

impl<T: Scalar> Serialize for StateVector<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr { dim: self.dim(), amplitudes: pairs(&self.amplitudes) }.serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for StateVector<T> {
    /// The normalized flag is recomputed from the norm.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(d)?;
        if repr.dim != repr.amplitudes.len() {
            return Err(D::Error::custom(Error::DimensionMismatch {
                expected: repr.dim,
                found: repr.amplitudes.len(),
            }));
        }
        let amps = unpairs(&repr.amplitudes);
        StateVector::new(amps.clone()).or_else(|_| StateVector::unnormalized(amps)).map_err(D::Error::custom)
    }
}
