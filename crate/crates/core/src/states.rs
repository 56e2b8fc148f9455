//! Standard gates, basis labelling and contexts.
//!
//! Basis indices are big-endian: the leftmost digit of a label is the most
//! significant digit of the index, so for three qubits `|011⟩` is index 3.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, StateVector};
use crate::scalar::Scalar;

/// Digit string naming a computational basis state of `k` subsystems with
/// `radix` levels each.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    radix: usize,
    digits: Vec<usize>,
}

impl BasisLabel {
    pub fn new(radix: usize, digits: Vec<usize>) -> Result<Self> {
        if radix < 2 {
            return Err(Error::InvalidArity(format!("radix {radix} < 2")));
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= radix) {
            return Err(Error::InvalidArity(format!("digit {bad} >= radix {radix}")));
        }
        Ok(Self { radix, digits })
    }

    /// Qubit label from a bit list.
    pub fn bits(bits: &[u8]) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        Ok(Self { radix: 2, digits: bits.iter().map(|&b| b as usize).collect() })
    }

    pub fn from_index(radix: usize, k: usize, mut index: usize) -> Self {
        let mut digits = vec![0; k];
        for slot in digits.iter_mut().rev() {
            *slot = index % radix;
            index /= radix;
        }
        debug_assert_eq!(index, 0, "index out of range for {k} digits");
        Self { radix, digits }
    }

    pub fn index(&self) -> usize {
        self.digits.iter().fold(0, |acc, &d| acc * self.radix + d)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn digit(&self, position: usize) -> usize {
        self.digits[position]
    }

    /// Ket notation, e.g. `|0>|1>`.
    pub fn ket(&self) -> String {
        self.digits.iter().map(|d| format!("|{d}>")).collect()
    }

    /// Compact digit string, e.g. `01`.
    pub fn compact(&self) -> String {
        self.digits.iter().map(|d| d.to_string()).collect()
    }
}

/// `radix^k`, or `None` on overflow.
pub fn checked_dimension(radix: usize, k: usize) -> Option<usize> {
    radix.checked_pow(u32::try_from(k).ok()?)
}

pub fn basis_state<T: Scalar>(k: usize, label: &BasisLabel) -> Result<StateVector<T>> {
    if k == 0 {
        return Err(Error::InvalidArity("k must be at least 1".into()));
    }
    if label.len() != k {
        return Err(Error::BitCount { expected: k, found: label.len() });
    }
    let dim = checked_dimension(label.radix(), k).ok_or(Error::DimensionBudget {
        base: label.radix(),
        exponent: k,
        budget: usize::MAX,
    })?;
    Ok(StateVector::basis(dim, label.index()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H,
    X,
    I(usize),
}

impl Gate {
    pub fn matrix<T: Scalar>(self) -> Matrix<T> {
        match self {
            Gate::H => hadamard(),
            Gate::X => pauli_x(),
            Gate::I(n) => Matrix::identity(n),
        }
    }
}

pub fn gate<T: Scalar>(g: Gate) -> Matrix<T> {
    g.matrix()
}

fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn hadamard<T: Scalar>() -> Matrix<T> {
    let s = T::FRAC_1_SQRT_2();
    Matrix::from_entries(2, vec![real(s), real(s), real(s), real(-s)]).expect("2x2")
}

pub fn pauli_x<T: Scalar>() -> Matrix<T> {
    Matrix::permutation(&[1, 0])
}

/// Spin observable along polar angle `theta` and azimuth `phi`:
/// rows `(cos θ, e^{−iφ} sin θ)` and `(e^{iφ} sin θ, −cos θ)`.
pub fn sigma<T: Scalar>(theta: T, phi: T) -> Matrix<T> {
    let (s, c) = theta.sin_cos();
    let e = Complex::from_polar(T::one(), phi);
    Matrix::from_entries(2, vec![real(c), e.conj() * s, e * s, real(-c)]).expect("2x2")
}

/// `diag(1, e^{iθ})`.
pub fn phase<T: Scalar>(theta: T) -> Matrix<T> {
    Matrix::diagonal(&[Complex::one(), Complex::from_polar(T::one(), theta)])
}

/// Discrete Fourier transform on `n` levels; equals the Hadamard gate for `n = 2`.
pub fn fourier<T: Scalar>(n: usize) -> Matrix<T> {
    let scale = T::one() / T::from_usize_lossy(n).sqrt();
    let tau = T::PI() + T::PI();
    let mut entries = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let angle = tau * T::from_usize_lossy((j * k) % n) / T::from_usize_lossy(n);
            entries.push(Complex::from_polar(scale, angle));
        }
    }
    Matrix::from_entries(n, entries).expect("n x n")
}

/// Cyclic shift `|j⟩ ↦ |j+1 mod n⟩`; equals X for `n = 2`.
pub fn shift<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::permutation(&(0..n).map(|j| (j + 1) % n).collect::<Vec<_>>())
}

/// Embeds a single-site gate at `site` of `k` sites of local dimension `n`.
pub fn embed<T: Scalar>(local: &Matrix<T>, site: usize, k: usize) -> Matrix<T> {
    let n = local.dim();
    let left = Matrix::identity(checked_dimension(n, site).expect("dimension"));
    let right = Matrix::identity(checked_dimension(n, k - site - 1).expect("dimension"));
    left.kron(local).kron(&right)
}

/// Random product of `depth` local gates drawn from Fourier, shift and
/// random diagonal phases on `k` sites of local dimension `n`. For `n = 2`
/// these are Hadamard, X and phase gates.
pub fn random_local_unitary<T: Scalar, R: Rng + ?Sized>(n: usize, k: usize, depth: usize, rng: &mut R) -> Matrix<T> {
    let d = checked_dimension(n, k).expect("dimension");
    let mut u = Matrix::identity(d);
    for _ in 0..depth {
        let site = rng.random_range(0..k);
        let local = match rng.random_range(0..3) {
            0 => fourier(n),
            1 => shift(n),
            _ => {
                let diag: Vec<_> = (0..n)
                    .map(|_| {
                        let theta = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
                        Complex::from_polar(T::one(), theta)
                    })
                    .collect();
                Matrix::diagonal(&diag)
            }
        };
        u = &embed(&local, site, k) * &u;
    }
    u
}

/// A nondegenerate self-adjoint operator together with its eigenbasis.
/// Basis vector `i` carries eigenvalue `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Context<T: Scalar = f64> {
    basis: Vec<StateVector<T>>,
    operator: Matrix<T>,
}

impl<T: Scalar> Context<T> {
    pub fn standard(dim: usize) -> Self {
        let basis = (0..dim).map(|i| StateVector::basis(dim, i)).collect();
        let diag: Vec<T> = (1..=dim).map(T::from_usize_lossy).collect();
        Self { basis, operator: Matrix::real_diagonal(&diag) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[StateVector<T>] {
        &self.basis
    }

    pub fn operator(&self) -> &Matrix<T> {
        &self.operator
    }

    pub fn eigenvalue(&self, i: usize) -> T {
        T::from_usize_lossy(i + 1)
    }

    /// Rank-one projector onto basis vector `i`.
    pub fn projector(&self, i: usize) -> Matrix<T> {
        Matrix::outer(&self.basis[i])
    }

    /// Spectral sum `Σ_i λ_i |v_i⟩⟨v_i|` over this basis.
    pub fn spectral_sum(&self, eigenvalues: &[T]) -> Matrix<T> {
        let d = self.dim();
        let mut m = Matrix::zeros(d);
        for (v, &lambda) in self.basis.iter().zip(eigenvalues) {
            if lambda.is_zero() {
                continue;
            }
            m = &m + &Matrix::outer(v).scale(real(lambda));
        }
        m
    }

    /// Matrix whose columns are the basis vectors.
    pub fn change_of_basis(&self) -> Matrix<T> {
        let d = self.dim();
        let mut entries = vec![Complex::zero(); d * d];
        for (j, v) in self.basis.iter().enumerate() {
            for (i, &a) in v.amplitudes().iter().enumerate() {
                entries[i * d + j] = a;
            }
        }
        Matrix::from_entries(d, entries).expect("square")
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim() == other.dim() && self.basis.iter().zip(&other.basis).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Builds the context whose `i`-th eigenvector is `vectors[i]`.
pub fn context_from_basis<T: Scalar>(vectors: Vec<StateVector<T>>, tol: T) -> Result<Context<T>> {
    let d = vectors.len();
    if d == 0 {
        return Err(Error::BasisSize { expected: 1, found: 0 });
    }
    for v in &vectors {
        if v.dim() != d {
            return Err(Error::BasisSize { expected: v.dim(), found: d });
        }
    }
    for i in 0..d {
        for j in i..d {
            let inner = vectors[i].inner(&vectors[j])?;
            let target = if i == j { Complex::one() } else { Complex::zero() };
            if (inner - target).norm() > tol {
                return Err(Error::NotOrthonormal { i, j, inner: inner.norm().to_f64().unwrap_or(f64::NAN) });
            }
        }
    }
    let basis: Vec<_> =
        vectors.into_iter().map(|v| if v.is_normalized() { Ok(v) } else { v.normalize() }).collect::<Result<_>>()?;
    let mut ctx = Context { basis, operator: Matrix::zeros(d) };
    let eigenvalues: Vec<T> = (0..d).map(|i| ctx.eigenvalue(i)).collect();
    ctx.operator = ctx.spectral_sum(&eigenvalues);
    Ok(ctx)
}

/// Transports a context through the unitary `u`: basis `{u·v_i}`, operator `u·C·u†`.
pub fn transform_context<T: Scalar>(c: &Context<T>, u: &Matrix<T>, tol: T) -> Result<Context<T>> {
    if u.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: u.dim() });
    }
    let deviation = u.unitarity_defect();
    if deviation > tol {
        return Err(Error::NotUnitary { deviation: deviation.to_f64().unwrap_or(f64::NAN) });
    }
    let basis = c.basis.iter().map(|v| u.apply(v)).collect::<Result<Vec<_>>>()?;
    Ok(Context { basis, operator: c.operator.conjugate_by(u) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalue_of;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-10;

    #[test]
    fn basis_state_examples() {
        let v: StateVector = basis_state(1, &BasisLabel::bits(&[0]).unwrap()).unwrap();
        assert!(v.approx_eq(&StateVector::from_real(&[1.0, 0.0]).unwrap(), 0.0));
        let v: StateVector = basis_state(2, &BasisLabel::bits(&[1, 1]).unwrap()).unwrap();
        assert!(v.approx_eq(&StateVector::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap(), 0.0));
        let v: StateVector = basis_state(3, &BasisLabel::bits(&[0, 0, 0]).unwrap()).unwrap();
        assert!(v.approx_eq(&StateVector::basis(8, 0), 0.0));
    }

    #[test]
    fn basis_state_errors() {
        let label = BasisLabel::bits(&[0, 1]).unwrap();
        assert_eq!(basis_state::<f64>(3, &label).unwrap_err(), Error::BitCount { expected: 3, found: 2 });
        assert_eq!(BasisLabel::bits(&[2]).unwrap_err(), Error::InvalidBit(2));
    }

    #[test]
    fn big_endian_indexing() {
        assert_eq!(BasisLabel::bits(&[0, 1, 1]).unwrap().index(), 3);
        assert_eq!(BasisLabel::bits(&[1, 0, 0]).unwrap().index(), 4);
        assert_eq!(BasisLabel::new(3, vec![1, 2]).unwrap().index(), 5);
        assert_eq!(BasisLabel::from_index(2, 2, 2).ket(), "|1>|0>");
    }

    #[test]
    fn gate_examples() {
        let x: Matrix = gate(Gate::X);
        assert!(sigma(std::f64::consts::FRAC_PI_2, 0.0).approx_eq(&x, TOL));
        assert!(sigma(0.0, 0.0).approx_eq(&Matrix::real_diagonal(&[1.0, -1.0]), TOL));
        let h: Matrix = gate(Gate::H);
        assert!((&h * &h).approx_eq(&gate(Gate::I(2)), TOL));
        assert!(fourier::<f64>(2).approx_eq(&h, TOL));
        assert!(shift::<f64>(2).approx_eq(&x, 0.0));
    }

    #[test]
    fn hadamard_projector_identity() {
        let id = Matrix::<f64>::identity(2);
        let half = Complex::new(0.5, 0.0);
        let s = sigma(std::f64::consts::FRAC_PI_2, 0.0);
        let x: Matrix = pauli_x();
        let plus = (&id + &s).scale(half);
        let minus = (&id - &s).scale(half);
        assert!(plus.is_projector(TOL) && minus.is_projector(TOL));
        assert!((&plus + &minus).approx_eq(&id, TOL));
        assert!(plus.approx_eq(&(&id + &x).scale(half), TOL));
        assert!(minus.approx_eq(&(&id - &x).scale(half), TOL));
        // (1/2)(1 − X) is also σ(−π/2, 0)
        let s_neg = sigma(-std::f64::consts::FRAC_PI_2, 0.0);
        assert!(minus.approx_eq(&(&id + &s_neg).scale(half), TOL));
    }

    #[test]
    fn standard_context() {
        let ctx: Context = context_from_basis((0..4).map(|i| StateVector::basis(4, i)).collect(), TOL).unwrap();
        assert!(ctx.operator().approx_eq(&Matrix::real_diagonal(&[1.0, 2.0, 3.0, 4.0]), TOL));
        assert!(ctx.approx_eq(&Context::standard(4), 0.0));
    }

    #[test]
    fn context_rejects_repeated_vector() {
        let v = StateVector::<f64>::basis(2, 0);
        let err = context_from_basis(vec![v.clone(), v], TOL).unwrap_err();
        match err {
            Error::NotOrthonormal { i: 0, j: 1, inner } => assert!((inner - 1.0).abs() < TOL),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deutsch_basis_context() {
        let psi = [[0.5, -0.5, -0.5, 0.5], [0.5, -0.5, 0.5, -0.5], [0.5, 0.5, 0.5, 0.5], [0.5, 0.5, -0.5, -0.5]];
        let basis = psi.iter().map(|p| StateVector::from_real(p).unwrap()).collect();
        let ctx: Context = context_from_basis(basis, TOL).unwrap();
        assert!(ctx.operator().is_hermitian(TOL));
        for (i, v) in ctx.basis().iter().enumerate() {
            let lambda = eigenvalue_of(ctx.operator(), v, TOL).unwrap().unwrap();
            assert!((lambda.re - (i + 1) as f64).abs() < TOL);
        }
    }

    #[test]
    fn transform_context_examples() {
        let std4 = Context::<f64>::standard(4);
        let same = transform_context(&std4, &Matrix::identity(4), TOL).unwrap();
        assert!(same.approx_eq(&std4, 0.0));

        let u = Matrix::from_real(
            4,
            &[0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5, -0.5, 0.5, 0.5, -0.5, -0.5, -0.5, 0.5, 0.5],
        )
        .unwrap();
        let moved = transform_context(&std4, &u, TOL).unwrap();
        for (j, v) in moved.basis().iter().enumerate() {
            assert!(v.approx_eq(&u.column(j), TOL));
            let lambda = eigenvalue_of(moved.operator(), v, TOL).unwrap().unwrap();
            assert!((lambda.re - (j + 1) as f64).abs() < TOL);
        }
        assert!(moved.change_of_basis().approx_eq(&u, TOL));

        let not_unitary = Matrix::real_diagonal(&[1.0, 1.0, 1.0, 2.0]);
        assert!(matches!(transform_context(&std4, &not_unitary, TOL), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn random_local_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, k) in [(2, 1), (2, 3), (3, 2)] {
            let u: Matrix = random_local_unitary(n, k, 12, &mut rng);
            assert!(u.is_unitary(TOL), "n={n} k={k}");
        }
    }

    proptest! {
        #[test]
        fn index_round_trip(k in 1usize..=10, seed in any::<u64>()) {
            let index = (seed % (1u64 << k)) as usize;
            let label = BasisLabel::from_index(2, k, index);
            prop_assert_eq!(label.index(), index);
            let again = BasisLabel::bits(&label.digits().iter().map(|&d| d as u8).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(again, label);
        }

        #[test]
        fn spin_observable_unitary_hermitian(theta in -7.0..7.0f64, phi in -7.0..7.0f64) {
            let s = sigma(theta, phi);
            prop_assert!(s.is_unitary(TOL));
            prop_assert!(s.is_hermitian(TOL));
        }

        #[test]
        fn context_eigen_relation(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u: Matrix = random_local_unitary(2, 2, 6, &mut rng);
            let ctx = transform_context(&Context::standard(4), &u, TOL).unwrap();
            for (i, v) in ctx.basis().iter().enumerate() {
                let mv = ctx.operator().apply(v).unwrap();
                let expected = v.scale(Complex::new((i + 1) as f64, 0.0));
                prop_assert!(mv.approx_eq(&expected, 1e-9));
            }
        }
    }
}
