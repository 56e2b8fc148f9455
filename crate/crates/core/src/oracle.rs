//! Oracle unitaries for boolean functions and the decision procedures built
//! on them: Deutsch as state identification, the two-argument generalized
//! Deutsch problems, and parity.
//!
//! Register layout: data qubits first (big-endian), the ancilla last.

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::boolean::{is_constant, parity, BooleanFunction, Problem, Sign, SumId};
use crate::error::{Error, Result};
use crate::exact::{integer_dot, integer_rank};
use crate::filters::{
    canonical_system, eigenvalue_or_err, induced_partition, separates, transform_system, Filter, FilterSystem,
};
use crate::linalg::{equal_up_to_global_phase, Matrix, StateVector};
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::states::{hadamard, pauli_x, BasisLabel};

/// Largest arity for which the parity separability sweep runs.
pub const MAX_SEPARABILITY_ARITY: usize = 3;

/// `U_f |x⟩|y⟩ = |x⟩|y ⊕ f(x)⟩` on `2^(k+1)` dimensions.
pub fn bitflip_oracle<T: Scalar>(f: &BooleanFunction) -> Matrix<T> {
    let image: Vec<usize> = (0..2usize << f.arity())
        .map(|j| {
            let (x, y) = (j >> 1, j & 1);
            (x << 1) | (y ^ usize::from(f.eval(x)))
        })
        .collect();
    Matrix::permutation(&image)
}

/// Signs `(−1)^{f(x)}` over the data register, indexed by basis label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePattern {
    pub k: usize,
    pub signs: Vec<Sign>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternRelation {
    Equal,
    Negated,
    Independent,
}

impl PhasePattern {
    pub fn direct(f: &BooleanFunction) -> Self {
        Self { k: f.arity(), signs: f.table().iter().map(|&b| Sign::from_odd(b)).collect() }
    }

    pub fn values(&self) -> Vec<i64> {
        self.signs.iter().map(|s| s.value()).collect()
    }

    /// The pattern scaled to unit norm.
    pub fn state<T: Scalar>(&self) -> StateVector<T> {
        let scale = T::one() / T::from_usize_lossy(self.signs.len()).sqrt();
        let amps = self.signs.iter().map(|s| Complex::new(scale * T::lit(s.value() as f64), T::zero())).collect();
        StateVector::new(amps).expect("sign pattern has unit norm after scaling")
    }

    /// Entry-wise product with another pattern of the same length.
    pub fn product(&self, other: &Self) -> Self {
        Self {
            k: self.k,
            signs: self.signs.iter().zip(&other.signs).map(|(a, b)| Sign::from_odd(a.is_odd() ^ b.is_odd())).collect(),
        }
    }

    /// Tensor product: `other` occupies the less significant positions.
    pub fn tensor(&self, other: &Self) -> Self {
        let signs = self
            .signs
            .iter()
            .flat_map(|a| other.signs.iter().map(move |b| Sign::from_odd(a.is_odd() ^ b.is_odd())))
            .collect();
        Self { k: self.k + other.k, signs }
    }

    pub fn relation(&self, other: &Self) -> PatternRelation {
        if self.signs == other.signs {
            PatternRelation::Equal
        } else if self.signs.iter().zip(&other.signs).all(|(a, b)| a != b) {
            PatternRelation::Negated
        } else {
            PatternRelation::Independent
        }
    }

    pub fn render(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }
}

/// Reads the phase `(−1)^{f(x)}` acquired by `|x⟩|1⟩` under the ancilla-
/// conjugated oracle `(1 ⊗ H) U (1 ⊗ H)`, for every data label `x`.
fn phases_from_oracle<T: Scalar>(
    oracle: &Matrix<T>,
    ancilla_positions: &[usize],
    data_bits: usize,
) -> Result<Vec<Sign>> {
    let total = data_bits + ancilla_positions.len();
    let h = hadamard::<T>();
    let id = Matrix::<T>::identity(2);
    let factors: Vec<Matrix<T>> =
        (0..total).map(|q| if ancilla_positions.contains(&q) { h.clone() } else { id.clone() }).collect();
    let conj = Matrix::kron_all(&factors).expect("at least one factor");
    let phase_oracle = &(&conj * oracle) * &conj;
    let tol = T::default_tolerance();
    let mut signs = Vec::with_capacity(1 << data_bits);
    for x in 0..1usize << data_bits {
        let data = BasisLabel::from_index(2, data_bits, x);
        let mut bits = Vec::with_capacity(total);
        let mut next_data = 0;
        for q in 0..total {
            if ancilla_positions.contains(&q) {
                bits.push(1);
            } else {
                bits.push(data.digit(next_data));
                next_data += 1;
            }
        }
        let index = BasisLabel::new(2, bits).expect("bits").index();
        let input = StateVector::basis(phase_oracle.dim(), index);
        let out = phase_oracle.apply(&input)?;
        let amp = out.amplitudes()[index];
        if (out.norm() - T::one()).abs() > tol || (amp.norm() - T::one()).abs() > tol || amp.im.abs() > tol {
            return Err(Error::Consistency(format!("phase oracle does not act diagonally on label {x}")));
        }
        signs.push(Sign::from_odd(amp.re < T::zero()));
    }
    Ok(signs)
}

/// Phase pattern of `f`, computed directly from the table and through the
/// Hadamard-conjugated bit-flip oracle; the two routes must agree.
pub fn phase_pattern<T: Scalar>(f: &BooleanFunction) -> Result<PhasePattern> {
    let direct = PhasePattern::direct(f);
    let oracle = bitflip_oracle::<T>(f);
    let via_oracle = phases_from_oracle(&oracle, &[f.arity()], f.arity())?;
    if via_oracle != direct.signs {
        return Err(Error::Consistency(format!("phase routes disagree for {f}")));
    }
    Ok(direct)
}

/// `U_{f_i} ⊗ U_{f_j}` on the register `x, a_x, y, a_y`.
pub fn product_oracle<T: Scalar>(i: usize, j: usize) -> Result<Matrix<T>> {
    let id = SumId::new(i, j)?;
    let fi = BooleanFunction::one_bit(id.i)?;
    let fj = BooleanFunction::one_bit(id.j)?;
    Ok(bitflip_oracle::<T>(&fi).kron(&bitflip_oracle(&fj)))
}

/// Phases `(−1)^{f_i(x) + f_j(y)}`, read from the product oracle and
/// cross-checked against the product of the one-bit patterns and against
/// the sum function's own oracle.
pub fn sum_phase_pattern<T: Scalar>(i: usize, j: usize) -> Result<PhasePattern> {
    let id = SumId::new(i, j)?;
    let oracle = product_oracle::<T>(i, j)?;
    let signs = phases_from_oracle(&oracle, &[1, 3], 2)?;
    let pattern = PhasePattern { k: 2, signs };
    let fi = PhasePattern::direct(&BooleanFunction::one_bit(i)?);
    let fj = PhasePattern::direct(&BooleanFunction::one_bit(j)?);
    if fi.tensor(&fj) != pattern || phase_pattern::<T>(&id.function())? != pattern {
        return Err(Error::Consistency(format!("sum phase routes disagree for {id}")));
    }
    Ok(pattern)
}

/// Product oracle for any number of one-bit summands, register
/// `x_1, a_1, …, x_m, a_m`. Extension point beyond two arguments.
pub fn sum_oracle<T: Scalar>(parts: &[usize]) -> Result<Matrix<T>> {
    let factors = parts
        .iter()
        .map(|&p| BooleanFunction::one_bit(p).map(|f| bitflip_oracle::<T>(&f)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::kron_all(&factors).ok_or_else(|| Error::InvalidArity("no summands".into()))
}

fn one_bit_only(f: &BooleanFunction) -> Result<()> {
    if f.arity() != 1 {
        return Err(Error::InvalidArity(format!("expected a one-bit function, got arity {}", f.arity())));
    }
    Ok(())
}

/// States along `(H⊗H) U_f (H⊗H)(X⊗X)|00⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeutschRun<T: Scalar = f64> {
    /// `(H⊗H)(X⊗X)|00⟩`.
    pub prepared: StateVector<T>,
    /// After the oracle: `±ψ₁` for constant, `±ψ₂` for balanced functions.
    pub after_oracle: StateVector<T>,
    pub final_state: StateVector<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeutschOutcome {
    Constant,
    Balanced,
}

impl<T: Scalar> DeutschRun<T> {
    /// `|11⟩` means constant, `|01⟩` balanced.
    pub fn outcome(&self) -> Result<DeutschOutcome> {
        match self.final_state.basis_index(T::default_tolerance()) {
            Some(3) => Ok(DeutschOutcome::Constant),
            Some(1) => Ok(DeutschOutcome::Balanced),
            _ => Err(Error::Consistency(format!("unexpected Deutsch output {:?}", self.final_state))),
        }
    }
}

pub fn deutsch_run<T: Scalar>(f: &BooleanFunction) -> Result<DeutschRun<T>> {
    one_bit_only(f)?;
    deutsch_run_with(&bitflip_oracle(f))
}

fn deutsch_run_with<T: Scalar>(oracle: &Matrix<T>) -> Result<DeutschRun<T>> {
    let h = hadamard::<T>();
    let hh = h.kron(&h);
    let xx = pauli_x::<T>().kron(&pauli_x());
    let prepared = hh.apply(&xx.apply(&StateVector::basis(4, 0))?)?;
    let after_oracle = oracle.apply(&prepared)?;
    let final_state = hh.apply(&after_oracle)?;
    Ok(DeutschRun { prepared, after_oracle, final_state })
}

/// Deutsch filters obtained by transporting the canonical two-qubit system
/// through the basis change `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeutschFilters<T: Scalar = f64> {
    pub u: Matrix<T>,
    /// Context basis is the columns of `U`; filter 0 is `F^D₁`, filter 1 is `F^D₂`.
    pub system: FilterSystem<T>,
    /// `ψ₁ … ψ₄`.
    pub psi: [StateVector<T>; 4],
}

impl<T: Scalar> DeutschFilters<T> {
    pub fn fd1(&self) -> Matrix<T> {
        self.system.operator(0)
    }

    pub fn fd2(&self) -> Matrix<T> {
        self.system.operator(1)
    }

    /// Reads `F^D₁` on the post-oracle state: eigenvalue 0 marks the constant
    /// class `{ψ₁, ψ₃}`, eigenvalue 1 the balanced class `{ψ₂, ψ₄}`.
    pub fn classify(&self, after_oracle: &StateVector<T>) -> Result<(T, DeutschOutcome)> {
        let lambda = eigenvalue_or_err(&self.fd1(), after_oracle, T::default_tolerance())?.re;
        let outcome = if lambda < T::lit(0.5) { DeutschOutcome::Constant } else { DeutschOutcome::Balanced };
        Ok((lambda, outcome))
    }
}

pub fn deutsch_basis_change<T: Scalar>() -> Matrix<T> {
    Matrix::from_real(
        4,
        &[
            0.5, 0.5, 0.5, 0.5, //
            0.5, -0.5, 0.5, -0.5, //
            -0.5, 0.5, 0.5, -0.5, //
            -0.5, -0.5, 0.5, 0.5,
        ],
    )
    .expect("4x4")
}

pub fn deutsch_filter_setup<T: Scalar>() -> Result<DeutschFilters<T>> {
    let tol = T::default_tolerance();
    let u = deutsch_basis_change::<T>();
    let system = transform_system(&canonical_system::<T>(2, 2)?, &u, tol)?;

    let h = hadamard::<T>();
    let hh = h.kron(&h);
    let x1 = pauli_x::<T>().kron(&Matrix::identity(2));
    let e00 = StateVector::basis(4, 0);
    let psi1 = deutsch_run::<T>(&BooleanFunction::one_bit(0)?)?.after_oracle;
    let psi2 = deutsch_run::<T>(&BooleanFunction::one_bit(1)?)?.after_oracle;
    let psi3 = hh.apply(&e00)?;
    let psi4 = hh.apply(&x1.apply(&e00)?)?;
    let setup = DeutschFilters { u, system, psi: [psi1, psi2, psi3, psi4] };

    let [p1, p2, p3, _] = &setup.psi;
    let fd1 = setup.fd1();
    let fd2 = setup.fd2();
    if !separates(&fd1, p1, p2, tol)? || !separates(&fd2, p1, p3, tol)? {
        return Err(Error::Consistency("Deutsch filters fail to separate".into()));
    }
    let d1 = induced_partition(&fd1, &setup.psi, tol)?;
    let d2 = induced_partition(&fd2, &setup.psi, tol)?;
    let ground = [0, 1, 2, 3];
    if !d1.same_blocks(&Partition::new(vec![vec![0, 2], vec![1, 3]], &ground)?)
        || !d2.same_blocks(&Partition::new(vec![vec![0, 1], vec![2, 3]], &ground)?)
    {
        return Err(Error::Consistency(format!("unexpected Deutsch filter partitions {d1:?} {d2:?}")));
    }
    Ok(setup)
}

/// Encoding `V_f |00⟩ = |f(0) f(1)⟩` with `V_f = X^{f(0)} ⊗ X^{f(1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct VfEncoding<T: Scalar = f64> {
    pub v: Matrix<T>,
    pub state: StateVector<T>,
}

/// Projector `diag(1,0,0,1)`: eigenvalue 1 on `|00⟩, |11⟩` and the Bell
/// states `(1,0,0,±1)/√2`, eigenvalue 0 on `|01⟩, |10⟩` and `(0,1,±1,0)/√2`.
pub fn vf_constancy_filter<T: Scalar>() -> Matrix<T> {
    Matrix::real_diagonal(&[T::one(), T::zero(), T::zero(), T::one()])
}

pub fn bell_states<T: Scalar>() -> [StateVector<T>; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        StateVector::from_real(&[s, 0.0, 0.0, s]).expect("unit"),
        StateVector::from_real(&[0.0, s, s, 0.0]).expect("unit"),
        StateVector::from_real(&[0.0, s, -s, 0.0]).expect("unit"),
        StateVector::from_real(&[s, 0.0, 0.0, -s]).expect("unit"),
    ]
}

pub fn vf_encode<T: Scalar>(f: &BooleanFunction) -> Result<VfEncoding<T>> {
    one_bit_only(f)?;
    let factor = |bit: bool| if bit { pauli_x::<T>() } else { Matrix::identity(2) };
    let v = factor(f.eval(0)).kron(&factor(f.eval(1)));
    let state = v.apply(&StateVector::basis(4, 0))?;
    Ok(VfEncoding { v, state })
}

/// Filters for the two-argument sum problems, transported by `U′`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedDeutsch<T: Scalar = f64> {
    pub u_prime: Matrix<T>,
    /// `φ₁ … φ₄`, normalized.
    pub phi: [StateVector<T>; 4],
    /// Diagonal patterns `F₁ … F₄` in the computational basis.
    pub diagonal: [Filter; 4],
    /// `(U′)⁻¹ F_i U′`.
    pub transported: [Matrix<T>; 4],
}

/// Unnormalized `φ` patterns.
pub const PHI_PATTERNS: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];

/// For each problem, the two classes of `φ` indices (0-based) that its
/// filter must separate; the first class carries eigenvalue 1.
pub fn separation_classes(problem: Problem) -> ([usize; 2], [usize; 2]) {
    match problem {
        Problem::D1 => ([0, 2], [1, 3]),
        Problem::D2 => ([0, 1], [2, 3]),
        Problem::D3 => ([1, 2], [0, 3]),
        Problem::D4 => ([0, 3], [1, 2]),
    }
}

pub fn generalized_basis_change<T: Scalar>() -> Matrix<T> {
    Matrix::from_real(
        4,
        &[
            0.5, 0.5, 0.5, 0.5, //
            0.5, 0.5, -0.5, -0.5, //
            0.5, -0.5, 0.5, -0.5, //
            0.5, -0.5, -0.5, 0.5,
        ],
    )
    .expect("4x4")
}

impl<T: Scalar> GeneralizedDeutsch<T> {
    pub fn filter(&self, problem: Problem) -> &Matrix<T> {
        &self.transported[problem.number() - 1]
    }
}

pub fn generalized_deutsch_setup<T: Scalar>() -> Result<GeneralizedDeutsch<T>> {
    let tol = T::default_tolerance();
    let u_prime = generalized_basis_change::<T>();
    let phi = PHI_PATTERNS.map(|p| {
        StateVector::unnormalized_real(&p.map(|x| T::lit(x as f64))).and_then(|v| v.normalize()).expect("nonzero")
    });
    let diagonal = [[1, 0, 1, 0], [1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]]
        .map(|pattern| Filter::from_indicator(&pattern).expect("binary pattern"));
    let inverse = u_prime.adjoint();
    let transported = diagonal.clone().map(|f| {
        let diag = f.operator_in(&crate::states::Context::<T>::standard(4));
        &(&inverse * &diag) * &u_prime
    });
    let setup = GeneralizedDeutsch { u_prime, phi, diagonal, transported };

    for problem in Problem::ALL {
        let op = setup.filter(problem);
        let (yes, no) = separation_classes(problem);
        for &a in &yes {
            for &b in &no {
                if !separates(op, &setup.phi[a], &setup.phi[b], tol)? {
                    return Err(Error::Consistency(format!(
                        "{problem} filter does not separate φ{} from φ{}",
                        a + 1,
                        b + 1
                    )));
                }
            }
            let lambda = eigenvalue_or_err(op, &setup.phi[a], tol)?;
            if (lambda - Complex::one()).norm() > tol {
                return Err(Error::Consistency(format!("{problem}: φ{} eigenvalue {lambda}", a + 1)));
            }
        }
        if !separates(op, &setup.phi[yes[0]], &setup.phi[yes[1]], tol).map(|s| !s)? {
            return Err(Error::Consistency(format!("{problem} splits its own class")));
        }
    }
    Ok(setup)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionOutcome {
    pub problem: Problem,
    pub function: SumId,
    pub pattern: String,
    pub eigenvalue: f64,
    /// `true` iff the observed eigenvalue is 1.
    pub verdict: bool,
    /// The predicate evaluated classically on the truth table.
    pub classical: bool,
}

impl DecisionOutcome {
    pub fn agrees(&self) -> bool {
        self.verdict == self.classical
    }
}

/// Decides `problem` for `f_ij` with one filter measurement on the
/// normalized phase state.
pub fn decide<T: Scalar>(
    setup: &GeneralizedDeutsch<T>,
    problem: Problem,
    i: usize,
    j: usize,
) -> Result<DecisionOutcome> {
    let tol = T::default_tolerance();
    let function = SumId::new(i, j)?;
    let pattern = sum_phase_pattern::<T>(i, j)?;
    let lambda = eigenvalue_or_err(setup.filter(problem), &pattern.state(), tol)?;
    let eigenvalue = lambda.re.to_f64().unwrap_or(f64::NAN);
    let verdict = (lambda - Complex::one()).norm() <= tol;
    if !verdict && lambda.norm() > tol {
        return Err(Error::Consistency(format!("eigenvalue {eigenvalue} is neither 0 nor 1")));
    }
    Ok(DecisionOutcome {
        problem,
        function,
        pattern: pattern.render(),
        eigenvalue,
        verdict,
        classical: problem.holds(function),
    })
}

/// Wraps a function and counts how it is consulted.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    f: &'a BooleanFunction,
    classical_queries: usize,
    quantum_invocations: usize,
}

impl<'a> CountingOracle<'a> {
    pub fn new(f: &'a BooleanFunction) -> Self {
        Self { f, classical_queries: 0, quantum_invocations: 0 }
    }

    pub fn query(&mut self, x: usize) -> bool {
        self.classical_queries += 1;
        self.f.eval(x)
    }

    /// Bit-flip oracle of the one-bit restriction `b ↦ f(prefix, b)`; one invocation.
    pub fn restricted_oracle<T: Scalar>(&mut self, prefix: usize) -> Matrix<T> {
        self.quantum_invocations += 1;
        bitflip_oracle(&self.f.restriction(prefix))
    }

    pub fn classical_queries(&self) -> usize {
        self.classical_queries
    }

    pub fn quantum_invocations(&self) -> usize {
        self.quantum_invocations
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityResult {
    pub sign: Sign,
    /// Classical queries or oracle invocations, depending on the method.
    pub queries: usize,
}

/// Reads every table entry.
pub fn parity_classical(f: &BooleanFunction) -> ParityResult {
    let mut oracle = CountingOracle::new(f);
    let odd = (0..1usize << f.arity()).fold(false, |acc, x| acc ^ oracle.query(x));
    ParityResult { sign: Sign::from_odd(odd), queries: oracle.classical_queries() }
}

/// One Deutsch run per prefix of the first `k−1` arguments; the parity is
/// the XOR of the restrictions' oddness.
pub fn parity_pairwise_quantum<T: Scalar>(f: &BooleanFunction) -> Result<ParityResult> {
    if f.arity() == 0 {
        return Err(Error::InvalidArity("pairwise parity needs k >= 1".into()));
    }
    let mut oracle = CountingOracle::new(f);
    let mut odd = false;
    for prefix in 0..1usize << (f.arity() - 1) {
        let u = oracle.restricted_oracle::<T>(prefix);
        odd ^= deutsch_run_with(&u)?.outcome()? == DeutschOutcome::Balanced;
    }
    Ok(ParityResult { sign: Sign::from_odd(odd), queries: oracle.quantum_invocations() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub k: usize,
    pub even_count: usize,
    pub odd_count: usize,
    pub even_span_dim: usize,
    pub odd_span_dim: usize,
    /// Number of (even, odd) pattern pairs with nonzero inner product.
    pub non_orthogonal_pairs: usize,
    /// True iff the even and odd spans are mutually orthogonal, the only
    /// case in which one projective filter can split them by eigenvalue.
    pub single_filter_possible: bool,
}

pub fn parity_separability(k: usize) -> Result<SeparabilityReport> {
    if k > MAX_SEPARABILITY_ARITY {
        return Err(Error::KOutOfRange { k, min: 0, max: MAX_SEPARABILITY_ARITY });
    }
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for f in BooleanFunction::all(k)? {
        let values = phase_pattern::<f64>(&f)?.values();
        match parity(&f) {
            Sign::Plus => even.push(values),
            Sign::Minus => odd.push(values),
        }
    }
    let non_orthogonal_pairs =
        even.iter().flat_map(|a| odd.iter().map(move |b| integer_dot(a, b))).filter(|&d| d != 0).count();
    Ok(SeparabilityReport {
        k,
        even_count: even.len(),
        odd_count: odd.len(),
        even_span_dim: integer_rank(&even),
        odd_span_dim: integer_rank(&odd),
        non_orthogonal_pairs,
        single_filter_possible: non_orthogonal_pairs == 0,
    })
}

/// Verdict of the Deutsch filter on a one-bit function, paired with the
/// final computational-basis readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeutschReport {
    pub function: String,
    pub constant: bool,
    pub final_state: StateVector,
    pub final_outcome: DeutschOutcome,
    pub filter_eigenvalue: f64,
    pub filter_outcome: DeutschOutcome,
    /// `+1` or `−1`: the global sign of the final state relative to the basis state.
    pub final_sign: f64,
}

impl DeutschReport {
    pub fn consistent(&self) -> bool {
        let expected = if self.constant { DeutschOutcome::Constant } else { DeutschOutcome::Balanced };
        self.final_outcome == expected && self.filter_outcome == expected
    }
}

pub fn deutsch_report(f: &BooleanFunction) -> Result<DeutschReport> {
    let run = deutsch_run::<f64>(f)?;
    let setup = deutsch_filter_setup::<f64>()?;
    let final_outcome = run.outcome()?;
    let (lambda, filter_outcome) = setup.classify(&run.after_oracle)?;
    let target = StateVector::basis(4, if final_outcome == DeutschOutcome::Constant { 3 } else { 1 });
    debug_assert!(equal_up_to_global_phase(&run.final_state, &target, 1e-10)?);
    let final_sign = target.inner(&run.final_state)?.re.signum();
    Ok(DeutschReport {
        function: f.table_string(),
        constant: is_constant(f),
        final_state: run.final_state,
        final_outcome,
        filter_eigenvalue: lambda,
        filter_outcome,
        final_sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::BooleanFunction as BF;
    use crate::linalg::eigenvalue_of;

    const TOL: f64 = 1e-10;

    fn one(i: usize) -> BF {
        BF::one_bit(i).unwrap()
    }

    #[test]
    fn bitflip_examples() {
        let u0: Matrix = bitflip_oracle(&one(0));
        assert!(u0.approx_eq(&Matrix::identity(4), 0.0));
        let cnot = Matrix::permutation(&[0, 1, 3, 2]);
        assert!(bitflip_oracle::<f64>(&one(1)).approx_eq(&cnot, 0.0));
        let ix = Matrix::identity(2).kron(&pauli_x());
        assert!(bitflip_oracle::<f64>(&one(3)).approx_eq(&ix, 0.0));
    }

    #[test]
    fn bitflip_is_involutive_permutation() {
        for k in 1..=3 {
            for f in BF::all(k).unwrap() {
                let u: Matrix = bitflip_oracle(&f);
                assert!(u.is_permutation(0.0) && u.is_unitary(TOL));
                assert!((&u * &u).approx_eq(&Matrix::identity(u.dim()), 0.0));
            }
        }
    }

    #[test]
    fn phase_examples() {
        let f = |id| BF::from_id(2, id).unwrap();
        assert_eq!(phase_pattern::<f64>(&f(1)).unwrap().render(), "+++-");
        assert_eq!(phase_pattern::<f64>(&f(15)).unwrap().render(), "----");
        assert_eq!(phase_pattern::<f64>(&one(2)).unwrap().render(), "-+");
        // graded f4 is the table 1000
        assert_eq!(phase_pattern::<f64>(&BF::from_graded_index(2, 4).unwrap()).unwrap().render(), "-+++");
    }

    #[test]
    fn phase_routes_agree_everywhere() {
        for k in 0..=3 {
            for f in BF::all(k).unwrap() {
                assert_eq!(phase_pattern::<f64>(&f).unwrap(), PhasePattern::direct(&f));
            }
        }
        // f32 route too
        for f in BF::all(2).unwrap() {
            assert_eq!(phase_pattern::<f32>(&f).unwrap(), PhasePattern::direct(&f));
        }
    }

    #[test]
    fn sum_pattern_examples() {
        assert_eq!(sum_phase_pattern::<f64>(0, 0).unwrap().render(), "++++");
        assert_eq!(sum_phase_pattern::<f64>(1, 1).unwrap().render(), "+--+");
        assert_eq!(sum_phase_pattern::<f64>(2, 3).unwrap().render(), "++--");
        assert!(sum_phase_pattern::<f64>(4, 0).is_err());
    }

    #[test]
    fn sum_patterns_are_products() {
        for id in SumId::all() {
            let p = sum_phase_pattern::<f64>(id.i, id.j).unwrap();
            let a = PhasePattern::direct(&one(id.i));
            let b = PhasePattern::direct(&one(id.j));
            // Entry-wise product of the patterns lifted to the two-bit register.
            let lifted_a = a.tensor(&PhasePattern { k: 1, signs: vec![Sign::Plus; 2] });
            let lifted_b = PhasePattern { k: 1, signs: vec![Sign::Plus; 2] }.tensor(&b);
            assert_eq!(lifted_a.product(&lifted_b), p, "{id}");
        }
    }

    #[test]
    fn deutsch_runs() {
        let e = |i| StateVector::<f64>::basis(4, i);
        for (i, target) in [(0, 3), (1, 1), (2, 1), (3, 3)] {
            let run = deutsch_run::<f64>(&one(i)).unwrap();
            assert!(equal_up_to_global_phase(&run.final_state, &e(target), TOL).unwrap(), "f{i}");
            assert_eq!(run.outcome().unwrap() == DeutschOutcome::Constant, is_constant(&one(i)));
        }
        let psi2 = StateVector::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap();
        let run = deutsch_run::<f64>(&one(1)).unwrap();
        assert!(equal_up_to_global_phase(&run.after_oracle, &psi2, TOL).unwrap());
        assert!(deutsch_run::<f64>(&BF::from_id(2, 0).unwrap()).is_err());
    }

    #[test]
    fn deutsch_filters() {
        let setup = deutsch_filter_setup::<f64>().unwrap();
        let [p1, p2, p3, p4] = &setup.psi;
        let fd1 = setup.fd1();
        let ev = |m: &Matrix, v| eigenvalue_of(m, v, TOL).unwrap().unwrap().re;
        assert!((ev(&fd1, p2) - 1.0).abs() < TOL);
        assert!(ev(&fd1, p1).abs() < TOL);
        assert!((ev(&fd1, p4) - 1.0).abs() < TOL);
        assert!(ev(&fd1, p3).abs() < TOL);
        assert!(setup.fd1().approx_eq(&setup.system.operator(0), 0.0));
        assert!(setup.fd1().is_projector(TOL) && setup.fd2().is_projector(TOL));
        assert!(setup.u.is_unitary(TOL));
        // explicit conjugation route
        let f1 = Matrix::real_diagonal(&[1.0, 1.0, 0.0, 0.0]);
        let inv = setup.u.adjoint();
        assert!((&(&setup.u * &f1) * &inv).approx_eq(&fd1, TOL));
        for f in 0..4 {
            let run = deutsch_run::<f64>(&one(f)).unwrap();
            let (_, outcome) = setup.classify(&run.after_oracle).unwrap();
            assert_eq!(outcome == DeutschOutcome::Constant, is_constant(&one(f)));
        }
    }

    #[test]
    fn vf_examples() {
        let enc = vf_encode::<f64>(&one(0)).unwrap();
        assert!(enc.v.approx_eq(&Matrix::identity(4), 0.0));
        assert_eq!(enc.state.basis_index(TOL), Some(0));
        assert_eq!(vf_encode::<f64>(&one(2)).unwrap().state.basis_index(TOL), Some(2));
        assert_eq!(vf_encode::<f64>(&one(3)).unwrap().state.basis_index(TOL), Some(3));
        let filter = vf_constancy_filter::<f64>();
        for i in 0..4 {
            let enc = vf_encode::<f64>(&one(i)).unwrap();
            assert!(enc.v.is_unitary(TOL));
            assert!((&enc.v * &enc.v).approx_eq(&Matrix::identity(4), 0.0));
            let lambda = eigenvalue_of(&filter, &enc.state, TOL).unwrap().unwrap().re;
            assert_eq!(lambda == 1.0, is_constant(&one(i)));
        }
        let bell = bell_states::<f64>();
        assert!(separates(&filter, &bell[0], &bell[1], TOL).unwrap());
        assert!(separates(&filter, &bell[3], &bell[2], TOL).unwrap());
        assert!(!separates(&filter, &bell[0], &bell[3], TOL).unwrap());
    }

    #[test]
    fn generalized_setup() {
        let g = generalized_deutsch_setup::<f64>().unwrap();
        let ev = |m: &Matrix, v| eigenvalue_of(m, v, TOL).unwrap().unwrap().re;
        assert!((ev(g.filter(Problem::D1), &g.phi[0]) - 1.0).abs() < TOL);
        assert!(ev(g.filter(Problem::D4), &g.phi[1]).abs() < TOL);
        assert!((&g.u_prime * &g.u_prime).approx_eq(&Matrix::identity(4), TOL));
        assert!(g.u_prime.approx_eq(&g.u_prime.adjoint(), 0.0));
        for (j, phi) in g.phi.iter().enumerate() {
            assert!(g.u_prime.column(j).approx_eq(phi, TOL));
        }
    }

    #[test]
    fn decide_examples() {
        let g = generalized_deutsch_setup::<f64>().unwrap();
        let d = decide(&g, Problem::D1, 0, 1).unwrap();
        assert!((d.eigenvalue - 1.0).abs() < TOL && d.verdict);
        assert!(!decide(&g, Problem::D1, 1, 0).unwrap().verdict);
        assert!(decide(&g, Problem::D4, 1, 1).unwrap().verdict);
        for p in Problem::ALL {
            for id in SumId::all() {
                assert!(decide(&g, p, id.i, id.j).unwrap().agrees(), "{p} {id}");
            }
        }
    }

    #[test]
    fn parity_examples() {
        let f6 = BF::from_graded_index(2, 6).unwrap();
        assert_eq!(parity_classical(&f6), ParityResult { sign: Sign::Plus, queries: 4 });
        assert_eq!(parity_classical(&BF::constant(3, false).unwrap()), ParityResult { sign: Sign::Plus, queries: 8 });
        let f11 = BF::from_graded_index(2, 11).unwrap();
        assert_eq!(parity_classical(&f11), ParityResult { sign: Sign::Minus, queries: 4 });

        let f1 = BF::from_id(2, 1).unwrap();
        assert_eq!(parity_pairwise_quantum::<f64>(&f1).unwrap(), ParityResult { sign: Sign::Minus, queries: 2 });
        assert_eq!(parity_pairwise_quantum::<f64>(&one(2)).unwrap(), ParityResult { sign: Sign::Minus, queries: 1 });
        let point = BF::from_id(3, 0b0010_0000).unwrap();
        assert_eq!(parity_pairwise_quantum::<f64>(&point).unwrap(), ParityResult { sign: Sign::Minus, queries: 4 });
    }

    #[test]
    fn separability() {
        let r1 = parity_separability(1).unwrap();
        assert_eq!((r1.even_span_dim, r1.odd_span_dim, r1.single_filter_possible), (1, 1, true));
        let r2 = parity_separability(2).unwrap();
        assert_eq!((r2.even_span_dim, r2.odd_span_dim, r2.single_filter_possible), (4, 4, false));
        let r3 = parity_separability(3).unwrap();
        assert!(!r3.single_filter_possible);
        assert_eq!((r3.even_span_dim, r3.odd_span_dim), (8, 8));
        assert!(parity_separability(4).is_err());
    }

    #[test]
    fn pattern_relations() {
        let a = PhasePattern::direct(&BF::from_id(2, 1).unwrap());
        let b = PhasePattern::direct(&BF::from_id(2, 14).unwrap());
        let c = PhasePattern::direct(&BF::from_id(2, 3).unwrap());
        assert_eq!(a.relation(&a), PatternRelation::Equal);
        assert_eq!(a.relation(&b), PatternRelation::Negated);
        assert_eq!(a.relation(&c), PatternRelation::Independent);
        let rank = |x: &PhasePattern, y: &PhasePattern| integer_rank(&[x.values(), y.values()]);
        assert_eq!(rank(&a, &b), 1);
        assert_eq!(rank(&a, &c), 2);
    }

    #[test]
    fn deutsch_report_consistency() {
        for i in 0..4 {
            let r = deutsch_report(&one(i)).unwrap();
            assert!(r.consistent(), "f{i}");
            assert_eq!(r.final_sign.abs(), 1.0);
        }
    }
}
