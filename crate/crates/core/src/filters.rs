//! Systems of commuting filters resolving a context.
//!
//! A filter is stored combinatorially: a partition of the context's basis
//! indices into slices plus one eigenvalue per slice. The dense operator
//! `Σ_i λ(slice(i)) |v_i⟩⟨v_i|` is derived on demand. The equipartition,
//! singleton-intersection and coverage properties are therefore checked
//! exactly on index sets.

use std::collections::BTreeSet;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigen_residual, Matrix, StateVector};
use crate::partition::{Partition, Permutation};
use crate::scalar::Scalar;
use crate::states::{checked_dimension, transform_context, BasisLabel, Context};

/// Largest state-space dimension the constructors accept.
pub const DIMENSION_BUDGET: usize = 4096;

/// Largest dimension for which relabeling equivalence is searched exhaustively.
pub const RELABEL_SEARCH_LIMIT: usize = 8;

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<i64> {
    let mut primes: Vec<i64> = Vec::with_capacity(count);
    let mut candidate = 2i64;
    while primes.len() < count {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filter {
    slices: Partition<usize>,
    eigenvalues: Vec<i64>,
}

impl Filter {
    pub fn new(slices: Partition<usize>, eigenvalues: Vec<i64>) -> Result<Self> {
        if slices.len() != eigenvalues.len() {
            return Err(Error::InvalidPartition(format!(
                "{} slices but {} eigenvalues",
                slices.len(),
                eigenvalues.len()
            )));
        }
        Ok(Self { slices, eigenvalues })
    }

    /// Binary filter from a 0/1 diagonal pattern: slice 0 holds the
    /// eigenvalue-1 indices, slice 1 the eigenvalue-0 indices.
    pub fn from_indicator(pattern: &[u8]) -> Result<Self> {
        let ones: Vec<usize> = (0..pattern.len()).filter(|&i| pattern[i] == 1).collect();
        let zeros: Vec<usize> = (0..pattern.len()).filter(|&i| pattern[i] == 0).collect();
        if ones.len() + zeros.len() != pattern.len() || ones.is_empty() || zeros.is_empty() {
            return Err(Error::InvalidPartition(format!("not a proper 0/1 pattern: {pattern:?}")));
        }
        let ground: Vec<usize> = (0..pattern.len()).collect();
        Self::new(Partition::new(vec![ones, zeros], &ground)?, vec![1, 0])
    }

    pub fn slices(&self) -> &Partition<usize> {
        &self.slices
    }

    pub fn eigenvalues(&self) -> &[i64] {
        &self.eigenvalues
    }

    pub fn arity(&self) -> usize {
        self.slices.len()
    }

    pub fn dim(&self) -> usize {
        self.slices.blocks().iter().map(Vec::len).sum()
    }

    pub fn slice_of(&self, index: usize) -> usize {
        self.slices.block_of(&index).expect("index inside ground set")
    }

    /// Eigenvalue attached to each basis index.
    pub fn diagonal_pattern(&self) -> Vec<i64> {
        (0..self.dim()).map(|i| self.eigenvalues[self.slice_of(i)]).collect()
    }

    /// 0/1 membership row of one slice; for binary filters slice 0 is the
    /// projector and slice 1 its orthogonal complement.
    pub fn indicator_row(&self, slice: usize) -> Vec<u8> {
        (0..self.dim()).map(|i| u8::from(self.slice_of(i) == slice)).collect()
    }

    pub fn operator_in<T: Scalar>(&self, ctx: &Context<T>) -> Matrix<T> {
        let lambdas: Vec<T> =
            self.diagonal_pattern().into_iter().map(|x| T::from_i64(x).expect("eigenvalue representable")).collect();
        ctx.spectral_sum(&lambdas)
    }

    /// Projector onto the span of one slice.
    pub fn projector_in<T: Scalar>(&self, ctx: &Context<T>, slice: usize) -> Matrix<T> {
        let ones: Vec<T> =
            self.indicator_row(slice).into_iter().map(|b| if b == 1 { T::one() } else { T::zero() }).collect();
        ctx.spectral_sum(&ones)
    }

    fn permuted(&self, perm: &Permutation) -> Self {
        let inverse = perm.inverse();
        Self { slices: self.slices.map(|&i| inverse.image(i)), eigenvalues: self.eigenvalues.clone() }
    }

    /// The slices as an unordered set of sets; a binary filter and its
    /// complement map to the same key.
    fn unordered_key(&self) -> BTreeSet<Vec<usize>> {
        self.slices.blocks().iter().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterSystem<T: Scalar = f64> {
    k: usize,
    n: usize,
    context: Context<T>,
    filters: Vec<Filter>,
}

impl<T: Scalar> FilterSystem<T> {
    /// Assembles a system from hand-built filters. No property is enforced
    /// beyond matching dimensions; use [`verify_properties`] to check.
    pub fn from_parts(n: usize, context: Context<T>, filters: Vec<Filter>) -> Result<Self> {
        for f in &filters {
            if f.dim() != context.dim() {
                return Err(Error::DimensionMismatch { expected: context.dim(), found: f.dim() });
            }
        }
        Ok(Self { k: filters.len(), n, context, filters })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.context.dim()
    }

    pub fn context(&self) -> &Context<T> {
        &self.context
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn operator(&self, i: usize) -> Matrix<T> {
        self.filters[i].operator_in(&self.context)
    }

    pub fn operators(&self) -> Vec<Matrix<T>> {
        (0..self.k).map(|i| self.operator(i)).collect()
    }

    pub fn projector(&self, filter: usize, slice: usize) -> Matrix<T> {
        self.filters[filter].projector_in(&self.context, slice)
    }

    pub fn rows(&self) -> SystemRows {
        let rows = if self.n == 2 {
            self.filters
                .iter()
                .flat_map(|f| (0..f.arity()).map(move |s| f.indicator_row(s).into_iter().map(i64::from).collect()))
                .collect()
        } else {
            self.filters.iter().map(Filter::diagonal_pattern).collect()
        };
        SystemRows { k: self.k, n: self.n, d: self.d(), rows }
    }
}

/// Row layout of a system: for binary systems two 0/1 rows per filter
/// (projector, complement); otherwise one row of eigenvalues per filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRows {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub rows: Vec<Vec<i64>>,
}

impl SystemRows {
    pub fn render(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|row| {
                if self.n == 2 {
                    row.iter().map(|v| v.to_string()).collect::<String>()
                } else {
                    row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
                }
            })
            .collect()
    }
}

pub fn canonical_system<T: Scalar>(k: usize, n: usize) -> Result<FilterSystem<T>> {
    if k == 0 {
        return Err(Error::InvalidArity("k must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArity(format!("n = {n} < 2")));
    }
    let d = checked_dimension(n, k).filter(|&d| d <= DIMENSION_BUDGET).ok_or(Error::DimensionBudget {
        base: n,
        exponent: k,
        budget: DIMENSION_BUDGET,
    })?;
    let ground: Vec<usize> = (0..d).collect();
    let primes = if n > 2 { first_primes(n * k) } else { Vec::new() };
    let filters = (0..k)
        .map(|i| {
            let slices = Partition::by_key(&ground, |&idx| BasisLabel::from_index(n, k, idx).digit(i));
            let eigenvalues = if n == 2 { vec![1, 0] } else { primes[i * n..(i + 1) * n].to_vec() };
            Filter::new(slices, eigenvalues)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FilterSystem { k, n, context: Context::standard(d), filters })
}

/// Rearranges every filter's diagonal pattern by `perm` (see
/// [`Permutation::rearrange`]).
pub fn permute_columns<T: Scalar>(s: &FilterSystem<T>, perm: &Permutation) -> Result<FilterSystem<T>> {
    if perm.len() != s.d() {
        return Err(Error::InvalidPermutation(format!("permutation of {} elements for d = {}", perm.len(), s.d())));
    }
    Ok(FilterSystem {
        k: s.k,
        n: s.n,
        context: s.context.clone(),
        filters: s.filters.iter().map(|f| f.permuted(perm)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum Witness {
    /// A filter whose slices are not an equi-n-partition with distinct eigenvalues.
    F1 {
        filter: usize,
        detail: String,
    },
    /// A choice of one slice per filter whose intersection is not a singleton.
    F2 {
        choice: Vec<usize>,
        intersection: Vec<usize>,
    },
    /// States not reached as a singleton intersection.
    F3 {
        uncovered: Vec<usize>,
    },
    Commutation {
        a: usize,
        b: usize,
        norm: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub f1: bool,
    pub f2: bool,
    pub f3: bool,
    pub commuting: bool,
    pub witnesses: Vec<Witness>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.f1 && self.f2 && self.f3 && self.commuting
    }
}

pub fn verify_properties<T: Scalar>(s: &FilterSystem<T>) -> PropertyReport {
    verify_properties_with(s, T::default_tolerance())
}

pub fn verify_properties_with<T: Scalar>(s: &FilterSystem<T>, tol: T) -> PropertyReport {
    let d = s.d();
    let mut witnesses = Vec::new();

    let mut f1 = true;
    for (i, f) in s.filters.iter().enumerate() {
        let mut problems = Vec::new();
        if f.arity() != s.n {
            problems.push(format!("{} slices, expected {}", f.arity(), s.n));
        }
        if !d.is_multiple_of(s.n) || f.slices.blocks().iter().any(|b| b.len() != d / s.n) {
            let sizes: Vec<usize> = f.slices.blocks().iter().map(Vec::len).collect();
            problems.push(format!("slice sizes {sizes:?}, expected {} each", d / s.n));
        }
        let distinct: BTreeSet<_> = f.eigenvalues.iter().collect();
        if distinct.len() != f.eigenvalues.len() {
            problems.push(format!("repeated eigenvalues {:?}", f.eigenvalues));
        }
        if !problems.is_empty() {
            f1 = false;
            witnesses.push(Witness::F1 { filter: i, detail: problems.join("; ") });
        }
    }

    // Every choice of one slice per filter, enumerated as mixed-radix digits.
    let radices: Vec<usize> = s.filters.iter().map(Filter::arity).collect();
    let choices: usize = radices.iter().product();
    let mut f2 = true;
    let mut covered = vec![false; d];
    let mut choice = vec![0usize; s.k];
    for _ in 0..choices {
        let intersection: Vec<usize> =
            (0..d).filter(|&idx| s.filters.iter().zip(&choice).all(|(f, &c)| f.slice_of(idx) == c)).collect();
        if intersection.len() == 1 {
            covered[intersection[0]] = true;
        } else {
            f2 = false;
            witnesses.push(Witness::F2 { choice: choice.clone(), intersection });
        }
        for (slot, &radix) in choice.iter_mut().zip(&radices).rev() {
            *slot += 1;
            if *slot < radix {
                break;
            }
            *slot = 0;
        }
    }

    let uncovered: Vec<usize> = (0..d).filter(|&i| !covered[i]).collect();
    let f3 = uncovered.is_empty();
    if !f3 {
        witnesses.push(Witness::F3 { uncovered });
    }

    let ops = s.operators();
    let mut commuting = true;
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            let norm = ops[a].commutator(&ops[b]).max_norm();
            if norm > tol {
                commuting = false;
                witnesses.push(Witness::Commutation { a, b, norm: norm.to_f64().unwrap_or(f64::NAN) });
            }
        }
    }

    PropertyReport { f1, f2, f3, commuting, witnesses }
}

/// Whether the filter operator `op` separates `u` from `v`: both must be
/// eigenvectors, and their eigenvalues must differ by more than `tol`.
pub fn separates<T: Scalar>(op: &Matrix<T>, u: &StateVector<T>, v: &StateVector<T>, tol: T) -> Result<bool> {
    let lu = eigenvalue_or_err(op, u, tol)?;
    let lv = eigenvalue_or_err(op, v, tol)?;
    Ok((lu - lv).norm() > tol)
}

pub(crate) fn eigenvalue_or_err<T: Scalar>(op: &Matrix<T>, v: &StateVector<T>, tol: T) -> Result<Complex<T>> {
    match eigen_residual(op, v)? {
        Some((lambda, residual)) if residual <= tol => Ok(lambda),
        Some((_, residual)) => Err(Error::NotEigenvector { residual: residual.to_f64().unwrap_or(f64::NAN) }),
        None => Err(Error::ZeroVector),
    }
}

/// Groups `states` by their eigenvalue under `op`. Blocks hold positions
/// into `states`, ordered by ascending real part of the eigenvalue.
pub fn induced_partition<T: Scalar>(op: &Matrix<T>, states: &[StateVector<T>], tol: T) -> Result<Partition<usize>> {
    let mut groups: Vec<(T, Vec<usize>)> = Vec::new();
    for (i, v) in states.iter().enumerate() {
        let lambda = eigenvalue_or_err(op, v, tol)?.re;
        match groups.iter_mut().find(|(l, _)| (*l - lambda).abs() <= tol) {
            Some((_, members)) => members.push(i),
            None => groups.push((lambda, vec![i])),
        }
    }
    groups.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues"));
    let ground: Vec<usize> = (0..states.len()).collect();
    Partition::new(groups.into_iter().map(|(_, m)| m).collect(), &ground)
}

pub fn transform_system<T: Scalar>(s: &FilterSystem<T>, u: &Matrix<T>, tol: T) -> Result<FilterSystem<T>> {
    Ok(FilterSystem { k: s.k, n: s.n, context: transform_context(&s.context, u, tol)?, filters: s.filters.clone() })
}

/// Strict equivalence: same context and the same multiset of filters, each
/// filter taken as an unordered set of slices.
pub fn systems_equivalent<T: Scalar>(a: &FilterSystem<T>, b: &FilterSystem<T>, tol: T) -> Result<bool> {
    if !a.context.approx_eq(&b.context, tol) {
        return Err(Error::ContextMismatch);
    }
    let key = |s: &FilterSystem<T>| {
        let mut keys: Vec<_> = s.filters.iter().map(Filter::unordered_key).collect();
        keys.sort();
        keys
    };
    Ok(key(a) == key(b))
}

/// Relaxed equivalence: some relabeling of basis states carries `a` onto
/// `b`. Returns the first such permutation in lexicographic order.
pub fn equivalent_up_to_relabeling<T: Scalar>(
    a: &FilterSystem<T>,
    b: &FilterSystem<T>,
    tol: T,
) -> Result<Option<Permutation>> {
    if a.d() > RELABEL_SEARCH_LIMIT {
        return Err(Error::DimensionBudget { base: a.d(), exponent: 1, budget: RELABEL_SEARCH_LIMIT });
    }
    for p in Permutation::all(a.d()) {
        if systems_equivalent(&permute_columns(a, &p)?, b, tol)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Outcome of checking every column permutation of the two-qubit canonical
/// system against the original.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationClaimReport {
    pub permutations: usize,
    pub strictly_equivalent: usize,
    pub equivalent_up_to_relabeling: usize,
    /// Rows produced by the first permutation that is not strictly equivalent.
    pub counterexample: Option<(Vec<usize>, Vec<String>)>,
    /// Strict verdict for the transposition of the first two columns.
    pub transposition_1_2_strict: bool,
    /// Strict verdict for the transposition of the middle two columns.
    pub transposition_2_3_strict: bool,
}

pub fn k2_permutation_claim() -> Result<PermutationClaimReport> {
    let tol = f64::default_tolerance();
    let base = canonical_system::<f64>(2, 2)?;
    let all = Permutation::all(4);
    let mut strict = 0;
    let mut relaxed = 0;
    let mut counterexample = None;
    for p in &all {
        let moved = permute_columns(&base, p)?;
        if systems_equivalent(&moved, &base, tol)? {
            strict += 1;
        } else if counterexample.is_none() {
            counterexample = Some((p.one_line().iter().map(|i| i + 1).collect(), moved.rows().render()));
        }
        if equivalent_up_to_relabeling(&moved, &base, tol)?.is_some() {
            relaxed += 1;
        }
    }
    let check = |a, b| -> Result<bool> {
        let moved = permute_columns(&base, &Permutation::transposition(4, a, b)?)?;
        systems_equivalent(&moved, &base, tol)
    };
    Ok(PermutationClaimReport {
        permutations: all.len(),
        strictly_equivalent: strict,
        equivalent_up_to_relabeling: relaxed,
        counterexample,
        transposition_1_2_strict: check(0, 1)?,
        transposition_2_3_strict: check(1, 2)?,
    })
}

/// Samples `shots` projective measurements of `filter` on `state` with
/// Born-rule probabilities; returns counts per slice.
pub fn sample_outcomes<T: Scalar, R: Rng + ?Sized>(
    filter: &Filter,
    ctx: &Context<T>,
    state: &StateVector<T>,
    shots: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let probs = outcome_probabilities(filter, ctx, state)?;
    let mut counts = vec![0; probs.len()];
    for _ in 0..shots {
        let r: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = probs.len() - 1;
        for (j, &p) in probs.iter().enumerate() {
            acc += p;
            if r < acc {
                chosen = j;
                break;
            }
        }
        counts[chosen] += 1;
    }
    Ok(counts)
}

/// Squared projection norms of `state` onto each slice, normalized.
pub fn outcome_probabilities<T: Scalar>(filter: &Filter, ctx: &Context<T>, state: &StateVector<T>) -> Result<Vec<f64>> {
    if state.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch { expected: ctx.dim(), found: state.dim() });
    }
    let total = state.norm_sqr().to_f64().unwrap_or(f64::NAN);
    if total <= 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut probs = vec![0.0; filter.arity()];
    for (i, v) in ctx.basis().iter().enumerate() {
        let amp = v.inner(state)?.norm_sqr().to_f64().unwrap_or(f64::NAN);
        probs[filter.slice_of(i)] += amp / total;
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-10;

    fn rows_of(s: &FilterSystem) -> Vec<String> {
        s.rows().render()
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(8), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn canonical_three_qubits() {
        let s: FilterSystem = canonical_system(3, 2).unwrap();
        assert_eq!(rows_of(&s), ["11110000", "00001111", "11001100", "00110011", "10101010", "01010101"]);
        assert!(s.operator(0).approx_eq(&Matrix::real_diagonal(&[1., 1., 1., 1., 0., 0., 0., 0.]), 0.0));
        assert!(s.projector(2, 1).approx_eq(&Matrix::real_diagonal(&[0., 1., 0., 1., 0., 1., 0., 1.]), 0.0));
        assert!(verify_properties(&s).all_pass());
    }

    #[test]
    fn canonical_single_qubit() {
        let s: FilterSystem = canonical_system(1, 2).unwrap();
        assert_eq!(rows_of(&s), ["10", "01"]);
        assert!(s.operator(0).approx_eq(&Matrix::real_diagonal(&[1.0, 0.0]), 0.0));
        assert!(verify_properties(&s).all_pass());
    }

    #[test]
    fn canonical_ternary() {
        let s: FilterSystem = canonical_system(2, 3).unwrap();
        assert_eq!(s.d(), 9);
        assert_eq!(s.filters()[0].eigenvalues(), &[2, 3, 5]);
        assert_eq!(s.filters()[1].eigenvalues(), &[7, 11, 13]);
        for f in s.filters() {
            assert!(f.slices().blocks().iter().all(|b| b.len() == 3));
        }
        // digit 1 in the first filter, digit 2 in the second
        let hit: Vec<usize> =
            (0..9).filter(|&i| s.filters()[0].slice_of(i) == 1 && s.filters()[1].slice_of(i) == 2).collect();
        assert_eq!(hit, [5]);
        assert!(verify_properties(&s).all_pass());
    }

    #[test]
    fn canonical_errors() {
        assert!(matches!(canonical_system::<f64>(2, 1), Err(Error::InvalidArity(_))));
        assert!(matches!(canonical_system::<f64>(0, 2), Err(Error::InvalidArity(_))));
        assert!(matches!(canonical_system::<f64>(13, 2), Err(Error::DimensionBudget { .. })));
        assert!(matches!(canonical_system::<f64>(64, 3), Err(Error::DimensionBudget { .. })));
    }

    #[test]
    fn permuted_rows_cyclic_shift() {
        let s: FilterSystem = canonical_system(3, 2).unwrap();
        let moved = permute_columns(&s, &Permutation::cyclic_shift(8, 1)).unwrap();
        assert_eq!(rows_of(&moved), ["11100001", "00011110", "10011001", "01100110", "01010101", "10101010"]);
        assert!(verify_properties(&moved).all_pass());
        assert!(systems_equivalent(&permute_columns(&s, &Permutation::identity(8)).unwrap(), &s, TOL).unwrap());
    }

    #[test]
    fn shift_on_two_qubits() {
        let s: FilterSystem = canonical_system(2, 2).unwrap();
        let moved = permute_columns(&s, &Permutation::cyclic_shift(4, 1)).unwrap();
        assert_eq!(rows_of(&moved), ["1001", "0110", "0101", "1010"]);
        assert!(verify_properties(&moved).all_pass());
        assert!(!systems_equivalent(&moved, &s, TOL).unwrap());
    }

    #[test]
    fn invalid_permutation_length() {
        let s: FilterSystem = canonical_system(2, 2).unwrap();
        assert!(permute_columns(&s, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn duplicate_filter_breaks_singletons() {
        let s: FilterSystem = canonical_system(3, 2).unwrap();
        let mut filters = s.filters().to_vec();
        filters[2] = filters[1].clone();
        let broken = FilterSystem::from_parts(2, s.context().clone(), filters).unwrap();
        let report = verify_properties(&broken);
        assert!(report.f1);
        assert!(!report.f2);
        assert!(!report.f3);
        let sizes: BTreeSet<usize> = report
            .witnesses
            .iter()
            .filter_map(|w| match w {
                Witness::F2 { intersection, .. } => Some(intersection.len()),
                _ => None,
            })
            .collect();
        assert_eq!(sizes, BTreeSet::from([0, 2]));
    }

    #[test]
    fn unequal_slices_fail_f1() {
        let f = Filter::from_indicator(&[1, 1, 1, 0]).unwrap();
        let g = Filter::from_indicator(&[1, 0, 1, 0]).unwrap();
        let s = FilterSystem::from_parts(2, Context::<f64>::standard(4), vec![f, g]).unwrap();
        let report = verify_properties(&s);
        assert!(!report.f1);
        assert!(matches!(report.witnesses[0], Witness::F1 { filter: 0, .. }));
    }

    #[test]
    fn all_ones_intersection_is_ground_state() {
        let s: FilterSystem = canonical_system(3, 2).unwrap();
        let hit: Vec<usize> = (0..8).filter(|&i| s.filters().iter().all(|f| f.slice_of(i) == 0)).collect();
        assert_eq!(hit, [0]);
    }

    #[test]
    fn serial_composition_resolves_basis_states() {
        for k in 1..=4 {
            let s: FilterSystem = canonical_system(k, 2).unwrap();
            for choice in 0..(1usize << k) {
                let label = BasisLabel::from_index(2, k, choice);
                let product = (0..k).fold(Matrix::identity(s.d()), |acc, i| &acc * &s.projector(i, label.digit(i)));
                let target = Matrix::outer(&StateVector::basis(s.d(), label.index()));
                assert!(product.approx_eq(&target, TOL), "k={k} choice={choice}");
            }
        }
    }

    #[test]
    fn separation_examples() {
        let s: FilterSystem = canonical_system(3, 2).unwrap();
        let f1 = s.operator(0);
        let e = |i| StateVector::basis(8, i);
        assert!(separates(&f1, &e(0), &e(7), TOL).unwrap());
        assert!(!separates(&f1, &e(0), &e(3), TOL).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mixed = StateVector::unnormalized_real(&[h, 0., 0., 0., h, 0., 0., 0.]).unwrap();
        assert!(matches!(separates(&f1, &e(0), &mixed, TOL), Err(Error::NotEigenvector { .. })));
    }

    #[test]
    fn transform_by_identity_and_deutsch_matrix() {
        let s: FilterSystem = canonical_system(2, 2).unwrap();
        let same = transform_system(&s, &Matrix::identity(4), TOL).unwrap();
        assert!(systems_equivalent(&same, &s, TOL).unwrap());

        let u = Matrix::from_real(
            4,
            &[0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5, -0.5, 0.5, 0.5, -0.5, -0.5, -0.5, 0.5, 0.5],
        )
        .unwrap();
        let moved = transform_system(&s, &u, TOL).unwrap();
        // Conjugation route agrees with the spectral route.
        for i in 0..2 {
            assert!(moved.operator(i).approx_eq(&s.operator(i).conjugate_by(&u), TOL));
        }
        // Eigenvalue-1 spaces: columns {1,2} and {1,3} of U.
        let f1 = moved.operator(0);
        let f2 = moved.operator(1);
        let col = |j| u.column(j).normalize().unwrap();
        let ev = |m: &Matrix, j| crate::linalg::eigenvalue_of(m, &col(j), TOL).unwrap().unwrap().re;
        assert_eq!([ev(&f1, 0), ev(&f1, 1), ev(&f1, 2), ev(&f1, 3)].map(f64::round), [1.0, 1.0, 0.0, 0.0]);
        assert_eq!([ev(&f2, 0), ev(&f2, 1), ev(&f2, 2), ev(&f2, 3)].map(f64::round), [1.0, 0.0, 1.0, 0.0]);
        assert!(verify_properties(&moved).all_pass());
        assert!(matches!(
            transform_system(&s, &Matrix::real_diagonal(&[2.0, 1.0, 1.0, 1.0]), TOL),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn equivalence_under_transpositions() {
        let s: FilterSystem = canonical_system(2, 2).unwrap();
        let swap23 = permute_columns(&s, &Permutation::transposition(4, 1, 2).unwrap()).unwrap();
        assert_eq!(rows_of(&swap23), ["1010", "0101", "1100", "0011"]);
        assert!(systems_equivalent(&swap23, &s, TOL).unwrap());

        let swap12 = permute_columns(&s, &Permutation::transposition(4, 0, 1).unwrap()).unwrap();
        assert_eq!(rows_of(&swap12), ["1100", "0011", "0110", "1001"]);
        assert!(!systems_equivalent(&swap12, &s, TOL).unwrap());
        let relabel = equivalent_up_to_relabeling(&swap12, &s, TOL).unwrap().unwrap();
        assert!(systems_equivalent(&permute_columns(&swap12, &relabel).unwrap(), &s, TOL).unwrap());
    }

    #[test]
    fn context_mismatch() {
        let s: FilterSystem = canonical_system(2, 2).unwrap();
        let h = crate::states::hadamard::<f64>();
        let moved = transform_system(&s, &h.kron(&h), TOL).unwrap();
        assert_eq!(systems_equivalent(&s, &moved, TOL).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn k2_claim_report() {
        let report = k2_permutation_claim().unwrap();
        assert_eq!(report.permutations, 24);
        // Stabilizer of the pair of 2+2 partitions has order 8.
        assert_eq!(report.strictly_equivalent, 8);
        assert_eq!(report.equivalent_up_to_relabeling, 24);
        assert!(!report.transposition_1_2_strict);
        assert!(report.transposition_2_3_strict);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn born_sampling_matches_probabilities() {
        let s: FilterSystem = canonical_system(1, 2).unwrap();
        let plus = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let probs = outcome_probabilities(&s.filters()[0], s.context(), &plus).unwrap();
        assert!((probs[0] - 0.36).abs() < 1e-12 && (probs[1] - 0.64).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let counts = sample_outcomes(&s.filters()[0], s.context(), &plus, 20_000, &mut rng).unwrap();
        assert_eq!(counts.iter().sum::<usize>(), 20_000);
        assert!((counts[0] as f64 / 20_000.0 - 0.36).abs() < 0.02);
        // Eigenstates are deterministic.
        let e1 = StateVector::basis(2, 1);
        let counts = sample_outcomes(&s.filters()[0], s.context(), &e1, 100, &mut rng).unwrap();
        assert_eq!(counts, [0, 100]);
    }
}
