//! Aggregated invariant suite across all modules, as one pass/fail report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boolean::{diff_against_printed, is_constant, parity, parity_partition, BooleanFunction, Problem, SumId};
use crate::error::Result;
use crate::filters::{canonical_system, k2_permutation_claim, permute_columns, transform_system, verify_properties};
use crate::linalg::{Matrix, StateVector};
use crate::oracle::{
    decide, deutsch_filter_setup, deutsch_run, generalized_deutsch_setup, parity_classical, parity_pairwise_quantum,
    parity_separability, DeutschOutcome,
};
use crate::partition::Permutation;
use crate::scalar::DEFAULT_TOLERANCE;
use crate::states::{hadamard, pauli_x, random_local_unitary, sigma, BasisLabel};
use crate::tables::{diff_against_golden, emit_table, TableName};

/// Canonical configurations swept by the filter checks.
pub const FILTER_CONFIGS: [(usize, usize); 6] = [(1, 2), (2, 2), (3, 2), (4, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Warning,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub module: String,
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// No failures; warnings are allowed.
    pub fn ok(&self) -> bool {
        self.count(CheckStatus::Fail) == 0
    }
}

struct Recorder {
    module: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn record(&mut self, name: &str, outcome: Result<(CheckStatus, String)>) {
        let (status, detail) = outcome.unwrap_or_else(|e| (CheckStatus::Fail, format!("error: {e}")));
        self.checks.push(Check { module: self.module.into(), name: name.into(), status, detail });
    }

    fn require(&mut self, name: &str, outcome: Result<bool>, detail: impl Into<String>) {
        let detail = detail.into();
        self.record(name, outcome.map(|ok| (if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail)));
    }
}

pub fn verify_all(seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Recorder { module: "complex-linalg", checks: Vec::new() };

    r.require(
        "gates are unitary",
        Ok([hadamard::<f64>(), pauli_x(), sigma(0.3, 1.1)].iter().all(|g| g.is_unitary(DEFAULT_TOLERANCE))),
        "H, X, sigma(0.3, 1.1)",
    );
    r.require(
        "kron factorizes apply",
        (|| {
            let a = hadamard::<f64>();
            let b = sigma(0.7, 0.2);
            let u = StateVector::from_real(&[0.6, 0.8])?;
            let v = StateVector::from_real(&[0.8, -0.6])?;
            let lhs = a.kron(&b).apply(&u.kron(&v))?;
            let rhs = a.apply(&u)?.kron(&b.apply(&v)?);
            Ok(lhs.approx_eq(&rhs, DEFAULT_TOLERANCE))
        })(),
        "(A x B)(u x v) = Au x Bv",
    );

    r.module = "quantum-states";
    r.require(
        "basis labels round-trip",
        Ok((1..=10).all(|k| (0..1usize << k).all(|i| BasisLabel::from_index(2, k, i).index() == i))),
        "k = 1..10",
    );
    r.require(
        "sigma is hermitian and unitary",
        Ok((0..16).all(|t| {
            let s = sigma(0.4 * t as f64, 0.3 * t as f64);
            s.is_hermitian(DEFAULT_TOLERANCE) && s.is_unitary(DEFAULT_TOLERANCE)
        })),
        "16 angle pairs",
    );

    r.module = "filter-systems";
    for (k, n) in FILTER_CONFIGS {
        r.require(
            &format!("canonical ({k},{n}) satisfies F1-F3"),
            canonical_system::<f64>(k, n).map(|s| verify_properties(&s).all_pass()),
            "",
        );
        r.require(
            &format!("({k},{n}) column permutations preserve F1-F3"),
            (|| {
                let s = canonical_system::<f64>(k, n)?;
                for _ in 0..20 {
                    if !verify_properties(&permute_columns(&s, &Permutation::random(s.d(), &mut rng))?).all_pass() {
                        return Ok(false);
                    }
                }
                Ok(true)
            })(),
            "20 random permutations",
        );
        r.require(
            &format!("({k},{n}) unitary transport preserves commutation and spectra"),
            (|| {
                let s = canonical_system::<f64>(k, n)?;
                for _ in 0..5 {
                    let u: Matrix = random_local_unitary(n, k, 3 * k, &mut rng);
                    let moved = transform_system(&s, &u, DEFAULT_TOLERANCE)?;
                    if !verify_properties(&moved).all_pass() {
                        return Ok(false);
                    }
                }
                Ok(true)
            })(),
            "5 random local unitaries",
        );
    }
    r.record(
        "two-qubit permutation claim",
        k2_permutation_claim().map(|c| {
            let mut detail = format!(
                "{}/{} permutations give the same filter set, {}/{} up to relabeling",
                c.strictly_equivalent, c.permutations, c.equivalent_up_to_relabeling, c.permutations
            );
            if let Some((perm, rows)) = &c.counterexample {
                let perm: Vec<String> = perm.iter().map(|i| i.to_string()).collect();
                detail += &format!("; counterexample {} gives rows {}", perm.join(" "), rows.join("/"));
            }
            let status = if c.strictly_equivalent == c.permutations {
                CheckStatus::Pass
            } else if c.equivalent_up_to_relabeling == c.permutations {
                CheckStatus::Warning
            } else {
                CheckStatus::Fail
            };
            (status, detail)
        }),
    );

    r.module = "boolean-partitions";
    r.require(
        "parity classes are equal-sized",
        (|| {
            for k in 0..=3 {
                let p = parity_partition(k)?;
                if !(p.len() == 2 && p.is_equipartition()) {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "k = 0..3",
    );
    r.require(
        "parity matches popcount",
        (|| {
            for k in 0..=3 {
                for f in BooleanFunction::all(k)? {
                    if parity(&f).is_odd() != (f.weight() % 2 == 1) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })(),
        "all functions up to k = 3",
    );
    for problem in Problem::ALL {
        let diff = diff_against_printed(problem);
        let status = if diff.is_empty() {
            CheckStatus::Pass
        } else if diff.is_documented_typo() {
            CheckStatus::Warning
        } else {
            CheckStatus::Fail
        };
        let detail = if diff.is_empty() {
            String::new()
        } else {
            let list = |ids: &[SumId]| ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            format!(
                "duplicated [{}], missing [{}], misplaced [{}]",
                list(&diff.duplicated),
                list(&diff.missing),
                list(&diff.misplaced)
            )
        };
        r.record(&format!("{problem} partition matches printed blocks"), Ok((status, detail)));
    }

    r.module = "oracle-algorithms";
    r.require(
        "Deutsch runs and filter verdicts",
        (|| {
            let setup = deutsch_filter_setup::<f64>()?;
            for i in 0..4 {
                let f = BooleanFunction::one_bit(i)?;
                let run = deutsch_run::<f64>(&f)?;
                let constant = is_constant(&f);
                let (_, verdict) = setup.classify(&run.after_oracle)?;
                let expected = if constant { DeutschOutcome::Constant } else { DeutschOutcome::Balanced };
                if run.outcome()? != expected || verdict != expected {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
        "4 one-bit functions",
    );
    r.require(
        "generalized Deutsch decisions",
        (|| {
            let setup = generalized_deutsch_setup::<f64>()?;
            for problem in Problem::ALL {
                for id in SumId::all() {
                    if !decide(&setup, problem, id.i, id.j)?.agrees() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })(),
        "64 cases",
    );
    r.require(
        "pairwise quantum parity",
        (|| {
            for k in 1..=3 {
                for f in BooleanFunction::all(k)? {
                    let classical = parity_classical(&f);
                    let quantum = parity_pairwise_quantum::<f64>(&f)?;
                    if classical.sign != quantum.sign || classical.queries != 1 << k || quantum.queries != 1 << (k - 1)
                    {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })(),
        "k = 1..3, 276 functions",
    );
    for k in 1..=3 {
        r.record(
            &format!("parity separability k = {k}"),
            parity_separability(k).map(|s| {
                let expected = k == 1;
                let status = if s.single_filter_possible == expected { CheckStatus::Pass } else { CheckStatus::Fail };
                (
                    status,
                    format!(
                        "even span {}, odd span {}, single filter possible: {}",
                        s.even_span_dim, s.odd_span_dim, s.single_filter_possible
                    ),
                )
            }),
        );
    }

    r.module = "tables";
    for name in TableName::ALL {
        r.record(
            &format!("{name} matches golden"),
            emit_table(name).map(|t| {
                let d = diff_against_golden(&t);
                let status = if d.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
                let detail = if d.partial { "partial transcription".to_owned() } else { String::new() };
                (status, detail)
            }),
        );
    }

    VerificationReport { seed, checks: r.checks }
}
