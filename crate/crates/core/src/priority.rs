//! Comparison matrices, principal-eigenvector priorities and consistency.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::PairwiseJudgment;
use crate::ratio::Ratio;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

/// Upper bound of the "ideal" consistency band (exclusive).
pub const IDEAL_CR_LIMIT: f64 = 0.10;
/// Upper bound of the "acceptable" consistency band (inclusive).
pub const ACCEPTABLE_CR_LIMIT: f64 = 0.20;

/// Saaty's random consistency index for orders 1 through 10.
const RANDOM_INDEX: [f64; 10] = [0.00, 0.00, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PriorityError {
    #[error("MISSING_PAIR: no judgment compares `{0}` with `{1}`")]
    MissingPair(String, String),
    #[error("CONFLICTING_PAIR: `{0}` and `{1}` are judged more than once")]
    ConflictingPair(String, String),
    #[error("UNKNOWN_ELEMENT: `{0}` is not one of the compared elements")]
    UnknownElement(String),
    #[error("BAD_VALUE: judgment of `{0}` over `{1}` is not positive")]
    BadValue(String, String),
    #[error("NO_CONVERGENCE: power iteration did not settle within {} iterations", .0.iterations)]
    NoConvergence(PriorityVector),
    #[error("BAD_ORDER: matrix order must be at least 1")]
    BadOrder,
}

impl PriorityError {
    pub fn code(&self) -> &'static str {
        match self {
            PriorityError::MissingPair(..) => "MISSING_PAIR",
            PriorityError::ConflictingPair(..) => "CONFLICTING_PAIR",
            PriorityError::UnknownElement(_) => "UNKNOWN_ELEMENT",
            PriorityError::BadValue(..) => "BAD_VALUE",
            PriorityError::NoConvergence(_) => "NO_CONVERGENCE",
            PriorityError::BadOrder => "BAD_ORDER",
        }
    }
}

/// Positive reciprocal matrix over named elements, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    elements: Vec<String>,
    entries: Vec<Vec<f64>>,
}

impl ComparisonMatrix {
    /// Wraps raw entries. Callers are responsible for reciprocity; use
    /// [`build_matrix`] to derive a matrix from judgments.
    pub fn from_entries(elements: Vec<String>, entries: Vec<Vec<f64>>) -> Self {
        assert_eq!(elements.len(), entries.len(), "one row per element");
        assert!(
            entries.iter().all(|row| row.len() == elements.len()),
            "matrix must be square"
        );
        ComparisonMatrix { elements, entries }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    fn multiply(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Builds the reciprocal matrix for `elements` from one judgment per
/// unordered pair. Reciprocals are taken in exact arithmetic before the
/// conversion to floating point, so `a[i][j] * a[j][i]` is 1 up to rounding.
pub fn build_matrix(
    elements: &[impl AsRef<str>],
    judgments: &[PairwiseJudgment],
) -> Result<ComparisonMatrix, PriorityError> {
    let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let n = names.len();
    let mut exact: Vec<Vec<Option<Ratio>>> = vec![vec![None; n]; n];
    for (i, row) in exact.iter_mut().enumerate() {
        row[i] = Some(Ratio::ONE);
    }

    for j in judgments {
        let li = *index
            .get(j.left.as_str())
            .ok_or_else(|| PriorityError::UnknownElement(j.left.clone()))?;
        let ri = *index
            .get(j.right.as_str())
            .ok_or_else(|| PriorityError::UnknownElement(j.right.clone()))?;
        if li == ri || exact[li][ri].is_some() {
            return Err(PriorityError::ConflictingPair(j.left.clone(), j.right.clone()));
        }
        let reciprocal = j
            .value
            .recip()
            .filter(|_| j.value.is_positive())
            .ok_or_else(|| PriorityError::BadValue(j.left.clone(), j.right.clone()))?;
        exact[li][ri] = Some(j.value);
        exact[ri][li] = Some(reciprocal);
    }

    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            entries[i][k] = exact[i][k]
                .ok_or_else(|| PriorityError::MissingPair(names[i].clone(), names[k].clone()))?
                .to_f64();
        }
    }
    Ok(ComparisonMatrix {
        elements: names,
        entries,
    })
}

/// Normalized principal eigenvector and the matching eigenvalue estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorityVector {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Stop once the L1 distance between successive iterates falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Power iteration from the uniform vector with the default settings.
pub fn principal_eigenvector(matrix: &ComparisonMatrix) -> Result<PriorityVector, PriorityError> {
    PowerIteration::default().run(matrix)
}

impl PowerIteration {
    pub fn run(&self, matrix: &ComparisonMatrix) -> Result<PriorityVector, PriorityError> {
        let n = matrix.order();
        match n {
            0 => Err(PriorityError::BadOrder),
            1 => Ok(PriorityVector {
                weights: vec![1.0],
                lambda_max: 1.0,
                iterations: 0,
                converged: true,
            }),
            2 => {
                // [[1, a], [1/a, 1]] has eigenvector (a, 1) and eigenvalue 2.
                let a = matrix.get(0, 1);
                Ok(PriorityVector {
                    weights: vec![a / (1.0 + a), 1.0 / (1.0 + a)],
                    lambda_max: 2.0,
                    iterations: 0,
                    converged: true,
                })
            }
            _ => self.run_from(matrix, &vec![1.0; n]),
        }
    }

    /// Power iteration from an arbitrary positive start vector (no closed-form
    /// shortcut for small orders).
    pub fn run_from(&self, matrix: &ComparisonMatrix, start: &[f64]) -> Result<PriorityVector, PriorityError> {
        let n = matrix.order();
        if n == 0 {
            return Err(PriorityError::BadOrder);
        }
        assert_eq!(start.len(), n, "start vector length must match the matrix order");
        let mut v = normalized(start.to_vec());
        for iteration in 1..=self.max_iterations {
            let next = normalized(matrix.multiply(&v));
            let change: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            v = next;
            if change < self.tolerance {
                return Ok(PriorityVector {
                    lambda_max: rayleigh_sum(matrix, &v),
                    weights: v,
                    iterations: iteration,
                    converged: true,
                });
            }
        }
        Err(PriorityError::NoConvergence(PriorityVector {
            lambda_max: rayleigh_sum(matrix, &v),
            weights: v,
            iterations: self.max_iterations,
            converged: false,
        }))
    }
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}

/// `sum(M v) / sum(v)`; exact for the dominant eigenvalue when `v` is its
/// eigenvector.
fn rayleigh_sum(matrix: &ComparisonMatrix, v: &[f64]) -> f64 {
    matrix.multiply(v).iter().sum::<f64>() / v.iter().sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConsistencyStatus {
    Ideal,
    Acceptable,
    Inconsistent,
}

impl ConsistencyStatus {
    pub fn for_ratio(cr: f64) -> Self {
        if cr < IDEAL_CR_LIMIT {
            ConsistencyStatus::Ideal
        } else if cr <= ACCEPTABLE_CR_LIMIT {
            ConsistencyStatus::Acceptable
        } else {
            ConsistencyStatus::Inconsistent
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ConsistencyStatus::Ideal => "IDEAL",
            ConsistencyStatus::Acceptable => "ACCEPTABLE",
            ConsistencyStatus::Inconsistent => "INCONSISTENT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub lambda_max: f64,
    pub n: usize,
    pub consistency_index: f64,
    pub random_index: f64,
    pub consistency_ratio: f64,
    pub status: ConsistencyStatus,
}

/// CI = (λmax − n)/(n − 1) and CR = CI/RI; both are 0 for n ≤ 2.
pub fn consistency(lambda_max: f64, n: usize) -> Result<ConsistencyReport, PriorityError> {
    if n < 1 {
        return Err(PriorityError::BadOrder);
    }
    let consistency_index = if n <= 2 {
        0.0
    } else {
        (lambda_max - n as f64) / (n as f64 - 1.0)
    };
    let random_index = saaty_random_index(n);
    let consistency_ratio = if random_index == 0.0 {
        0.0
    } else {
        consistency_index / random_index
    };
    Ok(ConsistencyReport {
        lambda_max,
        n,
        consistency_index,
        random_index,
        consistency_ratio,
        status: ConsistencyStatus::for_ratio(consistency_ratio),
    })
}

/// Random index for a matrix of order `n`; orders above 10 use the order-10
/// value and order 0 is treated as 1.
pub fn saaty_random_index(n: usize) -> f64 {
    RANDOM_INDEX[n.clamp(1, RANDOM_INDEX.len()) - 1]
}
