use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::SpdMatrix;

/// Weights must sum to one within this absolute tolerance.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// SPD matrices `A_1, …, A_n` of a common size with simplex weights.
///
/// Inverses are computed once at construction since every gradient and
/// harmonic-mean evaluation needs them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleFile", into = "EnsembleFile")]
pub struct WeightedEnsemble {
    matrices: Vec<SpdMatrix>,
    weights: Vec<f64>,
    inverses: Vec<SpdMatrix>,
}

/// On-disk layout: `{"dim": d, "weights": [...], "matrices": [[row-major], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub matrices: Vec<Vec<f64>>,
}

impl WeightedEnsemble {
    pub fn new(matrices: Vec<SpdMatrix>, weights: Vec<f64>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidEnsemble("ensemble is empty".into()))?;
        let dim = first.dim();
        if let Some((i, m)) = matrices.iter().enumerate().find(|(_, m)| m.dim() != dim) {
            return Err(Error::InvalidEnsemble(format!(
                "matrix {i} has dimension {}, expected {dim}",
                m.dim()
            )));
        }
        if weights.len() != matrices.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} matrices",
                weights.len(),
                matrices.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidEnsemble(format!(
                "weight {i} is {w}, expected a finite nonnegative value"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidEnsemble(format!("weights sum to {sum:.17}, expected 1")));
        }
        let inverses = matrices.iter().map(SpdMatrix::inverse).collect();
        Ok(Self {
            matrices,
            weights,
            inverses,
        })
    }

    /// Equal weights `1/n`.
    pub fn uniform(matrices: Vec<SpdMatrix>) -> Result<Self> {
        let n = matrices.len().max(1);
        Self::new(matrices, vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[SpdMatrix] {
        &self.matrices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn inverses(&self) -> &[SpdMatrix] {
        &self.inverses
    }

    /// `(w_i, A_i)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &SpdMatrix)> {
        self.weights.iter().copied().zip(&self.matrices)
    }

    /// The ensemble `{Mᵀ A_i M}` with the same weights.
    pub fn congruence(&self, m: &DMatrix<f64>) -> Result<Self> {
        let matrices = self.matrices.iter().map(|a| a.congruence(m)).collect::<Result<_>>()?;
        Self::new(matrices, self.weights.clone())
    }

    /// Reorders matrices and weights together: entry `i` becomes `old[order[i]]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidEnsemble(format!("{order:?} is not a permutation")));
            }
        }
        if order.len() != self.len() {
            return Err(Error::InvalidEnsemble(format!("{order:?} is not a permutation")));
        }
        Self::new(
            order.iter().map(|&i| self.matrices[i].clone()).collect(),
            order.iter().map(|&i| self.weights[i]).collect(),
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: EnsembleFile = serde_json::from_str(s)?;
        Self::try_from(file)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

impl TryFrom<EnsembleFile> for WeightedEnsemble {
    type Error = Error;

    fn try_from(file: EnsembleFile) -> Result<Self> {
        if file.dim == 0 {
            return Err(Error::InvalidEnsemble("dim must be at least 1".into()));
        }
        let mut matrices = Vec::with_capacity(file.matrices.len());
        for (i, entries) in file.matrices.iter().enumerate() {
            if entries.len() != file.dim * file.dim {
                return Err(Error::InvalidEnsemble(format!(
                    "matrix {i} has {} entries, expected {}",
                    entries.len(),
                    file.dim * file.dim
                )));
            }
            let m = SpdMatrix::from_row_slice(file.dim, entries)
                .map_err(|e| Error::InvalidEnsemble(format!("matrix {i}: {e}")))?;
            matrices.push(m);
        }
        Self::new(matrices, file.weights)
    }
}

impl From<WeightedEnsemble> for EnsembleFile {
    fn from(e: WeightedEnsemble) -> Self {
        let dim = e.dim();
        EnsembleFile {
            dim,
            weights: e.weights,
            matrices: e
                .matrices
                .iter()
                .map(|m| m.as_matrix().transpose().iter().copied().collect())
                .collect(),
        }
    }
}
