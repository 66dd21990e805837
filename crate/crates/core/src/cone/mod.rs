//! The weight cone `K = ℚ≥0⟨χ_1, …, χ_n⟩`: pointedness, edge conditions,
//! minimal faces, full face enumeration and projective homogenization.

mod faces;
mod index_set;

pub(crate) use faces::is_relation;
pub use faces::{
    edge_test, enumerate_faces, is_strictly_convex, minimal_face, minimal_face_with_evidence,
    ConeFace, EdgeCondition, EdgeTest, FaceLattice, FaceSeparator, Implication, MinimalFace,
    Pointedness,
};
pub use index_set::IndexSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::num::serde_num;

/// Default bound on `n` for the exponential scans (faces, octants).
pub const DEFAULT_MAX_N: usize = 12;

/// Default bound on the number of lattice points enumerated per octant.
pub const DEFAULT_MAX_VOLUME: u128 = 1 << 20;

/// Resource guard for the routines that scan all `2^n` index subsets or
/// enumerate lattice points in parallelepipeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub max_n: usize,
    pub max_volume: u128,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_n: DEFAULT_MAX_N,
            max_volume: DEFAULT_MAX_VOLUME,
        }
    }
}

impl Guard {
    pub fn new(max_n: usize) -> Self {
        Guard {
            max_n,
            ..Guard::default()
        }
    }

    pub(crate) fn check_volume(&self, what: &'static str, size: u128) -> Result<()> {
        if size > self.max_volume {
            return Err(Error::Resource {
                what,
                size,
                limit: self.max_volume,
            });
        }
        Ok(())
    }

    pub(crate) fn check(&self, what: &'static str, n: usize) -> Result<()> {
        if n > self.max_n || n > IndexSet::CAPACITY {
            return Err(Error::Resource {
                what,
                size: n as u128,
                limit: self.max_n.min(IndexSet::CAPACITY) as u128,
            });
        }
        Ok(())
    }
}

/// The characters `χ_1, …, χ_n ∈ ℤ^d` of a diagonal torus action.
/// Duplicates and zero characters are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightSystem {
    dim: usize,
    weights: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    d: usize,
    #[serde(with = "serde_num::int_vec_vec")]
    weights: Vec<Vec<BigInt>>,
}

impl TryFrom<RawWeights> for WeightSystem {
    type Error = Error;
    fn try_from(raw: RawWeights) -> Result<Self> {
        WeightSystem::new(raw.d, raw.weights)
    }
}

impl From<WeightSystem> for RawWeights {
    fn from(ws: WeightSystem) -> Self {
        RawWeights {
            d: ws.dim,
            weights: ws.weights,
        }
    }
}

impl WeightSystem {
    pub fn new(dim: usize, weights: Vec<Vec<BigInt>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension d must be at least 1".into()));
        }
        if weights.is_empty() {
            return Err(Error::Input("weight list is empty".into()));
        }
        for (i, w) in weights.iter().enumerate() {
            if w.len() != dim {
                return Err(Error::dims(dim, w.len(), format!("weight {}", i + 1)));
            }
        }
        Ok(WeightSystem { dim, weights })
    }

    /// Convenience constructor from small integers; panics on ragged input.
    pub fn from_i64(weights: &[&[i64]]) -> Self {
        let dim = weights.first().map_or(0, |w| w.len());
        let weights = weights.iter().map(|w| crate::num::int_vec(w)).collect();
        WeightSystem::new(dim, weights).expect("well-formed weight system")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> &[BigInt] {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Vec<BigInt>] {
        &self.weights
    }

    pub fn is_zero_weight(&self, i: usize) -> bool {
        self.weights[i].iter().all(Zero::is_zero)
    }

    /// `d × n` matrix with the characters as columns.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.weights).expect("validated at construction")
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// All characters except `χ_i`, in order.
    pub(crate) fn others(&self, i: usize) -> Vec<Vec<BigInt>> {
        self.weights
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, w)| w.clone())
            .collect()
    }

    /// Reorders the characters: the result has `χ_{perm[k]}` in slot `k`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightSystem {
            dim: self.dim,
            weights: perm.iter().map(|&k| self.weights[k].clone()).collect(),
        }
    }

    /// Applies the linear map `g` (rows of a `d × d` matrix) to every character.
    pub fn transformed(&self, g: &[Vec<BigInt>]) -> Self {
        let weights = self
            .weights
            .iter()
            .map(|w| g.iter().map(|row| crate::num::dot(row, w)).collect())
            .collect();
        WeightSystem {
            dim: self.dim,
            weights,
        }
    }
}

/// Appends a constant coordinate: `χ_i ↦ (χ_i, 1)`. Affine questions about
/// the homogenized system answer projective questions about the original.
pub fn homogenize(ws: &WeightSystem) -> WeightSystem {
    let weights = ws
        .weights
        .iter()
        .map(|w| {
            let mut w = w.clone();
            w.push(BigInt::one());
            w
        })
        .collect();
    WeightSystem {
        dim: ws.dim + 1,
        weights,
    }
}
