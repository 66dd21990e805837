//! Exact integer and rational linear algebra: ranks, kernel lattices and
//! linear feasibility with Farkas certificates.

mod matrix;
mod simplex;

pub use matrix::{
    determinant, hermite_rows, independent_subset, kernel_lattice, lattice_coordinates, rank,
    rank_of_vectors, same_lattice, IntMatrix,
};
pub(crate) use matrix::{rank_of_rows, rational_nullspace, solve_rational};
pub use simplex::{lp_feasible, Constraint, FarkasCertificate, Feasibility, LinearSystem};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{combine, dot, rat, serde_num, to_rat_vec};

/// Outcome of a cone membership query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ConeMembership {
    /// `v = Σ λ_k g_k` with every `λ_k ≥ 0`.
    Inside {
        #[serde(with = "serde_num::rat_vec")]
        coefficients: Vec<BigRational>,
    },
    /// A primitive integer functional `γ` with `γ·g_k ≥ 0` and `γ·v < 0`.
    Outside {
        #[serde(with = "serde_num::int_vec")]
        functional: Vec<BigInt>,
    },
}

impl ConeMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, ConeMembership::Inside { .. })
    }

    /// Re-checks the answer by exact arithmetic.
    pub fn verify(&self, v: &[BigInt], gens: &[Vec<BigInt>]) -> bool {
        match self {
            ConeMembership::Inside { coefficients } => {
                coefficients.len() == gens.len()
                    && coefficients.iter().all(|c| !c.is_negative())
                    && combine(coefficients, gens, v.len()) == to_rat_vec(v)
            }
            ConeMembership::Outside { functional } => {
                functional.len() == v.len()
                    && gens.iter().all(|g| !dot(functional, g).is_negative())
                    && dot(functional, v).is_negative()
            }
        }
    }
}

/// Decides `v ∈ ℚ≥0⟨gens⟩` and returns a certificate either way.
pub fn cone_member(v: &[BigInt], gens: &[Vec<BigInt>]) -> Result<ConeMembership> {
    let d = v.len();
    for (k, g) in gens.iter().enumerate() {
        if g.len() != d {
            return Err(Error::dims(d, g.len(), format!("generator {}", k + 1)));
        }
    }
    if v.iter().all(Zero::is_zero) {
        return Ok(ConeMembership::Inside {
            coefficients: vec![BigRational::zero(); gens.len()],
        });
    }
    let k = gens.len();
    let mut sys = LinearSystem::new(k);
    for row in 0..d {
        sys.equal(gens.iter().map(|g| rat(&g[row])).collect(), rat(&v[row]));
    }
    for j in 0..k {
        let mut e = vec![BigRational::zero(); k];
        e[j] = BigRational::one();
        sys.at_least(e, BigRational::zero());
    }
    let answer = match lp_feasible(&sys)? {
        Feasibility::Feasible(coefficients) => ConeMembership::Inside { coefficients },
        Feasibility::Infeasible(cert) => {
            // zᵀG = -y ≤ 0 and zᵀv > 0, so γ = -z separates.
            let functional: Vec<BigInt> = cert.equalities.iter().map(|z| -z.to_integer()).collect();
            ConeMembership::Outside {
                functional: crate::num::primitive_int(&functional),
            }
        }
    };
    debug_assert!(answer.verify(v, gens));
    Ok(answer)
}
