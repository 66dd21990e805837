//! Brute-force cross-check: the orbit closure splits into one torus orbit
//! per face of `K`, and on the orbit of face `F` the coordinate `x_i` is
//! nonzero exactly when `χ_i ∈ F`. Separation questions restricted to
//! coordinate hyperplanes then become questions about these vanishing
//! patterns alone.

use serde::{Deserialize, Serialize};

use crate::cone::{enumerate_faces, ConeFace, Guard, IndexSet, WeightSystem};
use crate::decide::{Certificate, Mode, Property, StratumPoint, Verdict};
use crate::error::Result;
use crate::linalg::{rank, rank_of_vectors};
use crate::num::serde_num;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    /// Coordinates that are nonzero on the stratum, with the supporting
    /// functional of the corresponding face.
    pub face: ConeFace,
    pub dim: usize,
}

impl Stratum {
    pub fn indices(&self) -> IndexSet {
        self.face.indices
    }
}

/// One stratum per face of `K`, in canonical face order.
pub fn strata(ws: &WeightSystem, guard: &Guard) -> Result<Vec<Stratum>> {
    let lattice = enumerate_faces(ws, guard)?;
    Ok(lattice
        .faces
        .into_iter()
        .map(|face| {
            let chars: Vec<_> = face.indices.iter().map(|i| ws.weight(i).to_vec()).collect();
            let dim = if chars.is_empty() {
                0
            } else {
                rank_of_vectors(&chars)
            };
            Stratum { face, dim }
        })
        .collect())
}

/// `x_a = 0 ⟹ x_b = 0` on every stratum.
fn implies(strata: &[Stratum], a: usize, b: usize) -> bool {
    strata
        .iter()
        .all(|s| s.indices().contains(a) || !s.indices().contains(b))
}

fn faces_of(strata: &[Stratum]) -> Vec<ConeFace> {
    strata.iter().map(|s| s.face.clone()).collect()
}

fn vacuous(property: Property) -> Verdict {
    Verdict {
        property,
        mode: Mode::Affine,
        holds: true,
        certificate: Certificate::Vacuous,
        notes: vec!["single coordinate: no pair of independent linear forms".into()],
    }
}

/// Separation property restricted to coordinate hyperplanes, read off the
/// strata.
pub fn oracle_sp(ws: &WeightSystem, guard: &Guard) -> Result<Verdict> {
    let n = ws.len();
    if n == 1 {
        return Ok(vacuous(Property::Sp));
    }
    let strata = strata(ws, guard)?;
    let fail = |vanishing: usize, forced: usize, note: String| Verdict {
        property: Property::Sp,
        mode: Mode::Affine,
        holds: false,
        certificate: Certificate::StrataPattern {
            vanishing,
            forced,
            mutual: false,
            faces: faces_of(&strata),
        },
        notes: vec![note],
    };
    if let Some(i) = (0..n).find(|&i| strata.iter().all(|s| s.indices().contains(i))) {
        let j = if i == 0 { 1 } else { 0 };
        return Ok(fail(
            i,
            j,
            format!("x{} vanishes nowhere on the orbit closure", i + 1),
        ));
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && implies(&strata, a, b) {
                return Ok(fail(
                    a,
                    b,
                    format!("every stratum with x{} = 0 has x{} = 0", a + 1, b + 1),
                ));
            }
        }
    }
    let mut points = Vec::with_capacity(n * (n - 1));
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let s = strata
                .iter()
                .find(|s| !s.indices().contains(a) && s.indices().contains(b))
                .expect("no implication between a and b");
            points.push(StratumPoint {
                zero: a,
                nonzero: b,
                face: s.face.clone(),
            });
        }
    }
    Ok(Verdict {
        property: Property::Sp,
        mode: Mode::Affine,
        holds: true,
        certificate: Certificate::Strata { points },
        notes: vec![],
    })
}

/// Weak separation restricted to coordinate hyperplanes: fails iff two
/// coordinates vanish on exactly the same strata.
pub fn oracle_wsp(ws: &WeightSystem, guard: &Guard) -> Result<Verdict> {
    let n = ws.len();
    if n == 1 {
        return Ok(vacuous(Property::Wsp));
    }
    let strata = strata(ws, guard)?;
    let mut points = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let split = strata
                .iter()
                .find(|s| s.indices().contains(i) != s.indices().contains(j));
            match split {
                Some(s) => {
                    let (zero, nonzero) = if s.indices().contains(i) {
                        (j, i)
                    } else {
                        (i, j)
                    };
                    points.push(StratumPoint {
                        zero,
                        nonzero,
                        face: s.face.clone(),
                    });
                }
                None => {
                    return Ok(Verdict {
                        property: Property::Wsp,
                        mode: Mode::Affine,
                        holds: false,
                        certificate: Certificate::StrataPattern {
                            vanishing: i,
                            forced: j,
                            mutual: true,
                            faces: faces_of(&strata),
                        },
                        notes: vec![format!(
                            "x{} and x{} vanish on the same strata",
                            i + 1,
                            j + 1
                        )],
                    })
                }
            }
        }
    }
    Ok(Verdict {
        property: Property::Wsp,
        mode: Mode::Affine,
        holds: true,
        certificate: Certificate::Strata { points },
        notes: vec![],
    })
}

/// Ordered pairs `(a, b)` such that `x_a = 0` forces `x_b = 0` on the orbit
/// closure, diagonal included, sorted.
pub fn characteristic_pairs(ws: &WeightSystem, guard: &Guard) -> Result<Vec<(usize, usize)>> {
    let strata = strata(ws, guard)?;
    let n = ws.len();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || implies(&strata, a, b) {
                pairs.push((a, b));
            }
        }
    }
    Ok(pairs)
}

/// A codimension-two coordinate subspace `x_i = x_j = 0` meeting the orbit
/// closure in codimension at most one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateWitness {
    #[serde(with = "serde_num::one_based_pair")]
    pub pair: (usize, usize),
    pub stratum: ConeFace,
    pub stratum_dim: usize,
    pub rank: usize,
}

impl CoordinateWitness {
    pub fn verify(&self, ws: &WeightSystem) -> bool {
        let (i, j) = self.pair;
        let chars: Vec<_> = self
            .stratum
            .indices
            .iter()
            .map(|k| ws.weight(k).to_vec())
            .collect();
        let dim = if chars.is_empty() {
            0
        } else {
            rank_of_vectors(&chars)
        };
        i != j
            && i < ws.len()
            && j < ws.len()
            && self.stratum.verify(ws)
            && !self.stratum.indices.contains(i)
            && !self.stratum.indices.contains(j)
            && dim == self.stratum_dim
            && rank(&ws.matrix()) == self.rank
            && self.stratum_dim + 1 >= self.rank
    }
}

/// First pair `i < j` (lexicographic) whose common zero set contains a
/// stratum of dimension `≥ rank - 1`, using the largest such stratum.
pub fn ssp_coordinate_witness(
    ws: &WeightSystem,
    guard: &Guard,
) -> Result<Option<CoordinateWitness>> {
    let strata = strata(ws, guard)?;
    let r = rank(&ws.matrix());
    let n = ws.len();
    for i in 0..n {
        for j in i + 1..n {
            let best = strata
                .iter()
                .filter(|s| !s.indices().contains(i) && !s.indices().contains(j))
                .fold(None::<&Stratum>, |best, s| match best {
                    Some(b) if b.dim >= s.dim => Some(b),
                    _ => Some(s),
                });
            if let Some(s) = best {
                if s.dim + 1 >= r {
                    return Ok(Some(CoordinateWitness {
                        pair: (i, j),
                        stratum: s.face.clone(),
                        stratum_dim: s.dim,
                        rank: r,
                    }));
                }
            }
        }
    }
    Ok(None)
}
