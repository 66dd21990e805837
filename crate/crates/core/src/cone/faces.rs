use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Guard, IndexSet, WeightSystem};
use crate::error::Result;
use crate::linalg::{cone_member, lp_feasible, ConeMembership, Feasibility, LinearSystem};
use crate::num::{dot, primitive, rat, serde_num, to_rat_vec};

/// Pointedness of `K`, with a certificate either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Pointedness {
    /// `γ·χ_i ≥ 1` for every nonzero character.
    Pointed {
        #[serde(with = "serde_num::int_vec")]
        functional: Vec<BigInt>,
    },
    /// `Σ c_i χ_i = 0` with `c ≥ 0`, `c ≠ 0`, supported on nonzero characters.
    NotPointed {
        #[serde(with = "serde_num::int_vec")]
        relation: Vec<BigInt>,
    },
}

impl Pointedness {
    pub fn is_pointed(&self) -> bool {
        matches!(self, Pointedness::Pointed { .. })
    }

    pub fn verify(&self, ws: &WeightSystem) -> bool {
        match self {
            Pointedness::Pointed { functional } => {
                functional.len() == ws.dim()
                    && (0..ws.len()).all(|i| {
                        ws.is_zero_weight(i) || dot(functional, ws.weight(i)) >= BigInt::one()
                    })
            }
            Pointedness::NotPointed { relation } => {
                relation.len() == ws.len()
                    && relation.iter().all(|c| !c.is_negative())
                    && relation.iter().any(|c| c.is_positive())
                    && (0..ws.len()).all(|i| relation[i].is_zero() || !ws.is_zero_weight(i))
                    && is_relation(ws, relation)
            }
        }
    }
}

pub(crate) fn is_relation(ws: &WeightSystem, c: &[BigInt]) -> bool {
    (0..ws.dim()).all(|row| {
        c.iter()
            .zip(ws.weights())
            .map(|(ci, w)| ci * &w[row])
            .sum::<BigInt>()
            .is_zero()
    })
}

/// Decides whether `K` contains no line.
pub fn is_strictly_convex(ws: &WeightSystem) -> Result<Pointedness> {
    let nonzero: Vec<usize> = (0..ws.len()).filter(|&i| !ws.is_zero_weight(i)).collect();
    let mut sys = LinearSystem::new(ws.dim());
    for &i in &nonzero {
        sys.at_least(to_rat_vec(ws.weight(i)), BigRational::one());
    }
    Ok(match lp_feasible(&sys)? {
        Feasibility::Feasible(gamma) => Pointedness::Pointed {
            functional: primitive(&gamma),
        },
        Feasibility::Infeasible(cert) => {
            let mut relation = vec![BigInt::zero(); ws.len()];
            for (&i, y) in nonzero.iter().zip(&cert.inequalities) {
                relation[i] = y.to_integer();
            }
            Pointedness::NotPointed { relation }
        }
    })
}

/// One of the two edge conditions for `χ_i`: whether `±χ_i` avoids the cone
/// spanned by the other characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCondition {
    pub holds: bool,
    /// Membership of `±χ_i` in the cone of the others; coefficients are
    /// indexed over the other characters in their original order.
    pub membership: ConeMembership,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTest {
    #[serde(with = "serde_num::one_based")]
    pub index: usize,
    /// `χ_i ∉ ℚ≥0⟨χ_k : k ≠ i⟩`.
    pub positive: EdgeCondition,
    /// `-χ_i ∉ ℚ≥0⟨χ_k : k ≠ i⟩`.
    pub negative: EdgeCondition,
}

impl EdgeTest {
    pub fn holds(&self) -> bool {
        self.positive.holds && self.negative.holds
    }
}

/// Tests both edge conditions for `χ_i` (0-based `i`). Together, over all
/// `i`, they are equivalent to: `K` pointed, every `χ_i` spans an edge, and
/// no two characters span the same ray.
pub fn edge_test(ws: &WeightSystem, i: usize) -> Result<EdgeTest> {
    ws.check_index(i)?;
    let others = ws.others(i);
    let v = ws.weight(i).to_vec();
    let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
    let positive = cone_member(&v, &others)?;
    let negative = cone_member(&neg, &others)?;
    Ok(EdgeTest {
        index: i,
        positive: EdgeCondition {
            holds: !positive.is_inside(),
            membership: positive,
        },
        negative: EdgeCondition {
            holds: !negative.is_inside(),
            membership: negative,
        },
    })
}

/// The minimal face of `K` containing `χ_i`, as an index set, together with
/// per-index evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalFace {
    #[serde(with = "serde_num::one_based")]
    pub index: usize,
    pub members: IndexSet,
    /// For each `j` outside the face: a face containing `χ_i` but not `χ_j`.
    pub separators: Vec<FaceSeparator>,
    /// For each member `j ≠ i`: `x_j = 0` forces `x_i = 0`.
    pub memberships: Vec<Implication>,
}

/// A functional `γ`, nonnegative on every character, with `γ·χ_contained = 0`
/// and `γ·χ_excluded > 0`: the face `K ∩ γ^⊥` contains one and not the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSeparator {
    #[serde(with = "serde_num::one_based")]
    pub contained: usize,
    #[serde(with = "serde_num::one_based")]
    pub excluded: usize,
    #[serde(with = "serde_num::int_vec")]
    pub functional: Vec<BigInt>,
}

impl FaceSeparator {
    pub fn verify(&self, ws: &WeightSystem) -> bool {
        self.contained < ws.len()
            && self.excluded < ws.len()
            && self.functional.len() == ws.dim()
            && ws
                .weights()
                .iter()
                .all(|w| !dot(&self.functional, w).is_negative())
            && dot(&self.functional, ws.weight(self.contained)).is_zero()
            && dot(&self.functional, ws.weight(self.excluded)).is_positive()
    }
}

/// A relation `scale·χ_forced = Σ c_k χ_k` with `scale ≥ 0`, `c ≥ 0` and
/// `c_vanishing > 0`.
///
/// The binomial `x_forced^scale - x^c` vanishes on the orbit closure, so
/// `x_vanishing = 0` forces `x_forced = 0` there. With `scale = 0` the
/// relation reads `x^c = 1`: the coordinate `x_vanishing` never vanishes and
/// the implication holds vacuously.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Implication {
    #[serde(with = "serde_num::one_based")]
    pub vanishing: usize,
    #[serde(with = "serde_num::one_based")]
    pub forced: usize,
    #[serde(with = "serde_num::int")]
    pub scale: BigInt,
    #[serde(with = "serde_num::int_vec")]
    pub coefficients: Vec<BigInt>,
}

impl Implication {
    /// Cancels `χ_forced` from both sides so that `scale = 0` or
    /// `c_forced = 0`, then divides out the common content.
    pub fn new(
        vanishing: usize,
        forced: usize,
        scale: BigInt,
        mut coefficients: Vec<BigInt>,
    ) -> Self {
        let common = scale.clone().min(coefficients[forced].clone());
        let scale = if common.is_positive() {
            coefficients[forced] -= &common;
            scale - common
        } else {
            scale
        };
        let mut all = coefficients.clone();
        all.push(scale);
        let all = crate::num::primitive_int(&all);
        let (c, s) = all.split_at(all.len() - 1);
        Implication {
            vanishing,
            forced,
            scale: s[0].clone(),
            coefficients: c.to_vec(),
        }
    }

    pub fn verify(&self, ws: &WeightSystem) -> bool {
        let n = ws.len();
        if self.vanishing >= n || self.forced >= n || self.coefficients.len() != n {
            return false;
        }
        if self.scale.is_negative()
            || self.coefficients.iter().any(Signed::is_negative)
            || !self.coefficients[self.vanishing].is_positive()
        {
            return false;
        }
        if self.scale.is_positive() && !self.coefficients[self.forced].is_zero() {
            return false;
        }
        let mut c = self.coefficients.clone();
        c[self.forced] -= &self.scale;
        is_relation(ws, &c)
    }
}

/// `j` belongs to the minimal face of `χ_i` iff no functional that is
/// nonnegative on `K` and vanishes on `χ_i` is positive on `χ_j`.
fn face_separation_system(ws: &WeightSystem, i: usize, j: usize) -> LinearSystem {
    let mut sys = LinearSystem::new(ws.dim());
    for w in ws.weights() {
        sys.at_least(to_rat_vec(w), BigRational::zero());
    }
    sys.at_least(
        ws.weight(i).iter().map(|x| -rat(x)).collect(),
        BigRational::zero(),
    );
    sys.at_least(to_rat_vec(ws.weight(j)), BigRational::one());
    sys
}

pub fn minimal_face_with_evidence(ws: &WeightSystem, i: usize) -> Result<MinimalFace> {
    ws.check_index(i)?;
    let n = ws.len();
    let mut members = IndexSet::singleton(i);
    let mut separators = Vec::new();
    let mut memberships = Vec::new();
    for j in 0..n {
        if j == i {
            continue;
        }
        match lp_feasible(&face_separation_system(ws, i, j))? {
            Feasibility::Feasible(gamma) => separators.push(FaceSeparator {
                contained: i,
                excluded: j,
                functional: primitive(&gamma),
            }),
            Feasibility::Infeasible(cert) => {
                // Σ y_k χ_k - y_n χ_i + y_{n+1} χ_j = 0 with y_{n+1} > 0.
                let y: Vec<BigInt> = cert.inequalities.iter().map(|v| v.to_integer()).collect();
                let mut c = y[..n].to_vec();
                c[j] += &y[n + 1];
                memberships.push(Implication::new(j, i, y[n].clone(), c));
                members.insert(j);
            }
        }
    }
    Ok(MinimalFace {
        index: i,
        members,
        separators,
        memberships,
    })
}

pub fn minimal_face(ws: &WeightSystem, i: usize) -> Result<IndexSet> {
    minimal_face_with_evidence(ws, i).map(|m| m.members)
}

/// A face of `K`, recorded as the set of characters lying on it together
/// with a supporting functional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFace {
    pub indices: IndexSet,
    /// `γ·χ_i = 0` on the face, `γ·χ_j ≥ 1` off it.
    #[serde(with = "serde_num::int_vec")]
    pub functional: Vec<BigInt>,
}

impl ConeFace {
    pub fn verify(&self, ws: &WeightSystem) -> bool {
        self.functional.len() == ws.dim()
            && (0..ws.len()).all(|i| {
                let v = dot(&self.functional, ws.weight(i));
                if self.indices.contains(i) {
                    v.is_zero()
                } else {
                    v >= BigInt::one()
                }
            })
            && self.indices.iter().all(|i| i < ws.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLattice {
    pub faces: Vec<ConeFace>,
}

impl FaceLattice {
    pub fn index_sets(&self) -> Vec<IndexSet> {
        self.faces.iter().map(|f| f.indices).collect()
    }

    pub fn contains(&self, s: IndexSet) -> bool {
        self.faces.binary_search_by(|f| f.indices.cmp(&s)).is_ok()
    }

    pub fn get(&self, s: IndexSet) -> Option<&ConeFace> {
        self.faces
            .binary_search_by(|f| f.indices.cmp(&s))
            .ok()
            .map(|k| &self.faces[k])
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn verify(&self, ws: &WeightSystem) -> bool {
        self.faces.iter().all(|f| f.verify(ws))
            && self.faces.windows(2).all(|w| w[0].indices < w[1].indices)
    }
}

/// Every face of `K` as an index set with a witness functional, by testing
/// each subset `S` for a functional vanishing exactly on `S`. Exponential in
/// `n`, so the scan is guarded.
pub fn enumerate_faces(ws: &WeightSystem, guard: &Guard) -> Result<FaceLattice> {
    let n = ws.len();
    guard.check("face enumeration over 2^n subsets", n)?;
    let full = IndexSet::full(n);
    let zeros: IndexSet = (0..n).filter(|&i| ws.is_zero_weight(i)).collect();
    let rows: Vec<Vec<BigRational>> = ws.weights().iter().map(|w| to_rat_vec(w)).collect();
    let mut faces = vec![ConeFace {
        indices: full,
        functional: vec![BigInt::zero(); ws.dim()],
    }];
    for bits in 0..full.bits() {
        let s = IndexSet::from_bits(bits);
        if !zeros.is_subset(s) {
            continue;
        }
        let mut sys = LinearSystem::new(ws.dim());
        for (i, row) in rows.iter().enumerate() {
            if s.contains(i) {
                sys.equal(row.clone(), BigRational::zero());
            } else {
                sys.at_least(row.clone(), BigRational::one());
            }
        }
        if let Feasibility::Feasible(gamma) = lp_feasible(&sys)? {
            faces.push(ConeFace {
                indices: s,
                functional: primitive(&gamma),
            });
        }
    }
    faces.sort_by_key(|f| f.indices);
    Ok(FaceLattice { faces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m_weights() -> WeightSystem {
        WeightSystem::from_i64(&[&[1, 1], &[2, 0], &[0, 2]])
    }

    fn n_weights() -> WeightSystem {
        WeightSystem::from_i64(&[&[1, 0, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1]])
    }

    fn sets(v: &[&[usize]]) -> Vec<IndexSet> {
        let mut out: Vec<IndexSet> = v
            .iter()
            .map(|s| s.iter().map(|i| i - 1).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn strict_convexity() {
        let p = is_strictly_convex(&m_weights()).unwrap();
        assert!(p.is_pointed() && p.verify(&m_weights()));
        let line = WeightSystem::from_i64(&[&[1], &[-1]]);
        let p = is_strictly_convex(&line).unwrap();
        assert_eq!(
            p,
            Pointedness::NotPointed {
                relation: crate::num::int_vec(&[1, 1])
            }
        );
        let p = is_strictly_convex(&n_weights()).unwrap();
        assert!(p.is_pointed() && p.verify(&n_weights()));
    }

    #[test]
    fn zero_weights_do_not_break_pointedness() {
        let ws = WeightSystem::from_i64(&[&[0], &[3]]);
        assert!(is_strictly_convex(&ws).unwrap().is_pointed());
        let ws = WeightSystem::from_i64(&[&[0, 0], &[0, 0]]);
        let p = is_strictly_convex(&ws).unwrap();
        assert!(p.is_pointed() && p.verify(&ws));
    }

    #[test]
    fn edge_conditions() {
        let t = edge_test(&m_weights(), 0).unwrap();
        assert!(!t.positive.holds);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            t.positive.membership,
            ConeMembership::Inside {
                coefficients: vec![half.clone(), half]
            }
        );
        let t = edge_test(&n_weights(), 0).unwrap();
        assert!(t.positive.holds && t.negative.holds);
        let others = n_weights().others(0);
        let e1 = crate::num::int_vec(&[1, 0, 0]);
        let minus_e1 = crate::num::int_vec(&[-1, 0, 0]);
        assert!(t.positive.membership.verify(&e1, &others));
        assert!(t.negative.membership.verify(&minus_e1, &others));
        let t = edge_test(&WeightSystem::from_i64(&[&[1]]), 0).unwrap();
        assert!(t.positive.holds && t.negative.holds);
        assert!(edge_test(&m_weights(), 3).is_err());
    }

    #[test]
    fn minimal_faces() {
        assert_eq!(minimal_face(&m_weights(), 0).unwrap(), IndexSet::full(3));
        assert_eq!(
            minimal_face(&m_weights(), 1).unwrap(),
            IndexSet::singleton(1)
        );
        let ray = WeightSystem::from_i64(&[&[1, 0], &[2, 0]]);
        assert_eq!(minimal_face(&ray, 0).unwrap(), IndexSet::full(2));
        let mf = minimal_face_with_evidence(&m_weights(), 1).unwrap();
        assert!(mf.separators.iter().all(|s| s.verify(&m_weights())));
        let mf = minimal_face_with_evidence(&m_weights(), 0).unwrap();
        assert_eq!(mf.memberships.len(), 2);
        assert!(mf.memberships.iter().all(|m| m.verify(&m_weights())));
    }

    #[test]
    fn implications_normalize() {
        // 2·χ_1 = χ_2 + χ_3 for M.
        let imp = Implication::new(1, 0, 2.into(), crate::num::int_vec(&[0, 1, 1]));
        assert!(imp.verify(&m_weights()));
        // χ_1 + χ_2 = 0 written as 1·χ_1 = 2·χ_1 + χ_2 cancels to a unit relation.
        let line = WeightSystem::from_i64(&[&[1], &[-1]]);
        let imp = Implication::new(1, 0, 1.into(), crate::num::int_vec(&[2, 1]));
        assert_eq!(imp.scale, BigInt::zero());
        assert!(imp.verify(&line));
        let bogus = Implication::new(0, 1, 1.into(), crate::num::int_vec(&[1, 0]));
        assert!(!bogus.verify(&m_weights()));
    }

    #[test]
    fn face_enumeration_examples() {
        let g = Guard::default();
        let quad = WeightSystem::from_i64(&[&[1, 0], &[0, 1]]);
        let f = enumerate_faces(&quad, &g).unwrap();
        assert_eq!(f.index_sets(), sets(&[&[], &[1], &[2], &[1, 2]]));
        assert!(f.verify(&quad));

        let f = enumerate_faces(&m_weights(), &g).unwrap();
        assert_eq!(f.index_sets(), sets(&[&[], &[2], &[3], &[1, 2, 3]]));
        assert!(f.verify(&m_weights()));

        let line = WeightSystem::from_i64(&[&[1], &[-1]]);
        assert_eq!(
            enumerate_faces(&line, &g).unwrap().index_sets(),
            sets(&[&[1, 2]])
        );
    }

    #[test]
    fn face_enumeration_is_guarded() {
        let ws = WeightSystem::from_i64(&[&[1i64][..]; 5]);
        assert!(matches!(
            enumerate_faces(&ws, &Guard::new(4)),
            Err(crate::Error::Resource { .. })
        ));
    }
}
