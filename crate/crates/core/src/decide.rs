//! The six deciders (affine or projective, SP, WSP or SSP) and the
//! certificates they emit.
//!
//! Every verdict carries a certificate that [`Verdict::verify`] re-checks by
//! exact arithmetic against the input weights. Projective verdicts are the
//! affine verdicts of the homogenized system, so their functionals have
//! `d + 1` entries, the last one being the constant term.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{
    edge_test, homogenize, is_relation, is_strictly_convex, minimal_face_with_evidence, ConeFace,
    EdgeTest, FaceSeparator, Guard, Implication, IndexSet, MinimalFace, Pointedness, WeightSystem,
};
use crate::error::{Error, Result};
use crate::linalg::{
    determinant, independent_subset, kernel_lattice, solve_rational, ConeMembership,
};
use crate::num::{combine, dot_rat, is_zero_vec, serde_num, to_rat_vec};
use crate::strata::{ssp_coordinate_witness, CoordinateWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Property {
    Sp,
    Wsp,
    Ssp,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::Sp, Property::Wsp, Property::Ssp];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Sp => "SP",
            Property::Wsp => "WSP",
            Property::Ssp => "SSP",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Affine,
    Projective,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Affine => "affine",
            Mode::Projective => "projective",
        })
    }
}

/// Which edge condition failed: `χ_i` or `-χ_i` in the cone of the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

/// A point of the stratum `face` with `x_zero = 0` and `x_nonzero ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumPoint {
    #[serde(with = "serde_num::one_based")]
    pub zero: usize,
    #[serde(with = "serde_num::one_based")]
    pub nonzero: usize,
    pub face: ConeFace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A single coordinate: there is no pair of independent linear forms.
    Vacuous,
    /// Both edge conditions hold for every index, each with a separating
    /// functional.
    Edges { tests: Vec<EdgeTest> },
    /// `±χ_index = Σ coefficients_k χ_k` over the other characters, and the
    /// coordinate implication read off that relation.
    NotAnEdge {
        #[serde(with = "serde_num::one_based")]
        index: usize,
        side: Side,
        #[serde(with = "serde_num::rat_vec")]
        coefficients: Vec<BigRational>,
        implication: Implication,
    },
    /// A nonnegative relation among nonzero characters: `K` contains a line.
    ContainsLine {
        #[serde(with = "serde_num::int_vec")]
        relation: Vec<BigInt>,
    },
    /// `K` is pointed and every pair of characters is split by some face.
    DistinctFaces {
        #[serde(with = "serde_num::int_vec")]
        functional: Vec<BigInt>,
        separators: Vec<FaceSeparator>,
    },
    /// Two characters with the same minimal face, with the implications in
    /// both directions.
    SharedFace {
        #[serde(with = "serde_num::one_based")]
        first: usize,
        #[serde(with = "serde_num::one_based")]
        second: usize,
        face: IndexSet,
        implications: Vec<Implication>,
    },
    /// The weight matrix has a nonzero maximal minor on `rows`.
    Independent {
        #[serde(
            with = "serde_num::opt_rat_vec",
            default,
            skip_serializing_if = "Option::is_none"
        )]
        cone_functional: Option<Vec<BigRational>>,
        #[serde(with = "serde_num::one_based_vec")]
        rows: Vec<usize>,
        #[serde(with = "serde_num::int")]
        minor: BigInt,
    },
    /// A nonzero kernel vector, with a coordinate witness when one was
    /// computed.
    Dependent {
        #[serde(with = "serde_num::int_vec")]
        relation: Vec<BigInt>,
        #[serde(
            with = "serde_num::opt_rat_vec",
            default,
            skip_serializing_if = "Option::is_none"
        )]
        cone_functional: Option<Vec<BigRational>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<CoordinateWitness>,
    },
    /// One stratum point per ordered (SP) or unordered (WSP) pair.
    Strata { points: Vec<StratumPoint> },
    /// A vanishing pattern shared by every listed stratum: `x_vanishing = 0`
    /// forces `x_forced = 0`, in both directions when `mutual`.
    StrataPattern {
        #[serde(with = "serde_num::one_based")]
        vanishing: usize,
        #[serde(with = "serde_num::one_based")]
        forced: usize,
        mutual: bool,
        faces: Vec<ConeFace>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub mode: Mode,
    pub holds: bool,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

const PROJECTIVE_NOTE: &str = "functionals act on (χ, 1); the last entry is the constant term";

impl Verdict {
    fn new(property: Property, mode: Mode, holds: bool, certificate: Certificate) -> Self {
        Verdict {
            property,
            mode,
            holds,
            certificate,
            notes: Vec::new(),
        }
    }

    fn vacuous(property: Property, mode: Mode) -> Self {
        let mut v = Verdict::new(property, mode, true, Certificate::Vacuous);
        v.notes
            .push("single coordinate: no pair of independent linear forms".into());
        v
    }

    fn projective(mut self) -> Self {
        self.mode = Mode::Projective;
        if !matches!(self.certificate, Certificate::Vacuous) {
            self.notes.push(PROJECTIVE_NOTE.into());
        }
        self
    }

    /// The ordered coordinate pair `(a, b)` behind a failure, meaning
    /// `x_a = 0` forces `x_b = 0` (in both directions for WSP).
    pub fn witness_pair(&self) -> Option<(usize, usize)> {
        match &self.certificate {
            Certificate::NotAnEdge { implication, .. } => {
                Some((implication.vanishing, implication.forced))
            }
            Certificate::SharedFace { first, second, .. } => Some((*first, *second)),
            Certificate::StrataPattern {
                vanishing, forced, ..
            } => Some((*vanishing, *forced)),
            Certificate::ContainsLine { relation } => {
                let mut support = relation.iter().enumerate().filter(|(_, c)| c.is_positive());
                let a = support.next()?.0;
                let b = support.next()?.0;
                Some((a, b))
            }
            Certificate::Dependent { witness, .. } => witness.as_ref().map(|w| w.pair),
            _ => None,
        }
    }

    /// Re-checks the certificate against `ws` (homogenized first in
    /// projective mode).
    pub fn verify(&self, ws: &WeightSystem) -> Result<()> {
        let target = match self.mode {
            Mode::Affine => ws.clone(),
            Mode::Projective => homogenize(ws),
        };
        if check_certificate(self.property, self.holds, &self.certificate, &target) {
            Ok(())
        } else {
            Err(Error::Internal(format!(
                "{} ({}) certificate does not verify",
                self.property, self.mode
            )))
        }
    }
}

fn check_certificate(
    property: Property,
    holds: bool,
    cert: &Certificate,
    ws: &WeightSystem,
) -> bool {
    let n = ws.len();
    match cert {
        Certificate::Vacuous => holds && n == 1 && property != Property::Ssp,
        Certificate::Edges { tests } => {
            holds
                && property == Property::Sp
                && tests.len() == n
                && tests.iter().enumerate().all(|(k, t)| {
                    let v = ws.weight(k).to_vec();
                    let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
                    let others = ws.others(k);
                    t.index == k
                        && !t.positive.membership.is_inside()
                        && !t.negative.membership.is_inside()
                        && t.positive.membership.verify(&v, &others)
                        && t.negative.membership.verify(&neg, &others)
                })
        }
        Certificate::NotAnEdge {
            index,
            side,
            coefficients,
            implication,
        } => {
            let i = *index;
            if holds || property != Property::Sp || i >= n || coefficients.len() != n {
                return false;
            }
            let target = match side {
                Side::Positive => to_rat_vec(ws.weight(i)),
                Side::Negative => ws.weight(i).iter().map(|x| BigRational::from(-x)).collect(),
            };
            coefficients.iter().all(|c| !c.is_negative())
                && coefficients[i].is_zero()
                && combine(coefficients, ws.weights(), ws.dim()) == target
                && implication.verify(ws)
                && (implication.vanishing == i || implication.forced == i)
        }
        Certificate::ContainsLine { relation } => {
            !holds
                && property == Property::Wsp
                && Pointedness::NotPointed {
                    relation: relation.clone(),
                }
                .verify(ws)
        }
        Certificate::DistinctFaces {
            functional,
            separators,
        } => {
            holds
                && property == Property::Wsp
                && Pointedness::Pointed {
                    functional: functional.clone(),
                }
                .verify(ws)
                && separators.iter().all(|s| s.verify(ws))
                && (0..n).all(|i| {
                    (i + 1..n).all(|j| {
                        separators.iter().any(|s| {
                            (s.contained, s.excluded) == (i, j)
                                || (s.contained, s.excluded) == (j, i)
                        })
                    })
                })
        }
        Certificate::SharedFace {
            first,
            second,
            face,
            implications,
        } => {
            let (i, j) = (*first, *second);
            !holds
                && property == Property::Wsp
                && i != j
                && face.contains(i)
                && face.contains(j)
                && implications.iter().all(|m| m.verify(ws))
                && implications
                    .iter()
                    .any(|m| (m.vanishing, m.forced) == (i, j))
                && implications
                    .iter()
                    .any(|m| (m.vanishing, m.forced) == (j, i))
        }
        Certificate::Independent {
            cone_functional,
            rows,
            minor,
        } => {
            let mut sorted = rows.clone();
            sorted.sort_unstable();
            sorted.dedup();
            holds
                && property == Property::Ssp
                && sorted.len() == n
                && rows.len() == n
                && rows.iter().all(|&r| r < ws.dim())
                && !minor.is_zero()
                && {
                    let sub: Vec<Vec<BigInt>> = rows
                        .iter()
                        .map(|&r| ws.weights().iter().map(|w| w[r].clone()).collect())
                        .collect();
                    determinant(&sub) == *minor
                }
                && cone_functional
                    .as_ref()
                    .is_none_or(|u| is_cone_functional(ws, u))
        }
        Certificate::Dependent {
            relation,
            cone_functional,
            witness,
        } => {
            !holds
                && property == Property::Ssp
                && relation.len() == n
                && !is_zero_vec(relation)
                && is_relation(ws, relation)
                && cone_functional
                    .as_ref()
                    .is_none_or(|u| is_cone_functional(ws, u))
                && witness.as_ref().is_none_or(|w| w.verify(ws))
        }
        Certificate::Strata { points } => {
            let ordered = match property {
                Property::Sp => true,
                Property::Wsp => false,
                Property::Ssp => return false,
            };
            holds
                && points.iter().all(|p| {
                    p.zero < n
                        && p.nonzero < n
                        && p.face.verify(ws)
                        && !p.face.indices.contains(p.zero)
                        && p.face.indices.contains(p.nonzero)
                })
                && (0..n).all(|a| {
                    (0..n).all(|b| {
                        a == b
                            || (!ordered && a > b)
                            || points.iter().any(|p| {
                                (p.zero, p.nonzero) == (a, b)
                                    || (!ordered && (p.zero, p.nonzero) == (b, a))
                            })
                    })
                })
        }
        Certificate::StrataPattern {
            vanishing,
            forced,
            mutual,
            faces,
        } => {
            let (a, b) = (*vanishing, *forced);
            !holds
                && property != Property::Ssp
                && *mutual == (property == Property::Wsp)
                && a < n
                && b < n
                && a != b
                && faces.iter().any(|f| f.indices == IndexSet::full(n))
                && faces.iter().all(|f| {
                    f.verify(ws)
                        && if *mutual {
                            f.indices.contains(a) == f.indices.contains(b)
                        } else {
                            f.indices.contains(a) || !f.indices.contains(b)
                        }
                })
        }
    }
}

fn is_cone_functional(ws: &WeightSystem, u: &[BigRational]) -> bool {
    u.len() == ws.dim() && ws.weights().iter().all(|w| dot_rat(u, w).is_one())
}

fn lcm_of_denominators(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

fn first_other(i: usize) -> usize {
    if i == 0 {
        1
    } else {
        0
    }
}

/// Builds the failure certificate for an edge condition from the cone
/// coefficients of `±χ_i` over the other characters.
fn not_an_edge(
    ws: &WeightSystem,
    i: usize,
    side: Side,
    membership: &ConeMembership,
) -> Result<Certificate> {
    let ConeMembership::Inside { coefficients } = membership else {
        return Err(Error::Internal(
            "edge condition failed without coefficients".into(),
        ));
    };
    let mut full = coefficients.clone();
    full.insert(i, BigRational::zero());
    let l = lcm_of_denominators(&full);
    let c: Vec<BigInt> = full
        .iter()
        .map(|x| (x * BigRational::from(l.clone())).to_integer())
        .collect();
    let implication = match side {
        // l·χ_i = Σ c_k χ_k: x_j = 0 with c_j > 0 forces x_i = 0.
        Side::Positive => match c.iter().position(Signed::is_positive) {
            Some(j) => Implication::new(j, i, l, c),
            None => {
                // χ_i = 0, so x_i never vanishes.
                let mut e = vec![BigInt::zero(); ws.len()];
                e[i] = BigInt::one();
                Implication::new(i, first_other(i), BigInt::zero(), e)
            }
        },
        // l·χ_i + Σ c_k χ_k = 0: x_i never vanishes.
        Side::Negative => {
            let mut c = c;
            c[i] = l;
            Implication::new(i, first_other(i), BigInt::zero(), c)
        }
    };
    Ok(Certificate::NotAnEdge {
        index: i,
        side,
        coefficients: full,
        implication,
    })
}

fn sp(ws: &WeightSystem) -> Result<Verdict> {
    let n = ws.len();
    if n == 1 {
        return Ok(Verdict::vacuous(Property::Sp, Mode::Affine));
    }
    let mut tests = Vec::with_capacity(n);
    for i in 0..n {
        let t = edge_test(ws, i)?;
        for (cond, side) in [(&t.positive, Side::Positive), (&t.negative, Side::Negative)] {
            if !cond.holds {
                let cert = not_an_edge(ws, i, side, &cond.membership)?;
                return Ok(Verdict::new(Property::Sp, Mode::Affine, false, cert));
            }
        }
        tests.push(t);
    }
    Ok(Verdict::new(
        Property::Sp,
        Mode::Affine,
        true,
        Certificate::Edges { tests },
    ))
}

fn wsp(ws: &WeightSystem) -> Result<Verdict> {
    let n = ws.len();
    if n == 1 {
        return Ok(Verdict::vacuous(Property::Wsp, Mode::Affine));
    }
    let functional = match is_strictly_convex(ws)? {
        Pointedness::NotPointed { relation } => {
            return Ok(Verdict::new(
                Property::Wsp,
                Mode::Affine,
                false,
                Certificate::ContainsLine { relation },
            ))
        }
        Pointedness::Pointed { functional } => functional,
    };
    let faces: Vec<MinimalFace> = (0..n)
        .map(|i| minimal_face_with_evidence(ws, i))
        .collect::<Result<_>>()?;
    let missing = || Error::Internal("minimal face evidence is incomplete".into());
    let mut separators = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if faces[i].members == faces[j].members {
                let forward = faces[j]
                    .memberships
                    .iter()
                    .find(|m| m.vanishing == i)
                    .ok_or_else(missing)?;
                let backward = faces[i]
                    .memberships
                    .iter()
                    .find(|m| m.vanishing == j)
                    .ok_or_else(missing)?;
                return Ok(Verdict::new(
                    Property::Wsp,
                    Mode::Affine,
                    false,
                    Certificate::SharedFace {
                        first: i,
                        second: j,
                        face: faces[i].members,
                        implications: vec![forward.clone(), backward.clone()],
                    },
                ));
            }
            let sep = faces[i]
                .separators
                .iter()
                .find(|s| s.excluded == j)
                .or_else(|| faces[j].separators.iter().find(|s| s.excluded == i))
                .ok_or_else(missing)?;
            separators.push(sep.clone());
        }
    }
    Ok(Verdict::new(
        Property::Wsp,
        Mode::Affine,
        true,
        Certificate::DistinctFaces {
            functional,
            separators,
        },
    ))
}

/// Solves `u·χ_i = 1` for all `i`. On failure returns a kernel vector with
/// nonzero coordinate sum: scaling by `s` multiplies `x^c` by `s^Σc`, so the
/// orbit closure is not stable under dilation.
pub fn cone_functional(ws: &WeightSystem) -> std::result::Result<Vec<BigRational>, Vec<BigInt>> {
    let rows: Vec<Vec<BigRational>> = ws.weights().iter().map(|w| to_rat_vec(w)).collect();
    let ones = vec![BigRational::one(); ws.len()];
    if let Some(u) = solve_rational(&rows, &ones, ws.dim()) {
        return Ok(u);
    }
    let basis = kernel_lattice(&ws.matrix());
    Err(basis
        .into_iter()
        .find(|c| !c.iter().sum::<BigInt>().is_zero())
        .expect("the all-ones vector lies outside the row space"))
}

fn ssp(ws: &WeightSystem, guard: &Guard, u: Vec<BigRational>) -> Result<Verdict> {
    let n = ws.len();
    let rows: Vec<Vec<BigInt>> = (0..ws.dim())
        .map(|r| ws.weights().iter().map(|w| w[r].clone()).collect())
        .collect();
    let basis_rows = independent_subset(&rows);
    if basis_rows.len() == n {
        let sub: Vec<Vec<BigInt>> = basis_rows.iter().map(|&r| rows[r].clone()).collect();
        let minor = determinant(&sub);
        return Ok(Verdict::new(
            Property::Ssp,
            Mode::Affine,
            true,
            Certificate::Independent {
                cone_functional: Some(u),
                rows: basis_rows,
                minor,
            },
        ));
    }
    let relation = kernel_lattice(&ws.matrix())
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("rank deficient matrix with trivial kernel".into()))?;
    let mut notes = Vec::new();
    let witness = if n <= guard.max_n {
        ssp_coordinate_witness(ws, guard)?
    } else {
        notes.push(format!(
            "coordinate witness skipped: n = {n} exceeds the face guard"
        ));
        None
    };
    let mut v = Verdict::new(
        Property::Ssp,
        Mode::Affine,
        false,
        Certificate::Dependent {
            relation,
            cone_functional: Some(u),
            witness,
        },
    );
    v.notes = notes;
    Ok(v)
}

/// SP for the affine orbit closure: every `±χ_i` avoids the cone of the
/// other characters.
pub fn decide_affine_sp(ws: &WeightSystem) -> Result<Verdict> {
    sp(ws)
}

/// WSP for the affine orbit closure: `K` pointed and minimal faces pairwise
/// distinct.
pub fn decide_affine_wsp(ws: &WeightSystem) -> Result<Verdict> {
    wsp(ws)
}

/// SSP for an affine orbit closure that is a cone: holds iff the characters
/// are linearly independent. Refuses with [`Error::Hypothesis`] otherwise.
pub fn decide_affine_ssp(ws: &WeightSystem, guard: &Guard) -> Result<Verdict> {
    match cone_functional(ws) {
        Ok(u) => {
            let mut v = ssp(ws, guard, u)?;
            v.notes.insert(0, "SSP cone hypothesis verified".into());
            Ok(v)
        }
        Err(relation) => Err(Error::Hypothesis {
            message: "the orbit closure is not a cone (no u with u·χ_i = 1 for all i)".into(),
            relation,
        }),
    }
}

pub fn decide_projective_sp(ws: &WeightSystem) -> Result<Verdict> {
    Ok(sp(&homogenize(ws))?.projective())
}

pub fn decide_projective_wsp(ws: &WeightSystem) -> Result<Verdict> {
    Ok(wsp(&homogenize(ws))?.projective())
}

/// SSP in projective space: the characters are affinely independent.
pub fn decide_projective_ssp(ws: &WeightSystem, guard: &Guard) -> Result<Verdict> {
    let h = homogenize(ws);
    let mut u = vec![BigRational::zero(); h.dim()];
    u[ws.dim()] = BigRational::one();
    Ok(ssp(&h, guard, u)?.projective())
}

pub fn decide(ws: &WeightSystem, property: Property, mode: Mode, guard: &Guard) -> Result<Verdict> {
    match (mode, property) {
        (Mode::Affine, Property::Sp) => decide_affine_sp(ws),
        (Mode::Affine, Property::Wsp) => decide_affine_wsp(ws),
        (Mode::Affine, Property::Ssp) => decide_affine_ssp(ws, guard),
        (Mode::Projective, Property::Sp) => decide_projective_sp(ws),
        (Mode::Projective, Property::Wsp) => decide_projective_wsp(ws),
        (Mode::Projective, Property::Ssp) => decide_projective_ssp(ws, guard),
    }
}
