use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{Guard, IndexSet};
use crate::error::{Error, Result};
use crate::linalg::{
    hermite_rows, kernel_lattice, lattice_coordinates, lp_feasible, rank_of_rows, rank_of_vectors,
    rational_nullspace, solve_rational, Feasibility, IntMatrix, LinearSystem,
};
use crate::num::{primitive, primitive_int, rat, to_rat_vec};

/// The sign pattern `D_I`: coordinates in `nonnegative` are `≥ 0`, the rest
/// `≤ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Octant {
    pub nonnegative: IndexSet,
    pub len: usize,
}

impl Octant {
    pub fn new(nonnegative: IndexSet, len: usize) -> Result<Self> {
        if let Some(i) = nonnegative.iter().find(|&i| i >= len) {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        Ok(Octant { nonnegative, len })
    }

    fn sign(&self, i: usize) -> i32 {
        if self.nonnegative.contains(i) {
            1
        } else {
            -1
        }
    }

    pub fn contains(&self, c: &[BigInt]) -> bool {
        c.len() == self.len
            && c.iter().enumerate().all(|(i, x)| match self.sign(i) {
                1 => !x.is_negative(),
                _ => !x.is_positive(),
            })
    }

    pub fn negated(&self) -> Octant {
        let full = IndexSet::full(self.len);
        Octant {
            nonnegative: IndexSet::from_bits(full.bits() & !self.nonnegative.bits()),
            len: self.len,
        }
    }
}

/// The octant constraints `s_i c_i ≥ 0` written in the coordinates `y` of
/// `c = Σ y_l b_l`.
fn constraint_rows(basis: &[Vec<BigInt>], octant: &Octant) -> Vec<Vec<BigRational>> {
    (0..octant.len)
        .map(|i| {
            basis
                .iter()
                .map(|b| rat(&(&b[i] * BigInt::from(octant.sign(i)))))
                .collect()
        })
        .collect()
}

fn combine_int(coeffs: &[BigInt], vectors: &[Vec<BigInt>], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Primitive extreme rays of the cone `ℚ≥0(W ∩ D_I)`, as vectors of `ℤ^n`.
///
/// Every extreme ray of the pointed cone `{y : G y ≥ 0}` in `ℚ^k` is cut
/// out by `k - 1` independent tight rows, so the scan runs over all such
/// row subsets and keeps the feasible direction of each null line.
pub fn extreme_rays(basis: &[Vec<BigInt>], octant: &Octant) -> Vec<Vec<BigInt>> {
    let k = basis.len();
    if k == 0 {
        return Vec::new();
    }
    let rows = constraint_rows(basis, octant);
    let mut rays = BTreeSet::new();
    for subset in (0..rows.len()).combinations(k - 1) {
        let tight: Vec<Vec<BigRational>> = subset.iter().map(|&r| rows[r].clone()).collect();
        if rank_of_rows(&tight) != k - 1 {
            continue;
        }
        let null = rational_nullspace(&tight, k);
        let r = primitive(&null[0]);
        for dir in [r.clone(), r.iter().map(|x| -x).collect::<Vec<_>>()] {
            let ok = rows.iter().all(|g| {
                let v: BigRational = g.iter().zip(&dir).map(|(a, b)| a * rat(b)).sum();
                !v.is_negative()
            });
            if ok {
                let c = combine_int(&dir, basis, octant.len);
                if c.iter().any(|x| !x.is_zero()) {
                    rays.insert(primitive_int(&c));
                }
            }
        }
    }
    rays.into_iter().collect()
}

/// Nonzero lattice points of `ℤ^n ∩ span(rays)` in the half-open
/// parallelepiped `{Σ s_l r_l : 0 ≤ s_l < 1}` of linearly independent rays.
///
/// The points are coset representatives of the ray sublattice inside its
/// saturation; they are enumerated through the Hermite form of the rays in
/// a basis of the saturation and then reduced into the parallelepiped.
fn parallelepiped_points(
    rays: &[Vec<BigInt>],
    guard: &Guard,
    budget: &mut u128,
) -> Result<Vec<Vec<BigInt>>> {
    let n = rays[0].len();
    let k = rays.len();
    let complement = kernel_lattice(&IntMatrix::from_rows(rays)?);
    let saturation = if complement.is_empty() {
        IntMatrix::identity(n)?.row_vecs()
    } else {
        kernel_lattice(&IntMatrix::from_rows(&complement)?)
    };
    let coords: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| {
            lattice_coordinates(&saturation, r)
                .ok_or_else(|| Error::Internal("ray outside its saturated span".into()))
        })
        .collect::<Result<_>>()?;
    let h = hermite_rows(&coords);
    if h.len() != k {
        return Err(Error::Internal("dependent rays in parallelepiped".into()));
    }
    let diag: Vec<BigInt> = (0..k).map(|l| h[l][l].clone()).collect();
    let volume = diag
        .iter()
        .try_fold(1u128, |acc, d| d.to_u128().and_then(|d| acc.checked_mul(d)))
        .unwrap_or(u128::MAX);
    *budget = budget.saturating_add(volume);
    guard.check_volume("lattice points in octant parallelepipeds", *budget)?;

    let ray_rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| rays.iter().map(|r| rat(&r[i])).collect())
        .collect();
    let mut out = Vec::new();
    let mut a = vec![BigInt::zero(); k];
    loop {
        let v = combine_int(&a, &saturation, n);
        let s = solve_rational(&ray_rows, &to_rat_vec(&v), k)
            .ok_or_else(|| Error::Internal("lattice point outside the ray span".into()))?;
        let frac: Vec<BigRational> = s.iter().map(|x| x - x.floor()).collect();
        let mut p = vec![BigRational::zero(); n];
        for (f, r) in frac.iter().zip(rays) {
            for (o, x) in p.iter_mut().zip(r) {
                *o += f * rat(x);
            }
        }
        if p.iter().any(|x| !x.is_zero()) {
            if p.iter().any(|x| !x.is_integer()) {
                return Err(Error::Internal("non-integral parallelepiped point".into()));
            }
            out.push(p.iter().map(|x| x.to_integer()).collect());
        }
        // Odometer over the box 0 ≤ a_l < diag_l.
        let mut l = 0;
        loop {
            if l == k {
                return Ok(out);
            }
            a[l] += 1;
            if a[l] < diag[l] {
                break;
            }
            a[l] = BigInt::zero();
            l += 1;
        }
    }
}

/// A finite generating set of the semigroup `W ∩ D_I`.
///
/// `basis` must span a saturated lattice, as returned by `kernel_lattice`.
/// The output consists of the primitive extreme rays together with the
/// nonzero lattice points of the half-open parallelepipeds spanned by every
/// maximal independent set of rays; by Carathéodory every point of the cone
/// lies in one such simplicial cone, and reducing modulo its rays lands in
/// the parallelepiped. All of these points lie in the zonotope of the rays.
pub fn octant_semigroup_generators(
    basis: &[Vec<BigInt>],
    octant: &Octant,
    guard: &Guard,
) -> Result<Vec<Vec<BigInt>>> {
    let rays = extreme_rays(basis, octant);
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let dim = rank_of_vectors(&rays);
    let mut out: BTreeSet<Vec<BigInt>> = rays.iter().cloned().collect();
    let mut budget = 0u128;
    for subset in (0..rays.len()).combinations(dim) {
        let chosen: Vec<Vec<BigInt>> = subset.iter().map(|&i| rays[i].clone()).collect();
        if rank_of_vectors(&chosen) != dim {
            continue;
        }
        out.extend(parallelepiped_points(&chosen, guard, &mut budget)?);
    }
    Ok(out.into_iter().collect())
}

/// Brute-force reference: every nonzero lattice point of `W ∩ D_I` inside
/// the zonotope `{Σ s_l d_l : 0 ≤ s_l ≤ 1}` of the extreme rays, found by
/// scanning the bounding box and testing each point with an LP.
pub fn zonotope_lattice_points(
    basis: &[Vec<BigInt>],
    octant: &Octant,
    guard: &Guard,
) -> Result<Vec<Vec<BigInt>>> {
    let rays = extreme_rays(basis, octant);
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let n = octant.len;
    let lo: Vec<BigInt> = (0..n)
        .map(|i| rays.iter().map(|r| r[i].clone().min(BigInt::zero())).sum())
        .collect();
    let hi: Vec<BigInt> = (0..n)
        .map(|i| rays.iter().map(|r| r[i].clone().max(BigInt::zero())).sum())
        .collect();
    let size = lo
        .iter()
        .zip(&hi)
        .try_fold(1u128, |acc, (l, h)| {
            (h - l + 1u32).to_u128().and_then(|w| acc.checked_mul(w))
        })
        .unwrap_or(u128::MAX);
    guard.check_volume("zonotope bounding box", size)?;

    let hermite = hermite_rows(basis);
    let mut out = Vec::new();
    let mut p = lo.clone();
    loop {
        if p.iter().any(|x| !x.is_zero())
            && octant.contains(&p)
            && lattice_coordinates(&hermite, &p).is_some()
            && in_zonotope(&p, &rays)?
        {
            out.push(p.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return Ok(out);
            }
            p[i] += 1;
            if p[i] <= hi[i] {
                break;
            }
            p[i] = lo[i].clone();
            i += 1;
        }
    }
}

fn in_zonotope(p: &[BigInt], rays: &[Vec<BigInt>]) -> Result<bool> {
    let k = rays.len();
    let mut sys = LinearSystem::new(k);
    for (i, x) in p.iter().enumerate() {
        sys.equal(rays.iter().map(|r| rat(&r[i])).collect(), rat(x));
    }
    for l in 0..k {
        let mut e = vec![BigRational::zero(); k];
        e[l] = BigRational::from_integer(1.into());
        sys.at_least(e.clone(), BigRational::zero());
        sys.at_least(
            e.iter().map(|x| -x).collect(),
            BigRational::from_integer((-1).into()),
        );
    }
    Ok(matches!(lp_feasible(&sys)?, Feasibility::Feasible(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int_vec;

    fn set(v: &[usize]) -> IndexSet {
        v.iter().map(|i| i - 1).collect()
    }

    #[test]
    fn single_ray_lattice() {
        let basis = vec![int_vec(&[2, -1, -1])];
        let o = Octant::new(set(&[1]), 3).unwrap();
        let g = octant_semigroup_generators(&basis, &o, &Guard::default()).unwrap();
        assert_eq!(g, vec![int_vec(&[2, -1, -1])]);
        let o = Octant::new(set(&[1, 2]), 3).unwrap();
        assert!(octant_semigroup_generators(&basis, &o, &Guard::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn trivial_lattice() {
        let o = Octant::new(set(&[1]), 2).unwrap();
        assert!(octant_semigroup_generators(&[], &o, &Guard::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn five_weight_octant() {
        let ws = crate::cone::WeightSystem::from_i64(&[
            &[1, 0, 0],
            &[1, 1, 0],
            &[0, 1, 2],
            &[0, 2, 1],
            &[1, 0, 1],
        ]);
        let basis = kernel_lattice(&ws.matrix());
        let o = Octant::new(set(&[1, 2, 3]), 5).unwrap();
        let g = octant_semigroup_generators(&basis, &o, &Guard::default()).unwrap();
        assert!(g.contains(&int_vec(&[0, 1, 1, -1, -1])));
        assert!(g.iter().all(|c| o.contains(c)));
    }

    #[test]
    fn non_unimodular_parallelepiped() {
        // The rays (1,1) and (1,-1) span an index-2 sublattice of ℤ².
        let rays = vec![int_vec(&[1, 1]), int_vec(&[1, -1])];
        let mut budget = 0;
        let pts = parallelepiped_points(&rays, &Guard::default(), &mut budget).unwrap();
        assert_eq!(pts, vec![int_vec(&[1, 0])]);
        assert_eq!(budget, 2);
    }

    #[test]
    fn negated_octant() {
        let o = Octant::new(set(&[1, 3]), 3).unwrap();
        assert_eq!(o.negated().nonnegative, set(&[2]));
    }
}
