//! Exact feasibility for systems `B x = b, C x ≥ c` with free variables.
//!
//! Phase-one simplex over ℚ with Bland's rule. When the system is
//! infeasible the phase-one duals give multipliers `(z, y)`, `y ≥ 0`, with
//! `zᵀB + yᵀC = 0` and `zᵀb + yᵀc > 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{primitive, rat};

/// One linear constraint `coeffs · x (=|≥) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[BigInt], rhs: &BigInt) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(rat).collect(),
            rhs: rat(rhs),
        }
    }

    fn value(&self, x: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            ..Default::default()
        }
    }

    pub fn equal(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) -> &mut Self {
        self.equalities.push(Constraint::new(coeffs, rhs));
        self
    }

    pub fn at_least(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) -> &mut Self {
        self.inequalities.push(Constraint::new(coeffs, rhs));
        self
    }

    fn validate(&self) -> Result<()> {
        for (kind, list) in [
            ("equality", &self.equalities),
            ("inequality", &self.inequalities),
        ] {
            for (i, c) in list.iter().enumerate() {
                if c.coeffs.len() != self.num_vars {
                    return Err(Error::dims(
                        self.num_vars,
                        c.coeffs.len(),
                        format!("{kind} {}", i + 1),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_solution(&self, x: &[BigRational]) -> bool {
        x.len() == self.num_vars
            && self.equalities.iter().all(|c| c.value(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.value(x) >= c.rhs)
    }
}

/// Farkas multipliers: `equalities[i]` for the equality rows (free sign) and
/// `inequalities[i] ≥ 0` for the inequality rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub equalities: Vec<BigRational>,
    pub inequalities: Vec<BigRational>,
}

impl FarkasCertificate {
    /// Concatenated multiplier vector, equalities first.
    pub fn to_vec(&self) -> Vec<BigRational> {
        self.equalities
            .iter()
            .chain(&self.inequalities)
            .cloned()
            .collect()
    }

    /// Checks `y ≥ 0`, `zᵀB + yᵀC = 0` and `zᵀb + yᵀc > 0`.
    pub fn refutes(&self, sys: &LinearSystem) -> bool {
        if self.equalities.len() != sys.equalities.len()
            || self.inequalities.len() != sys.inequalities.len()
            || self.inequalities.iter().any(Signed::is_negative)
        {
            return false;
        }
        let mut combo = vec![BigRational::zero(); sys.num_vars];
        let mut rhs = BigRational::zero();
        let rows = sys
            .equalities
            .iter()
            .zip(&self.equalities)
            .chain(sys.inequalities.iter().zip(&self.inequalities));
        for (c, m) in rows {
            if m.is_zero() {
                continue;
            }
            for (acc, a) in combo.iter_mut().zip(&c.coeffs) {
                *acc += m * a;
            }
            rhs += m * &c.rhs;
        }
        combo.iter().all(Zero::is_zero) && rhs.is_positive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<BigRational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides feasibility of `sys` exactly. Deterministic for a fixed input.
pub fn lp_feasible(sys: &LinearSystem) -> Result<Feasibility> {
    sys.validate()?;
    let result = Tableau::build(sys).solve(sys);
    let ok = match &result {
        Feasibility::Feasible(x) => sys.is_solution(x),
        Feasibility::Infeasible(cert) => cert.refutes(sys),
    };
    if !ok {
        return Err(Error::Internal(
            "simplex produced an object that does not verify".into(),
        ));
    }
    Ok(result)
}

/// Dense phase-one tableau. Columns: `x⁺_j, x⁻_j` for each free variable,
/// one surplus per inequality, one artificial per row, then the right-hand
/// side.
struct Tableau {
    rows: Vec<Vec<BigRational>>,
    /// Reduced costs of the phase-one objective; last entry is `-objective`.
    cost: Vec<BigRational>,
    basis: Vec<usize>,
    /// `±1`: rows were negated to make the right-hand side nonnegative.
    flips: Vec<bool>,
    n_struct: usize,
}

impl Tableau {
    fn build(sys: &LinearSystem) -> Self {
        let n = sys.num_vars;
        let n_eq = sys.equalities.len();
        let m = n_eq + sys.inequalities.len();
        let n_struct = 2 * n + sys.inequalities.len();
        let width = n_struct + m + 1;
        let mut rows = Vec::with_capacity(m);
        let mut flips = Vec::with_capacity(m);
        for (i, c) in sys.equalities.iter().chain(&sys.inequalities).enumerate() {
            let mut row = vec![BigRational::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[2 * j] = a.clone();
                row[2 * j + 1] = -a.clone();
            }
            if i >= n_eq {
                row[2 * n + (i - n_eq)] = -BigRational::one();
            }
            row[width - 1] = c.rhs.clone();
            let flip = c.rhs.is_negative();
            if flip {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[n_struct + i] = BigRational::one();
            rows.push(row);
            flips.push(flip);
        }
        let mut cost = vec![BigRational::zero(); width];
        for row in &rows {
            for j in (0..n_struct).chain(std::iter::once(width - 1)) {
                cost[j] -= &row[j];
            }
        }
        Tableau {
            rows,
            cost,
            basis: (n_struct..n_struct + m).collect(),
            flips,
            n_struct,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn solve(mut self, sys: &LinearSystem) -> Feasibility {
        let m = self.rows.len();
        let width = self.cost.len();
        // Bland: lowest-index column with negative reduced cost enters.
        while let Some(enter) = (0..width - 1).find(|&j| self.cost[j].is_negative()) {
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..m {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][width - 1] / a;
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Phase one is bounded below by zero, so a leaving row exists.
            let (r, _) = leave.expect("phase-one objective is bounded");
            self.pivot(r, enter);
        }

        let objective = -self.cost[width - 1].clone();
        let n = sys.num_vars;
        if objective.is_zero() {
            let mut values = vec![BigRational::zero(); self.n_struct];
            for (i, &b) in self.basis.iter().enumerate() {
                if b < self.n_struct {
                    values[b] = self.rows[i][width - 1].clone();
                }
            }
            let x = (0..n)
                .map(|j| &values[2 * j] - &values[2 * j + 1])
                .collect();
            return Feasibility::Feasible(x);
        }

        // Artificial column i has cost 1, so its reduced cost is 1 - π_i.
        let mut multipliers: Vec<BigRational> = (0..m)
            .map(|i| {
                let pi = BigRational::one() - &self.cost[self.n_struct + i];
                if self.flips[i] {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        let scaled = primitive(&multipliers);
        multipliers = scaled.iter().map(rat).collect();
        let n_eq = sys.equalities.len();
        let inequalities = multipliers.split_off(n_eq);
        Feasibility::Infeasible(FarkasCertificate {
            equalities: multipliers,
            inequalities,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn r(v: i64) -> BigRational {
        rat(&int(v))
    }

    #[test]
    fn zero_is_feasible() {
        let mut sys = LinearSystem::new(1);
        sys.at_least(vec![r(1)], r(0)).equal(vec![r(1)], r(0));
        assert_eq!(
            lp_feasible(&sys).unwrap(),
            Feasibility::Feasible(vec![r(0)])
        );
    }

    #[test]
    fn contradictory_bounds_give_unit_certificate() {
        let mut sys = LinearSystem::new(1);
        sys.at_least(vec![r(1)], r(1)).at_least(vec![r(-1)], r(0));
        match lp_feasible(&sys).unwrap() {
            Feasibility::Infeasible(cert) => {
                assert_eq!(cert.to_vec(), vec![r(1), r(1)]);
                assert!(cert.refutes(&sys));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn convex_combination() {
        // (1,1) = λ1 (2,0) + λ2 (0,2), λ ≥ 0
        let mut sys = LinearSystem::new(2);
        sys.equal(vec![r(2), r(0)], r(1))
            .equal(vec![r(0), r(2)], r(1))
            .at_least(vec![r(1), r(0)], r(0))
            .at_least(vec![r(0), r(1)], r(0));
        let half = BigRational::new(int(1), int(2));
        assert_eq!(
            lp_feasible(&sys).unwrap(),
            Feasibility::Feasible(vec![half.clone(), half])
        );
    }

    #[test]
    fn malformed_dimensions() {
        let mut sys = LinearSystem::new(2);
        sys.at_least(vec![r(1)], r(0));
        assert!(matches!(
            lp_feasible(&sys),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn empty_system_is_feasible() {
        let sys = LinearSystem::new(3);
        assert_eq!(
            lp_feasible(&sys).unwrap(),
            Feasibility::Feasible(vec![r(0), r(0), r(0)])
        );
    }

    #[test]
    fn redundant_equalities() {
        let mut sys = LinearSystem::new(2);
        sys.equal(vec![r(1), r(1)], r(2))
            .equal(vec![r(2), r(2)], r(4))
            .at_least(vec![r(1), r(-1)], r(0));
        assert!(lp_feasible(&sys).unwrap().is_feasible());
        sys.equal(vec![r(1), r(1)], r(3));
        assert!(!lp_feasible(&sys).unwrap().is_feasible());
    }
}
