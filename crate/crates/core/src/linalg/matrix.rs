use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::rat;

/// Dense integer matrix, row-major. Column `j` holds the character `χ_j`
/// when the matrix is built from a weight system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Input(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::dims(c, row.len(), format!("row {}", i + 1)));
            }
            m.data[i * c..(i + 1) * c].clone_from_slice(row);
        }
        Ok(m)
    }

    /// Builds the `d × n` matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(dim, columns.len())?;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::dims(dim, col.len(), format!("column {}", j + 1)));
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::dims(self.cols, v.len(), "matrix-vector product"));
        }
        Ok((0..self.rows)
            .map(|i| crate::num::dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect())
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rat).collect())
            .collect()
    }
}

/// Rank over ℚ.
pub fn rank(a: &IntMatrix) -> usize {
    rank_of_rows(&a.to_rational_rows())
}

/// Rank of a list of integer vectors.
pub fn rank_of_vectors(vectors: &[Vec<BigInt>]) -> usize {
    let rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| v.iter().map(rat).collect())
        .collect();
    rank_of_rows(&rows)
}

pub(crate) fn rank_of_rows(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A rational basis of `{x : rows · x = 0}`.
pub(crate) fn rational_nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `rows · x = rhs`; `None` when inconsistent. Free variables are set
/// to zero, so the answer is deterministic.
pub(crate) fn solve_rational(
    rows: &[Vec<BigRational>],
    rhs: &[BigRational],
    cols: usize,
) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][cols].clone();
    }
    Some(x)
}

/// Indices of the first maximal linearly independent subfamily of `vectors`.
pub fn independent_subset(vectors: &[Vec<BigInt>]) -> Vec<usize> {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<BigRational>> = (0..dim)
        .map(|r| vectors.iter().map(|v| rat(&v[r])).collect())
        .collect();
    rref(&mut m)
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Extended Euclid: `(g, x, y)` with `x a + y b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`.
///
/// Returns the nonzero rows in echelon form: pivots are positive, and every
/// entry above a pivot lies in `[0, pivot)`. Two generating sets span the
/// same lattice iff their forms coincide.
pub fn hermite_rows(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = vectors.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // gcd-combine every row below r into row r at column c.
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            if m[r][c].is_zero() {
                m.swap(r, i);
                continue;
            }
            let (g, x, y) = ext_gcd(&m[r][c], &m[i][c]);
            let p = &m[r][c] / &g;
            let q = &m[i][c] / &g;
            let (top, bottom) = {
                let a = &m[r];
                let b = &m[i];
                let top: Vec<BigInt> = a.iter().zip(b).map(|(u, v)| &x * u + &y * v).collect();
                let bottom: Vec<BigInt> = a.iter().zip(b).map(|(u, v)| &p * v - &q * u).collect();
                (top, bottom)
            };
            m[r] = top;
            m[i] = bottom;
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = m[r][c].clone();
        for i in 0..r {
            let f = m[i][c].div_floor(&pivot);
            if f.is_zero() {
                continue;
            }
            let pr = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// ℤ-basis of the integer kernel `W = {c ∈ ℤ^n : A c = 0}`.
///
/// Column operations reduce `A` to echelon form `A U = H` with `U`
/// unimodular; the columns of `U` facing the zero columns of `H` form a
/// basis of the full (saturated) kernel lattice. The basis is then put in
/// Hermite form so the output is canonical.
pub fn kernel_lattice(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (d, n) = (a.rows(), a.cols());
    // Work on columns: cols[j] = (A column j, U column j).
    let mut acol: Vec<Vec<BigInt>> = (0..n).map(|j| a.column(j)).collect();
    let mut ucol: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            e
        })
        .collect();
    let mut k = 0;
    for r in 0..d {
        if k == n {
            break;
        }
        for c in k + 1..n {
            if acol[c][r].is_zero() {
                continue;
            }
            if acol[k][r].is_zero() {
                acol.swap(k, c);
                ucol.swap(k, c);
                continue;
            }
            let (g, x, y) = ext_gcd(&acol[k][r], &acol[c][r]);
            let p = &acol[k][r] / &g;
            let q = &acol[c][r] / &g;
            let mix = |u: &[BigInt], v: &[BigInt]| -> (Vec<BigInt>, Vec<BigInt>) {
                let first = u.iter().zip(v).map(|(s, t)| &x * s + &y * t).collect();
                let second = u.iter().zip(v).map(|(s, t)| &p * t - &q * s).collect();
                (first, second)
            };
            let (ak, ac) = mix(&acol[k], &acol[c]);
            let (uk, uc) = mix(&ucol[k], &ucol[c]);
            acol[k] = ak;
            acol[c] = ac;
            ucol[k] = uk;
            ucol[c] = uc;
        }
        if !acol[k][r].is_zero() {
            k += 1;
        }
    }
    hermite_rows(&ucol[k..])
}

/// True iff the two generating sets span the same sublattice of ℤ^n.
pub fn same_lattice(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> bool {
    hermite_rows(a) == hermite_rows(b)
}

/// Solves `basis^T · y = v` over ℤ when `basis` is a Hermite form; `None`
/// when `v` is outside the lattice.
pub fn lattice_coordinates(hermite: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(hermite.len());
    for row in hermite {
        let c = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
        coords.push(q);
    }
    if rest.iter().all(Zero::is_zero) {
        Some(coords)
    } else {
        None
    }
}
