//! Binary forms and the separation property of their orbit closures: a form
//! has it exactly when some linear factor occurs with multiplicity one.
//! Multiplicities are read off an exact squarefree decomposition over ℚ,
//! which in characteristic zero agrees with the one over the closure.

mod parse;
mod poly;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use parse::parse_binary_form;
pub use poly::{yun, Poly};

use crate::error::{Error, Result};
use crate::num::{rat_to_string, serde_num};

/// `f = Σ_m h_m x^{n-m} y^m`, not identically zero, degree `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawForm", into = "RawForm")]
pub struct BinaryForm {
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    #[serde(default, skip_deserializing)]
    degree: usize,
    #[serde(with = "serde_num::rat_vec")]
    coefficients: Vec<BigRational>,
    #[serde(default, skip_deserializing)]
    text: String,
}

impl TryFrom<RawForm> for BinaryForm {
    type Error = Error;
    fn try_from(raw: RawForm) -> Result<Self> {
        BinaryForm::from_coefficients(raw.coefficients)
    }
}

impl From<BinaryForm> for RawForm {
    fn from(f: BinaryForm) -> Self {
        RawForm {
            degree: f.degree(),
            text: f.to_string(),
            coefficients: f.coeffs,
        }
    }
}

/// Product of forms as a convolution of coefficient vectors indexed by the
/// `y`-degree.
fn convolve(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn power(base: &[BigRational], e: usize) -> Vec<BigRational> {
    (0..e).fold(vec![BigRational::one()], |acc, _| convolve(&acc, base))
}

impl BinaryForm {
    /// Coefficients `h_0, …, h_n`.
    pub fn from_coefficients(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Input("a binary form needs degree at least 1".into()));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Input("the zero form has no orbit to decide".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        BinaryForm::from_coefficients(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Exponent of the largest power of `y` dividing `f`.
    pub fn y_multiplicity(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero form")
    }

    /// `f(x, 1)`.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `y^e p(x/y)` for `e = deg p ≥ 1`.
    fn rehomogenize(p: &Poly) -> Self {
        BinaryForm {
            coeffs: p.coeffs().iter().rev().cloned().collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        BinaryForm {
            coeffs: convolve(&self.coeffs, &other.coeffs),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Result<BinaryForm> {
        if c.is_zero() {
            return Err(Error::Input("scaling by zero".into()));
        }
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().map(|h| h * c).collect(),
        })
    }

    /// `f(a x + b y, c x + d y)` for `g = [[a, b], [c, d]]`.
    pub fn substitute(&self, g: &[[BigRational; 2]; 2]) -> Result<BinaryForm> {
        let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        if det.is_zero() {
            return Err(Error::Input("substitution matrix is singular".into()));
        }
        let n = self.degree();
        let first = [g[0][0].clone(), g[0][1].clone()];
        let second = [g[1][0].clone(), g[1][1].clone()];
        let mut out = vec![BigRational::zero(); n + 1];
        for (m, h) in self.coeffs.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let term = convolve(&power(&first, n - m), &power(&second, m));
            for (o, t) in out.iter_mut().zip(term) {
                *o += h * t;
            }
        }
        BinaryForm::from_coefficients(out)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, x: usize, y: usize) -> fmt::Result {
    let mut parts = Vec::new();
    for (v, e) in [("x", x), ("y", y)] {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    f.write_str(&parts.join("*"))
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (m, h) in self.coeffs.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let mag = h.abs();
            if first {
                if h.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if h.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if !mag.is_one() {
                write!(f, "{}*", rat_to_string(&mag))?;
            }
            fmt_term(f, n - m, m)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreePart {
    pub part: BinaryForm,
    pub multiplicity: usize,
}

/// `f = constant · Π part^multiplicity` with squarefree, pairwise coprime
/// parts, sorted by multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeDecomposition {
    #[serde(with = "crate::num::serde_num::rat")]
    pub constant: BigRational,
    pub parts: Vec<SquarefreePart>,
}

impl SquarefreeDecomposition {
    /// Multiplies the factors back together.
    pub fn reconstruct(&self) -> Vec<BigRational> {
        let mut acc = vec![self.constant.clone()];
        for p in &self.parts {
            acc = convolve(&acc, &power(&p.part.coeffs, p.multiplicity));
        }
        acc
    }

    /// The part of multiplicity one, if nonconstant.
    pub fn simple_part(&self) -> Option<&BinaryForm> {
        self.parts
            .iter()
            .find(|p| p.multiplicity == 1)
            .map(|p| &p.part)
    }
}

/// Squarefree decomposition of `f(x, 1)` by Yun's algorithm, rehomogenized,
/// with the power of `y` merged into the part of equal multiplicity.
pub fn squarefree_multiplicity_parts(f: &BinaryForm) -> SquarefreeDecomposition {
    let ymult = f.y_multiplicity();
    let affine = f.dehomogenize();
    let mut parts: Vec<SquarefreePart> = yun(&affine)
        .iter()
        .enumerate()
        .filter(|(_, a)| a.degree() > 0)
        .map(|(k, a)| SquarefreePart {
            part: BinaryForm::rehomogenize(a),
            multiplicity: k + 1,
        })
        .collect();
    if ymult > 0 {
        let y = BinaryForm {
            coeffs: vec![BigRational::zero(), BigRational::one()],
        };
        match parts.iter_mut().find(|p| p.multiplicity == ymult) {
            Some(p) => p.part = p.part.mul(&y),
            None => {
                parts.push(SquarefreePart {
                    part: y,
                    multiplicity: ymult,
                });
                parts.sort_by_key(|p| p.multiplicity);
            }
        }
    }
    SquarefreeDecomposition {
        constant: affine.leading(),
        parts,
    }
}

/// SP for the closure of the `SL_2`-orbit of `f`: true iff `f` has a linear
/// factor of multiplicity one over the algebraic closure.
pub fn decide_sp_binary_orbit(f: &BinaryForm) -> bool {
    squarefree_multiplicity_parts(f).simple_part().is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryVerdict {
    pub form: BinaryForm,
    pub holds: bool,
    pub decomposition: SquarefreeDecomposition,
}

impl BinaryVerdict {
    pub fn new(form: &BinaryForm) -> Self {
        let decomposition = squarefree_multiplicity_parts(form);
        BinaryVerdict {
            form: form.clone(),
            holds: decomposition.simple_part().is_some(),
            decomposition,
        }
    }

    /// Reconstruction, degree count, squarefreeness and coprimality.
    pub fn verify(&self) -> bool {
        let d = &self.decomposition;
        let degree: usize = d
            .parts
            .iter()
            .map(|p| p.multiplicity * p.part.degree())
            .sum();
        let squarefree_coprime = d.parts.iter().enumerate().all(|(i, p)| {
            let q = p.part.dehomogenize();
            let y_ok = p.part.y_multiplicity() <= 1;
            let sf = q.gcd(&q.derivative()).degree() == 0;
            let coprime = d.parts[i + 1..].iter().all(|r| {
                q.gcd(&r.part.dehomogenize()).degree() == 0
                    && (p.part.y_multiplicity() == 0 || r.part.y_multiplicity() == 0)
            });
            y_ok && sf && coprime
        });
        d.reconstruct() == self.form.coeffs
            && degree == self.form.degree()
            && squarefree_coprime
            && self.holds == d.simple_part().is_some()
    }
}
