use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense univariate polynomial over ℚ, coefficients from the constant term
/// up, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Poly(self.0.iter().map(|c| c / &lc).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Self {
        let len = self.0.len().max(other.0.len());
        Poly::new(
            (0..len)
                .map(|k| {
                    let a = self.0.get(k).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.0.get(k).cloned().unwrap_or_else(BigRational::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dl = divisor.leading();
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Yun's squarefree decomposition: monic, pairwise coprime, squarefree
/// `a_1, a_2, …` with `p = lc(p)·Π a_i^i`. Entry `k` holds `a_{k+1}`.
pub fn yun(p: &Poly) -> Vec<Poly> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let dp = p.derivative();
    let c = p.gcd(&dp);
    let mut w = p.div_rem(&c).0;
    let y = dp.div_rem(&c).0;
    let mut z = y.sub(&w.derivative());
    let mut parts = Vec::new();
    while w.degree() > 0 {
        let g = w.gcd(&z);
        w = w.div_rem(&g).0;
        let y = z.div_rem(&g).0;
        z = y.sub(&w.derivative());
        parts.push(g);
    }
    parts
}
