//! Binomial generators of the ideal of the orbit closure, built octant by
//! octant from the kernel lattice `W`, plus the coordinate pattern scan and
//! a finite-field vanishing check.

mod octant;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use octant::{extreme_rays, octant_semigroup_generators, zonotope_lattice_points, Octant};

use crate::cone::{Guard, IndexSet, WeightSystem};
use crate::error::{Error, Result};
use crate::linalg::{kernel_lattice, same_lattice};

/// `x^head - x^tail` with disjoint supports, `head` lexicographically larger.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBinomial", into = "RawBinomial")]
pub struct Binomial {
    head: Vec<u64>,
    tail: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawBinomial {
    head: Vec<u64>,
    tail: Vec<u64>,
    #[serde(default, skip_deserializing)]
    text: String,
}

impl TryFrom<RawBinomial> for Binomial {
    type Error = Error;
    fn try_from(raw: RawBinomial) -> Result<Self> {
        Binomial::new(raw.head, raw.tail)
    }
}

impl From<Binomial> for RawBinomial {
    fn from(b: Binomial) -> Self {
        RawBinomial {
            text: b.to_string(),
            head: b.head,
            tail: b.tail,
        }
    }
}

impl Binomial {
    /// Normalizes the sign; rejects overlapping supports and `head = tail`.
    pub fn new(a: Vec<u64>, b: Vec<u64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::dims(a.len(), b.len(), "binomial exponent vectors"));
        }
        if a.iter().zip(&b).any(|(x, y)| *x > 0 && *y > 0) {
            return Err(Error::Input("binomial supports overlap".into()));
        }
        if a == b {
            return Err(Error::Input("zero binomial".into()));
        }
        let (head, tail) = if a > b { (a, b) } else { (b, a) };
        Ok(Binomial { head, tail })
    }

    /// `c ↦ x^{c⁺} - x^{c⁻}`, sign-normalized.
    pub fn from_lattice_vector(c: &[BigInt]) -> Result<Self> {
        let part = |x: &BigInt| {
            x.to_u64()
                .ok_or_else(|| Error::Input(format!("exponent {x} does not fit in 64 bits")))
        };
        let mut a = Vec::with_capacity(c.len());
        let mut b = Vec::with_capacity(c.len());
        for x in c {
            if x.is_negative() {
                a.push(0);
                b.push(part(&-x)?);
            } else {
                a.push(part(x)?);
                b.push(0);
            }
        }
        Binomial::new(a, b)
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    pub fn len(&self) -> usize {
        self.head.len()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty()
    }

    /// `head - tail` as a vector of `W`.
    pub fn lattice_vector(&self) -> Vec<BigInt> {
        self.head
            .iter()
            .zip(&self.tail)
            .map(|(a, b)| BigInt::from(*a) - BigInt::from(*b))
            .collect()
    }

    /// `Σ a_i χ_i = Σ b_i χ_i`.
    pub fn is_valid_for(&self, ws: &WeightSystem) -> bool {
        self.len() == ws.len() && crate::cone::is_relation(ws, &self.lattice_vector())
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, e: &[u64]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    if first {
        f.write_str("1")?;
    }
    Ok(())
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_monomial(f, &self.head)?;
        f.write_str(" - ")?;
        fmt_monomial(f, &self.tail)
    }
}

/// The binomials of every octant generating set, merged and sorted. Octants
/// `D_I` and `D_{I^c}` are negatives of each other, so only those with the
/// first coordinate nonnegative are scanned.
pub fn binomial_generators(ws: &WeightSystem, guard: &Guard) -> Result<Vec<Binomial>> {
    let n = ws.len();
    guard.check("octant enumeration over 2^n sign patterns", n)?;
    let basis = kernel_lattice(&ws.matrix());
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let octants: Vec<Octant> = (0..IndexSet::full(n).bits() + 1)
        .filter(|bits| bits & 1 == 1)
        .map(|bits| Octant::new(IndexSet::from_bits(bits), n))
        .collect::<Result<_>>()?;
    let parts: Vec<Vec<Vec<BigInt>>> = octants
        .par_iter()
        .map(|o| octant_semigroup_generators(&basis, o, guard))
        .collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    for c in parts.into_iter().flatten() {
        let b = Binomial::from_lattice_vector(&c)?;
        if !b.is_valid_for(ws) {
            return Err(Error::Internal(format!(
                "generated binomial {b} is not a relation"
            )));
        }
        out.insert(b);
    }
    Ok(out.into_iter().collect())
}

/// True iff the lattice vectors of `binomials` span the kernel lattice of
/// `ws` over `ℤ`.
pub fn spans_kernel(binomials: &[Binomial], ws: &WeightSystem) -> bool {
    let vectors: Vec<Vec<BigInt>> = binomials.iter().map(Binomial::lattice_vector).collect();
    same_lattice(&vectors, &kernel_lattice(&ws.matrix()))
}

/// The two binomial shapes that rule out separation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum PatternForm {
    /// `x^c - 1`: the coordinates in the support never vanish.
    UnitMonomial,
    /// `x_i^c - x^b`: `x_j = 0` for any `j` in the support of `b` forces
    /// `x_i = 0`.
    PurePower {
        #[serde(with = "crate::num::serde_num::one_based")]
        index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PatternScan {
    Compatible,
    Violating {
        binomial: Binomial,
        form: PatternForm,
    },
}

impl PatternScan {
    pub fn is_compatible(&self) -> bool {
        matches!(self, PatternScan::Compatible)
    }
}

fn pure_power(e: &[u64]) -> Option<usize> {
    let mut support = e.iter().enumerate().filter(|(_, k)| **k > 0);
    let (i, _) = support.next()?;
    support.next().is_none().then_some(i)
}

/// Looks for a binomial of either violating shape, in list order. With a
/// single coordinate the separation property holds vacuously, so nothing is
/// reported.
pub fn scan_sp_patterns(binomials: &[Binomial], n: usize) -> PatternScan {
    if n <= 1 {
        return PatternScan::Compatible;
    }
    for b in binomials {
        let form = if b.head.iter().all(|&k| k == 0) || b.tail.iter().all(|&k| k == 0) {
            Some(PatternForm::UnitMonomial)
        } else {
            pure_power(&b.head)
                .or_else(|| pure_power(&b.tail))
                .map(|index| PatternForm::PurePower { index })
        };
        if let Some(form) = form {
            return PatternScan::Violating {
                binomial: b.clone(),
                form,
            };
        }
    }
    PatternScan::Compatible
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingFailure {
    pub trial: usize,
    pub binomial: Binomial,
    /// Torus point `t ∈ (𝔽_p^*)^d` of the trial.
    pub torus: Vec<u64>,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    pub evaluations: usize,
    pub failures: Vec<VanishingFailure>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Evaluates every binomial at points `x_i = χ_i(t)` of the open orbit for
/// `trials` torus points `t` drawn uniformly from `(𝔽_p^*)^d` with a seeded
/// generator. Exponents are reduced mod `p - 1`, so negative and large
/// character entries are handled exactly.
pub fn verify_vanishing(
    binomials: &[Binomial],
    ws: &WeightSystem,
    trials: usize,
    prime: u64,
    seed: u64,
) -> Result<VanishingReport> {
    if prime <= 2 || !is_prime(prime) {
        return Err(Error::Input(format!("{prime} is not an odd prime")));
    }
    if trials == 0 {
        return Err(Error::Input("at least one trial is required".into()));
    }
    if let Some(b) = binomials.iter().find(|b| b.len() != ws.len()) {
        return Err(Error::dims(ws.len(), b.len(), format!("binomial {b}")));
    }
    let order = BigInt::from(prime - 1);
    let exps: Vec<Vec<u64>> = ws
        .weights()
        .iter()
        .map(|w| {
            w.iter()
                .map(|x| x.mod_floor(&order).to_u64().expect("reduced below p"))
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let t: Vec<u64> = (0..ws.dim()).map(|_| rng.gen_range(1..prime)).collect();
        let x: Vec<u64> = exps
            .iter()
            .map(|e| {
                e.iter().zip(&t).fold(1, |acc, (&k, &tk)| {
                    mul_mod(acc, pow_mod(tk, k, prime), prime)
                })
            })
            .collect();
        let mono = |e: &[u64]| {
            e.iter().zip(&x).fold(1, |acc, (&k, &xi)| {
                mul_mod(acc, pow_mod(xi, k, prime), prime)
            })
        };
        for b in binomials {
            let value = (mono(&b.head) + prime - mono(&b.tail)) % prime;
            if value != 0 {
                failures.push(VanishingFailure {
                    trial,
                    binomial: b.clone(),
                    torus: t.clone(),
                    value,
                });
            }
        }
    }
    Ok(VanishingReport {
        trials,
        prime,
        seed,
        evaluations: trials * binomials.len(),
        failures,
    })
}
