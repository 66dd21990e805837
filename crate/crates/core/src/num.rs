//! Small exact-arithmetic helpers shared by every module, plus the serde
//! adapters used to write big integers and rationals into JSON reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

pub fn int_vec(values: &[i64]) -> Vec<BigInt> {
    values.iter().copied().map(BigInt::from).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigRational], b: &[BigInt]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * rat(y))
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector (entries coprime). The zero vector maps to zero.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * rat(&lcm)).to_integer()).collect();
    primitive_int(&scaled)
}

pub fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(rat).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `Σ coeffs[k] * vectors[k]` over the rationals.
pub fn combine(coeffs: &[BigRational], vectors: &[Vec<BigInt>], dim: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); dim];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * rat(x);
        }
    }
    out
}

pub fn rat_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            if let Some((whole, frac)) = s.split_once('.') {
                let digits = frac.len() as u32;
                let neg = whole.trim_start().starts_with('-');
                let whole: BigInt = if whole.is_empty() || whole == "-" {
                    BigInt::zero()
                } else {
                    whole.parse().ok()?
                };
                let frac: BigInt = if frac.is_empty() {
                    BigInt::zero()
                } else {
                    frac.parse().ok()?
                };
                let scale = BigInt::from(10).pow(digits);
                let mag = whole.abs() * &scale + frac;
                let numer = if neg { -mag } else { mag };
                return Some(BigRational::new(numer, scale));
            }
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }
}

pub(crate) fn fmt_int_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub(crate) fn fmt_rat_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(rat_to_string).collect();
    format!("({})", parts.join(","))
}

/// Serde adapters. Integers go out as JSON numbers when they fit in `i64`
/// and as decimal strings otherwise; rationals always go out as `"p/q"`
/// strings (or `"p"` when integral).
pub mod serde_num {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum IntRepr {
        Num(i64),
        Str(String),
    }

    pub(crate) fn ser_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub(crate) fn de_int<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match IntRepr::deserialize(d)? {
            IntRepr::Num(x) => Ok(BigInt::from(x)),
            IntRepr::Str(s) => s.trim().parse().map_err(D::Error::custom),
        }
    }

    struct IntRef<'a>(&'a BigInt);
    impl Serialize for IntRef<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ser_int(self.0, s)
        }
    }
    struct IntOwned(BigInt);
    impl<'de> Deserialize<'de> for IntOwned {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            de_int(d).map(IntOwned)
        }
    }

    struct RatRef<'a>(&'a BigRational);
    impl Serialize for RatRef<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&rat_to_string(self.0))
        }
    }
    struct RatOwned(BigRational);
    impl<'de> Deserialize<'de> for RatOwned {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            #[derive(Deserialize)]
            #[serde(untagged)]
            enum Repr {
                Num(i64),
                Str(String),
            }
            match Repr::deserialize(d)? {
                Repr::Num(x) => Ok(RatOwned(BigRational::from_integer(x.into()))),
                Repr::Str(s) => parse_rat(&s)
                    .map(RatOwned)
                    .ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}"))),
            }
        }
    }

    pub mod int {
        use super::*;
        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            ser_int(v, s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            de_int(d)
        }
    }

    pub mod int_vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(IntRef))
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let v: Vec<IntOwned> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|x| x.0).collect())
        }
    }

    pub mod int_vec_vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
            struct Row<'a>(&'a [BigInt]);
            impl Serialize for Row<'_> {
                fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                    s.collect_seq(self.0.iter().map(IntRef))
                }
            }
            s.collect_seq(v.iter().map(|r| Row(r)))
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
            let v: Vec<Vec<IntOwned>> = Vec::deserialize(d)?;
            Ok(v.into_iter()
                .map(|r| r.into_iter().map(|x| x.0).collect())
                .collect())
        }
    }

    pub mod rat {
        use super::*;
        pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
            RatRef(v).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
            RatOwned::deserialize(d).map(|x| x.0)
        }
    }

    pub mod rat_vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(RatRef))
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            let v: Vec<RatOwned> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|x| x.0).collect())
        }
    }

    pub mod opt_rat_vec {
        use super::*;
        pub fn serialize<S: Serializer>(
            v: &Option<Vec<BigRational>>,
            s: S,
        ) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.collect_seq(v.iter().map(RatRef)),
                None => s.serialize_none(),
            }
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<Vec<BigRational>>, D::Error> {
            let v: Option<Vec<RatOwned>> = Option::deserialize(d)?;
            Ok(v.map(|v| v.into_iter().map(|x| x.0).collect()))
        }
    }

    /// 0-based indices in memory, 1-based in every serialized artifact.
    pub mod one_based {
        use super::*;
        pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_u64(*v as u64 + 1)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
            let v = u64::deserialize(d)?;
            if v == 0 {
                return Err(D::Error::custom("indices are 1-based"));
            }
            Ok(v as usize - 1)
        }
    }

    pub mod one_based_pair {
        use super::*;
        pub fn serialize<S: Serializer>(v: &(usize, usize), s: S) -> Result<S::Ok, S::Error> {
            (v.0 as u64 + 1, v.1 as u64 + 1).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(usize, usize), D::Error> {
            let (a, b) = <(u64, u64)>::deserialize(d)?;
            if a == 0 || b == 0 {
                return Err(D::Error::custom("indices are 1-based"));
            }
            Ok((a as usize - 1, b as usize - 1))
        }
    }

    pub mod one_based_vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| *x as u64 + 1))
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
            let v: Vec<u64> = Vec::deserialize(d)?;
            v.into_iter()
                .map(|x| {
                    if x == 0 {
                        Err(D::Error::custom("indices are 1-based"))
                    } else {
                        Ok(x as usize - 1)
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_clears_denominators() {
        let v = vec![
            BigRational::new(int(1), int(2)),
            BigRational::new(int(-3), int(4)),
            BigRational::zero(),
        ];
        assert_eq!(primitive(&v), int_vec(&[2, -3, 0]));
        assert_eq!(primitive_int(&int_vec(&[4, -6, 0])), int_vec(&[2, -3, 0]));
        assert_eq!(primitive_int(&int_vec(&[0, 0])), int_vec(&[0, 0]));
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rat("-3/6"), Some(BigRational::new(int(-1), int(2))));
        assert_eq!(parse_rat("2.25"), Some(BigRational::new(int(9), int(4))));
        assert_eq!(parse_rat("-0.5"), Some(BigRational::new(int(-1), int(2))));
        assert_eq!(parse_rat("7"), Some(rat(&int(7))));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("abc"), None);
    }
}
