use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::binary::{parse_binary_form, BinaryForm};
use crate::cone::WeightSystem;
use crate::error::{Error, Result};
use crate::num::{rat_to_string, serde_num};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Weights(WeightSystem),
    BinaryForm(BinaryForm),
}

/// A parsed input: a weight system or a binary form, optionally labelled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceJson", into = "InstanceJson")]
pub struct Instance {
    pub label: Option<String>,
    pub payload: Payload,
}

impl Instance {
    pub fn weights(ws: WeightSystem) -> Self {
        Instance {
            label: None,
            payload: Payload::Weights(ws),
        }
    }

    pub fn binary(form: BinaryForm) -> Self {
        Instance {
            label: None,
            payload: Payload::BinaryForm(form),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn kind(&self) -> &'static str {
        match self.payload {
            Payload::Weights(_) => "weights",
            Payload::BinaryForm(_) => "binary-form",
        }
    }
}

/// Wire shape. Weights: `{"d":2,"weights":[[1,1],[2,0]]}`; binary forms:
/// `{"form":"x^2*y^2"}` or `{"coefficients":["1","0","0"]}`. `kind` and
/// `label` are optional on input.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Vec<JsonInt>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<JsonRat>>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct JsonInt(#[serde(with = "serde_num::int")] BigInt);

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct JsonRat(#[serde(with = "serde_num::rat")] BigRational);

impl TryFrom<InstanceJson> for Instance {
    type Error = Error;
    fn try_from(raw: InstanceJson) -> Result<Self> {
        let kind = match raw.kind.as_deref() {
            Some(k) => k.to_string(),
            None if raw.weights.is_some() || raw.d.is_some() => "weights".into(),
            None if raw.form.is_some() || raw.coefficients.is_some() => "binary-form".into(),
            None => {
                return Err(Error::Input(
                    "instance has neither weights nor a form".into(),
                ))
            }
        };
        let payload = match kind.as_str() {
            "weights" => {
                let d = raw
                    .d
                    .ok_or_else(|| Error::Input("missing field \"d\"".into()))?;
                let weights = raw
                    .weights
                    .ok_or_else(|| Error::Input("missing field \"weights\"".into()))?;
                let weights = weights
                    .into_iter()
                    .map(|w| w.into_iter().map(|x| x.0).collect())
                    .collect();
                Payload::Weights(WeightSystem::new(d, weights)?)
            }
            "binary-form" => match (raw.coefficients, raw.form) {
                (Some(c), _) => Payload::BinaryForm(BinaryForm::from_coefficients(
                    c.into_iter().map(|x| x.0).collect(),
                )?),
                (None, Some(text)) => Payload::BinaryForm(parse_binary_form(&text)?),
                (None, None) => {
                    return Err(Error::Input(
                        "binary form needs \"form\" or \"coefficients\"".into(),
                    ))
                }
            },
            other => return Err(Error::Input(format!("unknown instance kind {other:?}"))),
        };
        Ok(Instance {
            label: raw.label,
            payload,
        })
    }
}

impl From<Instance> for InstanceJson {
    fn from(inst: Instance) -> Self {
        let mut out = InstanceJson {
            kind: Some(inst.kind().to_string()),
            label: inst.label,
            d: None,
            weights: None,
            form: None,
            coefficients: None,
        };
        match inst.payload {
            Payload::Weights(ws) => {
                out.d = Some(ws.dim());
                out.weights = Some(
                    ws.weights()
                        .iter()
                        .map(|w| w.iter().cloned().map(JsonInt).collect())
                        .collect(),
                );
            }
            Payload::BinaryForm(f) => {
                out.form = Some(f.to_string());
                out.coefficients = Some(f.coefficients().iter().cloned().map(JsonRat).collect());
            }
        }
        out
    }
}

/// Parses one instance from the JSON shape above, from the whitespace
/// format (`d n` on the first line, then `n` lines of `d` integers), or, when
/// the text mentions `x` or `y`, from a binary form expression.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let raw: InstanceJson = serde_json::from_str(text).map_err(|e| match e.classify() {
            serde_json::error::Category::Data => Error::Input(e.to_string()),
            _ => Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        })?;
        return Instance::try_from(raw);
    }
    if text.contains(['x', 'y']) {
        return Ok(Instance::binary(parse_binary_form(text.trim())?));
    }
    parse_whitespace_weights(text).map(Instance::weights)
}

struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn tokens(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    line: line_no,
                    column: line[..s].chars().count() + 1,
                    text: &line[s..i],
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_int<T: std::str::FromStr>(t: &Token<'_>, what: &str) -> Result<T> {
    t.text.parse().map_err(|_| Error::Parse {
        line: t.line,
        column: t.column,
        message: format!("expected {what}, found {:?}", t.text),
    })
}

fn parse_whitespace_weights(text: &str) -> Result<WeightSystem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| tokens(i + 1, l))
        .filter(|t| !t.is_empty());
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    if header.len() != 2 {
        let t = header.get(2).unwrap_or(&header[0]);
        return Err(Error::Parse {
            line: t.line,
            column: t.column,
            message: "header must be \"d n\"".into(),
        });
    }
    let d: usize = parse_int(&header[0], "the dimension d")?;
    let n: usize = parse_int(&header[1], "the number of weights n")?;
    if d == 0 {
        return Err(Error::Input("dimension d must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::Input("weight list is empty".into()));
    }
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let row = lines.next().ok_or_else(|| Error::Parse {
            line: text.lines().count() + 1,
            column: 1,
            message: format!("expected {n} weight lines, found {k}"),
        })?;
        if row.len() != d {
            return Err(Error::dims(
                d,
                row.len(),
                format!("weight {} on line {}", k + 1, row[0].line),
            ));
        }
        weights.push(
            row.iter()
                .map(|t| parse_int::<BigInt>(t, "an integer"))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse {
            line: extra[0].line,
            column: extra[0].column,
            message: format!("more than {n} weight lines"),
        });
    }
    WeightSystem::new(d, weights)
}

impl Instance {
    pub fn describe(&self) -> String {
        let body = match &self.payload {
            Payload::Weights(ws) => {
                let ws: Vec<String> = ws
                    .weights()
                    .iter()
                    .map(|w| crate::num::fmt_int_vec(w))
                    .collect();
                format!("weights {}", ws.join(" "))
            }
            Payload::BinaryForm(f) => format!(
                "binary form {} (coefficients {})",
                f,
                f.coefficients()
                    .iter()
                    .map(rat_to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        };
        match &self.label {
            Some(l) => format!("{l}: {body}"),
            None => body,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_weights() {
        let i = parse_instance(r#"{"d":2,"weights":[[1,1],[2,0],[0,2]]}"#).unwrap();
        assert_eq!(
            i.payload,
            Payload::Weights(WeightSystem::from_i64(&[&[1, 1], &[2, 0], &[0, 2]]))
        );
        assert!(matches!(
            parse_instance(r#"{"d":2,"weights":[[1],[2,0]]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            parse_instance(r#"{"d":2,"weights":[]}"#),
            Err(Error::Input(_))
        ));
        match parse_instance("{\"d\":2,\n \"weights\": [[1,1],}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn whitespace_weights() {
        let i = parse_instance("1 2\n1\n-1").unwrap();
        assert_eq!(
            i.payload,
            Payload::Weights(WeightSystem::from_i64(&[&[1], &[-1]]))
        );
        match parse_instance("2 2\n1 0\n0 q") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance("2 2\n1 0\n0"),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            parse_instance("2 2\n1 0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_instance("1 1\n1\n2"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn binary_instances() {
        let i = parse_instance("x^2*y^2").unwrap();
        assert_eq!(i.kind(), "binary-form");
        let j = parse_instance(r#"{"coefficients":[0,0,1,0,0],"label":"q"}"#).unwrap();
        assert_eq!(j.payload, i.payload);
        assert_eq!(j.label.as_deref(), Some("q"));
    }

    #[test]
    fn round_trip() {
        for text in [
            r#"{"d":2,"weights":[[1,1],[2,0],[0,2]],"label":"M"}"#,
            r#"{"form":"x*y^3 - 1/2*x^4"}"#,
        ] {
            let i = parse_instance(text).unwrap();
            let s = serde_json::to_string(&i).unwrap();
            assert_eq!(parse_instance(&s).unwrap(), i);
        }
    }
}
