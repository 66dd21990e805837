//! Command dispatch and reports for the `torsep` tool.

mod instance;
mod text;

use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use instance::{parse_instance, Instance, Payload};
pub use text::render_text;

use crate::binary::BinaryVerdict;
use crate::cone::{homogenize, Guard, WeightSystem};
use crate::decide::{decide, Mode, Property, Verdict};
use crate::error::{Error, Result};
use crate::ideal::{
    binomial_generators, scan_sp_patterns, spans_kernel, verify_vanishing, Binomial, PatternScan,
    VanishingReport,
};
use crate::num::serde_num;
use crate::strata::{
    characteristic_pairs, oracle_sp, oracle_wsp, ssp_coordinate_witness, strata, Stratum,
};

pub const SCHEMA: &str = "torsep/1";
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_PRIME: u64 = 10_007;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Decider verdicts with certificates.
    Decide,
    /// Binomial generators of the ideal, pattern scan and vanishing check.
    Ideal,
    /// Orbit strata, one per face of the weight cone.
    Strata,
    /// Verdicts re-derived from the strata alone.
    Oracle,
    /// Coordinate pairs (a, b) with x_a = 0 forcing x_b = 0.
    Chpairs,
    /// Multiplicity-one criterion for a binary form.
    Binary,
    /// Every route side by side, with agreement flags.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Affine,
    Projective,
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Affine => vec![Mode::Affine],
            ModeArg::Projective => vec![Mode::Projective],
            ModeArg::Both => vec![Mode::Affine, Mode::Projective],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PropertyArg {
    Sp,
    Wsp,
    Ssp,
    All,
}

impl PropertyArg {
    pub fn properties(self) -> Vec<Property> {
        match self {
            PropertyArg::Sp => vec![Property::Sp],
            PropertyArg::Wsp => vec![Property::Wsp],
            PropertyArg::Ssp => vec![Property::Ssp],
            PropertyArg::All => Property::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: ModeArg,
    pub property: PropertyArg,
    pub seed: u64,
    pub prime: u64,
    pub trials: usize,
    pub guard: Guard,
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: ModeArg::Both,
            property: PropertyArg::All,
            seed: DEFAULT_SEED,
            prime: DEFAULT_PRIME,
            trials: DEFAULT_TRIALS,
            guard: Guard::default(),
            timing: false,
        }
    }
}

/// A decision that was not made because a theorem hypothesis failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub property: Property,
    pub mode: Mode,
    pub reason: String,
    #[serde(with = "serde_num::int_vec")]
    pub relation: Vec<BigInt>,
}

/// Agreement of the independent routes for one property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub property: Property,
    pub mode: Mode,
    pub theorem: bool,
    /// Stratum route; for SSP, the absence of a coordinate witness.
    pub oracle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_scan: Option<PatternScan>,
    pub agreement: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationPair {
    #[serde(with = "serde_num::one_based")]
    pub vanishing: usize,
    #[serde(with = "serde_num::one_based")]
    pub forced: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    /// Whether the binomials were computed for the homogenized weights.
    pub homogenized: bool,
    pub binomials: Vec<Binomial>,
    pub spans_kernel: bool,
    pub pattern_scan: PatternScan,
    pub vanishing: VanishingReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub command: Command,
    pub instance: Instance,
    pub verdicts: Vec<Verdict>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracle_verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<Stratum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<ImplicationPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary: Option<BinaryVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheck>,
    pub certificates_verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    fn new(command: Command, instance: &Instance, opts: &Options) -> Self {
        Report {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command,
            instance: instance.clone(),
            verdicts: Vec::new(),
            seed: opts.seed,
            oracle_verdicts: Vec::new(),
            skipped: Vec::new(),
            ideal: None,
            strata: None,
            pairs: None,
            binary: None,
            cross_checks: Vec::new(),
            certificates_verified: false,
            timing_ms: None,
        }
    }

    /// True when some cross-check found two routes disagreeing.
    pub fn disagreement(&self) -> bool {
        self.cross_checks.iter().any(|c| !c.agreement)
            || self
                .ideal
                .as_ref()
                .is_some_and(|i| !i.vanishing.passed() || !i.spans_kernel)
    }
}

/// Process exit status for an error: 2 for input and resource problems,
/// 3 for an unmet hypothesis, 4 for internal failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Input(_)
        | Error::Parse { .. }
        | Error::DimensionMismatch { .. }
        | Error::IndexOutOfRange { .. }
        | Error::Resource { .. } => 2,
        Error::Hypothesis { .. } => 3,
        Error::Internal(_) => 4,
    }
}

fn require_weights(instance: &Instance, command: Command) -> Result<&WeightSystem> {
    match &instance.payload {
        Payload::Weights(ws) => Ok(ws),
        Payload::BinaryForm(_) => Err(Error::Input(format!(
            "command {command:?} expects a weight system, got a binary form"
        ))),
    }
}

fn target(ws: &WeightSystem, mode: ModeArg) -> (WeightSystem, bool) {
    match mode {
        ModeArg::Projective => (homogenize(ws), true),
        _ => (ws.clone(), false),
    }
}

/// Decides every requested (mode, property); SSP hypothesis failures are
/// reported as skipped unless SSP was the only property requested.
fn theorem_verdicts(
    ws: &WeightSystem,
    opts: &Options,
    strict: bool,
    report: &mut Report,
) -> Result<()> {
    for mode in opts.mode.modes() {
        for property in opts.property.properties() {
            match decide(ws, property, mode, &opts.guard) {
                Ok(v) => report.verdicts.push(v),
                Err(Error::Hypothesis { message, relation }) if !strict => {
                    report.skipped.push(Skipped {
                        property,
                        mode,
                        reason: message,
                        relation,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

fn oracle_verdict(
    ws: &WeightSystem,
    property: Property,
    mode: Mode,
    guard: &Guard,
) -> Result<Option<Verdict>> {
    let target = match mode {
        Mode::Affine => ws.clone(),
        Mode::Projective => homogenize(ws),
    };
    let v = match property {
        Property::Sp => oracle_sp(&target, guard)?,
        Property::Wsp => oracle_wsp(&target, guard)?,
        Property::Ssp => return Ok(None),
    };
    Ok(Some(Verdict { mode, ..v }))
}

fn ideal_report(ws: &WeightSystem, homogenized: bool, opts: &Options) -> Result<IdealReport> {
    let binomials = binomial_generators(ws, &opts.guard)?;
    Ok(IdealReport {
        homogenized,
        spans_kernel: spans_kernel(&binomials, ws),
        pattern_scan: scan_sp_patterns(&binomials, ws.len()),
        vanishing: verify_vanishing(&binomials, ws, opts.trials, opts.prime, opts.seed)?,
        binomials,
    })
}

fn cross_checks(ws: &WeightSystem, opts: &Options, report: &mut Report) -> Result<()> {
    for v in report.verdicts.clone() {
        let target = match v.mode {
            Mode::Affine => ws.clone(),
            Mode::Projective => homogenize(ws),
        };
        let (oracle, pattern_scan) = match v.property {
            Property::Ssp => (
                ssp_coordinate_witness(&target, &opts.guard)?.is_none(),
                None,
            ),
            property => {
                let o = oracle_verdict(ws, property, v.mode, &opts.guard)?.expect("SP or WSP");
                let holds = o.holds;
                report.oracle_verdicts.push(o);
                let scan = if property == Property::Sp {
                    let b = binomial_generators(&target, &opts.guard)?;
                    Some(scan_sp_patterns(&b, target.len()))
                } else {
                    None
                };
                (holds, scan)
            }
        };
        let scan_agrees = pattern_scan
            .as_ref()
            .is_none_or(|s| s.is_compatible() == v.holds);
        report.cross_checks.push(CrossCheck {
            property: v.property,
            mode: v.mode,
            theorem: v.holds,
            oracle,
            agreement: oracle == v.holds && scan_agrees,
            pattern_scan,
        });
    }
    Ok(())
}

fn verify_all(report: &mut Report, ws: Option<&WeightSystem>) -> Result<()> {
    if let Some(ws) = ws {
        for v in report.verdicts.iter().chain(&report.oracle_verdicts) {
            v.verify(ws)?;
        }
    }
    if let Some(b) = &report.binary {
        if !b.verify() {
            return Err(Error::Internal(
                "binary form decomposition does not verify".into(),
            ));
        }
    }
    report.certificates_verified = true;
    Ok(())
}

/// Runs one command on one instance. Certificates are re-verified before
/// the report is returned; a failure there is an internal error.
pub fn run_command(command: Command, instance: &Instance, opts: &Options) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(command, instance, opts);
    let mut checked_ws = None;
    match command {
        Command::Decide => {
            let ws = require_weights(instance, command)?;
            let strict = opts.property == PropertyArg::Ssp;
            theorem_verdicts(ws, opts, strict, &mut report)?;
            checked_ws = Some(ws);
        }
        Command::Oracle => {
            let ws = require_weights(instance, command)?;
            if opts.property == PropertyArg::Ssp {
                return Err(Error::Input(
                    "the stratum oracle decides SP and WSP; use verify for the SSP witness".into(),
                ));
            }
            for mode in opts.mode.modes() {
                for property in opts.property.properties() {
                    if let Some(v) = oracle_verdict(ws, property, mode, &opts.guard)? {
                        report.verdicts.push(v);
                    }
                }
            }
            checked_ws = Some(ws);
        }
        Command::Ideal => {
            let ws = require_weights(instance, command)?;
            let (t, homogenized) = target(ws, opts.mode);
            report.ideal = Some(ideal_report(&t, homogenized, opts)?);
        }
        Command::Strata => {
            let ws = require_weights(instance, command)?;
            let (t, _) = target(ws, opts.mode);
            report.strata = Some(strata(&t, &opts.guard)?);
        }
        Command::Chpairs => {
            let ws = require_weights(instance, command)?;
            let (t, _) = target(ws, opts.mode);
            report.pairs = Some(
                characteristic_pairs(&t, &opts.guard)?
                    .into_iter()
                    .map(|(vanishing, forced)| ImplicationPair { vanishing, forced })
                    .collect(),
            );
        }
        Command::Binary => match &instance.payload {
            Payload::BinaryForm(f) => report.binary = Some(BinaryVerdict::new(f)),
            Payload::Weights(_) => {
                return Err(Error::Input("command binary expects a binary form".into()))
            }
        },
        Command::Verify => match &instance.payload {
            Payload::BinaryForm(f) => report.binary = Some(BinaryVerdict::new(f)),
            Payload::Weights(ws) => {
                theorem_verdicts(ws, opts, false, &mut report)?;
                cross_checks(ws, opts, &mut report)?;
                if opts.mode != ModeArg::Projective {
                    report.ideal = Some(ideal_report(ws, false, opts)?);
                }
                checked_ws = Some(ws);
            }
        },
    }
    verify_all(&mut report, checked_ws)?;
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize"),
        Format::Text => render_text(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Instance {
        Instance::weights(WeightSystem::from_i64(&[&[1, 1], &[2, 0], &[0, 2]])).with_label("M")
    }

    fn n() -> Instance {
        Instance::weights(WeightSystem::from_i64(&[
            &[1, 0, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[0, 1, 1],
        ]))
    }

    #[test]
    fn decide_m_affine_sp() {
        let opts = Options {
            mode: ModeArg::Affine,
            property: PropertyArg::Sp,
            ..Options::default()
        };
        let r = run_command(Command::Decide, &m(), &opts).unwrap();
        assert_eq!(r.verdicts.len(), 1);
        assert!(!r.verdicts[0].holds);
        assert_eq!(r.verdicts[0].witness_pair(), Some((1, 0)));
        assert!(r.certificates_verified);
    }

    #[test]
    fn json_keys_and_round_trip() {
        let r = run_command(Command::Decide, &m(), &Options::default()).unwrap();
        let s = emit_report(&r, Format::Json);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["schema", "instance", "command", "verdicts", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["schema"], SCHEMA);
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn verify_n_agrees() {
        let r = run_command(Command::Verify, &n(), &Options::default()).unwrap();
        assert!(!r.disagreement());
        let sp = r
            .cross_checks
            .iter()
            .find(|c| c.property == Property::Sp && c.mode == Mode::Affine)
            .unwrap();
        assert!(sp.theorem && sp.oracle && sp.agreement);
        assert!(sp.pattern_scan.as_ref().unwrap().is_compatible());
    }

    #[test]
    fn ssp_hypothesis_is_strict_only_when_requested() {
        let five = Instance::weights(WeightSystem::from_i64(&[
            &[1, 0, 0],
            &[1, 1, 0],
            &[0, 1, 2],
            &[0, 2, 1],
            &[1, 0, 1],
        ]));
        let opts = Options {
            mode: ModeArg::Affine,
            property: PropertyArg::Ssp,
            ..Options::default()
        };
        let err = run_command(Command::Decide, &five, &opts).unwrap_err();
        assert_eq!(exit_code(&err), 3);
        let r = run_command(Command::Decide, &five, &Options::default()).unwrap();
        assert_eq!(r.skipped.len(), 1);
    }

    #[test]
    fn wrong_payloads() {
        let f = Instance::binary(crate::binary::parse_binary_form("x*y").unwrap());
        assert_eq!(
            exit_code(&run_command(Command::Decide, &f, &Options::default()).unwrap_err()),
            2
        );
        assert_eq!(
            exit_code(&run_command(Command::Binary, &m(), &Options::default()).unwrap_err()),
            2
        );
    }

    #[test]
    fn text_output() {
        let opts = Options {
            mode: ModeArg::Affine,
            property: PropertyArg::Wsp,
            ..Options::default()
        };
        let r = run_command(Command::Decide, &m(), &opts).unwrap();
        let t = emit_report(&r, Format::Text);
        assert!(t.lines().any(|l| l == "WSP (affine): HOLDS"), "{t}");
    }
}
