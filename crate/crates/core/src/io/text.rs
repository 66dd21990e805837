use std::fmt::Write;

use num_bigint::BigInt;

use super::Report;
use crate::cone::{ConeFace, Implication};
use crate::decide::{Certificate, Side, Verdict};
use crate::ideal::{PatternForm, PatternScan};
use crate::linalg::ConeMembership;
use crate::num::{fmt_int_vec, fmt_rat_vec, rat_to_string};

fn implication_line(m: &Implication) -> String {
    let scale = if m.scale == BigInt::from(0) {
        format!("x{} never vanishes", m.vanishing + 1)
    } else {
        format!("{}·χ{}", m.scale, m.forced + 1)
    };
    format!(
        "x{} = 0 forces x{} = 0   [{}; c = {}]",
        m.vanishing + 1,
        m.forced + 1,
        scale,
        fmt_int_vec(&m.coefficients)
    )
}

fn face(f: &ConeFace) -> String {
    format!("{} by γ = {}", f.indices, fmt_int_vec(&f.functional))
}

fn membership(m: &ConeMembership) -> String {
    match m {
        ConeMembership::Inside { coefficients } => {
            format!("inside, λ = {}", fmt_rat_vec(coefficients))
        }
        ConeMembership::Outside { functional } => {
            format!("outside, γ = {}", fmt_int_vec(functional))
        }
    }
}

fn certificate_lines(cert: &Certificate) -> Vec<String> {
    match cert {
        Certificate::Vacuous => vec!["vacuous: a single coordinate".into()],
        Certificate::Edges { tests } => {
            let mut out = vec!["every ±χi avoids the cone of the others:".into()];
            for t in tests {
                out.push(format!(
                    "  χ{}: +{}; -{}",
                    t.index + 1,
                    membership(&t.positive.membership),
                    membership(&t.negative.membership)
                ));
            }
            out
        }
        Certificate::NotAnEdge {
            index,
            side,
            coefficients,
            implication,
        } => {
            let sign = match side {
                Side::Positive => "",
                Side::Negative => "-",
            };
            vec![
                format!(
                    "{sign}χ{} = Σ λk χk with λ = {}",
                    index + 1,
                    fmt_rat_vec(coefficients)
                ),
                implication_line(implication),
            ]
        }
        Certificate::ContainsLine { relation } => vec![format!(
            "the cone contains a line: Σ ci χi = 0 with c = {}",
            fmt_int_vec(relation)
        )],
        Certificate::DistinctFaces {
            functional,
            separators,
        } => {
            let mut out = vec![format!("pointed: γ = {}", fmt_int_vec(functional))];
            for s in separators {
                out.push(format!(
                    "  face through χ{} missing χ{}: γ = {}",
                    s.contained + 1,
                    s.excluded + 1,
                    fmt_int_vec(&s.functional)
                ));
            }
            out
        }
        Certificate::SharedFace {
            first,
            second,
            face,
            implications,
        } => {
            let mut out = vec![format!(
                "χ{} and χ{} have the same minimal face {}",
                first + 1,
                second + 1,
                face
            )];
            out.extend(implications.iter().map(implication_line));
            out
        }
        Certificate::Independent {
            cone_functional,
            rows,
            minor,
        } => {
            let rows: Vec<String> = rows.iter().map(|r| (r + 1).to_string()).collect();
            let mut out = vec![format!("minor on rows {{{}}} = {}", rows.join(","), minor)];
            if let Some(u) = cone_functional {
                out.push(format!("cone functional u = {}", fmt_rat_vec(u)));
            }
            out
        }
        Certificate::Dependent {
            relation,
            cone_functional,
            witness,
        } => {
            let mut out = vec![format!("kernel vector {}", fmt_int_vec(relation))];
            if let Some(u) = cone_functional {
                out.push(format!("cone functional u = {}", fmt_rat_vec(u)));
            }
            if let Some(w) = witness {
                out.push(format!(
                    "x{} = x{} = 0 contains the stratum {} of dimension {} (rank {})",
                    w.pair.0 + 1,
                    w.pair.1 + 1,
                    w.stratum.indices,
                    w.stratum_dim,
                    w.rank
                ));
            }
            out
        }
        Certificate::Strata { points } => {
            let mut out = vec![format!("{} separating stratum points:", points.len())];
            for p in points {
                out.push(format!(
                    "  x{} = 0, x{} ≠ 0 on {}",
                    p.zero + 1,
                    p.nonzero + 1,
                    face(&p.face)
                ));
            }
            out
        }
        Certificate::StrataPattern {
            vanishing,
            forced,
            mutual,
            faces,
        } => {
            let arrow = if *mutual { "and" } else { "forces" };
            let mut out = vec![format!(
                "x{} = 0 {arrow} x{} = 0 on all {} strata:",
                vanishing + 1,
                forced + 1,
                faces.len()
            )];
            out.extend(faces.iter().map(|f| format!("  {}", face(f))));
            out
        }
    }
}

fn verdict_block(out: &mut String, v: &Verdict, route: &str) {
    let status = if v.holds { "HOLDS" } else { "FAILS" };
    let _ = writeln!(out, "{} ({}): {status}{route}", v.property, v.mode);
    for line in certificate_lines(&v.certificate) {
        let _ = writeln!(out, "    {line}");
    }
    for note in &v.notes {
        let _ = writeln!(out, "    note: {note}");
    }
}

fn scan_text(s: &PatternScan) -> String {
    match s {
        PatternScan::Compatible => "compatible".into(),
        PatternScan::Violating { binomial, form } => match form {
            PatternForm::UnitMonomial => format!("violating: {binomial} (monomial equals 1)"),
            PatternForm::PurePower { index } => {
                format!("violating: {binomial} (pure power of x{})", index + 1)
            }
        },
    }
}

/// Human-readable rendering: one status line per verdict followed by an
/// indented certificate block, then whatever sections the command filled.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "torsep {} {:?}", r.tool_version, r.command);
    let _ = writeln!(out, "instance: {}", r.instance.describe());
    for v in &r.verdicts {
        verdict_block(&mut out, v, "");
    }
    for v in &r.oracle_verdicts {
        verdict_block(&mut out, v, " [strata]");
    }
    for s in &r.skipped {
        let _ = writeln!(
            out,
            "{} ({}): NOT APPLICABLE\n    {}\n    kernel vector {} has nonzero coordinate sum",
            s.property,
            s.mode,
            s.reason,
            fmt_int_vec(&s.relation)
        );
    }
    if let Some(ideal) = &r.ideal {
        let what = if ideal.homogenized {
            " (homogenized)"
        } else {
            ""
        };
        let _ = writeln!(out, "binomials{what}: {}", ideal.binomials.len());
        for b in &ideal.binomials {
            let _ = writeln!(out, "    {b}");
        }
        let _ = writeln!(out, "spans kernel lattice: {}", ideal.spans_kernel);
        let _ = writeln!(out, "pattern scan: {}", scan_text(&ideal.pattern_scan));
        let v = &ideal.vanishing;
        let _ = writeln!(
            out,
            "vanishing: {} trials mod {}, {} evaluations, {} failures",
            v.trials,
            v.prime,
            v.evaluations,
            v.failures.len()
        );
    }
    if let Some(strata) = &r.strata {
        let _ = writeln!(out, "strata: {}", strata.len());
        for s in strata {
            let _ = writeln!(out, "    {:<16} dim {}", s.face.indices.to_string(), s.dim);
        }
    }
    if let Some(pairs) = &r.pairs {
        let p: Vec<String> = pairs
            .iter()
            .map(|p| format!("({},{})", p.vanishing + 1, p.forced + 1))
            .collect();
        let _ = writeln!(out, "characteristic pairs: {}", p.join(" "));
    }
    if let Some(b) = &r.binary {
        let status = if b.holds { "HOLDS" } else { "FAILS" };
        let _ = writeln!(out, "SP (binary form orbit): {status}");
        let _ = writeln!(
            out,
            "    constant {}",
            rat_to_string(&b.decomposition.constant)
        );
        for p in &b.decomposition.parts {
            let _ = writeln!(out, "    ({})^{}", p.part, p.multiplicity);
        }
    }
    if !r.cross_checks.is_empty() {
        let _ = writeln!(out, "cross-checks:");
        for c in &r.cross_checks {
            let scan = c
                .pattern_scan
                .as_ref()
                .map(|s| format!(", pattern scan {}", scan_text(s)))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "    {:<4} {:<10} theorem={} oracle={}{} agreement={}",
                c.property.to_string(),
                c.mode.to_string(),
                c.theorem,
                c.oracle,
                scan,
                c.agreement
            );
        }
    }
    let _ = writeln!(out, "certificates verified: {}", r.certificates_verified);
    let _ = writeln!(out, "seed: {}", r.seed);
    if let Some(ms) = r.timing_ms {
        let _ = writeln!(out, "time: {ms:.1} ms");
    }
    out
}
