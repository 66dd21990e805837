//! One line per acceptance criterion, `[PASS]` or `[FAIL]`, then a single
//! assertion over all of them. Run with `--nocapture` to see the lines.

use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torsep::binary::{
    decide_sp_binary_orbit, squarefree_multiplicity_parts, BinaryForm, BinaryVerdict,
};
use torsep::cone::{homogenize, Guard, WeightSystem};
use torsep::decide::{
    cone_functional, decide_affine_sp, decide_affine_ssp, decide_affine_wsp, decide_projective_sp,
    decide_projective_ssp, decide_projective_wsp, Certificate, Verdict,
};
use torsep::ideal::{binomial_generators, scan_sp_patterns, spans_kernel, verify_vanishing};
use torsep::linalg::{hermite_rows, lattice_coordinates};
use torsep::num::int_vec;
use torsep::strata::{characteristic_pairs, oracle_sp, oracle_wsp, ssp_coordinate_witness};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

static VERIFIED: AtomicUsize = AtomicUsize::new(0);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Every verdict that passes through here has its certificate re-checked.
fn checked(v: torsep::Result<Verdict>, ws: &WeightSystem) -> Result<Verdict, String> {
    let v = v.map_err(|e| format!("{e} on {ws:?}"))?;
    v.verify(ws).map_err(|e| format!("{e} on {ws:?}"))?;
    VERIFIED.fetch_add(1, Ordering::Relaxed);
    Ok(v)
}

fn guard() -> Guard {
    Guard::default()
}

fn m() -> WeightSystem {
    WeightSystem::from_i64(&[&[1, 1], &[2, 0], &[0, 2]])
}

fn n_example() -> WeightSystem {
    WeightSystem::from_i64(&[&[1, 0, 0], &[0, 0, 1], &[1, 1, 0], &[0, 1, 1]])
}

fn six() -> WeightSystem {
    WeightSystem::from_i64(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 2], &[0, 2, 1], &[1, 0, 1]])
}

fn remark() -> WeightSystem {
    WeightSystem::from_i64(&[&[1, 2], &[1, 1], &[3, 0], &[0, 2]])
}

fn random_ws(rng: &mut ChaCha8Rng) -> WeightSystem {
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=6);
    let weights = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| BigInt::from(rng.gen_range(-2..=2)))
                .collect()
        })
        .collect();
    WeightSystem::new(d, weights).unwrap()
}

fn criterion_1() -> Check {
    let ws = m();
    let sp = checked(decide_affine_sp(&ws), &ws)?;
    ensure(!sp.holds, || "SP should fail on M".into())?;
    let pair = sp.witness_pair();
    // x_2 = 0 forces x_1 = 0 (zero-based (1, 0)).
    ensure(pair == Some((1, 0)), || {
        format!("witness pair {pair:?}, expected (2,1)")
    })?;
    ensure(
        characteristic_pairs(&ws, &guard())
            .unwrap()
            .contains(&(1, 0)),
        || "(2,1) is not a characteristic pair".into(),
    )?;
    let wsp = checked(decide_affine_wsp(&ws), &ws)?;
    ensure(wsp.holds, || "WSP should hold on M".into())
}

fn criterion_2() -> Check {
    let ws = n_example();
    let sp = checked(decide_affine_sp(&ws), &ws)?;
    ensure(sp.holds, || "SP should hold on N".into())?;
    let u = cone_functional(&ws).map_err(|k| format!("no cone functional, kernel {k:?}"))?;
    ensure(
        ws.weights()
            .iter()
            .all(|w| torsep::num::dot_rat(&u, w).is_one()),
        || "u·χ_i ≠ 1".into(),
    )?;
    let ssp = checked(decide_affine_ssp(&ws, &guard()), &ws)?;
    ensure(!ssp.holds, || "SSP should fail on N".into())?;
    ensure(
        ssp.notes
            .iter()
            .any(|n| n.contains("cone hypothesis verified")),
        || "cone hypothesis not recorded".into(),
    )?;
    ensure(ssp.witness_pair().is_some(), || {
        "SSP failure without coordinate witness".into()
    })
}

fn criterion_3() -> Check {
    let ws = six();
    let sp = checked(decide_affine_sp(&ws), &ws)?;
    ensure(sp.holds, || {
        "SP should hold on the five-weight example".into()
    })?;
    let binomials = binomial_generators(&ws, &guard()).map_err(|e| e.to_string())?;
    ensure(binomials.len() >= 3, || {
        format!("only {} binomials", binomials.len())
    })?;
    ensure(binomials.iter().all(|b| b.is_valid_for(&ws)), || {
        "binomial off the lattice".into()
    })?;
    ensure(spans_kernel(&binomials, &ws), || {
        "binomials do not span the kernel".into()
    })?;
    let vectors: Vec<Vec<BigInt>> = binomials.iter().map(|b| b.lattice_vector()).collect();
    let h = hermite_rows(&vectors);
    ensure(h.len() == 2, || format!("kernel rank {}", h.len()))?;
    for rel in [[3, -1, 1, 0, -2], [3, -2, 0, 1, -1], [0, 1, 1, -1, -1]] {
        let v = int_vec(&rel);
        ensure(lattice_coordinates(&h, &v).is_some(), || {
            format!("{rel:?} not in the span")
        })?;
    }
    let target = int_vec(&[0, 1, 1, -1, -1]);
    let neg: Vec<BigInt> = target.iter().map(|x| -x).collect();
    ensure(vectors.iter().any(|v| *v == target || *v == neg), || {
        "x2*x3 - x4*x5 missing from the generators".into()
    })?;
    let scan = scan_sp_patterns(&binomials, ws.len());
    ensure(scan.is_compatible(), || format!("pattern scan {scan:?}"))?;
    let report = verify_vanishing(&binomials, &ws, 100, 10_007, 6).map_err(|e| e.to_string())?;
    ensure(report.trials == 100 && report.failures.is_empty(), || {
        format!("{} vanishing failures", report.failures.len())
    })
}

fn criterion_4() -> Check {
    let ws = remark();
    let sp = checked(decide_projective_sp(&ws), &ws)?;
    ensure(sp.holds, || "projective SP should hold".into())?;
    let ssp = checked(decide_projective_ssp(&ws, &guard()), &ws)?;
    ensure(!ssp.holds, || "projective SSP should fail".into())?;
    // The hypersurface x0*x1^2 = x2*x3^2 lies in the ideal.
    let h = homogenize(&ws);
    let gens = binomial_generators(&h, &guard()).map_err(|e| e.to_string())?;
    let rows = hermite_rows(&gens.iter().map(|b| b.lattice_vector()).collect::<Vec<_>>());
    ensure(
        lattice_coordinates(&rows, &int_vec(&[1, 2, -1, -2])).is_some(),
        || "x1*x2^2 - x3*x4^2 not in the ideal".into(),
    )
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = guard();
    let mut cone_type = 0;
    for _ in 0..500 {
        let ws = random_ws(&mut rng);
        let sp = checked(decide_affine_sp(&ws), &ws)?;
        let osp = checked(oracle_sp(&ws, &g), &ws)?;
        let binomials = binomial_generators(&ws, &g).map_err(|e| e.to_string())?;
        ensure(spans_kernel(&binomials, &ws), || {
            format!("binomials do not span on {ws:?}")
        })?;
        let scan = scan_sp_patterns(&binomials, ws.len()).is_compatible();
        ensure(sp.holds == osp.holds && sp.holds == scan, || {
            format!(
                "SP routes disagree on {ws:?}: {} {} {}",
                sp.holds, osp.holds, scan
            )
        })?;
        let wsp = checked(decide_affine_wsp(&ws), &ws)?;
        let owsp = checked(oracle_wsp(&ws, &g), &ws)?;
        ensure(wsp.holds == owsp.holds, || {
            format!("WSP routes disagree on {ws:?}")
        })?;
        ensure(!sp.holds || wsp.holds, || {
            format!("SP without WSP on {ws:?}")
        })?;
        if cone_functional(&ws).is_ok() {
            cone_type += 1;
            let ssp = checked(decide_affine_ssp(&ws, &g), &ws)?;
            ensure(!ssp.holds || sp.holds, || {
                format!("SSP without SP on {ws:?}")
            })?;
            let witness = ssp_coordinate_witness(&ws, &g).map_err(|e| e.to_string())?;
            ensure(witness.is_some() != ssp.holds, || {
                format!("SSP witness mismatch on {ws:?}")
            })?;
        }
    }
    ensure(cone_type > 0, || "no cone-type instances drawn".into())
}

fn random_unimodular(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<BigInt>> {
    let mut g: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    if d < 2 {
        if rng.gen_bool(0.5) {
            g[0][0] = BigInt::from(-1);
        }
        return g;
    }
    for _ in 0..6 {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(rng.gen_range(-2..=2));
        for r in g.iter_mut() {
            let add = &r[j] * &k;
            r[i] += add;
        }
        if rng.gen_bool(0.3) {
            for r in g.iter_mut() {
                r.swap(i, j);
            }
        }
    }
    g
}

fn verdict_bits(ws: &WeightSystem) -> Result<Vec<Option<bool>>, String> {
    let g = guard();
    let ssp = |v: torsep::Result<Verdict>| match v {
        Ok(v) => Ok(Some(v.holds)),
        Err(torsep::Error::Hypothesis { .. }) => Ok(None),
        Err(e) => Err(e.to_string()),
    };
    Ok(vec![
        Some(checked(decide_affine_sp(ws), ws)?.holds),
        Some(checked(decide_affine_wsp(ws), ws)?.holds),
        ssp(decide_affine_ssp(ws, &g))?,
        Some(checked(decide_projective_sp(ws), ws)?.holds),
        Some(checked(decide_projective_wsp(ws), ws)?.holds),
        ssp(decide_projective_ssp(ws, &g))?,
    ])
}

/// A failing SP/WSP witness `(a, b)` must still be a characteristic pair of
/// the relabelled system under `a ↦ inv[a]`.
fn witness_transfers(v: &Verdict, inv: &[usize], target: &WeightSystem) -> Check {
    let Some((a, b)) = v.witness_pair() else {
        return Ok(());
    };
    if matches!(
        v.certificate,
        Certificate::ContainsLine { .. } | Certificate::Dependent { .. }
    ) {
        return Ok(());
    }
    let pairs = characteristic_pairs(target, &guard()).map_err(|e| e.to_string())?;
    ensure(pairs.contains(&(inv[a], inv[b])), || {
        format!("witness ({a},{b}) does not transfer to {target:?}")
    })
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let ws = random_ws(&mut rng);
        let base = verdict_bits(&ws)?;
        let n = ws.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let p = ws.permuted(&perm);
        // p.weight(k) = ws.weight(perm[k]), so original index perm[k] becomes k.
        let mut inv = vec![0; n];
        for (k, &o) in perm.iter().enumerate() {
            inv[o] = k;
        }
        ensure(verdict_bits(&p)? == base, || {
            format!("permutation changes verdicts on {ws:?}")
        })?;
        for v in [decide_affine_sp(&ws), decide_affine_wsp(&ws)] {
            witness_transfers(&checked(v, &ws)?, &inv, &p)?;
        }
        let gl = random_unimodular(&mut rng, ws.dim());
        let t = ws.transformed(&gl);
        ensure(verdict_bits(&t)? == base, || {
            format!("GL transform changes verdicts on {ws:?}")
        })?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = guard();
    for _ in 0..200 {
        let ws = random_ws(&mut rng);
        let h = homogenize(&ws);
        let sp = checked(decide_projective_sp(&ws), &ws)?;
        let osp = checked(oracle_sp(&h, &g), &h)?;
        ensure(sp.holds == osp.holds, || {
            format!("projective SP disagrees on {ws:?}")
        })?;
        let wsp = checked(decide_projective_wsp(&ws), &ws)?;
        let owsp = checked(oracle_wsp(&h, &g), &h)?;
        ensure(wsp.holds == owsp.holds, || {
            format!("projective WSP disagrees on {ws:?}")
        })?;
        let ssp = checked(decide_projective_ssp(&ws, &g), &ws)?;
        let witness = ssp_coordinate_witness(&h, &g).map_err(|e| e.to_string())?;
        ensure(witness.is_some() != ssp.holds, || {
            format!("projective SSP disagrees on {ws:?}")
        })?;
    }
    Ok(())
}

fn random_gl2(rng: &mut ChaCha8Rng) -> [[BigRational; 2]; 2] {
    loop {
        let mut e = || BigRational::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into());
        let g = [[e(), e()], [e(), e()]];
        if !(&g[0][0] * &g[1][1] - &g[0][1] * &g[1][0]).is_zero() {
            return g;
        }
    }
}

fn criterion_8() -> Check {
    let mut cases: Vec<(BinaryForm, bool, String)> = Vec::new();
    for n in 2..=6 {
        let mut c = vec![0; n + 1];
        c[n - 1] = 1;
        cases.push((
            BinaryForm::from_i64(&c).unwrap(),
            true,
            format!("x*y^{}", n - 1),
        ));
    }
    cases.push((
        BinaryForm::from_i64(&[1, 0, 0]).unwrap(),
        false,
        "x^2".into(),
    ));
    cases.push((
        BinaryForm::from_i64(&[0, 0, 1, 0, 0]).unwrap(),
        false,
        "x^2*y^2".into(),
    ));
    cases.push((
        BinaryForm::from_i64(&[1, 0, 2, 0, 1]).unwrap(),
        false,
        "(x^2+y^2)^2".into(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (f, expected, name) in &cases {
        ensure(decide_sp_binary_orbit(f) == *expected, || {
            format!("{name}: expected {expected}")
        })?;
        for _ in 0..100 {
            let g = random_gl2(&mut rng);
            let h = f.substitute(&g).map_err(|e| e.to_string())?;
            ensure(decide_sp_binary_orbit(&h) == *expected, || {
                format!("{name}: substitution {g:?} changes the verdict")
            })?;
            let dec = squarefree_multiplicity_parts(&h);
            ensure(dec.reconstruct() == h.coefficients(), || {
                format!("{name}: {h} does not reconstruct")
            })?;
            ensure(BinaryVerdict::new(&h).verify(), || {
                format!("{name}: {h} verdict does not verify")
            })?;
            VERIFIED.fetch_add(1, Ordering::Relaxed);
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let golden = [
        "2 3\n1 1\n2 0\n0 2\n",
        "3 4\n1 0 0\n0 0 1\n1 1 0\n0 1 1\n",
        "3 5\n1 0 0\n1 1 0\n0 1 2\n0 2 1\n1 0 1\n",
        "2 4\n1 2\n1 1\n3 0\n0 2\n",
    ];
    for text in golden {
        let out = Command::new(env!("CARGO_BIN_EXE_torsep"))
            .args(["verify", "--format", "json", "-e", text])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || {
            format!("verify exited {:?} on {text:?}", out.status.code())
        })?;
        let json: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        ensure(
            json["certificates_verified"] == serde_json::Value::Bool(true),
            || format!("certificates not verified on {text:?}"),
        )?;
        let agree = json["cross_checks"]
            .as_array()
            .is_some_and(|c| !c.is_empty() && c.iter().all(|c| c["agreement"] == true));
        ensure(agree, || format!("cross-checks disagree on {text:?}"))?;
    }
    for form in ["x*y^3", "x^2*y^2", "(x^2+y^2)^2"] {
        let status = Command::new(env!("CARGO_BIN_EXE_torsep"))
            .args(["binary", "-e", form])
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.code() == Some(0), || {
            format!("binary exited {status} on {form}")
        })?;
    }
    let count = VERIFIED.load(Ordering::Relaxed);
    ensure(count > 0, || "no certificates checked".into())?;
    println!("    {count} certificates re-verified by exact arithmetic");
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (
            "1 golden M: SP fails with witness (2,1), WSP holds",
            criterion_1,
        ),
        (
            "2 golden N: SP holds, cone hypothesis verified, SSP fails",
            criterion_2,
        ),
        (
            "3 golden five-weight example: SP, kernel span, pattern scan, vanishing",
            criterion_3,
        ),
        (
            "4 projective plane example: SP holds, SSP fails",
            criterion_4,
        ),
        ("5 randomized equivalence, 500 instances", criterion_5),
        (
            "6 permutation and GL(d,Z) invariance, 100 instances",
            criterion_6,
        ),
        (
            "7 projective consistency against the oracle, 200 instances",
            criterion_7,
        ),
        (
            "8 binary forms: verdicts, GL2 invariance, reconstruction",
            criterion_8,
        ),
        (
            "9 certificate soundness and verify on the golden set",
            criterion_9,
        ),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match &result {
            Ok(()) => println!("[PASS] {name} ({ms:.0} ms)"),
            Err(why) => {
                println!("[FAIL] {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
