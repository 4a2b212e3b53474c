//! End-to-end acceptance suite. Each criterion prints exactly one
//! `ACCEPTANCE <n> <name>: PASS|FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and then asserts it.

use std::collections::BTreeMap;

use num_rational::Ratio;

use subshift_core::audit::{
    audit_conformal_equality, audit_lrn, audit_mme, audit_stirling, audit_theorem1,
    counting_scan, stirling_gap, AuditCase,
};
use subshift_core::equilibrium::{
    partition_sum_pressure, smb_estimate, transfer_pressure, variational_scan,
};
use subshift_core::potential::cocycle;
use subshift_core::rng::{substream, uniform_usize};
use subshift_core::subshift::{
    extender_compare, extender_compare_radius, is_legal_pattern, language, swap_map,
    ExtenderRelation,
};
use subshift_core::{
    Alphabet, Dim, LocallyConstantPotential, Pattern, PointApprox, Potential, Shape,
    SvPotential,
};

const GOLDEN_PRESSURE: f64 = 0.481_211_825_059_603_45; // ln((1 + sqrt 5) / 2)

fn golden() -> subshift_core::SubshiftSpec {
    subshift_core::SubshiftSpec::golden_mean()
}

fn full() -> subshift_core::SubshiftSpec {
    subshift_core::SubshiftSpec::full_shift(Alphabet::binary(), Dim::One)
}

fn verdict(n: usize, name: &str, ok: bool) {
    println!(
        "ACCEPTANCE {n:2} {name}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {n} ({name}) failed");
}

/// All legal interval words of the given length, as patterns at 0.
fn words(spec: &subshift_core::SubshiftSpec, len: i64) -> Vec<Pattern> {
    language(spec, &Shape::interval(0, len))
        .unwrap()
        .into_iter()
        .collect()
}

#[test]
fn criterion_01_pressure_oracles() {
    let x = golden();
    let phi = LocallyConstantPotential::zero(Dim::One, 2);
    let (transfer, _) = transfer_pressure(&x, &phi).unwrap();
    let f16 = Shape::interval(0, 16);
    let count = language(&x, &f16).unwrap().len();
    let part = partition_sum_pressure(&x, &phi.clone().into(), &f16).unwrap();
    let expected_part = (count as f64).ln() / 16.0;
    let ok = (transfer.value - GOLDEN_PRESSURE).abs() <= 1e-9
        && count == 2584
        && (part.value - expected_part).abs() <= 1e-9
        && (transfer.value - part.value).abs() <= 0.02;
    verdict(1, "pressure-oracle-agreement", ok);
}

#[test]
fn criterion_02_variational_principle() {
    let mut ok = true;
    let cases: [(subshift_core::SubshiftSpec, LocallyConstantPotential); 2] = [
        (golden(), LocallyConstantPotential::zero(Dim::One, 2)),
        (full(), LocallyConstantPotential::beta_site(Dim::One, 1.0)),
    ];
    for (x, phi) in &cases {
        let (transfer, _) = transfer_pressure(x, phi).unwrap();
        let scan = variational_scan(x, phi, 500, 0xc0ffee).unwrap();
        ok &= scan.value <= transfer.value + 1e-9;
        ok &= transfer.value - scan.value <= 1e-3;
    }
    verdict(2, "variational-lower-bound", ok);
}

/// Shared scan: every certified-containment pair with |F| <= 4 in both
/// model shifts must satisfy the replaceability inequality.
fn scan_theorem1(x: &subshift_core::SubshiftSpec, phi: &Potential) -> (usize, usize) {
    let (_, measure) = transfer_pressure(x, phi.working()).unwrap();
    let mut audited = 0;
    let mut failures = 0;
    for len in 1..=4i64 {
        let ws = words(x, len);
        for v in &ws {
            for w in &ws {
                if v == w {
                    continue;
                }
                let extender = extender_compare(x, v, w, 6).unwrap();
                if !extender.is_contained() {
                    continue;
                }
                let case = AuditCase {
                    id: format!("scan-{}-{}", v.render(&x.alphabet()), w.render(&x.alphabet())),
                    subshift: x.clone(),
                    potential: phi.clone(),
                    v: v.clone(),
                    w: w.clone(),
                    extender,
                    measure: measure.clone(),
                };
                let report = audit_theorem1(&case).unwrap();
                audited += 1;
                if !report.passed() {
                    failures += 1;
                }
            }
        }
    }
    (audited, failures)
}

#[test]
fn criterion_03_replaceability_suite() {
    let mut ok = true;
    let mut total = 0;
    for x in [golden(), full()] {
        for beta in [0.0, -1.0, 0.5, 1.0] {
            let phi: Potential = if beta == 0.0 {
                Potential::zero(Dim::One, 2)
            } else {
                LocallyConstantPotential::beta_site(Dim::One, beta).into()
            };
            let (audited, failures) = scan_theorem1(&x, &phi);
            ok &= failures == 0;
            total += audited;
        }
    }
    ok &= total > 0;
    verdict(3, "replaceability-inequality-scan", ok);
}

#[test]
fn criterion_04_gibbs_equality_saturation() {
    let x = full();
    let phi: Potential = LocallyConstantPotential::beta_site(Dim::One, 1.0).into();
    let v = Pattern::word_1d(0, &[1]);
    let w = Pattern::word_1d(0, &[0]);
    let case = AuditCase::build("bernoulli-swap", &x, &phi, &v, &w, 6).unwrap();

    // mu([1]) = e/(1+e) and mu([0]) * e^psi saturate the inequality.
    let report = audit_theorem1(&case).unwrap();
    let check = &report.checks[0];
    let mut ok = report.passed() && (check.lhs - check.rhs).abs() <= 1e-9;
    let e = std::f64::consts::E;
    ok &= (check.lhs - e / (1.0 + e)).abs() <= 1e-9;
    ok &= (check.rhs - (1.0 / (1.0 + e)) * e).abs() <= 1e-9;

    // two-sided squeeze: r_n = e for every window size n <= 12
    let conformal = audit_conformal_equality(&case, 12).unwrap();
    ok &= conformal.passed();
    let lrn = audit_lrn(&case, 12).unwrap();
    ok &= lrn.passed();
    verdict(4, "gibbs-equality-saturation", ok);
}

#[test]
fn criterion_05_maximal_entropy_corollary() {
    let phi = Potential::zero(Dim::One, 2);

    // point-mass measure of the sunny-side-up family: mu([1]) = 0 <= 1 = mu([0])
    let sunny = subshift_core::SubshiftSpec::sunny_side_up();
    let case = AuditCase::build(
        "sunny-mme",
        &sunny,
        &phi,
        &Pattern::word_1d(0, &[1]),
        &Pattern::word_1d(0, &[0]),
        6,
    )
    .unwrap();
    let report = audit_mme(&case).unwrap();
    let mut ok = report.passed()
        && report.checks[0].lhs == 0.0
        && (report.checks[0].rhs - 1.0).abs() <= 1e-12;

    // full pair scan of the golden-mean Parry measure
    let x = golden();
    let (_, measure) = transfer_pressure(&x, phi.working()).unwrap();
    let mut audited = 0;
    for len in 1..=4i64 {
        let ws = words(&x, len);
        for v in &ws {
            for w in &ws {
                if v == w {
                    continue;
                }
                let extender = extender_compare(&x, v, w, 6).unwrap();
                if !extender.is_contained() {
                    continue;
                }
                let case = AuditCase {
                    id: "gm-mme-scan".to_string(),
                    subshift: x.clone(),
                    potential: phi.clone(),
                    v: v.clone(),
                    w: w.clone(),
                    extender,
                    measure: measure.clone(),
                };
                ok &= audit_mme(&case).unwrap().passed();
                audited += 1;
            }
        }
    }
    ok &= audited > 0;
    verdict(5, "maximal-entropy-corollary", ok);
}

#[test]
fn criterion_06_counting_bounds() {
    let x = golden();
    let v = Pattern::word_1d(0, &[0, 1]);
    let w = Pattern::word_1d(0, &[1, 0]);
    let report = counting_scan(&x, &v, &w, 8).unwrap();
    let ok = report.words_scanned == 55
        && report.injectivity_violations == 0
        && report.binomial_violations == 0
        && report.pairs_checked > 0;
    verdict(6, "replacement-counting-bounds", ok);
}

#[test]
fn criterion_07_binomial_gap_function() {
    // f(0.1 | a=2, b=1) against the frozen value, above the line c * 0.6
    let f = stirling_gap(2.0, 1.0, 0.1).unwrap();
    let mut ok = (f - 0.071_947_5).abs() <= 1e-5 && f > 0.1 * 0.6;
    // grid audit: positivity prefix, slope ln(2) at zero, exact
    // big-integer binomial cross-checks at n = 120 and n = 720
    let report = audit_stirling(
        Ratio::new(2, 1),
        Ratio::new(1, 1),
        Ratio::new(3, 5),
        11,
    )
    .unwrap();
    ok &= report.passed();
    ok &= report
        .checks
        .iter()
        .any(|c| c.name == "binomial-crosscheck-n720");
    ok &= report.checks.iter().any(|c| c.name == "slope-at-zero");
    verdict(7, "binomial-gap-function", ok);
}

#[test]
fn criterion_08_involution_and_cocycle() {
    // exhaustive involution check over every point with a legal core
    // on [0, 10) and zero background
    let x = golden();
    let v = Pattern::word_1d(0, &[1]);
    let w = Pattern::word_1d(0, &[0]);
    let window = Shape::interval(-13, 13);
    let mut ok = true;
    for core in words(&x, 10) {
        let pt = PointApprox::with_core(core, 0);
        let once = swap_map(&x, &v, &w, &pt).unwrap();
        let twice = swap_map(&x, &v, &w, &once).unwrap();
        ok &= twice.agrees_on(&pt, &window);
    }

    // cocycle additivity over seeded homoclinic triples, with the
    // summable-variation error brackets
    let fs = full();
    let phi: Potential = SvPotential::geometric_pair_potential(4).into();
    for i in 0..1000u64 {
        let mut rng = substream(0x7417, "triples", i);
        let mut word = |len: usize| -> Vec<u8> {
            (0..len).map(|_| uniform_usize(&mut rng, 2) as u8).collect()
        };
        let a = PointApprox::with_core(Pattern::word_1d(0, &word(6)), 0);
        let b = PointApprox::with_core(Pattern::word_1d(0, &word(6)), 0);
        let c = PointApprox::with_core(Pattern::word_1d(0, &word(6)), 0);
        let ab = cocycle(&phi, &fs, &a, &b).unwrap();
        let bc = cocycle(&phi, &fs, &b, &c).unwrap();
        let ac = cocycle(&phi, &fs, &a, &c).unwrap();
        let defect = (ab.value + bc.value - ac.value).abs();
        ok &= defect <= ab.error_bound + bc.error_bound + ac.error_bound + 1e-12;
    }
    verdict(8, "involution-and-cocycle", ok);
}

#[test]
fn criterion_09_entropy_sampling() {
    let mut ok = true;
    let cases: [(subshift_core::SubshiftSpec, LocallyConstantPotential, f64); 2] = [
        (
            golden(),
            LocallyConstantPotential::zero(Dim::One, 2),
            GOLDEN_PRESSURE,
        ),
        (
            full(),
            LocallyConstantPotential::beta_site(Dim::One, 1.0),
            (1.0 + std::f64::consts::E).ln(),
        ),
    ];
    for (x, phi, exact) in &cases {
        let (_, mu) = transfer_pressure(x, phi).unwrap();
        let phi: Potential = phi.clone().into();
        let est = smb_estimate(&mu, &phi, 1000, 200, 0xabcdef).unwrap();
        let again = smb_estimate(&mu, &phi, 1000, 200, 0xabcdef).unwrap();
        ok &= est == again; // bit-for-bit seed reproducibility
        ok &= (est - exact).abs() <= 0.02;
    }
    verdict(9, "sampled-entropy-agreement", ok);
}

#[test]
fn criterion_10_extender_semidecision() {
    let mut ok = true;

    // golden mean: direct radius-6 verdicts against the exact method,
    // with every separation witness re-verified
    let x = golden();
    for len in 1..=4i64 {
        let ws = words(&x, len);
        for v in &ws {
            for w in &ws {
                if v == w {
                    continue;
                }
                let exact = extender_compare(&x, v, w, 6).unwrap();
                let radius = extender_compare_radius(&x, v, w, 6).unwrap();
                ok &= exact.is_contained() == radius.is_contained();
                if let ExtenderRelation::NotContained { witness, .. } = &radius.relation {
                    let with_v = v.concat(witness).unwrap();
                    let with_w = w.concat(witness).unwrap();
                    ok &= is_legal_pattern(&x, &with_v).unwrap();
                    ok &= !is_legal_pattern(&x, &with_w).unwrap();
                }
            }
        }
    }

    // full shift: same agreement over all pairs, with per-word
    // finite-radius extender sets computed once and the radius rule
    // replayed over the cache
    let fs = full();
    for len in 1..=4i64 {
        let ws = words(&fs, len);
        let mut cache: BTreeMap<(usize, u32), _> = BTreeMap::new();
        for (i, v) in ws.iter().enumerate() {
            for r in 1..=6u32 {
                cache.insert(
                    (i, r),
                    subshift_core::subshift::n_extender_set(&fs, v, r).unwrap(),
                );
            }
        }
        for (i, v) in ws.iter().enumerate() {
            for (j, w) in ws.iter().enumerate() {
                if i == j {
                    continue;
                }
                let exact = extender_compare(&fs, v, w, 6).unwrap();
                let mut separated = false;
                for r in 1..=6u32 {
                    if !cache[&(i, r)].is_subset(&cache[&(j, r)]) {
                        separated = true;
                        break;
                    }
                }
                ok &= exact.is_contained() == !separated;
            }
        }
    }
    verdict(10, "extender-semidecision-soundness", ok);
}
