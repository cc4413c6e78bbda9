//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them). Tolerances are pinned
//! here and nowhere else.

use std::time::Instant;

use num_complex::Complex64;

use scatterwalk::approx::{search_best_m, v_matrices, validate_against_graph};
use scatterwalk::constructions::{
    basis_change, cycle_spec, phase_gadget, predict_reflection, predict_transmission,
    quarter_half_switch, reversal, switch_from_type2, third_switch_reference,
    transmission_witness,
};
use scatterwalk::corpus;
use scatterwalk::dynamics::{scatter_experiment, RunOptions, WavePacket};
use scatterwalk::exactq2::{
    conjugation_check, exact_s_matrix, ConjugationOutcome, ExactMomentum, Q2Scalar,
};
use scatterwalk::scatter::{classify_rt, is_momentum_switch, s_matrix, scattering_solve};
use scatterwalk::{Gadget, Momentum};

fn k(p: u64, q: u64) -> Momentum {
    Momentum::from_fraction(p, q).unwrap()
}

fn pass(id: &str, what: &str) {
    println!("criterion {id}: PASS — {what}");
}

fn assert_close(actual: Complex64, expected: Complex64, tol: f64, context: &str) {
    let dev = (actual - expected).norm();
    assert!(dev < tol, "{context}: |{actual} - {expected}| = {dev:.3e}");
}

fn set_of(moments: &[Momentum]) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = moments
        .iter()
        .map(|m| m.fraction().expect("rational grid"))
        .collect();
    v.sort_unstable();
    v
}

#[test]
fn criterion_01_reference_switch_matrices() {
    let start = Instant::now();
    let g = quarter_half_switch();

    let s = s_matrix(&g, k(1, 4)).unwrap();
    let w = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let zero = Complex64::new(0.0, 0.0);
    let expected_quarter = [
        [zero, zero, w],
        [zero, Complex64::new(-1.0, 0.0), zero],
        [w, zero, zero],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert_close(
                s.entries[(i, j)],
                expected_quarter[i][j],
                1e-8,
                &format!("S(-π/4)[{i}][{j}]"),
            );
        }
    }

    let s = s_matrix(&g, k(1, 2)).unwrap();
    let m1 = Complex64::new(-1.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let expected_half = [[zero, m1, zero], [m1, zero, zero], [zero, zero, one]];
    for i in 0..3 {
        for j in 0..3 {
            assert_close(
                s.entries[(i, j)],
                expected_half[i][j],
                1e-8,
                &format!("S(-π/2)[{i}][{j}]"),
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass("01", "reference switch S-matrices at -π/4 and -π/2, entrywise 1e-8");
}

#[test]
fn criterion_02_basis_change_and_phase_gadget() {
    let g = basis_change();
    let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
    let u = [
        [Complex64::new(0.0, -inv_sqrt2), Complex64::new(-inv_sqrt2, 0.0)],
        [Complex64::new(-inv_sqrt2, 0.0), Complex64::new(0.0, -inv_sqrt2)],
    ];
    for (frac, conj_sign) in [((1u64, 4u64), false), ((3, 4), true)] {
        let s = s_matrix(&g, k(frac.0, frac.1)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if conj_sign { -u[i][j].conj() } else { u[i][j] };
                // Off-diagonal block (terminals 1,2 against 3,4), both ways.
                assert_close(s.entries[(i, j + 2)], expect, 1e-8, "off-block");
                assert_close(s.entries[(i + 2, j)], expect, 1e-8, "off-block transpose");
                // Diagonal blocks vanish.
                assert!(s.entries[(i, j)].norm() < 1e-8);
                assert!(s.entries[(i + 2, j + 2)].norm() < 1e-8);
            }
        }
    }

    let ph = phase_gadget();
    let phase = Complex64::new(2.0 * std::f64::consts::SQRT_2 / 3.0, 1.0 / 3.0);
    assert!((phase.norm() - 1.0).abs() < 1e-15);
    let s = s_matrix(&ph, k(1, 4)).unwrap();
    assert_close(s.entries[(0, 1)], -phase, 1e-8, "T(-π/4)");
    let s = s_matrix(&ph, k(3, 4)).unwrap();
    assert_close(s.entries[(0, 1)], phase, 1e-8, "T(-3π/4)");

    pass("02", "basis-change blocks and phase-gadget coefficients to 1e-8");
}

#[test]
fn criterion_03_family_formulas() {
    let start = Instant::now();
    let mut checked = 0;
    for entry in corpus::path_instances()
        .into_iter()
        .chain(corpus::cycle_instances())
    {
        let predicted = entry.predicted.as_ref().expect("family prediction");
        let rt = classify_rt(&entry.gadget, &entry.grid, 1e-9).unwrap();
        assert_eq!(
            set_of(&rt.reflect),
            set_of(&predicted.reflect),
            "{}: reflection set mismatch",
            entry.name
        );
        assert_eq!(
            set_of(&rt.transmit),
            set_of(&predicted.transmit),
            "{}: transmission set mismatch",
            entry.name
        );
        checked += 1;
    }
    assert_eq!(checked, 49 + 10);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30 s");
    pass(
        "03",
        "all 49 path and 10 cycle instances reproduce their predicted R/T sets exactly",
    );
}

#[test]
fn criterion_04_certificate_soundness() {
    let mut reflect_checks = 0;
    let mut transmit_checks = 0;
    for entry in corpus::type1_corpus() {
        let rt = classify_rt(&entry.gadget, &entry.grid, 1e-9).unwrap();
        for km in &entry.grid {
            let measured_reflect = rt.reflect.iter().any(|m| m.same_as(km));
            let measured_transmit = rt.transmit.iter().any(|m| m.same_as(km));

            // Reflection certificates are a characterization.
            let cert_r = predict_reflection(&entry.spec, *km);
            assert_eq!(
                cert_r.is_some(),
                measured_reflect,
                "{} at {km}: reflection certificate vs measurement",
                entry.name
            );
            if let Some(c) = &cert_r {
                assert!(c.eigen_residual < 1e-10);
                assert!(c.constant.abs() > 1e-9);
            }
            reflect_checks += 1;

            // Transmission certificates never produce false positives, and
            // for single-attachment specs they are a characterization.
            let cert_t = predict_transmission(&entry.spec, *km);
            if cert_t.is_some() {
                assert!(
                    measured_transmit,
                    "{} at {km}: transmission certificate but no transmission",
                    entry.name
                );
            }
            if entry.spec.is_type2() {
                assert_eq!(
                    cert_t.is_some(),
                    measured_transmit,
                    "{} at {km}: single-attachment transmission iff",
                    entry.name
                );
            }
            transmit_checks += 1;
        }
    }
    assert!(reflect_checks > 1000 && transmit_checks > 1000);
    pass(
        "04",
        "certificates match measured sets: reflection iff, transmission sound (iff when |S| = 1)",
    );
}

#[test]
fn criterion_05_reversal_containments() {
    let mut instances = 0;
    for entry in corpus::type2_corpus() {
        let Ok(rev_spec) = reversal(&entry.spec) else {
            // Degenerate single-attachment specs (empty inner subgraph)
            // admit no reversal; they are not counted.
            continue;
        };
        let original = classify_rt(&entry.gadget, &entry.grid, 1e-9).unwrap();
        let reversed_gadget = scatterwalk::constructions::build_type1(&rev_spec);
        let flipped = classify_rt(&reversed_gadget, &entry.grid, 1e-9).unwrap();
        for r in &original.reflect {
            assert!(
                flipped.transmit.iter().any(|t| t.same_as(r)),
                "{}: {r} ∈ R but not in reversed T",
                entry.name
            );
        }
        for t in &original.transmit {
            assert!(
                flipped.reflect.iter().any(|r| r.same_as(t)),
                "{}: {t} ∈ T but not in reversed R",
                entry.name
            );
        }
        instances += 1;
    }
    assert!(instances >= 15, "only {instances} reversible instances");
    pass(
        "05",
        "reversal contains the swapped sets (R ⊆ T', T ⊆ R') on every reversible instance",
    );
}

#[test]
fn criterion_06_switch_assembly() {
    let spec = cycle_spec(3).unwrap();
    let switch = switch_from_type2(&spec).unwrap();
    assert!(
        switch.isomorphic_to(&third_switch_reference()),
        "assembled switch is not isomorphic to the hand-entered reference"
    );
    let check = is_momentum_switch(&switch, &[k(1, 3)], &[k(2, 3)], 1e-9).unwrap();
    assert!(check.is_switch);

    // The explicit transmission eigenstate solves the eigenvalue equation.
    let witness = transmission_witness(&spec, k(1, 3), 24)
        .unwrap()
        .expect("-π/3 transmits through the 3-cycle gadget");
    let residual = witness.eigen_residual();
    assert!(residual < 1e-10, "witness residual {residual:.3e}");

    pass(
        "06",
        "cycle-3 switch is isomorphic to the reference, routes -π/3 / -2π/3, witness residual < 1e-10",
    );
}

#[test]
fn criterion_07_approximate_switch() {
    let start = Instant::now();

    let a37 = v_matrices(37).unwrap();
    assert!(
        (a37.error - 0.0076).abs() < 0.0005,
        "error(37) = {}",
        a37.error
    );
    let a379 = v_matrices(379).unwrap();
    assert!(
        (a379.error - 0.0071).abs() < 0.0005,
        "error(379) = {}",
        a379.error
    );

    let records = search_best_m(400);
    let between: Vec<u64> = records
        .iter()
        .map(|r| r.0)
        .filter(|&m| m > 37 && m < 379)
        .collect();
    assert!(between.is_empty(), "unexpected records {between:?}");
    assert!(records.iter().any(|r| r.0 == 37));
    assert!(records.iter().any(|r| r.0 == 379));

    for m in [1, 3, 5] {
        let dev = validate_against_graph(m, 1e-8).unwrap();
        assert!(dev < 1e-8, "graph deviation {dev:.3e} at m = {m}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    pass(
        "07",
        "error(37) ≈ 0.0076, error(379) ≈ 0.0071, no record in between, graph matches closed form",
    );
}

#[test]
fn criterion_08_exact_field_suite() {
    let mut confirmed = 0;
    let mut agreements = 0;
    for (name, gadget) in corpus::small_two_terminal(12) {
        // Exact and floating S-matrices agree to 1e-12 at both momenta.
        for em in [ExactMomentum::QuarterPi, ExactMomentum::ThreeQuarterPi] {
            let exact = exact_s_matrix(&gadget, em).unwrap();
            let float = s_matrix(&gadget, em.momentum()).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let dev = (exact[i][j].to_complex64() - float.entries[(i, j)]).norm();
                    assert!(dev < 1e-12, "{name} at {:?}: dev {dev:.3e}", em);
                }
            }
            agreements += 1;
        }

        // The conjugation construction must confirm — and never alarm — on
        // every gadget that exactly reflects at -π/4, and exact reflection
        // at -π/4 must co-occur with exact reflection at -3π/4.
        let quarter = exact_s_matrix(&gadget, ExactMomentum::QuarterPi).unwrap();
        let reflects_exactly = quarter[1][0].is_zero();
        let outcome = conjugation_check(&gadget)
            .unwrap_or_else(|e| panic!("{name}: conjugation alarm: {e}"));
        match outcome {
            ConjugationOutcome::Confirmed(w) => {
                assert!(reflects_exactly, "{name}: confirmed without reflection");
                assert_eq!(w.reflection.norm_sqr(), Q2Scalar::one());
                let other = exact_s_matrix(&gadget, ExactMomentum::ThreeQuarterPi).unwrap();
                assert!(other[1][0].is_zero(), "{name}: -3π/4 must reflect too");
                assert_eq!(other[0][0].norm_sqr(), Q2Scalar::one());
                confirmed += 1;
            }
            ConjugationOutcome::NotApplicable { .. } => {
                assert!(!reflects_exactly, "{name}: reflector not confirmed");
            }
        }
    }
    assert!(agreements >= 100, "only {agreements} comparisons");
    assert!(confirmed >= 5, "only {confirmed} confirmed reflectors");
    pass(
        "08",
        "exact/float agreement to 1e-12 across the corpus; conjugation confirms every exact reflector",
    );
}

#[test]
fn criterion_09_dynamics() {
    let start = Instant::now();

    // Two-edge path: transmitted probability within 0.02 of 1.
    let path = Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).unwrap();
    let packet = WavePacket::new(0, 100.0, 10.0, k(1, 2)).unwrap();
    let report = scatter_experiment(&path, &packet, 200, &RunOptions::default()).unwrap();
    assert!(!report.leaked, "two-edge-path run leaked");
    assert!(
        (report.outgoing[1] - 1.0).abs() < 0.02,
        "transmitted {}",
        report.outgoing[1]
    );
    assert!(report.norm_drift < 1e-10);
    assert!(report.energy_drift < 1e-8);

    // The momentum switch routes packets to the momentum-selected arm.
    let switch = third_switch_reference();
    for (frac, good, wrong) in [((1u64, 3u64), 1usize, 2usize), ((2, 3), 2, 1)] {
        let km = k(frac.0, frac.1);
        let packet = WavePacket::new(0, 130.0, 16.0, km).unwrap();
        let options = RunOptions {
            time: Some((2.0 * 130.0 + 12.0) / km.group_speed() * 1.35),
            ..RunOptions::default()
        };
        let report = scatter_experiment(&switch, &packet, 340, &options).unwrap();
        assert!(!report.leaked, "switch run leaked at {km}");
        assert!(
            report.outgoing[good] >= 0.95,
            "{km}: routed {} to arm {}",
            report.outgoing[good],
            good + 1
        );
        assert!(
            report.outgoing[wrong] <= 0.02,
            "{km}: leaked {} to arm {}",
            report.outgoing[wrong],
            wrong + 1
        );
        assert!(report.norm_drift < 1e-10);
        assert!(report.energy_drift < 1e-8);
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, budget 2 min");
    pass(
        "09",
        "two-edge-path packet transmits within 0.02; switch routes ≥ 0.95 / ≤ 0.02; norm to 1e-10",
    );
}

#[test]
fn criterion_10_global_properties() {
    // Deterministic momentum sample away from the band edges.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let momenta: Vec<Momentum> = (0..50)
        .map(|_| {
            let v = -std::f64::consts::PI + 0.05 + next() * (std::f64::consts::PI - 0.1);
            Momentum::from_radians(v).unwrap()
        })
        .collect();

    let gadgets = corpus::property_suite();
    assert!(gadgets.len() >= 50, "corpus too small: {}", gadgets.len());
    for (name, gadget) in &gadgets {
        for km in &momenta {
            let s = s_matrix(gadget, *km).unwrap();
            let u = s.unitarity_defect();
            let sym = s.symmetry_defect();
            assert!(u < 1e-9, "{name} at {km}: unitarity defect {u:.3e}");
            assert!(sym < 1e-9, "{name} at {km}: symmetry defect {sym:.3e}");
            if gadget.terminal_count() == 2 {
                let sol = scattering_solve(gadget, *km, 0).unwrap();
                let total = sol.s_row[0].norm_sqr() + sol.s_row[1].norm_sqr();
                assert!(
                    (total - 1.0).abs() < 1e-9,
                    "{name} at {km}: |R|²+|T|² = {total}"
                );
            }
        }
    }
    pass(
        "10",
        "S(k) unitary and symmetric to 1e-9 over ≥ 50 gadgets × 50 momenta; |R|²+|T|² = 1",
    );
}
