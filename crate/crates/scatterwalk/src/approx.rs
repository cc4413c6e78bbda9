//! Closed-form evaluation of the approximate `-π/4` / `-3π/4` switch family.
//!
//! A rail of `m` phase gadgets (odd `m`) between two basis-change gadgets has
//! a four-terminal S-matrix that is off-diagonal with 2×2 blocks
//!
//! ```text
//! V(-π/4)  = -U · diag(-i^{m-1} e^{imφ}, 1) · U
//! V(-3π/4) = -U* · diag(i^{m-1} e^{imφ}, 1) · U*
//! ```
//!
//! where `U = -(1/√2)[[i, 1], [1, i]]` and `e^{iφ} = 2√2/3 + i/3`. A perfect
//! switch would have `V(-π/4) = diag(-1, 1)` and `V(-3π/4) = [[0, i], [i, 0]]`;
//! because `φ/π` is irrational the orbit `e^{2ijφ}` is dense on the circle
//! and the targets can be approached arbitrarily well but never reached.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::constructions::approx_switch;
use crate::error::{Error, Result};
use crate::momentum::Momentum;
use crate::scatter::s_matrix;

/// The phase constant `e^{iφ} = 2√2/3 + i/3`, `φ = arctan(1/(2√2))`.
#[derive(Clone, Copy, Debug)]
pub struct PhaseConstant;

impl PhaseConstant {
    pub fn exp_iphi() -> Complex64 {
        Complex64::new(2.0 * std::f64::consts::SQRT_2 / 3.0, 1.0 / 3.0)
    }

    pub fn phi() -> f64 {
        (1.0 / (2.0 * std::f64::consts::SQRT_2)).atan()
    }

    /// `e^{2iφ} = 7/9 + (4√2/9) i`, the exact step of the odd-`m` recursion.
    pub fn exp_2iphi() -> Complex64 {
        Complex64::new(7.0 / 9.0, 4.0 * std::f64::consts::SQRT_2 / 9.0)
    }
}

/// The two 2×2 transmission blocks of the switch at size `m` and their
/// distance from the perfect-switch targets.
#[derive(Clone, Debug)]
pub struct SwitchApproximant {
    pub m: u64,
    pub v_quarter: Matrix2<Complex64>,
    pub v_three_quarter: Matrix2<Complex64>,
    /// Max over both momenta of the spectral-norm distance to the target.
    pub error: f64,
    /// Same distance in the Frobenius norm, for reference.
    pub error_frobenius: f64,
}

fn u_bc() -> Matrix2<Complex64> {
    let s = -1.0 / std::f64::consts::SQRT_2;
    Matrix2::new(
        Complex64::new(0.0, s),
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(0.0, s),
    )
}

fn target_quarter() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

fn target_three_quarter() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    )
}

/// Largest singular value of a 2×2 complex matrix.
pub fn spectral_norm(a: &Matrix2<Complex64>) -> f64 {
    let g = a.adjoint() * a;
    // Eigenvalues of the 2×2 Hermitian PSD matrix G.
    let tr = g[(0, 0)].re + g[(1, 1)].re;
    let det = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 + disc).max(0.0).sqrt()
}

fn frobenius_norm(a: &Matrix2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `i^{m-1} e^{imφ}` for odd `m`, the only `m`-dependent quantity.
fn rail_phase(m: u64) -> Complex64 {
    let phi = PhaseConstant::phi();
    let j = (m - 1) / 2;
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::from_polar(1.0, m as f64 * phi) * sign
}

/// Evaluates both closed-form blocks and the distance to the perfect-switch
/// targets. `m` must be odd.
pub fn v_matrices(m: u64) -> Result<SwitchApproximant> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::Precondition(format!("m must be odd, got {m}")));
    }
    let z = rail_phase(m);
    let one = Complex64::new(1.0, 0.0);
    let u = u_bc();
    let u_conj = u.map(|x| x.conj());
    let um_quarter = Matrix2::new(
        -z,
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        one,
    );
    let um_three_quarter = Matrix2::new(
        z,
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        one,
    );
    let v_quarter = -(u * um_quarter * u);
    let v_three_quarter = -(u_conj * um_three_quarter * u_conj);
    let d_quarter = v_quarter - target_quarter();
    let d_three_quarter = v_three_quarter - target_three_quarter();
    let error = spectral_norm(&d_quarter).max(spectral_norm(&d_three_quarter));
    let error_frobenius = frobenius_norm(&d_quarter).max(frobenius_norm(&d_three_quarter));
    Ok(SwitchApproximant {
        m,
        v_quarter,
        v_three_quarter,
        error,
        error_frobenius,
    })
}

/// Record-breaking sizes: every odd `m ≤ m_max` whose error beats all smaller
/// odd sizes, in increasing `m` (so strictly decreasing error).
///
/// The phase is accumulated by repeated multiplication with the exact
/// `e^{2iφ}` step and renormalized periodically, so the sweep stays accurate
/// far past `m = 10⁶`.
pub fn search_best_m(m_max: u64) -> Vec<(u64, f64)> {
    let mut records = Vec::new();
    let mut best = f64::INFINITY;
    let step = -PhaseConstant::exp_2iphi(); // advances i^{m-1} e^{imφ} by Δm = 2
    let mut z = PhaseConstant::exp_iphi(); // m = 1
    let mut m = 1u64;
    while m <= m_max {
        // error(m) = |1 - i^{m-1} e^{imφ}|, see the norm identity tests.
        let err = (Complex64::new(1.0, 0.0) - z).norm();
        if err < best {
            best = err;
            records.push((m, err));
        }
        z *= step;
        if m % 2048 == 1 {
            z /= z.norm();
        }
        m += 2;
    }
    records
}

/// Builds the graph for size `m`, solves its S-matrix at both momenta and
/// returns the largest entrywise deviation of the transmission blocks from
/// the closed form.
pub fn validate_against_graph(m: u64, tol: f64) -> Result<f64> {
    let approximant = v_matrices(m)?;
    let gadget = approx_switch(m as usize)?;
    let mut worst = 0.0f64;
    for (fraction, block) in [
        ((1, 4), &approximant.v_quarter),
        ((3, 4), &approximant.v_three_quarter),
    ] {
        let k = Momentum::from_fraction(fraction.0, fraction.1)?;
        let s = s_matrix(&gadget, k)?;
        for i in 0..2 {
            for j in 0..2 {
                let dev = (s.entries[(i, j + 2)] - block[(i, j)]).norm();
                worst = worst.max(dev);
            }
        }
    }
    if worst >= tol {
        return Err(Error::ExactInconsistency(format!(
            "graph S-matrix deviates from the closed form by {worst:.3e} at m = {m}"
        )));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_constant_is_unit() {
        assert!((PhaseConstant::exp_iphi().norm() - 1.0).abs() < 1e-15);
        assert!((PhaseConstant::exp_2iphi().norm() - 1.0).abs() < 1e-15);
        let sq = PhaseConstant::exp_iphi() * PhaseConstant::exp_iphi();
        assert!((sq - PhaseConstant::exp_2iphi()).norm() < 1e-15);
    }

    #[test]
    fn known_error_values() {
        // |e^{iφ} - 1| = (2 - √2)/√3 ≈ 0.3382 at m = 1.
        let m1 = v_matrices(1).unwrap();
        let expect = (2.0 - std::f64::consts::SQRT_2) / 3f64.sqrt();
        assert!((m1.error - expect).abs() < 1e-12, "{}", m1.error);

        let m37 = v_matrices(37).unwrap();
        assert!((m37.error - 0.0076).abs() < 0.0005, "{}", m37.error);
        let m379 = v_matrices(379).unwrap();
        assert!((m379.error - 0.0071).abs() < 0.0005, "{}", m379.error);
        assert!(m379.error < m37.error);

        assert!(v_matrices(2).is_err());
        assert!(v_matrices(0).is_err());
    }

    #[test]
    fn blocks_are_unitary() {
        for m in (1..=999).step_by(2) {
            let a = v_matrices(m).unwrap();
            for v in [&a.v_quarter, &a.v_three_quarter] {
                let defect = (v.adjoint() * v - Matrix2::identity())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(defect < 1e-12, "m={m} defect {defect}");
            }
        }
    }

    #[test]
    fn middle_rail_blocks_flip_one_sign() {
        // Independent route: solve the four-terminal middle gadget (phase
        // chain on top, two-edge path below) and compare its transmission
        // block with diag(∓ i^{m-1} e^{imφ}, 1); only the rail entry flips
        // sign between the two momenta.
        use crate::constructions::phase_gadget;
        use crate::graph::Gadget;
        for m in [1usize, 3, 5, 7] {
            let ph = phase_gadget();
            let mut chain = ph.clone();
            for _ in 1..m {
                chain = chain.series_merge(1, &ph, 0).unwrap();
            }
            let (graph, offset) = chain
                .graph()
                .disjoint_union(&crate::graph::Graph::new(3, [(0, 1), (1, 2)]).unwrap());
            let terminals = vec![
                chain.terminals()[0],
                offset,
                chain.terminals()[1],
                offset + 2,
            ];
            let middle = Gadget::from_graph(graph, terminals).unwrap();
            let z = rail_phase(m as u64);
            for (frac, rail) in [((1u64, 4u64), -z), ((3, 4), z)] {
                let k = Momentum::from_fraction(frac.0, frac.1).unwrap();
                let s = s_matrix(&middle, k).unwrap();
                assert!((s.entries[(0, 2)] - rail).norm() < 1e-9, "m={m}");
                assert!((s.entries[(1, 3)] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
                assert!(s.entries[(0, 3)].norm() < 1e-9);
                assert!(s.entries[(1, 2)].norm() < 1e-9);
                assert!(s.entries[(0, 0)].norm() < 1e-9);
            }
        }
    }

    #[test]
    fn error_equals_phase_distance() {
        // Cross-check of two computations: the spectral-norm error equals
        // |i^{m+1} e^{imφ} + 1| for every odd m.
        let phi = PhaseConstant::phi();
        for m in (1..=999).step_by(2) {
            let a = v_matrices(m).unwrap();
            let ipow = match (m + 1) % 4 {
                0 => Complex64::new(1.0, 0.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => unreachable!("m odd"),
            };
            let closed =
                (ipow * Complex64::from_polar(1.0, m as f64 * phi) + Complex64::new(1.0, 0.0))
                    .norm();
            assert!(
                (a.error - closed).abs() < 1e-10,
                "m={m}: {} vs {}",
                a.error,
                closed
            );
            assert!((a.error - a.error_frobenius).abs() < 1e-10);
        }
    }

    #[test]
    fn record_search_matches_frozen_values() {
        let records = search_best_m(400);
        let ms: Vec<u64> = records.iter().map(|r| r.0).collect();
        assert_eq!(ms, vec![1, 27, 37, 379]);
        assert!(records
            .windows(2)
            .all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0));
        // Search errors agree with the spectral-norm computation.
        for &(m, err) in &records {
            assert!((v_matrices(m).unwrap().error - err).abs() < 1e-10);
        }
        let tiny = search_best_m(1);
        assert_eq!(tiny.len(), 1);
        assert_eq!(tiny[0].0, 1);
        assert!((tiny[0].1 - v_matrices(1).unwrap().error).abs() < 1e-12);
    }

    #[test]
    fn long_search_improves_past_records() {
        let records = search_best_m(100_000);
        let (m, err) = *records.last().unwrap();
        assert_eq!(m, 58_323);
        assert!((err - 1.8595e-5).abs() < 1e-8, "{err}");
        assert!(err < 0.0071);
    }

    #[test]
    fn graph_agrees_with_closed_form() {
        for m in [1u64, 3] {
            let dev = validate_against_graph(m, 1e-8).unwrap();
            assert!(dev < 1e-8, "m={m} dev={dev}");
        }
    }

    #[test]
    fn downgraded_switch_routes_within_twice_the_error() {
        // Dropping terminal (1,2) leaves a three-terminal gadget whose
        // routing magnitudes stay within 2·error(m) of perfect.
        use crate::constructions::approx_switch;
        use crate::scatter::scattering_solve;
        for m in [1u64, 3, 37] {
            let err = v_matrices(m).unwrap().error;
            let three = approx_switch(m as usize).unwrap().downgrade_terminal(1).unwrap();
            let quarter = Momentum::from_fraction(1, 4).unwrap();
            let sol = scattering_solve(&three, quarter, 0).unwrap();
            assert!(
                sol.s_row[1].norm() >= 1.0 - 2.0 * err,
                "m={m}: |S12(-π/4)| = {}",
                sol.s_row[1].norm()
            );
            let three_quarter = Momentum::from_fraction(3, 4).unwrap();
            let sol = scattering_solve(&three, three_quarter, 0).unwrap();
            assert!(
                sol.s_row[2].norm() >= 1.0 - 2.0 * err,
                "m={m}: |S13(-3π/4)| = {}",
                sol.s_row[2].norm()
            );
        }
    }

    #[test]
    fn orbit_never_closes_numerically() {
        // φ/π is irrational, so e^{2ijφ} never returns to 1; check the first
        // million steps stay bounded away.
        let step = PhaseConstant::exp_2iphi();
        let mut z = step;
        let mut min = f64::INFINITY;
        for j in 1..=1_000_000u64 {
            min = min.min((z - Complex64::new(1.0, 0.0)).norm());
            z *= step;
            if j % 4096 == 0 {
                z /= z.norm();
            }
        }
        assert!(min > 1e-12, "orbit got within {min:.3e} of closing");
        // Frozen from the sweep itself: the closest approach is ~5.1e-6.
        assert!(min < 1e-4);
    }
}
