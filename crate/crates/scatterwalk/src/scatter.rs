//! S-matrix computation and reflection/transmission classification.
//!
//! For a gadget with terminals `(1,1) .. (1,N)` and momentum `k ∈ (-π, 0)`,
//! the incoming scattering state on path `j` has the closed form
//! `⟨x,j'|sc_j(k)⟩ = δ_{j'j} e^{-ikx} + S_{j'j}(k) e^{ikx}` on the attached
//! paths. Substituting that form into the eigenvalue equation
//! `H|sc⟩ = 2cos(k)|sc⟩` at the vertices of the finite gadget leaves a square
//! linear system for the `N` S-matrix entries of row `j` and the amplitudes
//! at the internal vertices; this module assembles and solves it.
//!
//! At a terminal vertex the substitution collapses to the convenient identity
//! `Σ_{u ~ (1,j')} ⟨u|sc⟩ = δ_{j'j} + S_{j'j}`, because
//! `2cos(k) e^{±ik} - e^{±2ik} = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Gadget;
use crate::momentum::Momentum;

/// Default tolerance for "perfect" reflection or transmission.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Residual bound the solver enforces on the eigenvalue equations.
pub const SOLVER_RESIDUAL: f64 = 1e-9;

/// Momenta with `|sin k|` below this are rejected: at the band edges the
/// group speed `|2 sin k|` vanishes and the scattering problem degenerates.
pub const BAND_EDGE_GUARD: f64 = 1e-6;

/// Relative singular-value cutoff separating the numerical nullspace.
const RANK_EPS: f64 = 1e-10;

/// One row of the S-matrix plus the internal amplitudes at a momentum.
#[derive(Clone, Debug)]
pub struct ScatteringSolution {
    pub momentum: Momentum,
    /// Index of the incoming path `j`.
    pub incoming: usize,
    /// `S_{j'j}(k)` for `j' = 0 .. N-1`.
    pub s_row: Vec<Complex64>,
    /// Amplitudes at the internal vertices, aligned with `internal_vertices`.
    pub internal: Vec<Complex64>,
    pub internal_vertices: Vec<u32>,
    /// `2 cos k`.
    pub energy: f64,
    /// Max-norm residual of the assembled eigenvalue equations.
    pub residual: f64,
    /// Dimension of the numerical nullspace (confined bound states sharing
    /// the energy `2 cos k`).
    pub nullity: usize,
}

impl ScatteringSolution {
    /// `‖s_row‖₂`; flux conservation makes this 1.
    pub fn s_row_norm(&self) -> f64 {
        self.s_row.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A full S-matrix at one momentum: unitary and, because the Hamiltonian is
/// real, symmetric.
#[derive(Clone, Debug)]
pub struct SMatrix {
    pub momentum: Momentum,
    pub entries: DMatrix<Complex64>,
}

impl SMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest entry of `S†S - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let prod = self.entries.adjoint() * &self.entries;
        (prod - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `S - Sᵀ`.
    pub fn symmetry_defect(&self) -> f64 {
        (&self.entries - self.entries.transpose())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Per-momentum reflection/transmission magnitudes of a two-terminal gadget.
#[derive(Clone, Debug)]
pub struct RtRow {
    pub momentum: Momentum,
    /// `S₁₁(k)`.
    pub reflection: Complex64,
    /// `S₂₁(k) = S₁₂(k)`.
    pub transmission: Complex64,
}

/// The measured reflection set `R` and transmission set `T` of a
/// two-terminal gadget over a momentum grid.
#[derive(Clone, Debug)]
pub struct RtClassification {
    pub grid: Vec<Momentum>,
    pub tolerance: f64,
    pub rows: Vec<RtRow>,
    /// Momenta with `||S₁₁| - 1| < tolerance`.
    pub reflect: Vec<Momentum>,
    /// Momenta with `||S₁₂| - 1| < tolerance`.
    pub transmit: Vec<Momentum>,
}

/// Outcome of a momentum-switch check on a three-terminal gadget.
#[derive(Clone, Debug)]
pub struct SwitchCheck {
    pub is_switch: bool,
    pub tolerance: f64,
    pub rows: Vec<SwitchRow>,
}

/// Magnitude of the checked transmission for one momentum.
#[derive(Clone, Debug)]
pub struct SwitchRow {
    pub momentum: Momentum,
    /// Terminal index the momentum must transmit to (1 for the first set,
    /// 2 for the second).
    pub to_terminal: usize,
    pub magnitude: f64,
}

/// Solves the scattering eigenvalue problem for the incoming path `incoming`.
///
/// If confined bound states share the energy the system is rank-deficient;
/// the minimum-norm solution is returned and the S-row is checked to be
/// invariant under shifts along the nullspace (confined states vanish on the
/// attached paths, so the S-row is unique regardless).
pub fn scattering_solve(
    g: &Gadget,
    k: Momentum,
    incoming: usize,
) -> Result<ScatteringSolution> {
    let nt = g.terminal_count();
    if incoming >= nt {
        return Err(Error::TerminalIndex {
            index: incoming,
            count: nt,
        });
    }
    let kr = k.radians();
    if kr.sin().abs() < BAND_EDGE_GUARD {
        return Err(Error::BandEdge(kr.sin().abs()));
    }

    let n = g.vertex_count();
    let terminals = g.terminals();
    let internal = g.internal_vertices();
    // Column layout: 0..nt hold S_{j', incoming}, then internal amplitudes.
    let mut column = vec![usize::MAX; n];
    for (i, &t) in terminals.iter().enumerate() {
        column[t as usize] = i;
    }
    for (i, &w) in internal.iter().enumerate() {
        column[w as usize] = nt + i;
    }
    let is_terminal: Vec<bool> = {
        let mut v = vec![false; n];
        for &t in terminals {
            v[t as usize] = true;
        }
        v
    };

    let e_ik = Complex64::from_polar(1.0, kr);
    let e_mik = e_ik.conj();
    let energy = 2.0 * kr.cos();
    let incoming_vertex = terminals[incoming];

    let adj = g.graph().adjacency_lists();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut b = DVector::<Complex64>::zeros(n);

    for v in 0..n {
        let row = v;
        let mut constant = Complex64::new(0.0, 0.0);
        for &u in &adj[v] {
            let cu = column[u as usize];
            if is_terminal[u as usize] {
                m[(row, cu)] += e_ik;
                if u == incoming_vertex {
                    constant += e_mik;
                }
            } else {
                m[(row, cu)] += Complex64::new(1.0, 0.0);
            }
        }
        let cv = column[v];
        if is_terminal[v] {
            // Σ neighbors = δ + S.
            m[(row, cv)] -= Complex64::new(1.0, 0.0);
            b[row] = -constant
                + if v as u32 == incoming_vertex {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
        } else {
            m[(row, cv)] -= Complex64::new(energy, 0.0);
            b[row] = -constant;
        }
    }

    let residual_of = |x: &DVector<Complex64>| -> f64 {
        (&m * x - &b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    };

    // Always solve through the SVD: rank deficiency (confined bound states
    // sharing the energy) must be detected, and then the minimum-norm
    // solution is the canonical one.
    let svd = m.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let eps = sigma_max * RANK_EPS;
    let x = match svd.solve(&b, eps) {
        Ok(x) => x,
        Err(_) => return Err(Error::InconsistentSystem(f64::INFINITY)),
    };
    let v_t = svd.v_t.as_ref().expect("requested");
    let small: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= eps)
        .collect();
    let nullity = small.len();

    if nullity > 0 {
        // Null vectors must vanish on the S-row coordinates: confined states
        // carry no amplitude on the attached paths. Re-solving with a random
        // shift along the nullspace must leave the S-row unchanged.
        let mut rng = SplitMix::new(0x5ca77e2);
        let mut shifted = x.clone();
        for &i in &small {
            let mut outgoing = 0.0f64;
            let coeff = Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5);
            for c in 0..n {
                let component = v_t[(i, c)].conj();
                if c < nt {
                    outgoing = outgoing.max(component.norm());
                }
                shifted[c] += coeff * component;
            }
            if outgoing > 1e-7 {
                return Err(Error::DegenerateSystem(outgoing));
            }
        }
        let drift = (0..nt)
            .map(|j| (shifted[j] - x[j]).norm())
            .fold(0.0, f64::max);
        if drift > SOLVER_RESIDUAL {
            return Err(Error::DegenerateSystem(drift));
        }
    }

    let residual = residual_of(&x);
    if residual > SOLVER_RESIDUAL {
        return Err(Error::InconsistentSystem(residual));
    }

    Ok(ScatteringSolution {
        momentum: k,
        incoming,
        s_row: (0..nt).map(|j| x[j]).collect(),
        internal: (0..internal.len()).map(|i| x[nt + i]).collect(),
        internal_vertices: internal,
        energy,
        residual,
        nullity,
    })
}

/// The full N×N S-matrix at momentum `k`.
pub fn s_matrix(g: &Gadget, k: Momentum) -> Result<SMatrix> {
    let nt = g.terminal_count();
    let mut entries = DMatrix::<Complex64>::zeros(nt, nt);
    for j in 0..nt {
        let sol = scattering_solve(g, k, j)?;
        for (jp, s) in sol.s_row.iter().enumerate() {
            entries[(jp, j)] = *s;
        }
    }
    Ok(SMatrix {
        momentum: k,
        entries,
    })
}

/// Classifies a two-terminal gadget over a momentum grid into its perfect
/// reflection and perfect transmission sets.
pub fn classify_rt(g: &Gadget, grid: &[Momentum], tol: f64) -> Result<RtClassification> {
    if g.terminal_count() != 2 {
        return Err(Error::TerminalCount {
            expected: 2,
            actual: g.terminal_count(),
        });
    }
    if tol <= 0.0 {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut reflect = Vec::new();
    let mut transmit = Vec::new();
    for &k in grid {
        let sol = scattering_solve(g, k, 0)?;
        let (r, t) = (sol.s_row[0], sol.s_row[1]);
        if (r.norm() - 1.0).abs() < tol {
            reflect.push(k);
        }
        if (t.norm() - 1.0).abs() < tol {
            transmit.push(k);
        }
        rows.push(RtRow {
            momentum: k,
            reflection: r,
            transmission: t,
        });
    }
    Ok(RtClassification {
        grid: grid.to_vec(),
        tolerance: tol,
        rows,
        reflect,
        transmit,
    })
}

/// Checks whether a three-terminal gadget routes every momentum in `set_a`
/// from terminal 1 to terminal 2 and every momentum in `set_b` from
/// terminal 1 to terminal 3, with unit-magnitude amplitudes.
pub fn is_momentum_switch(
    g: &Gadget,
    set_a: &[Momentum],
    set_b: &[Momentum],
    tol: f64,
) -> Result<SwitchCheck> {
    if g.terminal_count() != 3 {
        return Err(Error::TerminalCount {
            expected: 3,
            actual: g.terminal_count(),
        });
    }
    for a in set_a {
        if set_b.iter().any(|b| a.same_as(b)) {
            return Err(Error::Precondition(format!(
                "momentum sets overlap at {a}"
            )));
        }
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for (set, target) in [(set_a, 1usize), (set_b, 2usize)] {
        for &k in set {
            let sol = scattering_solve(g, k, 0)?;
            let magnitude = sol.s_row[target].norm();
            if (magnitude - 1.0).abs() >= tol {
                ok = false;
            }
            rows.push(SwitchRow {
                momentum: k,
                to_terminal: target,
                magnitude,
            });
        }
    }
    Ok(SwitchCheck {
        is_switch: ok,
        tolerance: tol,
        rows,
    })
}

/// Transmission coefficient of the series merge of two perfectly transmitting
/// gadgets: `e^{2ik} t₁ t₂`.
pub fn series_transmission(t1: Complex64, t2: Complex64, k: Momentum) -> Result<Complex64> {
    for (label, t) in [("t1", t1), ("t2", t2)] {
        if (t.norm() - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Precondition(format!(
                "{label} must have unit magnitude, |{label}| = {}",
                t.norm()
            )));
        }
    }
    Ok(Complex64::from_polar(1.0, 2.0 * k.radians()) * t1 * t2)
}

/// Small deterministic generator for the confined-shift check; no external
/// randomness so results are reproducible.
struct SplitMix {
    state: u64,
}

impl SplitMix {
    fn new(seed: u64) -> Self {
        SplitMix { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cycle_gadget, path_gadget, quarter_half_switch};
    use std::f64::consts::FRAC_PI_4;

    fn k(p: u64, q: u64) -> Momentum {
        Momentum::from_fraction(p, q).unwrap()
    }

    #[test]
    fn single_edge_transmits_with_phase() {
        let g = Gadget::new(2, [(0, 1)], vec![0, 1]).unwrap();
        let sol = scattering_solve(&g, k(1, 2), 0).unwrap();
        // Direct substitution into the two vertex equations gives R = 0,
        // T = e^{-ik} = i at k = -π/2.
        assert!(sol.s_row[0].norm() < 1e-12);
        assert!((sol.s_row[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((sol.s_row_norm() - 1.0).abs() < 1e-12);
        assert!(sol.residual < SOLVER_RESIDUAL);
    }

    #[test]
    fn two_edge_path_transmits_everywhere() {
        let g = Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).unwrap();
        for j in 1..20 {
            let km = k(j, 20);
            let sol = scattering_solve(&g, km, 0).unwrap();
            assert!(
                (sol.s_row[1] - Complex64::new(1.0, 0.0)).norm() < 1e-9,
                "T != 1 at {km}"
            );
        }
    }

    #[test]
    fn quarter_half_switch_matches_reference_matrices() {
        let g = quarter_half_switch();
        let s = s_matrix(&g, k(1, 4)).unwrap();
        let w = Complex64::from_polar(1.0, -FRAC_PI_4);
        let expected = [
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), w],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
            [w, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (s.entries[(i, j)] - expected[i][j]).norm() < 1e-8,
                    "entry ({i},{j}) = {}",
                    s.entries[(i, j)]
                );
            }
        }

        let s2 = s_matrix(&g, k(1, 2)).unwrap();
        let m1 = Complex64::new(-1.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let expected = match (i, j) {
                    (0, 1) | (1, 0) => m1,
                    (2, 2) => Complex64::new(1.0, 0.0),
                    _ => Complex64::new(0.0, 0.0),
                };
                assert!((s2.entries[(i, j)] - expected).norm() < 1e-8);
            }
        }
        assert!(s.unitarity_defect() < 1e-9);
        assert!(s.symmetry_defect() < 1e-9);
    }

    #[test]
    fn classify_matches_small_family_values() {
        let (path22, _) = path_gadget(2, 2).unwrap();
        let grid = [k(1, 4), k(1, 2), k(3, 4)];
        let rt = classify_rt(&path22, &grid, DEFAULT_TOL).unwrap();
        assert_eq!(rt.reflect, vec![k(1, 4), k(3, 4)]);
        assert_eq!(rt.transmit, vec![k(1, 2)]);

        let (square, _) = cycle_gadget(4).unwrap();
        let rt = classify_rt(&square, &grid, DEFAULT_TOL).unwrap();
        assert_eq!(rt.transmit, vec![k(1, 4), k(3, 4)]);
        assert_eq!(rt.reflect, vec![k(1, 2)]);

        let (triangle, _) = cycle_gadget(3).unwrap();
        let rt = classify_rt(&triangle, &[k(1, 3), k(2, 3)], DEFAULT_TOL).unwrap();
        assert_eq!(rt.transmit, vec![k(1, 3)]);
        assert_eq!(rt.reflect, vec![k(2, 3)]);

        assert!(classify_rt(&quarter_half_switch(), &grid, DEFAULT_TOL).is_err());
    }

    #[test]
    fn switch_check_accepts_and_rejects() {
        let g = quarter_half_switch();
        let check = is_momentum_switch(&g, &[k(1, 2)], &[k(1, 4)], DEFAULT_TOL).unwrap();
        assert!(check.is_switch);
        assert!(check.rows.iter().all(|r| (r.magnitude - 1.0).abs() < 1e-9));

        // Roles swapped: |S₁₂(-π/4)| = 0.
        let swapped = is_momentum_switch(&g, &[k(1, 4)], &[k(1, 2)], DEFAULT_TOL).unwrap();
        assert!(!swapped.is_switch);

        assert!(is_momentum_switch(&g, &[k(1, 2)], &[k(1, 2)], DEFAULT_TOL).is_err());
        let two = Gadget::new(2, [(0, 1)], vec![0, 1]).unwrap();
        assert!(is_momentum_switch(&two, &[k(1, 2)], &[k(1, 4)], DEFAULT_TOL).is_err());
    }

    #[test]
    fn downgrade_turns_switch_into_rt_gadget() {
        let g = quarter_half_switch();
        let grid = [k(1, 4), k(1, 2)];

        let drop3 = g.downgrade_terminal(2).unwrap();
        let rt = classify_rt(&drop3, &grid, DEFAULT_TOL).unwrap();
        assert!(rt.transmit.contains(&k(1, 2)));
        assert!(rt.reflect.contains(&k(1, 4)));

        let drop2 = g.downgrade_terminal(1).unwrap();
        let rt = classify_rt(&drop2, &grid, DEFAULT_TOL).unwrap();
        assert!(rt.transmit.contains(&k(1, 4)));
        assert!(rt.reflect.contains(&k(1, 2)));
    }

    #[test]
    fn series_transmission_formula() {
        let one = Complex64::new(1.0, 0.0);
        let t = series_transmission(one, one, k(1, 2)).unwrap();
        assert!((t - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        // e^{2ik} t₁ t₂ with t₁ = t₂ = -e^{iφ} at k = -π/4 is -i e^{2iφ}.
        let phi = (1.0 / (2.0 * 2f64.sqrt())).atan();
        let tphi = -Complex64::from_polar(1.0, phi);
        let got = series_transmission(tphi, tphi, k(1, 4)).unwrap();
        let want = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, 2.0 * phi);
        assert!((got - want).norm() < 1e-12);

        assert!(series_transmission(Complex64::new(0.5, 0.0), one, k(1, 2)).is_err());
    }

    #[test]
    fn confined_states_leave_s_row_unique() {
        // The square attached through a connector has a confined state at
        // energy 0 (k = -π/2): the alternating vector on the two vertices
        // adjacent to the attachment point.
        let (square, _) = cycle_gadget(4).unwrap();
        let sol = scattering_solve(&square, k(1, 2), 0).unwrap();
        assert!(sol.nullity >= 1, "expected a confined state");
        assert!((sol.s_row[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!(sol.s_row[1].norm() < 1e-9);
        assert!((sol.s_row_norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn band_edges_are_rejected() {
        let g = Gadget::new(2, [(0, 1)], vec![0, 1]).unwrap();
        let near_zero = Momentum::from_radians(-1e-8).unwrap();
        assert!(matches!(
            scattering_solve(&g, near_zero, 0),
            Err(Error::BandEdge(_))
        ));
        let near_pi = Momentum::from_radians(-std::f64::consts::PI + 1e-9).unwrap();
        assert!(matches!(
            scattering_solve(&g, near_pi, 0),
            Err(Error::BandEdge(_))
        ));
    }
}
