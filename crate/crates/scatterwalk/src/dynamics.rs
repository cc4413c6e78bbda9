//! Time-domain verification of the stationary scattering picture.
//!
//! A Gaussian wave packet `⟨x,j|ψ₀⟩ ∝ e^{-ikx} exp(-(x-x₀)²/(2σ²))` launched
//! on a truncated arm moves toward the gadget at group speed `|2 sin k|`,
//! scatters, and leaves outgoing probability on every arm. Integrating the
//! outer half of each arm after the traversal time must reproduce
//! `|S_{j'j}(k)|²` up to finite-width corrections.
//!
//! Evolution is exact (up to diagonalization accuracy): `e^{-iHt}` is applied
//! through a full dense eigendecomposition of the adjacency matrix. The
//! truncation is a hard wall, so runs are flagged invalid if probability
//! reaches the outermost sites before the run ends.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{attach_truncated_paths, Gadget, Graph, TruncatedGraph};
use crate::momentum::Momentum;
use crate::scatter::scattering_solve;

/// Norm drift allowed over a full run.
pub const NORM_DRIFT: f64 = 1e-10;

/// Probability at the three outermost sites of any arm that flags a leak.
pub const LEAK_THRESHOLD: f64 = 1e-6;

/// Dense-eigendecomposition size cap.
pub const DEFAULT_VERTEX_CAP: usize = 5000;

/// Safety factor applied to the default traversal time.
pub const DEFAULT_TIME_FACTOR: f64 = 1.2;

/// A Gaussian wave packet on one truncated arm.
#[derive(Clone, Copy, Debug)]
pub struct WavePacket {
    /// Arm index `j` the packet starts on.
    pub arm: usize,
    /// Center `x₀` in lattice sites from the gadget.
    pub center: f64,
    /// Width `σ > 0` of the amplitude envelope.
    pub width: f64,
    /// Carrier momentum.
    pub momentum: Momentum,
}

impl WavePacket {
    pub fn new(arm: usize, center: f64, width: f64, momentum: Momentum) -> Result<Self> {
        if !width.is_finite() || width <= 0.0 {
            return Err(Error::InvalidPacket("width must be positive".into()));
        }
        Ok(WavePacket {
            arm,
            center,
            width,
            momentum,
        })
    }

    /// The packet must fit inside an arm of `length` sites with 4σ margins.
    fn check_support(&self, length: usize) -> Result<()> {
        if self.center - 4.0 * self.width <= 0.0 {
            return Err(Error::InvalidPacket(format!(
                "x0 - 4σ = {} reaches into the gadget",
                self.center - 4.0 * self.width
            )));
        }
        if self.center + 4.0 * self.width >= length as f64 {
            return Err(Error::InvalidPacket(format!(
                "x0 + 4σ = {} reaches the truncation at {length}",
                self.center + 4.0 * self.width
            )));
        }
        Ok(())
    }
}

/// Exact propagator for a fixed graph, built from one dense symmetric
/// eigendecomposition of the adjacency matrix.
pub struct Evolver {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl Evolver {
    pub fn new(graph: &Graph) -> Result<Self> {
        Self::with_cap(graph, DEFAULT_VERTEX_CAP)
    }

    pub fn with_cap(graph: &Graph, cap: usize) -> Result<Self> {
        if graph.vertex_count() > cap {
            return Err(Error::GraphTooLarge(graph.vertex_count(), cap));
        }
        let eig = SymmetricEigen::new(graph.adjacency_matrix());
        Ok(Evolver {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    /// `e^{-iHt} ψ`.
    pub fn apply(&self, state: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let n = state.len();
        // c = Qᵀ ψ (Q real orthogonal).
        let mut c = DVector::<Complex64>::zeros(n);
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..n {
                acc += state[r] * self.eigenvectors[(r, i)];
            }
            c[i] = acc * Complex64::from_polar(1.0, -self.eigenvalues[i] * t);
        }
        let mut out = DVector::<Complex64>::zeros(n);
        for r in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                acc += c[i] * self.eigenvectors[(r, i)];
            }
            out[r] = acc;
        }
        out
    }

    /// `⟨ψ|H|ψ⟩`, for energy-conservation checks.
    pub fn energy_expectation(&self, state: &DVector<Complex64>) -> f64 {
        let n = state.len();
        let mut total = 0.0;
        for i in 0..n {
            let mut overlap = Complex64::new(0.0, 0.0);
            for r in 0..n {
                overlap += state[r] * self.eigenvectors[(r, i)];
            }
            total += self.eigenvalues[i] * overlap.norm_sqr();
        }
        total
    }
}

/// Evolves `state` for time `t` under the adjacency Hamiltonian of `graph`.
pub fn evolve(graph: &Graph, state: &DVector<Complex64>, t: f64) -> Result<DVector<Complex64>> {
    if t < 0.0 {
        return Err(Error::Precondition("time must be non-negative".into()));
    }
    if (state.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "state must be normalized, got ‖ψ‖ = {}",
            state.norm()
        )));
    }
    let evolver = Evolver::new(graph)?;
    let out = evolver.apply(state, t);
    let drift = (out.norm() - 1.0).abs();
    if drift > NORM_DRIFT {
        return Err(Error::InconsistentSystem(drift));
    }
    Ok(out)
}

/// One sampled instant of a run.
#[derive(Clone, Debug)]
pub struct SampleRow {
    pub time: f64,
    /// Probability on the outer half of each arm.
    pub arm_probability: Vec<f64>,
    pub norm: f64,
}

/// Result of a scattering run.
#[derive(Clone, Debug)]
pub struct ScatterRunReport {
    /// Outgoing probability on the outer half of each arm at the final time.
    pub outgoing: Vec<f64>,
    /// `|S_{j'j}(k)|²` per arm from the stationary solver.
    pub predicted: Vec<f64>,
    /// Probability remaining on the gadget and the inner halves.
    pub residual_probability: f64,
    /// `|‖ψ(T)‖ - 1|`.
    pub norm_drift: f64,
    /// Drift of `⟨H⟩` over the run.
    pub energy_drift: f64,
    pub evolution_time: f64,
    /// True if probability reached the outer 3 sites of an arm at any sample.
    pub leaked: bool,
    pub samples: Vec<SampleRow>,
}

/// Options for [`scatter_experiment`].
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Evolution time; default `(2 x₀ + diam Ĝ) / |2 sin k| × 1.2`.
    pub time: Option<f64>,
    /// Number of intermediate samples for the time series and leak checks.
    pub samples: usize,
    pub vertex_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            time: None,
            samples: 24,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Initial state of a packet on the truncated graph, normalized.
pub fn packet_state(
    truncated: &TruncatedGraph,
    packet: &WavePacket,
) -> Result<DVector<Complex64>> {
    let sites = truncated.arm_sites();
    if packet.arm >= truncated.arm_count() {
        return Err(Error::InvalidPacket(format!(
            "arm {} out of range",
            packet.arm
        )));
    }
    packet.check_support(sites)?;
    let mut state = DVector::<Complex64>::zeros(truncated.graph().vertex_count());
    let kr = packet.momentum.radians();
    for x in 1..=sites {
        let envelope = (-((x as f64 - packet.center).powi(2)) / (2.0 * packet.width.powi(2))).exp();
        let v = truncated.site(x, packet.arm).expect("x in range");
        state[v as usize] = Complex64::from_polar(envelope, -kr * x as f64);
    }
    let norm = state.norm();
    if norm == 0.0 {
        return Err(Error::InvalidPacket("packet has zero mass".into()));
    }
    Ok(state / Complex64::new(norm, 0.0))
}

fn graph_diameter_bound(g: &Gadget) -> f64 {
    // Vertex count bounds the diameter; fine for the default traversal time.
    g.vertex_count() as f64
}

/// Launches `packet` on `attach_truncated_paths(g, length)`, evolves it, and
/// compares outgoing per-arm probabilities with `|S_{j'j}(k)|²`.
pub fn scatter_experiment(
    g: &Gadget,
    packet: &WavePacket,
    length: usize,
    options: &RunOptions,
) -> Result<ScatterRunReport> {
    let truncated = attach_truncated_paths(g, length)?;
    let state0 = packet_state(&truncated, packet)?;

    // Stationary prediction for the packet's center momentum.
    let sol = scattering_solve(g, packet.momentum, packet.arm)?;
    let predicted: Vec<f64> = sol.s_row.iter().map(|s| s.norm_sqr()).collect();

    let time = options.time.unwrap_or_else(|| {
        (2.0 * packet.center + graph_diameter_bound(g)) / packet.momentum.group_speed()
            * DEFAULT_TIME_FACTOR
    });

    let evolver = Evolver::with_cap(truncated.graph(), options.vertex_cap)?;
    let energy0 = evolver.energy_expectation(&state0);

    let outer_from = length / 2 + 1; // sites x > L/2
    let arm_probability = |state: &DVector<Complex64>| -> Vec<f64> {
        (0..truncated.arm_count())
            .map(|j| {
                (outer_from..=truncated.arm_sites())
                    .map(|x| state[truncated.site(x, j).expect("in range") as usize].norm_sqr())
                    .sum()
            })
            .collect()
    };
    let edge_probability = |state: &DVector<Complex64>| -> f64 {
        truncated
            .outer_sites(3)
            .iter()
            .map(|&v| state[v as usize].norm_sqr())
            .sum()
    };

    let mut samples = Vec::with_capacity(options.samples + 1);
    let mut leaked = false;
    let steps = options.samples.max(1);
    let mut final_state = state0.clone();
    for s in 0..=steps {
        let t = time * s as f64 / steps as f64;
        let state = evolver.apply(&state0, t);
        if edge_probability(&state) > LEAK_THRESHOLD {
            leaked = true;
        }
        samples.push(SampleRow {
            time: t,
            arm_probability: arm_probability(&state),
            norm: state.norm(),
        });
        if s == steps {
            final_state = state;
        }
    }

    let outgoing = arm_probability(&final_state);
    let norm_drift = (final_state.norm() - 1.0).abs();
    let energy_drift = (evolver.energy_expectation(&final_state) - energy0).abs();
    let residual_probability = 1.0 - outgoing.iter().sum::<f64>();

    if norm_drift > NORM_DRIFT {
        return Err(Error::InconsistentSystem(norm_drift));
    }

    Ok(ScatterRunReport {
        outgoing,
        predicted,
        residual_probability,
        norm_drift,
        energy_drift,
        evolution_time: time,
        leaked,
        samples,
    })
}

/// Residual of the eigenvalue equation for the stationary scattering state
/// written onto the truncated graph, excluding the outermost site per arm.
/// Ties the solver's solution to the grounded time-domain picture.
pub fn stationary_residual(g: &Gadget, k: Momentum, incoming: usize, length: usize) -> Result<f64> {
    let truncated = attach_truncated_paths(g, length)?;
    let sol = scattering_solve(g, k, incoming)?;
    let n = truncated.graph().vertex_count();
    let mut state = vec![Complex64::new(0.0, 0.0); n];
    let kr = k.radians();
    for j in 0..truncated.arm_count() {
        for x in 1..=truncated.arm_sites() {
            let phase = kr * x as f64;
            let incoming_part = if j == incoming {
                Complex64::from_polar(1.0, -phase)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let v = truncated.site(x, j).expect("in range");
            state[v as usize] = incoming_part + sol.s_row[j] * Complex64::from_polar(1.0, phase);
        }
    }
    for (i, &w) in sol.internal_vertices.iter().enumerate() {
        state[w as usize] = sol.internal[i];
    }
    let skip: std::collections::BTreeSet<u32> = truncated.outer_sites(1).into_iter().collect();
    let adj = truncated.graph().adjacency_lists();
    let mut worst = 0.0f64;
    for v in 0..n {
        if skip.contains(&(v as u32)) {
            continue;
        }
        let sum: Complex64 = adj[v].iter().map(|&u| state[u as usize]).sum();
        worst = worst.max((sum - state[v] * k.energy()).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: u64, q: u64) -> Momentum {
        Momentum::from_fraction(p, q).unwrap()
    }

    #[test]
    fn evolve_identity_and_fixed_points() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let state = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let out = evolve(&g, &state, 0.0).unwrap();
        assert!((out - &state).norm() < 1e-12);

        // A single vertex has H = 0: nothing moves.
        let trivial = Graph::new(1, []).unwrap();
        let s = DVector::from_vec(vec![Complex64::new(1.0, 0.0)]);
        let out = evolve(&trivial, &s, 3.7).unwrap();
        assert!((out[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn two_vertex_rotation() {
        // H is the bit-flip on two vertices: e^{-iHt}(1,0) = (cos t, -i sin t),
        // so t = π/2 maps to (0, -i).
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let state = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let out = evolve(&g, &state, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(out[0].norm() < 1e-12);
        assert!((out[1] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let unnormalized =
            DVector::from_vec(vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(evolve(&g, &unnormalized, 1.0).is_err());
        let state = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(evolve(&g, &state, -1.0).is_err());
        assert!(Evolver::with_cap(&g, 1).is_err());
    }

    #[test]
    fn packet_support_is_validated() {
        let gadget = Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).unwrap();
        let truncated = attach_truncated_paths(&gadget, 40).unwrap();
        let too_close = WavePacket::new(0, 10.0, 5.0, k(1, 2)).unwrap();
        assert!(packet_state(&truncated, &too_close).is_err());
        let too_far = WavePacket::new(0, 38.0, 5.0, k(1, 2)).unwrap();
        assert!(packet_state(&truncated, &too_far).is_err());
        let ok = WavePacket::new(0, 20.0, 4.0, k(1, 2)).unwrap();
        let state = packet_state(&truncated, &ok).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-12);
        assert!(WavePacket::new(0, 20.0, 0.0, k(1, 2)).is_err());
    }

    #[test]
    fn two_edge_path_run_transmits() {
        let gadget = Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).unwrap();
        let packet = WavePacket::new(0, 80.0, 8.0, k(1, 2)).unwrap();
        let report = scatter_experiment(&gadget, &packet, 160, &RunOptions::default()).unwrap();
        assert!(!report.leaked);
        assert!((report.outgoing[1] - 1.0).abs() < 0.02, "{:?}", report.outgoing);
        assert!(report.norm_drift < NORM_DRIFT);
        assert!(report.energy_drift < 1e-8);
        assert!((report.predicted[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn stationary_states_satisfy_the_eigen_equation() {
        let gadget = Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).unwrap();
        let res = stationary_residual(&gadget, k(1, 3), 0, 30).unwrap();
        assert!(res < 1e-9, "residual {res}");
    }
}
