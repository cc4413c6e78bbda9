//! Constructive check that exact perfect reflection at `-π/4` forces perfect
//! reflection at `-3π/4` on any two-terminal gadget.
//!
//! Given `T(-π/4) = 0` (verified exactly), the scattering state expands over
//! two basis vectors `τ_t = (H + √2 I) w_t` with rational `w_t`:
//! `sc₁ = (H + √2 I)(α a + β b)` where `a = w₁`, `b = w₂`. Vanishing
//! amplitude on path 2 forces `β/α = r + s√2 ∈ Q(√2)`, and the rational
//! vector `c = a + (r + sH) b` then satisfies `α (H + √2 I) c = sc₁` because
//! `H² b = 2 b`. Replacing `√2` by `-√2` yields `(H - √2 I) c`, a
//! `-√2`-eigenvector that still vanishes on path 2 but not on path 1 — a
//! perfect-reflection witness at `-3π/4`.
//!
//! Everything is verified with exact rational arithmetic on a truncation of
//! the infinite graph; rows whose neighborhoods touch the truncation wall are
//! excluded per the depth of each identity.

use num_rational::BigRational;
use num_traits::Zero;

use super::boundary::{exact_scattering_basis, exact_scattering_state, BasisVector, ExactMomentum};
use super::scalar::{Q2Complex, Q2Scalar};
use crate::error::{Error, Result};
use crate::graph::{attach_truncated_paths, Gadget, TruncatedGraph};

/// Default truncation length; one full period of `cos(πx/4)` plus slack, so
/// a nonzero path amplitude cannot hide beyond the verified window.
pub const DEFAULT_TRUNCATION: usize = 12;

/// Outcome of the conjugation construction.
#[derive(Clone, Debug)]
pub enum ConjugationOutcome {
    /// The gadget does not reflect perfectly at `-π/4`; the construction
    /// does not apply. The exact amplitudes are reported.
    NotApplicable {
        reflection: Box<Q2Complex>,
        transmission: Box<Q2Complex>,
    },
    /// The witness was constructed and all identities verified exactly.
    Confirmed(Box<ConjugationWitness>),
}

/// The verified witness data.
#[derive(Clone, Debug)]
pub struct ConjugationWitness {
    /// `β/α = r + s√2`.
    pub ratio_rational: BigRational,
    pub ratio_sqrt2: BigRational,
    /// The rational vector `c` on the truncated graph.
    pub c_vector: Vec<BigRational>,
    /// `(H - √2 I) c`, the `-√2`-eigenvector witnessing reflection.
    pub conjugated_state: Vec<Q2Scalar>,
    /// Site on arm 1 where the witness is provably nonzero.
    pub nonzero_site: usize,
    /// Exact `R(-π/4)`; unit modulus.
    pub reflection: Q2Complex,
    pub truncation_length: usize,
}

struct Truncation {
    graph: TruncatedGraph,
    adjacency: Vec<Vec<u32>>,
    /// valid[v] = distance from v to the truncation wall along its arm;
    /// interior gadget vertices get `usize::MAX`.
    depth: Vec<usize>,
}

impl Truncation {
    fn new(g: &Gadget, length: usize) -> Result<Self> {
        let graph = attach_truncated_paths(g, length)?;
        let adjacency = graph.graph().adjacency_lists();
        let mut depth = vec![usize::MAX; graph.graph().vertex_count()];
        for j in 0..graph.arm_count() {
            let sites = graph.arm_sites();
            for x in 1..=sites {
                let v = graph.site(x, j).expect("in range");
                depth[v as usize] = sites - x;
            }
        }
        Ok(Truncation {
            graph,
            adjacency,
            depth,
        })
    }

    /// Rows exact for an expression that looks `radius` steps into the graph.
    fn valid_rows(&self, radius: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.depth.len()).filter(move |&v| self.depth[v] >= radius)
    }

    fn apply_h_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.adjacency
            .iter()
            .map(|nbrs| nbrs.iter().map(|&u| v[u as usize].clone()).sum())
            .collect()
    }

    fn apply_h_q2(&self, v: &[Q2Scalar]) -> Vec<Q2Scalar> {
        self.adjacency
            .iter()
            .map(|nbrs| {
                let mut acc = Q2Scalar::zero();
                for &u in nbrs {
                    acc += &v[u as usize];
                }
                acc
            })
            .collect()
    }
}

fn q2c(re: Q2Scalar) -> Q2Complex {
    Q2Complex::from_real(re)
}

/// Runs the construction with the default truncation.
pub fn conjugation_check(g: &Gadget) -> Result<ConjugationOutcome> {
    conjugation_check_with(g, DEFAULT_TRUNCATION)
}

/// Runs the construction on a truncation of `length ≥ 10` sites per arm.
pub fn conjugation_check_with(g: &Gadget, length: usize) -> Result<ConjugationOutcome> {
    if g.terminal_count() != 2 {
        return Err(Error::TerminalCount {
            expected: 2,
            actual: g.terminal_count(),
        });
    }
    if length < 10 {
        return Err(Error::Precondition(
            "conjugation check needs a truncation of at least 10 sites".into(),
        ));
    }
    let quarter = ExactMomentum::QuarterPi;
    let basis = exact_scattering_basis(g, quarter)?;
    let state = exact_scattering_state(&basis, 0)?;
    let reflection = state.s_row[0].clone();
    let transmission = state.s_row[1].clone();
    if !transmission.is_zero() {
        return Ok(ConjugationOutcome::NotApplicable {
            reflection: Box::new(reflection),
            transmission: Box::new(transmission),
        });
    }

    let trunc = Truncation::new(g, length)?;
    let internals = basis.internals.clone();

    // Materialize τ_t = u_t + √2 w_t and check the defining identities
    // H u = 2w, H w = u, τ = (H + √2 I) w row by row.
    let mats: Vec<Vec<Q2Scalar>> = basis
        .scattering
        .iter()
        .map(|v| v.materialize(quarter, &trunc.graph, &internals))
        .collect();
    let mut w_parts: Vec<Vec<BigRational>> = Vec::new();
    for tau in &mats {
        let (u, w) = BasisVector::split_sqrt2(tau);
        let hu = trunc.apply_h_rational(&u);
        let hw = trunc.apply_h_rational(&w);
        for row in trunc.valid_rows(1) {
            if hu[row] != &w[row] * BigRational::from_integer(2.into())
                || hw[row] != u[row]
            {
                return Err(Error::ExactInconsistency(
                    "basis vector fails H u = 2w, H w = u".into(),
                ));
            }
        }
        w_parts.push(w);
    }

    // sc₁ = (H + √2 I)(α w₁ + β w₂); pick α ≠ 0.
    let (alpha, beta, a_vec, b_vec) = if !state.coefficients[0].is_zero() {
        (
            state.coefficients[0].clone(),
            state.coefficients[1].clone(),
            &w_parts[0],
            &w_parts[1],
        )
    } else if !state.coefficients[1].is_zero() {
        (
            state.coefficients[1].clone(),
            state.coefficients[0].clone(),
            &w_parts[1],
            &w_parts[0],
        )
    } else {
        return Err(Error::ExactInconsistency(
            "scattering state has no expansion coefficients".into(),
        ));
    };

    // With T = 0 the ratio β/α must land in Q(√2).
    let ratio = beta / alpha.clone();
    if !ratio.im.is_zero() {
        return Err(Error::ExactInconsistency(format!(
            "β/α = {ratio} is not in Q(√2) despite T(-π/4) = 0"
        )));
    }
    let r = ratio.re.rational_part().clone();
    let s = ratio.re.irrational_part().clone();

    // c = a + (r + sH) b, exact rational; entries are only trusted where the
    // H application is (depth ≥ 1).
    let hb = trunc.apply_h_rational(b_vec);
    let n = trunc.graph.graph().vertex_count();
    let c_vec: Vec<BigRational> = (0..n)
        .map(|v| &a_vec[v] + &r * &b_vec[v] + &s * &hb[v])
        .collect();

    // c is a rational 2-eigenvector of H².
    let hc = trunc.apply_h_rational(&c_vec);
    let hhc = trunc.apply_h_rational(&hc);
    let two = BigRational::from_integer(2.into());
    for row in trunc.valid_rows(3) {
        if hhc[row] != &two * &c_vec[row] {
            return Err(Error::ExactInconsistency(
                "c is not a 2-eigenvector of H² on the truncation".into(),
            ));
        }
    }

    // α (H + √2 I) c reproduces the scattering state.
    let sc1: Vec<Q2Complex> = {
        let mut acc = vec![Q2Complex::zero(); n];
        for (coeff, tau) in state.coefficients.iter().zip(mats.iter()) {
            for v in 0..n {
                acc[v] += &(coeff * &q2c(tau[v].clone()));
            }
        }
        acc
    };
    for row in trunc.valid_rows(2) {
        let lhs = &alpha
            * &q2c(Q2Scalar::new(hc[row].clone(), c_vec[row].clone()));
        if lhs != sc1[row] {
            return Err(Error::ExactInconsistency(
                "α (H + √2 I) c does not reproduce the scattering state".into(),
            ));
        }
    }

    // Zero on path 2: both c and Hc vanish there, separately over the
    // rational and √2 components. Sites within 2 of the wall are excluded
    // (their Hc rows see truncated values).
    let sites = trunc.graph.arm_sites();
    for x in 1..=sites - 2 {
        let v = trunc.graph.site(x, 1).expect("in range") as usize;
        if !c_vec[v].is_zero() || !hc[v].is_zero() {
            return Err(Error::ExactInconsistency(format!(
                "witness carries amplitude on path 2 at site {x}"
            )));
        }
    }

    // The conjugated state (H - √2 I) c is a -√2-eigenvector of H.
    let conjugated: Vec<Q2Scalar> = (0..n)
        .map(|v| Q2Scalar::new(hc[v].clone(), -c_vec[v].clone()))
        .collect();
    let h_conj = trunc.apply_h_q2(&conjugated);
    let minus_sqrt2 = Q2Scalar::sqrt2_times(-1, 1);
    for row in trunc.valid_rows(3) {
        if h_conj[row] != &minus_sqrt2 * &conjugated[row] {
            return Err(Error::ExactInconsistency(
                "(H - √2 I) c is not a -√2-eigenvector".into(),
            ));
        }
    }

    // Nonzero somewhere on path 1, hence not confined: a perfect-reflection
    // witness at -3π/4.
    let mut nonzero_site = None;
    for x in 1..=sites - 2 {
        let v = trunc.graph.site(x, 0).expect("in range") as usize;
        if !conjugated[v].is_zero() {
            nonzero_site = Some(x);
            break;
        }
    }
    let Some(nonzero_site) = nonzero_site else {
        return Err(Error::ExactInconsistency(
            "conjugated witness vanishes on path 1".into(),
        ));
    };

    // Independent confirmation: the exact S-matrix at -3π/4 must also show
    // zero transmission.
    let other = exact_scattering_basis(g, quarter.conjugate())?;
    let other_state = exact_scattering_state(&other, 0)?;
    if !other_state.s_row[1].is_zero() {
        return Err(Error::ExactInconsistency(
            "gadget transmits at -3π/4 despite the reflection witness".into(),
        ));
    }

    Ok(ConjugationOutcome::Confirmed(Box::new(ConjugationWitness {
        ratio_rational: r,
        ratio_sqrt2: s,
        c_vector: c_vec,
        conjugated_state: conjugated,
        nonzero_site,
        reflection,
        truncation_length: length,
    })))
}
