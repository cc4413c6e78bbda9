//! The finite boundary matrix whose nullspace carries the `2cos(k)`
//! eigenspace of the infinite scattering graph, assembled exactly over
//! `Q(√2)` for the two momenta `-π/4` and `-3π/4`.
//!
//! Writing amplitudes on arm `j` as `κ_j cos(k(x-1)) + σ_j sin(k(x-1))` and
//! `ι_w` on internal vertices, the eigenvalue equation reduces to
//!
//! ```text
//!       ( A - cos(k) I   sin(k) I   B            )   ( κ )
//!   M = ( 0              0          0            ) , ( σ ) ∈ null(M),
//!       ( Bᵀ             0          D - 2cos(k) I)   ( ι )
//! ```
//!
//! where `A`, `B`, `D` are the terminal–terminal, terminal–internal and
//! internal–internal blocks of the gadget's adjacency matrix. At the two
//! supported momenta `cos k, sin k = ±√2/2`, so `M` lives in `Q(√2)` and
//! Gaussian elimination stays exact.

use num_rational::BigRational;

use super::matrix::{q2_nullspace, Q2Matrix};
use super::scalar::{Q2Complex, Q2Scalar};
use crate::error::{Error, Result};
use crate::graph::{Gadget, TruncatedGraph};
use crate::momentum::Momentum;

/// One of the two momenta whose scattering problem lives in `Q(√2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactMomentum {
    /// `k = -π/4`, energy `+√2`.
    QuarterPi,
    /// `k = -3π/4`, energy `-√2`.
    ThreeQuarterPi,
}

impl ExactMomentum {
    pub fn from_momentum(k: Momentum) -> Result<Self> {
        match k.fraction() {
            Some((1, 4)) => Ok(ExactMomentum::QuarterPi),
            Some((3, 4)) => Ok(ExactMomentum::ThreeQuarterPi),
            _ => Err(Error::UnsupportedExactMomentum(k.to_string())),
        }
    }

    pub fn momentum(&self) -> Momentum {
        match self {
            ExactMomentum::QuarterPi => Momentum::from_fraction(1, 4),
            ExactMomentum::ThreeQuarterPi => Momentum::from_fraction(3, 4),
        }
        .expect("static fraction")
    }

    /// The other supported momentum; the `√2 ↦ -√2` automorphism swaps them.
    pub fn conjugate(&self) -> Self {
        match self {
            ExactMomentum::QuarterPi => ExactMomentum::ThreeQuarterPi,
            ExactMomentum::ThreeQuarterPi => ExactMomentum::QuarterPi,
        }
    }

    /// `+1` when the energy is `+√2`, `-1` when it is `-√2`.
    pub fn energy_sign(&self) -> i64 {
        match self {
            ExactMomentum::QuarterPi => 1,
            ExactMomentum::ThreeQuarterPi => -1,
        }
    }

    pub fn cos(&self) -> Q2Scalar {
        Q2Scalar::sqrt2_times(self.energy_sign(), 2)
    }

    pub fn sin(&self) -> Q2Scalar {
        Q2Scalar::sqrt2_times(-1, 2)
    }

    /// `2 cos k = ±√2`.
    pub fn energy(&self) -> Q2Scalar {
        Q2Scalar::sqrt2_times(self.energy_sign(), 1)
    }

    /// `cos(kx)` by the exact Chebyshev recurrence.
    pub fn cos_kx(&self, x: usize) -> Q2Scalar {
        self.trig_kx(x).0
    }

    /// `sin(kx)` by the exact Chebyshev recurrence.
    pub fn sin_kx(&self, x: usize) -> Q2Scalar {
        self.trig_kx(x).1
    }

    fn trig_kx(&self, x: usize) -> (Q2Scalar, Q2Scalar) {
        let two_cos = self.energy();
        let mut cos_prev = Q2Scalar::one(); // cos(0)
        let mut sin_prev = Q2Scalar::zero(); // sin(0)
        if x == 0 {
            return (cos_prev, sin_prev);
        }
        let mut cos_cur = self.cos();
        let mut sin_cur = self.sin();
        for _ in 1..x {
            let cos_next = &two_cos * &cos_cur - &cos_prev;
            let sin_next = &two_cos * &sin_cur - &sin_prev;
            cos_prev = cos_cur;
            sin_prev = sin_cur;
            cos_cur = cos_next;
            sin_cur = sin_next;
        }
        (cos_cur, sin_cur)
    }

    /// `e^{ik} = cos k + i sin k` in `Q(√2, i)`.
    pub fn exp_ik(&self) -> Q2Complex {
        Q2Complex::new(self.cos(), self.sin())
    }
}

/// The assembled boundary matrix and the index layout behind it.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub momentum: ExactMomentum,
    pub terminals: Vec<u32>,
    pub internals: Vec<u32>,
    /// Terminal–terminal adjacency block (0/1 entries).
    pub a_block: Q2Matrix,
    /// Terminal–internal coupling block (0/1 entries).
    pub b_block: Q2Matrix,
    /// Internal–internal adjacency block (0/1 entries).
    pub d_block: Q2Matrix,
    /// The full `(2N + I) × (2N + I)` matrix, including the `N` zero rows
    /// that pad the `σ` coordinates.
    pub matrix: Q2Matrix,
}

/// Assembles the boundary matrix of `g` at one of the exact momenta.
pub fn boundary_matrix(g: &Gadget, momentum: ExactMomentum) -> BoundaryMatrix {
    let terminals: Vec<u32> = g.terminals().to_vec();
    let internals = g.internal_vertices();
    let nt = terminals.len();
    let ni = internals.len();
    let index_t: std::collections::BTreeMap<u32, usize> =
        terminals.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let index_i: std::collections::BTreeMap<u32, usize> =
        internals.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let mut a_block = Q2Matrix::zeros(nt, nt);
    let mut b_block = Q2Matrix::zeros(nt, ni);
    let mut d_block = Q2Matrix::zeros(ni, ni);
    for (u, v) in g.graph().edges() {
        match (index_t.get(&u), index_t.get(&v)) {
            (Some(&i), Some(&j)) => {
                a_block.set(i, j, Q2Scalar::one());
                a_block.set(j, i, Q2Scalar::one());
            }
            (Some(&i), None) => {
                b_block.set(i, index_i[&v], Q2Scalar::one());
            }
            (None, Some(&j)) => {
                b_block.set(j, index_i[&u], Q2Scalar::one());
            }
            (None, None) => {
                let (i, j) = (index_i[&u], index_i[&v]);
                d_block.set(i, j, Q2Scalar::one());
                d_block.set(j, i, Q2Scalar::one());
            }
        }
    }

    let dim = 2 * nt + ni;
    let mut m = Q2Matrix::zeros(dim, dim);
    let cos = momentum.cos();
    let sin = momentum.sin();
    let energy = momentum.energy();
    for i in 0..nt {
        for j in 0..nt {
            let mut v = a_block.get(i, j).clone();
            if i == j {
                v -= &cos;
            }
            m.set(i, j, v);
        }
        m.set(i, nt + i, sin.clone());
        for j in 0..ni {
            m.set(i, 2 * nt + j, b_block.get(i, j).clone());
        }
    }
    // Rows nt..2nt stay zero: the σ coordinates are unconstrained at the
    // terminals themselves.
    for i in 0..ni {
        for j in 0..nt {
            m.set(2 * nt + i, j, b_block.get(j, i).clone());
        }
        for j in 0..ni {
            let mut v = d_block.get(i, j).clone();
            if i == j {
                v -= &energy;
            }
            m.set(2 * nt + i, 2 * nt + j, v);
        }
    }

    BoundaryMatrix {
        momentum,
        terminals,
        internals,
        a_block,
        b_block,
        d_block,
        matrix: m,
    }
}

/// One exact eigenvector of the infinite graph in boundary coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    /// `κ_j`: amplitude at terminal `j` (the cosine coefficient of arm `j`).
    pub kappa: Vec<Q2Scalar>,
    /// `σ_j`: sine coefficient of arm `j`.
    pub sigma: Vec<Q2Scalar>,
    /// Amplitudes at the internal vertices.
    pub iota: Vec<Q2Scalar>,
}

impl BasisVector {
    fn from_coordinates(coords: &[Q2Scalar], nt: usize) -> Self {
        BasisVector {
            kappa: coords[0..nt].to_vec(),
            sigma: coords[nt..2 * nt].to_vec(),
            iota: coords[2 * nt..].to_vec(),
        }
    }

    pub fn coordinates(&self) -> Vec<Q2Scalar> {
        self.kappa
            .iter()
            .chain(self.sigma.iter())
            .chain(self.iota.iter())
            .cloned()
            .collect()
    }

    /// Confined vectors vanish on every arm.
    pub fn is_confined(&self) -> bool {
        self.kappa.iter().all(Q2Scalar::is_zero) && self.sigma.iter().all(Q2Scalar::is_zero)
    }

    fn dot(&self, other: &BasisVector) -> Q2Scalar {
        let mut acc = Q2Scalar::zero();
        for (a, b) in self
            .coordinates()
            .iter()
            .zip(other.coordinates().iter())
        {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    /// Exact amplitudes on a truncation: arm sites get
    /// `κ_j cos(k(x-1)) + σ_j sin(k(x-1))`, internal vertices get `ι`.
    pub fn materialize(
        &self,
        momentum: ExactMomentum,
        truncated: &TruncatedGraph,
        internals: &[u32],
    ) -> Vec<Q2Scalar> {
        let mut out = vec![Q2Scalar::zero(); truncated.graph().vertex_count()];
        for (i, &w) in internals.iter().enumerate() {
            out[w as usize] = self.iota[i].clone();
        }
        for j in 0..truncated.arm_count() {
            for x in 1..=truncated.arm_sites() {
                let site = truncated.site(x, j).expect("site in range") as usize;
                let c = momentum.cos_kx(x - 1);
                let s = momentum.sin_kx(x - 1);
                out[site] = &self.kappa[j] * &c + &(&self.sigma[j] * &s);
            }
        }
        out
    }

    /// Splits the materialized amplitudes `τ = u + √2 w` into the rational
    /// vectors `u` and `w`.
    pub fn split_sqrt2(values: &[Q2Scalar]) -> (Vec<BigRational>, Vec<BigRational>) {
        let u = values.iter().map(|v| v.rational_part().clone()).collect();
        let w = values.iter().map(|v| v.irrational_part().clone()).collect();
        (u, w)
    }
}

/// Exact basis of the `2cos(k)` eigenspace, split into confined bound states
/// and a scattering complement orthogonalized against them.
#[derive(Clone, Debug)]
pub struct ExactScatteringBasis {
    pub momentum: ExactMomentum,
    pub terminals: Vec<u32>,
    pub internals: Vec<u32>,
    pub confined: Vec<BasisVector>,
    pub scattering: Vec<BasisVector>,
}

/// Computes the exact nullspace basis of the boundary matrix and separates
/// the confined bound states (zero amplitude on all arms) from the
/// scattering directions via exact Gram–Schmidt.
pub fn exact_scattering_basis(g: &Gadget, momentum: ExactMomentum) -> Result<ExactScatteringBasis> {
    let boundary = boundary_matrix(g, momentum);
    let nt = boundary.terminals.len();
    let null = q2_nullspace(&boundary.matrix);

    // Symbolic verification of every basis vector.
    for v in &null {
        if !boundary.matrix.mul_vec(v).iter().all(Q2Scalar::is_zero) {
            return Err(Error::ExactInconsistency(
                "nullspace vector fails M v = 0".into(),
            ));
        }
    }

    let vectors: Vec<BasisVector> = null
        .iter()
        .map(|v| BasisVector::from_coordinates(v, nt))
        .collect();

    // Confined bound states: zero κ and σ, so the internal amplitudes solve
    // B ι = 0 and (D - E I) ι = 0. Solve that constrained system directly —
    // the echelon basis of the full nullspace need not expose them.
    let ni = boundary.internals.len();
    let mut constrained = Q2Matrix::zeros(nt + ni, ni);
    for i in 0..nt {
        for j in 0..ni {
            constrained.set(i, j, boundary.b_block.get(i, j).clone());
        }
    }
    let energy = momentum.energy();
    for i in 0..ni {
        for j in 0..ni {
            let mut v = boundary.d_block.get(i, j).clone();
            if i == j {
                v -= &energy;
            }
            constrained.set(nt + i, j, v);
        }
    }
    let confined_raw: Vec<BasisVector> = q2_nullspace(&constrained)
        .into_iter()
        .map(|iota| BasisVector {
            kappa: vec![Q2Scalar::zero(); nt],
            sigma: vec![Q2Scalar::zero(); nt],
            iota,
        })
        .collect();
    for v in &confined_raw {
        if !boundary
            .matrix
            .mul_vec(&v.coordinates())
            .iter()
            .all(Q2Scalar::is_zero)
        {
            return Err(Error::ExactInconsistency(
                "confined vector fails M v = 0".into(),
            ));
        }
    }

    // Orthogonalize the confined sub-basis, then project it out of the rest.
    let mut confined_ortho: Vec<BasisVector> = Vec::new();
    for v in &confined_raw {
        let mut coords = v.coordinates();
        for c in &confined_ortho {
            let factor = c.dot(v).clone()
                * c.dot(c)
                    .inverse()
                    .expect("orthogonalized vector is nonzero");
            for (x, cx) in coords.iter_mut().zip(c.coordinates().iter()) {
                *x -= &(&factor * cx);
            }
        }
        let nv = BasisVector::from_coordinates(&coords, nt);
        if !coords.iter().all(Q2Scalar::is_zero) {
            confined_ortho.push(nv);
        }
    }

    let mut reduced_rows: Vec<Vec<Q2Scalar>> = Vec::new();
    for v in &vectors {
        let mut coords = v.coordinates();
        for c in &confined_ortho {
            let factor = c.dot(v).clone()
                * c.dot(c)
                    .inverse()
                    .expect("orthogonalized vector is nonzero");
            for (x, cx) in coords.iter_mut().zip(c.coordinates().iter()) {
                *x -= &(&factor * cx);
            }
        }
        if !coords.iter().all(Q2Scalar::is_zero) {
            reduced_rows.push(coords);
        }
    }
    // Row-reduce the projected set to an independent scattering basis.
    let scattering: Vec<BasisVector> = if reduced_rows.is_empty() {
        Vec::new()
    } else {
        let (rref, pivots) = Q2Matrix::from_rows(reduced_rows).rref();
        (0..pivots.len())
            .map(|r| {
                let coords: Vec<Q2Scalar> =
                    (0..rref.ncols()).map(|c| rref.get(r, c).clone()).collect();
                BasisVector::from_coordinates(&coords, nt)
            })
            .collect()
    };

    if scattering.len() != nt {
        return Err(Error::ExactInconsistency(format!(
            "scattering subspace has dimension {} instead of {}",
            scattering.len(),
            nt
        )));
    }

    Ok(ExactScatteringBasis {
        momentum,
        terminals: boundary.terminals,
        internals: boundary.internals,
        confined: confined_ortho,
        scattering,
    })
}

/// An exact scattering eigenstate expanded over the scattering basis, with
/// its S-matrix row.
#[derive(Clone, Debug)]
pub struct ExactScatteringState {
    pub momentum: ExactMomentum,
    /// Coefficients over `basis.scattering`.
    pub coefficients: Vec<Q2Complex>,
    /// `S_{j', incoming}` for each terminal `j'`.
    pub s_row: Vec<Q2Complex>,
}

/// Solves the incoming-wave matching conditions exactly: arm `j` of the
/// combination must carry incoming coefficient `δ_{j,incoming}`. Only the
/// two-terminal case is needed, where the system is 2×2 over `Q(√2, i)`.
pub fn exact_scattering_state(
    basis: &ExactScatteringBasis,
    incoming: usize,
) -> Result<ExactScatteringState> {
    let nt = basis.terminals.len();
    if nt != 2 {
        return Err(Error::TerminalCount {
            expected: 2,
            actual: nt,
        });
    }
    if incoming >= nt {
        return Err(Error::TerminalIndex {
            index: incoming,
            count: nt,
        });
    }
    // Arm amplitude κ cos(k(x-1)) + σ sin(k(x-1)) = A e^{-ikx} + B e^{ikx}
    // with A = e^{ik}(κ + iσ)/2 and B = e^{-ik}(κ - iσ)/2.
    let half = Q2Complex::from_real(Q2Scalar::from_ratio(1, 2));
    let e_ik = basis.momentum.exp_ik();
    let e_mik = e_ik.conj();
    let incoming_coeff = |v: &BasisVector, j: usize| -> Q2Complex {
        let kappa = Q2Complex::from_real(v.kappa[j].clone());
        let sigma = Q2Complex::from_real(v.sigma[j].clone());
        &(&e_ik * &half) * &(kappa + (Q2Complex::i() * sigma))
    };
    let outgoing_coeff = |v: &BasisVector, j: usize| -> Q2Complex {
        let kappa = Q2Complex::from_real(v.kappa[j].clone());
        let sigma = Q2Complex::from_real(v.sigma[j].clone());
        &(&e_mik * &half) * &(kappa - (Q2Complex::i() * sigma))
    };

    // 2×2 system: Σ_t c_t A_j(τ_t) = δ_{j,incoming}.
    let a = [
        [
            incoming_coeff(&basis.scattering[0], 0),
            incoming_coeff(&basis.scattering[1], 0),
        ],
        [
            incoming_coeff(&basis.scattering[0], 1),
            incoming_coeff(&basis.scattering[1], 1),
        ],
    ];
    let det = (&a[0][0] * &a[1][1]) - (&a[0][1] * &a[1][0]);
    let det_inv = det.inverse().ok_or_else(|| {
        Error::ExactInconsistency("incoming-coefficient matrix is singular".into())
    })?;
    let rhs = [
        if incoming == 0 {
            Q2Complex::one()
        } else {
            Q2Complex::zero()
        },
        if incoming == 1 {
            Q2Complex::one()
        } else {
            Q2Complex::zero()
        },
    ];
    let c0 = ((&a[1][1] * &rhs[0]) - (&a[0][1] * &rhs[1])) * det_inv.clone();
    let c1 = ((&a[0][0] * &rhs[1]) - (&a[1][0] * &rhs[0])) * det_inv;

    let s_row = (0..nt)
        .map(|j| {
            let mut acc = Q2Complex::zero();
            for (c, v) in [&c0, &c1].iter().zip(basis.scattering.iter()) {
                acc += &(*c * &outgoing_coeff(v, j));
            }
            acc
        })
        .collect();

    Ok(ExactScatteringState {
        momentum: basis.momentum,
        coefficients: vec![c0, c1],
        s_row,
    })
}

/// The exact 2×2 S-matrix of a two-terminal gadget at an exact momentum.
pub fn exact_s_matrix(g: &Gadget, momentum: ExactMomentum) -> Result<[[Q2Complex; 2]; 2]> {
    let basis = exact_scattering_basis(g, momentum)?;
    let row0 = exact_scattering_state(&basis, 0)?;
    let row1 = exact_scattering_state(&basis, 1)?;
    Ok([
        [row0.s_row[0].clone(), row1.s_row[0].clone()],
        [row0.s_row[1].clone(), row1.s_row[1].clone()],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cycle_gadget, path_gadget};
    use crate::scatter::scattering_solve;

    #[test]
    fn trig_recurrence_cycles() {
        let m = ExactMomentum::QuarterPi;
        // cos(-πx/4), sin(-πx/4) have period 8; spot-check a full cycle.
        assert_eq!(m.cos_kx(0), Q2Scalar::one());
        assert_eq!(m.cos_kx(2), Q2Scalar::zero());
        assert_eq!(m.cos_kx(4), Q2Scalar::from_int(-1));
        assert_eq!(m.sin_kx(2), Q2Scalar::from_int(-1));
        assert_eq!(m.sin_kx(6), Q2Scalar::from_int(1));
        assert_eq!(m.cos_kx(8), Q2Scalar::one());
        assert_eq!(m.sin_kx(8), Q2Scalar::zero());
        for x in 0..16 {
            let (c, s) = (m.cos_kx(x), m.sin_kx(x));
            let unit = &c * &c + &(&s * &s);
            assert_eq!(unit, Q2Scalar::one());
        }
    }

    #[test]
    fn path22_nullspace_has_two_scattering_directions() {
        let (g, _) = path_gadget(2, 2).unwrap();
        let b = boundary_matrix(&g, ExactMomentum::QuarterPi);
        assert_eq!(b.matrix.nrows(), 2 * 2 + (g.vertex_count() - 2));
        let basis = exact_scattering_basis(&g, ExactMomentum::QuarterPi).unwrap();
        assert_eq!(basis.scattering.len(), 2);
        assert!(basis.confined.is_empty());
        // Float rank oracle on the same matrix.
        let float: nalgebra::DMatrix<f64> = nalgebra::DMatrix::from_fn(
            b.matrix.nrows(),
            b.matrix.ncols(),
            |r, c| b.matrix.get(r, c).to_f64(),
        );
        let rank = float.svd(false, false).rank(1e-10);
        assert_eq!(b.matrix.ncols() - rank, 2);
    }

    #[test]
    fn single_edge_exact_transmission() {
        let g = Gadget::new(2, [(0, 1)], vec![0, 1]).unwrap();
        let s = exact_s_matrix(&g, ExactMomentum::QuarterPi).unwrap();
        // R = 0 and T = e^{iπ/4} = √2/2 + i√2/2 exactly.
        assert!(s[0][0].is_zero());
        let half_sqrt2 = Q2Scalar::sqrt2_times(1, 2);
        assert_eq!(s[1][0].re, half_sqrt2);
        assert_eq!(s[1][0].im, half_sqrt2);

        let float = scattering_solve(&g, ExactMomentum::QuarterPi.momentum(), 0).unwrap();
        assert!((s[1][0].to_complex64() - float.s_row[1]).norm() < 1e-12);
    }

    #[test]
    fn path22_reflects_exactly() {
        let (g, _) = path_gadget(2, 2).unwrap();
        for m in [ExactMomentum::QuarterPi, ExactMomentum::ThreeQuarterPi] {
            let s = exact_s_matrix(&g, m).unwrap();
            assert!(s[1][0].is_zero(), "transmission must vanish exactly");
            let r = &s[0][0];
            assert_eq!(r.norm_sqr(), Q2Scalar::one());
        }
    }

    #[test]
    fn square_transmits_exactly_with_unit_magnitude() {
        let (g, _) = cycle_gadget(4).unwrap();
        let s = exact_s_matrix(&g, ExactMomentum::QuarterPi).unwrap();
        assert_eq!(s[1][0].norm_sqr(), Q2Scalar::one());
        assert!(s[0][0].is_zero());
    }

    #[test]
    fn confined_states_are_split_out() {
        // Two disjoint 3-paths attached at their middles: the antisymmetric
        // ±√2 eigenvector is confined.
        let g0 = crate::graph::Graph::new(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let spec = crate::constructions::Type1Spec::new(g0, vec![1, 4]).unwrap();
        let g = crate::constructions::build_type1(&spec);
        let basis = exact_scattering_basis(&g, ExactMomentum::QuarterPi).unwrap();
        assert_eq!(basis.confined.len(), 1);
        assert_eq!(basis.scattering.len(), 2);
        for v in &basis.scattering {
            for c in &basis.confined {
                assert!(v.dot(c).is_zero(), "complement not orthogonal");
            }
        }
        // It still reflects perfectly (and exactly) at -π/4.
        let s = exact_s_matrix(&g, ExactMomentum::QuarterPi).unwrap();
        assert!(s[1][0].is_zero());
        assert_eq!(s[0][0].norm_sqr(), Q2Scalar::one());
    }

    #[test]
    fn unsupported_momenta_are_rejected() {
        let k = Momentum::from_fraction(1, 3).unwrap();
        assert!(matches!(
            ExactMomentum::from_momentum(k),
            Err(Error::UnsupportedExactMomentum(_))
        ));
    }
}
