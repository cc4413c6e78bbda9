//! Gadget constructions and eigenvector certificates.
//!
//! The connector form couples a finite graph `G₀` to both terminals through a
//! single vertex `a`: edges run from `a` to every vertex of the attachment
//! set `S = {v₁..v_n} ⊆ V(G₀)` and to the two terminals. Writing `g₀` for the
//! subgraph induced on `V(G₀) ∖ S`, the amplitude at `a` obeys
//! `⟨a|sc₁(k)⟩ = 1 + R(k) = T(k)`, which reduces perfect reflection and
//! transmission to eigenvector conditions:
//!
//! * reflection at `k` ⇔ `G₀` has a `2cos(k)`-eigenvector whose amplitudes
//!   over `S` have nonzero sum;
//! * transmission at `k` ⇐ `g₀` has a `2cos(k)`-eigenvector whose attachment
//!   sums around each `vᵢ` equal one common nonzero constant (and ⇔ when
//!   `|S| = 1`).
//!
//! [`predict_reflection`] and [`predict_transmission`] search for those
//! certificates; [`reversal`] swaps the two sets (up to containment) for
//! single-attachment specs, and [`switch_from_type2`] assembles a
//! three-terminal momentum switch from a spec and its reversal.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{attach_truncated_paths, Gadget, Graph, TruncatedGraph};
use crate::momentum::Momentum;

/// Eigenvalues are matched against `2 cos k` within this tolerance.
pub const EIGENVALUE_MATCH: f64 = 1e-8;

/// Attachment sums below this are treated as zero (no certificate).
pub const CERTIFICATE_CUTOFF: f64 = 1e-9;

/// A connector-form gadget: finite graph `G₀` plus the attachment set `S`.
#[derive(Clone, Debug)]
pub struct Type1Spec {
    g0: Graph,
    attach: Vec<u32>,
}

impl Type1Spec {
    pub fn new(g0: Graph, attach: Vec<u32>) -> Result<Self> {
        if attach.is_empty() {
            return Err(Error::InvalidConstruction(
                "attachment set must be non-empty".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &v in &attach {
            if v as usize >= g0.vertex_count() {
                return Err(Error::InvalidConstruction(format!(
                    "attachment vertex {v} out of range"
                )));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidConstruction(format!(
                    "attachment vertex {v} listed twice"
                )));
            }
        }
        Ok(Type1Spec { g0, attach })
    }

    pub fn g0(&self) -> &Graph {
        &self.g0
    }

    pub fn attach(&self) -> &[u32] {
        &self.attach
    }

    /// Single-attachment specs admit the reversal construction and make the
    /// transmission certificate an exact characterization.
    pub fn is_type2(&self) -> bool {
        self.attach.len() == 1
    }

    /// The induced subgraph on `V(G₀) ∖ S` and, per new vertex, its old id.
    pub fn inner(&self) -> (Graph, Vec<u32>) {
        let attach: std::collections::BTreeSet<u32> = self.attach.iter().copied().collect();
        let keep: Vec<u32> = (0..self.g0.vertex_count() as u32)
            .filter(|v| !attach.contains(v))
            .collect();
        self.g0
            .induced_subgraph(&keep)
            .expect("kept vertices are valid")
    }

    /// For each attachment vertex, the inner-subgraph ids of its neighbors in
    /// `G₀` that survive into `g₀`.
    pub fn inner_attachment_neighbors(&self) -> Vec<Vec<u32>> {
        let (_, kept) = self.inner();
        let mut new_id = vec![None; self.g0.vertex_count()];
        for (i, &old) in kept.iter().enumerate() {
            new_id[old as usize] = Some(i as u32);
        }
        let adj = self.g0.adjacency_lists();
        self.attach
            .iter()
            .map(|&v| {
                adj[v as usize]
                    .iter()
                    .filter_map(|&u| new_id[u as usize])
                    .collect()
            })
            .collect()
    }
}

/// Builds the two-terminal gadget of a spec: `V(G₀) ∪ {a, (1,1), (1,2)}` with
/// `a` joined to every attachment vertex and to both terminals.
pub fn build_type1(spec: &Type1Spec) -> Gadget {
    let n0 = spec.g0.vertex_count() as u32;
    let a = n0;
    let t1 = n0 + 1;
    let t2 = n0 + 2;
    let edges = spec
        .g0
        .edges()
        .chain(spec.attach.iter().map(|&v| (a, v)))
        .chain([(a, t1), (a, t2)]);
    Gadget::new(n0 as usize + 3, edges, vec![t1, t2]).expect("spec was validated")
}

/// Whether a certificate witnesses reflection or transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Reflect,
    Transmit,
}

/// A real eigenvector certifying perfect reflection (on `G₀`) or perfect
/// transmission (on `g₀`) at a momentum.
#[derive(Clone, Debug)]
pub struct EigenCertificate {
    pub kind: CertificateKind,
    pub momentum: Momentum,
    /// Unit-norm amplitudes on the certifying subgraph.
    pub amplitudes: DVector<f64>,
    /// Original `G₀` vertex ids carrying the amplitudes.
    pub support: Vec<u32>,
    /// The nonzero attachment sum (common constant for transmission).
    pub constant: f64,
    /// `‖A x - 2cos(k) x‖_∞` of the certificate on its subgraph.
    pub eigen_residual: f64,
}

fn eigenspace_columns(matrix: &DMatrix<f64>, energy: f64) -> (SymmetricEigen<f64, nalgebra::Dyn>, Vec<usize>) {
    let eig = SymmetricEigen::new(matrix.clone());
    let cols = (0..eig.eigenvalues.len())
        .filter(|&i| (eig.eigenvalues[i] - energy).abs() < EIGENVALUE_MATCH)
        .collect();
    (eig, cols)
}

fn residual(matrix: &DMatrix<f64>, x: &DVector<f64>, energy: f64) -> f64 {
    (matrix * x - x * energy).amax()
}

/// Searches the `2cos(k)`-eigenspace of `G₀` for a vector whose amplitudes
/// over the attachment set have nonzero sum. Such a vector exists iff `k`
/// belongs to the reflection set; absence is a valid result.
pub fn predict_reflection(spec: &Type1Spec, k: Momentum) -> Option<EigenCertificate> {
    let n0 = spec.g0.vertex_count();
    if n0 == 0 {
        return None;
    }
    let adjacency = spec.g0.adjacency_matrix();
    let (eig, cols) = eigenspace_columns(&adjacency, k.energy());
    if cols.is_empty() {
        return None;
    }
    let mut indicator = DVector::zeros(n0);
    for &v in &spec.attach {
        indicator[v as usize] = 1.0;
    }
    // Projection of the indicator onto the eigenspace: nonzero iff some
    // eigenvector has nonzero attachment sum.
    let mut projection = DVector::zeros(n0);
    for &c in &cols {
        let vec = eig.eigenvectors.column(c);
        projection += vec * vec.dot(&indicator);
    }
    let norm = projection.norm();
    if norm <= CERTIFICATE_CUTOFF {
        return None;
    }
    let amplitudes = projection / norm;
    let constant = amplitudes.dot(&indicator);
    let eigen_residual = residual(&adjacency, &amplitudes, k.energy());
    Some(EigenCertificate {
        kind: CertificateKind::Reflect,
        momentum: k,
        amplitudes,
        support: (0..n0 as u32).collect(),
        constant,
        eigen_residual,
    })
}

/// Searches the `2cos(k)`-eigenspace of `g₀` for a vector whose attachment
/// sums around every `vᵢ` are equal and nonzero. Existence implies `k` is in
/// the transmission set; for single-attachment specs it is equivalent.
pub fn predict_transmission(spec: &Type1Spec, k: Momentum) -> Option<EigenCertificate> {
    let (inner, kept) = spec.inner();
    let m = inner.vertex_count();
    if m == 0 {
        return None;
    }
    let adjacency = inner.adjacency_matrix();
    let (eig, cols) = eigenspace_columns(&adjacency, k.energy());
    if cols.is_empty() {
        return None;
    }
    let d = cols.len();
    let neighbor_sets = spec.inner_attachment_neighbors();
    let n = neighbor_sets.len();

    // sums[(i, c)] = Σ_{u ~ vᵢ} ⟨u|e_c⟩ over the eigenspace basis.
    let mut sums = DMatrix::<f64>::zeros(n, d);
    for (i, nbrs) in neighbor_sets.iter().enumerate() {
        for (ci, &c) in cols.iter().enumerate() {
            let col = eig.eigenvectors.column(c);
            sums[(i, ci)] = nbrs.iter().map(|&u| col[u as usize]).sum();
        }
    }

    // Kernel of the pairwise differences: coefficient vectors whose
    // attachment sums all agree.
    let kernel: DMatrix<f64> = if n <= 1 {
        DMatrix::identity(d, d)
    } else {
        let mut diff = DMatrix::<f64>::zeros(n - 1, d);
        for i in 0..n - 1 {
            for c in 0..d {
                diff[(i, c)] = sums[(i, c)] - sums[(i + 1, c)];
            }
        }
        let gram = diff.transpose() * &diff;
        let eig_gram = SymmetricEigen::new(gram);
        let cols_null: Vec<usize> = (0..d)
            .filter(|&i| eig_gram.eigenvalues[i].abs() < 1e-12)
            .collect();
        if cols_null.is_empty() {
            return None;
        }
        let mut kern = DMatrix::zeros(d, cols_null.len());
        for (j, &c) in cols_null.iter().enumerate() {
            kern.set_column(j, &eig_gram.eigenvectors.column(c));
        }
        kern
    };

    // Maximize the common value over the kernel; it vanishes identically iff
    // no certificate exists.
    let common = sums.row(0) * &kernel;
    let weight = common.norm();
    if weight <= CERTIFICATE_CUTOFF {
        return None;
    }
    let coeff = &kernel * common.transpose() / weight;
    let mut amplitudes = DVector::<f64>::zeros(m);
    for (ci, &c) in cols.iter().enumerate() {
        amplitudes += eig.eigenvectors.column(c) * coeff[ci];
    }
    let norm = amplitudes.norm();
    let amplitudes = amplitudes / norm;
    let constant = neighbor_sets[0]
        .iter()
        .map(|&u| amplitudes[u as usize])
        .sum::<f64>();
    if constant.abs() <= CERTIFICATE_CUTOFF {
        return None;
    }
    let eigen_residual = residual(&adjacency, &amplitudes, k.energy());
    Some(EigenCertificate {
        kind: CertificateKind::Transmit,
        momentum: k,
        amplitudes,
        support: kept,
        constant,
        eigen_residual,
    })
}

/// Predicted reflection and transmission sets of a parametric family.
#[derive(Clone, Debug)]
pub struct PredictedRt {
    pub reflect: Vec<Momentum>,
    pub transmit: Vec<Momentum>,
}

impl PredictedRt {
    /// Sorted union of both sets; the natural grid for verifying the family.
    pub fn grid(&self) -> Vec<Momentum> {
        let mut grid: Vec<Momentum> = Vec::new();
        for &m in self.reflect.iter().chain(self.transmit.iter()) {
            if !grid.iter().any(|g| g.same_as(&m)) {
                grid.push(m);
            }
        }
        grid.sort_by(|a, b| a.partial_cmp(b).expect("momenta are finite"));
        grid
    }
}

fn sorted_unique(mut set: Vec<Momentum>) -> Vec<Momentum> {
    set.sort_by(|a, b| a.partial_cmp(b).expect("momenta are finite"));
    set.dedup_by(|a, b| a.same_as(b));
    set
}

/// Spec with `G₀` a path of `l1 + l2 - 2` edges attached at its `l1`-th
/// vertex (1-based).
pub fn path_spec(l1: usize, l2: usize) -> Result<Type1Spec> {
    if l1 < 2 || l2 < 2 {
        return Err(Error::InvalidConstruction(
            "path arms need l1, l2 >= 2".into(),
        ));
    }
    let n0 = l1 + l2 - 1;
    let g0 = Graph::new(n0, (0..n0 - 1).map(|i| (i as u32, i as u32 + 1)))?;
    Type1Spec::new(g0, vec![l1 as u32 - 1])
}

/// Path-family gadget with its predicted sets
/// `R = {-πj/(l1+l2) : j ∈ [l1+l2-1], j·l1/(l1+l2) ∉ ℤ}` and
/// `T = {-πj/l1 : j ∈ [l1-1]} ∪ {-πj/l2 : j ∈ [l2-1]}`.
pub fn path_gadget(l1: usize, l2: usize) -> Result<(Gadget, PredictedRt)> {
    let spec = path_spec(l1, l2)?;
    let total = (l1 + l2) as u64;
    let reflect = (1..total)
        .filter(|j| (j * l1 as u64) % total != 0)
        .map(|j| Momentum::from_fraction(j, total).expect("0 < j < total"))
        .collect();
    let transmit = sorted_unique(
        (1..l1 as u64)
            .map(|j| Momentum::from_fraction(j, l1 as u64).expect("in range"))
            .chain((1..l2 as u64).map(|j| Momentum::from_fraction(j, l2 as u64).expect("in range")))
            .collect(),
    );
    Ok((
        build_type1(&spec).with_name(format!("path:{l1},{l2}")),
        PredictedRt {
            reflect: sorted_unique(reflect),
            transmit,
        },
    ))
}

/// Spec with `G₀` an `r`-cycle attached at one vertex.
pub fn cycle_spec(r: usize) -> Result<Type1Spec> {
    if r < 3 {
        return Err(Error::InvalidConstruction("cycle needs r >= 3".into()));
    }
    let g0 = Graph::new(r, (0..r).map(|i| (i as u32, ((i + 1) % r) as u32)))?;
    Type1Spec::new(g0, vec![0])
}

/// Cycle-family gadget with its predicted sets
/// `R = {-πj/r : j even}` and `T = {-πj/r : j odd}`, `j ∈ [r-1]`.
pub fn cycle_gadget(r: usize) -> Result<(Gadget, PredictedRt)> {
    let spec = cycle_spec(r)?;
    let reflect = (1..r as u64)
        .filter(|j| j % 2 == 0)
        .map(|j| Momentum::from_fraction(j, r as u64).expect("in range"))
        .collect();
    let transmit = (1..r as u64)
        .filter(|j| j % 2 == 1)
        .map(|j| Momentum::from_fraction(j, r as u64).expect("in range"))
        .collect();
    Ok((
        build_type1(&spec).with_name(format!("cycle:{r}")),
        PredictedRt {
            reflect: sorted_unique(reflect),
            transmit: sorted_unique(transmit),
        },
    ))
}

/// Reversal of a single-attachment spec: two copies of `g₀`, a new vertex
/// `v↔` adjacent to the attachment neighbors in both copies, and the first
/// copy's attachment neighbors as the new attachment set. Swaps the
/// reflection and transmission sets up to containment: `R ⊆ T'`, `T ⊆ R'`.
pub fn reversal(spec: &Type1Spec) -> Result<Type1Spec> {
    if !spec.is_type2() {
        return Err(Error::InvalidConstruction(
            "reversal needs a single-attachment spec".into(),
        ));
    }
    let (inner, _) = spec.inner();
    let w = &spec.inner_attachment_neighbors()[0];
    if inner.vertex_count() == 0 || w.is_empty() {
        return Err(Error::InvalidConstruction(
            "reversal needs a non-trivial inner subgraph".into(),
        ));
    }
    let p = inner.vertex_count() as u32;
    let v_rev = 2 * p;
    let edges = inner
        .edges()
        .chain(inner.edges().map(|(a, b)| (a + p, b + p)))
        .chain(w.iter().map(|&j| (v_rev, j)))
        .chain(w.iter().map(|&j| (v_rev, j + p)));
    let g0_rev = Graph::new(2 * p as usize + 1, edges)?;
    Type1Spec::new(g0_rev, w.clone())
}

/// Assembles a three-terminal momentum switch from a single-attachment spec:
/// a claw with center `0` and leaf terminals, the spec's gadget hanging off
/// terminal 2 through its attachment vertex, and the reversal assembly
/// hanging off terminal 3. Momenta in the spec's transmission set route
/// `1 → 2`; momenta in its reflection set route `1 → 3`.
pub fn switch_from_type2(spec: &Type1Spec) -> Result<Gadget> {
    if !spec.is_type2() {
        return Err(Error::InvalidConstruction(
            "switch assembly needs a single-attachment spec".into(),
        ));
    }
    let (inner, _) = spec.inner();
    let w = &spec.inner_attachment_neighbors()[0];
    if inner.vertex_count() == 0 || w.is_empty() {
        return Err(Error::InvalidConstruction(
            "switch assembly needs a non-trivial inner subgraph".into(),
        ));
    }
    let p = inner.vertex_count() as u32;
    // Layout: 0 center, 1..3 terminals, 4 = v, copy3 at 5, copy1 at 5+p,
    // copy2 at 5+2p, v↔ last.
    let v = 4u32;
    let copy3 = 5u32;
    let copy1 = copy3 + p;
    let copy2 = copy1 + p;
    let v_rev = copy2 + p;
    let mut list: Vec<(u32, u32)> = vec![(0, 1), (0, 2), (0, 3), (2, v)];
    for &j in w {
        list.push((v, copy3 + j)); // spec gadget: v to its attachment neighbors
        list.push((3, copy1 + j)); // terminal 3 plays the connector of the reversal
        list.push((v_rev, copy1 + j));
        list.push((v_rev, copy2 + j));
    }
    for (a, b) in inner.edges() {
        list.push((copy3 + a, copy3 + b));
        list.push((copy1 + a, copy1 + b));
        list.push((copy2 + a, copy2 + b));
    }
    Gadget::new(v_rev as usize + 1, list, vec![1, 2, 3])
}

/// The explicit transmission eigenstate of a switch at `k` in the spec's
/// transmission set, materialized on a truncation of the attached paths:
/// amplitude 1 at the claw center, plane waves `e^{∓ikx}` on arms 1 and 2,
/// zero on arm 3, the certificate amplitudes scaled by `∓1/c` and `-e^{ik}/c`
/// on the three inner copies, zero on `v` and `v↔`.
#[derive(Clone, Debug)]
pub struct SwitchWitness {
    pub truncated: TruncatedGraph,
    pub state: Vec<Complex64>,
    /// Rows where the truncation breaks the eigenvalue equation (the
    /// outermost site of each arm).
    pub skip: Vec<u32>,
    pub energy: f64,
}

impl SwitchWitness {
    /// `‖H ψ - E ψ‖_∞` over all rows except the skipped boundary rows.
    pub fn eigen_residual(&self) -> f64 {
        let adj = self.truncated.graph().adjacency_lists();
        let skip: std::collections::BTreeSet<u32> = self.skip.iter().copied().collect();
        let mut worst = 0.0f64;
        for v in 0..self.truncated.graph().vertex_count() {
            if skip.contains(&(v as u32)) {
                continue;
            }
            let sum: Complex64 = adj[v].iter().map(|&u| self.state[u as usize]).sum();
            worst = worst.max((sum - self.state[v] * self.energy).norm());
        }
        worst
    }
}

/// Builds the switch for `spec` and, if `k` admits a transmission
/// certificate, the explicit `1 → 2` eigenstate on a truncation of length
/// `length`.
pub fn transmission_witness(
    spec: &Type1Spec,
    k: Momentum,
    length: usize,
) -> Result<Option<SwitchWitness>> {
    let Some(cert) = predict_transmission(spec, k) else {
        return Ok(None);
    };
    let switch = switch_from_type2(spec)?;
    let truncated = attach_truncated_paths(&switch, length)?;
    let p = spec.inner().0.vertex_count() as u32;
    let (copy3, copy1, copy2) = (5u32, 5 + p, 5 + 2 * p);

    let n = truncated.graph().vertex_count();
    let mut state = vec![Complex64::new(0.0, 0.0); n];
    state[0] = Complex64::new(1.0, 0.0);
    let kr = k.radians();
    for x in 1..=truncated.arm_sites() {
        let phase = kr * x as f64;
        state[truncated.site(x, 0).expect("arm site") as usize] =
            Complex64::from_polar(1.0, -phase);
        state[truncated.site(x, 1).expect("arm site") as usize] =
            Complex64::from_polar(1.0, phase);
    }
    let c = cert.constant;
    let e_ik = Complex64::from_polar(1.0, kr);
    for i in 0..p {
        let xi = cert.amplitudes[i as usize];
        state[(copy1 + i) as usize] = Complex64::new(-xi / c, 0.0);
        state[(copy2 + i) as usize] = Complex64::new(xi / c, 0.0);
        state[(copy3 + i) as usize] = -e_ik * (xi / c);
    }
    let skip = truncated.outer_sites(1);
    Ok(Some(SwitchWitness {
        truncated,
        state,
        skip,
        energy: k.energy(),
    }))
}

// ---------------------------------------------------------------------------
// Hand-entered gadgets.
// ---------------------------------------------------------------------------

/// Three-terminal momentum switch separating `-π/2` (transmits `1 → 2`) from
/// `-π/4` (transmits `1 → 3`); 13 vertices, 13 edges.
pub fn quarter_half_switch() -> Gadget {
    Gadget::new(
        13,
        [
            (0, 3),
            (3, 4),
            (1, 6),
            (2, 5),
            (5, 3),
            (5, 6),
            (6, 4),
            (6, 7),
            (7, 8),
            (7, 9),
            (10, 4),
            (10, 11),
            (10, 12),
        ],
        vec![0, 1, 2],
    )
    .expect("static gadget")
    .with_name("quarter_half_switch")
}

/// Four-terminal gadget acting as a basis-changing gate at `-π/4` and
/// `-3π/4`: its S-matrix is off-diagonal with 2×2 blocks
/// `U = -(1/√2) [[i, 1], [1, i]]` and `-U*` respectively.
pub fn basis_change() -> Gadget {
    Gadget::new(
        10,
        [
            (0, 4),
            (1, 5),
            (6, 2),
            (7, 3),
            (4, 6),
            (4, 8),
            (5, 7),
            (5, 8),
            (6, 9),
            (7, 9),
        ],
        vec![0, 1, 2, 3],
    )
    .expect("static gadget")
    .with_name("basis_change")
}

/// Two-terminal gadget with perfect transmission at `-π/4` and `-3π/4` and
/// transmission coefficients `-e^{iφ}` and `e^{iφ}`, where
/// `e^{iφ} = 2√2/3 + i/3` has irrational `φ/π`. The adjacency was
/// reconstructed from its drawing and is gated by those coefficients (see
/// the unit tests).
pub fn phase_gadget() -> Gadget {
    Gadget::new(
        8,
        [
            (2, 3),
            (3, 1),
            (1, 4),
            (4, 2),
            (2, 5),
            (5, 0),
            (0, 6),
            (6, 7),
            (7, 2),
            (0, 2),
            (6, 4),
            (7, 4),
        ],
        vec![0, 1],
    )
    .expect("static gadget")
    .with_name("phase_gadget")
}

/// Hand-entered 12-vertex reference for the momentum switch between `-π/3`
/// (transmits `1 → 2`) and `-2π/3` (transmits `1 → 3`); the assembled
/// `switch_from_type2(cycle_spec(3))` must be isomorphic to it.
pub fn third_switch_reference() -> Gadget {
    Gadget::new(
        12,
        [
            (0, 1),
            (0, 2),
            (0, 3),
            (2, 4),
            (4, 5),
            (4, 6),
            (5, 6),
            (3, 7),
            (3, 8),
            (7, 8),
            (7, 9),
            (8, 9),
            (9, 10),
            (9, 11),
            (10, 11),
        ],
        vec![1, 2, 3],
    )
    .expect("static gadget")
    .with_name("third_switch_reference")
}

/// Approximate switch between `-π/4` and `-3π/4` built from two basis-change
/// gadgets joined by a rail of `m` series-merged phase gadgets on top and a
/// two-edge path below. Terminals are ordered `(1,1), (1,2)` on the left and
/// `(1,3), (1,4)` on the right. `m` must be odd.
pub fn approx_switch(m: usize) -> Result<Gadget> {
    if m == 0 || m % 2 == 0 {
        return Err(Error::InvalidConstruction(format!(
            "approx_switch needs odd m, got {m}"
        )));
    }
    let ph = phase_gadget();
    let mut chain = ph.clone();
    for _ in 1..m {
        chain = chain.series_merge(1, &ph, 0)?;
    }

    let bc = basis_change();
    // Left copy keeps ids 0..9; embed the chain with its input identified
    // with the left terminal (1,3) = vertex 2.
    let mut edges: Vec<(u32, u32)> = bc.graph().edges().collect();
    let mut next = bc.vertex_count() as u32;
    let chain_in = chain.terminals()[0];
    let chain_out = chain.terminals()[1];
    let mut cmap = vec![u32::MAX; chain.vertex_count()];
    cmap[chain_in as usize] = 2;
    for v in 0..chain.vertex_count() as u32 {
        if v != chain_in {
            cmap[v as usize] = next;
            next += 1;
        }
    }
    for (a, b) in chain.graph().edges() {
        edges.push((cmap[a as usize], cmap[b as usize]));
    }
    let top_out = cmap[chain_out as usize];

    // Bottom rail: two-edge path from the left terminal (1,4) = vertex 3.
    let mid = next;
    next += 1;
    edges.push((3, mid));

    // Right copy: its (1,1) is the top rail's output, its (1,2) ends the
    // bottom rail, its (1,3)/(1,4) stay free.
    let mut rmap = vec![u32::MAX; bc.vertex_count()];
    rmap[0] = top_out;
    for v in 1..bc.vertex_count() as u32 {
        rmap[v as usize] = next;
        next += 1;
    }
    for (a, b) in bc.graph().edges() {
        edges.push((rmap[a as usize], rmap[b as usize]));
    }
    edges.push((mid, rmap[1]));

    Ok(
        Gadget::new(next as usize, edges, vec![0, 1, rmap[2], rmap[3]])?
            .with_name(format!("approx_switch:{m}")),
    )
}
