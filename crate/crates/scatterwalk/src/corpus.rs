//! The standard gadget corpus behind the verification suites: every path and
//! cycle family instance in the tested ranges plus a set of multi-attachment
//! connector gadgets, with the momentum grids they are examined on.

use crate::constructions::{
    build_type1, cycle_gadget, cycle_spec, path_gadget, path_spec, PredictedRt, Type1Spec,
};
use crate::graph::{Gadget, Graph};
use crate::momentum::Momentum;

/// A corpus instance: its spec, built gadget, verification grid, and the
/// predicted sets when the family has them.
pub struct CorpusEntry {
    pub name: String,
    pub spec: Type1Spec,
    pub gadget: Gadget,
    pub grid: Vec<Momentum>,
    pub predicted: Option<PredictedRt>,
}

fn dedup_sorted(mut grid: Vec<Momentum>) -> Vec<Momentum> {
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    grid.dedup_by(|a, b| a.same_as(b));
    grid
}

fn entry(
    name: String,
    spec: Type1Spec,
    grid: Vec<Momentum>,
    predicted: Option<PredictedRt>,
) -> CorpusEntry {
    let gadget = build_type1(&spec).with_name(name.clone());
    CorpusEntry {
        name,
        spec,
        gadget,
        grid: dedup_sorted(grid),
        predicted,
    }
}

/// Path instances for `2 ≤ l1, l2 ≤ 8`; the grid is the union of the two
/// predicted sets, which the family formulas cover exhaustively.
pub fn path_instances() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for l1 in 2..=8 {
        for l2 in 2..=8 {
            let spec = path_spec(l1, l2).expect("valid arms");
            let (_, predicted) = path_gadget(l1, l2).expect("valid arms");
            out.push(entry(
                format!("path:{l1},{l2}"),
                spec,
                predicted.grid(),
                Some(predicted),
            ));
        }
    }
    out
}

/// Cycle instances for `3 ≤ r ≤ 12`; the grid refines `{-π j / r}` with the
/// half-step points `{-π j / 2r}`, whose odd numerators must classify as
/// neither reflecting nor transmitting.
pub fn cycle_instances() -> Vec<CorpusEntry> {
    (3..=12)
        .map(|r| {
            let spec = cycle_spec(r).expect("valid cycle");
            let (_, predicted) = cycle_gadget(r).expect("valid cycle");
            let grid = Momentum::grid(r as u64)
                .into_iter()
                .chain(Momentum::grid(2 * r as u64))
                .collect();
            entry(format!("cycle:{r}"), spec, grid, Some(predicted))
        })
        .collect()
}

/// Multi-attachment (and a few unusual single-attachment) connector specs
/// with no closed-form sets; examined on the quarter-step grid `q = 24`.
pub fn extra_instances() -> Vec<CorpusEntry> {
    let grid = || Momentum::grid(24);
    let mut out = Vec::new();
    let mut push = |name: &str, vertices: usize, edges: Vec<(u32, u32)>, attach: Vec<u32>| {
        let g0 = Graph::new(vertices, edges).expect("static graph");
        let spec = Type1Spec::new(g0, attach).expect("static spec");
        out.push(entry(name.to_string(), spec, grid(), None));
    };

    push("square_adjacent_pair", 4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], vec![0, 1]);
    push("square_opposite_pair", 4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], vec![0, 2]);
    push(
        "hexagon_adjacent_pair",
        6,
        (0..6).map(|i| (i, (i + 1) % 6)).collect(),
        vec![0, 1],
    );
    push(
        "hexagon_opposite_pair",
        6,
        (0..6).map(|i| (i, (i + 1) % 6)).collect(),
        vec![0, 3],
    );
    // Two disjoint 3-paths attached at their middles: carries a confined
    // state at energy ±√2 and reflects at -π/4 and -3π/4.
    push("twin_triples", 6, vec![(0, 1), (1, 2), (3, 4), (4, 5)], vec![1, 4]);
    push(
        "tetrahedron_pair",
        4,
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        vec![0, 1],
    );
    push("triangle_pair", 3, vec![(0, 1), (1, 2), (2, 0)], vec![0, 1]);
    push("star_tips", 4, vec![(0, 1), (0, 2), (0, 3)], vec![1, 2, 3]);
    push("single_vertex", 1, vec![], vec![0]);
    push("single_edge_end", 2, vec![(0, 1)], vec![0]);
    push(
        "five_path_ends",
        5,
        vec![(0, 1), (1, 2), (2, 3), (3, 4)],
        vec![0, 4],
    );
    push(
        "square_with_chord_pair",
        4,
        vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
        vec![1, 3],
    );
    push(
        "triangle_pendant",
        4,
        vec![(0, 1), (1, 2), (2, 0), (0, 3)],
        vec![3],
    );
    push(
        "square_pendant",
        5,
        vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)],
        vec![4],
    );
    out
}

/// The full connector-form corpus.
pub fn type1_corpus() -> Vec<CorpusEntry> {
    let mut all = path_instances();
    all.extend(cycle_instances());
    all.extend(extra_instances());
    all
}

/// Single-attachment entries, which admit reversal and switch assembly.
pub fn type2_corpus() -> Vec<CorpusEntry> {
    type1_corpus()
        .into_iter()
        .filter(|e| e.spec.is_type2())
        .collect()
}

/// Two-terminal gadgets of at most `max_vertices` vertices, for the exact
/// `Q(√2)` suites.
pub fn small_two_terminal(max_vertices: usize) -> Vec<(String, Gadget)> {
    let mut out: Vec<(String, Gadget)> = type1_corpus()
        .into_iter()
        .filter(|e| e.gadget.vertex_count() <= max_vertices)
        .map(|e| (e.name, e.gadget))
        .collect();
    out.push((
        "single_edge".into(),
        Gadget::new(2, [(0, 1)], vec![0, 1]).expect("static"),
    ));
    out.push((
        "two_edge_path".into(),
        Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).expect("static"),
    ));
    out
}

/// Gadgets of every terminal count for the global S-matrix property suite.
pub fn property_suite() -> Vec<(String, Gadget)> {
    let mut out: Vec<(String, Gadget)> = type1_corpus()
        .into_iter()
        .map(|e| (e.name, e.gadget))
        .collect();
    out.push(("single_edge".into(), Gadget::new(2, [(0, 1)], vec![0, 1]).expect("static")));
    out.push((
        "two_edge_path".into(),
        Gadget::new(3, [(0, 1), (1, 2)], vec![0, 2]).expect("static"),
    ));
    out.push((
        "quarter_half_switch".into(),
        crate::constructions::quarter_half_switch(),
    ));
    out.push(("basis_change".into(), crate::constructions::basis_change()));
    out.push(("phase_gadget".into(), crate::constructions::phase_gadget()));
    out.push((
        "third_switch".into(),
        crate::constructions::third_switch_reference(),
    ));
    out.push((
        "approx_switch:1".into(),
        crate::constructions::approx_switch(1).expect("m = 1 is odd"),
    ));
    out
}
