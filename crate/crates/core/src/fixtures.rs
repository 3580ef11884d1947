//! Built-in graphs shipped with the library.

use crate::graph::LabeledGraph;

/// The graph of `a1 ∘ a2`: path `v1 −α₁− v2 −α₂− v3`, distinguished `(v1, v3)`.
pub fn perm_g() -> LabeledGraph {
    LabeledGraph::with_default_names(3, 2, [(0, 1, 1), (1, 2, 2)], vec![0, 2])
        .expect("valid fixture")
}

/// The graph of `a2 ∘ a1`.
pub fn perm_h() -> LabeledGraph {
    LabeledGraph::with_default_names(3, 2, [(0, 1, 2), (1, 2, 1)], vec![0, 2])
        .expect("valid fixture")
}

/// Complete graph on four vertices, every edge labeled `α₁`, distinguished `(v1, v2)`.
pub fn k4() -> LabeledGraph {
    LabeledGraph::with_default_names(
        4,
        1,
        (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b, 1))),
        vec![0, 1],
    )
    .expect("valid fixture")
}

/// Path `v1 − v2 − v3 − v4` labeled `α₁`, distinguished endpoints.
pub fn path4() -> LabeledGraph {
    LabeledGraph::with_default_names(4, 1, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], vec![0, 3])
        .expect("valid fixture")
}

pub const BUILTIN_GRAPHS: &[&str] = &["perm_g", "perm_h", "k4", "path4"];

pub fn builtin_graph(name: &str) -> Option<LabeledGraph> {
    match name {
        "perm_g" => Some(perm_g()),
        "perm_h" => Some(perm_h()),
        "k4" => Some(k4()),
        "path4" => Some(path4()),
        _ => None,
    }
}
