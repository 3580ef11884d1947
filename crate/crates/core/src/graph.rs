//! Edge-labeled graphs with an ordered tuple of distinguished vertices, and
//! the quantities derived from them: the per-label equivalences `~ᵢ`,
//! regularity and the path constants `kᵢ`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::union_find::DisjointSets;

/// An undirected edge carrying label `label` (1-based). Endpoints are stored
/// with `u <= v`; the derived order sorts by label first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub label: usize,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(u: usize, v: usize, label: usize) -> Self {
        Edge {
            label,
            u: u.min(v),
            v: u.max(v),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A finite graph whose edges carry labels `α₁ … αₙ` and which has `h ≥ 1`
/// distinguished vertices `d₁ … d_h` (repetitions allowed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    names: Vec<String>,
    labels: usize,
    edges: Vec<Edge>,
    distinguished: Vec<usize>,
}

/// The partition of the vertex set into classes of `~ᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPartition {
    pub label: usize,
    /// Blocks ordered by minimal vertex, each sorted ascending.
    pub blocks: Vec<Vec<usize>>,
    /// Index into `blocks` for every vertex.
    pub class_of: Vec<usize>,
}

impl LabelPartition {
    pub fn block_of(&self, v: usize) -> &[usize] {
        &self.blocks[self.class_of[v]]
    }

    /// Minimal vertex of the class of `v`.
    pub fn min_representative(&self, v: usize) -> usize {
        self.block_of(v)[0]
    }

    pub fn max_representative(&self, v: usize) -> usize {
        *self.block_of(v).last().expect("blocks are nonempty")
    }

    pub fn same_class(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

impl LabeledGraph {
    /// Builds a graph over vertices `0..names.len()`. Edges are given as
    /// `(u, v, label)` with 1-based labels and are deduplicated as unordered
    /// labeled pairs.
    pub fn new<I>(
        names: Vec<String>,
        labels: usize,
        edges: I,
        distinguished: Vec<usize>,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let nv = names.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if labels == 0 {
            return Err(Error::InvalidGraph("label count must be at least 1".into()));
        }
        let unique: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        if unique.len() != nv {
            return Err(Error::InvalidGraph("duplicate vertex id".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v, label) in edges {
            if u >= nv || v >= nv {
                return Err(Error::InvalidGraph(format!(
                    "edge endpoint out of range: ({u}, {v})"
                )));
            }
            if label == 0 || label > labels {
                return Err(Error::LabelOutOfRange {
                    index: label,
                    max: labels,
                });
            }
            set.insert(Edge::new(u, v, label));
        }
        if distinguished.is_empty() {
            return Err(Error::InvalidGraph(
                "at least one distinguished vertex is required".into(),
            ));
        }
        if let Some(&d) = distinguished.iter().find(|&&d| d >= nv) {
            return Err(Error::InvalidGraph(format!(
                "distinguished vertex {d} out of range"
            )));
        }
        Ok(LabeledGraph {
            names,
            labels,
            edges: set.into_iter().collect(),
            distinguished,
        })
    }

    /// Same as [`LabeledGraph::new`] with vertices named `v1, v2, …`.
    pub fn with_default_names<I>(
        vertex_count: usize,
        labels: usize,
        edges: I,
        distinguished: Vec<usize>,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let names = (1..=vertex_count).map(|i| format!("v{i}")).collect();
        Self::new(names, labels, edges, distinguished)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn label_count(&self) -> usize {
        self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn distinguished(&self) -> &[usize] {
        &self.distinguished
    }

    pub fn arity(&self) -> usize {
        self.distinguished.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Non-fatal remarks about the input, such as a single distinguished vertex.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.distinguished.len() == 1 {
            out.push("graph has a single distinguished vertex; relations are unary".into());
        }
        out
    }

    fn check_label(&self, label: usize) -> Result<()> {
        if label == 0 || label > self.labels {
            return Err(Error::LabelOutOfRange {
                index: label,
                max: self.labels,
            });
        }
        Ok(())
    }

    pub fn edges_with_label(&self, label: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.label == label)
    }

    /// Neighbours of every vertex through edges with the given label
    /// (self-loops omitted).
    fn label_adjacency(&self, label: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in self.edges_with_label(label).filter(|e| !e.is_loop()) {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// Classes of `~ᵢ`: connected components of the `αᵢ`-edge subgraph.
    pub fn label_partition(&self, label: usize) -> Result<LabelPartition> {
        self.check_label(label)?;
        let mut ds = DisjointSets::new(self.vertex_count());
        for e in self.edges_with_label(label) {
            ds.union(e.u, e.v);
        }
        let blocks = ds.blocks();
        let mut class_of = vec![0; self.vertex_count()];
        for (i, block) in blocks.iter().enumerate() {
            for &v in block {
                class_of[v] = i;
            }
        }
        Ok(LabelPartition {
            label,
            blocks,
            class_of,
        })
    }

    pub fn label_partitions(&self) -> Vec<LabelPartition> {
        (1..=self.labels)
            .map(|i| self.label_partition(i).expect("label in range"))
            .collect()
    }

    /// Every class of every `~ᵢ` has at most two vertices.
    pub fn is_regular(&self) -> bool {
        self.label_partitions()
            .iter()
            .all(|p| p.max_block_size() <= 2)
    }

    /// For each label, twice the largest over `~ᵢ`-classes of the minimal
    /// eccentricity of a class member, paths staying inside the class.
    /// Labels whose classes are all singletons give 0.
    pub fn k_constants(&self) -> Vec<usize> {
        (1..=self.labels)
            .map(|label| {
                let part = self.label_partition(label).expect("label in range");
                let adj = self.label_adjacency(label);
                let worst = part
                    .blocks
                    .iter()
                    .map(|block| {
                        block
                            .iter()
                            .map(|&x| eccentricity(&adj, x, block.len()))
                            .min()
                            .unwrap_or(0)
                    })
                    .max()
                    .unwrap_or(0);
                2 * worst
            })
            .collect()
    }

    /// Series composition of two graphs with two distinguished vertices: the
    /// second terminal of `self` is glued to the first terminal of `other`.
    /// Vertices of the result are renamed `v1, v2, …`.
    pub fn series(&self, other: &LabeledGraph) -> Result<LabeledGraph> {
        self.glue(other, |s, o, map| {
            map[o.distinguished[0]] = Some(s.distinguished[1]);
        }, |s, o, map| vec![s.distinguished[0], map[o.distinguished[1]]])
    }

    /// Parallel composition: terminals are glued pairwise.
    pub fn parallel(&self, other: &LabeledGraph) -> Result<LabeledGraph> {
        self.glue(other, |s, o, map| {
            map[o.distinguished[0]] = Some(s.distinguished[0]);
            map[o.distinguished[1]] = Some(s.distinguished[1]);
        }, |s, _, _| s.distinguished.clone())
    }

    fn glue(
        &self,
        other: &LabeledGraph,
        identify: impl Fn(&LabeledGraph, &LabeledGraph, &mut Vec<Option<usize>>),
        terminals: impl Fn(&LabeledGraph, &LabeledGraph, &[usize]) -> Vec<usize>,
    ) -> Result<LabeledGraph> {
        if self.arity() != 2 || other.arity() != 2 {
            return Err(Error::ShapeMismatch(
                "two-terminal composition needs exactly 2 distinguished vertices".into(),
            ));
        }
        if self.labels != other.labels {
            return Err(Error::ShapeMismatch(format!(
                "label counts differ: {} vs {}",
                self.labels, other.labels
            )));
        }
        if other.distinguished[0] == other.distinguished[1]
            || self.distinguished[0] == self.distinguished[1]
        {
            return Err(Error::ShapeMismatch(
                "two-terminal composition needs distinct terminals".into(),
            ));
        }
        let mut partial = vec![None; other.vertex_count()];
        identify(self, other, &mut partial);
        let mut next = self.vertex_count();
        let map: Vec<usize> = partial
            .into_iter()
            .map(|slot| {
                slot.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.label))
            .chain(other.edges.iter().map(|e| (map[e.u], map[e.v], e.label)));
        let distinguished = terminals(self, other, &map);
        LabeledGraph::with_default_names(next, self.labels, edges, distinguished)
    }
}

fn eccentricity(adj: &[Vec<usize>], start: usize, class_size: usize) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut reached = 1;
    let mut far = 0;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                far = far.max(dist[y]);
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    // classes are exactly the components of the label subgraph
    assert_eq!(reached, class_size, "class is not connected by its label");
    far
}

/// Vertex ids in files may be strings or integers.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Name(String),
}

impl VertexId {
    fn into_name(self) -> String {
        match self {
            VertexId::Int(i) => i.to_string(),
            VertexId::Name(s) => s,
        }
    }
}

/// File form:
/// `{"vertices": [...], "n": int, "edges": [[u, v, i], ...], "distinguished": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId, usize)>,
    pub distinguished: Vec<VertexId>,
}

impl From<&LabeledGraph> for GraphJson {
    fn from(g: &LabeledGraph) -> Self {
        let id = |v: usize| VertexId::Name(g.names[v].clone());
        GraphJson {
            vertices: (0..g.vertex_count()).map(id).collect(),
            n: g.labels,
            edges: g.edges.iter().map(|e| (id(e.u), id(e.v), e.label)).collect(),
            distinguished: g.distinguished.iter().map(|&d| id(d)).collect(),
        }
    }
}

impl TryFrom<GraphJson> for LabeledGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let names: Vec<String> = j.vertices.into_iter().map(VertexId::into_name).collect();
        let lookup = |id: VertexId| -> Result<usize> {
            let name = id.into_name();
            names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex id {name:?}")))
        };
        let edges = j
            .edges
            .into_iter()
            .map(|(u, v, i)| Ok((lookup(u)?, lookup(v)?, i)))
            .collect::<Result<Vec<_>>>()?;
        let distinguished = j
            .distinguished
            .into_iter()
            .map(lookup)
            .collect::<Result<Vec<_>>>()?;
        LabeledGraph::new(names.clone(), j.n, edges, distinguished)
    }
}

impl Serialize for LabeledGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LabeledGraph::try_from(GraphJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
