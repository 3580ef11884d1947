//! The strong Mal'cev condition `M(G, H)` of a pair of labeled graphs.
//!
//! For every vertex `w` of `H` there is an operation symbol `t_w` whose
//! arity is the number of vertices of `G`. The identities are
//!
//! * `v_{dₖ} = t_{eₖ}(v₁, …, v_m)` for each distinguished position `k`, and
//! * `t_w(πᵢ(v₁), …, πᵢ(v_m)) = t_{w'}(πᵢ(v₁), …, πᵢ(v_m))` for each
//!   `αᵢ`-edge `{w, w'}` of `H`,
//!
//! where `πᵢ` sends each vertex of `G` to a variable naming its `~ᵢ`-class.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, Operation};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Expr {
    Var { name: String },
    App { op: String, args: Vec<String> },
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var { name: name.into() }
    }

    pub fn app(op: impl Into<String>, args: Vec<String>) -> Expr {
        Expr::App {
            op: op.into(),
            args,
        }
    }

    fn variables(&self) -> Vec<&str> {
        match self {
            Expr::Var { name } => vec![name],
            Expr::App { args, .. } => args.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Identity {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Identity {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        Identity { lhs, rhs }
    }
}

/// A finite set of identities in the operation symbols `t_w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySet {
    /// Operation symbols, one per vertex of `H`, in vertex order.
    pub symbols: Vec<String>,
    /// Common arity of all symbols.
    pub arity: usize,
    /// `v₁ … v_m`, the vertex names of `G`.
    pub variables: Vec<String>,
    pub identities: Vec<Identity>,
}

/// Which member of a `~ᵢ`-class names the class variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representative {
    Min,
    Max,
}

/// `M(G, H)` with class variables named after the least vertex of each class.
pub fn generate(g: &LabeledGraph, h: &LabeledGraph) -> Result<IdentitySet> {
    generate_with(g, h, Representative::Min)
}

pub fn generate_with(
    g: &LabeledGraph,
    h: &LabeledGraph,
    choice: Representative,
) -> Result<IdentitySet> {
    if g.label_count() != h.label_count() {
        return Err(Error::ShapeMismatch(format!(
            "label counts differ: {} vs {}",
            g.label_count(),
            h.label_count()
        )));
    }
    if g.arity() != h.arity() {
        return Err(Error::ShapeMismatch(format!(
            "distinguished counts differ: {} vs {}",
            g.arity(),
            h.arity()
        )));
    }
    let variables: Vec<String> = g.names().to_vec();
    let symbols: Vec<String> = h.names().iter().map(|w| format!("t_{w}")).collect();
    let projections: Vec<Vec<String>> = g
        .label_partitions()
        .iter()
        .map(|part| {
            (0..g.vertex_count())
                .map(|v| {
                    let rep = match choice {
                        Representative::Min => part.min_representative(v),
                        Representative::Max => part.max_representative(v),
                    };
                    format!("x_{}", g.name(rep))
                })
                .collect()
        })
        .collect();

    let mut identities = Vec::new();
    for (&d, &e) in g.distinguished().iter().zip(h.distinguished()) {
        identities.push(Identity::new(
            Expr::var(g.name(d)),
            Expr::app(symbols[e].clone(), variables.clone()),
        ));
    }
    for edge in h.edges().iter().filter(|e| !e.is_loop()) {
        let args = &projections[edge.label - 1];
        identities.push(Identity::new(
            Expr::app(symbols[edge.u].clone(), args.clone()),
            Expr::app(symbols[edge.v].clone(), args.clone()),
        ));
    }
    Ok(IdentitySet {
        symbols,
        arity: g.vertex_count(),
        variables,
        identities,
    })
}

impl IdentitySet {
    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    /// Display form: the symbols fixed to projections by the distinguished
    /// identities are substituted away and trivial identities dropped. The
    /// remaining symbols are those still occurring.
    pub fn simplified(&self) -> IdentitySet {
        let mut projection: HashMap<&str, usize> = HashMap::new();
        let mut kept: Vec<Identity> = Vec::new();
        for id in &self.identities {
            if let (Expr::Var { name }, Expr::App { op, args }) = (&id.lhs, &id.rhs) {
                if args == &self.variables && !projection.contains_key(op.as_str()) {
                    if let Some(pos) = self.variables.iter().position(|v| v == name) {
                        projection.insert(op, pos);
                        continue;
                    }
                }
            }
            kept.push(id.clone());
        }
        let subst = |e: &Expr| -> Expr {
            match e {
                Expr::App { op, args } => match projection.get(op.as_str()) {
                    Some(&pos) => Expr::var(args[pos].clone()),
                    None => e.clone(),
                },
                Expr::Var { .. } => e.clone(),
            }
        };
        let identities: Vec<Identity> = kept
            .iter()
            .map(|id| Identity::new(subst(&id.lhs), subst(&id.rhs)))
            .filter(|id| id.lhs != id.rhs)
            .collect();
        let used: BTreeSet<&str> = identities
            .iter()
            .flat_map(|id| [&id.lhs, &id.rhs])
            .filter_map(|e| match e {
                Expr::App { op, .. } => Some(op.as_str()),
                Expr::Var { .. } => None,
            })
            .collect();
        IdentitySet {
            symbols: self
                .symbols
                .iter()
                .filter(|s| used.contains(s.as_str()))
                .cloned()
                .collect(),
            arity: self.arity,
            variables: self.variables.clone(),
            identities,
        }
    }

    pub fn to_latex(&self) -> String {
        fn name(s: &str) -> String {
            match s.split_once('_') {
                Some((base, sub)) => format!("{base}_{{{sub}}}"),
                None => s.to_string(),
            }
        }
        fn expr(e: &Expr) -> String {
            match e {
                Expr::Var { name: n } => name(n),
                Expr::App { op, args } => format!(
                    "{}({})",
                    name(op),
                    args.iter().map(|a| name(a)).collect::<Vec<_>>().join(", ")
                ),
            }
        }
        let mut out = String::from("\\begin{align*}\n");
        for (i, id) in self.identities.iter().enumerate() {
            let sep = if i + 1 < self.identities.len() { " \\\\" } else { "" };
            out.push_str(&format!("{} &= {}{sep}\n", expr(&id.lhs), expr(&id.rhs)));
        }
        out.push_str("\\end{align*}\n");
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var { name } => write!(f, "{name}"),
            Expr::App { op, args } => write!(f, "{op}({})", args.join(",")),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// One identity per line.
impl fmt::Display for IdentitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for id in &self.identities {
            writeln!(f, "{id}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Shape {
    Var(usize),
    App(usize, Vec<usize>),
}

/// Identity with variables numbered by first occurrence, operation symbols
/// replaced through `op_code`, orientation chosen as the smaller one.
fn identity_shape(id: &Identity, op_code: &dyn Fn(&str) -> usize) -> (Shape, Shape) {
    let forward = oriented_shape(&id.lhs, &id.rhs, op_code);
    let backward = oriented_shape(&id.rhs, &id.lhs, op_code);
    forward.min(backward)
}

fn oriented_shape<'a>(
    first: &'a Expr,
    second: &'a Expr,
    op_code: &dyn Fn(&str) -> usize,
) -> (Shape, Shape) {
    let mut names: HashMap<&'a str, usize> = HashMap::new();
    let mut shape = |e: &'a Expr| -> Shape {
        let mut num = |v: &'a str| -> usize {
            let next = names.len();
            *names.entry(v).or_insert(next)
        };
        match e {
            Expr::Var { name } => Shape::Var(num(name)),
            Expr::App { op, args } => {
                let args: Vec<usize> = args.iter().map(|a| num(a)).collect();
                Shape::App(op_code(op), args)
            }
        }
    };
    let a = shape(first);
    let b = shape(second);
    (a, b)
}

fn mentions(id: &Identity, op: &str) -> bool {
    [&id.lhs, &id.rhs]
        .iter()
        .any(|e| matches!(e, Expr::App { op: o, .. } if o == op))
}

/// Occurrence profile of `op`: shapes of the identities mentioning it, with
/// `op` coded 1 and every other symbol coded 2.
fn profile(set: &IdentitySet, op: &str) -> Vec<(Shape, Shape)> {
    let mut out: Vec<(Shape, Shape)> = set
        .identities
        .iter()
        .filter(|id| mentions(id, op))
        .map(|id| identity_shape(id, &|o| if o == op { 1 } else { 2 }))
        .collect();
    out.sort();
    out
}

/// Whether some bijection of operation symbols, together with a bijective
/// renaming of the variables of each identity, carries `a` onto `b` as a
/// multiset of identities (either orientation of each equation).
pub fn equivalent_mod_renaming(a: &IdentitySet, b: &IdentitySet) -> bool {
    if a.identities.len() != b.identities.len() || a.symbols.len() != b.symbols.len() {
        return false;
    }
    let profiles_a: Vec<Vec<(Shape, Shape)>> = a.symbols.iter().map(|s| profile(a, s)).collect();
    let profiles_b: Vec<Vec<(Shape, Shape)>> = b.symbols.iter().map(|s| profile(b, s)).collect();
    let arity_a = |s: &str| arity_in(a, s);
    let arity_b = |s: &str| arity_in(b, s);
    let candidates: Vec<Vec<usize>> = (0..a.symbols.len())
        .map(|i| {
            (0..b.symbols.len())
                .filter(|&j| {
                    profiles_a[i] == profiles_b[j] && arity_a(&a.symbols[i]) == arity_b(&b.symbols[j])
                })
                .collect()
        })
        .collect();
    let b_index: HashMap<&str, usize> = b
        .symbols
        .iter()
        .enumerate()
        .map(|(j, s)| (s.as_str(), j + 3))
        .collect();
    let mut target: Vec<(Shape, Shape)> = b
        .identities
        .iter()
        .map(|id| identity_shape(id, &|o| b_index.get(o).copied().unwrap_or(0)))
        .collect();
    target.sort();

    let mut mapping = vec![usize::MAX; a.symbols.len()];
    let mut used = vec![false; b.symbols.len()];
    assign(a, &candidates, &target, 0, &mut mapping, &mut used)
}

fn arity_in(set: &IdentitySet, op: &str) -> Option<usize> {
    set.identities
        .iter()
        .flat_map(|id| [&id.lhs, &id.rhs])
        .find_map(|e| match e {
            Expr::App { op: o, args } if o == op => Some(args.len()),
            _ => None,
        })
}

fn assign(
    a: &IdentitySet,
    candidates: &[Vec<usize>],
    target: &[(Shape, Shape)],
    i: usize,
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if i == mapping.len() {
        let index: HashMap<&str, usize> = a
            .symbols
            .iter()
            .enumerate()
            .map(|(k, s)| (s.as_str(), mapping[k] + 3))
            .collect();
        let mut shapes: Vec<(Shape, Shape)> = a
            .identities
            .iter()
            .map(|id| identity_shape(id, &|o| index.get(o).copied().unwrap_or(0)))
            .collect();
        shapes.sort();
        return shapes == target;
    }
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        used[j] = true;
        mapping[i] = j;
        if assign(a, candidates, target, i + 1, mapping, used) {
            return true;
        }
        used[j] = false;
    }
    mapping[i] = usize::MAX;
    false
}

/// Checks every identity under every valuation of its variables in `alg`,
/// interpreting each symbol by the given operation table.
pub fn holds_in_algebra(
    ids: &IdentitySet,
    alg: &FiniteAlgebra,
    assignment: &BTreeMap<String, Operation>,
) -> Result<bool> {
    for id in &ids.identities {
        for e in [&id.lhs, &id.rhs] {
            if let Expr::App { op, args } = e {
                let table = assignment.get(op).ok_or_else(|| {
                    Error::InvalidArgument(format!("no operation assigned to {op}"))
                })?;
                if table.arity() != args.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "{op} is used with {} arguments but the table has arity {}",
                        args.len(),
                        table.arity()
                    )));
                }
                if table.table().len() != alg.size().pow(table.arity() as u32) {
                    return Err(Error::UniverseMismatch {
                        left: alg.size(),
                        right: table.table().len(),
                    });
                }
            }
        }
    }
    let s = alg.size();
    for id in &ids.identities {
        let mut vars: Vec<&str> = id.lhs.variables();
        vars.extend(id.rhs.variables());
        vars.sort_unstable();
        vars.dedup();
        let slot: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let eval = |e: &Expr, val: &[usize]| -> usize {
            match e {
                Expr::Var { name } => val[slot[name.as_str()]],
                Expr::App { op, args } => {
                    let xs: Vec<usize> = args.iter().map(|a| val[slot[a.as_str()]]).collect();
                    assignment[op].apply(&xs)
                }
            }
        };
        for val in crate::eval::tuples(s, vars.len()) {
            if eval(&id.lhs, &val) != eval(&id.rhs, &val) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
