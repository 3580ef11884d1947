//! `{∘, ∩}`-terms over relation variables `a1 … an`: parsing, printing,
//! relational evaluation and the associated two-terminal graph.
//!
//! Grammar (composition binds tighter, both operators left-associative):
//!
//! ```text
//! term   := iterm ('&' iterm)*
//! iterm  := factor ('o' factor)*
//! factor := 'a' digits | '(' term ')'
//! ```
//!
//! `∩` and `∘` are accepted as aliases of `&` and `o`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::relation::FinRelation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Term {
    /// Relation variable with 1-based index.
    Var { index: usize },
    #[serde(rename = "comp")]
    Compose { left: Box<Term>, right: Box<Term> },
    #[serde(rename = "cap")]
    Intersect { left: Box<Term>, right: Box<Term> },
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var { index }
    }

    pub fn compose(left: Term, right: Term) -> Term {
        Term::Compose {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn intersect(left: Term, right: Term) -> Term {
        Term::Intersect {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Number of variable occurrences.
    pub fn leaves(&self) -> usize {
        match self {
            Term::Var { .. } => 1,
            Term::Compose { left, right } | Term::Intersect { left, right } => {
                left.leaves() + right.leaves()
            }
        }
    }

    pub fn max_var(&self) -> usize {
        match self {
            Term::Var { index } => *index,
            Term::Compose { left, right } | Term::Intersect { left, right } => {
                left.max_var().max(right.max_var())
            }
        }
    }

    /// Checks every variable index lies in `1..=n`.
    pub fn check_vars(&self, n: usize) -> Result<()> {
        match self {
            Term::Var { index } if *index == 0 || *index > n => Err(Error::VariableOutOfRange {
                index: *index,
                max: n,
            }),
            Term::Var { .. } => Ok(()),
            Term::Compose { left, right } | Term::Intersect { left, right } => {
                left.check_vars(n)?;
                right.check_vars(n)
            }
        }
    }

    /// Relational semantics: composition and intersection of `rels[i-1]`.
    pub fn eval(&self, rels: &[FinRelation]) -> Result<FinRelation> {
        let size = rels
            .first()
            .ok_or_else(|| Error::InvalidArgument("no relations supplied".into()))?
            .size();
        if let Some(r) = rels.iter().find(|r| r.size() != size) {
            return Err(Error::UniverseMismatch {
                left: size,
                right: r.size(),
            });
        }
        self.check_vars(rels.len())?;
        Ok(self.eval_unchecked(rels))
    }

    fn eval_unchecked(&self, rels: &[FinRelation]) -> FinRelation {
        match self {
            Term::Var { index } => rels[index - 1].clone(),
            Term::Compose { left, right } => left
                .eval_unchecked(rels)
                .compose(&right.eval_unchecked(rels))
                .expect("same universe"),
            Term::Intersect { left, right } => left
                .eval_unchecked(rels)
                .intersect(&right.eval_unchecked(rels))
                .expect("same universe"),
        }
    }

    /// The two-terminal graph `G_p` over `n` labels: a variable is a single
    /// labeled edge, composition glues in series, intersection in parallel.
    pub fn to_graph(&self, n: usize) -> Result<LabeledGraph> {
        self.check_vars(n)?;
        Ok(self.build_graph(n))
    }

    fn build_graph(&self, n: usize) -> LabeledGraph {
        match self {
            Term::Var { index } => {
                LabeledGraph::with_default_names(2, n, [(0, 1, *index)], vec![0, 1])
                    .expect("valid edge graph")
            }
            Term::Compose { left, right } => left
                .build_graph(n)
                .series(&right.build_graph(n))
                .expect("two-terminal graphs"),
            Term::Intersect { left, right } => left
                .build_graph(n)
                .parallel(&right.build_graph(n))
                .expect("two-terminal graphs"),
        }
    }

    /// All terms with exactly `leaves` variable occurrences over `n` labels.
    pub fn enumerate(n: usize, leaves: usize) -> Vec<Term> {
        if leaves == 0 {
            return Vec::new();
        }
        if leaves == 1 {
            return (1..=n).map(Term::var).collect();
        }
        let mut out = Vec::new();
        for k in 1..leaves {
            let lefts = Term::enumerate(n, k);
            let rights = Term::enumerate(n, leaves - k);
            for l in &lefts {
                for r in &rights {
                    out.push(Term::compose(l.clone(), r.clone()));
                    out.push(Term::intersect(l.clone(), r.clone()));
                }
            }
        }
        out
    }
}

/// Minimal-parentheses rendering with ASCII operators.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { index } => write!(f, "a{index}"),
            Term::Compose { left, right } => {
                // left side of ∘ only needs parentheses around ∩
                match **left {
                    Term::Intersect { .. } => write!(f, "({left})")?,
                    _ => write!(f, "{left}")?,
                }
                write!(f, " o ")?;
                match **right {
                    Term::Var { .. } => write!(f, "{right}"),
                    _ => write!(f, "({right})"),
                }
            }
            Term::Intersect { left, right } => {
                write!(f, "{left} & ")?;
                match **right {
                    Term::Intersect { .. } => write!(f, "({right})"),
                    _ => write!(f, "{right}"),
                }
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Compose,
    Intersect,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            'o' | '∘' => Tok::Compose,
            '&' | '∩' => Tok::Intersect,
            '(' => Tok::Open,
            ')' => Tok::Close,
            'a' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    digits.push(d);
                    chars.next();
                }
                if digits.is_empty() {
                    return Err(Error::Syntax {
                        position: pos,
                        message: "expected digits after 'a'".into(),
                    });
                }
                let index = digits.parse().map_err(|_| Error::Syntax {
                    position: pos,
                    message: "variable index too large".into(),
                })?;
                Tok::Var(index)
            }
            other => {
                return Err(Error::Syntax {
                    position: pos,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|&(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(p, _)| p)
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.iterm()?;
        while self.peek() == Some(Tok::Intersect) {
            self.pos += 1;
            acc = Term::intersect(acc, self.iterm()?);
        }
        Ok(acc)
    }

    fn iterm(&mut self) -> Result<Term> {
        let mut acc = self.factor()?;
        while self.peek() == Some(Tok::Compose) {
            self.pos += 1;
            acc = Term::compose(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::Var(index)) => {
                if index == 0 || index > self.n {
                    return Err(Error::VariableOutOfRange { index, max: self.n });
                }
                self.pos += 1;
                Ok(Term::var(index))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.term()?;
                if self.peek() != Some(Tok::Close) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected variable or '('"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a term over variables `a1 … an`.
pub fn parse_term(input: &str, n: usize) -> Result<Term> {
    if n == 0 {
        return Err(Error::InvalidArgument("variable count must be at least 1".into()));
    }
    let mut parser = Parser {
        toks: tokenize(input)?,
        pos: 0,
        end: input.len(),
        n,
    };
    let term = parser.term()?;
    if parser.pos != parser.toks.len() {
        return parser.error("trailing input");
    }
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::relation;
    use proptest::prelude::*;

    fn v(i: usize) -> Term {
        Term::var(i)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_term("a1 o a2", 2).unwrap(), Term::compose(v(1), v(2)));
        assert_eq!(
            parse_term("a1 & (a2 o a1)", 2).unwrap(),
            Term::intersect(v(1), Term::compose(v(2), v(1)))
        );
        let loose = parse_term("a1 o a2 & a3", 3).unwrap();
        assert_eq!(loose, Term::intersect(Term::compose(v(1), v(2)), v(3)));
        assert_eq!(loose, parse_term("((a1 o a2) & a3)", 3).unwrap());
        assert_eq!(parse_term("a1∘a2∩a3", 3).unwrap(), loose);
        assert_eq!(
            parse_term("a1 o a2 o a1", 2).unwrap(),
            Term::compose(Term::compose(v(1), v(2)), v(1))
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_term("a1 o a3", 2),
            Err(Error::VariableOutOfRange { index: 3, max: 2 })
        );
        assert!(matches!(parse_term("a0", 2), Err(Error::VariableOutOfRange { .. })));
        assert_eq!(
            parse_term("a1 o", 2),
            Err(Error::Syntax {
                position: 4,
                message: "unexpected end of input".into()
            })
        );
        assert!(matches!(
            parse_term("(a1 & a2", 2),
            Err(Error::Syntax { position: 8, .. })
        ));
        assert!(matches!(parse_term("a1 a2", 2), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(parse_term("a1 + a2", 2), Err(Error::Syntax { position: 3, .. })));
        assert!(matches!(parse_term("a", 2), Err(Error::Syntax { position: 0, .. })));
        assert!(parse_term("", 2).is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_term(&v(1)), "a1");
        assert_eq!(print_term(&Term::compose(v(1), v(2))), "a1 o a2");
        let t = Term::intersect(Term::compose(v(1), v(2)), v(3));
        assert_eq!(print_term(&t), "a1 o a2 & a3");
        assert_eq!(parse_term(&print_term(&t), 3).unwrap(), t);
        let right_nested = Term::compose(v(1), Term::compose(v(2), v(3)));
        assert_eq!(print_term(&right_nested), "a1 o (a2 o a3)");
        let mixed = Term::compose(Term::intersect(v(1), v(2)), v(3));
        assert_eq!(print_term(&mixed), "(a1 & a2) o a3");
    }

    #[test]
    fn graph_examples() {
        let g = v(1).to_graph(1).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.distinguished(), &[0, 1]);

        let g = parse_term("a1 o a2", 2).unwrap().to_graph(2).unwrap();
        assert_eq!(g.vertex_count(), 3);
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.label)).collect();
        assert_eq!(e, vec![(0, 1, 1), (1, 2, 2)]);
        assert_eq!(g.distinguished(), &[0, 2]);

        let g = parse_term("a1 & a2", 2).unwrap().to_graph(2).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.label)).collect();
        assert_eq!(e, vec![(0, 1, 1), (0, 1, 2)]);
        assert_eq!(g.distinguished(), &[0, 1]);

        assert!(v(3).to_graph(2).is_err());
    }

    #[test]
    fn eval_examples() {
        let r = FinRelation::tolerance_from_pairs(3, [(0, 1)]).unwrap();
        assert_eq!(v(1).eval(std::slice::from_ref(&r)).unwrap(), r);

        let r2 = FinRelation::tolerance_from_pairs(3, [(1, 2)]).unwrap();
        let out = parse_term("a1 o a2", 2).unwrap().eval(&[r.clone(), r2]).unwrap();
        assert!(out.contains(0, 2));

        let d = FinRelation::identity(4).unwrap();
        let t = parse_term("(a1 o a2) & a1 o a1", 2).unwrap();
        assert_eq!(t.eval(&[d.clone(), d.clone()]).unwrap(), d);

        let small = FinRelation::identity(2).unwrap();
        assert!(matches!(
            parse_term("a1 o a2", 2).unwrap().eval(&[r.clone(), small]),
            Err(Error::UniverseMismatch { .. })
        ));
        assert!(parse_term("a1 o a2", 2).unwrap().eval(&[r]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // Catalan(k-1) shapes, 2 operators per internal node, n choices per leaf
        assert_eq!(Term::enumerate(2, 1).len(), 2);
        assert_eq!(Term::enumerate(2, 2).len(), 2 * 4);
        assert_eq!(Term::enumerate(2, 3).len(), 2 * 4 * 8);
        assert_eq!(Term::enumerate(1, 4).len(), 5 * 8);
    }

    #[test]
    fn json_shape() {
        let t = parse_term("a1 & a2 o a1", 2).unwrap();
        let j = serde_json::to_value(&t).unwrap();
        assert_eq!(j["op"], "cap");
        assert_eq!(j["right"]["op"], "comp");
        assert_eq!(j["left"], serde_json::json!({"op": "var", "index": 1}));
        let back: Term = serde_json::from_value(j).unwrap();
        assert_eq!(back, t);
    }

    fn arb_term(n: usize) -> impl Strategy<Value = Term> {
        let leaf = (1..=n).prop_map(Term::var);
        leaf.prop_recursive(4, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::compose(l, r)),
                (inner.clone(), inner).prop_map(|(l, r)| Term::intersect(l, r)),
            ]
        })
    }

    fn uses_each_var_once(t: &Term) -> bool {
        fn collect(t: &Term, out: &mut Vec<usize>) {
            match t {
                Term::Var { index } => out.push(*index),
                Term::Compose { left, right } | Term::Intersect { left, right } => {
                    collect(left, out);
                    collect(right, out);
                }
            }
        }
        let mut vars = Vec::new();
        collect(t, &mut vars);
        let len = vars.len();
        vars.sort_unstable();
        vars.dedup();
        vars.len() == len
    }

    fn is_connected(g: &LabeledGraph) -> bool {
        let mut ds = crate::union_find::DisjointSets::new(g.vertex_count());
        for e in g.edges() {
            ds.union(e.u, e.v);
        }
        ds.blocks().len() == 1
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_term(3)) {
            let text = print_term(&t);
            prop_assert_eq!(parse_term(&text, 3).unwrap(), t);
        }

        #[test]
        fn term_graphs_are_connected_two_terminal(t in arb_term(3)) {
            let g = t.to_graph(3).unwrap();
            prop_assert!(is_connected(&g));
            prop_assert_eq!(g.arity(), 2);
            prop_assert_ne!(g.distinguished()[0], g.distinguished()[1]);
        }

        #[test]
        fn linear_term_graphs_are_regular(t in arb_term(6)) {
            prop_assume!(uses_each_var_once(&t));
            prop_assert!(t.to_graph(6).unwrap().is_regular());
        }

        #[test]
        fn graph_relation_matches_term_semantics(
            t in arb_term(2),
            masks in proptest::collection::vec(0u32..64, 2),
        ) {
            let rels: Vec<FinRelation> = masks
                .iter()
                .map(|&m| {
                    let off = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
                    FinRelation::tolerance_from_pairs(
                        4,
                        off.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p),
                    )
                    .unwrap()
                })
                .collect();
            let g = t.to_graph(2).unwrap();
            let via_graph = relation(&g, &rels).unwrap();
            let via_term: Vec<Vec<usize>> =
                t.eval(&rels).unwrap().pairs().map(|(a, b)| vec![a, b]).collect();
            prop_assert_eq!(via_graph, via_term);
        }
    }

    #[test]
    fn repeated_variable_breaks_regularity() {
        let g = parse_term("a1 o a1", 1).unwrap().to_graph(1).unwrap();
        assert!(!g.is_regular());
    }
}
