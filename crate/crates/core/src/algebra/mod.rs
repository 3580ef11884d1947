//! Finite algebras on `{0, …, s-1}` given by operation tables, and the
//! relations they carry: compatible relations, congruences, tolerances.

mod free;
mod tolerance;

use std::collections::HashSet;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::FinRelation;
use crate::union_find::DisjointSets;

pub use free::{FreeAlgebra, FreeCaps};
pub use tolerance::{ToleranceClass, ToleranceRecord};

/// Universe cap for congruence enumeration by set partitions.
pub const MAX_CONGRUENCE_ENUM: usize = 8;
/// Universe cap for tolerance enumeration and classification.
pub const MAX_TOLERANCE_ENUM: usize = 6;

/// A basic operation with its table stored row-major: the entry for
/// `(x₁, …, x_k)` sits at `Σ xᵢ·s^(k-i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    name: String,
    arity: usize,
    size: usize,
    table: Vec<usize>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, size: usize, table: Vec<usize>) -> Result<Self> {
        let name = name.into();
        let expected = size
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::InvalidAlgebra(format!("table of {name} is too large")))?;
        if table.len() != expected {
            return Err(Error::InvalidAlgebra(format!(
                "operation {name} of arity {arity} needs {expected} entries, got {}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= size) {
            return Err(Error::InvalidAlgebra(format!(
                "operation {name} has value {bad} outside universe of size {size}"
            )));
        }
        Ok(Operation {
            name,
            arity,
            size,
            table,
        })
    }

    /// Builds the table by evaluating `f` on every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        arity: usize,
        size: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self> {
        let table = crate::eval::tuples(size, arity).map(|t| f(&t)).collect();
        Operation::new(name, arity, size, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn apply(&self, args: &[usize]) -> usize {
        self.table[self.index(args)]
    }

    /// The same operation acting coordinatewise on the `k`-th direct power,
    /// with the encoding of [`FiniteAlgebra::power`].
    pub fn lift_to_power(&self, k: usize) -> Result<Operation> {
        if k == 0 {
            return Err(Error::InvalidArgument("power exponent must be positive".into()));
        }
        let s = self.size;
        let size = s
            .checked_pow(k as u32)
            .ok_or_else(|| Error::InvalidAlgebra("power too large".into()))?;
        Operation::from_fn(self.name.clone(), self.arity, size, |args| {
            let mut out = 0;
            let mut col = vec![0usize; args.len()];
            for pos in (0..k).rev() {
                let stride = s.pow(pos as u32);
                for (c, &a) in col.iter_mut().zip(args) {
                    *c = a / stride % s;
                }
                out = out * s + self.apply(&col);
            }
            out
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    size: usize,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(size: usize, ops: Vec<Operation>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("universe must be nonempty".into()));
        }
        if let Some(op) = ops.iter().find(|op| op.size != size) {
            return Err(Error::InvalidAlgebra(format!(
                "operation {} is defined on a universe of size {}",
                op.name, op.size
            )));
        }
        Ok(FiniteAlgebra { size, ops })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    /// The two-element group `(ℤ₂, +, −, 0)`.
    pub fn z2() -> Self {
        FiniteAlgebra::new(
            2,
            vec![
                Operation::new("+", 2, 2, vec![0, 1, 1, 0]).expect("valid table"),
                Operation::new("-", 1, 2, vec![0, 1]).expect("valid table"),
                Operation::new("0", 0, 2, vec![0]).expect("valid table"),
            ],
        )
        .expect("valid algebra")
    }

    /// The lattice `0 < 1 < … < n-1` with meet and join.
    pub fn chain(n: usize) -> Self {
        FiniteAlgebra::new(
            n,
            vec![
                Operation::from_fn("meet", 2, n, |a| a[0].min(a[1])).expect("valid table"),
                Operation::from_fn("join", 2, n, |a| a[0].max(a[1])).expect("valid table"),
            ],
        )
        .expect("valid algebra")
    }

    /// A bare set: no operations.
    pub fn set(n: usize) -> Self {
        FiniteAlgebra::new(n, Vec::new()).expect("valid algebra")
    }

    /// Built-in algebras by name: `z2`, `chainN`, `setN`, optionally followed
    /// by `^k` for a direct power.
    pub fn builtin(name: &str) -> Option<Self> {
        let (base, exp) = match name.split_once('^') {
            Some((b, e)) => (b, e.parse::<usize>().ok().filter(|&k| k >= 1)?),
            None => (name, 1),
        };
        let alg = if base == "z2" {
            FiniteAlgebra::z2()
        } else if let Some(n) = base.strip_prefix("chain") {
            FiniteAlgebra::chain(n.parse().ok().filter(|&n| n >= 1)?)
        } else {
            let n = base.strip_prefix("set")?;
            FiniteAlgebra::set(n.parse().ok().filter(|&n| n >= 1)?)
        };
        alg.power(exp).ok()
    }

    /// Direct product; the pair `(a, b)` is encoded as `a·|B| + b`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if self.ops.len() != other.ops.len()
            || self.ops.iter().zip(&other.ops).any(|(a, b)| a.arity != b.arity)
        {
            return Err(Error::InvalidAlgebra(
                "factors must have the same signature".into(),
            ));
        }
        let size = self.size * other.size;
        let split = |x: usize| (x / other.size, x % other.size);
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(f, g)| {
                Operation::from_fn(f.name.clone(), f.arity, size, |args| {
                    let left: Vec<usize> = args.iter().map(|&x| split(x).0).collect();
                    let right: Vec<usize> = args.iter().map(|&x| split(x).1).collect();
                    f.apply(&left) * other.size + g.apply(&right)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(size, ops)
    }

    /// `self^k`; tuples are encoded row-major with the first factor most
    /// significant.
    pub fn power(&self, k: usize) -> Result<FiniteAlgebra> {
        if k == 0 {
            return Err(Error::InvalidArgument("power exponent must be positive".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    fn same_universe(&self, r: &FinRelation) -> Result<()> {
        if r.size() != self.size {
            return Err(Error::UniverseMismatch {
                left: self.size,
                right: r.size(),
            });
        }
        Ok(())
    }

    /// Whether `r` is closed under every operation applied componentwise.
    pub fn is_compatible(&self, r: &FinRelation) -> Result<bool> {
        self.same_universe(r)?;
        let pairs: Vec<(usize, usize)> = r.pairs().collect();
        for op in &self.ops {
            if op.arity == 0 {
                let c = op.table[0];
                if !r.contains(c, c) {
                    return Ok(false);
                }
                continue;
            }
            if pairs.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; op.arity];
            let mut left = vec![0usize; op.arity];
            let mut right = vec![0usize; op.arity];
            loop {
                for (j, &i) in idx.iter().enumerate() {
                    left[j] = pairs[i].0;
                    right[j] = pairs[i].1;
                }
                if !r.contains(op.apply(&left), op.apply(&right)) {
                    return Ok(false);
                }
                if !advance(&mut idx, pairs.len()) {
                    break;
                }
            }
        }
        Ok(true)
    }

    /// The subuniverse of `A²` generated by `r`.
    pub fn compatible_closure(&self, r: &FinRelation) -> Result<FinRelation> {
        self.same_universe(r)?;
        let gens: Vec<(usize, usize)> = r.pairs().collect();
        let closed = close_under(&self.ops, gens, usize::MAX, |op, args| {
            let left: Vec<usize> = args.iter().map(|p| p.0).collect();
            let right: Vec<usize> = args.iter().map(|p| p.1).collect();
            (op.apply(&left), op.apply(&right))
        })
        .expect("closure inside A² is bounded");
        FinRelation::from_pairs(self.size, closed)
    }

    /// All congruences, by filtering set partitions. Sorted canonically.
    pub fn congruences(&self) -> Result<Vec<FinRelation>> {
        if self.size > MAX_CONGRUENCE_ENUM {
            return Err(Error::CapExceeded {
                what: "universe for congruence enumeration",
                actual: self.size,
                cap: MAX_CONGRUENCE_ENUM,
            });
        }
        let mut out = Vec::new();
        for blocks in set_partitions(self.size) {
            let rel = FinRelation::from_partition(self.size, &blocks)?;
            if self.is_compatible(&rel)? {
                out.push(rel);
            }
        }
        out.sort();
        Ok(out)
    }

    /// All congruences as joins of principal congruences. Works beyond the
    /// partition-enumeration cap; sorted canonically.
    pub fn congruences_by_joins(&self) -> Result<Vec<FinRelation>> {
        let mut principal = Vec::new();
        for a in 0..self.size {
            for b in a + 1..self.size {
                principal.push(self.generated_congruence(&[(a, b)])?);
            }
        }
        principal.sort();
        principal.dedup();
        let bottom = FinRelation::identity(self.size)?;
        let mut seen: HashSet<FinRelation> = HashSet::from([bottom.clone()]);
        let mut queue = vec![bottom];
        while let Some(c) = queue.pop() {
            for p in &principal {
                if p.is_subset(&c) {
                    continue;
                }
                let pairs: Vec<(usize, usize)> = c.pairs().chain(p.pairs()).collect();
                let join = self.generated_congruence(&pairs)?;
                if seen.insert(join.clone()) {
                    queue.push(join);
                }
            }
        }
        let mut out: Vec<FinRelation> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Least congruence containing `pairs`.
    pub fn generated_congruence(&self, pairs: &[(usize, usize)]) -> Result<FinRelation> {
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= self.size || b >= self.size) {
            return Err(Error::InvalidArgument(format!(
                "pair ({a}, {b}) outside universe of size {}",
                self.size
            )));
        }
        let mut ds = DisjointSets::new(self.size);
        for &(a, b) in pairs {
            ds.union(a, b);
        }
        let mut changed = true;
        while changed {
            changed = false;
            for op in self.ops.iter().filter(|op| op.arity > 0) {
                let mut args = vec![0usize; op.arity];
                loop {
                    for j in 0..op.arity {
                        let keep = args[j];
                        for a in 0..self.size {
                            let root = ds.find(a);
                            if root == a {
                                continue;
                            }
                            args[j] = a;
                            let x = op.apply(&args);
                            args[j] = root;
                            let y = op.apply(&args);
                            changed |= ds.union(x, y);
                        }
                        args[j] = keep;
                    }
                    if !advance(&mut args, self.size) {
                        break;
                    }
                }
            }
        }
        FinRelation::from_partition(self.size, &ds.blocks())
    }
}

/// Odometer step over `{0, …, base-1}^k`; false once it wraps around.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Closes `gens` under every operation, applied through `apply`, in
/// semi-naive rounds: each round only evaluates argument tuples that use at
/// least one element found in the previous round. Elements keep discovery
/// order. Fails with the running size once it exceeds `cap`.
pub(crate) fn close_under<E, F>(
    ops: &[Operation],
    gens: Vec<E>,
    cap: usize,
    apply: F,
) -> std::result::Result<Vec<E>, usize>
where
    E: Clone + Eq + Hash,
    F: Fn(&Operation, &[&E]) -> E,
{
    let mut seen: HashSet<E> = HashSet::new();
    let mut elems: Vec<E> = Vec::new();
    for g in gens {
        if seen.insert(g.clone()) {
            elems.push(g);
        }
    }
    let mut lo = 0;
    let mut first = true;
    loop {
        let hi = elems.len();
        let mut fresh = Vec::new();
        for op in ops {
            let k = op.arity;
            if k == 0 {
                if first {
                    let e = apply(op, &[]);
                    if !seen.contains(&e) {
                        seen.insert(e.clone());
                        fresh.push(e);
                    }
                }
                continue;
            }
            // the first position holding a new element is `p`
            for p in 0..k {
                let ranges: Vec<(usize, usize)> = (0..k)
                    .map(|j| match j.cmp(&p) {
                        std::cmp::Ordering::Less => (0, lo),
                        std::cmp::Ordering::Equal => (lo, hi),
                        std::cmp::Ordering::Greater => (0, hi),
                    })
                    .collect();
                if ranges.iter().any(|&(a, b)| a >= b) {
                    continue;
                }
                let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
                'tuples: loop {
                    let args: Vec<&E> = idx.iter().map(|&i| &elems[i]).collect();
                    let e = apply(op, &args);
                    if !seen.contains(&e) {
                        seen.insert(e.clone());
                        fresh.push(e);
                        if hi + fresh.len() > cap {
                            return Err(hi + fresh.len());
                        }
                    }
                    for j in (0..k).rev() {
                        idx[j] += 1;
                        if idx[j] < ranges[j].1 {
                            continue 'tuples;
                        }
                        idx[j] = ranges[j].0;
                    }
                    break;
                }
            }
        }
        first = false;
        if fresh.is_empty() {
            return Ok(elems);
        }
        lo = hi;
        elems.extend(fresh);
    }
}

/// Set partitions of `{0, …, n-1}` via restricted growth strings; blocks
/// ordered by minimal element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let blocks = rgs.iter().max().map_or(0, |m| m + 1);
            let mut parts = vec![Vec::new(); blocks];
            for (x, &b) in rgs.iter().enumerate() {
                parts[b].push(x);
            }
            out.push(parts);
            return;
        }
        let next = rgs.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            rgs.push(b);
            rec(i + 1, n, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::with_capacity(n), &mut out);
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperationJson {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// File form: `{"size": s, "ops": [{"name": …, "arity": k, "table": […]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub size: usize,
    pub ops: Vec<OperationJson>,
}

impl From<&FiniteAlgebra> for AlgebraJson {
    fn from(a: &FiniteAlgebra) -> Self {
        AlgebraJson {
            size: a.size,
            ops: a
                .ops
                .iter()
                .map(|op| OperationJson {
                    name: op.name.clone(),
                    arity: op.arity,
                    table: op.table.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<AlgebraJson> for FiniteAlgebra {
    type Error = Error;

    fn try_from(j: AlgebraJson) -> Result<Self> {
        let ops = j
            .ops
            .into_iter()
            .map(|op| Operation::new(op.name, op.arity, j.size, op.table))
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(j.size, ops)
    }
}

impl Serialize for FiniteAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FiniteAlgebra::try_from(AlgebraJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn partitions_count_bell_numbers() {
        for n in 0..=8 {
            assert_eq!(set_partitions(n).len(), bell(n), "n = {n}");
        }
        assert_eq!(bell(8), 4140);
    }

    #[test]
    fn builtins() {
        assert_eq!(FiniteAlgebra::builtin("z2").unwrap().size(), 2);
        assert_eq!(FiniteAlgebra::builtin("z2^2").unwrap().size(), 4);
        assert_eq!(FiniteAlgebra::builtin("chain3").unwrap().size(), 3);
        assert_eq!(FiniteAlgebra::builtin("set3").unwrap().operations().len(), 0);
        assert!(FiniteAlgebra::builtin("chain0").is_none());
        assert!(FiniteAlgebra::builtin("z2^0").is_none());
        assert!(FiniteAlgebra::builtin("group").is_none());
    }

    #[test]
    fn product_encoding() {
        let z = FiniteAlgebra::z2().power(2).unwrap();
        let plus = &z.operations()[0];
        // (1,0) + (1,1) = (0,1)
        assert_eq!(plus.apply(&[2, 3]), 1);
        assert!(FiniteAlgebra::z2().product(&FiniteAlgebra::chain(2)).is_err());
    }

    #[test]
    fn lifted_operations_match_the_power() {
        for base in [FiniteAlgebra::z2(), FiniteAlgebra::chain(3)] {
            let sq = base.power(2).unwrap();
            for (op, op2) in base.operations().iter().zip(sq.operations()) {
                assert_eq!(&op.lift_to_power(2).unwrap(), op2);
            }
        }
    }

    #[test]
    fn operation_validation() {
        assert!(Operation::new("f", 2, 2, vec![0, 1, 1]).is_err());
        assert!(Operation::new("f", 1, 2, vec![0, 2]).is_err());
        let f = Operation::new("f", 1, 3, vec![1, 2, 0]).unwrap();
        assert!(FiniteAlgebra::new(2, vec![f]).is_err());
        assert!(FiniteAlgebra::new(0, vec![]).is_err());
    }

    #[test]
    fn compatibility_examples() {
        for alg in [FiniteAlgebra::z2(), FiniteAlgebra::chain(3), FiniteAlgebra::set(3)] {
            let s = alg.size();
            assert!(alg.is_compatible(&FinRelation::identity(s).unwrap()).unwrap());
            assert!(alg.is_compatible(&FinRelation::full(s).unwrap()).unwrap());
        }
        let chain2 = FiniteAlgebra::chain(2);
        let le = FinRelation::from_pairs(2, [(0, 0), (1, 1), (0, 1)]).unwrap();
        assert!(chain2.is_compatible(&le).unwrap());
        let z2 = FiniteAlgebra::z2();
        assert!(!z2.is_compatible(&le).unwrap());
        let no_diag = FinRelation::from_pairs(2, [(1, 1)]).unwrap();
        assert!(!z2.is_compatible(&no_diag).unwrap());
        assert!(z2.is_compatible(&FinRelation::identity(3).unwrap()).is_err());
    }

    #[test]
    fn congruence_examples() {
        let z2 = FiniteAlgebra::z2().congruences().unwrap();
        assert_eq!(z2.len(), 2);

        let chain3 = FiniteAlgebra::chain(3).congruences().unwrap();
        let expect = vec![
            FinRelation::identity(3).unwrap(),
            FinRelation::from_partition(3, &[vec![0, 1]]).unwrap(),
            FinRelation::from_partition(3, &[vec![1, 2]]).unwrap(),
            FinRelation::full(3).unwrap(),
        ];
        let mut expect_sorted = expect.clone();
        expect_sorted.sort();
        assert_eq!(chain3, expect_sorted);

        assert_eq!(FiniteAlgebra::set(3).congruences().unwrap().len(), 5);
        assert!(matches!(
            FiniteAlgebra::set(9).congruences(),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn generated_congruence_examples() {
        let z = FiniteAlgebra::z2().power(2).unwrap();
        assert_eq!(
            z.generated_congruence(&[]).unwrap(),
            FinRelation::identity(4).unwrap()
        );
        // (0,0) ↦ 0, (1,0) ↦ 2: cosets of the subgroup {(0,0), (1,0)}
        let c = z.generated_congruence(&[(0, 2)]).unwrap();
        assert_eq!(c.classes().unwrap(), vec![vec![0, 2], vec![1, 3]]);
        let chain = FiniteAlgebra::chain(4);
        assert_eq!(
            chain.generated_congruence(&[(0, 3)]).unwrap(),
            FinRelation::full(4).unwrap()
        );
        assert!(chain.generated_congruence(&[(0, 4)]).is_err());
    }

    #[test]
    fn generated_congruence_is_least_containing() {
        for alg in [
            FiniteAlgebra::chain(4),
            FiniteAlgebra::z2().power(2).unwrap(),
            FiniteAlgebra::chain(2).power(2).unwrap(),
            FiniteAlgebra::set(4),
        ] {
            let cons = alg.congruences().unwrap();
            let s = alg.size();
            for a in 0..s {
                for b in 0..s {
                    for c in 0..s {
                        let pairs = [(a, b), (b, c)];
                        let got = alg.generated_congruence(&pairs).unwrap();
                        let containing: Vec<&FinRelation> = cons
                            .iter()
                            .filter(|r| pairs.iter().all(|&(x, y)| r.contains(x, y)))
                            .collect();
                        let least = containing
                            .iter()
                            .find(|r| containing.iter().all(|o| r.is_subset(o)))
                            .unwrap();
                        assert_eq!(&&got, least);
                    }
                }
            }
        }
    }

    #[test]
    fn congruences_two_routes_agree() {
        for alg in [
            FiniteAlgebra::chain(5),
            FiniteAlgebra::z2().power(3).unwrap(),
            FiniteAlgebra::chain(2).power(3).unwrap(),
            FiniteAlgebra::set(4),
        ] {
            assert_eq!(alg.congruences().unwrap(), alg.congruences_by_joins().unwrap());
        }
    }

    #[test]
    fn compatible_closure_is_least_subuniverse() {
        let chain = FiniteAlgebra::chain(3);
        let r = FinRelation::from_pairs(3, [(0, 2), (1, 0)]).unwrap();
        let c = chain.compatible_closure(&r).unwrap();
        assert!(chain.is_compatible(&c).unwrap());
        assert!(r.is_subset(&c));
        // meet and join of (0,2),(1,0) give (0,0) and (1,2)
        assert_eq!(
            c,
            FinRelation::from_pairs(3, [(0, 2), (1, 0), (0, 0), (1, 2)]).unwrap()
        );
        let z2 = FiniteAlgebra::z2();
        let c = z2.compatible_closure(&FinRelation::empty(2).unwrap()).unwrap();
        assert_eq!(c, FinRelation::from_pairs(2, [(0, 0)]).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let a = FiniteAlgebra::chain(3);
        let text = serde_json::to_string(&a).unwrap();
        let back: FiniteAlgebra = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let bad = r#"{"size":2,"ops":[{"name":"f","arity":1,"table":[0,5]}]}"#;
        assert!(serde_json::from_str::<FiniteAlgebra>(bad).is_err());
    }
}
