//! Binary relations on a finite universe `{0, …, s-1}` stored as dense
//! bitset rows, together with composition, converse, intersection, union and
//! the derived towers `r^k` and alternating products `b ∘ₘ c`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported universe; one `u64` per row.
pub const MAX_UNIVERSE: usize = 64;

/// A binary relation on `{0, …, size-1}`.
///
/// Row `a` holds the set `{b : (a, b) ∈ r}` as a bitmask. The reflexive,
/// symmetric and transitive flags are computed once at construction.
#[derive(Clone)]
pub struct FinRelation {
    size: usize,
    rows: Vec<u64>,
    reflexive: bool,
    symmetric: bool,
    transitive: bool,
}

fn full_mask(size: usize) -> u64 {
    if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

fn check_size(size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::InvalidRelation("universe must be nonempty".into()));
    }
    if size > MAX_UNIVERSE {
        return Err(Error::CapExceeded {
            what: "relation universe",
            actual: size,
            cap: MAX_UNIVERSE,
        });
    }
    Ok(())
}

impl FinRelation {
    fn from_rows_unchecked(size: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), size);
        let mut rel = FinRelation {
            size,
            rows,
            reflexive: false,
            symmetric: false,
            transitive: false,
        };
        rel.reflexive = (0..size).all(|a| rel.rows[a] >> a & 1 == 1);
        rel.symmetric = (0..size).all(|a| {
            let mut row = rel.rows[a];
            while row != 0 {
                let b = row.trailing_zeros() as usize;
                row &= row - 1;
                if rel.rows[b] >> a & 1 == 0 {
                    return false;
                }
            }
            true
        });
        rel.transitive = {
            let sq = rel.compose_rows(&rel);
            sq.iter().zip(&rel.rows).all(|(s, r)| s & !r == 0)
        };
        rel
    }

    pub fn from_rows(size: usize, rows: Vec<u64>) -> Result<Self> {
        check_size(size)?;
        if rows.len() != size {
            return Err(Error::InvalidRelation(format!(
                "expected {size} rows, got {}",
                rows.len()
            )));
        }
        let mask = full_mask(size);
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::InvalidRelation("row has bits outside universe".into()));
        }
        Ok(Self::from_rows_unchecked(size, rows))
    }

    pub fn empty(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Self::from_rows_unchecked(size, vec![0; size]))
    }

    /// The diagonal Δ = {(a, a)}.
    pub fn identity(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Self::from_rows_unchecked(
            size,
            (0..size).map(|a| 1u64 << a).collect(),
        ))
    }

    /// The full relation ∇ = A × A.
    pub fn full(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Self::from_rows_unchecked(size, vec![full_mask(size); size]))
    }

    pub fn from_pairs<I>(size: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_size(size)?;
        let mut rows = vec![0u64; size];
        for (a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::InvalidRelation(format!(
                    "pair ({a}, {b}) outside universe of size {size}"
                )));
            }
            rows[a] |= 1 << b;
        }
        Ok(Self::from_rows_unchecked(size, rows))
    }

    /// Smallest reflexive symmetric relation containing `pairs`.
    pub fn tolerance_from_pairs<I>(size: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let base = Self::from_pairs(size, pairs)?;
        base
            .union_rel(&base.converse())?
            .union_rel(&Self::identity(size)?)
    }

    /// Equivalence relation whose classes are the given blocks; elements not
    /// mentioned form singletons.
    pub fn from_partition(size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut pairs = Vec::new();
        for block in blocks {
            for &a in block {
                for &b in block {
                    pairs.push((a, b));
                }
            }
        }
        pairs.extend((0..size).map(|a| (a, a)));
        Self::from_pairs(size, pairs)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, a: usize) -> u64 {
        self.rows[a]
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        a < self.size && b < self.size && self.rows[a] >> b & 1 == 1
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexive
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    pub fn is_tolerance_shaped(&self) -> bool {
        self.reflexive && self.symmetric
    }

    pub fn is_equivalence(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| {
            let mut row = self.rows[a];
            std::iter::from_fn(move || {
                if row == 0 {
                    None
                } else {
                    let b = row.trailing_zeros() as usize;
                    row &= row - 1;
                    Some((a, b))
                }
            })
        })
    }

    pub fn is_subset(&self, other: &FinRelation) -> bool {
        self.size == other.size && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    fn same_universe(&self, other: &FinRelation) -> Result<()> {
        if self.size != other.size {
            return Err(Error::UniverseMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }

    fn compose_rows(&self, other: &FinRelation) -> Vec<u64> {
        self.rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                let mut rest = row;
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    acc |= other.rows[b];
                }
                acc
            })
            .collect()
    }

    /// Relational product: `(a, c)` iff some `b` has `(a, b) ∈ self` and `(b, c) ∈ other`.
    pub fn compose(&self, other: &FinRelation) -> Result<FinRelation> {
        self.same_universe(other)?;
        Ok(Self::from_rows_unchecked(self.size, self.compose_rows(other)))
    }

    pub fn converse(&self) -> FinRelation {
        let mut rows = vec![0u64; self.size];
        for (a, b) in self.pairs() {
            rows[b] |= 1 << a;
        }
        Self::from_rows_unchecked(self.size, rows)
    }

    pub fn intersect(&self, other: &FinRelation) -> Result<FinRelation> {
        self.same_universe(other)?;
        Ok(Self::from_rows_unchecked(
            self.size,
            self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect(),
        ))
    }

    pub fn union_rel(&self, other: &FinRelation) -> Result<FinRelation> {
        self.same_universe(other)?;
        Ok(Self::from_rows_unchecked(
            self.size,
            self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        ))
    }

    /// `self ∘ self ∘ … ∘ self` with `k ≥ 1` factors.
    pub fn power(&self, k: usize) -> Result<FinRelation> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "relation power needs at least one factor".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Alternating product with `m` factors starting and ending with `b`:
    /// `b`, `b∘c∘b`, `b∘c∘b∘c∘b`, ….
    pub fn circ_m(b: &FinRelation, c: &FinRelation, m: usize) -> Result<FinRelation> {
        if m == 0 || m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "alternating product needs an odd positive factor count, got {m}"
            )));
        }
        b.same_universe(c)?;
        let mut acc = b.clone();
        for _ in 0..(m - 1) / 2 {
            acc = acc.compose(c)?.compose(b)?;
        }
        Ok(acc)
    }

    /// Classes of an equivalence relation, ordered by minimal element.
    pub fn classes(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_equivalence() {
            return None;
        }
        let mut seen = 0u64;
        let mut out = Vec::new();
        for a in 0..self.size {
            if seen >> a & 1 == 1 {
                continue;
            }
            let row = self.rows[a];
            seen |= row;
            out.push((0..self.size).filter(|&b| row >> b & 1 == 1).collect());
        }
        Some(out)
    }
}

impl PartialEq for FinRelation {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.rows == other.rows
    }
}

impl Eq for FinRelation {}

impl std::hash::Hash for FinRelation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.size.hash(state);
        self.rows.hash(state);
    }
}

impl PartialOrd for FinRelation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by universe size, then by number of pairs, then by the
/// lexicographic pair listing.
impl Ord for FinRelation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.pairs().cmp(other.pairs()))
    }
}

impl fmt::Debug for FinRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinRelation(s={}, {{", self.size)?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}})")
    }
}

/// File form: `{"size": s, "pairs": [[a, b], …], "diagonal": bool}`.
/// With `diagonal` set, Δ is added on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationJson {
    pub size: usize,
    pub pairs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub diagonal: bool,
}

impl From<&FinRelation> for RelationJson {
    fn from(r: &FinRelation) -> Self {
        RelationJson {
            size: r.size,
            pairs: r.pairs().map(|(a, b)| [a, b]).collect(),
            diagonal: false,
        }
    }
}

impl TryFrom<RelationJson> for FinRelation {
    type Error = Error;

    fn try_from(j: RelationJson) -> Result<Self> {
        let rel = FinRelation::from_pairs(j.size, j.pairs.iter().map(|p| (p[0], p[1])))?;
        if j.diagonal {
            rel.union_rel(&FinRelation::identity(j.size)?)
        } else {
            Ok(rel)
        }
    }
}

impl Serialize for FinRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelationJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RelationJson::deserialize(d)?;
        FinRelation::try_from(j).map_err(serde::de::Error::custom)
    }
}
