//! Free algebras of the variety generated by a finite algebra `A`, realised
//! as the subalgebra of `A^(A^m)` generated by the `m` projections. Every
//! element is the value table of an `m`-ary term operation of `A`.

use std::collections::HashMap;

use super::{close_under, FiniteAlgebra, Operation};
use crate::error::{Error, Result};

/// Limits on the free-algebra construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeCaps {
    /// Largest allowed `s^m` (number of coordinates per element).
    pub max_power: usize,
    /// Largest allowed number of elements.
    pub max_elements: usize,
}

impl Default for FreeCaps {
    fn default() -> Self {
        FreeCaps {
            max_power: 4096,
            max_elements: 100_000,
        }
    }
}

/// Upper bound on operation-table entries when turning a free algebra into
/// a [`FiniteAlgebra`].
const MAX_TABLE_ENTRIES: usize = 1 << 22;

#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    base: FiniteAlgebra,
    generators: usize,
    /// Coordinate vectors indexed by argument tuples of `A^m`, row-major.
    elements: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    generator_elements: Vec<usize>,
}

impl FreeAlgebra {
    pub fn new(base: &FiniteAlgebra, generators: usize, caps: FreeCaps) -> Result<Self> {
        let s = base.size();
        if s > u8::MAX as usize + 1 {
            return Err(Error::CapExceeded {
                what: "base algebra size for free algebra",
                actual: s,
                cap: u8::MAX as usize + 1,
            });
        }
        if generators == 0 {
            return Err(Error::InvalidArgument(
                "free algebra needs at least one generator".into(),
            ));
        }
        let coords = s
            .checked_pow(generators as u32)
            .filter(|&c| c <= caps.max_power)
            .ok_or(Error::CapExceeded {
                what: "coordinate count s^m",
                actual: s.saturating_pow(generators as u32),
                cap: caps.max_power,
            })?;
        let projections: Vec<Vec<u8>> = (0..generators)
            .map(|g| {
                let stride = s.pow((generators - 1 - g) as u32);
                (0..coords).map(|t| ((t / stride) % s) as u8).collect()
            })
            .collect();
        let elements = close_under(
            base.operations(),
            projections.clone(),
            caps.max_elements,
            |op, args| apply_coordinatewise(op, args, coords),
        )
        .map_err(|actual| Error::CapExceeded {
            what: "free algebra elements",
            actual,
            cap: caps.max_elements,
        })?;
        let index: HashMap<Vec<u8>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let generator_elements = projections.iter().map(|p| index[p]).collect();
        Ok(FreeAlgebra {
            base: base.clone(),
            generators,
            elements,
            index,
            generator_elements,
        })
    }

    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &[u8] {
        &self.elements[i]
    }

    pub fn index_of(&self, coords: &[u8]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Element index of the `g`-th free generator.
    pub fn generator(&self, g: usize) -> usize {
        self.generator_elements[g]
    }

    /// Value of element `i`, read as an `m`-ary operation of the base
    /// algebra, at `args`.
    pub fn evaluate(&self, i: usize, args: &[usize]) -> usize {
        let s = self.base.size();
        let pos = args.iter().fold(0, |acc, &a| acc * s + a);
        self.elements[i][pos] as usize
    }

    /// Element `i` as an `m`-ary operation table on the base algebra.
    pub fn as_operation(&self, i: usize, name: impl Into<String>) -> Operation {
        Operation::new(
            name,
            self.generators,
            self.base.size(),
            self.elements[i].iter().map(|&x| x as usize).collect(),
        )
        .expect("elements are tables over the base universe")
    }

    /// The free algebra as a finite algebra on `{0, …, len-1}`, elements
    /// numbered in discovery order.
    pub fn to_algebra(&self) -> Result<FiniteAlgebra> {
        let n = self.len();
        let coords = self.elements[0].len();
        let ops = self
            .base
            .operations()
            .iter()
            .map(|op| {
                let entries = n.checked_pow(op.arity() as u32).unwrap_or(usize::MAX);
                if entries > MAX_TABLE_ENTRIES {
                    return Err(Error::CapExceeded {
                        what: "free algebra operation table",
                        actual: entries,
                        cap: MAX_TABLE_ENTRIES,
                    });
                }
                Operation::from_fn(op.name(), op.arity(), n, |args| {
                    let refs: Vec<&Vec<u8>> = args.iter().map(|&a| &self.elements[a]).collect();
                    self.index[&apply_coordinatewise(op, &refs, coords)]
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(n, ops)
    }
}

fn apply_coordinatewise(op: &Operation, args: &[&Vec<u8>], coords: usize) -> Vec<u8> {
    let mut buf = vec![0usize; args.len()];
    (0..coords)
        .map(|c| {
            for (slot, a) in buf.iter_mut().zip(args) {
                *slot = a[c] as usize;
            }
            op.apply(&buf) as u8
        })
        .collect()
}

impl FiniteAlgebra {
    pub fn free_algebra(&self, generators: usize, caps: FreeCaps) -> Result<FreeAlgebra> {
        FreeAlgebra::new(self, generators, caps)
    }
}
