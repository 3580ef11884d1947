use std::collections::HashSet;

use serde::Serialize;

use super::{FiniteAlgebra, MAX_TOLERANCE_ENUM};
use crate::error::{Error, Result};
use crate::relation::FinRelation;

/// Strongest class a tolerance belongs to. Classes are cumulative in the
/// listed order: a congruence is representable, a representable tolerance is
/// weakly representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToleranceClass {
    Congruence,
    Representable,
    WeaklyRepresentable,
    Tolerance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToleranceRecord {
    pub relation: FinRelation,
    pub class: ToleranceClass,
}

impl ToleranceRecord {
    pub fn is_congruence(&self) -> bool {
        self.class == ToleranceClass::Congruence
    }

    pub fn is_representable(&self) -> bool {
        self.class <= ToleranceClass::Representable
    }

    pub fn is_weakly_representable(&self) -> bool {
        self.class <= ToleranceClass::WeaklyRepresentable
    }
}

/// `R ∘ R⁻`.
fn kernel_product(r: &FinRelation) -> FinRelation {
    r.compose(&r.converse()).expect("same universe")
}

impl FiniteAlgebra {
    fn check_tolerance_cap(&self) -> Result<()> {
        if self.size > MAX_TOLERANCE_ENUM {
            return Err(Error::CapExceeded {
                what: "universe for tolerance enumeration",
                actual: self.size,
                cap: MAX_TOLERANCE_ENUM,
            });
        }
        Ok(())
    }

    /// Least tolerance containing `r`.
    pub fn generated_tolerance(&self, r: &FinRelation) -> Result<FinRelation> {
        let sym = r
            .union_rel(&r.converse())?
            .union_rel(&FinRelation::identity(self.size)?)?;
        self.compatible_closure(&sym)
    }

    /// All compatible reflexive symmetric relations, sorted canonically.
    pub fn tolerance_relations(&self) -> Result<Vec<FinRelation>> {
        self.check_tolerance_cap()?;
        let bottom = FinRelation::identity(self.size)?;
        let mut seen: HashSet<FinRelation> = HashSet::from([bottom.clone()]);
        let mut stack = vec![bottom];
        while let Some(t) = stack.pop() {
            for a in 0..self.size {
                for b in a + 1..self.size {
                    if t.contains(a, b) {
                        continue;
                    }
                    let bigger = t.union_rel(&FinRelation::from_pairs(self.size, [(a, b)])?)?;
                    let next = self.generated_tolerance(&bigger)?;
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        let mut out: Vec<FinRelation> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Every tolerance with its representability class, sorted canonically.
    pub fn tolerances(&self) -> Result<Vec<ToleranceRecord>> {
        self.tolerance_relations()?
            .into_iter()
            .map(|relation| {
                let class = self.classify_tolerance(&relation)?;
                Ok(ToleranceRecord { relation, class })
            })
            .collect()
    }

    /// Classifies a tolerance of this algebra.
    pub fn classify_tolerance(&self, theta: &FinRelation) -> Result<ToleranceClass> {
        self.check_tolerance_cap()?;
        if !theta.is_tolerance_shaped() || !self.is_compatible(theta)? {
            return Err(Error::InvalidRelation("not a tolerance of the algebra".into()));
        }
        Ok(if theta.is_transitive() {
            ToleranceClass::Congruence
        } else if self.representing_relation(theta)?.is_some() {
            ToleranceClass::Representable
        } else if self.is_weakly_representable(theta)? {
            ToleranceClass::WeaklyRepresentable
        } else {
            ToleranceClass::Tolerance
        })
    }

    /// A compatible reflexive `R` with `R ∘ R⁻ = Θ`, if one exists.
    ///
    /// Such an `R` lies inside `Θ`. The search grows `R` from Δ by closing
    /// under the operations after adding, for some uncovered pair `(c, d)` of
    /// `Θ`, a common upper witness `e` with `(c, e), (d, e)`; branches whose
    /// product already leaves `Θ` are cut.
    pub fn representing_relation(&self, theta: &FinRelation) -> Result<Option<FinRelation>> {
        let start = self.compatible_closure(&FinRelation::identity(self.size)?)?;
        let mut visited = HashSet::new();
        Ok(self.cover_search(theta, start, &mut visited, &|r, product| {
            if !product.is_subset(theta) {
                return Prune::Cut;
            }
            if r.is_subset(theta) {
                Prune::Keep
            } else {
                Prune::Cut
            }
        }))
    }

    /// `Θ` equals the intersection of all `R ∘ R⁻ ⊇ Θ` with `R` compatible
    /// and reflexive: each pair outside `Θ` must be avoided by one such product.
    pub fn is_weakly_representable(&self, theta: &FinRelation) -> Result<bool> {
        let start = self.compatible_closure(&FinRelation::identity(self.size)?)?;
        for a in 0..self.size {
            for b in 0..self.size {
                if theta.contains(a, b) {
                    continue;
                }
                let mut visited = HashSet::new();
                let found = self.cover_search(theta, start.clone(), &mut visited, &|_, product| {
                    if product.contains(a, b) {
                        Prune::Cut
                    } else {
                        Prune::Keep
                    }
                });
                if found.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Depth-first search over compatible reflexive relations `R` for one
    /// whose product covers `theta` while `keep` never cuts the branch. On
    /// success returns `R`.
    fn cover_search(
        &self,
        theta: &FinRelation,
        r: FinRelation,
        visited: &mut HashSet<FinRelation>,
        keep: &dyn Fn(&FinRelation, &FinRelation) -> Prune,
    ) -> Option<FinRelation> {
        if !visited.insert(r.clone()) {
            return None;
        }
        let product = kernel_product(&r);
        if keep(&r, &product) == Prune::Cut {
            return None;
        }
        let Some((c, d)) = theta.pairs().find(|&(c, d)| !product.contains(c, d)) else {
            return Some(r);
        };
        for e in 0..self.size {
            if r.contains(c, e) && r.contains(d, e) {
                continue;
            }
            let grown = r
                .union_rel(&FinRelation::from_pairs(self.size, [(c, e), (d, e)]).ok()?)
                .ok()?;
            let closed = self.compatible_closure(&grown).ok()?;
            if let Some(found) = self.cover_search(theta, closed, visited, keep) {
                return Some(found);
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Prune {
    Keep,
    Cut,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All reflexive relations on `s` points filtered by compatibility.
    fn brute_compatible_reflexive(alg: &FiniteAlgebra) -> Vec<FinRelation> {
        let s = alg.size();
        let off: Vec<(usize, usize)> = (0..s)
            .flat_map(|a| (0..s).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .collect();
        (0u64..1 << off.len())
            .map(|mask| {
                FinRelation::from_pairs(
                    s,
                    off.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &p)| p)
                        .chain((0..s).map(|a| (a, a))),
                )
                .unwrap()
            })
            .filter(|r| alg.is_compatible(r).unwrap())
            .collect()
    }

    fn brute_classes(alg: &FiniteAlgebra) -> Vec<(FinRelation, ToleranceClass)> {
        let compat = brute_compatible_reflexive(alg);
        let products: Vec<FinRelation> = compat.iter().map(kernel_product).collect();
        let mut out: Vec<(FinRelation, ToleranceClass)> = compat
            .iter()
            .filter(|r| r.is_symmetric())
            .map(|theta| {
                let class = if theta.is_transitive() {
                    ToleranceClass::Congruence
                } else if products.contains(theta) {
                    ToleranceClass::Representable
                } else {
                    let meet = products
                        .iter()
                        .filter(|p| theta.is_subset(p))
                        .fold(FinRelation::full(alg.size()).unwrap(), |acc, p| {
                            acc.intersect(p).unwrap()
                        });
                    if &meet == theta {
                        ToleranceClass::WeaklyRepresentable
                    } else {
                        ToleranceClass::Tolerance
                    }
                };
                (theta.clone(), class)
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn ladder_matches_brute_force() {
        for alg in [
            FiniteAlgebra::set(3),
            FiniteAlgebra::chain(3),
            FiniteAlgebra::z2().power(2).unwrap(),
        ] {
            let fast: Vec<(FinRelation, ToleranceClass)> = alg
                .tolerances()
                .unwrap()
                .into_iter()
                .map(|t| (t.relation, t.class))
                .collect();
            assert_eq!(fast, brute_classes(&alg));
        }
    }

    #[test]
    fn path_tolerance_on_bare_set() {
        let set3 = FiniteAlgebra::set(3);
        let theta = FinRelation::tolerance_from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        // R = Δ ∪ {(0,1), (2,1)} gives R∘R⁻ = Θ
        let r = set3.representing_relation(&theta).unwrap().unwrap();
        assert_eq!(kernel_product(&r), theta);
        assert_eq!(
            set3.classify_tolerance(&theta).unwrap(),
            ToleranceClass::Representable
        );
    }

    #[test]
    fn congruences_are_representable_tolerances() {
        for alg in [FiniteAlgebra::chain(3), FiniteAlgebra::chain(2).power(2).unwrap()] {
            let tols = alg.tolerances().unwrap();
            for c in alg.congruences().unwrap() {
                let rec = tols.iter().find(|t| t.relation == c).unwrap();
                assert!(rec.is_congruence() && rec.is_representable());
                assert!(alg.is_compatible(&c).unwrap());
            }
            for t in &tols {
                assert!(t.class != ToleranceClass::Congruence || t.relation.is_transitive());
                assert!(!t.is_representable() || t.is_weakly_representable());
            }
        }
    }

    #[test]
    fn classify_rejects_non_tolerances() {
        let chain = FiniteAlgebra::chain(3);
        let not_sym = FinRelation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1)]).unwrap();
        assert!(chain.classify_tolerance(&not_sym).is_err());
        assert!(matches!(
            FiniteAlgebra::set(7).tolerances(),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn six_element_bare_set_is_tractable() {
        let set6 = FiniteAlgebra::set(6);
        let theta = FinRelation::tolerance_from_pairs(
            6,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2), (1, 3)],
        )
        .unwrap();
        // cliques {0,1,2}, {1,2,3}, {3,4}, {4,5} can sit on labels 0, 1, 3, 5
        assert_eq!(
            set6.classify_tolerance(&theta).unwrap(),
            ToleranceClass::Representable
        );
        let r = set6.representing_relation(&theta).unwrap().unwrap();
        assert_eq!(kernel_product(&r), theta);
    }
}
