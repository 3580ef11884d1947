//! Desk-scale checks of congruence and tolerance inclusions over the variety
//! generated by a finite algebra, with reports that carry counterexamples.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, FreeAlgebra, FreeCaps, Operation};
use crate::canon::{canonical_form, CanonicalForm};
use crate::condition::{generate, holds_in_algebra};
use crate::error::{Error, Result};
use crate::eval::{check_inclusion_between, connect};
use crate::graph::LabeledGraph;
use crate::relation::{FinRelation, MAX_UNIVERSE};
use crate::term::Term;

pub const MAX_REALIZABLE_VERTICES: usize = 8;
pub const MAX_TERM_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "WP")]
    Wp,
    #[serde(rename = "contolnuo")]
    Contolnuo,
    #[serde(rename = "contolnuok")]
    Contolnuok,
    #[serde(rename = "cornuo")]
    Cornuo,
    #[serde(rename = "term-realizability")]
    TermRealizability,
}

/// An algebra of the variety used for tolerance-side checks. `power` records
/// that the algebra is `alg^k`, which lets term tables be lifted onto it.
#[derive(Debug, Clone)]
pub struct Sample {
    pub name: String,
    pub algebra: FiniteAlgebra,
    pub power: Option<usize>,
}

impl Sample {
    pub fn new(name: impl Into<String>, algebra: FiniteAlgebra) -> Self {
        Sample {
            name: name.into(),
            algebra,
            power: None,
        }
    }

    pub fn power_of(base_name: &str, base: &FiniteAlgebra, k: usize) -> Result<Self> {
        let name = if k == 1 {
            base_name.to_string()
        } else {
            format!("{base_name}^{k}")
        };
        Ok(Sample {
            name,
            algebra: base.power(k)?,
            power: Some(k),
        })
    }
}

/// `alg` and `alg²`.
pub fn default_samples(name: &str, alg: &FiniteAlgebra) -> Result<Vec<Sample>> {
    Ok(vec![
        Sample::power_of(name, alg, 1)?,
        Sample::power_of(name, alg, 2)?,
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub algebra: String,
    /// Relations plugged into `G`.
    pub relations: Vec<FinRelation>,
    /// Relations plugged into `H` when they differ from the `G` side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_relations: Option<Vec<FinRelation>>,
    /// Tuple of `G(…)` missing from `H(…)`.
    pub tuple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseVerdict {
    pub clause: String,
    /// `variety` or the name of a sample algebra.
    pub scope: String,
    pub holds: bool,
    /// Number of relation tuples examined.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub statement: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub inputs: BTreeMap<String, String>,
    pub clauses: Vec<ClauseVerdict>,
    pub assertions: Vec<Assertion>,
    /// Every assertion holds.
    pub passed: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    fn new(theorem: TheoremId, inputs: BTreeMap<String, String>) -> Self {
        VerificationReport {
            theorem,
            inputs,
            clauses: Vec::new(),
            assertions: Vec::new(),
            passed: true,
            runtime: Duration::ZERO,
        }
    }

    fn assert(&mut self, statement: impl Into<String>, holds: bool, cx: Option<Counterexample>) {
        self.passed &= holds;
        self.assertions.push(Assertion {
            statement: statement.into(),
            holds,
            counterexample: if holds { None } else { cx },
        });
    }

    pub fn clause(&self, clause: &str, scope: &str) -> Option<&ClauseVerdict> {
        self.clauses
            .iter()
            .find(|c| c.clause == clause && c.scope == scope)
    }

    pub fn violations(&self) -> usize {
        self.assertions.iter().filter(|a| !a.holds).count()
    }
}

/// Outcome of deciding a congruence inclusion on the variety via its free
/// algebra over the vertices of `G`.
#[derive(Debug, Clone)]
pub struct WpOutcome {
    pub holds: bool,
    pub free: FreeAlgebra,
    /// `αᵢ` on the free algebra.
    pub congruences: Vec<FinRelation>,
    /// `(x_{d₁}, …, x_{d_h})` as free-algebra element indices.
    pub tuple: Vec<usize>,
    /// Free-algebra element for every vertex of `H`.
    pub connection: Option<Vec<usize>>,
}

impl WpOutcome {
    fn counterexample(&self) -> Counterexample {
        Counterexample {
            algebra: format!("free algebra on {} generators", self.free.generators()),
            relations: self.congruences.clone(),
            h_relations: None,
            tuple: self.tuple.clone(),
        }
    }
}

fn same_shape(g: &LabeledGraph, h: &LabeledGraph) -> Result<()> {
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
    Ok(())
}

/// Decides whether the variety generated by `alg` satisfies `G ⊆ H` for
/// congruences: on the free algebra over the vertices of `G`, with `αᵢ` the
/// congruence generated by the `~ᵢ`-classes, is `(x_{d₁}, …)` in `H(α⃗)`?
pub fn variety_satisfies_congruence_inclusion(
    alg: &FiniteAlgebra,
    g: &LabeledGraph,
    h: &LabeledGraph,
    caps: FreeCaps,
) -> Result<WpOutcome> {
    same_shape(g, h)?;
    let free = alg.free_algebra(g.vertex_count(), caps)?;
    if free.len() > MAX_UNIVERSE {
        return Err(Error::CapExceeded {
            what: "free algebra elements for relation search",
            actual: free.len(),
            cap: MAX_UNIVERSE,
        });
    }
    let fa = free.to_algebra()?;
    let congruences = g
        .label_partitions()
        .iter()
        .map(|part| {
            let pairs: Vec<(usize, usize)> = part
                .blocks
                .iter()
                .flat_map(|b| b.windows(2).map(|w| (free.generator(w[0]), free.generator(w[1]))))
                .collect();
            fa.generated_congruence(&pairs)
        })
        .collect::<Result<Vec<_>>>()?;
    let tuple: Vec<usize> = g.distinguished().iter().map(|&d| free.generator(d)).collect();
    let connection = connect(h, &congruences, &tuple)?.map(|c| c.assignment);
    Ok(WpOutcome {
        holds: connection.is_some(),
        free,
        congruences,
        tuple,
        connection,
    })
}

/// Term operations `t_w` of `alg` satisfying `M(G, H)`, read off the
/// connection found on the free algebra; `None` when the inclusion fails.
pub fn extract_malcev_terms(
    alg: &FiniteAlgebra,
    g: &LabeledGraph,
    h: &LabeledGraph,
    caps: FreeCaps,
) -> Result<Option<BTreeMap<String, Operation>>> {
    let outcome = variety_satisfies_congruence_inclusion(alg, g, h, caps)?;
    Ok(terms_from_outcome(&outcome, h))
}

fn terms_from_outcome(outcome: &WpOutcome, h: &LabeledGraph) -> Option<BTreeMap<String, Operation>> {
    let conn = outcome.connection.as_ref()?;
    Some(
        conn.iter()
            .enumerate()
            .map(|(w, &e)| {
                let symbol = format!("t_{}", h.name(w));
                let op = outcome.free.as_operation(e, symbol.clone());
                (symbol, op)
            })
            .collect(),
    )
}

fn lift_terms(terms: &BTreeMap<String, Operation>, k: usize) -> Result<BTreeMap<String, Operation>> {
    terms
        .iter()
        .map(|(s, op)| Ok((s.clone(), op.lift_to_power(k)?)))
        .collect()
}

/// Runs `visit` on every `positions`-tuple drawn from `candidates`, in
/// lexicographic order of indices, stopping at the first `Some`.
fn first_failure<T>(
    candidates: &[FinRelation],
    positions: usize,
    mut visit: impl FnMut(&[&FinRelation]) -> Result<Option<T>>,
) -> Result<(usize, Option<T>)> {
    if candidates.is_empty() {
        return Ok((0, None));
    }
    let mut idx = vec![0usize; positions];
    let mut checked = 0;
    loop {
        let pick: Vec<&FinRelation> = idx.iter().map(|&i| &candidates[i]).collect();
        checked += 1;
        if let Some(found) = visit(&pick)? {
            return Ok((checked, Some(found)));
        }
        let mut p = positions;
        loop {
            if p == 0 {
                return Ok((checked, None));
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < candidates.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Checks `G(left(t)) ⊆ H(right(t))` for every tuple `t` of `positions`
/// relations from `candidates`.
fn sample_clause(
    clause: &str,
    sample: &Sample,
    g: &LabeledGraph,
    h: &LabeledGraph,
    candidates: &[FinRelation],
    positions: usize,
    sides: impl Fn(&[&FinRelation]) -> Result<(Vec<FinRelation>, Vec<FinRelation>)>,
) -> Result<ClauseVerdict> {
    let (checked, cx) = first_failure(candidates, positions, |pick| {
        let (left, right) = sides(pick)?;
        let inc = check_inclusion_between(g, &left, h, &right)?;
        Ok(inc.counterexample.map(|tuple| Counterexample {
            algebra: sample.name.clone(),
            h_relations: (left != right).then(|| right.clone()),
            relations: left,
            tuple,
        }))
    })?;
    Ok(ClauseVerdict {
        clause: clause.to_string(),
        scope: sample.name.clone(),
        holds: cx.is_none(),
        checked,
        counterexample: cx,
    })
}

fn cloned(pick: &[&FinRelation]) -> Vec<FinRelation> {
    pick.iter().map(|&r| r.clone()).collect()
}

fn same_sides(pick: &[&FinRelation]) -> Result<(Vec<FinRelation>, Vec<FinRelation>)> {
    let v = cloned(pick);
    Ok((v.clone(), v))
}

fn variety_clause(outcome: &WpOutcome) -> ClauseVerdict {
    ClauseVerdict {
        clause: "(i)".into(),
        scope: "variety".into(),
        holds: outcome.holds,
        checked: 1,
        counterexample: (!outcome.holds).then(|| outcome.counterexample()),
    }
}

/// Conjunction of per-sample verdicts, keeping the first counterexample.
fn aggregate(clause: &str, parts: &[&ClauseVerdict]) -> ClauseVerdict {
    let failing = parts.iter().find(|c| !c.holds);
    ClauseVerdict {
        clause: clause.to_string(),
        scope: "variety".into(),
        holds: failing.is_none(),
        checked: parts.iter().map(|c| c.checked).sum(),
        counterexample: failing.and_then(|c| c.counterexample.clone()),
    }
}

fn inputs(
    alg_name: &str,
    g: &LabeledGraph,
    h: &LabeledGraph,
    samples: &[Sample],
) -> BTreeMap<String, String> {
    let describe = |x: &LabeledGraph| {
        format!(
            "{} vertices, {} edges, {} labels, {} distinguished",
            x.vertex_count(),
            x.edges().len(),
            x.label_count(),
            x.arity()
        )
    };
    let mut m = BTreeMap::new();
    m.insert("algebra".to_string(), alg_name.to_string());
    m.insert("g".to_string(), describe(g));
    m.insert("h".to_string(), describe(h));
    m.insert(
        "samples".to_string(),
        samples.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", "),
    );
    m
}

/// Implication `premise ⇒ conclusion` between clause verdicts.
fn implication(report: &mut VerificationReport, statement: String, premise: bool, conclusion: &ClauseVerdict) {
    let holds = !premise || conclusion.holds;
    report.assert(statement, holds, conclusion.counterexample.clone());
}

/// Congruence inclusion on the variety, term extraction, and consistency
/// with every congruence tuple of the samples.
pub fn check_wp(
    alg_name: &str,
    alg: &FiniteAlgebra,
    samples: &[Sample],
    g: &LabeledGraph,
    h: &LabeledGraph,
    caps: FreeCaps,
) -> Result<(VerificationReport, WpOutcome)> {
    let start = Instant::now();
    let mut report = VerificationReport::new(TheoremId::Wp, inputs(alg_name, g, h, samples));
    let outcome = variety_satisfies_congruence_inclusion(alg, g, h, caps)?;
    report.clauses.push(variety_clause(&outcome));

    for sample in samples {
        let cons = sample.algebra.congruences()?;
        let verdict = sample_clause("(i)", sample, g, h, &cons, g.label_count(), same_sides)?;
        implication(
            &mut report,
            format!("(i) on the variety implies (i) on {}", sample.name),
            outcome.holds,
            &verdict,
        );
        report.clauses.push(verdict);
    }

    let ids = generate(g, h)?;
    match terms_from_outcome(&outcome, h) {
        Some(terms) => {
            let on_alg = holds_in_algebra(&ids, alg, &terms)?;
            report.assert(format!("extracted terms satisfy M(G,H) on {alg_name}"), on_alg, None);
            for sample in samples {
                if let Some(k) = sample.power.filter(|&k| k > 1) {
                    let lifted = lift_terms(&terms, k)?;
                    let ok = holds_in_algebra(&ids, &sample.algebra, &lifted)?;
                    report.assert(
                        format!("extracted terms satisfy M(G,H) on {}", sample.name),
                        ok,
                        None,
                    );
                }
            }
        }
        None => {
            // g = h always connects, so a failure must come with g ≠ h
            report.assert(
                "a failing inclusion has distinct graphs",
                g != h,
                Some(outcome.counterexample()),
            );
        }
    }
    report.runtime = start.elapsed();
    Ok((report, outcome))
}

type Combine = dyn Fn(&FinRelation, &FinRelation) -> Result<FinRelation>;

fn require_regular(g: &LabeledGraph) -> Result<()> {
    if g.is_regular() {
        Ok(())
    } else {
        Err(Error::NotRegular)
    }
}

/// Congruence clause (i) on the variety and tolerance clauses (ii)–(iv) on
/// each sample. Samples are trusted to lie in the variety.
pub fn check_contolnuo(
    alg_name: &str,
    alg: &FiniteAlgebra,
    samples: &[Sample],
    g: &LabeledGraph,
    h: &LabeledGraph,
    caps: FreeCaps,
) -> Result<VerificationReport> {
    let start = Instant::now();
    require_regular(g)?;
    let mut report = VerificationReport::new(TheoremId::Contolnuo, inputs(alg_name, g, h, samples));
    let outcome = variety_satisfies_congruence_inclusion(alg, g, h, caps)?;
    report.clauses.push(variety_clause(&outcome));
    let n = g.label_count();

    let mut per_sample = Vec::new();
    for sample in samples {
        let records = sample.algebra.tolerances()?;
        let pick = |f: fn(&crate::algebra::ToleranceRecord) -> bool| -> Vec<FinRelation> {
            records.iter().filter(|r| f(r)).map(|r| r.relation.clone()).collect()
        };
        let cons = pick(|r| r.is_congruence());
        let reps = pick(|r| r.is_representable());
        let weak = pick(|r| r.is_weakly_representable());
        let all: Vec<FinRelation> = records.iter().map(|r| r.relation.clone()).collect();
        let c1 = sample_clause("(i)", sample, g, h, &cons, n, same_sides)?;
        let c2 = sample_clause("(ii)", sample, g, h, &reps, n, same_sides)?;
        let c3 = sample_clause("(iii)", sample, g, h, &weak, n, same_sides)?;
        let c4 = sample_clause("(iv)", sample, g, h, &all, n, |pick| {
            let sq: Vec<FinRelation> = pick
                .iter()
                .map(|t| t.compose(t))
                .collect::<Result<_>>()?;
            Ok((sq.clone(), sq))
        })?;
        per_sample.push([c1, c2, c3, c4]);
    }

    for (sample, [c1, c2, c3, c4]) in samples.iter().zip(&per_sample) {
        let s = &sample.name;
        if outcome.holds {
            for c in [c1, c2, c3, c4] {
                implication(
                    &mut report,
                    format!("(i) on the variety implies {} on {s}", c.clause),
                    true,
                    c,
                );
            }
        }
        implication(&mut report, format!("(iv) implies (i) on {s}"), c4.holds, c1);
        implication(&mut report, format!("(ii) implies (i) on {s}"), c2.holds, c1);
        implication(&mut report, format!("(iii) implies (ii) on {s}"), c3.holds, c2);
    }
    for (k, clause) in ["(ii)", "(iii)", "(iv)"].iter().enumerate() {
        let parts: Vec<&ClauseVerdict> = per_sample.iter().map(|p| &p[k + 1]).collect();
        report.clauses.push(aggregate(clause, &parts));
    }
    for p in per_sample {
        report.clauses.extend(p);
    }
    report.runtime = start.elapsed();
    Ok(report)
}

/// `G(Θ⃗) ⊆ H(Θ₁^k₁, …)` over all tolerance tuples of each sample, with the
/// exponents computed from `G` and clamped to at least 1.
pub fn check_contolnuok(
    alg_name: &str,
    alg: &FiniteAlgebra,
    samples: &[Sample],
    g: &LabeledGraph,
    h: &LabeledGraph,
    caps: FreeCaps,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(TheoremId::Contolnuok, inputs(alg_name, g, h, samples));
    let ks: Vec<usize> = g.k_constants().into_iter().map(|k| k.max(1)).collect();
    report.inputs.insert(
        "exponents".into(),
        ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
    );
    let outcome = variety_satisfies_congruence_inclusion(alg, g, h, caps)?;
    report.clauses.push(variety_clause(&outcome));
    if g.is_regular() {
        report.assert(
            "a regular graph has exponents at most 2",
            ks.iter().all(|&k| k <= 2),
            None,
        );
    }
    let n = g.label_count();
    let mut per_sample = Vec::new();
    for sample in samples {
        let all = sample.algebra.tolerance_relations()?;
        let cons = sample.algebra.congruences()?;
        let c1 = sample_clause("(i)", sample, g, h, &cons, n, same_sides)?;
        let c2 = sample_clause("(ii)", sample, g, h, &all, n, |pick| {
            let powered: Vec<FinRelation> = pick
                .iter()
                .zip(&ks)
                .map(|(t, &k)| t.power(k))
                .collect::<Result<_>>()?;
            Ok((cloned(pick), powered))
        })?;
        let s = &sample.name;
        if outcome.holds {
            implication(&mut report, format!("(i) on the variety implies (ii) on {s}"), true, &c2);
        }
        implication(&mut report, format!("(ii) implies (i) on {s}"), c2.holds, &c1);
        per_sample.push((c1, c2));
    }
    let parts: Vec<&ClauseVerdict> = per_sample.iter().map(|p| &p.1).collect();
    report.clauses.push(aggregate("(ii)", &parts));
    for (c1, c2) in per_sample {
        report.clauses.push(c1);
        report.clauses.push(c2);
    }
    report.runtime = start.elapsed();
    Ok(report)
}

/// Congruence pairs `(βᵢ, γᵢ)` substituted as `βᵢ∘γᵢ∘βᵢ` and `βᵢ∘ₘγᵢ`, on
/// the free algebra (generic instance `βᵢ = γᵢ = αᵢ`) and on every sample.
pub fn check_cornuo(
    alg_name: &str,
    alg: &FiniteAlgebra,
    samples: &[Sample],
    g: &LabeledGraph,
    h: &LabeledGraph,
    m_values: &[usize],
    caps: FreeCaps,
) -> Result<VerificationReport> {
    let start = Instant::now();
    if m_values.is_empty() {
        return Err(Error::InvalidArgument("at least one value of m is required".into()));
    }
    if let Some(&m) = m_values.iter().find(|&&m| m == 0 || m % 2 == 0) {
        return Err(Error::InvalidArgument(format!("m must be odd and positive, got {m}")));
    }
    require_regular(g)?;
    let mut report = VerificationReport::new(TheoremId::Cornuo, inputs(alg_name, g, h, samples));
    report.inputs.insert(
        "m".into(),
        m_values.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
    );
    let outcome = variety_satisfies_congruence_inclusion(alg, g, h, caps)?;
    report.clauses.push(variety_clause(&outcome));
    let n = g.label_count();

    let generic = |label: &str, combine: &dyn Fn(&FinRelation, &FinRelation) -> Result<FinRelation>| -> Result<ClauseVerdict> {
        let rels: Vec<FinRelation> = outcome
            .congruences
            .iter()
            .map(|a| combine(a, a))
            .collect::<Result<_>>()?;
        let inc = check_inclusion_between(g, &rels, h, &rels)?;
        let in_g = connect(g, &rels, &outcome.tuple)?.is_some();
        let in_h = connect(h, &rels, &outcome.tuple)?.is_some();
        let holds = !in_g || in_h;
        let cx = (!holds).then(|| Counterexample {
            algebra: format!("free algebra on {} generators", outcome.free.generators()),
            relations: rels.clone(),
            h_relations: None,
            tuple: outcome.tuple.clone(),
        });
        debug_assert!(holds || !inc.holds);
        Ok(ClauseVerdict {
            clause: label.to_string(),
            scope: "variety (generic instance)".into(),
            holds,
            checked: 1,
            counterexample: cx,
        })
    };

    let bcb = |b: &FinRelation, c: &FinRelation| b.compose(c)?.compose(b);
    let mut labelled: Vec<(String, Box<Combine>)> = vec![("(ii)".to_string(), Box::new(bcb))];
    for &m in m_values {
        labelled.push((
            format!("(iii) m={m}"),
            Box::new(move |b: &FinRelation, c: &FinRelation| FinRelation::circ_m(b, c, m)),
        ));
    }

    let sample_cons: Vec<Vec<FinRelation>> = samples
        .iter()
        .map(|s| s.algebra.congruences())
        .collect::<Result<_>>()?;
    let mut verdicts: Vec<ClauseVerdict> = Vec::new();
    let mut details: Vec<ClauseVerdict> = Vec::new();
    for (label, combine) in &labelled {
        let gen = generic(label, combine.as_ref())?;
        let mut parts = vec![gen.clone()];
        for (sample, cons) in samples.iter().zip(&sample_cons) {
            let c = sample_clause(label, sample, g, h, cons, 2 * n, |pick| {
                let rels: Vec<FinRelation> = (0..n)
                    .map(|i| combine(pick[i], pick[n + i]))
                    .collect::<Result<_>>()?;
                Ok((rels.clone(), rels))
            })?;
            if outcome.holds {
                implication(
                    &mut report,
                    format!("(i) on the variety implies {label} on {}", sample.name),
                    true,
                    &c,
                );
            }
            parts.push(c);
        }
        let refs: Vec<&ClauseVerdict> = parts.iter().collect();
        verdicts.push(aggregate(label, &refs));
        details.extend(parts);
    }

    // per sample, m = 1 ranges over the congruence tuples themselves
    if m_values.contains(&1) {
        for (sample, cons) in samples.iter().zip(&sample_cons) {
            let c1 = sample_clause("(i)", sample, g, h, cons, n, same_sides)?;
            let m1 = details
                .iter()
                .find(|c| c.clause == "(iii) m=1" && c.scope == sample.name)
                .expect("computed above");
            report.assert(
                format!("(iii) m=1 agrees with (i) on {}", sample.name),
                c1.holds == m1.holds,
                c1.counterexample.clone().or_else(|| m1.counterexample.clone()),
            );
            details.push(c1);
        }
    }

    let first = verdicts[1].holds;
    for v in &verdicts[1..] {
        report.assert(
            format!("{} agrees with {}", v.clause, verdicts[1].clause),
            v.holds == first,
            v.counterexample.clone().or_else(|| verdicts[1].counterexample.clone()),
        );
    }
    if m_values.contains(&3) {
        let three = verdicts
            .iter()
            .find(|v| v.clause == "(iii) m=3")
            .expect("computed above");
        report.assert(
            "(ii) agrees with (iii) m=3",
            three.holds == verdicts[0].holds,
            three.counterexample.clone().or_else(|| verdicts[0].counterexample.clone()),
        );
    }
    report.assert(
        "(iii) agrees with (i) on the variety",
        first == outcome.holds,
        verdicts[1].counterexample.clone().or_else(|| Some(outcome.counterexample())),
    );
    report.clauses.extend(verdicts);
    report.clauses.extend(details);
    report.runtime = start.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realizability {
    pub realizable: bool,
    /// A smallest term whose graph is isomorphic to the input.
    pub witness: Option<Term>,
    pub max_size: usize,
    /// Distinct term graphs (up to isomorphism) generated during the search.
    pub explored: usize,
}

/// Searches the graphs of all terms with at most `max_size` leaves for one
/// isomorphic to `g`. Graphs are built bottom-up by series and parallel
/// composition and deduplicated by canonical form; graphs with more vertices
/// or edges than `g` are discarded since composition never shrinks either.
pub fn term_realizability(g: &LabeledGraph, max_size: usize) -> Result<Realizability> {
    if g.vertex_count() > MAX_REALIZABLE_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertices for term realizability",
            actual: g.vertex_count(),
            cap: MAX_REALIZABLE_VERTICES,
        });
    }
    if max_size > MAX_TERM_SIZE {
        return Err(Error::CapExceeded {
            what: "term size",
            actual: max_size,
            cap: MAX_TERM_SIZE,
        });
    }
    let none = |explored| Realizability {
        realizable: false,
        witness: None,
        max_size,
        explored,
    };
    let d = g.distinguished();
    if d.len() != 2 || d[0] == d[1] || g.label_count() == 0 || g.edges().iter().any(|e| e.is_loop()) {
        return Ok(none(0));
    }
    let target = canonical_form(g)?;
    let (max_v, max_e) = (g.vertex_count(), g.edges().len());

    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let mut levels: Vec<Vec<(LabeledGraph, Term)>> = vec![Vec::new(); max_size + 1];
    for size in 1..=max_size {
        let mut level = Vec::new();
        let mut candidates: Vec<(LabeledGraph, Term)> = Vec::new();
        if size == 1 {
            for label in 1..=g.label_count() {
                let t = Term::var(label);
                candidates.push((t.to_graph(g.label_count())?, t));
            }
        }
        for k in 1..size {
            for (a, ta) in &levels[k] {
                for (b, tb) in &levels[size - k] {
                    candidates.push((a.series(b)?, Term::compose(ta.clone(), tb.clone())));
                    candidates.push((a.parallel(b)?, Term::intersect(ta.clone(), tb.clone())));
                }
            }
        }
        for (graph, term) in candidates {
            if graph.vertex_count() > max_v || graph.edges().len() > max_e {
                continue;
            }
            let cf = canonical_form(&graph)?;
            if !seen.insert(cf.clone()) {
                continue;
            }
            if cf == target {
                return Ok(Realizability {
                    realizable: true,
                    witness: Some(term),
                    max_size,
                    explored: seen.len(),
                });
            }
            level.push((graph, term));
        }
        levels[size] = level;
    }
    Ok(none(seen.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::term::parse_term;

    fn z2_samples() -> Vec<Sample> {
        default_samples("z2", &FiniteAlgebra::z2()).unwrap()
    }

    #[test]
    fn congruence_inclusion_examples() {
        let caps = FreeCaps::default();
        let (g, h) = (fixtures::perm_g(), fixtures::perm_h());
        let z2 = variety_satisfies_congruence_inclusion(&FiniteAlgebra::z2(), &g, &h, caps).unwrap();
        assert!(z2.holds);
        assert_eq!(z2.free.len(), 8);
        let c2 = variety_satisfies_congruence_inclusion(&FiniteAlgebra::chain(2), &g, &h, caps).unwrap();
        assert!(!c2.holds);
        assert_eq!(c2.free.len(), 18);
        for x in [fixtures::k4(), fixtures::path4(), g.clone()] {
            for alg in [FiniteAlgebra::z2(), FiniteAlgebra::set(3)] {
                let same = variety_satisfies_congruence_inclusion(&alg, &x, &x, caps).unwrap();
                assert!(same.holds);
            }
        }
        // 166 elements do not fit the relation universe
        assert!(matches!(
            variety_satisfies_congruence_inclusion(&FiniteAlgebra::chain(2), &fixtures::k4(), &fixtures::k4(), caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn extracted_malcev_term_is_x_minus_y_plus_z() {
        let terms = extract_malcev_terms(
            &FiniteAlgebra::z2(),
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default(),
        )
        .unwrap()
        .unwrap();
        let t2 = &terms["t_v2"];
        for args in crate::eval::tuples(2, 3) {
            assert_eq!(t2.apply(&args), (args[0] + args[1] + args[2]) % 2);
        }
        assert_eq!(terms["t_v1"].apply(&[1, 0, 0]), 1);
        assert_eq!(terms["t_v3"].apply(&[0, 0, 1]), 1);
        assert!(extract_malcev_terms(
            &FiniteAlgebra::chain(2),
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default()
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn congruence_inclusion_reports() {
        let z2 = FiniteAlgebra::z2();
        let (report, outcome) = check_wp(
            "z2",
            &z2,
            &z2_samples(),
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default(),
        )
        .unwrap();
        assert!(outcome.holds);
        assert!(report.passed, "{report:#?}");
        assert_eq!(report.assertions.len(), 2 + 2);

        let chain2 = FiniteAlgebra::chain(2);
        let samples = vec![
            Sample::power_of("chain2", &chain2, 1).unwrap(),
            Sample::new("chain3", FiniteAlgebra::chain(3)),
        ];
        let (report, outcome) = check_wp(
            "chain2",
            &chain2,
            &samples,
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default(),
        )
        .unwrap();
        assert!(!outcome.holds);
        assert!(report.passed);
        let on_chain3 = report.clause("(i)", "chain3").unwrap();
        assert!(!on_chain3.holds);
        assert_eq!(on_chain3.counterexample.as_ref().unwrap().tuple, vec![0, 2]);
        let variety = report.clause("(i)", "variety").unwrap();
        assert!(variety.counterexample.is_some());
    }

    #[test]
    fn failing_clauses_carry_counterexamples() {
        let chain2 = FiniteAlgebra::chain(2);
        let samples = vec![
            Sample::power_of("chain2", &chain2, 1).unwrap(),
            Sample::new("chain3", FiniteAlgebra::chain(3)),
        ];
        let report = check_contolnuo(
            "chain2",
            &chain2,
            &samples,
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default(),
        )
        .unwrap();
        assert!(report.passed);
        assert!(!report.clause("(i)", "variety").unwrap().holds);
        for c in &report.clauses {
            assert_eq!(c.holds, c.counterexample.is_none(), "{c:?}");
        }
        // no variety-wide assertion is made when (i) fails
        assert!(report
            .assertions
            .iter()
            .all(|a| !a.statement.starts_with("(i) on the variety")));
    }

    #[test]
    fn tolerance_clauses_on_z2() {
        let report = check_contolnuo(
            "z2",
            &FiniteAlgebra::z2(),
            &z2_samples(),
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default(),
        )
        .unwrap();
        assert!(report.passed);
        assert!(report.clauses.iter().all(|c| c.holds));
        let nonregular = check_contolnuo(
            "z2",
            &FiniteAlgebra::z2(),
            &z2_samples(),
            &fixtures::k4(),
            &fixtures::k4(),
            FreeCaps::default(),
        );
        assert_eq!(nonregular.unwrap_err(), Error::NotRegular);
    }

    #[test]
    fn edgeless_graph_is_vacuous() {
        let g = LabeledGraph::with_default_names(2, 1, [], vec![0, 1]).unwrap();
        let report =
            check_contolnuo("z2", &FiniteAlgebra::z2(), &z2_samples(), &g, &g, FreeCaps::default())
                .unwrap();
        assert!(report.passed);
        assert!(report.clauses.iter().all(|c| c.holds));
    }

    #[test]
    fn tolerance_powers_on_path() {
        let p = fixtures::path4();
        let set3 = FiniteAlgebra::set(3);
        let samples = [Sample::power_of("set3", &set3, 1).unwrap()];
        let report = check_contolnuok("set3", &set3, &samples, &p, &p, FreeCaps::default()).unwrap();
        assert_eq!(report.inputs["exponents"], "4");
        assert!(report.passed);
        assert!(report.clause("(ii)", "variety").unwrap().holds);

        let report = check_contolnuok(
            "z2",
            &FiniteAlgebra::z2(),
            &z2_samples(),
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            FreeCaps::default(),
        )
        .unwrap();
        assert_eq!(report.inputs["exponents"], "2,2");
        assert!(report.passed);
        assert_eq!(report.violations(), 0);
    }

    #[test]
    fn alternating_products_agree() {
        for (name, alg) in [("z2", FiniteAlgebra::z2()), ("chain2", FiniteAlgebra::chain(2))] {
            let samples = default_samples(name, &alg).unwrap();
            let report = check_cornuo(
                name,
                &alg,
                &samples,
                &fixtures::perm_g(),
                &fixtures::perm_h(),
                &[1, 3, 5],
                FreeCaps::default(),
            )
            .unwrap();
            assert!(report.passed, "{report:#?}");
            let expected = name == "z2";
            for m in ["(iii) m=1", "(iii) m=3", "(iii) m=5", "(ii)"] {
                assert_eq!(report.clause(m, "variety").unwrap().holds, expected);
            }
        }
        let even = check_cornuo(
            "z2",
            &FiniteAlgebra::z2(),
            &z2_samples(),
            &fixtures::perm_g(),
            &fixtures::perm_h(),
            &[2],
            FreeCaps::default(),
        );
        assert!(matches!(even, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn realizability() {
        let r = term_realizability(&fixtures::perm_g(), 2).unwrap();
        assert!(r.realizable);
        let w = r.witness.unwrap();
        assert_eq!(
            canonical_form(&w.to_graph(2).unwrap()).unwrap(),
            canonical_form(&fixtures::perm_g()).unwrap()
        );
        let edge = LabeledGraph::with_default_names(2, 1, [(0, 1, 1)], vec![0, 1]).unwrap();
        assert_eq!(term_realizability(&edge, 1).unwrap().witness, Some(Term::var(1)));
        assert!(!term_realizability(&fixtures::k4(), 8).unwrap().realizable);
        assert!(!term_realizability(&fixtures::perm_g(), 1).unwrap().realizable);
        assert!(term_realizability(&fixtures::k4(), 9).is_err());
    }

    #[test]
    fn realizability_finds_every_small_term() {
        for text in ["a1 o (a2 & a1)", "(a1 o a1) & a2", "a1 o a2 o a1", "(a1 & a2) o (a1 & a2)"] {
            let t = parse_term(text, 2).unwrap();
            let g = t.to_graph(2).unwrap();
            let r = term_realizability(&g, t.leaves()).unwrap();
            assert!(r.realizable, "{text}");
            assert!(r.witness.unwrap().leaves() <= t.leaves());
        }
    }
}
