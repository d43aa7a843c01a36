//! Randomized and exhaustive cross-checks between the fast paths and their oracles.
//!
//! Every suite returns a [`SuiteReport`]; a suite passes when it has no failures.
//! The generators are deterministic for a given seed.

use std::fmt;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::implications::{all_closed_naive, Implication, RowFamily};
use crate::lattice::FiniteLattice;
use crate::pipeline::{assemble, Ground};
use crate::poset::enumerate_posets;
use crate::subdirect::{generated_sublattice, join_tuples, meet_tuples, ConnectionFamily, Tuple};
use crate::variety::{connection_family, VarietySpec};

/// Failures kept per suite; the rest are only counted.
const MAX_DUMPED: usize = 5;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    pub counterexamples: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            cases: 0,
            failed: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        self.cases += 1;
        if let Err(msg) = outcome {
            self.failed += 1;
            if self.counterexamples.len() < MAX_DUMPED {
                self.counterexamples.push(msg);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} cases, {} failed)", self.name, self.cases, self.failed)?;
        for c in &self.counterexamples {
            write!(f, "\n  {c}")?;
        }
        Ok(())
    }
}

/// An imposition step, replayable on a [`RowFamily`] and expandable to plain implications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Implication(Vec<usize>, Vec<usize>),
    Line(Vec<usize>, Option<usize>),
}

impl Step {
    pub fn apply(&self, family: &mut RowFamily) {
        match self {
            Step::Implication(a, b) => family.impose(a, b),
            Step::Line(line, pivot) => family.impose_line(line, *pivot),
        }
    }

    pub fn implications(&self, width: usize) -> Vec<Implication> {
        match self {
            Step::Implication(a, b) => vec![Implication::new(width, a, b)],
            Step::Line(line, _) => {
                let mut out = Vec::new();
                for (i, &p) in line.iter().enumerate() {
                    for &q in &line[i + 1..] {
                        out.push(Implication::new(width, &[p, q], line));
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Implication(a, b) => write!(f, "{a:?}->{b:?}"),
            Step::Line(l, None) => write!(f, "line{l:?}"),
            Step::Line(l, Some(p)) => write!(f, "line{l:?}@{p}"),
        }
    }
}

/// A random mix of implications and lines over `0..width`.
pub fn random_steps(rng: &mut impl Rng, width: usize) -> Vec<Step> {
    let count = rng.gen_range(0..=8);
    let positions: Vec<usize> = (0..width).collect();
    (0..count)
        .map(|_| {
            if width >= 3 && rng.gen_bool(0.2) {
                let k = rng.gen_range(3..=width.min(5));
                let line: Vec<usize> = positions.choose_multiple(rng, k).copied().collect();
                let pivot = rng.gen_bool(0.5).then(|| *positions.choose(rng).unwrap());
                Step::Line(line, pivot)
            } else {
                let a = rng.gen_range(0..=width.min(3));
                let b = rng.gen_range(1..=width.min(3));
                let premise = positions.choose_multiple(rng, a).copied().collect();
                let conclusion = positions.choose_multiple(rng, b).copied().collect();
                Step::Implication(premise, conclusion)
            }
        })
        .collect()
}

/// Runs `steps` through the row engine and compares with the naive closure.
pub fn compare_with_naive(width: usize, steps: &[Step]) -> std::result::Result<(), String> {
    let mut family = RowFamily::full(width);
    let mut sigma = Vec::new();
    for s in steps {
        s.apply(&mut family);
        sigma.extend(s.implications(width));
    }
    let mut got: Vec<Vec<usize>> = family.members().map(|m| m.ones().collect()).collect();
    got.sort();
    let listed = got.len();
    got.dedup();
    let mut expected: Vec<Vec<usize>> = all_closed_naive(width, &sigma)
        .into_iter()
        .map(|m| m.ones().collect())
        .collect();
    expected.sort();
    let shown: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
    if listed != got.len() {
        return Err(format!("width {width}, {}: rows overlap", shown.join(" ")));
    }
    if family.count() != listed as u128 {
        return Err(format!("width {width}, {}: row counts sum to {}, {listed} members", shown.join(" "), family.count()));
    }
    if got != expected {
        return Err(format!(
            "width {width}, {}: engine has {} sets, naive {}",
            shown.join(" "),
            got.len(),
            expected.len()
        ));
    }
    Ok(())
}

pub fn row_engine_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = SuiteReport::new("row engine vs naive closure");
    for _ in 0..cases {
        let width = rng.gen_range(1..=12);
        let steps = random_steps(&mut rng, width);
        report.record(compare_with_naive(width, &steps));
    }
    report
}

/// A random subdirect product of `t` factors drawn from `pool`: the sublattice
/// generated by random tuples, grown until every projection is onto.
pub fn random_subdirect(rng: &mut impl Rng, pool: &[FiniteLattice], t: usize) -> (Vec<FiniteLattice>, Vec<Tuple>) {
    let factors: Vec<FiniteLattice> = (0..t).map(|_| pool.choose(rng).unwrap().clone()).collect();
    let random_tuple = |rng: &mut dyn rand::RngCore| -> Tuple {
        factors.iter().map(|f| rng.gen_range(0..f.len()) as u16).collect()
    };
    let mut seed: Vec<Tuple> = (0..rng.gen_range(1..=3)).map(|_| random_tuple(rng)).collect();
    loop {
        let set = generated_sublattice(&factors, &seed);
        let onto = (0..t).all(|i| {
            let mut hit = vec![false; factors[i].len()];
            for x in &set {
                hit[x[i] as usize] = true;
            }
            hit.into_iter().all(|h| h)
        });
        if onto {
            return (factors, set);
        }
        seed.push(random_tuple(rng));
    }
}

/// Extract the connection maps of a subdirect product, rebuild it, and compare.
pub fn round_trip(factors: &[FiniteLattice], set: &[Tuple]) -> std::result::Result<(), String> {
    let fail = |msg: String| Err(format!("{} over {} factors: {msg}", set.len(), factors.len()));
    let fam = match ConnectionFamily::from_subdirect_product(factors.to_vec(), set) {
        Ok(f) => f,
        Err(e) => return fail(e.to_string()),
    };
    let violations = fam.check_axioms();
    if let Some(v) = violations.first() {
        return fail(v.to_string());
    }
    let rebuilt = match fam.reconstruct(None) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    if rebuilt.sorted_elements() != set {
        return fail(format!("rebuilt {} elements", rebuilt.len()));
    }
    for (i, f) in factors.iter().enumerate() {
        for y in 0..f.len() {
            let fiber = set.iter().filter(|x| x[i] as usize == y);
            let least = fiber.cloned().reduce(|a, b| meet_tuples(factors, &a, &b)).unwrap();
            if fam.sigma_prime(i, y) != least {
                return fail(format!("σ'_{i}({}) is not the least element of its fiber", f.name(y)));
            }
        }
    }
    for x in set {
        let rebuilt = (0..factors.len())
            .map(|i| fam.sigma_prime(i, x[i] as usize))
            .reduce(|a, b| join_tuples(factors, &a, &b))
            .unwrap();
        if &rebuilt != x {
            return fail(format!("{x:?} is not the join of its σ'-images"));
        }
    }
    Ok(())
}

pub fn round_trip_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let pool = [FiniteLattice::d2(), FiniteLattice::n5(), FiniteLattice::m3()];
    let mut report = SuiteReport::new("connection-map round trips");
    for _ in 0..cases {
        let t = rng.gen_range(1..=3);
        let (factors, set) = random_subdirect(&mut rng, &pool, t);
        report.record(round_trip(&factors, &set));
    }
    report
}

/// Whether the blocks `σ'_i(J(L_i))` are pairwise disjoint, as the row
/// pipeline and the scaffolding count require.
pub fn blocks_disjoint(fam: &ConnectionFamily) -> bool {
    Ground::new(fam).is_ok()
}

/// `|∨-ideals of the scaffolding| = |L|`, carrier = sub-irreducibles of `L`,
/// and the carrier splits into blocks of sizes `|L_i| - 1`.
pub fn scaffolding_identity(fam: &ConnectionFamily) -> std::result::Result<(), String> {
    let rec = fam.reconstruct(None).map_err(|e| e.to_string())?;
    let scaffolding = fam.scaffolding();
    let ideals = scaffolding.vee_ideals().count();
    if ideals != rec.len() as u128 {
        return Err(format!("{ideals} ∨-ideals, {} elements", rec.len()));
    }
    let lattice = rec.to_lattice().map_err(|e| e.to_string())?;
    let mut sub: Vec<Tuple> = lattice
        .sub_irreducibles()
        .into_iter()
        .map(|x| rec.elements()[x].clone())
        .collect();
    sub.sort();
    let mut carrier: Vec<Tuple> = scaffolding.carrier().to_vec();
    carrier.retain(|x| x != &fam.bottom_tuple());
    carrier.sort();
    if sub != carrier {
        return Err(format!("carrier has {} elements, {} sub-irreducibles", carrier.len(), sub.len()));
    }
    let blocks: usize = fam.factors().iter().map(|f| f.len() - 1).sum();
    if blocks != carrier.len() {
        return Err(format!("blocks total {blocks}, carrier {}", carrier.len()));
    }
    Ok(())
}

/// FM3 families of small posets plus random `{D2, M3}` products with disjoint blocks.
pub fn modular_fixtures(max_poset: usize, random: usize, seed: u64) -> Vec<(String, ConnectionFamily)> {
    let m3 = VarietySpec::m3();
    let mut out = Vec::new();
    for n in 1..=max_poset {
        for p in enumerate_posets(n).expect("small sizes") {
            let (fam, _) = connection_family(&p, &m3).expect("M3 labellings");
            out.push((format!("FM3({})", p.to_dsl()), fam));
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let pool = [FiniteLattice::d2(), FiniteLattice::m3()];
    while out.len() < random + count_posets(max_poset) {
        let t = rng.gen_range(1..=3);
        let (factors, set) = random_subdirect(&mut rng, &pool, t);
        let fam = ConnectionFamily::from_subdirect_product(factors.clone(), &set).expect("subdirect");
        if blocks_disjoint(&fam) {
            let names: Vec<&str> = factors.iter().map(|f| if f.len() == 2 { "D2" } else { "M3" }).collect();
            out.push((format!("{} in {}", set.len(), names.join("×")), fam));
        }
    }
    out
}

fn count_posets(max: usize) -> usize {
    (1..=max).map(|n| enumerate_posets(n).map_or(0, |v| v.len())).sum()
}

pub fn scaffolding_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("scaffolding ∨-ideals and carrier");
    let fixtures = modular_fixtures(3, 60, seed).into_iter().chain(m3_squared_fixtures(seed));
    for (name, fam) in fixtures {
        report.record(scaffolding_identity(&fam).map_err(|e| format!("{name}: {e}")));
    }
    report
}

/// Row pipeline and join-closure agree as sets of tuples.
pub fn pipeline_agrees(fam: &ConnectionFamily) -> std::result::Result<(), String> {
    let a = assemble(fam, None).map_err(|e| e.to_string())?;
    let mut got = a.tuples();
    got.sort();
    let expected = fam.reconstruct(None).map_err(|e| e.to_string())?.sorted_elements();
    if got != expected {
        return Err(format!("pipeline {} elements, join-closure {}", got.len(), expected.len()));
    }
    Ok(())
}

/// Every FM3 instance with `|P| ≤ max_poset`, plus `M3×M3` fixtures.
pub fn pipeline_suite(max_poset: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("row pipeline vs join-closure");
    for (name, fam) in modular_fixtures(max_poset, 0, seed) {
        report.record(pipeline_agrees(&fam).map_err(|e| format!("{name}: {e}")));
    }
    for (name, fam) in m3_squared_fixtures(seed) {
        report.record(pipeline_agrees(&fam).map_err(|e| format!("{name}: {e}")));
    }
    report
}

/// Subdirect products inside `M3×M3` whose blocks are disjoint: the full
/// product, the order relation, and up to a dozen sampled ones.
pub fn m3_squared_fixtures(seed: u64) -> Vec<(String, ConnectionFamily)> {
    let m3 = FiniteLattice::m3();
    let factors = vec![m3.clone(), m3.clone()];
    let full: Vec<Tuple> = (0..5u16).flat_map(|x| (0..5u16).map(move |y| vec![x, y])).collect();
    let order: Vec<Tuple> = full.iter().filter(|t| m3.leq(t[0] as usize, t[1] as usize)).cloned().collect();
    let mut candidates = vec![full.clone(), order];
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..5000 {
        if out.len() >= 14 {
            break;
        }
        let set = match candidates.pop() {
            Some(c) => generated_sublattice(&factors, &c),
            None => {
                let k = rng.gen_range(2..=8);
                let seed: Vec<Tuple> = full.choose_multiple(&mut rng, k).cloned().collect();
                generated_sublattice(&factors, &seed)
            }
        };
        if !seen.insert(set.clone()) {
            continue;
        }
        let Ok(fam) = ConnectionFamily::from_subdirect_product(factors.clone(), &set) else {
            continue;
        };
        if blocks_disjoint(&fam) {
            out.push((format!("{}-element sublattice of M3×M3", set.len()), fam));
        }
    }
    out
}

/// Axiom check on a supplied family; every violation is a counterexample.
pub fn axioms_suite(fam: &ConnectionFamily) -> SuiteReport {
    let mut report = SuiteReport::new("connection-map axioms");
    let violations = fam.check_axioms();
    if violations.is_empty() {
        report.record(Ok(()));
    }
    for v in violations {
        report.record(Err(v.to_string()));
    }
    report
}

/// The default corpus: every suite at its acceptance size.
pub fn default_suites() -> Vec<SuiteReport> {
    let m3 = VarietySpec::m3();
    let mut axioms = SuiteReport::new("connection-map axioms");
    for n in 1..=4 {
        for p in enumerate_posets(n).expect("small sizes") {
            let (fam, _) = connection_family(&p, &m3).expect("M3 labellings");
            let v = fam.check_axioms();
            axioms.record(match v.first() {
                None => Ok(()),
                Some(v) => Err(format!("FM3({}): {v}", p.to_dsl())),
            });
        }
    }
    vec![
        axioms,
        row_engine_suite(1000, 1),
        round_trip_suite(500, 2),
        scaffolding_suite(3),
        pipeline_suite(4, 4),
    ]
}
