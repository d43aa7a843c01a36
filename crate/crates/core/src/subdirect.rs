//! Subdirect products described by connection maps between their factors.
//!
//! A [`ConnectionFamily`] holds factors `L_1..L_t` and join-homomorphisms
//! `α_{i,j}: L_j → L_i`. From these the subdirect product is rebuilt as the
//! join-closure of the tuples `σ'_i(y) = (α_{j,i}(y))_j`, and also as the set
//! of ∨-ideals of its scaffolding.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::implications::RowFamily;
use crate::lattice::{FiniteLattice, LatticeJson};

/// An element of a product of factors, one coordinate per factor.
pub type Tuple = Vec<u16>;

/// Results larger than this skip the quadratic meet-closure check.
const MEET_CHECK_LIMIT: usize = 2000;

#[derive(Clone, Debug)]
pub struct ConnectionFamily {
    factors: Vec<FiniteLattice>,
    /// `maps[i][j][x] = α_{i,j}(x)` for `x ∈ L_j`.
    maps: Vec<Vec<Vec<u16>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotIdentity { i: usize, x: usize },
    ZeroNotPreserved { i: usize, j: usize },
    JoinNotPreserved { i: usize, j: usize, x: usize, y: usize },
    Composition { i: usize, j: usize, k: usize, x: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotIdentity { i, x } => write!(f, "α[{i},{i}]({x}) ≠ {x}"),
            Violation::ZeroNotPreserved { i, j } => write!(f, "α[{i},{j}](0) ≠ 0"),
            Violation::JoinNotPreserved { i, j, x, y } => {
                write!(f, "α[{i},{j}]({x} ∨ {y}) ≠ α[{i},{j}]({x}) ∨ α[{i},{j}]({y})")
            }
            Violation::Composition { i, j, k, x } => {
                write!(f, "α[{i},{j}](α[{j},{k}]({x})) ≰ α[{i},{k}]({x})")
            }
        }
    }
}

impl ConnectionFamily {
    /// Wraps factors and maps without checking the axioms.
    pub fn new(factors: Vec<FiniteLattice>, maps: Vec<Vec<Vec<u16>>>) -> Result<Self> {
        let t = factors.len();
        if maps.len() != t || maps.iter().any(|row| row.len() != t) {
            return Err(Error::InvalidArgument(format!("expected a {t}×{t} table of maps")));
        }
        for (i, row) in maps.iter().enumerate() {
            for (j, map) in row.iter().enumerate() {
                if map.len() != factors[j].len() || map.iter().any(|&v| v as usize >= factors[i].len()) {
                    return Err(Error::InvalidArgument(format!("map α[{i},{j}] has the wrong shape")));
                }
            }
        }
        Ok(ConnectionFamily { factors, maps })
    }

    /// Like [`ConnectionFamily::new`], but rejects families violating the axioms.
    pub fn validated(factors: Vec<FiniteLattice>, maps: Vec<Vec<Vec<u16>>>) -> Result<Self> {
        let fam = Self::new(factors, maps)?;
        let violations = fam.check_axioms();
        if let Some(v) = violations.first() {
            return Err(Error::Axioms(format!("{} violation(s), first: {v}", violations.len())));
        }
        Ok(fam)
    }

    /// Extracts `α_{i,j} = π_i ∘ σ_j` from an explicit subdirect product, given
    /// as a join- and meet-closed set of tuples whose projections are onto.
    pub fn from_subdirect_product(factors: Vec<FiniteLattice>, tuples: &[Tuple]) -> Result<Self> {
        let t = factors.len();
        let mut sigma: Vec<Vec<Option<Tuple>>> = factors.iter().map(|f| vec![None; f.len()]).collect();
        for tuple in tuples {
            for j in 0..t {
                let slot = &mut sigma[j][tuple[j] as usize];
                *slot = Some(match slot.take() {
                    None => tuple.clone(),
                    Some(prev) => meet_tuples(&factors, &prev, tuple),
                });
            }
        }
        let mut maps = vec![vec![Vec::new(); t]; t];
        for j in 0..t {
            for (y, s) in sigma[j].iter().enumerate() {
                let s = s.as_ref().ok_or_else(|| {
                    Error::Reconstruction(format!("projection onto factor {j} misses element {y}"))
                })?;
                for i in 0..t {
                    maps[i][j].push(s[i]);
                }
            }
        }
        Self::new(factors, maps)
    }

    pub fn factors(&self) -> &[FiniteLattice] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    #[inline]
    pub fn alpha(&self, i: usize, j: usize, x: usize) -> usize {
        self.maps[i][j][x] as usize
    }

    pub fn map(&self, i: usize, j: usize) -> &[u16] {
        &self.maps[i][j]
    }

    /// Replaces one map; meant for fault injection in checks.
    pub fn with_map(mut self, i: usize, j: usize, map: Vec<u16>) -> Result<Self> {
        let maps = {
            let mut m = std::mem::take(&mut self.maps);
            m[i][j] = map;
            m
        };
        Self::new(self.factors, maps)
    }

    /// Every violated instance of: `α_{i,i} = id`, `α_{i,j}(0) = 0`,
    /// `α_{i,j}(x ∨ y) = α_{i,j}(x) ∨ α_{i,j}(y)` and `α_{i,j} ∘ α_{j,k} ≤ α_{i,k}`.
    pub fn check_axioms(&self) -> Vec<Violation> {
        let t = self.len();
        let mut out = Vec::new();
        for i in 0..t {
            for x in 0..self.factors[i].len() {
                if self.alpha(i, i, x) != x {
                    out.push(Violation::NotIdentity { i, x });
                }
            }
        }
        for i in 0..t {
            let li = &self.factors[i];
            for j in 0..t {
                let lj = &self.factors[j];
                if self.alpha(i, j, lj.bottom()) != li.bottom() {
                    out.push(Violation::ZeroNotPreserved { i, j });
                }
                for x in 0..lj.len() {
                    for y in x + 1..lj.len() {
                        let lhs = self.alpha(i, j, lj.join(x, y));
                        let rhs = li.join(self.alpha(i, j, x), self.alpha(i, j, y));
                        if lhs != rhs {
                            out.push(Violation::JoinNotPreserved { i, j, x, y });
                        }
                    }
                }
                for k in 0..t {
                    for x in 0..self.factors[k].len() {
                        if !li.leq(self.alpha(i, j, self.alpha(j, k, x)), self.alpha(i, k, x)) {
                            out.push(Violation::Composition { i, j, k, x });
                        }
                    }
                }
            }
        }
        out
    }

    /// `σ'_i(y) = (α_{j,i}(y))_j`.
    pub fn sigma_prime(&self, i: usize, y: usize) -> Tuple {
        (0..self.len()).map(|j| self.maps[j][i][y]).collect()
    }

    pub fn bottom_tuple(&self) -> Tuple {
        self.factors.iter().map(|f| f.bottom() as u16).collect()
    }

    pub fn top_tuple(&self) -> Tuple {
        self.factors.iter().map(|f| f.top() as u16).collect()
    }

    /// `∪_i σ'_i(J(L_i))` without repetitions, in factor order.
    pub fn join_generators(&self) -> Vec<Tuple> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for p in f.join_irreducibles() {
                let s = self.sigma_prime(i, p);
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn join(&self, a: &[u16], b: &[u16]) -> Tuple {
        join_tuples(&self.factors, a, b)
    }

    pub fn meet(&self, a: &[u16], b: &[u16]) -> Tuple {
        meet_tuples(&self.factors, a, b)
    }

    pub fn leq(&self, a: &[u16], b: &[u16]) -> bool {
        leq_tuples(&self.factors, a, b)
    }

    /// The subdirect product determined by the family: the join-closure of the
    /// σ'-images of join irreducibles, plus the bottom tuple. Fails when the
    /// family violates the axioms, when the result would exceed `cap` tuples,
    /// or when a postcondition does not hold.
    pub fn reconstruct(&self, cap: Option<usize>) -> Result<SubdirectLattice> {
        let violations = self.check_axioms();
        if let Some(v) = violations.first() {
            return Err(Error::Axioms(format!("{} violation(s), first: {v}", violations.len())));
        }
        let gens = self.join_generators();
        let lattice = SubdirectLattice::join_closure(self.factors.clone(), gens, cap)?;
        self.check_reconstruction(&lattice)?;
        Ok(lattice)
    }

    fn check_reconstruction(&self, lattice: &SubdirectLattice) -> Result<()> {
        for (i, f) in self.factors.iter().enumerate() {
            let mut hit = vec![false; f.len()];
            for x in lattice.elements() {
                hit[x[i] as usize] = true;
            }
            if let Some(y) = hit.iter().position(|h| !h) {
                return Err(Error::Reconstruction(format!(
                    "projection onto factor {i} misses `{}`",
                    f.name(y)
                )));
            }
            let sigma: Vec<Tuple> = (0..f.len()).map(|y| self.sigma_prime(i, y)).collect();
            for s in &sigma {
                if lattice.position(s).is_none() {
                    return Err(Error::Reconstruction(format!("σ'[{i}] leaves the join-closure")));
                }
            }
            for x in lattice.elements() {
                if !self.leq(&sigma[x[i] as usize], x) {
                    return Err(Error::Reconstruction(format!(
                        "σ'[{i}]({}) is not the least element of its fiber",
                        f.name(x[i] as usize)
                    )));
                }
            }
        }
        if lattice.len() <= MEET_CHECK_LIMIT && !lattice.is_meet_closed() {
            return Err(Error::Reconstruction("join-closure is not meet-closed".into()));
        }
        Ok(())
    }

    /// `G = ∪_i σ'_i(L_i ∖ {0})` with all minimal join covers declared.
    /// Covers are searched exhaustively for `|G| ≤ 24` and up to size 4 otherwise.
    pub fn scaffolding(&self) -> PartialSemilattice {
        let carrier = self.scaffolding_carrier();
        let bound = if carrier.len() <= 24 { carrier.len() } else { 4 };
        PartialSemilattice::new(self.factors.clone(), carrier, bound)
    }

    pub fn scaffolding_with_bound(&self, bound: usize) -> PartialSemilattice {
        PartialSemilattice::new(self.factors.clone(), self.scaffolding_carrier(), bound)
    }

    /// Carrier of the scaffolding together with the factor sizes `Σ |L_i ∖ {0}|`.
    pub fn scaffolding_carrier(&self) -> Vec<Tuple> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for y in (0..f.len()).filter(|&y| y != f.bottom()) {
                let s = self.sigma_prime(i, y);
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> ConnectionFamilyJson {
        ConnectionFamilyJson {
            factors: self.factors.iter().map(|f| f.to_json()).collect(),
            maps: self.maps.clone(),
        }
    }

    pub fn from_json(raw: &ConnectionFamilyJson) -> Result<Self> {
        let factors = raw
            .factors
            .iter()
            .map(FiniteLattice::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors, raw.maps.clone())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: ConnectionFamilyJson = serde_json::from_str(text)?;
        Self::from_json(&raw)
    }
}

/// Factors inline in the lattice format; `maps[i][j]` lists `α_{i,j}` by element index of `L_j`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConnectionFamilyJson {
    pub factors: Vec<LatticeJson>,
    pub maps: Vec<Vec<Vec<u16>>>,
}

pub fn join_tuples(factors: &[FiniteLattice], a: &[u16], b: &[u16]) -> Tuple {
    factors
        .iter()
        .zip(a.iter().zip(b))
        .map(|(f, (&x, &y))| f.join(x as usize, y as usize) as u16)
        .collect()
}

pub fn meet_tuples(factors: &[FiniteLattice], a: &[u16], b: &[u16]) -> Tuple {
    factors
        .iter()
        .zip(a.iter().zip(b))
        .map(|(f, (&x, &y))| f.meet(x as usize, y as usize) as u16)
        .collect()
}

pub fn leq_tuples(factors: &[FiniteLattice], a: &[u16], b: &[u16]) -> bool {
    factors
        .iter()
        .zip(a.iter().zip(b))
        .all(|(f, (&x, &y))| f.leq(x as usize, y as usize))
}

/// The sublattice of the product generated by `seed`, sorted.
pub fn generated_sublattice(factors: &[FiniteLattice], seed: &[Tuple]) -> Vec<Tuple> {
    let mut seen: HashSet<Tuple> = HashSet::new();
    let mut set: Vec<Tuple> = Vec::new();
    for s in seed {
        if seen.insert(s.clone()) {
            set.push(s.clone());
        }
    }
    let mut i = 0;
    while i < set.len() {
        for j in 0..=i {
            for t in [join_tuples(factors, &set[i], &set[j]), meet_tuples(factors, &set[i], &set[j])] {
                if seen.insert(t.clone()) {
                    set.push(t);
                }
            }
        }
        i += 1;
    }
    set.sort();
    set
}

/// Length of a maximal chain of the join-closure of `gens` inside a modular
/// product, found by greedily adding the generator that raises the product
/// height the least. Every such step is a cover, and all maximal chains of a
/// modular lattice have the same length.
pub fn greedy_chain_length(factors: &[FiniteLattice], gens: &[Tuple]) -> usize {
    let heights: Vec<Vec<usize>> = factors.iter().map(|f| f.heights()).collect();
    let height = |t: &[u16]| -> usize { t.iter().zip(&heights).map(|(&x, h)| h[x as usize]).sum() };
    let mut current: Tuple = factors.iter().map(|f| f.bottom() as u16).collect();
    let mut steps = 0;
    loop {
        let best = gens
            .iter()
            .filter(|g| !leq_tuples(factors, g, &current))
            .map(|g| join_tuples(factors, &current, g))
            .min_by_key(|t| height(t));
        match best {
            Some(next) => {
                current = next;
                steps += 1;
            }
            None => return steps,
        }
    }
}

/// A subdirect product stored as an explicit set of tuples.
#[derive(Clone, Debug)]
pub struct SubdirectLattice {
    factors: Vec<FiniteLattice>,
    gens: Vec<Tuple>,
    elements: Vec<Tuple>,
    index: HashMap<Tuple, usize>,
}

impl SubdirectLattice {
    /// Join-closure of `gens` together with the bottom tuple.
    pub fn join_closure(factors: Vec<FiniteLattice>, gens: Vec<Tuple>, cap: Option<usize>) -> Result<Self> {
        let bottom: Tuple = factors.iter().map(|f| f.bottom() as u16).collect();
        let mut elements = vec![bottom.clone()];
        let mut index = HashMap::new();
        index.insert(bottom, 0);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in &gens {
                let y = join_tuples(&factors, &x, g);
                if !index.contains_key(&y) {
                    if let Some(cap) = cap {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded {
                                cap,
                                what: format!("join-closure ({} tuples so far)", elements.len()),
                            });
                        }
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        Ok(SubdirectLattice {
            factors,
            gens,
            elements,
            index,
        })
    }

    pub fn factors(&self) -> &[FiniteLattice] {
        &self.factors
    }

    pub fn generators(&self) -> &[Tuple] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Tuple] {
        &self.elements
    }

    pub fn position(&self, tuple: &[u16]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    pub fn contains(&self, tuple: &[u16]) -> bool {
        self.index.contains_key(tuple)
    }

    /// Elements sorted lexicographically; handy for set comparisons.
    pub fn sorted_elements(&self) -> Vec<Tuple> {
        let mut out = self.elements.clone();
        out.sort();
        out
    }

    pub fn is_meet_closed(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| self.contains(&meet_tuples(&self.factors, &self.elements[a], &self.elements[b])))
        })
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        FiniteLattice::from_tuples(&self.factors, &self.elements)
    }

    /// Length of the longest chain: greedy for modular factors, otherwise a
    /// quadratic longest-path pass over the elements sorted by product height.
    pub fn length(&self) -> usize {
        if self.factors.iter().all(|f| f.is_modular()) {
            return greedy_chain_length(&self.factors, &self.gens);
        }
        let heights: Vec<Vec<usize>> = self.factors.iter().map(|f| f.heights()).collect();
        let h = |t: &[u16]| -> usize { t.iter().zip(&heights).map(|(&x, h)| h[x as usize]).sum() };
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| h(&self.elements[i]));
        let mut best = vec![0usize; self.len()];
        for (k, &x) in order.iter().enumerate() {
            for &y in &order[..k] {
                if best[y] + 1 > best[x] && leq_tuples(&self.factors, &self.elements[y], &self.elements[x]) {
                    best[x] = best[y] + 1;
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }
}

/// A subset of a product with some joins declared; its ∨-ideals, plus the
/// empty set, correspond to the elements of the lattice it generates.
#[derive(Clone, Debug)]
pub struct PartialSemilattice {
    factors: Vec<FiniteLattice>,
    carrier: Vec<Tuple>,
    /// `(B, target)` with `B` and `target` as carrier indices.
    joins: Vec<(Vec<usize>, usize)>,
}

impl PartialSemilattice {
    /// Declares all minimal join covers of size at most `bound` inside `carrier`.
    pub fn new(factors: Vec<FiniteLattice>, carrier: Vec<Tuple>, bound: usize) -> Self {
        let mut joins = Vec::new();
        for g in 0..carrier.len() {
            let below: Vec<usize> = (0..carrier.len())
                .filter(|&h| h != g && leq_tuples(&factors, &carrier[h], &carrier[g]))
                .collect();
            let candidates: Vec<Tuple> = below.iter().map(|&h| carrier[h].clone()).collect();
            for cover in min_join_covers(&factors, &carrier[g], &candidates, bound) {
                joins.push((cover.into_iter().map(|k| below[k]).collect(), g));
            }
        }
        PartialSemilattice { factors, carrier, joins }
    }

    pub fn carrier(&self) -> &[Tuple] {
        &self.carrier
    }

    pub fn declared_joins(&self) -> &[(Vec<usize>, usize)] {
        &self.joins
    }

    /// All hereditary subsets of the carrier closed under the declared joins,
    /// the empty set included, as a row family over carrier indices.
    pub fn vee_ideals(&self) -> RowFamily {
        let n = self.carrier.len();
        let mut family = RowFamily::full(n);
        let strictly_below: Vec<Vec<usize>> = (0..n)
            .map(|g| {
                (0..n)
                    .filter(|&h| h != g && leq_tuples(&self.factors, &self.carrier[h], &self.carrier[g]))
                    .collect()
            })
            .collect();
        for g in 0..n {
            let covers: Vec<usize> = strictly_below[g]
                .iter()
                .copied()
                .filter(|&h| !strictly_below[g].iter().any(|&m| m != h && strictly_below[m].contains(&h)))
                .collect();
            family.impose_singleton(g, &covers);
        }
        for (premise, target) in &self.joins {
            family.impose_general(premise, &[*target]);
        }
        family
    }
}

/// All inclusion-minimal `B`, `2 ≤ |B| ≤ bound`, of candidates strictly below
/// `target` whose join is exactly `target`. Returned as candidate indices.
pub fn min_join_covers(factors: &[FiniteLattice], target: &[u16], candidates: &[Tuple], bound: usize) -> Vec<Vec<usize>> {
    let below: Vec<usize> = (0..candidates.len())
        .filter(|&k| candidates[k].as_slice() != target && leq_tuples(factors, &candidates[k], target))
        .collect();
    let bottom: Tuple = factors.iter().map(|f| f.bottom() as u16).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    covers_rec(factors, target, candidates, &below, 0, &bottom, bound, &mut chosen, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn covers_rec(
    factors: &[FiniteLattice],
    target: &[u16],
    candidates: &[Tuple],
    below: &[usize],
    start: usize,
    current: &[u16],
    bound: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == bound {
        return;
    }
    for k in start..below.len() {
        let c = below[k];
        if leq_tuples(factors, &candidates[c], current) {
            continue;
        }
        let next = join_tuples(factors, current, &candidates[c]);
        chosen.push(c);
        if next.as_slice() == target {
            if chosen.len() >= 2 && is_minimal_cover(factors, target, candidates, chosen) {
                out.push(chosen.clone());
            }
        } else {
            covers_rec(factors, target, candidates, below, k + 1, &next, bound, chosen, out);
        }
        chosen.pop();
    }
}

fn is_minimal_cover(factors: &[FiniteLattice], target: &[u16], candidates: &[Tuple], chosen: &[usize]) -> bool {
    (0..chosen.len()).all(|skip| {
        let mut acc: Tuple = factors.iter().map(|f| f.bottom() as u16).collect();
        for (k, &c) in chosen.iter().enumerate() {
            if k != skip {
                acc = join_tuples(factors, &acc, &candidates[c]);
            }
        }
        acc.as_slice() != target
    })
}
