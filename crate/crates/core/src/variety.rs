//! Finitely generated lattice varieties and the lattices freely generated by
//! finite posets within them.
//!
//! `FV(P)` is the subdirect product of one copy of a subdirectly irreducible
//! `S_k` per labelling, a monotone map from `P` onto a generating subset of
//! `S_k` taken up to automorphisms of `S_k`. The connection maps between two
//! labelled factors are the biggest join-homomorphisms respecting the labels.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, LatticeJson};
use crate::pipeline::{assemble, Assembly, PipelineStats};
use crate::poset::Poset;
use crate::subdirect::{ConnectionFamily, SubdirectLattice, Tuple};

/// Default bound on the working set of a computation, in tuples or rows.
pub const DEFAULT_CAP: usize = 10_000_000;

/// Largest lattice [`FreeLattice::to_lattice`] will tabulate.
pub const TABLE_LIMIT: usize = 20_000;

#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub name: String,
    /// Subdirectly irreducible generators, the two-element chain first.
    pub irreducibles: Vec<FiniteLattice>,
    pub si_names: Vec<String>,
    pub modular: bool,
}

#[derive(Deserialize)]
struct VarietyFile {
    #[serde(default)]
    name: Option<String>,
    irreducibles: Vec<SiEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SiEntry {
    Builtin(String),
    Named { name: String, lattice: LatticeJson },
    Inline(LatticeJson),
}

impl VarietySpec {
    /// Puts the two-element chain first, adding it when missing.
    pub fn new(name: impl Into<String>, irreducibles: Vec<(String, FiniteLattice)>) -> Result<Self> {
        let d2 = FiniteLattice::d2();
        let mut list = Vec::new();
        let mut rest = Vec::new();
        for (n, l) in irreducibles {
            if l.len() < 2 {
                return Err(Error::InvalidArgument(format!("`{n}` is trivial")));
            }
            if list.is_empty() && l.is_isomorphic(&d2) {
                list.push((n, l));
            } else if !l.is_isomorphic(&d2) {
                rest.push((n, l));
            }
        }
        if list.is_empty() {
            list.push(("D2".to_string(), d2));
        }
        list.extend(rest);
        let modular = list.iter().all(|(_, l)| l.is_modular());
        let (si_names, irreducibles) = list.into_iter().unzip();
        Ok(VarietySpec {
            name: name.into(),
            irreducibles,
            si_names,
            modular,
        })
    }

    pub fn distributive() -> Self {
        Self::new("distributive", vec![("D2".into(), FiniteLattice::d2())]).unwrap()
    }

    pub fn m3() -> Self {
        Self::new(
            "m3",
            vec![("D2".into(), FiniteLattice::d2()), ("M3".into(), FiniteLattice::m3())],
        )
        .unwrap()
    }

    /// `distributive`, `m3`, or `custom:<file>` with a JSON list of
    /// irreducibles given by builtin name or in the lattice format.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "distributive" | "d2" | "D" => Ok(Self::distributive()),
            "m3" | "M3" | "modular3" => Ok(Self::m3()),
            _ => match name.strip_prefix("custom:") {
                Some(path) => Self::from_file(Path::new(path)),
                None => Err(Error::Parse(format!("unknown variety `{name}`"))),
            },
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Self::from_json_str(&text, &default_name)
    }

    pub fn from_json_str(text: &str, default_name: &str) -> Result<Self> {
        let raw: VarietyFile = serde_json::from_str(text)?;
        let mut list = Vec::new();
        for (k, entry) in raw.irreducibles.into_iter().enumerate() {
            list.push(match entry {
                SiEntry::Builtin(n) => {
                    let l = FiniteLattice::builtin(&n).ok_or_else(|| Error::Parse(format!("unknown lattice `{n}`")))?;
                    (n, l)
                }
                SiEntry::Named { name, lattice } => (name, FiniteLattice::from_json(&lattice)?),
                SiEntry::Inline(lattice) => (format!("S{}", k + 1), FiniteLattice::from_json(&lattice)?),
            });
        }
        Self::new(raw.name.unwrap_or_else(|| default_name.to_string()), list)
    }
}

/// A monotone map from the poset onto a generating set of irreducible `si`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Labelling {
    pub si: usize,
    pub assignment: Vec<usize>,
}

/// Monotone maps `P → S` whose image generates `S`, one per orbit of `Aut(S)`:
/// the lexicographically least assignment vector. Sorted.
pub fn labellings(p: &Poset, s: &FiniteLattice) -> Vec<Vec<usize>> {
    let order = p.linear_extension();
    let lower: Vec<Vec<usize>> = (0..p.len()).map(|x| p.lower_covers(x)).collect();
    let autos: Vec<Vec<usize>> = s
        .automorphism_group()
        .into_iter()
        .filter(|a| a.iter().enumerate().any(|(x, &y)| x != y))
        .collect();
    let mut out = Vec::new();
    let mut assignment = vec![usize::MAX; p.len()];
    monotone_rec(s, &order, &lower, 0, &mut assignment, &mut |lambda| {
        if s.sublattice_generated(lambda).len() != s.len() {
            return;
        }
        let least = autos.iter().all(|a| {
            let image: Vec<usize> = lambda.iter().map(|&x| a[x]).collect();
            image.as_slice() >= lambda
        });
        if least {
            out.push(lambda.to_vec());
        }
    });
    out.sort();
    out
}

fn monotone_rec(
    s: &FiniteLattice,
    order: &[usize],
    lower: &[Vec<usize>],
    depth: usize,
    assignment: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if depth == order.len() {
        visit(assignment);
        return;
    }
    let x = order[depth];
    let floor = s.join_all(lower[x].iter().map(|&y| assignment[y]));
    for v in 0..s.len() {
        if s.leq(floor, v) {
            assignment[x] = v;
            monotone_rec(s, order, lower, depth + 1, assignment, visit);
        }
    }
    assignment[x] = usize::MAX;
}

/// The largest 0- and join-preserving `α: L_j → L_i` with
/// `α(λ_j(p)) ≤ λ_i(p)` for every `p`.
pub fn biggest_join_hom(lj: &FiniteLattice, lambda_j: &[usize], li: &FiniteLattice, lambda_i: &[usize]) -> Vec<usize> {
    let joins = lj.join_irreducibles();
    let mut a: Vec<usize> = joins
        .iter()
        .map(|&q| {
            li.meet_all(
                lambda_j
                    .iter()
                    .zip(lambda_i)
                    .filter(|&(&lj_p, _)| lj.leq(q, lj_p))
                    .map(|(_, &li_p)| li_p),
            )
        })
        .collect();
    let below: Vec<Vec<usize>> = (0..lj.len())
        .map(|x| (0..joins.len()).filter(|&k| lj.leq(joins[k], x)).collect())
        .collect();
    let extend = |a: &[usize]| -> Vec<usize> {
        (0..lj.len())
            .map(|x| li.join_all(below[x].iter().map(|&k| a[k])))
            .collect()
    };
    loop {
        let alpha = extend(&a);
        let mut changed = false;
        for x in 0..lj.len() {
            for y in x + 1..lj.len() {
                let bound = li.join(alpha[x], alpha[y]);
                for &k in &below[lj.join(x, y)] {
                    if !li.leq(a[k], bound) {
                        a[k] = li.meet(a[k], bound);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return alpha;
        }
    }
}

/// One labelled factor of the free lattice.
#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    pub si: usize,
    pub si_name: String,
    pub labelling: Vec<usize>,
}

/// All labelled factors, irreducibles in variety order, and the connection
/// maps between them.
pub fn connection_family(p: &Poset, v: &VarietySpec) -> Result<(ConnectionFamily, Vec<Factor>)> {
    let mut factors = Vec::new();
    for (k, s) in v.irreducibles.iter().enumerate() {
        for lambda in labellings(p, s) {
            factors.push(Factor {
                si: k,
                si_name: v.si_names[k].clone(),
                labelling: lambda,
            });
        }
    }
    let t = factors.len();
    let lattices: Vec<FiniteLattice> = factors.iter().map(|f| v.irreducibles[f.si].clone()).collect();
    let maps: Vec<Vec<Vec<u16>>> = (0..t)
        .into_par_iter()
        .map(|i| {
            (0..t)
                .map(|j| {
                    biggest_join_hom(&lattices[j], &factors[j].labelling, &lattices[i], &factors[i].labelling)
                        .into_iter()
                        .map(|x| x as u16)
                        .collect()
                })
                .collect()
        })
        .collect();
    let fam = ConnectionFamily::validated(lattices, maps)?;
    Ok((fam, factors))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SiCount {
    pub si: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FreeStats {
    pub cardinality: u128,
    /// Number of two-element factors.
    pub s: usize,
    /// Factor counts of the other irreducibles, in variety order.
    pub t: Vec<SiCount>,
    pub length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineStats>,
}

impl FreeStats {
    pub fn t_total(&self) -> usize {
        self.t.iter().map(|c| c.count).sum()
    }

    /// `28 (s=6, t=1, length=8)`.
    pub fn summary(&self) -> String {
        let t = if self.t.is_empty() {
            "0".to_string()
        } else if self.t.len() == 1 {
            self.t[0].count.to_string()
        } else {
            let parts: Vec<String> = self.t.iter().map(|c| format!("{}:{}", c.si, c.count)).collect();
            format!("[{}]", parts.join(", "))
        };
        format!("{} (s={}, t={}, length={})", self.cardinality, self.s, t, self.length)
    }
}

#[derive(Clone, Debug)]
pub struct FreeOptions {
    pub cap: Option<usize>,
    /// Cross-check against the plain join-closure and fail on any difference.
    pub oracle: bool,
}

impl Default for FreeOptions {
    fn default() -> Self {
        FreeOptions {
            cap: Some(DEFAULT_CAP),
            oracle: false,
        }
    }
}

#[derive(Clone, Debug)]
enum Elements {
    Closure(Box<Assembly>),
    Tuples(SubdirectLattice),
}

#[derive(Clone, Debug)]
pub struct FreeLattice {
    pub poset: Poset,
    pub variety: String,
    pub factors: Vec<Factor>,
    pub family: ConnectionFamily,
    pub stats: FreeStats,
    elements: Elements,
}

impl FreeLattice {
    pub fn cardinality(&self) -> u128 {
        self.stats.cardinality
    }

    /// The image `(λ_j(p))_j` of a generator.
    pub fn generator(&self, p: usize) -> Tuple {
        self.factors.iter().map(|f| f.labelling[p] as u16).collect()
    }

    /// All elements as product tuples, sorted.
    pub fn tuples(&self) -> Vec<Tuple> {
        let mut out = match &self.elements {
            Elements::Closure(a) => a.tuples(),
            Elements::Tuples(l) => l.elements().to_vec(),
        };
        out.sort();
        out
    }

    pub fn assembly(&self) -> Option<&Assembly> {
        match &self.elements {
            Elements::Closure(a) => Some(a),
            Elements::Tuples(_) => None,
        }
    }

    /// Tabulates the lattice; generators are named after the poset elements.
    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        if self.cardinality() > TABLE_LIMIT as u128 {
            return Err(Error::CapExceeded {
                cap: TABLE_LIMIT,
                what: format!("tabulating {} elements", self.cardinality()),
            });
        }
        let tuples = self.tuples();
        let lattice = FiniteLattice::from_tuples(self.family.factors(), &tuples)?;
        let mut names = lattice.names().to_vec();
        for p in 0..self.poset.len() {
            if let Ok(k) = tuples.binary_search(&self.generator(p)) {
                names[k] = self.poset.name(p).to_string();
            }
        }
        if self.family.is_empty() {
            names[0] = self.poset.names().first().cloned().unwrap_or_else(|| "0".into());
        }
        Ok(lattice.renamed(names))
    }
}

fn tally(v: &VarietySpec, factors: &[Factor]) -> (usize, Vec<SiCount>) {
    let s = factors.iter().filter(|f| f.si == 0).count();
    let t = (1..v.irreducibles.len())
        .map(|k| SiCount {
            si: v.si_names[k].clone(),
            count: factors.iter().filter(|f| f.si == k).count(),
        })
        .collect();
    (s, t)
}

/// The lattice freely generated by `p` in the variety. Modular varieties go
/// through the row pipeline, others through the join-closure.
pub fn free_lattice(p: &Poset, v: &VarietySpec, opts: &FreeOptions) -> Result<FreeLattice> {
    let (family, factors) = connection_family(p, v)?;
    let (s, t) = tally(v, &factors);
    let annotate = |e: Error| match e {
        Error::CapExceeded { cap, what } => Error::CapExceeded {
            cap,
            what: format!("{what}; s={s}, t={}", t.iter().map(|c| c.count).sum::<usize>()),
        },
        other => other,
    };
    let (elements, cardinality, length, pipeline) = if v.modular {
        let a = assemble(&family, opts.cap).map_err(annotate)?;
        let (c, l, st) = (a.cardinality(), a.length(), a.stats.clone());
        (Elements::Closure(Box::new(a)), c, l, Some(st))
    } else {
        let rec = family.reconstruct(opts.cap).map_err(annotate)?;
        let (c, l) = (rec.len() as u128, rec.length());
        (Elements::Tuples(rec), c, l, None)
    };
    let free = FreeLattice {
        poset: p.clone(),
        variety: v.name.clone(),
        factors,
        family,
        stats: FreeStats {
            cardinality,
            s,
            t,
            length,
            pipeline,
        },
        elements,
    };
    if opts.oracle {
        oracle_check(&free, opts.cap)?;
    }
    Ok(free)
}

/// Compares the result with the join-closure of the σ'-images and, for the
/// non-modular path, with the ∨-ideal count of the scaffolding.
fn oracle_check(free: &FreeLattice, cap: Option<usize>) -> Result<()> {
    let reference = free.family.reconstruct(cap)?;
    let got = free.tuples();
    if got != reference.sorted_elements() {
        return Err(Error::OracleMismatch(format!(
            "{} elements computed, join-closure has {}",
            got.len(),
            reference.len()
        )));
    }
    for k in 0..free.poset.len() {
        if reference.position(&free.generator(k)).is_none() {
            return Err(Error::OracleMismatch(format!("generator `{}` missing", free.poset.name(k))));
        }
    }
    let scaffolding = free.family.scaffolding_carrier();
    if scaffolding.len() <= 24 {
        let ideals = free.family.scaffolding().vee_ideals().count();
        if ideals != reference.len() as u128 {
            return Err(Error::OracleMismatch(format!(
                "{ideals} ∨-ideals of the scaffolding, {} elements",
                reference.len()
            )));
        }
    }
    Ok(())
}

/// `FM(P)` is finite iff `P` has no subposet `1+1+1+1` or `1+2+2`.
pub fn fm_finite(p: &Poset) -> bool {
    let four = Poset::sum(&[1, 1, 1, 1]).unwrap();
    let one_two_two = Poset::sum(&[1, 2, 2]).unwrap();
    !p.contains_subposet(&four) && !p.contains_subposet(&one_two_two)
}

/// The free lattice over `P` is finite iff `P` has no subposet `1+1+1`, `2+2` or `1+4`.
pub fn fl_finite(p: &Poset) -> bool {
    [&[1, 1, 1][..], &[2, 2], &[1, 4]]
        .iter()
        .all(|parts| !p.contains_subposet(&Poset::sum(parts).unwrap()))
}
