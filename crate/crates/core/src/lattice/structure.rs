//! Prime quotients, projectivity, sub-irreducible elements and lines.

use std::collections::BTreeSet;

use super::FiniteLattice;
use crate::error::{Error, Result};

/// A covering pair `bottom ≺ top`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeQuotient {
    pub top: usize,
    pub bottom: usize,
}

/// A maximal set of at least three join irreducibles with constant pairwise join.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    /// Sorted element indices.
    pub points: Vec<usize>,
    pub top: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl FiniteLattice {
    pub fn prime_quotients(&self) -> Vec<PrimeQuotient> {
        let mut out: Vec<PrimeQuotient> = (0..self.len())
            .flat_map(|v| self.lower_covers(v).iter().map(move |&w| PrimeQuotient { top: v, bottom: w }))
            .collect();
        out.sort();
        out
    }

    /// Partition of the prime quotients into projectivity classes: connected
    /// components of the relation "transposes up", where `v/w` transposes up to
    /// `v'/w'` when `v ∧ w' = w` and `v ∨ w' = v'`.
    pub fn projectivity_classes(&self) -> Vec<Vec<PrimeQuotient>> {
        let quotients = self.prime_quotients();
        let index_of = |q: PrimeQuotient| quotients.binary_search(&q).ok();
        let mut uf = UnionFind::new(quotients.len());
        for (i, q) in quotients.iter().enumerate() {
            for w2 in 0..self.len() {
                if self.meet(q.top, w2) != q.bottom {
                    continue;
                }
                let v2 = self.join(q.top, w2);
                if let Some(j) = index_of(PrimeQuotient { top: v2, bottom: w2 }) {
                    uf.union(i, j);
                }
            }
        }
        let mut classes: Vec<Vec<PrimeQuotient>> = Vec::new();
        let mut slot = vec![usize::MAX; quotients.len()];
        for (i, &q) in quotients.iter().enumerate() {
            let root = uf.find(i);
            if slot[root] == usize::MAX {
                slot[root] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[root]].push(q);
        }
        classes
    }

    /// Nonzero elements whose prime quotients `x/w` all lie in one projectivity class.
    pub fn sub_irreducibles(&self) -> Vec<usize> {
        let classes = self.projectivity_classes();
        let mut class_of = std::collections::HashMap::new();
        for (c, members) in classes.iter().enumerate() {
            for &q in members {
                class_of.insert(q, c);
            }
        }
        (0..self.len())
            .filter(|&x| x != self.bottom())
            .filter(|&x| {
                let ids: BTreeSet<usize> = self
                    .lower_covers(x)
                    .iter()
                    .map(|&w| class_of[&PrimeQuotient { top: x, bottom: w }])
                    .collect();
                ids.len() == 1
            })
            .collect()
    }

    /// Elements with at least three lower covers whose meet is covered by each of them.
    pub fn line_tops(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| {
                let lower = self.lower_covers(x);
                if lower.len() < 3 {
                    return false;
                }
                let m = self.meet_all(lower.iter().copied());
                lower.iter().all(|&xi| self.lower_covers(xi).contains(&m))
            })
            .collect()
    }

    /// All lines, sorted by top and then by points.
    pub fn lines(&self) -> Vec<Line> {
        let joins = self.join_irreducibles();
        let mut out = Vec::new();
        for top in 0..self.len() {
            let candidates: Vec<usize> = joins.iter().copied().filter(|&p| self.lt(p, top)).collect();
            if candidates.len() < 3 {
                continue;
            }
            let adjacent = |p: usize, q: usize| self.join(p, q) == top;
            let mut cliques = Vec::new();
            bron_kerbosch(&mut Vec::new(), candidates.clone(), Vec::new(), &adjacent, &mut cliques);
            for mut points in cliques.into_iter().filter(|c| c.len() >= 3) {
                points.sort_unstable();
                out.push(Line { points, top });
            }
        }
        out.sort();
        out
    }

    /// One line per line top: the lexicographically least among those with that top.
    pub fn base_of_lines(&self) -> Result<Vec<Line>> {
        if !self.is_modular() {
            return Err(Error::NotModular);
        }
        let mut base: Vec<Line> = Vec::new();
        for line in self.lines() {
            if base.last().map(|l| l.top) != Some(line.top) {
                base.push(line);
            }
        }
        Ok(base)
    }

    /// `K∨(L) = J(L) ∪ {line tops}` for modular `L`, sorted.
    pub fn join_core_modular(&self) -> Result<Vec<usize>> {
        if !self.is_modular() {
            return Err(Error::NotModular);
        }
        let mut core: BTreeSet<usize> = self.join_irreducibles().into_iter().collect();
        core.extend(self.line_tops());
        Ok(core.into_iter().collect())
    }

    /// Connected components of the hypergraph on `J(L)` whose edges are the given lines.
    pub fn line_components(&self, lines: &[Line]) -> usize {
        let joins = self.join_irreducibles();
        let mut uf = UnionFind::new(self.len());
        for line in lines {
            for w in line.points.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        joins.iter().map(|&p| uf.find(p)).collect::<BTreeSet<_>>().len()
    }
}

fn bron_kerbosch(
    clique: &mut Vec<usize>,
    mut candidates: Vec<usize>,
    mut excluded: Vec<usize>,
    adjacent: &dyn Fn(usize, usize) -> bool,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(clique.clone());
        }
        return;
    }
    while let Some(v) = candidates.pop() {
        clique.push(v);
        let next_c = candidates.iter().copied().filter(|&u| adjacent(u, v)).collect();
        let next_x = excluded.iter().copied().filter(|&u| adjacent(u, v)).collect();
        bron_kerbosch(clique, next_c, next_x, adjacent, out);
        clique.pop();
        excluded.push(v);
    }
}
