//! Finite posets: construction, ideals, induced subposets, automorphisms and
//! enumeration up to isomorphism.
//!
//! Elements carry opaque string names; internal indices follow input order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size accepted by [`enumerate_posets`].
pub const MAX_ENUMERATION_SIZE: usize = 7;

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    /// `down[x]` holds every `y <= x`, including `x`.
    down: Vec<FixedBitSet>,
    /// `up[x]` holds every `y >= x`, including `x`.
    up: Vec<FixedBitSet>,
}

/// Wire format: `{"elements": [...], "covers": [[lower, upper], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

impl Poset {
    /// Builds a poset from cover pairs `(a, b)` meaning `a` is covered by `b`.
    ///
    /// Cycles and pairs that skip an intermediate element are rejected.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!("cover ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
            if !succ[a].contains(&b) {
                succ[a].push(b);
            }
        }
        let up = reachability(&succ, &names)?;
        let poset = Self::from_up_sets(names, up);
        // a cover must not be implied through a third element
        for &(a, b) in covers {
            for c in poset.up[a].ones() {
                if c != a && c != b && poset.lt(c, b) {
                    return Err(Error::NotACover {
                        lower: poset.names[a].clone(),
                        upper: poset.names[b].clone(),
                        via: poset.names[c].clone(),
                    });
                }
            }
        }
        Ok(poset)
    }

    /// Builds a poset from an arbitrary relation whose reflexive-transitive closure
    /// is taken; only cycles are rejected.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a == b {
                continue;
            }
            succ[a].push(b);
        }
        let up = reachability(&succ, &names)?;
        Ok(Self::from_up_sets(names, up))
    }

    fn from_up_sets(names: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let n = names.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, ups) in up.iter().enumerate() {
            for y in ups.ones() {
                down[y].insert(x);
            }
        }
        Poset { names, down, up }
    }

    /// Builds a poset from a strict-order matrix `lt[i][j]`, trusted to be a strict order.
    pub(crate) fn from_strict_matrix(names: Vec<String>, lt: &[Vec<bool>]) -> Self {
        let n = names.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in lt.iter().enumerate() {
            up[i].insert(i);
            for (j, &below) in row.iter().enumerate() {
                if below {
                    up[i].insert(j);
                }
            }
        }
        Self::from_up_sets(names, up)
    }

    pub fn chain(n: usize) -> Self {
        Self::sum(&[n]).expect("chain of positive length")
    }

    pub fn antichain(n: usize) -> Self {
        Self::sum(&vec![1; n]).expect("antichain of positive size")
    }

    /// Disjoint union of chains, e.g. `[1, 1, 4]` is `1+1+4`.
    pub fn sum(parts: &[usize]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty list of chain lengths".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("chain lengths must be positive".into()));
        }
        let total: usize = parts.iter().sum();
        let names = default_names(total);
        let mut covers = Vec::new();
        let mut start = 0;
        for &len in parts {
            for k in 1..len {
                covers.push((start + k - 1, start + k));
            }
            start += len;
        }
        Self::from_covers(names, &covers)
    }

    /// Parses the one-line form `a<b, a<c; d`. Pieces are separated by `,` or `;`,
    /// and each piece is a single element or a chain `x<y<z` of covers.
    pub fn parse_dsl(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut covers = Vec::new();
        let mut intern = |name: &str, names: &mut Vec<String>| -> Result<usize> {
            let name = name.trim();
            if name.is_empty() {
                return Err(Error::Parse(format!("empty element name in `{text}`")));
            }
            if name.contains(|c: char| c.is_whitespace() || c == '<' || c == '>') {
                return Err(Error::Parse(format!("bad element name `{name}`")));
            }
            Ok(*index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            }))
        };
        for piece in text.split([',', ';']) {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let chain: Vec<&str> = piece.split('<').collect();
            let mut prev = None;
            for part in chain {
                let id = intern(part, &mut names)?;
                if let Some(p) = prev {
                    covers.push((p, id));
                }
                prev = Some(id);
            }
        }
        if names.is_empty() {
            return Err(Error::Parse("poset has no elements".into()));
        }
        Self::from_covers(names, &covers)
    }

    /// Inverse of [`Poset::parse_dsl`]: covers first, then isolated elements.
    pub fn to_dsl(&self) -> String {
        let covers = self.covers();
        let out: Vec<String> = covers
            .iter()
            .map(|&(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        let isolated: Vec<&str> = (0..self.len())
            .filter(|&x| self.down[x].count_ones(..) == 1 && self.up[x].count_ones(..) == 1)
            .map(|x| self.names[x].as_str())
            .collect();
        if out.is_empty() {
            return isolated.join(";");
        }
        let mut s = out.join(", ");
        for name in isolated {
            s.push_str("; ");
            s.push_str(name);
        }
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: PosetJson = serde_json::from_str(text)?;
        Self::from_json(&raw)
    }

    pub fn from_json(raw: &PosetJson) -> Result<Self> {
        let index: HashMap<&str, usize> = raw
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut covers = Vec::with_capacity(raw.covers.len());
        for [a, b] in &raw.covers {
            let a = *index.get(a.as_str()).ok_or_else(|| Error::UnknownElement(a.clone()))?;
            let b = *index.get(b.as_str()).ok_or_else(|| Error::UnknownElement(b.clone()))?;
            covers.push((a, b));
        }
        Self::from_covers(raw.elements.clone(), &covers)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.names.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(a, b)| [self.names[a].clone(), self.names[b].clone()])
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.up[a].contains(b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// Cover pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].ones() {
                if b != a && self.is_cover(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn is_cover(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !self.up[a].ones().any(|c| c != a && c != b && self.lt(c, b))
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.down[x].ones().filter(|&y| y != x && self.is_cover(y, x)).collect()
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.up[x].ones().filter(|&y| y != x && self.is_cover(x, y)).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.down[x].count_ones(..) == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.up[x].count_ones(..) == 1).collect()
    }

    /// Elements sorted so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(..), x));
        order
    }

    /// Height of each element: the longest chain ending in it, counted in covers.
    pub fn levels(&self) -> Vec<usize> {
        let mut level = vec![0; self.len()];
        for x in self.linear_extension() {
            level[x] = self
                .down[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| level[y] + 1)
                .max()
                .unwrap_or(0);
        }
        level
    }

    pub fn is_down_set(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.down[x].is_subset(set))
    }

    pub fn is_up_set(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.up[x].is_subset(set))
    }

    /// All down-closed subsets, including the empty set and the whole poset.
    pub fn order_ideals(&self) -> Vec<FixedBitSet> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut current = FixedBitSet::with_capacity(self.len());
        self.ideals_rec(&order, 0, &mut current, &mut out);
        out
    }

    fn ideals_rec(
        &self,
        order: &[usize],
        k: usize,
        current: &mut FixedBitSet,
        out: &mut Vec<FixedBitSet>,
    ) {
        if k == order.len() {
            out.push(current.clone());
            return;
        }
        let x = order[k];
        self.ideals_rec(order, k + 1, current, out);
        let lower_present = self.down[x].ones().all(|y| y == x || current.contains(y));
        if lower_present {
            current.insert(x);
            self.ideals_rec(order, k + 1, current, out);
            current.set(x, false);
        }
    }

    /// All up-closed subsets (order filters), including the empty set.
    pub fn order_filters(&self) -> Vec<FixedBitSet> {
        self.order_ideals()
            .into_iter()
            .map(|mut ideal| {
                ideal.toggle_range(..);
                ideal
            })
            .collect()
    }

    /// Induced subposet on `elements`, in the given order.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let names = elements.iter().map(|&x| self.names[x].clone()).collect();
        let lt: Vec<Vec<bool>> = elements
            .iter()
            .map(|&a| elements.iter().map(|&b| self.lt(a, b)).collect())
            .collect();
        Self::from_strict_matrix(names, &lt)
    }

    pub fn dual(&self) -> Poset {
        Poset {
            names: self.names.clone(),
            down: self.up.clone(),
            up: self.down.clone(),
        }
    }

    /// Whether some injection of `pattern` into `self` preserves and reflects order.
    pub fn contains_subposet(&self, pattern: &Poset) -> bool {
        if pattern.len() > self.len() {
            return false;
        }
        let mut assignment = Vec::with_capacity(pattern.len());
        let mut used = vec![false; self.len()];
        embed_rec(pattern, self, &mut assignment, &mut used, &mut |_| true)
    }

    /// All order automorphisms as permutations `perm[x] = image of x`.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut assignment = Vec::with_capacity(self.len());
        let mut used = vec![false; self.len()];
        embed_rec(self, self, &mut assignment, &mut used, &mut |perm| {
            out.push(perm.to_vec());
            false
        });
        out
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.len() <= 8 {
            return self.canonical_code() == other.canonical_code();
        }
        let mut assignment = Vec::with_capacity(self.len());
        let mut used = vec![false; other.len()];
        embed_rec(self, other, &mut assignment, &mut used, &mut |_| true)
    }

    /// Canonical encoding of the strict order for posets with at most 8 elements.
    ///
    /// Elements are first sorted by (down-degree, up-degree, level); the code is the
    /// minimal adjacency bit string over all permutations that respect that sorting.
    pub fn canonical_code(&self) -> u64 {
        self.canonical_form().0
    }

    /// Canonical code together with the element order realising it.
    pub fn canonical_form(&self) -> (u64, Vec<usize>) {
        let n = self.len();
        assert!(n <= 8, "canonical codes are limited to 8 elements");
        let levels = self.levels();
        let key = |x: usize| {
            (
                self.down[x].count_ones(..),
                self.up[x].count_ones(..),
                levels[x],
            )
        };
        let mut sorted: Vec<usize> = (0..n).collect();
        sorted.sort_by_key(|&x| key(x));
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for &x in &sorted {
            match cells.last_mut() {
                Some(cell) if key(cell[0]) == key(x) => cell.push(x),
                _ => cells.push(vec![x]),
            }
        }
        let mut best = (u64::MAX, Vec::new());
        let mut placement = Vec::with_capacity(n);
        self.canonical_rec(&cells, 0, &mut placement, &mut best);
        best
    }

    fn canonical_rec(
        &self,
        cells: &[Vec<usize>],
        cell: usize,
        placement: &mut Vec<usize>,
        best: &mut (u64, Vec<usize>),
    ) {
        if cell == cells.len() {
            let n = placement.len();
            let mut code = 0u64;
            for p in 0..n {
                for q in 0..n {
                    if self.lt(placement[p], placement[q]) {
                        code |= 1 << (p * n + q);
                    }
                }
            }
            if code < best.0 {
                *best = (code, placement.clone());
            }
            return;
        }
        let members = &cells[cell];
        let mut perm = members.clone();
        permute_rec(&mut perm, 0, &mut |p| {
            let mark = placement.len();
            placement.extend_from_slice(p);
            self.canonical_rec(cells, cell + 1, placement, best);
            placement.truncate(mark);
        });
    }

    /// Relabels the poset into its canonical element order with names `a, b, c, ...`.
    pub fn canonical(&self) -> Poset {
        let (code, _) = self.canonical_form();
        from_code(code, self.len())
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({})", self.to_dsl())
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

fn reachability(succ: &[Vec<usize>], names: &[String]) -> Result<Vec<FixedBitSet>> {
    let n = succ.len();
    // Kahn's algorithm for a topological order; leftovers sit on a cycle.
    let mut indeg = vec![0usize; n];
    for s in succ {
        for &b in s {
            indeg[b] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(x) = stack.pop() {
        topo.push(x);
        for &b in &succ[x] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                stack.push(b);
            }
        }
    }
    if topo.len() < n {
        let bad = (0..n).find(|&x| indeg[x] > 0).unwrap();
        return Err(Error::Cycle(names[bad].clone()));
    }
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for &x in topo.iter().rev() {
        up[x].insert(x);
        for &b in &succ[x] {
            let (ux, ub) = if x < b {
                let (l, r) = up.split_at_mut(b);
                (&mut l[x], &r[0])
            } else {
                let (l, r) = up.split_at_mut(x);
                (&mut r[0], &l[b])
            };
            ux.union_with(ub);
        }
    }
    Ok(up)
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if n <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("p{i}")
            }
        })
        .collect()
}

fn permute_rec(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_rec(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Backtracking search for order embeddings `pattern -> host`. The callback
/// receives each complete embedding and returns `true` to stop the search.
fn embed_rec(
    pattern: &Poset,
    host: &Poset,
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = assignment.len();
    if k == pattern.len() {
        return found(assignment);
    }
    let same_size = pattern.len() == host.len();
    for cand in 0..host.len() {
        if used[cand] {
            continue;
        }
        if same_size
            && (pattern.down[k].count_ones(..) != host.down[cand].count_ones(..)
                || pattern.up[k].count_ones(..) != host.up[cand].count_ones(..))
        {
            continue;
        }
        let consistent = (0..k).all(|i| {
            let img = assignment[i];
            pattern.leq(i, k) == host.leq(img, cand) && pattern.leq(k, i) == host.leq(cand, img)
        });
        if !consistent {
            continue;
        }
        used[cand] = true;
        assignment.push(cand);
        let stop = embed_rec(pattern, host, assignment, used, found);
        assignment.pop();
        used[cand] = false;
        if stop {
            return true;
        }
    }
    false
}

fn from_code(code: u64, n: usize) -> Poset {
    let lt: Vec<Vec<bool>> = (0..n)
        .map(|p| (0..n).map(|q| code >> (p * n + q) & 1 == 1).collect())
        .collect();
    Poset::from_strict_matrix(default_names(n), &lt)
}

/// Representatives of all isomorphism classes of `n`-element posets, in
/// canonical-code order.
///
/// Every poset arises from a smaller one by adding a new maximal element above
/// an order ideal, so classes are grown one element at a time and deduplicated
/// by canonical code.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    if n == 0 || n > MAX_ENUMERATION_SIZE {
        return Err(Error::InvalidArgument(format!(
            "poset size {n} outside 1..={MAX_ENUMERATION_SIZE}"
        )));
    }
    let mut level: BTreeSet<u64> = BTreeSet::from([0u64]);
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let base = from_code(code, size - 1);
            for ideal in base.order_ideals() {
                let lt: Vec<Vec<bool>> = (0..size)
                    .map(|p| {
                        (0..size)
                            .map(|q| {
                                if p < size - 1 && q < size - 1 {
                                    base.lt(p, q)
                                } else if q == size - 1 && p < size - 1 {
                                    ideal.contains(p)
                                } else {
                                    false
                                }
                            })
                            .collect()
                    })
                    .collect();
                let grown = Poset::from_strict_matrix(default_names(size), &lt);
                next.insert(grown.canonical_code());
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(|code| from_code(code, n)).collect())
}

/// A map from a poset into an ordered target, given by element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    pub assignment: Vec<usize>,
}

impl MonotoneMap {
    pub fn is_monotone(&self, source: &Poset, target_leq: impl Fn(usize, usize) -> bool) -> bool {
        (0..source.len()).all(|a| {
            source.up_set(a).ones().all(|b| target_leq(self.assignment[a], self.assignment[b]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, items: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &i in items {
            s.insert(i);
        }
        s
    }

    #[test]
    fn sums_have_expected_shape() {
        let p = Poset::sum(&[1, 1, 1]).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.covers().is_empty());
        let p = Poset::sum(&[1, 1, 4]).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.covers().len(), 3);
        let p = Poset::sum(&[2, 2]).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.covers().len(), 2);
        assert!(Poset::sum(&[]).is_err());
        assert!(Poset::sum(&[2, 0]).is_err());
    }

    #[test]
    fn ideal_counts() {
        assert_eq!(Poset::antichain(3).order_ideals().len(), 8);
        assert_eq!(Poset::chain(2).order_ideals().len(), 3);
        assert_eq!(Poset::sum(&[1, 1, 4]).unwrap().order_ideals().len(), 20);
    }

    #[test]
    fn ideals_are_down_closed_and_distinct() {
        let p = Poset::parse_dsl("a<b, a<c, b<d, c<d; e").unwrap();
        let ideals = p.order_ideals();
        let mut brute = 0;
        for mask in 0u32..(1 << p.len()) {
            let s = set(p.len(), &(0..p.len()).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            if p.is_down_set(&s) {
                brute += 1;
                assert!(ideals.contains(&s));
            }
        }
        assert_eq!(ideals.len(), brute);
    }

    #[test]
    fn subposet_containment() {
        let p122 = Poset::sum(&[1, 2, 2]).unwrap();
        assert!(p122.contains_subposet(&Poset::sum(&[2, 2]).unwrap()));
        assert!(!Poset::chain(6).contains_subposet(&Poset::antichain(3)));
        assert!(Poset::sum(&[1, 1, 4])
            .unwrap()
            .contains_subposet(&Poset::sum(&[1, 4]).unwrap()));
        // induced, not just order-preserving: a 2-chain is not inside an antichain
        assert!(!Poset::antichain(4).contains_subposet(&Poset::chain(2)));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(Poset::antichain(3).automorphisms().len(), 6);
        assert_eq!(Poset::chain(4).automorphisms().len(), 1);
        assert_eq!(Poset::sum(&[1, 1, 2]).unwrap().automorphisms().len(), 2);
    }

    #[test]
    fn automorphisms_match_brute_force() {
        let p = Poset::parse_dsl("a<c, b<c, b<d; e").unwrap();
        let n = p.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut brute = 0;
        permute_rec(&mut perm, 0, &mut |pi| {
            if (0..n).all(|a| (0..n).all(|b| p.leq(a, b) == p.leq(pi[a], pi[b]))) {
                brute += 1;
            }
        });
        assert_eq!(p.automorphisms().len(), brute);
    }

    #[test]
    fn small_censuses() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
        assert!(enumerate_posets(0).is_err());
        assert!(enumerate_posets(8).is_err());
    }

    #[test]
    fn enumerated_posets_are_pairwise_non_isomorphic() {
        for n in 1..=4 {
            let all = enumerate_posets(n).unwrap();
            for i in 0..all.len() {
                for j in (i + 1)..all.len() {
                    let mut assignment = Vec::new();
                    let mut used = vec![false; n];
                    let iso = embed_rec(&all[i], &all[j], &mut assignment, &mut used, &mut |_| true);
                    assert!(!iso, "{} ~ {}", all[i], all[j]);
                }
            }
        }
    }

    #[test]
    fn canonical_code_is_relabelling_invariant() {
        let p = Poset::parse_dsl("x<y, z<y; w").unwrap();
        let q = Poset::parse_dsl("w; z<x, y<x").unwrap();
        assert_eq!(p.canonical_code(), q.canonical_code());
        assert!(p.is_isomorphic(&q));
        assert!(!p.is_isomorphic(&Poset::parse_dsl("x<y<z; w").unwrap()));
    }

    #[test]
    fn dsl_round_trip_and_errors() {
        let p = Poset::parse_dsl("a<b, a<c; d").unwrap();
        assert_eq!(p.names(), &["a", "b", "c", "d"]);
        assert!(p.lt(0, 1) && p.lt(0, 2) && !p.comparable(1, 2));
        assert_eq!(p.to_dsl(), "a<b, a<c; d");
        assert_eq!(Poset::parse_dsl("a;b;c").unwrap().to_dsl(), "a;b;c");
        assert!(matches!(Poset::parse_dsl("a<b<a"), Err(Error::Cycle(_))));
        assert!(matches!(
            Poset::parse_dsl("a<b<c, a<c"),
            Err(Error::NotACover { .. })
        ));
        assert!(Poset::parse_dsl(" ; ").is_err());
    }

    #[test]
    fn json_format() {
        let p = Poset::from_json_str(r#"{"elements":["x","y","z"],"covers":[["x","y"]]}"#).unwrap();
        assert!(p.lt(0, 1));
        let back = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(back, r#"{"elements":["x","y","z"],"covers":[["x","y"]]}"#);
        assert!(matches!(
            Poset::from_json_str(r#"{"elements":["x"],"covers":[["x","q"]]}"#),
            Err(Error::UnknownElement(_))
        ));
    }

    #[test]
    fn monotone_maps() {
        let p = Poset::chain(3);
        let ok = MonotoneMap { assignment: vec![0, 0, 1] };
        let bad = MonotoneMap { assignment: vec![1, 0, 1] };
        assert!(ok.is_monotone(&p, |a, b| a <= b));
        assert!(!bad.is_monotone(&p, |a, b| a <= b));
    }
}
