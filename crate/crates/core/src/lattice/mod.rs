//! Finite bounded lattices stored with explicit join and meet tables.

mod io;
mod structure;

pub use io::LatticeJson;
pub use structure::{Line, PrimeQuotient};

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: usize,
    top: usize,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
}

impl FiniteLattice {
    /// Builds a lattice from its Hasse diagram.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let poset = Poset::from_covers(names, covers)?;
        Self::from_poset(&poset)
    }

    /// Builds a lattice from any order relation; fails if some pair lacks a join or meet.
    pub fn from_poset(poset: &Poset) -> Result<Self> {
        let n = poset.len();
        let ups: Vec<FixedBitSet> = (0..n).map(|x| poset.up_set(x).clone()).collect();
        Self::from_up_sets(poset.names().to_vec(), &ups)
    }

    /// Builds a lattice from reflexive up-sets `ups[x] = {y : x <= y}`.
    pub fn from_up_sets(names: Vec<String>, ups: &[FixedBitSet]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a lattice needs at least one element".into()));
        }
        // renumber along a linear extension so that the first element of any
        // set of upper bounds is its only candidate for a least upper bound
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (n - ups[x].count_ones(..), x));
        let mut pos = vec![0usize; n];
        for (p, &x) in order.iter().enumerate() {
            pos[x] = p;
        }
        let mut up_p = vec![FixedBitSet::with_capacity(n); n];
        let mut down_p = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            for y in ups[x].ones() {
                up_p[pos[x]].insert(pos[y]);
                down_p[pos[y]].insert(pos[x]);
            }
        }
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        let mut scratch = FixedBitSet::with_capacity(n);
        for a in 0..n {
            for b in a..n {
                let (xa, xb) = (order[a], order[b]);
                scratch.clone_from(&up_p[a]);
                scratch.intersect_with(&up_p[b]);
                let lub = scratch
                    .ones()
                    .next()
                    .filter(|&c| scratch.is_subset(&up_p[c]))
                    .ok_or_else(|| {
                        Error::NotALattice(names[xa].clone(), names[xb].clone(), "least upper bound")
                    })?;
                scratch.clone_from(&down_p[a]);
                scratch.intersect_with(&down_p[b]);
                let glb = scratch
                    .ones()
                    .next_back()
                    .filter(|&c| scratch.is_subset(&down_p[c]))
                    .ok_or_else(|| {
                        Error::NotALattice(
                            names[xa].clone(),
                            names[xb].clone(),
                            "greatest lower bound",
                        )
                    })?;
                let (lub, glb) = (order[lub] as u32, order[glb] as u32);
                join[xa * n + xb] = lub;
                join[xb * n + xa] = lub;
                meet[xa * n + xb] = glb;
                meet[xb * n + xa] = glb;
            }
        }
        Ok(Self::from_tables(names, join, meet))
    }

    /// Assembles a lattice from tables already known to be correct.
    pub(crate) fn from_tables(names: Vec<String>, join: Vec<u32>, meet: Vec<u32>) -> Self {
        let n = names.len();
        let mut bottom = 0;
        let mut top = 0;
        for x in 1..n {
            bottom = meet[bottom * n + x] as usize;
            top = join[top * n + x] as usize;
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            for y in 0..n {
                if y != x && join[y * n + x] as usize == x {
                    down[x].insert(y);
                }
            }
        }
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        let mut shadow = FixedBitSet::with_capacity(n);
        for x in 0..n {
            shadow.clear();
            for y in down[x].ones() {
                shadow.union_with(&down[y]);
            }
            for y in down[x].difference(&shadow) {
                lower[x].push(y);
                upper[y].push(x);
            }
        }
        FiniteLattice {
            names,
            join,
            meet,
            bottom,
            top,
            lower,
            upper,
        }
    }

    /// The two-element chain `0 < 1`.
    pub fn d2() -> Self {
        Self::chain(2)
    }

    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        let names = if n == 2 {
            vec!["0".to_string(), "1".to_string()]
        } else {
            (0..n).map(|i| i.to_string()).collect()
        };
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(names, &covers).expect("chains are lattices")
    }

    /// The diamond: `0 < a, b, c < 1`.
    pub fn m3() -> Self {
        let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_covers(names, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .expect("M3 is a lattice")
    }

    /// The pentagon: `0 < a < b < 1` and `0 < c < 1`.
    pub fn n5() -> Self {
        let names = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_covers(names, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
            .expect("N5 is a lattice")
    }

    /// Looks up a built-in lattice by name (`d2`, `m3`, `n5`, `chainN`).
    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "d2" | "2" => Some(Self::d2()),
            "m3" => Some(Self::m3()),
            "n5" => Some(Self::n5()),
            other => other
                .strip_prefix("chain")
                .and_then(|k| k.parse().ok())
                .filter(|&k: &usize| k >= 1)
                .map(Self::chain),
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
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.join(a, b) == b
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.lower[x].iter().map(move |&y| (y, x)))
            .collect()
    }

    pub fn is_join_irreducible(&self, x: usize) -> bool {
        self.lower[x].len() == 1
    }

    /// `J(L)`: nonzero elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.is_join_irreducible(x)).collect()
    }

    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.upper[x].len() == 1).collect()
    }

    /// `A(L)`: the upper covers of the bottom.
    pub fn atoms(&self) -> Vec<usize> {
        self.upper[self.bottom].clone()
    }

    /// Join irreducibles below `x`.
    pub fn join_irreducibles_below(&self, x: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| self.is_join_irreducible(p) && self.leq(p, x))
            .collect()
    }

    /// Length of the longest chain, counted in covers.
    pub fn length(&self) -> usize {
        self.heights()[self.top]
    }

    /// Longest-chain distance from the bottom, per element.
    pub fn heights(&self) -> Vec<usize> {
        let below: Vec<usize> = (0..self.len())
            .map(|x| (0..self.len()).filter(|&y| self.leq(y, x)).count())
            .collect();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| below[x]);
        let mut height = vec![0usize; self.len()];
        for x in order {
            height[x] = self.lower[x].iter().map(|&y| height[y] + 1).max().unwrap_or(0);
        }
        height
    }

    /// Same lattice with new element names.
    pub fn renamed(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len(), "one name per element");
        self.names = names;
        self
    }

    /// Builds the lattice on a set of tuples closed under componentwise join and
    /// meet in the product of `factors`. Names are `(x1,x2,...)`.
    pub fn from_tuples(factors: &[FiniteLattice], tuples: &[Vec<u16>]) -> Result<Self> {
        let n = tuples.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a lattice needs at least one element".into()));
        }
        let index: std::collections::HashMap<&[u16], u32> = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i as u32))
            .collect();
        if index.len() != n {
            return Err(Error::InvalidArgument("duplicate tuples".into()));
        }
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        let mut scratch = vec![0u16; factors.len()];
        for a in 0..n {
            for b in a..n {
                for (k, f) in factors.iter().enumerate() {
                    scratch[k] = f.join(tuples[a][k] as usize, tuples[b][k] as usize) as u16;
                }
                let j = *index
                    .get(scratch.as_slice())
                    .ok_or_else(|| Error::NotALattice(format!("#{a}"), format!("#{b}"), "join in the set"))?;
                for (k, f) in factors.iter().enumerate() {
                    scratch[k] = f.meet(tuples[a][k] as usize, tuples[b][k] as usize) as u16;
                }
                let m = *index
                    .get(scratch.as_slice())
                    .ok_or_else(|| Error::NotALattice(format!("#{a}"), format!("#{b}"), "meet in the set"))?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let names = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&x, f)| f.name(x as usize)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Ok(Self::from_tables(names, join, meet))
    }

    pub fn to_poset(&self) -> Poset {
        let covers = self.covers();
        Poset::from_covers(self.names.clone(), &covers).expect("lattice order is a poset")
    }

    /// Checks `x <= z  =>  x ∨ (y ∧ z) = (x ∨ y) ∧ z` over all triples.
    pub fn is_modular(&self) -> bool {
        let n = self.len();
        for x in 0..n {
            for z in 0..n {
                if !self.leq(x, z) {
                    continue;
                }
                for y in 0..n {
                    if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` over all triples.
    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in y..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether some injective map from `pattern` preserves joins and meets.
    pub fn has_sublattice(&self, pattern: &FiniteLattice) -> bool {
        let mut assignment = Vec::with_capacity(pattern.len());
        self.sublattice_rec(pattern, &mut assignment)
    }

    fn sublattice_rec(&self, pattern: &FiniteLattice, assignment: &mut Vec<usize>) -> bool {
        let k = assignment.len();
        if k == pattern.len() {
            return true;
        }
        for cand in 0..self.len() {
            if assignment.contains(&cand) {
                continue;
            }
            let ok = (0..k).all(|i| {
                let (pj, pm) = (pattern.join(i, k), pattern.meet(i, k));
                let (hj, hm) = (self.join(assignment[i], cand), self.meet(assignment[i], cand));
                (pj >= k || assignment[pj] == hj)
                    && (pm >= k || assignment[pm] == hm)
                    && (pj != k || hj == cand)
                    && (pm != k || hm == cand)
            });
            if !ok {
                continue;
            }
            assignment.push(cand);
            // joins and meets landing on later pattern indices are checked when those are placed
            if self.sublattice_rec(pattern, assignment) && self.embedding_closed(pattern, assignment) {
                assignment.pop();
                return true;
            }
            assignment.pop();
        }
        false
    }

    fn embedding_closed(&self, pattern: &FiniteLattice, assignment: &[usize]) -> bool {
        if assignment.len() < pattern.len() {
            return true;
        }
        (0..pattern.len()).all(|i| {
            (0..pattern.len()).all(|j| {
                assignment[pattern.join(i, j)] == self.join(assignment[i], assignment[j])
                    && assignment[pattern.meet(i, j)] == self.meet(assignment[i], assignment[j])
            })
        })
    }

    /// Least subset containing `seed` that is closed under binary joins and meets.
    pub fn sublattice_generated(&self, seed: &[usize]) -> Vec<usize> {
        let mut members: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.len()];
        for &s in seed {
            if !seen[s] {
                seen[s] = true;
                members.push(s);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            let mut j = 0;
            while j <= i {
                let y = members[j];
                for z in [self.join(x, y), self.meet(x, y)] {
                    if !seen[z] {
                        seen[z] = true;
                        members.push(z);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// All lattice automorphisms as permutations `perm[x] = image of x`.
    pub fn automorphism_group(&self) -> Vec<Vec<usize>> {
        self.to_poset().automorphisms()
    }

    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        self.len() == other.len() && self.to_poset().is_isomorphic(&other.to_poset())
    }

    /// Direct product with componentwise order; names look like `(a,b)`.
    pub fn direct_product(factors: &[&FiniteLattice]) -> FiniteLattice {
        let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let total: usize = sizes.iter().product();
        let decode = |mut idx: usize| -> Vec<usize> {
            let mut coords = vec![0; sizes.len()];
            for k in (0..sizes.len()).rev() {
                coords[k] = idx % sizes[k];
                idx /= sizes[k];
            }
            coords
        };
        let encode = |coords: &[usize]| coords.iter().zip(&sizes).fold(0, |acc, (&c, &s)| acc * s + c);
        let tuples: Vec<Vec<usize>> = (0..total).map(decode).collect();
        let names = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&c, f)| f.name(c)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut join = vec![0u32; total * total];
        let mut meet = vec![0u32; total * total];
        let mut scratch = vec![0usize; sizes.len()];
        for a in 0..total {
            for b in 0..total {
                for k in 0..sizes.len() {
                    scratch[k] = factors[k].join(tuples[a][k], tuples[b][k]);
                }
                join[a * total + b] = encode(&scratch) as u32;
                for k in 0..sizes.len() {
                    scratch[k] = factors[k].meet(tuples[a][k], tuples[b][k]);
                }
                meet[a * total + b] = encode(&scratch) as u32;
            }
        }
        FiniteLattice::from_tables(names, join, meet)
    }

    /// The sublattice on `members` (which must be closed under join and meet).
    pub fn restrict(&self, members: &[usize]) -> Result<FiniteLattice> {
        let mut index = vec![usize::MAX; self.len()];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let k = members.len();
        let mut join = vec![0u32; k * k];
        let mut meet = vec![0u32; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                let (jn, mt) = (index[self.join(a, b)], index[self.meet(a, b)]);
                if jn == usize::MAX || mt == usize::MAX {
                    return Err(Error::InvalidArgument(format!(
                        "subset not closed under join/meet at {} and {}",
                        self.names[a], self.names[b]
                    )));
                }
                join[i * k + j] = jn as u32;
                meet[i * k + j] = mt as u32;
            }
        }
        let names = members.iter().map(|&m| self.names[m].clone()).collect();
        Ok(FiniteLattice::from_tables(names, join, meet))
    }

    /// Every element equals the join of the join irreducibles below it.
    pub fn is_join_generated_by_irreducibles(&self) -> bool {
        (0..self.len()).all(|x| self.join_all(self.join_irreducibles_below(x)) == x)
    }

    /// Distinct elements as a set, handy for comparisons in tests.
    pub fn element_set(&self) -> HashSet<String> {
        self.names.iter().cloned().collect()
    }
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteLattice({} elements; covers", self.len())?;
        for (a, b) in self.covers() {
            write!(f, " {}<{}", self.names[a], self.names[b])?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn lattice_axioms_hold(l: &FiniteLattice) {
        let n = l.len();
        for x in 0..n {
            assert_eq!(l.join(x, x), x);
            assert_eq!(l.meet(x, x), x);
            for y in 0..n {
                assert_eq!(l.join(x, y), l.join(y, x));
                assert_eq!(l.meet(x, y), l.meet(y, x));
                assert_eq!(l.join(x, l.meet(x, y)), x);
                assert_eq!(l.meet(x, l.join(x, y)), x);
                assert_eq!(l.leq(x, y), l.meet(x, y) == x);
                for z in 0..n {
                    assert_eq!(l.join(x, l.join(y, z)), l.join(l.join(x, y), z));
                    assert_eq!(l.meet(x, l.meet(y, z)), l.meet(l.meet(x, y), z));
                }
            }
        }
    }

    #[test]
    fn builtins_are_lattices() {
        for l in [FiniteLattice::d2(), FiniteLattice::m3(), FiniteLattice::n5(), FiniteLattice::chain(4)] {
            lattice_axioms_hold(&l);
            assert!(l.is_join_generated_by_irreducibles());
        }
    }

    #[test]
    fn m3_and_n5_shapes() {
        let m3 = FiniteLattice::m3();
        assert_eq!(m3.len(), 5);
        assert_eq!(m3.join_irreducibles(), vec![1, 2, 3]);
        assert_eq!(m3.atoms(), vec![1, 2, 3]);
        let n5 = FiniteLattice::n5();
        assert_eq!(n5.join_irreducibles().len(), 3);
        let chains_of_two: Vec<usize> = n5.atoms().into_iter().filter(|&a| n5.upper_covers(a) != [n5.top()]).collect();
        assert_eq!(chains_of_two.len(), 1);
    }

    #[test]
    fn rejects_non_lattices() {
        let err = FiniteLattice::from_covers(names(&["0", "a", "b"]), &[(0, 1), (0, 2)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice(_, _, "least upper bound")));
        let err = FiniteLattice::from_covers(names(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::Cycle(_)));
        // two maximal elements above two minimal ones: no lub for the bottom pair
        let bowtie = FiniteLattice::from_covers(
            names(&["0", "a", "b", "c", "d", "1"]),
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        );
        assert!(bowtie.is_err());
    }

    #[test]
    fn modularity_and_distributivity() {
        let m3 = FiniteLattice::m3();
        assert!(m3.is_modular() && !m3.is_distributive());
        let n5 = FiniteLattice::n5();
        assert!(!n5.is_modular() && !n5.is_distributive());
        assert!(FiniteLattice::chain(5).is_distributive());
        let m3m3 = FiniteLattice::direct_product(&[&m3, &m3]);
        assert!(m3m3.is_modular());
    }

    #[test]
    fn modularity_agrees_with_pentagon_search() {
        let m3 = FiniteLattice::m3();
        let n5 = FiniteLattice::n5();
        let d2 = FiniteLattice::d2();
        let candidates = [
            m3.clone(),
            n5.clone(),
            FiniteLattice::direct_product(&[&n5, &d2]),
            FiniteLattice::direct_product(&[&m3, &d2]),
            FiniteLattice::direct_product(&[&d2, &d2, &d2]),
        ];
        for l in candidates {
            assert_eq!(l.is_modular(), !l.has_sublattice(&n5), "{l:?}");
            assert_eq!(l.is_distributive(), l.is_modular() && !l.has_sublattice(&m3), "{l:?}");
        }
    }

    #[test]
    fn generated_sublattices() {
        let m3 = FiniteLattice::m3();
        assert_eq!(m3.sublattice_generated(&[1, 2]), vec![0, 1, 2, 4]);
        assert_eq!(m3.sublattice_generated(&[1, 2, 3]), vec![0, 1, 2, 3, 4]);
        let d2 = FiniteLattice::d2();
        assert_eq!(d2.sublattice_generated(&[1]), vec![1]);
    }

    #[test]
    fn automorphisms_and_products() {
        assert_eq!(FiniteLattice::m3().automorphism_group().len(), 6);
        assert_eq!(FiniteLattice::d2().automorphism_group().len(), 1);
        let m3 = FiniteLattice::m3();
        let p = FiniteLattice::direct_product(&[&m3, &m3]);
        assert_eq!(p.len(), 25);
        lattice_axioms_hold(&FiniteLattice::direct_product(&[&FiniteLattice::d2(), &FiniteLattice::n5()]));
    }

    #[test]
    fn length_of_products() {
        let m3 = FiniteLattice::m3();
        let d2 = FiniteLattice::d2();
        assert_eq!(FiniteLattice::direct_product(&[&m3, &d2, &d2]).length(), 4);
        assert_eq!(FiniteLattice::n5().length(), 3);
    }

    #[test]
    fn builtin_lookup() {
        assert_eq!(FiniteLattice::builtin("M3").unwrap().len(), 5);
        assert_eq!(FiniteLattice::builtin("chain7").unwrap().len(), 7);
        assert!(FiniteLattice::builtin("chain0").is_none());
        assert!(FiniteLattice::builtin("k4").is_none());
    }
}
