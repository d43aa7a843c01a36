//! Implications over a finite ground set and the closure systems they define.
//!
//! [`RowFamily`] enumerates all closed sets as a list of disjoint
//! [`MultiValuedRow`]s; [`all_closed_naive`] is the plain reference.

mod engine;
mod row;

pub use engine::RowFamily;
pub use row::{Cell, MultiValuedRow, RowMembers, Symbol};

use fixedbitset::FixedBitSet;

/// `premise -> conclusion` over the ground set `0..width`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Implication {
    pub premise: FixedBitSet,
    pub conclusion: FixedBitSet,
}

impl Implication {
    pub fn new(width: usize, premise: &[usize], conclusion: &[usize]) -> Self {
        let mut p = FixedBitSet::with_capacity(width);
        let mut c = FixedBitSet::with_capacity(width);
        p.extend(premise.iter().copied());
        c.extend(conclusion.iter().copied());
        Implication { premise: p, conclusion: c }
    }

    pub fn premise_vec(&self) -> Vec<usize> {
        self.premise.ones().collect()
    }

    pub fn conclusion_vec(&self) -> Vec<usize> {
        self.conclusion.ones().collect()
    }

    /// `X` respects the implication when `premise ⊆ X` implies `conclusion ⊆ X`.
    pub fn respects(&self, set: &FixedBitSet) -> bool {
        !self.premise.is_subset(set) || self.conclusion.is_subset(set)
    }
}

/// Smallest superset of `set` closed under every implication.
pub fn close(sigma: &[Implication], set: &FixedBitSet) -> FixedBitSet {
    let mut out = set.clone();
    loop {
        let mut changed = false;
        for imp in sigma {
            if imp.premise.is_subset(&out) && !imp.conclusion.is_subset(&out) {
                out.union_with(&imp.conclusion);
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

pub fn is_closed(sigma: &[Implication], set: &FixedBitSet) -> bool {
    sigma.iter().all(|imp| imp.respects(set))
}

/// Every closed subset of `0..width`, in increasing bitmask order. Exponential;
/// intended as a reference for small ground sets.
pub fn all_closed_naive(width: usize, sigma: &[Implication]) -> Vec<FixedBitSet> {
    assert!(width < 28, "naive enumeration limited to small ground sets");
    let masks: Vec<(u32, u32)> = sigma
        .iter()
        .map(|imp| (to_mask(&imp.premise), to_mask(&imp.conclusion)))
        .collect();
    (0u32..1 << width)
        .filter(|&x| masks.iter().all(|&(p, c)| x & p != p || x & c == c))
        .map(|x| {
            let mut set = FixedBitSet::with_capacity(width);
            set.extend((0..width).filter(|&i| x >> i & 1 == 1));
            set
        })
        .collect()
}

fn to_mask(set: &FixedBitSet) -> u32 {
    set.ones().fold(0, |m, i| m | 1 << i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_basics() {
        let sigma = vec![Implication::new(4, &[0], &[1]), Implication::new(4, &[1, 2], &[3])];
        let mut x = FixedBitSet::with_capacity(4);
        x.extend([0, 2]);
        let c = close(&sigma, &x);
        assert_eq!(c.ones().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(is_closed(&sigma, &c));
        assert!(!is_closed(&sigma, &x));
        // closed sets are closed under intersection
        let closed = all_closed_naive(4, &sigma);
        for a in &closed {
            for b in &closed {
                let mut m = a.clone();
                m.intersect_with(b);
                assert!(closed.contains(&m));
            }
        }
        assert_eq!(closed.len(), 10);
    }
}
