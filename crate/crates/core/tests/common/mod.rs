//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use varlat::implications::RowFamily;
use varlat::lattice::FiniteLattice;
use varlat::poset::Poset;

/// Every subset of `0..width` (as a bitmask) respecting all `premise -> conclusion`.
pub fn closed_sets(width: usize, sigma: &[(Vec<usize>, Vec<usize>)]) -> Vec<u32> {
    let mask = |s: &[usize]| s.iter().fold(0u32, |m, &i| m | 1 << i);
    let rules: Vec<(u32, u32)> = sigma.iter().map(|(a, b)| (mask(a), mask(b))).collect();
    (0..1u32 << width)
        .filter(|&x| rules.iter().all(|&(a, b)| x & a != a || x & b == b))
        .collect()
}

/// Members of a row family as sorted bitmasks, without deduplication.
pub fn family_masks(f: &RowFamily) -> Vec<u32> {
    let mut out: Vec<u32> = f
        .members()
        .map(|s| s.ones().fold(0u32, |m, i| m | 1 << i))
        .collect();
    out.sort_unstable();
    out
}

/// Sublattice of the product generated by `seed`, computed without the library closure.
pub fn sublattice(factors: &[FiniteLattice], seed: &[Vec<u16>]) -> BTreeSet<Vec<u16>> {
    let op = |a: &[u16], b: &[u16], join: bool| -> Vec<u16> {
        factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(f, (&x, &y))| {
                let (x, y) = (x as usize, y as usize);
                (if join { f.join(x, y) } else { f.meet(x, y) }) as u16
            })
            .collect()
    };
    let mut all: BTreeSet<Vec<u16>> = seed.iter().cloned().collect();
    loop {
        let items: Vec<Vec<u16>> = all.iter().cloned().collect();
        let before = all.len();
        for a in &items {
            for b in &items {
                all.insert(op(a, b, true));
                all.insert(op(a, b, false));
            }
        }
        if all.len() == before {
            return all;
        }
    }
}

/// Number of monotone Boolean functions of `n` variables, by trying all of them.
pub fn monotone_boolean_functions(n: usize) -> usize {
    let points = 1usize << n;
    (0u64..1 << points)
        .filter(|&f| {
            (0..points).all(|x| (0..n).all(|i| f >> x & 1 <= f >> (x | 1 << i) & 1))
        })
        .count()
}

// M3 as 0, a, b, c, 1
fn m3_join(x: u8, y: u8) -> u8 {
    match (x, y) {
        _ if x == y => x,
        (0, _) => y,
        (_, 0) => x,
        _ => 4,
    }
}

fn m3_meet(x: u8, y: u8) -> u8 {
    match (x, y) {
        _ if x == y => x,
        (4, _) => y,
        (_, 4) => x,
        _ => 0,
    }
}

fn m3_leq(x: u8, y: u8) -> bool {
    m3_join(x, y) == y
}

/// Generators `p ↦ (f(p))_f` over all order-preserving `f: P → M3`, with
/// `only_boolean` restricting the targets to the chain `0 < 1`.
fn evaluations(p: &Poset, only_boolean: bool) -> Vec<Vec<u8>> {
    let n = p.len();
    let values: Vec<u8> = if only_boolean { vec![0, 4] } else { (0..5).collect() };
    let mut maps = Vec::new();
    let mut f = vec![0usize; n];
    'outer: loop {
        let assignment: Vec<u8> = f.iter().map(|&i| values[i]).collect();
        let monotone = (0..n).all(|a| (0..n).all(|b| !p.leq(a, b) || m3_leq(assignment[a], assignment[b])));
        if monotone {
            maps.push(assignment);
        }
        for slot in f.iter_mut() {
            *slot += 1;
            if *slot < values.len() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    (0..n).map(|x| maps.iter().map(|m| m[x]).collect()).collect()
}

fn generated_by(gens: Vec<Vec<u8>>) -> usize {
    let mut all: BTreeSet<Vec<u8>> = gens.into_iter().collect();
    let mut frontier: Vec<Vec<u8>> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let items: Vec<Vec<u8>> = all.iter().cloned().collect();
        for a in &frontier {
            for b in &items {
                for c in [
                    a.iter().zip(b).map(|(&x, &y)| m3_join(x, y)).collect::<Vec<u8>>(),
                    a.iter().zip(b).map(|(&x, &y)| m3_meet(x, y)).collect(),
                ] {
                    if all.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    all.len()
}

/// Size of the lattice generated by `P` in the variety of M3: the sublattice of
/// `M3^Hom(P, M3)` generated by the evaluation tuples.
pub fn free_m3_brute(p: &Poset) -> usize {
    generated_by(evaluations(p, false))
}

/// The same inside `2^Hom(P, 2)`: the free distributive lattice.
pub fn free_d_brute(p: &Poset) -> usize {
    generated_by(evaluations(p, true))
}
