mod common;

use varlat::poset::{enumerate_posets, Poset};
use varlat::variety::{free_lattice, FreeOptions, VarietySpec};

fn size(p: &Poset, v: &VarietySpec) -> usize {
    free_lattice(p, v, &FreeOptions::default()).unwrap().cardinality() as usize
}

#[test]
fn free_distributive_on_antichains_counts_monotone_functions() {
    let d = VarietySpec::distributive();
    for n in 1..=4 {
        // drop the two constant functions
        let expected = common::monotone_boolean_functions(n) - 2;
        let expected = expected.max(1);
        assert_eq!(size(&Poset::antichain(n), &d), expected, "n = {n}");
    }
    assert_eq!(size(&Poset::antichain(3), &d), 18);
}

#[test]
fn small_posets_match_brute_force() {
    let (d, m3) = (VarietySpec::distributive(), VarietySpec::m3());
    for n in 1..=4 {
        for p in enumerate_posets(n).unwrap() {
            assert_eq!(size(&p, &d), common::free_d_brute(&p), "FD({p})");
            if n <= 3 {
                assert_eq!(size(&p, &m3), common::free_m3_brute(&p), "FM3({p})");
            }
        }
    }
}

#[test]
fn golden_sums_match_brute_force() {
    let m3 = VarietySpec::m3();
    for k in 1..=3 {
        let p = Poset::sum(&[1, 1, k]).unwrap();
        assert_eq!(size(&p, &m3), common::free_m3_brute(&p), "1+1+{k}");
    }
}

#[test]
fn generators_sit_where_expected() {
    let free = free_lattice(&Poset::parse_dsl("a<b; c").unwrap(), &VarietySpec::m3(), &FreeOptions::default()).unwrap();
    let l = free.to_lattice().unwrap();
    let (a, b, c) = (l.index_of("a").unwrap(), l.index_of("b").unwrap(), l.index_of("c").unwrap());
    assert!(l.lt(a, b));
    assert!(!l.leq(a, c) && !l.leq(c, a));
    // a, b, c generate everything
    assert_eq!(l.sublattice_generated(&[a, b, c]).len(), l.len());
}

#[test]
fn oracle_mode_agrees_on_four_generators() {
    let opts = FreeOptions { oracle: true, ..Default::default() };
    let free = free_lattice(&Poset::antichain(4), &VarietySpec::m3(), &opts).unwrap();
    assert_eq!(free.cardinality(), 19982);
    assert_eq!(free.stats.length, free.stats.s + 2 * free.stats.t_total());
}
