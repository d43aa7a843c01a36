mod common;

use varlat::check::m3_squared_fixtures;
use varlat::pipeline::assemble;
use varlat::poset::enumerate_posets;
use varlat::subdirect::ConnectionFamily;
use varlat::variety::{connection_family, VarietySpec};

fn compare(name: &str, fam: &ConnectionFamily) {
    let gens = fam.join_generators();
    let mut seed = gens.clone();
    seed.push(fam.bottom_tuple());
    let expected: Vec<Vec<u16>> = common::sublattice(fam.factors(), &seed).into_iter().collect();
    let a = assemble(fam, None).unwrap();
    let mut got = a.tuples();
    got.sort();
    assert_eq!(got, expected, "{name}");
    assert_eq!(a.stats.cardinality, expected.len() as u128);
    assert_eq!(fam.reconstruct(None).unwrap().sorted_elements(), expected, "{name}");
}

#[test]
fn all_fm3_up_to_four_elements() {
    let m3 = VarietySpec::m3();
    let mut cases = 0;
    for n in 1..=4 {
        for p in enumerate_posets(n).unwrap() {
            let (fam, _) = connection_family(&p, &m3).unwrap();
            if fam.join_generators().len() <= 32 {
                compare(&p.to_dsl(), &fam);
            } else {
                // too wide for the quadratic closure here; compare with the library closure
                let mut got = assemble(&fam, None).unwrap().tuples();
                got.sort();
                assert_eq!(got, fam.reconstruct(None).unwrap().sorted_elements(), "{p}");
            }
            cases += 1;
        }
    }
    assert_eq!(cases, 24);
}

#[test]
fn m3_squared_fixtures_agree() {
    let fixtures = m3_squared_fixtures(7);
    assert!(fixtures.len() >= 5, "only {} fixtures", fixtures.len());
    for (name, fam) in &fixtures {
        compare(name, fam);
    }
    assert!(fixtures.iter().any(|(_, f)| f.reconstruct(None).unwrap().len() == 25));
}

#[test]
fn scaffolding_counts_and_carrier() {
    let m3 = VarietySpec::m3();
    let mut fams: Vec<(String, ConnectionFamily)> = Vec::new();
    for n in 1..=3 {
        for p in enumerate_posets(n).unwrap() {
            fams.push((p.to_dsl(), connection_family(&p, &m3).unwrap().0));
        }
    }
    fams.extend(m3_squared_fixtures(11));
    for (name, fam) in &fams {
        let rec = fam.reconstruct(None).unwrap();
        let ps = fam.scaffolding();
        assert_eq!(ps.vee_ideals().count(), rec.len() as u128, "{name}");
        let l = rec.to_lattice().unwrap();
        let mut sub: Vec<Vec<u16>> = l.sub_irreducibles().into_iter().map(|x| rec.elements()[x].clone()).collect();
        sub.sort();
        let mut carrier: Vec<Vec<u16>> = ps.carrier().iter().filter(|x| **x != fam.bottom_tuple()).cloned().collect();
        carrier.sort();
        assert_eq!(carrier, sub, "{name}");
        let blocks: usize = fam.factors().iter().map(|f| f.len() - 1).sum();
        assert_eq!(blocks, carrier.len(), "{name}");
    }
}
