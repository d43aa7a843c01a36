mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use varlat::check::random_subdirect;
use varlat::lattice::FiniteLattice;
use varlat::subdirect::ConnectionFamily;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn connection_maps_rebuild_the_product(seed: u64, t in 1usize..=3) {
        let pool = [FiniteLattice::d2(), FiniteLattice::n5(), FiniteLattice::m3()];
        let mut rng = StdRng::seed_from_u64(seed);
        let (factors, set) = random_subdirect(&mut rng, &pool, t);
        let expected = common::sublattice(&factors, &set);
        prop_assert_eq!(expected.len(), set.len());

        let fam = ConnectionFamily::from_subdirect_product(factors.clone(), &set).unwrap();
        prop_assert!(fam.check_axioms().is_empty());
        let rebuilt = fam.reconstruct(None).unwrap();
        let got: Vec<Vec<u16>> = rebuilt.sorted_elements();
        prop_assert_eq!(&got, &expected.iter().cloned().collect::<Vec<_>>());

        // σ'_i(y) is the least element with i-th coordinate y
        for (i, f) in factors.iter().enumerate() {
            for y in 0..f.len() {
                let fiber: Vec<&Vec<u16>> = expected.iter().filter(|x| x[i] as usize == y).collect();
                let least = fiber.iter().find(|m| {
                    fiber.iter().all(|x| m.iter().zip(x.iter()).enumerate().all(|(k, (&a, &b))| factors[k].leq(a as usize, b as usize)))
                });
                prop_assert_eq!(Some(&&fam.sigma_prime(i, y)), least);
            }
        }

        // every element is the join of its σ'-images
        for x in &expected {
            let mut acc = fam.bottom_tuple();
            for (i, &xi) in x.iter().enumerate() {
                acc = fam.join(&acc, &fam.sigma_prime(i, xi as usize));
            }
            prop_assert_eq!(&acc, x);
        }
    }
}

#[test]
fn rebuilt_order_matches() {
    let factors = vec![FiniteLattice::n5(), FiniteLattice::m3()];
    let seed = vec![vec![1, 1], vec![2, 2], vec![3, 3], vec![4, 0]];
    let set: Vec<Vec<u16>> = common::sublattice(&factors, &seed).into_iter().collect();
    let fam = ConnectionFamily::from_subdirect_product(factors.clone(), &set).unwrap();
    let rebuilt = fam.reconstruct(None).unwrap().to_lattice().unwrap();
    let direct = varlat::FiniteLattice::from_tuples(&factors, &set).unwrap();
    assert!(rebuilt.is_isomorphic(&direct));
}
