// From a subdirect product to its connection maps and back.

use varlat::lattice::FiniteLattice;
use varlat::subdirect::{generated_sublattice, ConnectionFamily};

pub fn run_example() -> varlat::Result<()> {
    let factors = vec![FiniteLattice::m3(), FiniteLattice::n5()];
    let seed = vec![vec![1, 1], vec![2, 3], vec![3, 2], vec![4, 0]];
    let set = generated_sublattice(&factors, &seed);
    let fam = ConnectionFamily::from_subdirect_product(factors.clone(), &set)?;
    println!("{} elements inside M3×N5", set.len());
    for i in 0..2 {
        for (j, target) in factors.iter().enumerate() {
            let names: Vec<&str> = fam.map(i, j).iter().map(|&y| target.name(y as usize)).collect();
            println!("  α[{i},{j}] = {names:?}");
        }
    }
    assert!(fam.check_axioms().is_empty());

    let rebuilt = fam.reconstruct(None)?;
    assert_eq!(rebuilt.sorted_elements(), set);

    // a map that moves 0 is caught
    let bottom_moved = vec![1; factors[0].len()];
    let broken = fam.with_map(0, 1, bottom_moved)?;
    for v in broken.check_axioms().iter().take(3) {
        println!("  violation: {v}");
    }
    assert!(!broken.check_axioms().is_empty());
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
