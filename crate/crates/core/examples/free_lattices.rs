// Free lattices generated by posets in the varieties of D2 and M3.

use varlat::poset::Poset;
use varlat::variety::{free_lattice, FreeOptions, VarietySpec};

pub fn run_example() -> varlat::Result<()> {
    let m3 = VarietySpec::m3();
    let opts = FreeOptions::default();
    for (k, expected) in [(1, 28), (2, 138), (3, 629), (4, 2784)] {
        let p = Poset::sum(&[1, 1, k])?;
        let free = free_lattice(&p, &m3, &opts)?;
        println!("FM3(1+1+{k}) = {}", free.stats.summary());
        assert_eq!(free.cardinality(), expected);
        assert_eq!(free.stats.length, free.stats.s + 2 * free.stats.t_total());
    }

    let fd = free_lattice(&Poset::antichain(3), &VarietySpec::distributive(), &opts)?;
    println!("FD(1+1+1) = {}", fd.stats.summary());
    assert_eq!(fd.cardinality(), 18);

    let small = free_lattice(&Poset::parse_dsl("a<b; c")?, &m3, &opts)?;
    let l = small.to_lattice()?;
    println!("generators of FM3(1+2): {:?}", ["a", "b", "c"].map(|n| l.index_of(n).is_some()));
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
