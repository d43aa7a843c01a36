// Finite lattices: built-ins, irreducibles, lines and DOT.

use varlat::FiniteLattice;

pub fn run_example() -> varlat::Result<()> {
    let m3 = FiniteLattice::m3();
    let n5 = FiniteLattice::n5();
    for (name, l) in [("M3", &m3), ("N5", &n5)] {
        println!(
            "{name}: {} elements, length {}, modular={}, distributive={}",
            l.len(),
            l.length(),
            l.is_modular(),
            l.is_distributive()
        );
    }

    let sq = FiniteLattice::direct_product(&[&m3, &m3]);
    println!("M3×M3: {} join irreducibles, {} lines", sq.join_irreducibles().len(), sq.lines().len());
    assert_eq!(sq.join_irreducibles().len(), 6);
    assert_eq!(sq.lines().len(), 2);

    // all nonzero elements of M3 sit in one projectivity class
    assert_eq!(m3.sub_irreducibles().len(), 4);

    let dot = n5.to_dot();
    let back = FiniteLattice::from_dot(&dot)?;
    assert!(back.is_isomorphic(&n5));
    print!("{dot}");
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
