// Posets from the one-line DSL, isomorphism classes, and the finiteness test.

use varlat::poset::{enumerate_posets, Poset};
use varlat::variety::fm_finite;

pub fn run_example() -> varlat::Result<()> {
    let v = Poset::parse_dsl("a<b, a<c; d")?;
    println!("{} has {} elements and {} order ideals", v, v.len(), v.order_ideals().len());

    // same shape, different names
    let w = Poset::parse_dsl("x<y, x<z; q")?;
    assert!(v.is_isomorphic(&w));
    assert_eq!(v.canonical_code(), w.canonical_code());

    let counts: Vec<usize> = (1..=5).map(|n| enumerate_posets(n).map(|p| p.len())).collect::<Result<_, _>>()?;
    println!("classes for n = 1..5: {counts:?}");
    assert_eq!(counts, [1, 2, 5, 16, 63]);

    for p in enumerate_posets(4)? {
        println!("  {:<20} good={}", p.to_dsl(), fm_finite(&p));
    }
    assert!(!fm_finite(&Poset::antichain(4)));
    assert!(fm_finite(&Poset::sum(&[1, 1, 4])?));
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
