// A non-modular variety read from JSON goes through the join-closure path.

use varlat::poset::Poset;
use varlat::variety::{free_lattice, FreeOptions, VarietySpec};

pub fn run_example() -> varlat::Result<()> {
    let v = VarietySpec::from_json_str(r#"{"name": "N5", "irreducibles": ["D2", "N5"]}"#, "custom")?;
    println!("{}: modular={}, irreducibles {:?}", v.name, v.modular, v.si_names);
    assert!(!v.modular);

    let opts = FreeOptions { oracle: true, ..Default::default() };
    for p in [Poset::antichain(2), Poset::parse_dsl("a<b; c")?, Poset::antichain(3)] {
        let free = free_lattice(&p, &v, &opts)?;
        println!("  {:<8} {}", p.to_dsl(), free.stats.summary());
        assert!(free.assembly().is_none());
    }
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
