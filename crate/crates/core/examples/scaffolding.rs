// Counting a subdirect product from its scaffolding alone.

use varlat::poset::Poset;
use varlat::variety::{connection_family, VarietySpec};

pub fn run_example() -> varlat::Result<()> {
    let (fam, _) = connection_family(&Poset::antichain(3), &VarietySpec::m3())?;
    let scaffolding = fam.scaffolding();
    let ideals = scaffolding.vee_ideals();
    let rebuilt = fam.reconstruct(None)?;
    println!(
        "carrier {}, declared joins {}, ∨-ideals {}, elements {}",
        scaffolding.carrier().len(),
        scaffolding.declared_joins().len(),
        ideals.count(),
        rebuilt.len()
    );
    assert_eq!(ideals.count(), 28);
    assert_eq!(rebuilt.len(), 28);
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
