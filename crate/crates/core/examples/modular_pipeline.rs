// The row pipeline on a modular subdirect product, step by step.

use varlat::pipeline::{assemble, Ground};
use varlat::poset::Poset;
use varlat::variety::{connection_family, VarietySpec};

pub fn run_example() -> varlat::Result<()> {
    let p = Poset::sum(&[1, 1, 2])?;
    let (fam, factors) = connection_family(&p, &VarietySpec::m3())?;
    let ground = Ground::new(&fam)?;
    println!("{} factors, ground of {} join irreducibles", factors.len(), ground.len());

    let a = assemble(&fam, None)?;
    print!("{}", a.render_contexts());
    println!("{}", serde_json::to_string(&a.stats)?);
    assert_eq!(a.cardinality(), 138);
    assert_eq!(a.length(), 16);

    let mut tuples = a.tuples();
    tuples.sort();
    assert_eq!(tuples, fam.reconstruct(None)?.sorted_elements());
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
