// Closure systems kept as disjoint multi-valued rows.

use varlat::implications::{all_closed_naive, Implication, MultiValuedRow, RowFamily};

pub fn run_example() -> varlat::Result<()> {
    let row = MultiValuedRow::parse("ε ε 0 a 0 0 0 1 1 1 0 0 b 0 0")?;
    let mut family = RowFamily::from_rows(15, vec![row]);
    family.impose(&[12], &[7, 9, 1]);
    print!("{}", family.render());
    assert_eq!(family.count(), 5);

    // a line: any two points force the rest
    let mut lines = RowFamily::full(5);
    lines.impose_line(&[0, 1, 2], None);
    lines.impose_line(&[2, 3, 4], Some(2));
    lines.impose(&[1], &[3]);
    print!("{}", lines.render());

    let sigma = vec![
        Implication::new(5, &[0, 1], &[0, 1, 2]),
        Implication::new(5, &[0, 2], &[0, 1, 2]),
        Implication::new(5, &[1, 2], &[0, 1, 2]),
        Implication::new(5, &[2, 3], &[2, 3, 4]),
        Implication::new(5, &[2, 4], &[2, 3, 4]),
        Implication::new(5, &[3, 4], &[2, 3, 4]),
        Implication::new(5, &[1], &[3]),
    ];
    let naive = all_closed_naive(5, &sigma);
    println!("{} rows, {} closed sets", lines.rows().len(), lines.count());
    assert_eq!(lines.count(), naive.len() as u128);
    assert!(naive.iter().all(|s| lines.contains(s)));
    Ok(())
}

fn main() -> varlat::Result<()> {
    run_example()
}
