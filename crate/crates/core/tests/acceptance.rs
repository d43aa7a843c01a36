//! One check per acceptance criterion, each printing a single PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use varlat::check::{compare_with_naive, m3_squared_fixtures, modular_fixtures, random_steps, random_subdirect, round_trip, scaffolding_identity};
use varlat::pipeline::assemble;
use varlat::poset::{enumerate_posets, Poset};
use varlat::variety::{connection_family, fm_finite, free_lattice, FreeOptions, VarietySpec};

fn report(name: &str, ok: bool, detail: String) -> bool {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn fm3_golden_numbers() -> bool {
    let start = Instant::now();
    let m3 = VarietySpec::m3();
    let mut got = Vec::new();
    for k in 1..=4 {
        let p = Poset::sum(&[1, 1, k]).unwrap();
        got.push(free_lattice(&p, &m3, &FreeOptions::default()).unwrap().cardinality());
    }
    let elapsed = start.elapsed();
    report(
        "FM3(1+1+k) for k = 1..4",
        got == [28, 138, 629, 2784] && elapsed < Duration::from_secs(60),
        format!("{got:?} in {elapsed:.2?}"),
    )
}

fn length_law_over_n5_batch() -> bool {
    let m3 = VarietySpec::m3();
    let opts = FreeOptions::default();
    let (mut completed, mut capped, mut broken) = (0, 0, Vec::new());
    for n in 1..=5 {
        for p in enumerate_posets(n).unwrap() {
            match free_lattice(&p, &m3, &opts) {
                Ok(f) => {
                    completed += 1;
                    if f.stats.length != f.stats.s + 2 * f.stats.t_total() {
                        broken.push(format!("{p}: {}", f.stats.summary()));
                    }
                }
                Err(varlat::Error::CapExceeded { .. }) => capped += 1,
                Err(e) => broken.push(format!("{p}: {e}")),
            }
        }
    }
    report(
        "length = s + 2t for completed posets with n <= 5",
        broken.is_empty() && completed > 0,
        format!("{completed} completed, {capped} capped, violations {broken:?}"),
    )
}

fn poset_census() -> bool {
    let counts: Vec<usize> = (1..=6).map(|n| enumerate_posets(n).unwrap().len()).collect();
    report("poset classes for n = 1..6", counts == [1, 2, 5, 16, 63, 318], format!("{counts:?}"))
}

fn good_seven_element_posets() -> bool {
    let start = Instant::now();
    let all = enumerate_posets(7).unwrap();
    let good = all.iter().filter(|p| fm_finite(p)).count();
    let elapsed = start.elapsed();
    report(
        "good 7-element posets",
        good == 1101 && elapsed < Duration::from_secs(300),
        format!("{good} of {} in {elapsed:.2?}", all.len()),
    )
}

fn connection_map_round_trips() -> bool {
    let pool = [varlat::FiniteLattice::d2(), varlat::FiniteLattice::n5(), varlat::FiniteLattice::m3()];
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let cases = 600;
    for _ in 0..cases {
        let t = rng.gen_range(1..=3);
        let (factors, set) = random_subdirect(&mut rng, &pool, t);
        // independent closure first, then the library round trip
        let direct: Vec<Vec<u16>> = common::sublattice(&factors, &set).into_iter().collect();
        if direct != set {
            failures.push(format!("generator produced a non-sublattice of size {}", set.len()));
        } else if let Err(e) = round_trip(&factors, &set) {
            failures.push(e);
        }
    }
    report(
        "round trips over {D2, N5, M3}, t <= 3",
        failures.is_empty(),
        format!("{cases} cases, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn row_engine_matches_naive() -> bool {
    let mut rng = StdRng::seed_from_u64(0xc0ffee);
    let cases = 1500;
    let mut failures = Vec::new();
    for _ in 0..cases {
        let width = rng.gen_range(1..=12);
        let steps = random_steps(&mut rng, width);
        if let Err(e) = compare_with_naive(width, &steps) {
            failures.push(e);
        }
    }
    report(
        "row engine vs naive closure, ground <= 12",
        failures.is_empty(),
        format!("{cases} cases, {} failures {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn scaffolding_identity_on_modular_instances() -> bool {
    let fixtures: Vec<_> = modular_fixtures(3, 100, 17).into_iter().chain(m3_squared_fixtures(17)).collect();
    let failures: Vec<String> = fixtures
        .iter()
        .filter_map(|(name, fam)| scaffolding_identity(fam).err().map(|e| format!("{name}: {e}")))
        .collect();
    report(
        "scaffolding ∨-ideals, carrier and block sizes",
        failures.is_empty(),
        format!("{} instances, failures {failures:?}", fixtures.len()),
    )
}

fn pipeline_matches_reconstruction() -> bool {
    let m3 = VarietySpec::m3();
    let mut fams = Vec::new();
    for n in 1..=4 {
        for p in enumerate_posets(n).unwrap() {
            fams.push((format!("FM3({p})"), connection_family(&p, &m3).unwrap().0));
        }
    }
    fams.extend(m3_squared_fixtures(23));
    let mut failures = Vec::new();
    for (name, fam) in &fams {
        let mut got = assemble(fam, None).unwrap().tuples();
        got.sort();
        if got != fam.reconstruct(None).unwrap().sorted_elements() {
            failures.push(name.clone());
        }
    }
    report(
        "row pipeline vs reconstruction, |P| <= 4 and M3×M3",
        failures.is_empty(),
        format!("{} instances, mismatches {failures:?}", fams.len()),
    )
}

fn free_distributive_on_three() -> bool {
    let fd = free_lattice(&Poset::antichain(3), &VarietySpec::distributive(), &FreeOptions::default()).unwrap();
    let brute = common::monotone_boolean_functions(3) - 2;
    report(
        "|FD(1+1+1)| against monotone Boolean functions",
        fd.cardinality() == 18 && brute == 18,
        format!("{} computed, {brute} by brute force", fd.cardinality()),
    )
}

fn main() {
    let criteria: [fn() -> bool; 9] = [
        fm3_golden_numbers,
        length_law_over_n5_batch,
        poset_census,
        good_seven_element_posets,
        connection_map_round_trips,
        row_engine_matches_naive,
        scaffolding_identity_on_modular_instances,
        pipeline_matches_reconstruction,
        free_distributive_on_three,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
