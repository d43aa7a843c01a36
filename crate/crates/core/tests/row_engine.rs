mod common;

use proptest::prelude::*;
use varlat::implications::RowFamily;

#[derive(Clone, Debug)]
enum Step {
    Rule(Vec<usize>, Vec<usize>),
    Line(Vec<usize>, Option<usize>),
}

fn subset(width: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence((0..width).collect::<Vec<_>>(), 0..=max.min(width))
}

fn step(width: usize) -> impl Strategy<Value = Step> {
    let rule = (subset(width, 3), subset(width, 3)).prop_map(|(a, b)| Step::Rule(a, b));
    if width < 3 {
        return rule.boxed();
    }
    let line = (
        proptest::sample::subsequence((0..width).collect::<Vec<_>>(), 3..=width.min(5)),
        proptest::option::of(0..width),
    )
        .prop_map(|(l, p)| Step::Line(l, p));
    prop_oneof![4 => rule, 1 => line].boxed()
}

fn case() -> impl Strategy<Value = (usize, Vec<Step>)> {
    (1usize..=12).prop_flat_map(|w| (Just(w), proptest::collection::vec(step(w), 0..=8)))
}

fn expand(steps: &[Step]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for s in steps {
        match s {
            Step::Rule(a, b) => out.push((a.clone(), b.clone())),
            Step::Line(l, _) => {
                for &p in l {
                    for &q in l {
                        if p < q {
                            out.push((vec![p, q], l.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rows_expand_to_the_closed_sets((width, steps) in case()) {
        let mut family = RowFamily::full(width);
        for s in &steps {
            match s {
                Step::Rule(a, b) => family.impose(a, b),
                Step::Line(l, p) => family.impose_line(l, *p),
            }
        }
        let got = common::family_masks(&family);
        let expected = common::closed_sets(width, &expand(&steps));
        prop_assert_eq!(family.count(), got.len() as u128);
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn forcing_is_restriction((width, steps) in case(), pos in 0usize..12, value: bool) {
        let pos = pos % width;
        let mut family = RowFamily::full(width);
        for s in &steps {
            if let Step::Rule(a, b) = s {
                family.impose(a, b);
            }
        }
        let before = common::family_masks(&family);
        family.force(pos, value);
        let kept: Vec<u32> = before.into_iter().filter(|m| (m >> pos & 1 == 1) == value).collect();
        prop_assert_eq!(common::family_masks(&family), kept);
    }
}
