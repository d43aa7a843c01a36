//! Imposing implications on a family of disjoint multi-valued rows.

use fixedbitset::FixedBitSet;

use super::row::{Cell, MultiValuedRow, Symbol};

/// A set system over `0..width`, stored as disjoint rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowFamily {
    width: usize,
    rows: Vec<MultiValuedRow>,
}

impl RowFamily {
    /// All subsets of `0..width`.
    pub fn full(width: usize) -> Self {
        RowFamily {
            width,
            rows: vec![MultiValuedRow::full(width)],
        }
    }

    pub fn from_rows(width: usize, rows: Vec<MultiValuedRow>) -> Self {
        assert!(rows.iter().all(|r| r.width() == width), "row width mismatch");
        RowFamily { width, rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[MultiValuedRow] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<MultiValuedRow> {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn count(&self) -> u128 {
        self.rows.iter().fold(0u128, |acc, r| acc.saturating_add(r.count()))
    }

    pub fn members(&self) -> impl Iterator<Item = FixedBitSet> + '_ {
        self.rows.iter().flat_map(|r| r.members())
    }

    pub fn contains(&self, set: &FixedBitSet) -> bool {
        self.rows.iter().any(|r| r.is_member(set))
    }

    /// Keeps only the members with `pos` set to `value`.
    pub fn force(&mut self, pos: usize, value: bool) {
        self.rows.retain_mut(|r| r.force(pos, value));
    }

    /// Imposes `premise -> conclusion`.
    pub fn impose(&mut self, premise: &[usize], conclusion: &[usize]) {
        match premise {
            [] => {
                for &b in conclusion {
                    self.force(b, true);
                }
            }
            [a] => self.impose_singleton(*a, conclusion),
            _ => self.impose_general(premise, conclusion),
        }
    }

    /// Imposes `{a} -> conclusion`.
    pub fn impose_singleton(&mut self, a: usize, conclusion: &[usize]) {
        let rows = std::mem::take(&mut self.rows);
        for row in rows {
            singleton_row(row, a, conclusion, &mut self.rows);
        }
    }

    /// Imposes an arbitrary implication by splitting on the first absent premise position.
    pub fn impose_general(&mut self, premise: &[usize], conclusion: &[usize]) {
        let rows = std::mem::take(&mut self.rows);
        for row in rows {
            general_row(row, premise, conclusion, &mut self.rows);
        }
    }

    /// Requires `|X ∩ line| ∈ {0, 1, |line|}` for every member `X`; equivalently
    /// `{p, q} -> line` for all distinct `p, q` in the line. With a pivot, each row
    /// is first split on the pivot position, so the fresh groups stay on the
    /// remaining positions.
    pub fn impose_line(&mut self, line: &[usize], pivot: Option<usize>) {
        let rows = std::mem::take(&mut self.rows);
        for row in rows {
            match pivot {
                Some(p) => {
                    for value in [false, true] {
                        let mut r = row.clone();
                        if r.force(p, value) {
                            line_row(r, line, &mut self.rows);
                        }
                    }
                }
                None => line_row(row, line, &mut self.rows),
            }
        }
    }

    /// Table rendering, one row per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }
}

fn singleton_row(mut row: MultiValuedRow, a: usize, conclusion: &[usize], out: &mut Vec<MultiValuedRow>) {
    if row.cell(a) == Cell::Zero {
        out.push(row);
        return;
    }
    let missing: Vec<usize> = conclusion.iter().copied().filter(|&b| !row.entails(a, b)).collect();
    if missing.is_empty() {
        out.push(row);
        return;
    }
    if row.cell(a) == Cell::One {
        if missing.iter().all(|&b| row.force(b, true)) {
            out.push(row);
        }
        return;
    }
    if row.cell(a) == Cell::Two && missing.len() == 1 && row.cell(missing[0]) == Cell::Two {
        row.add_pair(a, missing[0]);
        out.push(row);
        return;
    }
    let mut absent = row.clone();
    if absent.force(a, false) {
        out.push(absent);
    }
    if row.force(a, true) && missing.iter().all(|&b| row.force(b, true)) {
        out.push(row);
    }
}

fn general_row(row: MultiValuedRow, premise: &[usize], conclusion: &[usize], out: &mut Vec<MultiValuedRow>) {
    if premise.iter().any(|&a| row.cell(a) == Cell::Zero) {
        out.push(row);
        return;
    }
    let satisfied = conclusion
        .iter()
        .all(|&b| row.cell(b) == Cell::One || premise.contains(&b));
    if satisfied {
        out.push(row);
        return;
    }
    let open: Vec<usize> = premise.iter().copied().filter(|&a| row.cell(a) != Cell::One).collect();
    if open.len() == 1 {
        singleton_row(row, open[0], conclusion, out);
        return;
    }
    // a1 = 0 | a1 = 1, a2 = 0 | ... | all of the premise and conclusion present
    for k in 0..open.len() {
        let mut branch = row.clone();
        let ok = open[..k].iter().all(|&a| branch.force(a, true)) && branch.force(open[k], false);
        if ok {
            out.push(branch);
        }
    }
    let mut all = row;
    if open.iter().chain(conclusion).all(|&p| all.force(p, true)) {
        out.push(all);
    }
}

fn line_row(mut row: MultiValuedRow, line: &[usize], out: &mut Vec<MultiValuedRow>) {
    let mut ones = 0;
    let mut zeros = 0;
    let mut twos = Vec::new();
    let mut grouped = false;
    for &p in line {
        match row.cell(p) {
            Cell::One => ones += 1,
            Cell::Zero => zeros += 1,
            Cell::Two => twos.push(p),
            Cell::Group(..) => grouped = true,
        }
    }
    if grouped {
        let mut family = vec![row];
        for (i, &p) in line.iter().enumerate() {
            for &q in &line[i + 1..] {
                let rows = std::mem::take(&mut family);
                for r in rows {
                    general_row(r, &[p, q], line, &mut family);
                }
            }
        }
        out.extend(family);
        return;
    }
    match (ones, zeros) {
        (0, 0) => {
            if twos.len() >= 3 {
                row.add_group(Symbol::L, twos);
            }
        }
        (0, _) => {
            if twos.len() >= 2 {
                row.add_group(Symbol::Eps, twos);
            }
        }
        (1, 0) => {
            if twos.len() >= 2 {
                row.add_group(Symbol::Delta, twos);
            }
        }
        (1, _) => {
            for p in twos {
                row.set(p, Cell::Zero);
            }
        }
        (_, 0) => {
            for p in twos {
                row.set(p, Cell::One);
            }
        }
        _ => return,
    }
    out.push(row);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::implications::{all_closed_naive, Implication};

    fn sorted_members(f: &RowFamily) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = f.members().map(|s| s.ones().collect()).collect();
        out.sort();
        out
    }

    #[test]
    fn worked_singleton_example() {
        // ground: b2 c3 d4 f11 h11 i12 e10 a2 a3 a4 b6 b5 c11 d9 d8
        let row = MultiValuedRow::parse("ε ε 0 a 0 0 0 1 1 1 0 0 b 0 0").unwrap();
        let mut family = RowFamily::from_rows(15, vec![row]);
        let (c11, a2, a4, c3) = (12, 7, 9, 1);
        family.impose(&[c11], &[a2, a4, c3]);
        assert_eq!(
            family.render(),
            "ε ε 0 0 0 0 0 1 1 1 0 0 0 0 0\n0 1 0 2 0 0 0 1 1 1 0 0 1 0 0\n"
        );
        assert_eq!(family.count(), 5);
    }

    #[test]
    fn line_on_free_row() {
        let mut f = RowFamily::full(4);
        f.impose_line(&[0, 1, 2], None);
        assert_eq!(f.render(), "l l l 2\n");
        assert_eq!(f.count(), 10);

        let mut f = RowFamily::full(4);
        f.impose_line(&[0, 1, 2, 3], Some(0));
        assert_eq!(f.render(), "0 ε ε ε\n1 δ δ δ\n");
        assert_eq!(f.count(), 6);
    }

    #[test]
    fn sequence_matches_naive() {
        let sigma = vec![
            Implication::new(6, &[0], &[1, 2]),
            Implication::new(6, &[3, 4], &[5]),
            Implication::new(6, &[2], &[0]),
            Implication::new(6, &[5], &[4]),
        ];
        let mut f = RowFamily::full(6);
        for imp in &sigma {
            f.impose(&imp.premise_vec(), &imp.conclusion_vec());
        }
        let mut expected: Vec<Vec<usize>> = all_closed_naive(6, &sigma)
            .into_iter()
            .map(|s| s.ones().collect())
            .collect();
        expected.sort();
        assert_eq!(sorted_members(&f), expected);
        assert_eq!(f.count() as usize, expected.len());
    }

    #[test]
    fn line_after_groups_matches_naive() {
        let mut f = RowFamily::full(5);
        f.impose_line(&[0, 1, 2], None);
        f.impose_line(&[2, 3, 4], None);
        f.impose(&[1], &[3]);
        let mut sigma = Vec::new();
        for line in [[0, 1, 2], [2, 3, 4]] {
            for i in 0..3 {
                for j in i + 1..3 {
                    sigma.push(Implication::new(5, &[line[i], line[j]], &line));
                }
            }
        }
        sigma.push(Implication::new(5, &[1], &[3]));
        let mut expected: Vec<Vec<usize>> = all_closed_naive(5, &sigma)
            .into_iter()
            .map(|s| s.ones().collect())
            .collect();
        expected.sort();
        assert_eq!(sorted_members(&f), expected);
    }

    #[test]
    fn contradictions_drop_rows() {
        let mut f = RowFamily::full(2);
        f.force(0, true);
        f.impose(&[0], &[1]);
        f.force(1, false);
        assert!(f.is_empty());
        assert_eq!(f.count(), 0);
    }
}
