//! Multi-valued rows: compact encodings of set families over positions `0..width`.
//!
//! | symbol | meaning for the positions of one group                     |
//! |--------|-------------------------------------------------------------|
//! | `0`    | absent                                                      |
//! | `1`    | present                                                     |
//! | `2`    | free                                                        |
//! | `l`    | none, exactly one, or all of the group present              |
//! | `ε`    | at most one present                                         |
//! | `δ`    | all present or all absent                                   |
//! | `a b`  | a two-position group where `a` present forces `b` present   |

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    L,
    Eps,
    Delta,
    /// The `a` side of an implication pair.
    Antecedent,
    /// The `b` side of an implication pair.
    Consequent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Zero,
    One,
    Two,
    /// Member of the row-local group with the given id.
    Group(Symbol, u32),
}

// packed cell: low three bits tag, group id above
const TAG_BITS: u32 = 3;
const MAX_ID: u32 = (1 << (16 - TAG_BITS)) - 1;
const ZERO: u16 = 0;
const ONE: u16 = 1;
const TWO: u16 = 2;

fn pack(cell: Cell) -> u16 {
    match cell {
        Cell::Zero => ZERO,
        Cell::One => ONE,
        Cell::Two => TWO,
        Cell::Group(symbol, id) => {
            let tag = match symbol {
                Symbol::L => 3,
                Symbol::Eps => 4,
                Symbol::Delta => 5,
                Symbol::Antecedent => 6,
                Symbol::Consequent => 7,
            };
            debug_assert!(id <= MAX_ID);
            (tag | id << TAG_BITS) as u16
        }
    }
}

fn unpack(code: u16) -> Cell {
    let id = (code >> TAG_BITS) as u32;
    match code & 7 {
        ZERO => Cell::Zero,
        ONE => Cell::One,
        TWO => Cell::Two,
        3 => Cell::Group(Symbol::L, id),
        4 => Cell::Group(Symbol::Eps, id),
        5 => Cell::Group(Symbol::Delta, id),
        6 => Cell::Group(Symbol::Antecedent, id),
        _ => Cell::Group(Symbol::Consequent, id),
    }
}

/// One row of a context. Cells are packed into a `u16` each; group members are
/// found by scanning for a shared id, so a row is a single allocation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiValuedRow {
    cells: Vec<u16>,
}

impl MultiValuedRow {
    /// The row encoding every subset of `0..width`.
    pub fn full(width: usize) -> Self {
        MultiValuedRow { cells: vec![TWO; width] }
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().map(|&c| unpack(c))
    }

    #[inline]
    pub fn cell(&self, pos: usize) -> Cell {
        unpack(self.cells[pos])
    }

    fn id_of(code: u16) -> Option<u32> {
        (code & 7 > TWO).then_some((code >> TAG_BITS) as u32)
    }

    /// Positions of the group with the given id, ascending.
    pub fn group_members(&self, id: u32) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&p| Self::id_of(self.cells[p]) == Some(id))
            .collect()
    }

    /// Live groups as `(symbol of first member, members)`, by first appearance.
    pub fn groups(&self) -> Vec<(Symbol, Vec<usize>)> {
        let mut out: Vec<(u32, Symbol, Vec<usize>)> = Vec::new();
        for (p, &code) in self.cells.iter().enumerate() {
            if let Cell::Group(symbol, id) = unpack(code) {
                match out.iter_mut().find(|(g, _, _)| *g == id) {
                    Some((_, _, members)) => members.push(p),
                    None => out.push((id, symbol, vec![p])),
                }
            }
        }
        out.into_iter().map(|(_, s, m)| (s, m)).collect()
    }

    pub(crate) fn set(&mut self, pos: usize, cell: Cell) {
        self.cells[pos] = pack(cell);
    }

    fn fresh_id(&mut self) -> u32 {
        let next = self.max_id().map_or(0, |m| m + 1);
        if next <= MAX_ID {
            return next;
        }
        *self = self.normalized();
        self.max_id().map_or(0, |m| m + 1)
    }

    fn max_id(&self) -> Option<u32> {
        self.cells.iter().filter_map(|&c| Self::id_of(c)).max()
    }

    /// Installs a fresh group over `members`, which must all be plain `Two` cells.
    pub(crate) fn add_group(&mut self, symbol: Symbol, members: Vec<usize>) {
        debug_assert!(members.iter().all(|&p| self.cells[p] == TWO));
        let id = self.fresh_id();
        for m in members {
            self.cells[m] = pack(Cell::Group(symbol, id));
        }
    }

    /// Installs an implication pair `antecedent -> consequent` over two `Two` cells.
    pub(crate) fn add_pair(&mut self, antecedent: usize, consequent: usize) {
        debug_assert!(self.cells[antecedent] == TWO && self.cells[consequent] == TWO);
        let id = self.fresh_id();
        self.cells[antecedent] = pack(Cell::Group(Symbol::Antecedent, id));
        self.cells[consequent] = pack(Cell::Group(Symbol::Consequent, id));
    }

    /// Restricts the row to members with `pos` present (`value`) or absent,
    /// propagating through the group that holds `pos`. Returns `false` when the
    /// restriction is empty; the row is then left in an unspecified state.
    pub fn force(&mut self, pos: usize, value: bool) -> bool {
        match self.cell(pos) {
            Cell::Zero => !value,
            Cell::One => value,
            Cell::Two => {
                self.cells[pos] = bit(value);
                true
            }
            Cell::Group(symbol, id) => {
                let rest: Vec<usize> = (0..self.cells.len())
                    .filter(|&p| p != pos && Self::id_of(self.cells[p]) == Some(id))
                    .collect();
                self.cells[pos] = bit(value);
                match symbol {
                    Symbol::Eps => {
                        if value {
                            for &m in &rest {
                                self.cells[m] = ZERO;
                            }
                        } else {
                            self.regroup(id, Symbol::Eps, &rest);
                        }
                    }
                    Symbol::Delta => {
                        for &m in &rest {
                            self.cells[m] = bit(value);
                        }
                    }
                    Symbol::L => {
                        let kind = if value { Symbol::Delta } else { Symbol::Eps };
                        self.regroup(id, kind, &rest);
                    }
                    Symbol::Antecedent => {
                        self.cells[rest[0]] = if value { ONE } else { TWO };
                    }
                    Symbol::Consequent => {
                        self.cells[rest[0]] = if value { TWO } else { ZERO };
                    }
                }
                true
            }
        }
    }

    /// Re-installs the remainder of a dissolved group; a single leftover becomes free.
    fn regroup(&mut self, id: u32, symbol: Symbol, rest: &[usize]) {
        match rest.len() {
            0 => {}
            1 => self.cells[rest[0]] = TWO,
            _ => {
                for &m in rest {
                    self.cells[m] = pack(Cell::Group(symbol, id));
                }
            }
        }
    }

    /// Whether every member containing `a` also contains `b`, read off the cell structure.
    pub(crate) fn entails(&self, a: usize, b: usize) -> bool {
        if a == b || self.cells[b] == ONE || self.cells[a] == ZERO {
            return true;
        }
        match (self.cell(a), self.cell(b)) {
            (Cell::Group(Symbol::Delta, i), Cell::Group(Symbol::Delta, j)) => i == j,
            (Cell::Group(Symbol::Antecedent, i), Cell::Group(Symbol::Consequent, j)) => i == j,
            _ => false,
        }
    }

    /// Number of encoded subsets, saturating at `u128::MAX`.
    pub fn count(&self) -> u128 {
        let mut total: u128 = 1;
        for &code in &self.cells {
            if code == TWO {
                total = total.saturating_mul(2);
            }
        }
        for (symbol, members) in self.groups() {
            let k = members.len() as u128;
            let factor = match symbol {
                Symbol::L => k + 2,
                Symbol::Eps => k + 1,
                Symbol::Delta => 2,
                Symbol::Antecedent | Symbol::Consequent => 3,
            };
            total = total.saturating_mul(factor);
        }
        total
    }

    pub fn is_member(&self, set: &FixedBitSet) -> bool {
        for (pos, &code) in self.cells.iter().enumerate() {
            match code {
                ZERO if set.contains(pos) => return false,
                ONE if !set.contains(pos) => return false,
                _ => {}
            }
        }
        self.groups().into_iter().all(|(symbol, members)| {
            let present = members.iter().filter(|&&m| set.contains(m)).count();
            match symbol {
                Symbol::L => present <= 1 || present == members.len(),
                Symbol::Eps => present <= 1,
                Symbol::Delta => present == 0 || present == members.len(),
                Symbol::Antecedent | Symbol::Consequent => {
                    let (a, b) = self.pair_sides(&members);
                    !set.contains(a) || set.contains(b)
                }
            }
        })
    }

    fn pair_sides(&self, members: &[usize]) -> (usize, usize) {
        match self.cell(members[0]) {
            Cell::Group(Symbol::Antecedent, _) => (members[0], members[1]),
            _ => (members[1], members[0]),
        }
    }

    /// Iterates over every encoded subset exactly once.
    pub fn members(&self) -> RowMembers {
        let width = self.width();
        let mut base = FixedBitSet::with_capacity(width);
        let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
        for (pos, &code) in self.cells.iter().enumerate() {
            match code {
                ONE => base.insert(pos),
                TWO => choices.push(vec![vec![], vec![pos]]),
                _ => {}
            }
        }
        for (symbol, members) in self.groups() {
            let mut options: Vec<Vec<usize>> = vec![vec![]];
            match symbol {
                Symbol::L => {
                    options.extend(members.iter().map(|&m| vec![m]));
                    options.push(members.clone());
                }
                Symbol::Eps => options.extend(members.iter().map(|&m| vec![m])),
                Symbol::Delta => options.push(members.clone()),
                Symbol::Antecedent | Symbol::Consequent => {
                    let (a, b) = self.pair_sides(&members);
                    options.push(vec![b]);
                    options.push(vec![a, b]);
                }
            }
            choices.push(options);
        }
        RowMembers {
            base,
            odometer: vec![0; choices.len()],
            choices,
            done: false,
        }
    }

    /// Juxtaposes rows over consecutive position blocks.
    pub fn concat(parts: &[&MultiValuedRow]) -> MultiValuedRow {
        let mut cells = Vec::with_capacity(parts.iter().map(|r| r.width()).sum());
        let mut base = 0u32;
        for part in parts {
            let part = part.normalized();
            cells.extend(part.cells.iter().map(|&c| match Self::id_of(c) {
                Some(id) => (c & 7) | ((id + base) << TAG_BITS) as u16,
                None => c,
            }));
            base += part.max_id().map_or(0, |m| m + 1);
        }
        MultiValuedRow { cells }
    }

    /// Canonical copy with group ids renumbered by first appearance.
    pub fn normalized(&self) -> Self {
        let mut seen: Vec<u32> = Vec::new();
        let cells = self
            .cells
            .iter()
            .map(|&c| match Self::id_of(c) {
                Some(id) => {
                    let k = match seen.iter().position(|&s| s == id) {
                        Some(k) => k,
                        None => {
                            seen.push(id);
                            seen.len() - 1
                        }
                    };
                    (c & 7) | (k as u16) << TAG_BITS
                }
                None => c,
            })
            .collect();
        MultiValuedRow { cells }
    }

    /// Parses the tabular notation, e.g. `ε ε 0 a 0 1 b` or `ε₁ ε₁ 0 ε₂ ε₂`.
    /// Cells sharing a symbol and subscript form one group; `a_k`/`b_k` pair up.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
            .filter(|t| !t.is_empty())
            .collect();
        let mut row = MultiValuedRow::full(tokens.len());
        let mut keyed: Vec<((Symbol, String), Vec<usize>)> = Vec::new();
        for (pos, token) in tokens.iter().enumerate() {
            let mut chars = token.chars();
            let head = chars.next().unwrap();
            let sub: String = chars.map(normalize_digit).collect();
            let symbol = match head {
                '0' if sub.is_empty() => {
                    row.cells[pos] = ZERO;
                    continue;
                }
                '1' if sub.is_empty() => {
                    row.cells[pos] = ONE;
                    continue;
                }
                '2' if sub.is_empty() => continue,
                'l' => Symbol::L,
                'ε' | 'e' => Symbol::Eps,
                'δ' | 'd' => Symbol::Delta,
                'a' => Symbol::Antecedent,
                'b' => Symbol::Consequent,
                _ => return Err(Error::Parse(format!("unknown row symbol `{token}`"))),
            };
            let key = match symbol {
                Symbol::Consequent => (Symbol::Antecedent, sub),
                s => (s, sub),
            };
            match keyed.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(pos),
                None => keyed.push((key, vec![pos])),
            }
        }
        for ((symbol, sub), members) in keyed {
            match symbol {
                Symbol::Antecedent => {
                    let a: Vec<usize> = members.iter().copied().filter(|&p| tokens[p].starts_with('a')).collect();
                    let b: Vec<usize> = members.iter().copied().filter(|&p| tokens[p].starts_with('b')).collect();
                    if a.len() != 1 || b.len() != 1 {
                        return Err(Error::Parse(format!("pair `a{sub}`/`b{sub}` must have one of each")));
                    }
                    row.add_pair(a[0], b[0]);
                }
                _ => {
                    let min = if symbol == Symbol::L { 3 } else { 2 };
                    if members.len() < min {
                        return Err(Error::Parse(format!("group needs at least {min} members")));
                    }
                    row.add_group(symbol, members);
                }
            }
        }
        Ok(row)
    }
}

fn bit(value: bool) -> u16 {
    if value {
        ONE
    } else {
        ZERO
    }
}

fn normalize_digit(c: char) -> char {
    match c {
        '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).unwrap(),
        other => other,
    }
}

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|d| char::from_u32('₀' as u32 + d.to_digit(10).unwrap()).unwrap())
        .collect()
}

impl fmt::Display for MultiValuedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = self.normalized();
        // subscripts only when a symbol occurs in more than one group;
        // normalized ids follow first appearance, as do `groups()`
        let groups = row.groups();
        let mut ordinal = vec![0usize; groups.len()];
        let mut per_symbol: Vec<(char, usize)> = Vec::new();
        for (id, (symbol, _)) in groups.iter().enumerate() {
            let ch = family_glyph(*symbol);
            match per_symbol.iter_mut().find(|(c, _)| *c == ch) {
                Some((_, n)) => {
                    *n += 1;
                    ordinal[id] = *n;
                }
                None => {
                    per_symbol.push((ch, 1));
                    ordinal[id] = 1;
                }
            }
        }
        let repeated = |symbol: Symbol| per_symbol.iter().any(|&(c, n)| c == family_glyph(symbol) && n > 1);
        let parts: Vec<String> = row
            .cells()
            .map(|cell| match cell {
                Cell::Zero => "0".to_string(),
                Cell::One => "1".to_string(),
                Cell::Two => "2".to_string(),
                Cell::Group(symbol, id) => {
                    let mut s = glyph(symbol).to_string();
                    if repeated(symbol) {
                        s.push_str(&subscript(ordinal[id as usize]));
                    }
                    s
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn family_glyph(symbol: Symbol) -> char {
    match glyph(symbol) {
        'b' => 'a',
        c => c,
    }
}

impl fmt::Debug for MultiValuedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

fn glyph(symbol: Symbol) -> char {
    match symbol {
        Symbol::L => 'l',
        Symbol::Eps => 'ε',
        Symbol::Delta => 'δ',
        Symbol::Antecedent => 'a',
        Symbol::Consequent => 'b',
    }
}

pub struct RowMembers {
    base: FixedBitSet,
    choices: Vec<Vec<Vec<usize>>>,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for RowMembers {
    type Item = FixedBitSet;

    fn next(&mut self) -> Option<FixedBitSet> {
        if self.done {
            return None;
        }
        let mut set = self.base.clone();
        for (options, &k) in self.choices.iter().zip(&self.odometer) {
            for &p in &options[k] {
                set.insert(p);
            }
        }
        let mut i = 0;
        loop {
            if i == self.odometer.len() {
                self.done = true;
                break;
            }
            self.odometer[i] += 1;
            if self.odometer[i] < self.choices[i].len() {
                break;
            }
            self.odometer[i] = 0;
            i += 1;
        }
        Some(set)
    }
}
