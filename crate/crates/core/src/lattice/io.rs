//! JSON and Graphviz DOT formats for lattices.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::FiniteLattice;
use crate::error::{Error, Result};

/// Same shape as the poset format, plus optional bottom/top hints that are
/// checked against the computed bounds.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
}

impl FiniteLattice {
    pub fn from_json(raw: &LatticeJson) -> Result<Self> {
        let index: HashMap<&str, usize> = raw
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let lookup = |name: &String| {
            index
                .get(name.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownElement(name.clone()))
        };
        let covers = raw
            .covers
            .iter()
            .map(|[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let lattice = Self::from_covers(raw.elements.clone(), &covers)?;
        if let Some(b) = &raw.bottom {
            if lookup(b)? != lattice.bottom() {
                return Err(Error::Parse(format!("`{b}` is not the bottom element")));
            }
        }
        if let Some(t) = &raw.top {
            if lookup(t)? != lattice.top() {
                return Err(Error::Parse(format!("`{t}` is not the top element")));
            }
        }
        Ok(lattice)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: LatticeJson = serde_json::from_str(text)?;
        Self::from_json(&raw)
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            elements: self.names.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(a, b)| [self.names[a].clone(), self.names[b].clone()])
                .collect(),
            bottom: Some(self.names[self.bottom].clone()),
            top: Some(self.names[self.top].clone()),
        }
    }

    /// Hasse diagram as a DOT digraph; edges run from lower to upper covers and
    /// `rankdir=BT` draws them upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
        for name in &self.names {
            let _ = writeln!(out, "  {};", quote(name));
        }
        for (a, b) in self.covers() {
            let _ = writeln!(out, "  {} -> {};", quote(&self.names[a]), quote(&self.names[b]));
        }
        out.push_str("}\n");
        out
    }

    /// Reads the subset of DOT written by [`FiniteLattice::to_dot`]: quoted or
    /// bare node statements and `a -> b` edge statements, one per line.
    pub fn from_dot(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut intern = |raw: &str, names: &mut Vec<String>| -> Result<usize> {
            let name = unquote(raw.trim())?;
            Ok(*index.entry(name.clone()).or_insert_with(|| {
                names.push(name);
                names.len() - 1
            }))
        };
        for line in text.lines() {
            let line = line.trim().trim_end_matches(';').trim();
            if line.is_empty()
                || line.starts_with("digraph")
                || line == "}"
                || line.starts_with("rankdir")
                || line.starts_with("node ")
                || line.starts_with("//")
            {
                continue;
            }
            if let Some((a, b)) = line.split_once("->") {
                let a = intern(a, &mut names)?;
                let b = intern(b.split('[').next().unwrap_or(b), &mut names)?;
                edges.push((a, b));
            } else {
                intern(line.split('[').next().unwrap_or(line), &mut names)?;
            }
        }
        Self::from_covers(names, &edges)
    }
}

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

fn unquote(raw: &str) -> Result<String> {
    if let Some(inner) = raw.strip_prefix('"') {
        let inner = inner
            .strip_suffix('"')
            .ok_or_else(|| Error::Parse(format!("unterminated string {raw}")))?;
        let mut out = String::new();
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                out.extend(chars.next());
            } else {
                out.push(c);
            }
        }
        Ok(out)
    } else if raw.is_empty() {
        Err(Error::Parse("empty node name".into()))
    } else {
        Ok(raw.to_string())
    }
}
