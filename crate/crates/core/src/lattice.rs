//! Finite bounded security lattices.
//!
//! A lattice is loaded from a small JSON document listing its elements and
//! the declared `x ≼ y` edges. The order is closed reflexively and
//! transitively, then validated: it must be antisymmetric, every pair must
//! have a unique least upper bound and greatest lower bound, and there must
//! be a unique top and bottom. Join and meet are precomputed tables.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Deserialize;
use thiserror::Error;

/// The two-point lattice `L ≼ H`.
pub const TWO_POINT: &str = r#"{"elements": ["L", "H"], "order": [["L", "H"]]}"#;

/// The four-point diamond `Bot ≼ M1, M2 ≼ Top`.
pub const DIAMOND: &str = r#"{
  "elements": ["Bot", "M1", "M2", "Top"],
  "order": [["Bot", "M1"], ["Bot", "M2"], ["M1", "Top"], ["M2", "Top"]]
}"#;

/// Names accepted by [`SecurityLattice::builtin`].
pub const BUILTIN_NAMES: [&str; 2] = ["two-point", "diamond"];

const RESERVED: [&str; 6] = ["true", "false", "if", "then", "else", "Bool"];

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("malformed lattice config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element `{0}`")]
    Duplicate(String),
    #[error("element name `{0}` is not a valid label identifier")]
    BadName(String),
    #[error("order edge mentions unknown element `{0}`")]
    UnknownElement(String),
    #[error("order has a cycle through `{0}` and `{1}`")]
    Cycle(String, String),
    #[error("`{0}` and `{1}` have no unique least upper bound")]
    NoJoin(String, String),
    #[error("`{0}` and `{1}` have no unique greatest lower bound")]
    NoMeet(String, String),
    #[error("lattice has no unique top element")]
    NoTop,
    #[error("lattice has no unique bottom element")]
    NoBottom,
    #[error("lattice has {0} elements; at most {max} are supported", max = u16::MAX)]
    TooLarge(usize),
}

#[derive(Deserialize)]
struct Config {
    elements: Vec<String>,
    order: Vec<(String, String)>,
}

/// An element of a loaded lattice.
///
/// Labels are small copyable handles. Every label remembers which lattice it
/// came from; mixing labels of different lattices is a usage error and
/// panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    lattice: u64,
    index: u16,
}

impl Label {
    pub fn index(self) -> usize {
        self.index as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecurityLattice {
    id: u64,
    names: Vec<String>,
    leq: Vec<bool>,
    join: Vec<u16>,
    meet: Vec<u16>,
    bottom: u16,
    top: u16,
}

impl SecurityLattice {
    /// Parse and validate a JSON lattice description.
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let config: Config = serde_json::from_str(text)?;
        Self::from_parts(&config.elements, &config.order)
    }

    /// Build a lattice from element names and declared `x ≼ y` edges.
    pub fn from_parts<S: AsRef<str>>(
        elements: &[S],
        order: &[(S, S)],
    ) -> Result<Self, LatticeError> {
        let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_owned()).collect();
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > u16::MAX as usize {
            return Err(LatticeError::TooLarge(n));
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(LatticeError::BadName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(LatticeError::Duplicate(name.clone()));
            }
        }
        let position = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| LatticeError::UnknownElement(name.to_owned()))
        };

        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (lo, hi) in order {
            let (a, b) = (position(lo.as_ref())?, position(hi.as_ref())?);
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::Cycle(names[i].clone(), names[j].clone()));
                }
            }
        }

        let le = |a: usize, b: usize| leq[a * n + b];
        // The least element of `candidates` under `better`, if unique.
        let extremum = |candidates: &[usize], below: &dyn Fn(usize, usize) -> bool| {
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| below(c, d)))
        };

        let mut join = vec![0u16; n * n];
        let mut meet = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let upper: Vec<usize> = (0..n).filter(|&z| le(a, z) && le(b, z)).collect();
                let lub = extremum(&upper, &|x, y| le(x, y))
                    .ok_or_else(|| LatticeError::NoJoin(names[a].clone(), names[b].clone()))?;
                let lower: Vec<usize> = (0..n).filter(|&z| le(z, a) && le(z, b)).collect();
                let glb = extremum(&lower, &|x, y| le(y, x))
                    .ok_or_else(|| LatticeError::NoMeet(names[a].clone(), names[b].clone()))?;
                join[a * n + b] = lub as u16;
                meet[a * n + b] = glb as u16;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let top = extremum(&all, &|x, y| le(y, x)).ok_or(LatticeError::NoTop)?;
        let bottom = extremum(&all, &|x, y| le(x, y)).ok_or(LatticeError::NoBottom)?;

        let mut hasher = DefaultHasher::new();
        names.hash(&mut hasher);
        leq.hash(&mut hasher);
        Ok(SecurityLattice {
            id: hasher.finish(),
            names,
            leq,
            join,
            meet,
            bottom: bottom as u16,
            top: top as u16,
        })
    }

    /// One of the built-in lattices, by name.
    pub fn builtin(name: &str) -> Option<Self> {
        let text = match name {
            "two-point" => TWO_POINT,
            "diamond" => DIAMOND,
            _ => return None,
        };
        Some(Self::from_json(text).expect("built-in lattice is valid"))
    }

    pub fn two_point() -> Self {
        Self::builtin("two-point").unwrap()
    }

    pub fn diamond() -> Self {
        Self::builtin("diamond").unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn labels(&self) -> impl ExactSizeIterator<Item = Label> + '_ {
        (0..self.names.len()).map(|i| self.at(i))
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.at(i))
    }

    pub fn name(&self, l: Label) -> &str {
        &self.names[self.own(l)]
    }

    pub fn top(&self) -> Label {
        self.at(self.top as usize)
    }

    pub fn bottom(&self) -> Label {
        self.at(self.bottom as usize)
    }

    pub fn contains(&self, l: Label) -> bool {
        l.lattice == self.id && l.index() < self.names.len()
    }

    pub fn leq(&self, a: Label, b: Label) -> bool {
        let n = self.names.len();
        self.leq[self.own(a) * n + self.own(b)]
    }

    pub fn join(&self, a: Label, b: Label) -> Label {
        let n = self.names.len();
        self.at(self.join[self.own(a) * n + self.own(b)] as usize)
    }

    pub fn meet(&self, a: Label, b: Label) -> Label {
        let n = self.names.len();
        self.at(self.meet[self.own(a) * n + self.own(b)] as usize)
    }

    /// Render any lattice-dependent value.
    pub fn show<'a, T: InLattice + ?Sized>(&'a self, value: &'a T) -> Shown<'a, T> {
        Shown {
            lattice: self,
            value,
        }
    }

    pub fn render<T: InLattice + ?Sized>(&self, value: &T) -> String {
        self.show(value).to_string()
    }

    fn at(&self, index: usize) -> Label {
        Label {
            lattice: self.id,
            index: index as u16,
        }
    }

    fn own(&self, l: Label) -> usize {
        assert!(
            self.contains(l),
            "label {l:?} does not belong to this lattice"
        );
        l.index()
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !RESERVED.contains(&name)
}

/// Values whose textual form needs the lattice's element names.
pub trait InLattice {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result;
}

pub struct Shown<'a, T: ?Sized> {
    lattice: &'a SecurityLattice,
    value: &'a T,
}

impl<T: InLattice + ?Sized> fmt::Display for Shown<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt_in(self.lattice, f)
    }
}

impl InLattice for Label {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(lattice.name(*self))
    }
}

impl<T: InLattice> InLattice for [T] {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            x.fmt_in(lattice, f)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_basics() {
        let lat = SecurityLattice::two_point();
        let (l, h) = (lat.label("L").unwrap(), lat.label("H").unwrap());
        assert_eq!(lat.bottom(), l);
        assert_eq!(lat.top(), h);
        assert_eq!(lat.join(l, h), h);
        assert_eq!(lat.meet(l, h), l);
        assert!(!lat.leq(h, l));
    }

    #[test]
    fn one_point() {
        let lat = SecurityLattice::from_json(r#"{"elements":["X"],"order":[]}"#).unwrap();
        assert_eq!(lat.top(), lat.bottom());
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            (r#"{"elements":[],"order":[]}"#, "no elements"),
            (
                r#"{"elements":["A","B"],"order":[["A","B"],["B","A"]]}"#,
                "cycle",
            ),
            (r#"{"elements":["A","B"],"order":[]}"#, "least upper bound"),
            (r#"{"elements":["A","A"],"order":[]}"#, "duplicate"),
            (
                r#"{"elements":["A"],"order":[["A","Z"]]}"#,
                "unknown element",
            ),
            (r#"{"elements":["?"],"order":[]}"#, "not a valid label"),
            (r#"{"elements":["if"],"order":[]}"#, "not a valid label"),
            (r#"{"elements":"#, "malformed"),
        ];
        for (text, needle) in cases {
            let err = SecurityLattice::from_json(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text}: {err}");
        }
    }

    #[test]
    #[should_panic(expected = "does not belong")]
    fn foreign_label_panics() {
        let a = SecurityLattice::two_point();
        let b = SecurityLattice::diamond();
        a.leq(b.top(), b.top());
    }

    #[test]
    fn identical_configs_share_labels() {
        let a = SecurityLattice::two_point();
        let b = SecurityLattice::from_json(TWO_POINT).unwrap();
        assert!(a.leq(b.bottom(), a.top()));
    }
}
