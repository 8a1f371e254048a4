//! Gradual security labels and types.
//!
//! A gradual label is a lattice element or the unknown label `?`. Gradual
//! types carry gradual labels at every position; the type constructors
//! themselves are never imprecise.

mod consistent;
mod evidence;
mod galois;

use std::fmt;

pub use consistent::{
    clabel_leq, csub_join, csub_meet, csubtype, glabel_join, glabel_meet, gstamp,
};
pub use evidence::{
    consistent_transitivity, gmeet_label, gmeet_type, icod, idom, interior_label, interior_type,
    merge_label, merge_type, Evidence, LabelEvidence,
};
pub use galois::{
    alpha_label, alpha_type, gamma_label, gamma_type, precision_label, precision_type,
};

use crate::lattice::{InLattice, Label, SecurityLattice};
use crate::statics::SType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GLabel {
    Known(Label),
    Unknown,
}

impl GLabel {
    /// Every gradual label over `lattice`: the elements in order, then `?`.
    pub fn all(lattice: &SecurityLattice) -> Vec<GLabel> {
        lattice
            .labels()
            .map(GLabel::Known)
            .chain([GLabel::Unknown])
            .collect()
    }

    pub fn known(self) -> Option<Label> {
        match self {
            GLabel::Known(l) => Some(l),
            GLabel::Unknown => None,
        }
    }

    pub fn is_top(self, lattice: &SecurityLattice) -> bool {
        self == GLabel::Known(lattice.top())
    }

    pub fn is_bottom(self, lattice: &SecurityLattice) -> bool {
        self == GLabel::Known(lattice.bottom())
    }
}

impl From<Label> for GLabel {
    fn from(l: Label) -> Self {
        GLabel::Known(l)
    }
}

impl InLattice for GLabel {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GLabel::Known(l) => l.fmt_in(lattice, f),
            GLabel::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GType {
    Bool(GLabel),
    Fun(Box<GType>, Box<GType>, GLabel),
}

impl GType {
    pub fn fun(dom: GType, cod: GType, label: GLabel) -> Self {
        GType::Fun(Box::new(dom), Box::new(cod), label)
    }

    pub fn label(&self) -> GLabel {
        match self {
            GType::Bool(l) | GType::Fun(_, _, l) => *l,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GType::Bool(_) => 1,
            GType::Fun(a, b, _) => 1 + a.depth().max(b.depth()),
        }
    }

    /// The static type with the same labels, if no label is `?`.
    pub fn to_static(&self) -> Option<SType> {
        Some(match self {
            GType::Bool(l) => SType::Bool(l.known()?),
            GType::Fun(a, b, l) => SType::fun(a.to_static()?, b.to_static()?, l.known()?),
        })
    }

    pub fn same_shape(&self, other: &GType) -> bool {
        match (self, other) {
            (GType::Bool(_), GType::Bool(_)) => true,
            (GType::Fun(a1, b1, _), GType::Fun(a2, b2, _)) => {
                a1.same_shape(a2) && b1.same_shape(b2)
            }
            _ => false,
        }
    }

    /// All gradual types of depth at most `max_depth`, smallest first.
    pub fn enumerate(lattice: &SecurityLattice, max_depth: usize) -> Vec<GType> {
        let labels = GLabel::all(lattice);
        let mut out: Vec<GType> = Vec::new();
        for depth in 1..=max_depth {
            let smaller = out.clone();
            for &l in &labels {
                if depth == 1 {
                    out.push(GType::Bool(l));
                    continue;
                }
                for a in &smaller {
                    for b in &smaller {
                        if a.depth().max(b.depth()) == depth - 1 {
                            out.push(GType::fun(a.clone(), b.clone(), l));
                        }
                    }
                }
            }
        }
        out
    }
}

impl From<&SType> for GType {
    fn from(s: &SType) -> Self {
        match s {
            SType::Bool(l) => GType::Bool(GLabel::Known(*l)),
            SType::Fun(a, b, l) => GType::fun(a.as_ref().into(), b.as_ref().into(), (*l).into()),
        }
    }
}

impl InLattice for GType {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GType::Bool(l) => {
                f.write_str("Bool@")?;
                l.fmt_in(lattice, f)
            }
            GType::Fun(a, b, l) => {
                f.write_str("(")?;
                a.fmt_in(lattice, f)?;
                f.write_str(" -> ")?;
                b.fmt_in(lattice, f)?;
                f.write_str(")@")?;
                l.fmt_in(lattice, f)
            }
        }
    }
}
