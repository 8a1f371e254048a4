//! Evidence: interior, precision meet, merge, consistent transitivity and
//! inversion.

use std::fmt;

use super::{clabel_leq, gstamp, precision_label, precision_type, GLabel, GType};
use crate::lattice::{InLattice, SecurityLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelEvidence {
    pub left: GLabel,
    pub right: GLabel,
}

impl LabelEvidence {
    pub fn new(left: GLabel, right: GLabel) -> Self {
        LabelEvidence { left, right }
    }

    /// Componentwise precision.
    pub fn refines(&self, other: &LabelEvidence) -> bool {
        precision_label(self.left, other.left) && precision_label(self.right, other.right)
    }
}

impl InLattice for LabelEvidence {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        self.left.fmt_in(lattice, f)?;
        f.write_str(", ")?;
        self.right.fmt_in(lattice, f)?;
        f.write_str(">")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Evidence {
    pub left: GType,
    pub right: GType,
}

impl Evidence {
    pub fn new(left: GType, right: GType) -> Self {
        Evidence { left, right }
    }

    /// Componentwise precision.
    pub fn refines(&self, other: &Evidence) -> bool {
        precision_type(&self.left, &other.left) && precision_type(&self.right, &other.right)
    }
}

impl InLattice for Evidence {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        self.left.fmt_in(lattice, f)?;
        f.write_str(", ")?;
        self.right.fmt_in(lattice, f)?;
        f.write_str(">")
    }
}

/// Precision meet: `?` yields to the other side, equal labels meet to
/// themselves, distinct known labels have no meet.
pub fn gmeet_label(a: GLabel, b: GLabel) -> Option<GLabel> {
    match (a, b) {
        (l, GLabel::Unknown) | (GLabel::Unknown, l) => Some(l),
        (x, y) => (x == y).then_some(x),
    }
}

pub fn gmeet_type(a: &GType, b: &GType) -> Option<GType> {
    match (a, b) {
        (GType::Bool(l1), GType::Bool(l2)) => Some(GType::Bool(gmeet_label(*l1, *l2)?)),
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2)) => Some(GType::fun(
            gmeet_type(a1, a2)?,
            gmeet_type(b1, b2)?,
            gmeet_label(*l1, *l2)?,
        )),
        _ => None,
    }
}

/// The most precise evidence for `a ≼̃ b`, if any.
pub fn interior_label(lattice: &SecurityLattice, a: GLabel, b: GLabel) -> Option<LabelEvidence> {
    let ev = |l, r| Some(LabelEvidence::new(l, r));
    match (a, b) {
        (GLabel::Known(x), GLabel::Known(y)) => lattice.leq(x, y).then(|| LabelEvidence::new(a, b)),
        (GLabel::Known(_), GLabel::Unknown) if a.is_top(lattice) => ev(a, a),
        (GLabel::Unknown, GLabel::Known(_)) if b.is_bottom(lattice) => ev(b, b),
        _ => ev(a, b),
    }
}

/// The most precise evidence for `a ≲ b`, if any. Domains are related
/// contravariantly.
pub fn interior_type(lattice: &SecurityLattice, a: &GType, b: &GType) -> Option<Evidence> {
    match (a, b) {
        (GType::Bool(l1), GType::Bool(l2)) => {
            let ev = interior_label(lattice, *l1, *l2)?;
            Some(Evidence::new(GType::Bool(ev.left), GType::Bool(ev.right)))
        }
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2)) => {
            let dom = interior_type(lattice, a2, a1)?;
            let cod = interior_type(lattice, b1, b2)?;
            let lab = interior_label(lattice, *l1, *l2)?;
            Some(Evidence::new(
                GType::fun(dom.right, cod.left, lab.left),
                GType::fun(dom.left, cod.right, lab.right),
            ))
        }
        _ => None,
    }
}

/// Combine the outer labels `a` and `c` through the middle label `b`.
///
/// A top middle forces the right end up to top, a bottom middle forces the
/// left end down to bottom; otherwise the ends are kept, provided they are
/// consistently ordered through the middle and with each other.
pub fn merge_label(
    lattice: &SecurityLattice,
    a: GLabel,
    b: GLabel,
    c: GLabel,
) -> Option<LabelEvidence> {
    let top = GLabel::Known(lattice.top());
    let bottom = GLabel::Known(lattice.bottom());
    if b == top {
        return clabel_leq(lattice, top, c).then_some(LabelEvidence::new(a, top));
    }
    if b == bottom {
        return clabel_leq(lattice, a, bottom).then_some(LabelEvidence::new(bottom, c));
    }
    (clabel_leq(lattice, a, b) && clabel_leq(lattice, b, c) && clabel_leq(lattice, a, c))
        .then_some(LabelEvidence::new(a, c))
}

pub fn merge_type(lattice: &SecurityLattice, a: &GType, b: &GType, c: &GType) -> Option<Evidence> {
    match (a, b, c) {
        (GType::Bool(l1), GType::Bool(l2), GType::Bool(l3)) => {
            let ev = merge_label(lattice, *l1, *l2, *l3)?;
            Some(Evidence::new(GType::Bool(ev.left), GType::Bool(ev.right)))
        }
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2), GType::Fun(a3, b3, l3)) => {
            let dom = merge_type(lattice, a3, a2, a1)?;
            let cod = merge_type(lattice, b1, b2, b3)?;
            let lab = merge_label(lattice, *l1, *l2, *l3)?;
            Some(Evidence::new(
                GType::fun(dom.right, cod.left, lab.left),
                GType::fun(dom.left, cod.right, lab.right),
            ))
        }
        _ => None,
    }
}

/// `e1 ∘ e2`: evidence for the composite judgment, if the inner types meet
/// and the result can be merged.
pub fn consistent_transitivity(
    lattice: &SecurityLattice,
    e1: &Evidence,
    e2: &Evidence,
) -> Option<Evidence> {
    let middle = gmeet_type(&e1.right, &e2.left)?;
    merge_type(lattice, &e1.left, &middle, &e2.right)
}

/// Evidence for the domains of a function judgment, flipped.
pub fn idom(e: &Evidence) -> Option<Evidence> {
    match (&e.left, &e.right) {
        (GType::Fun(a1, _, _), GType::Fun(a2, _, _)) => {
            Some(Evidence::new((**a2).clone(), (**a1).clone()))
        }
        _ => None,
    }
}

/// Evidence relating a function body's result to the stamped codomain of
/// the application.
pub fn icod(lattice: &SecurityLattice, e: &Evidence) -> Option<Evidence> {
    match (&e.left, &e.right) {
        (GType::Fun(_, b1, _), GType::Fun(_, b2, l2)) => {
            Some(Evidence::new((**b1).clone(), gstamp(lattice, b2, *l2)))
        }
        _ => None,
    }
}
