//! Consistent ordering, gradual join and meet, and consistent subtyping.

use super::{GLabel, GType};
use crate::lattice::SecurityLattice;

pub fn clabel_leq(lattice: &SecurityLattice, a: GLabel, b: GLabel) -> bool {
    match (a, b) {
        (GLabel::Known(x), GLabel::Known(y)) => lattice.leq(x, y),
        _ => true,
    }
}

pub fn glabel_join(lattice: &SecurityLattice, a: GLabel, b: GLabel) -> GLabel {
    match (a, b) {
        (GLabel::Known(x), GLabel::Known(y)) => GLabel::Known(lattice.join(x, y)),
        (l, GLabel::Unknown) | (GLabel::Unknown, l) if l.is_top(lattice) => l,
        _ => GLabel::Unknown,
    }
}

pub fn glabel_meet(lattice: &SecurityLattice, a: GLabel, b: GLabel) -> GLabel {
    match (a, b) {
        (GLabel::Known(x), GLabel::Known(y)) => GLabel::Known(lattice.meet(x, y)),
        (l, GLabel::Unknown) | (GLabel::Unknown, l) if l.is_bottom(lattice) => l,
        _ => GLabel::Unknown,
    }
}

/// Raise the top-level label of `gt` by `gl`.
pub fn gstamp(lattice: &SecurityLattice, gt: &GType, gl: GLabel) -> GType {
    match gt {
        GType::Bool(l) => GType::Bool(glabel_join(lattice, *l, gl)),
        GType::Fun(a, b, l) => GType::Fun(a.clone(), b.clone(), glabel_join(lattice, *l, gl)),
    }
}

pub fn csubtype(lattice: &SecurityLattice, a: &GType, b: &GType) -> bool {
    match (a, b) {
        (GType::Bool(l1), GType::Bool(l2)) => clabel_leq(lattice, *l1, *l2),
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2)) => {
            clabel_leq(lattice, *l1, *l2) && csubtype(lattice, a2, a1) && csubtype(lattice, b1, b2)
        }
        _ => false,
    }
}

pub fn csub_join(lattice: &SecurityLattice, a: &GType, b: &GType) -> Option<GType> {
    match (a, b) {
        (GType::Bool(l1), GType::Bool(l2)) => Some(GType::Bool(glabel_join(lattice, *l1, *l2))),
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2)) => Some(GType::fun(
            csub_meet(lattice, a1, a2)?,
            csub_join(lattice, b1, b2)?,
            glabel_join(lattice, *l1, *l2),
        )),
        _ => None,
    }
}

pub fn csub_meet(lattice: &SecurityLattice, a: &GType, b: &GType) -> Option<GType> {
    match (a, b) {
        (GType::Bool(l1), GType::Bool(l2)) => Some(GType::Bool(glabel_meet(lattice, *l1, *l2))),
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2)) => Some(GType::fun(
            csub_join(lattice, a1, a2)?,
            csub_meet(lattice, b1, b2)?,
            glabel_meet(lattice, *l1, *l2),
        )),
        _ => None,
    }
}
