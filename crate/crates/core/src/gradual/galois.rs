//! Concretization, abstraction and precision.

use std::collections::BTreeSet;

use super::{GLabel, GType};
use crate::lattice::{Label, SecurityLattice};
use crate::statics::SType;

pub fn gamma_label(lattice: &SecurityLattice, gl: GLabel) -> BTreeSet<Label> {
    match gl {
        GLabel::Known(l) => BTreeSet::from([l]),
        GLabel::Unknown => lattice.labels().collect(),
    }
}

/// Singletons abstract to their element, larger sets to `?`, and the empty
/// set has no abstraction.
pub fn alpha_label(labels: &BTreeSet<Label>) -> Option<GLabel> {
    match labels.len() {
        0 => None,
        1 => labels.first().copied().map(GLabel::Known),
        _ => Some(GLabel::Unknown),
    }
}

pub fn gamma_type(lattice: &SecurityLattice, gt: &GType) -> BTreeSet<SType> {
    match gt {
        GType::Bool(l) => gamma_label(lattice, *l)
            .into_iter()
            .map(SType::Bool)
            .collect(),
        GType::Fun(a, b, l) => {
            let doms = gamma_type(lattice, a);
            let cods = gamma_type(lattice, b);
            let mut out = BTreeSet::new();
            for label in gamma_label(lattice, *l) {
                for d in &doms {
                    for c in &cods {
                        out.insert(SType::fun(d.clone(), c.clone(), label));
                    }
                }
            }
            out
        }
    }
}

/// Abstraction of a set of static types. Undefined on the empty set and on
/// sets whose members differ in more than their labels.
pub fn alpha_type(types: &BTreeSet<SType>) -> Option<GType> {
    let first = types.first()?;
    let labels: BTreeSet<Label> = types.iter().map(SType::label).collect();
    let label = alpha_label(&labels)?;
    match first {
        SType::Bool(_) => types
            .iter()
            .all(|s| matches!(s, SType::Bool(_)))
            .then_some(GType::Bool(label)),
        SType::Fun(..) => {
            let mut doms = BTreeSet::new();
            let mut cods = BTreeSet::new();
            for s in types {
                let SType::Fun(a, b, _) = s else {
                    return None;
                };
                doms.insert((**a).clone());
                cods.insert((**b).clone());
            }
            Some(GType::fun(alpha_type(&doms)?, alpha_type(&cods)?, label))
        }
    }
}

/// `a ⊑ b`: `a` is at least as precise as `b`.
pub fn precision_label(a: GLabel, b: GLabel) -> bool {
    b == GLabel::Unknown || a == b
}

pub fn precision_type(a: &GType, b: &GType) -> bool {
    match (a, b) {
        (GType::Bool(l1), GType::Bool(l2)) => precision_label(*l1, *l2),
        (GType::Fun(a1, b1, l1), GType::Fun(a2, b2, l2)) => {
            precision_label(*l1, *l2) && precision_type(a1, a2) && precision_type(b1, b2)
        }
        _ => false,
    }
}
