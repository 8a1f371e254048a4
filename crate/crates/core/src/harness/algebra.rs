//! Checks over labels, types and evidence of a lattice.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use super::{Counterexample, PropertyReport};
use crate::gradual::{
    alpha_label, alpha_type, clabel_leq, consistent_transitivity, csubtype, gamma_label,
    gamma_type, glabel_join, glabel_meet, interior_label, interior_type, merge_label,
    precision_label, precision_type, Evidence, GLabel, GType, LabelEvidence,
};
use crate::lattice::{Label, SecurityLattice};
use crate::statics::{stamp, sub_join, sub_meet, subtype, SType};

/// Shape groups larger than this are not expanded into all their subsets.
pub const MAX_SUBSET_GROUP: usize = 16;

fn timed(name: &str, body: impl FnOnce(&mut PropertyReport)) -> PropertyReport {
    let start = Instant::now();
    let mut report = PropertyReport::new(name);
    body(&mut report);
    report.elapsed = start.elapsed();
    report
}

fn subsets<T: Ord + Clone>(items: &[T]) -> impl Iterator<Item = BTreeSet<T>> + '_ {
    (0u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| x.clone())
            .collect()
    })
}

fn show_labels(lat: &SecurityLattice, ls: &BTreeSet<Label>) -> String {
    let names: Vec<&str> = ls.iter().map(|l| lat.name(*l)).collect();
    format!("{{{}}}", names.join(", "))
}

fn show_types(lat: &SecurityLattice, ts: &BTreeSet<SType>) -> String {
    let names: Vec<String> = ts.iter().map(|t| lat.render(t)).collect();
    format!("{{{}}}", names.join(", "))
}

fn show_opt<T: crate::lattice::InLattice>(lat: &SecurityLattice, v: &Option<T>) -> String {
    match v {
        Some(v) => lat.render(v),
        None => "undefined".into(),
    }
}

/// Soundness and optimality of abstraction for labels and types, `α∘γ`
/// being the identity, and precision agreeing with inclusion of
/// concretizations.
pub fn check_galois(lat: &SecurityLattice, type_depth: usize) -> PropertyReport {
    timed("galois", |r| {
        let labels: Vec<Label> = lat.labels().collect();
        let glabels = GLabel::all(lat);
        for set in subsets(&labels) {
            let a = alpha_label(&set);
            if set.is_empty() {
                r.record(a.is_none(), || {
                    Counterexample::new("alpha {}", "undefined", show_opt(lat, &a))
                });
                continue;
            }
            let Some(a) = a else {
                r.record(false, || {
                    Counterexample::new(
                        format!("alpha {}", show_labels(lat, &set)),
                        "defined",
                        "undefined",
                    )
                });
                continue;
            };
            r.record(set.is_subset(&gamma_label(lat, a)), || {
                Counterexample::new(
                    format!("sound alpha {}", show_labels(lat, &set)),
                    "subset of gamma(alpha)",
                    lat.render(&a),
                )
            });
            for &g in &glabels {
                if set.is_subset(&gamma_label(lat, g)) {
                    r.record(precision_label(a, g), || {
                        Counterexample::new(
                            format!(
                                "optimal alpha {} vs {}",
                                show_labels(lat, &set),
                                lat.render(&g)
                            ),
                            format!("alpha below {}", lat.render(&g)),
                            lat.render(&a),
                        )
                    });
                }
            }
        }
        for &g in &glabels {
            let back = alpha_label(&gamma_label(lat, g));
            r.record(back == Some(g), || {
                Counterexample::new(
                    format!("alpha gamma {}", lat.render(&g)),
                    lat.render(&g),
                    show_opt(lat, &back),
                )
            });
        }

        let gtypes = GType::enumerate(lat, type_depth);
        let mut shapes: BTreeMap<String, Vec<SType>> = BTreeMap::new();
        for s in SType::enumerate(lat, type_depth) {
            shapes.entry(shape(&GType::from(&s))).or_default().push(s);
        }
        for (name, group) in &shapes {
            if group.len() > MAX_SUBSET_GROUP {
                r.note(format!(
                    "type sets of shape {name} not expanded ({} members)",
                    group.len()
                ));
                continue;
            }
            for set in subsets(group).filter(|s| !s.is_empty()) {
                let Some(a) = alpha_type(&set) else {
                    r.record(false, || {
                        Counterexample::new(
                            format!("alpha {}", show_types(lat, &set)),
                            "defined",
                            "undefined",
                        )
                    });
                    continue;
                };
                r.record(set.is_subset(&gamma_type(lat, &a)), || {
                    Counterexample::new(
                        format!("sound alpha {}", show_types(lat, &set)),
                        "subset of gamma(alpha)",
                        lat.render(&a),
                    )
                });
                for g in gtypes.iter().filter(|g| g.same_shape(&a)) {
                    if set.is_subset(&gamma_type(lat, g)) {
                        r.record(precision_type(&a, g), || {
                            Counterexample::new(
                                format!(
                                    "optimal alpha {} vs {}",
                                    show_types(lat, &set),
                                    lat.render(g)
                                ),
                                format!("alpha below {}", lat.render(g)),
                                lat.render(&a),
                            )
                        });
                    }
                }
            }
        }
        let groups: Vec<&Vec<SType>> = shapes.values().collect();
        for (i, g1) in groups.iter().enumerate() {
            for g2 in &groups[i + 1..] {
                let set = BTreeSet::from([g1[0].clone(), g2[0].clone()]);
                let a = alpha_type(&set);
                r.record(a.is_none(), || {
                    Counterexample::new(
                        format!("alpha {}", show_types(lat, &set)),
                        "undefined",
                        show_opt(lat, &a),
                    )
                });
            }
        }
        r.record(alpha_type(&BTreeSet::new()).is_none(), || {
            Counterexample::new("alpha {}", "undefined", "defined")
        });

        let gammas: Vec<BTreeSet<SType>> = gtypes.iter().map(|g| gamma_type(lat, g)).collect();
        for (g, gamma) in gtypes.iter().zip(&gammas) {
            let back = alpha_type(gamma);
            r.record(back.as_ref() == Some(g), || {
                Counterexample::new(
                    format!("alpha gamma {}", lat.render(g)),
                    lat.render(g),
                    show_opt(lat, &back),
                )
            });
        }
        for (a, ga) in gtypes.iter().zip(&gammas) {
            for (b, gb) in gtypes.iter().zip(&gammas) {
                let p = precision_type(a, b);
                r.record(p == ga.is_subset(gb), || {
                    Counterexample::new(
                        format!("precision {} {}", lat.render(a), lat.render(b)),
                        format!("{}", ga.is_subset(gb)),
                        format!("{p}"),
                    )
                });
            }
        }
    })
}

/// A label-erased rendering of a type's shape.
fn shape(t: &GType) -> String {
    match t {
        GType::Bool(_) => "Bool".into(),
        GType::Fun(a, b, _) => format!("({} -> {})", shape(a), shape(b)),
    }
}

/// The consistent predicates and gradual label operators against their
/// definitions through concretization.
pub fn check_consistent_predicates(lat: &SecurityLattice, type_depth: usize) -> PropertyReport {
    timed("consistent", |r| {
        let glabels = GLabel::all(lat);
        for &a in &glabels {
            for &b in &glabels {
                let (ga, gb) = (gamma_label(lat, a), gamma_label(lat, b));
                let exists = ga.iter().any(|&x| gb.iter().any(|&y| lat.leq(x, y)));
                let pair = format!("{} {}", lat.render(&a), lat.render(&b));
                r.record(clabel_leq(lat, a, b) == exists, || {
                    Counterexample::new(
                        format!("clabel_leq {pair}"),
                        format!("{exists}"),
                        format!("{}", !exists),
                    )
                });
                let joins: BTreeSet<Label> = ga
                    .iter()
                    .flat_map(|&x| gb.iter().map(move |&y| lat.join(x, y)))
                    .collect();
                let meets: BTreeSet<Label> = ga
                    .iter()
                    .flat_map(|&x| gb.iter().map(move |&y| lat.meet(x, y)))
                    .collect();
                let (j, m) = (glabel_join(lat, a, b), glabel_meet(lat, a, b));
                r.record(alpha_label(&joins) == Some(j), || {
                    Counterexample::new(
                        format!("join {pair}"),
                        show_opt(lat, &alpha_label(&joins)),
                        lat.render(&j),
                    )
                });
                r.record(alpha_label(&meets) == Some(m), || {
                    Counterexample::new(
                        format!("meet {pair}"),
                        show_opt(lat, &alpha_label(&meets)),
                        lat.render(&m),
                    )
                });
            }
        }
        let gtypes = GType::enumerate(lat, type_depth);
        let gammas: Vec<BTreeSet<SType>> = gtypes.iter().map(|g| gamma_type(lat, g)).collect();
        for (a, ga) in gtypes.iter().zip(&gammas) {
            for (b, gb) in gtypes.iter().zip(&gammas) {
                let exists = ga.iter().any(|x| gb.iter().any(|y| subtype(lat, x, y)));
                let c = csubtype(lat, a, b);
                r.record(c == exists, || {
                    Counterexample::new(
                        format!("csubtype {} {}", lat.render(a), lat.render(b)),
                        format!("{exists}"),
                        format!("{c}"),
                    )
                });
            }
        }
    })
}

/// The most precise evidence for `a ≼̃ b`, by abstracting the pairs of
/// concretizations that are ordered.
pub fn brute_interior_label(lat: &SecurityLattice, a: GLabel, b: GLabel) -> Option<LabelEvidence> {
    let mut lefts = BTreeSet::new();
    let mut rights = BTreeSet::new();
    for x in gamma_label(lat, a) {
        for y in gamma_label(lat, b) {
            if lat.leq(x, y) {
                lefts.insert(x);
                rights.insert(y);
            }
        }
    }
    Some(LabelEvidence::new(
        alpha_label(&lefts)?,
        alpha_label(&rights)?,
    ))
}

/// The most precise evidence for `a ≲ b`, by abstracting the pairs of
/// concretizations that are subtypes.
pub fn brute_interior_type(lat: &SecurityLattice, a: &GType, b: &GType) -> Option<Evidence> {
    let mut lefts = BTreeSet::new();
    let mut rights = BTreeSet::new();
    let gb = gamma_type(lat, b);
    for x in gamma_type(lat, a) {
        for y in &gb {
            if subtype(lat, &x, y) {
                lefts.insert(x.clone());
                rights.insert(y.clone());
            }
        }
    }
    Some(Evidence::new(alpha_type(&lefts)?, alpha_type(&rights)?))
}

/// The closed-form interior against its definition.
pub fn check_interior_oracle(lat: &SecurityLattice, type_depth: usize) -> PropertyReport {
    timed("interior", |r| {
        let glabels = GLabel::all(lat);
        for &a in &glabels {
            for &b in &glabels {
                let (got, want) = (interior_label(lat, a, b), brute_interior_label(lat, a, b));
                r.record(got == want, || {
                    Counterexample::new(
                        format!("interior {} {}", lat.render(&a), lat.render(&b)),
                        show_opt(lat, &want),
                        show_opt(lat, &got),
                    )
                });
            }
        }
        let gtypes = GType::enumerate(lat, type_depth);
        for a in &gtypes {
            for b in gtypes.iter().filter(|b| b.same_shape(a)) {
                let (got, want) = (interior_type(lat, a, b), brute_interior_type(lat, a, b));
                r.record(got == want, || {
                    Counterexample::new(
                        format!("interior {} {}", lat.render(a), lat.render(b)),
                        show_opt(lat, &want),
                        show_opt(lat, &got),
                    )
                });
            }
        }
    })
}

/// Combination of label evidence through its definition: every ordered
/// chain through both concretizations, abstracted at the ends.
pub fn brute_transitivity_label(
    lat: &SecurityLattice,
    e1: LabelEvidence,
    e2: LabelEvidence,
) -> Option<LabelEvidence> {
    let mut lefts = BTreeSet::new();
    let mut rights = BTreeSet::new();
    for x in gamma_label(lat, e1.left) {
        for y in gamma_label(lat, e1.right).intersection(&gamma_label(lat, e2.left)) {
            for z in gamma_label(lat, e2.right) {
                if lat.leq(x, *y) && lat.leq(*y, z) {
                    lefts.insert(x);
                    rights.insert(z);
                }
            }
        }
    }
    Some(LabelEvidence::new(
        alpha_label(&lefts)?,
        alpha_label(&rights)?,
    ))
}

fn bool_ev(e: LabelEvidence) -> Evidence {
    Evidence::new(GType::Bool(e.left), GType::Bool(e.right))
}

fn label_ev(e: &Evidence) -> Option<LabelEvidence> {
    match (&e.left, &e.right) {
        (GType::Bool(a), GType::Bool(b)) => Some(LabelEvidence::new(*a, *b)),
        _ => None,
    }
}

/// Precision and ordering invariants of merge and consistent transitivity
/// over every pair of label evidences. Differences from the definitional
/// combination are listed as notes.
pub fn check_transitivity_properties(lat: &SecurityLattice) -> PropertyReport {
    timed("transitivity", |r| {
        let glabels = GLabel::all(lat);
        for &a in &glabels {
            for &b in &glabels {
                for &c in &glabels {
                    let m = merge_label(lat, a, b, c);
                    let ok = m.map_or(true, |m| {
                        precision_label(m.left, a)
                            && precision_label(m.right, c)
                            && clabel_leq(lat, m.left, m.right)
                    });
                    r.record(ok, || {
                        Counterexample::new(
                            format!(
                                "merge {} {} {}",
                                lat.render(&a),
                                lat.render(&b),
                                lat.render(&c)
                            ),
                            "result refining the ends and consistently ordered",
                            show_opt(lat, &m),
                        )
                    });
                }
            }
        }
        let evidences: Vec<LabelEvidence> = glabels
            .iter()
            .flat_map(|&a| glabels.iter().map(move |&b| LabelEvidence::new(a, b)))
            .collect();
        let mut deltas = 0;
        for &e1 in &evidences {
            for &e2 in &evidences {
                let got = consistent_transitivity(lat, &bool_ev(e1), &bool_ev(e2));
                let got = got.as_ref().and_then(label_ev);
                let ok = got.map_or(true, |g| {
                    precision_label(g.left, e1.left)
                        && precision_label(g.right, e2.right)
                        && clabel_leq(lat, g.left, g.right)
                });
                let input = format!("{} o {}", lat.render(&e1), lat.render(&e2));
                r.record(ok, || {
                    Counterexample::new(
                        input.clone(),
                        "result refining the outer components and consistently ordered",
                        show_opt(lat, &got),
                    )
                });
                let want = brute_transitivity_label(lat, e1, e2);
                if got != want {
                    deltas += 1;
                    r.note(format!(
                        "{input}: rules give {}, definition gives {}",
                        show_opt(lat, &got),
                        show_opt(lat, &want)
                    ));
                }
            }
        }
        if deltas == 0 {
            r.note("rules agree with the definitional combination on every pair");
        }
        let (top, bottom) = (GLabel::Known(lat.top()), GLabel::Known(lat.bottom()));
        if top != bottom {
            let high = bool_ev(LabelEvidence::new(top, top));
            let low = bool_ev(LabelEvidence::new(bottom, bottom));
            let got = consistent_transitivity(lat, &high, &low);
            r.record(got.is_none(), || {
                Counterexample::new(
                    format!("{} o {}", lat.render(&high), lat.render(&low)),
                    "undefined",
                    show_opt(lat, &got),
                )
            });
        }
        for l in lat.labels() {
            let e = bool_ev(LabelEvidence::new(l.into(), l.into()));
            let got = consistent_transitivity(lat, &e, &e);
            r.record(got.as_ref() == Some(&e), || {
                Counterexample::new(
                    format!("{} o {}", lat.render(&e), lat.render(&e)),
                    lat.render(&e),
                    show_opt(lat, &got),
                )
            });
        }
    })
}

/// Bounds, stamping and monotonicity lemmas of the static type algebra.
pub fn check_type_algebra_lemmas(lat: &SecurityLattice, type_depth: usize) -> PropertyReport {
    timed("lemmas", |r| {
        let types = SType::enumerate(lat, type_depth);
        let labels: Vec<Label> = lat.labels().collect();
        let show = |s: &SType| lat.render(s);
        for s1 in &types {
            for l in &labels {
                let st = stamp(lat, s1, *l);
                r.record(subtype(lat, s1, &st), || {
                    Counterexample::new(
                        format!("stamp {} {}", show(s1), lat.name(*l)),
                        format!("{} <: {}", show(s1), show(&st)),
                        "not a subtype",
                    )
                });
            }
            for s2 in &types {
                let join = sub_join(lat, s1, s2);
                let meet = sub_meet(lat, s1, s2);
                if let Some(j) = &join {
                    r.record(subtype(lat, s1, j) && subtype(lat, s2, j), || {
                        Counterexample::new(
                            format!("join {} {}", show(s1), show(s2)),
                            "an upper bound",
                            show(j),
                        )
                    });
                }
                if let Some(m) = &meet {
                    r.record(subtype(lat, m, s1) && subtype(lat, m, s2), || {
                        Counterexample::new(
                            format!("meet {} {}", show(s1), show(s2)),
                            "a lower bound",
                            show(m),
                        )
                    });
                }
                if subtype(lat, s1, s2) {
                    for &l1 in &labels {
                        for &l2 in labels.iter().filter(|&&l2| lat.leq(l1, l2)) {
                            let (a, b) = (stamp(lat, s1, l1), stamp(lat, s2, l2));
                            r.record(subtype(lat, &a, &b), || {
                                Counterexample::new(
                                    format!(
                                        "monotone {} {} {} {}",
                                        show(s1),
                                        lat.name(l1),
                                        show(s2),
                                        lat.name(l2)
                                    ),
                                    format!("{} <: {}", show(&a), show(&b)),
                                    "not a subtype",
                                )
                            });
                        }
                    }
                }
                for s3 in &types {
                    if let Some(j) = &join {
                        if subtype(lat, s1, s3) && subtype(lat, s2, s3) {
                            r.record(subtype(lat, j, s3), || {
                                Counterexample::new(
                                    format!("least {} {} {}", show(s1), show(s2), show(s3)),
                                    format!("{} <: {}", show(j), show(s3)),
                                    "not a subtype",
                                )
                            });
                        }
                    }
                    if let Some(m) = &meet {
                        if subtype(lat, s3, s1) && subtype(lat, s3, s2) {
                            r.record(subtype(lat, s3, m), || {
                                Counterexample::new(
                                    format!("greatest {} {} {}", show(s1), show(s2), show(s3)),
                                    format!("{} <: {}", show(s3), show(m)),
                                    "not a subtype",
                                )
                            });
                        }
                    }
                }
            }
        }
    })
}
