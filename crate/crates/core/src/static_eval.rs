//! Evaluation of static programs: a small-step machine with term stamping and
//! a big-step evaluator used as its oracle.
//!
//! Evaluation is left to right. Only closed values are ever substituted, so
//! substitution never captures.

use std::fmt;

use thiserror::Error;

use crate::lattice::{InLattice, Label, SecurityLattice};
use crate::statics::{SType, StaticKind, StaticTerm};
use crate::syntax::{Name, Span};

/// A value: a boolean or a lambda, with its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticValue {
    pub raw: RawValue,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawValue {
    Bool(bool),
    Lam {
        param: Name,
        annot: SType,
        body: StaticTerm,
    },
}

impl StaticValue {
    pub fn from_term(t: &StaticTerm) -> Option<StaticValue> {
        match &t.kind {
            StaticKind::Bool(b, l) => Some(StaticValue {
                raw: RawValue::Bool(*b),
                label: *l,
            }),
            StaticKind::Lam {
                param,
                annot,
                body,
                label,
            } => Some(StaticValue {
                raw: RawValue::Lam {
                    param: param.clone(),
                    annot: annot.clone(),
                    body: (**body).clone(),
                },
                label: *label,
            }),
            _ => None,
        }
    }

    pub fn into_term(self, span: Span) -> StaticTerm {
        let kind = match self.raw {
            RawValue::Bool(b) => StaticKind::Bool(b, self.label),
            RawValue::Lam { param, annot, body } => StaticKind::Lam {
                param,
                annot,
                body: Box::new(body),
                label: self.label,
            },
        };
        StaticTerm::new(kind, span)
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.raw {
            RawValue::Bool(b) => Some(b),
            RawValue::Lam { .. } => None,
        }
    }
}

impl InLattice for StaticValue {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.clone().into_term(Span::default()).fmt_in(lattice, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StaticEvalError {
    #[error("stuck at {span}: {term}")]
    Stuck { term: String, span: Span },
    #[error("no value after {0} steps")]
    OutOfFuel(usize),
}

fn stuck(t: &StaticTerm, lattice: &SecurityLattice) -> StaticEvalError {
    StaticEvalError::Stuck {
        term: lattice.render(t),
        span: t.span,
    }
}

/// Replace free occurrences of `x` in `t` by the closed value `v`.
pub fn substitute(t: &StaticTerm, x: &str, v: &StaticTerm) -> StaticTerm {
    let sub = |t: &StaticTerm| Box::new(substitute(t, x, v));
    let kind = match &t.kind {
        StaticKind::Var(y) if &**y == x => return v.clone(),
        StaticKind::Bool(..) | StaticKind::Var(_) => t.kind.clone(),
        StaticKind::Lam { param, .. } if &**param == x => t.kind.clone(),
        StaticKind::Lam {
            param,
            annot,
            body,
            label,
        } => StaticKind::Lam {
            param: param.clone(),
            annot: annot.clone(),
            body: sub(body),
            label: *label,
        },
        StaticKind::App(a, b) => StaticKind::App(sub(a), sub(b)),
        StaticKind::Op(op, a, b) => StaticKind::Op(*op, sub(a), sub(b)),
        StaticKind::If(c, a, b) => StaticKind::If(sub(c), sub(a), sub(b)),
        StaticKind::Ascribe(a, s) => StaticKind::Ascribe(sub(a), s.clone()),
        StaticKind::Stamp(a, l) => StaticKind::Stamp(sub(a), *l),
    };
    StaticTerm::new(kind, t.span)
}

/// Stamp a value's label.
fn stamp_value(t: &StaticTerm, l: Label, lattice: &SecurityLattice) -> StaticTerm {
    let mut out = t.clone();
    match &mut out.kind {
        StaticKind::Bool(_, m) | StaticKind::Lam { label: m, .. } => *m = lattice.join(*m, l),
        _ => unreachable!("stamp_value on a non-value"),
    }
    out
}

/// One reduction step. `Ok(None)` means `t` is already a value.
pub fn step_static(
    t: &StaticTerm,
    lattice: &SecurityLattice,
) -> Result<Option<StaticTerm>, StaticEvalError> {
    if t.is_value() {
        return Ok(None);
    }
    let span = t.span;
    let rebuild = |kind| Ok(Some(StaticTerm::new(kind, span)));
    let inner = |u: &StaticTerm| -> Result<Box<StaticTerm>, StaticEvalError> {
        step_static(u, lattice)?
            .map(Box::new)
            .ok_or_else(|| stuck(u, lattice))
    };
    match &t.kind {
        StaticKind::Bool(..) | StaticKind::Lam { .. } => unreachable!(),
        StaticKind::Var(_) => Err(stuck(t, lattice)),
        StaticKind::Op(op, a, b) => {
            if !a.is_value() {
                return rebuild(StaticKind::Op(*op, inner(a)?, b.clone()));
            }
            if !b.is_value() {
                return rebuild(StaticKind::Op(*op, a.clone(), inner(b)?));
            }
            match (&a.kind, &b.kind) {
                (StaticKind::Bool(x, l1), StaticKind::Bool(y, l2)) => {
                    rebuild(StaticKind::Bool(op.apply(*x, *y), lattice.join(*l1, *l2)))
                }
                _ => Err(stuck(t, lattice)),
            }
        }
        StaticKind::App(a, b) => {
            if !a.is_value() {
                return rebuild(StaticKind::App(inner(a)?, b.clone()));
            }
            if !b.is_value() {
                return rebuild(StaticKind::App(a.clone(), inner(b)?));
            }
            match &a.kind {
                StaticKind::Lam {
                    param, body, label, ..
                } => rebuild(StaticKind::Stamp(
                    Box::new(substitute(body, param, b)),
                    *label,
                )),
                _ => Err(stuck(t, lattice)),
            }
        }
        StaticKind::If(c, a, b) => {
            if !c.is_value() {
                return rebuild(StaticKind::If(inner(c)?, a.clone(), b.clone()));
            }
            match c.kind {
                StaticKind::Bool(v, l) => {
                    let branch = if v { a } else { b };
                    rebuild(StaticKind::Stamp(branch.clone(), l))
                }
                _ => Err(stuck(t, lattice)),
            }
        }
        StaticKind::Ascribe(a, s) => {
            if !a.is_value() {
                return rebuild(StaticKind::Ascribe(inner(a)?, s.clone()));
            }
            Ok(Some((**a).clone()))
        }
        StaticKind::Stamp(a, l) => {
            if !a.is_value() {
                return rebuild(StaticKind::Stamp(inner(a)?, *l));
            }
            Ok(Some(stamp_value(a, *l, lattice)))
        }
    }
}

/// Every intermediate term of a small-step run, starting with `t` itself and
/// ending with a value.
pub fn trace_small(
    t: &StaticTerm,
    lattice: &SecurityLattice,
    fuel: usize,
) -> Result<Vec<StaticTerm>, StaticEvalError> {
    let mut out = vec![t.clone()];
    while let Some(next) = step_static(out.last().unwrap(), lattice)? {
        if out.len() > fuel {
            return Err(StaticEvalError::OutOfFuel(fuel));
        }
        out.push(next);
    }
    Ok(out)
}

/// Render a trace as `-->`-separated lines.
pub fn format_trace(trace: &[StaticTerm], lattice: &SecurityLattice) -> String {
    let mut out = String::new();
    for (i, t) in trace.iter().enumerate() {
        if i > 0 {
            out.push_str("--> ");
        }
        out.push_str(&lattice.render(t));
        out.push('\n');
    }
    out
}

/// Iterate [`step_static`] to a value.
pub fn eval_small(
    t: &StaticTerm,
    lattice: &SecurityLattice,
) -> Result<StaticValue, StaticEvalError> {
    let mut cur = t.clone();
    while let Some(next) = step_static(&cur, lattice)? {
        cur = next;
    }
    Ok(StaticValue::from_term(&cur).expect("step_static stops only at values"))
}

/// Natural semantics: results are stamped with the label of the applied
/// lambda or of the branch guard.
pub fn eval_big(t: &StaticTerm, lattice: &SecurityLattice) -> Result<StaticValue, StaticEvalError> {
    let stamped = |v: StaticValue, l: Label| StaticValue {
        label: lattice.join(v.label, l),
        raw: v.raw,
    };
    match &t.kind {
        StaticKind::Bool(..) | StaticKind::Lam { .. } => Ok(StaticValue::from_term(t).unwrap()),
        StaticKind::Var(_) => Err(stuck(t, lattice)),
        StaticKind::Op(op, a, b) => {
            let va = eval_big(a, lattice)?;
            let vb = eval_big(b, lattice)?;
            match (va.as_bool(), vb.as_bool()) {
                (Some(x), Some(y)) => Ok(StaticValue {
                    raw: RawValue::Bool(op.apply(x, y)),
                    label: lattice.join(va.label, vb.label),
                }),
                _ => Err(stuck(t, lattice)),
            }
        }
        StaticKind::App(a, b) => {
            let vf = eval_big(a, lattice)?;
            let va = eval_big(b, lattice)?;
            let RawValue::Lam { param, body, .. } = &vf.raw else {
                return Err(stuck(t, lattice));
            };
            let arg = va.into_term(b.span);
            let result = eval_big(&substitute(body, param, &arg), lattice)?;
            Ok(stamped(result, vf.label))
        }
        StaticKind::If(c, a, b) => {
            let vc = eval_big(c, lattice)?;
            let Some(guard) = vc.as_bool() else {
                return Err(stuck(t, lattice));
            };
            let result = eval_big(if guard { a } else { b }, lattice)?;
            Ok(stamped(result, vc.label))
        }
        StaticKind::Ascribe(a, _) => eval_big(a, lattice),
        StaticKind::Stamp(a, l) => Ok(stamped(eval_big(a, lattice)?, *l)),
    }
}
