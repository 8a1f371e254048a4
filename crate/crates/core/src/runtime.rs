//! Evidence-based reduction of intrinsic terms.
//!
//! A step either fires a notion of reduction (operator, application,
//! conditional) or combines the evidence of an ascribed value with the
//! evidence around it. A failed combination ends evaluation with an error
//! that records both evidences and the span of the node that produced the
//! ascription.

use std::fmt;

use thiserror::Error;

use crate::gradual::{consistent_transitivity, glabel_join, icod, idom, Evidence, GLabel, GType};
use crate::intrinsic::{EvTerm, IKind, ITerm};
use crate::lattice::{InLattice, SecurityLattice};
use crate::syntax::{Name, Span};

/// Default step budget. The language has no recursion, so running out
/// signals a bug.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// A notion of reduction fired.
    Notion,
    /// Two evidences were combined.
    Combine,
}

impl StepKind {
    pub fn tag(self) -> &'static str {
        match self {
            StepKind::Notion => "↦",
            StepKind::Combine => "−→c",
        }
    }
}

/// Two evidences whose combination is undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceFailure {
    pub inner: Evidence,
    pub outer: Evidence,
    pub span: Span,
}

impl InLattice for EvidenceFailure {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot combine {} with {} at {}",
            lattice.show(&self.inner),
            lattice.show(&self.outer),
            self.span
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("stuck at {span}: {term}")]
    Stuck { term: String, span: Span },
    #[error("no value after {0} steps")]
    OutOfFuel(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimpleValue {
    Bool(bool, GLabel),
    Closure {
        param: Name,
        param_ty: GType,
        body: Box<ITerm>,
        label: GLabel,
    },
    Var(Name),
}

impl SimpleValue {
    pub fn from_term(t: &ITerm) -> Option<SimpleValue> {
        match &t.kind {
            IKind::Bool(b, l) => Some(SimpleValue::Bool(*b, *l)),
            IKind::Lam {
                param,
                param_ty,
                body,
                label,
            } => Some(SimpleValue::Closure {
                param: param.clone(),
                param_ty: param_ty.clone(),
                body: body.clone(),
                label: *label,
            }),
            IKind::Var(x) => Some(SimpleValue::Var(x.clone())),
            _ => None,
        }
    }

    pub fn label(&self) -> Option<GLabel> {
        match self {
            SimpleValue::Bool(_, l) | SimpleValue::Closure { label: l, .. } => Some(*l),
            SimpleValue::Var(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuntimeValue {
    Simple(SimpleValue),
    Ascribed {
        ev: Evidence,
        value: SimpleValue,
        target: GType,
    },
}

/// What an observer sees of a value: no labels, evidence or ascriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BareValue {
    Bool(bool),
    Function,
    Variable,
}

impl RuntimeValue {
    pub fn from_term(t: &ITerm) -> Option<RuntimeValue> {
        if let Some(u) = SimpleValue::from_term(t) {
            return Some(RuntimeValue::Simple(u));
        }
        match &t.kind {
            IKind::Asc { inner, target } => Some(RuntimeValue::Ascribed {
                ev: inner.ev.clone(),
                value: SimpleValue::from_term(&inner.term)?,
                target: target.clone(),
            }),
            _ => None,
        }
    }

    pub fn simple(&self) -> &SimpleValue {
        match self {
            RuntimeValue::Simple(u) | RuntimeValue::Ascribed { value: u, .. } => u,
        }
    }

    pub fn bval(&self) -> BareValue {
        match self.simple() {
            SimpleValue::Bool(b, _) => BareValue::Bool(*b),
            SimpleValue::Closure { .. } => BareValue::Function,
            SimpleValue::Var(_) => BareValue::Variable,
        }
    }
}

pub fn bval(v: &RuntimeValue) -> BareValue {
    v.bval()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value(RuntimeValue),
    Step(ITerm, StepKind),
    /// The failed combination, and the term with `error` in place of the
    /// failing subterm.
    Error(EvidenceFailure, ITerm),
}

enum Reduced {
    Stepped(StepKind),
    Failed(EvidenceFailure),
}

fn stuck(t: &ITerm, lattice: &SecurityLattice) -> EvalError {
    EvalError::Stuck {
        term: lattice.render(t),
        span: t.span,
    }
}

fn placeholder() -> ITerm {
    ITerm::new(IKind::Error, GType::Bool(GLabel::Unknown), Span::default())
}

/// Combine the evidence around an ascribed simple value with the value's
/// own evidence, in place.
fn combine_in_place(e: &mut EvTerm, lattice: &SecurityLattice) -> Reduced {
    let IKind::Asc { inner, .. } = &e.term.kind else {
        unreachable!("combine on a non-ascription")
    };
    match consistent_transitivity(lattice, &inner.ev, &e.ev) {
        Some(ev) => {
            let term = std::mem::replace(&mut e.term, placeholder());
            let IKind::Asc { inner, .. } = term.kind else {
                unreachable!()
            };
            e.ev = ev;
            e.term = inner.term;
            Reduced::Stepped(StepKind::Combine)
        }
        None => {
            let failure = EvidenceFailure {
                inner: inner.ev.clone(),
                outer: e.ev.clone(),
                span: e.term.span,
            };
            e.term.kind = IKind::Error;
            Reduced::Failed(failure)
        }
    }
}

/// Reduce inside an evidence-wrapped position that is not a simple value.
fn reduce_slot(e: &mut EvTerm, lattice: &SecurityLattice) -> Result<Reduced, EvalError> {
    if e.term.is_ascribed_value() {
        Ok(combine_in_place(e, lattice))
    } else {
        reduce(&mut e.term, lattice)
    }
}

/// One step on a non-value, in place.
fn reduce(t: &mut ITerm, lattice: &SecurityLattice) -> Result<Reduced, EvalError> {
    match &mut t.kind {
        IKind::Var(_) | IKind::Bool(..) | IKind::Lam { .. } | IKind::Error => {
            Err(stuck(t, lattice))
        }
        IKind::Asc { inner, .. } => {
            if inner.term.is_simple_value() {
                return Err(stuck(t, lattice));
            }
            reduce_slot(inner, lattice)
        }
        IKind::Op { lhs, rhs, .. } => {
            if !lhs.term.is_simple_value() {
                return reduce_slot(lhs, lattice);
            }
            if !rhs.term.is_simple_value() {
                return reduce_slot(rhs, lattice);
            }
            notion(t, lattice)
        }
        IKind::App { fun, arg, .. } => {
            if !fun.term.is_simple_value() {
                return reduce_slot(fun, lattice);
            }
            if !arg.term.is_simple_value() {
                return reduce_slot(arg, lattice);
            }
            notion(t, lattice)
        }
        IKind::If { cond, .. } => {
            if !cond.term.is_simple_value() {
                return reduce_slot(cond, lattice);
            }
            notion(t, lattice)
        }
    }
}

fn ascribe(inner: EvTerm, ty: GType, span: Span) -> ITerm {
    ITerm::new(
        IKind::Asc {
            inner: Box::new(inner),
            target: ty.clone(),
        },
        ty,
        span,
    )
}

/// Fire the notion of reduction at `t`, whose evidence-wrapped operands are
/// all simple values.
fn notion(t: &mut ITerm, lattice: &SecurityLattice) -> Result<Reduced, EvalError> {
    let span = t.span;
    let ty = t.ty.clone();
    match &t.kind {
        IKind::Op { op, lhs, rhs, .. } => {
            let (IKind::Bool(b1, l1), IKind::Bool(b2, l2)) = (&lhs.term.kind, &rhs.term.kind)
            else {
                return Err(stuck(t, lattice));
            };
            let (GType::Bool(a1), GType::Bool(c1), GType::Bool(a2), GType::Bool(c2)) =
                (&lhs.ev.left, &lhs.ev.right, &rhs.ev.left, &rhs.ev.right)
            else {
                return Err(stuck(t, lattice));
            };
            let ev = Evidence::new(
                GType::Bool(glabel_join(lattice, *a1, *a2)),
                GType::Bool(glabel_join(lattice, *c1, *c2)),
            );
            let label = glabel_join(lattice, *l1, *l2);
            let value = ITerm::new(
                IKind::Bool(op.apply(*b1, *b2), label),
                GType::Bool(label),
                span,
            );
            *t = ascribe(EvTerm { ev, term: value }, ty, span);
            Ok(Reduced::Stepped(StepKind::Notion))
        }
        IKind::App { fun, arg, .. } => {
            if !matches!(fun.term.kind, IKind::Lam { .. }) {
                return Err(stuck(t, lattice));
            }
            let (Some(dom_ev), Some(cod_ev)) = (idom(&fun.ev), icod(lattice, &fun.ev)) else {
                return Err(stuck(t, lattice));
            };
            let Some(arg_ev) = consistent_transitivity(lattice, &arg.ev, &dom_ev) else {
                let failure = EvidenceFailure {
                    inner: arg.ev.clone(),
                    outer: dom_ev,
                    span,
                };
                t.kind = IKind::Error;
                return Ok(Reduced::Failed(failure));
            };
            let IKind::App { fun, arg, .. } = std::mem::replace(&mut t.kind, IKind::Error) else {
                unreachable!()
            };
            let IKind::Lam {
                param,
                param_ty,
                body,
                ..
            } = fun.term.kind
            else {
                unreachable!()
            };
            let arg_span = arg.term.span;
            let value = ascribe(
                EvTerm {
                    ev: arg_ev,
                    term: arg.term,
                },
                param_ty,
                arg_span,
            );
            let body = substitute(&body, &param, &value);
            *t = ascribe(
                EvTerm {
                    ev: cod_ev,
                    term: body,
                },
                ty,
                span,
            );
            Ok(Reduced::Stepped(StepKind::Notion))
        }
        IKind::If { cond, .. } => {
            let IKind::Bool(b, _) = cond.term.kind else {
                return Err(stuck(t, lattice));
            };
            let IKind::If {
                then, els, target, ..
            } = std::mem::replace(&mut t.kind, IKind::Error)
            else {
                unreachable!()
            };
            *t = ascribe(if b { *then } else { *els }, target, span);
            Ok(Reduced::Stepped(StepKind::Notion))
        }
        _ => Err(stuck(t, lattice)),
    }
}

/// Free variables of an intrinsic term.
pub fn free_vars(t: &ITerm) -> Vec<Name> {
    fn go(t: &ITerm, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let mut ev = |e: &EvTerm, bound: &mut Vec<Name>| go(&e.term, bound, out);
        match &t.kind {
            IKind::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            IKind::Bool(..) | IKind::Error => {}
            IKind::Lam { param, body, .. } => {
                bound.push(param.clone());
                go(body, bound, out);
                bound.pop();
            }
            IKind::Op { lhs, rhs, .. } => {
                ev(lhs, bound);
                ev(rhs, bound);
            }
            IKind::App { fun, arg, .. } => {
                ev(fun, bound);
                ev(arg, bound);
            }
            IKind::If {
                cond, then, els, ..
            } => {
                ev(cond, bound);
                ev(then, bound);
                ev(els, bound);
            }
            IKind::Asc { inner, .. } => ev(inner, bound),
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Capture-avoiding substitution of `v` for the free occurrences of `x`.
pub fn substitute(t: &ITerm, x: &str, v: &ITerm) -> ITerm {
    let fv = free_vars(v);
    subst(t, x, v, &fv)
}

fn rename(t: &ITerm, from: &str, to: &Name) -> ITerm {
    let var = ITerm::new(IKind::Var(to.clone()), GType::Bool(GLabel::Unknown), t.span);
    subst_with(
        t,
        from,
        &|ty, span| {
            let mut v = var.clone();
            v.ty = ty.clone();
            v.span = span;
            v
        },
        std::slice::from_ref(to),
    )
}

fn subst(t: &ITerm, x: &str, v: &ITerm, fv: &[Name]) -> ITerm {
    subst_with(t, x, &|_, _| v.clone(), fv)
}

/// Substitution where the replacement may depend on the type and span of
/// the replaced variable occurrence.
fn subst_with(t: &ITerm, x: &str, v: &dyn Fn(&GType, Span) -> ITerm, fv: &[Name]) -> ITerm {
    let ev = |e: &EvTerm| {
        Box::new(EvTerm {
            ev: e.ev.clone(),
            term: subst_with(&e.term, x, v, fv),
        })
    };
    let kind = match &t.kind {
        IKind::Var(y) if &**y == x => return v(&t.ty, t.span),
        IKind::Var(_) | IKind::Bool(..) | IKind::Error => t.kind.clone(),
        IKind::Lam { param, .. } if &**param == x => t.kind.clone(),
        IKind::Lam {
            param,
            param_ty,
            body,
            label,
        } => {
            let (param, body) = if fv.contains(param) {
                let mut fresh = format!("{param}'");
                let body_fv = free_vars(body);
                while fv.iter().chain(&body_fv).any(|n| **n == *fresh) {
                    fresh.push('\'');
                }
                let fresh: Name = fresh.into();
                (fresh.clone(), rename(body, param, &fresh))
            } else {
                (param.clone(), (**body).clone())
            };
            IKind::Lam {
                param,
                param_ty: param_ty.clone(),
                body: Box::new(subst_with(&body, x, v, fv)),
                label: *label,
            }
        }
        IKind::Op {
            op,
            lhs,
            rhs,
            lhs_label,
            rhs_label,
        } => IKind::Op {
            op: *op,
            lhs: ev(lhs),
            rhs: ev(rhs),
            lhs_label: *lhs_label,
            rhs_label: *rhs_label,
        },
        IKind::App { fun, arg, index } => IKind::App {
            fun: ev(fun),
            arg: ev(arg),
            index: index.clone(),
        },
        IKind::If {
            cond,
            then,
            els,
            guard,
            target,
        } => IKind::If {
            cond: ev(cond),
            then: ev(then),
            els: ev(els),
            guard: *guard,
            target: target.clone(),
        },
        IKind::Asc { inner, target } => IKind::Asc {
            inner: ev(inner),
            target: target.clone(),
        },
    };
    ITerm::new(kind, t.ty.clone(), t.span)
}

/// Fire a notion of reduction at the root of `t`.
pub fn notion_step(t: &ITerm, lattice: &SecurityLattice) -> Result<Outcome, EvalError> {
    let mut next = t.clone();
    let ready = |e: &EvTerm| e.term.is_simple_value();
    let is_redex = match &t.kind {
        IKind::Op { lhs, rhs, .. } => ready(lhs) && ready(rhs),
        IKind::App { fun, arg, .. } => ready(fun) && ready(arg),
        IKind::If { cond, .. } => ready(cond),
        _ => false,
    };
    if !is_redex {
        return Err(stuck(t, lattice));
    }
    Ok(finish(notion(&mut next, lattice)?, next))
}

/// Combine the evidence of `e` with that of the ascribed value it wraps.
pub fn combine_step(
    e: &EvTerm,
    lattice: &SecurityLattice,
) -> Result<Result<EvTerm, EvidenceFailure>, EvalError> {
    if !e.term.is_ascribed_value() {
        return Err(stuck(&e.term, lattice));
    }
    let mut next = e.clone();
    Ok(match combine_in_place(&mut next, lattice) {
        Reduced::Stepped(_) => Ok(next),
        Reduced::Failed(failure) => Err(failure),
    })
}

fn finish(r: Reduced, t: ITerm) -> Outcome {
    match r {
        Reduced::Stepped(kind) => Outcome::Step(t, kind),
        Reduced::Failed(failure) => Outcome::Error(failure, t),
    }
}

/// One step of the machine.
pub fn step(t: &ITerm, lattice: &SecurityLattice) -> Result<Outcome, EvalError> {
    if let Some(v) = RuntimeValue::from_term(t).filter(|_| t.is_value()) {
        return Ok(Outcome::Value(v));
    }
    let mut next = t.clone();
    Ok(finish(reduce(&mut next, lattice)?, next))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Halt {
    Value(RuntimeValue),
    Error(EvidenceFailure),
}

impl InLattice for Halt {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Halt::Value(v) => write!(f, "VALUE: {}", lattice.show(v)),
            Halt::Error(e) => write!(f, "ERROR: {}", lattice.show(e)),
        }
    }
}

impl InLattice for RuntimeValue {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_term().fmt_in(lattice, f)
    }
}

impl SimpleValue {
    pub fn to_term(&self) -> ITerm {
        let span = Span::default();
        match self {
            SimpleValue::Bool(b, l) => ITerm::new(IKind::Bool(*b, *l), GType::Bool(*l), span),
            SimpleValue::Closure {
                param,
                param_ty,
                body,
                label,
            } => ITerm::new(
                IKind::Lam {
                    param: param.clone(),
                    param_ty: param_ty.clone(),
                    body: body.clone(),
                    label: *label,
                },
                GType::fun(param_ty.clone(), body.ty.clone(), *label),
                span,
            ),
            SimpleValue::Var(x) => {
                ITerm::new(IKind::Var(x.clone()), GType::Bool(GLabel::Unknown), span)
            }
        }
    }
}

impl RuntimeValue {
    pub fn to_term(&self) -> ITerm {
        match self {
            RuntimeValue::Simple(u) => u.to_term(),
            RuntimeValue::Ascribed { ev, value, target } => ascribe(
                EvTerm {
                    ev: ev.clone(),
                    term: value.to_term(),
                },
                target.clone(),
                Span::default(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub halt: Halt,
    pub steps: usize,
}

/// Run `t` to a value or an error, calling `observe` after every step with
/// the kind of step and the resulting term.
pub fn run(
    t: &ITerm,
    lattice: &SecurityLattice,
    fuel: usize,
    mut observe: impl FnMut(StepKind, &ITerm),
) -> Result<Evaluation, EvalError> {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        if cur.is_value() {
            let v = RuntimeValue::from_term(&cur).expect("values convert");
            return Ok(Evaluation {
                halt: Halt::Value(v),
                steps,
            });
        }
        if steps >= fuel {
            return Err(EvalError::OutOfFuel(fuel));
        }
        steps += 1;
        match reduce(&mut cur, lattice)? {
            Reduced::Stepped(kind) => observe(kind, &cur),
            Reduced::Failed(failure) => {
                observe(StepKind::Combine, &cur);
                return Ok(Evaluation {
                    halt: Halt::Error(failure),
                    steps,
                });
            }
        }
    }
}

pub fn evaluate(
    t: &ITerm,
    lattice: &SecurityLattice,
    fuel: usize,
) -> Result<Evaluation, EvalError> {
    run(t, lattice, fuel, |_, _| {})
}

/// A complete run: the initial term, every intermediate term, and how it
/// ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: ITerm,
    pub steps: Vec<(StepKind, ITerm)>,
    pub halt: Halt,
}

pub fn evaluate_traced(
    t: &ITerm,
    lattice: &SecurityLattice,
    fuel: usize,
) -> Result<Trace, EvalError> {
    let mut steps = Vec::new();
    let eval = run(t, lattice, fuel, |kind, term| {
        steps.push((kind, term.clone()))
    })?;
    Ok(Trace {
        initial: t.clone(),
        steps,
        halt: eval.halt,
    })
}

impl InLattice for Trace {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} {:<3} {}", 0, "", lattice.show(&self.initial))?;
        for (i, (kind, term)) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3} {:<3} {}", i + 1, kind.tag(), lattice.show(term))?;
        }
        writeln!(f, "{}", lattice.show(&self.halt))
    }
}
