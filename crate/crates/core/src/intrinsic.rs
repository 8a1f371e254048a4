//! Intrinsically typed terms produced by elaboration.
//!
//! Every node stores its type, and every position where the checker used
//! consistent subtyping wraps its subterm with the evidence justifying it.
//! Application nodes record the function type they were checked against,
//! conditionals the guard label and the branch target, and operators the
//! labels of their operands.

use std::fmt;

use thiserror::Error;

use crate::gradual::{
    csub_join, csubtype, glabel_join, gstamp, interior_type, Evidence, GLabel, GType,
};
use crate::lattice::{InLattice, SecurityLattice};
use crate::statics::TypeEnv;
use crate::syntax::{BinOp, Name, Span};

#[derive(Debug, Clone)]
pub struct ITerm {
    pub kind: IKind,
    pub ty: GType,
    pub span: Span,
}

/// A subterm together with the evidence for its use at a consistent
/// judgment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvTerm {
    pub ev: Evidence,
    pub term: ITerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IKind {
    Var(Name),
    Bool(bool, GLabel),
    Lam {
        param: Name,
        param_ty: GType,
        body: Box<ITerm>,
        label: GLabel,
    },
    Op {
        op: BinOp,
        lhs: Box<EvTerm>,
        rhs: Box<EvTerm>,
        lhs_label: GLabel,
        rhs_label: GLabel,
    },
    App {
        fun: Box<EvTerm>,
        arg: Box<EvTerm>,
        index: GType,
    },
    If {
        cond: Box<EvTerm>,
        then: Box<EvTerm>,
        els: Box<EvTerm>,
        guard: GLabel,
        target: GType,
    },
    Asc {
        inner: Box<EvTerm>,
        target: GType,
    },
    /// A failed evidence combination. Only appears in the last term of a
    /// trace.
    Error,
}

impl PartialEq for ITerm {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.ty == other.ty
    }
}

impl Eq for ITerm {}

impl ITerm {
    pub fn new(kind: IKind, ty: GType, span: Span) -> Self {
        ITerm { kind, ty, span }
    }

    /// Booleans, lambdas and variables.
    pub fn is_simple_value(&self) -> bool {
        matches!(
            self.kind,
            IKind::Bool(..) | IKind::Lam { .. } | IKind::Var(_)
        )
    }

    /// A simple value ascribed through evidence.
    pub fn is_ascribed_value(&self) -> bool {
        matches!(&self.kind, IKind::Asc { inner, .. } if inner.term.is_simple_value())
    }

    pub fn is_value(&self) -> bool {
        self.is_simple_value() || self.is_ascribed_value()
    }

    pub fn size(&self) -> usize {
        let ev = |e: &EvTerm| e.term.size();
        1 + match &self.kind {
            IKind::Var(_) | IKind::Bool(..) | IKind::Error => 0,
            IKind::Lam { body, .. } => body.size(),
            IKind::Op { lhs, rhs, .. } => ev(lhs) + ev(rhs),
            IKind::App { fun, arg, .. } => ev(fun) + ev(arg),
            IKind::If {
                cond, then, els, ..
            } => ev(cond) + ev(then) + ev(els),
            IKind::Asc { inner, .. } => ev(inner),
        }
    }
}

impl InLattice for ITerm {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print(self, lattice, f)
    }
}

impl InLattice for EvTerm {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_ev(self, lattice, f)
    }
}

fn print_atom(t: &ITerm, lat: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let atomic = matches!(
        t.kind,
        IKind::Var(_) | IKind::Bool(..) | IKind::Lam { .. } | IKind::Error
    );
    if atomic {
        print(t, lat, f)
    } else {
        f.write_str("(")?;
        print(t, lat, f)?;
        f.write_str(")")
    }
}

fn print_ev(e: &EvTerm, lat: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.term.kind == IKind::Error {
        return f.write_str("error");
    }
    e.ev.fmt_in(lat, f)?;
    print_atom(&e.term, lat, f)
}

fn print(t: &ITerm, lat: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren_ev = |e: &EvTerm, f: &mut fmt::Formatter<'_>| {
        f.write_str("(")?;
        print_ev(e, lat, f)?;
        f.write_str(")")
    };
    match &t.kind {
        IKind::Var(x) => f.write_str(x),
        IKind::Bool(b, l) => write!(f, "{b}@{}", lat.show(l)),
        IKind::Lam {
            param,
            param_ty,
            body,
            label,
        } => {
            write!(f, "(\\{param}:{}. ", lat.show(param_ty))?;
            print(body, lat, f)?;
            write!(f, ")@{}", lat.show(label))
        }
        IKind::Op { op, lhs, rhs, .. } => {
            paren_ev(lhs, f)?;
            write!(f, " {} ", op.symbol())?;
            paren_ev(rhs, f)
        }
        IKind::App { fun, arg, .. } => {
            paren_ev(fun, f)?;
            f.write_str(" ")?;
            paren_ev(arg, f)
        }
        IKind::If {
            cond, then, els, ..
        } => {
            f.write_str("if ")?;
            print_ev(cond, lat, f)?;
            f.write_str(" then ")?;
            print_ev(then, lat, f)?;
            f.write_str(" else ")?;
            print_ev(els, lat, f)
        }
        IKind::Asc { inner, target } => {
            print_ev(inner, lat, f)?;
            write!(f, " :: {}", lat.show(target))
        }
        IKind::Error => f.write_str("error"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-formed intrinsic term at {span}: {message}")]
pub struct IntrinsicError {
    pub message: String,
    pub span: Span,
}

/// Recompute every node type from its children and check each evidence
/// against the judgment it justifies: the evidence must relate types of the
/// right shapes, support consistent subtyping, and be at least as precise as
/// the interior of the judgment.
pub fn check_intrinsic(
    env: &TypeEnv<GType>,
    t: &ITerm,
    lattice: &SecurityLattice,
) -> Result<GType, IntrinsicError> {
    let mut env = env.clone();
    WellFormed { lattice }.term(&mut env, t)
}

struct WellFormed<'a> {
    lattice: &'a SecurityLattice,
}

impl WellFormed<'_> {
    fn fail<T>(&self, t: &ITerm, message: String) -> Result<T, IntrinsicError> {
        Err(IntrinsicError {
            message,
            span: t.span,
        })
    }

    fn expect_ty(&self, t: &ITerm, computed: GType) -> Result<GType, IntrinsicError> {
        if computed != t.ty {
            let lat = self.lattice;
            return self.fail(
                t,
                format!(
                    "stored type {} but the node has type {}",
                    lat.show(&t.ty),
                    lat.show(&computed)
                ),
            );
        }
        Ok(computed)
    }

    fn evidence(
        &self,
        env: &mut TypeEnv<GType>,
        e: &EvTerm,
        target: &GType,
        at: &ITerm,
    ) -> Result<(), IntrinsicError> {
        let lat = self.lattice;
        let from = self.term(env, &e.term)?;
        let ok = justifies(lat, &e.ev, &from, target);
        if !ok {
            return self.fail(
                at,
                format!(
                    "evidence {} does not justify {} ≲ {}",
                    lat.show(&e.ev),
                    lat.show(&from),
                    lat.show(target)
                ),
            );
        }
        Ok(())
    }

    fn term(&self, env: &mut TypeEnv<GType>, t: &ITerm) -> Result<GType, IntrinsicError> {
        let lat = self.lattice;
        match &t.kind {
            IKind::Var(x) => match env.lookup(x) {
                Some(bound) if *bound != t.ty => {
                    self.fail(t, format!("variable `{x}` is bound at {}", lat.show(bound)))
                }
                _ => Ok(t.ty.clone()),
            },
            IKind::Bool(_, l) => self.expect_ty(t, GType::Bool(*l)),
            IKind::Lam {
                param,
                param_ty,
                body,
                label,
            } => {
                env.push(param.clone(), param_ty.clone());
                let cod = self.term(env, body);
                env.pop();
                self.expect_ty(t, GType::fun(param_ty.clone(), cod?, *label))
            }
            IKind::Op {
                lhs,
                rhs,
                lhs_label,
                rhs_label,
                ..
            } => {
                self.evidence(env, lhs, &GType::Bool(*lhs_label), t)?;
                self.evidence(env, rhs, &GType::Bool(*rhs_label), t)?;
                self.expect_ty(t, GType::Bool(glabel_join(lat, *lhs_label, *rhs_label)))
            }
            IKind::App { fun, arg, index } => {
                let GType::Fun(dom, cod, label) = index else {
                    return self.fail(t, "application index is not a function type".into());
                };
                self.evidence(env, fun, index, t)?;
                self.evidence(env, arg, dom, t)?;
                self.expect_ty(t, gstamp(lat, cod, *label))
            }
            IKind::If {
                cond,
                then,
                els,
                guard,
                target,
            } => {
                self.evidence(env, cond, &GType::Bool(*guard), t)?;
                self.evidence(env, then, target, t)?;
                self.evidence(env, els, target, t)?;
                let joined = csub_join(lat, &then.term.ty, &els.term.ty);
                if joined.map(|j| gstamp(lat, &j, *guard)).as_ref() != Some(target) {
                    return self.fail(t, "branch target is not the stamped branch join".into());
                }
                self.expect_ty(t, target.clone())
            }
            IKind::Asc { inner, target } => {
                self.evidence(env, inner, target, t)?;
                self.expect_ty(t, target.clone())
            }
            IKind::Error => Ok(t.ty.clone()),
        }
    }
}

/// Whether `e` justifies `from ≲ to` in the sense of [`check_intrinsic`].
pub fn justifies(lattice: &SecurityLattice, e: &Evidence, from: &GType, to: &GType) -> bool {
    e.left.same_shape(from)
        && e.right.same_shape(to)
        && csubtype(lattice, &e.left, &e.right)
        && interior_type(lattice, from, to).is_some_and(|i| e.refines(&i))
}
