use std::fmt;

use super::{Term, TermKind};

/// Precedence levels, loosest first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Level {
    Term,
    Op,
    App,
    Atom,
}

fn level(t: &Term) -> Level {
    match t.kind {
        TermKind::If(..) | TermKind::Ascribe(..) => Level::Term,
        TermKind::BinOp(..) => Level::Op,
        TermKind::App(..) => Level::App,
        TermKind::Bool(..) | TermKind::Var(_) | TermKind::Lam { .. } => Level::Atom,
    }
}

pub(crate) fn term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    at(t, Level::Term, f)
}

fn at(t: &Term, min: Level, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(t) < min {
        f.write_str("(")?;
        bare(t, f)?;
        return f.write_str(")");
    }
    bare(t, f)
}

fn bare(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &t.kind {
        TermKind::Bool(b, l) => write!(f, "{b}@{l}"),
        TermKind::Var(x) => f.write_str(x),
        TermKind::Lam {
            param,
            annot,
            body,
            label,
        } => {
            write!(f, "(\\{param}:{annot}. ")?;
            term(body, f)?;
            write!(f, ")@{label}")
        }
        TermKind::App(a, b) => {
            at(a, Level::App, f)?;
            f.write_str(" ")?;
            at(b, Level::Atom, f)
        }
        TermKind::BinOp(op, a, b) => {
            at(a, Level::Op, f)?;
            write!(f, " {} ", op.symbol())?;
            at(b, Level::App, f)
        }
        TermKind::If(c, a, b) => {
            f.write_str("if ")?;
            term(c, f)?;
            f.write_str(" then ")?;
            term(a, f)?;
            f.write_str(" else ")?;
            term(b, f)
        }
        TermKind::Ascribe(a, ty) => {
            at(a, Level::Op, f)?;
            write!(f, " :: {ty}")
        }
    }
}
