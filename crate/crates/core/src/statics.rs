//! The fully static security language: types, subtyping, subtyping join and
//! meet, stamping, and the syntax-directed checker.

use std::fmt;

use thiserror::Error;

use crate::lattice::{InLattice, Label, SecurityLattice};
use crate::syntax::{BinOp, Name, Span, SurfaceLabel, SurfaceType, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SType {
    Bool(Label),
    Fun(Box<SType>, Box<SType>, Label),
}

impl SType {
    pub fn fun(dom: SType, cod: SType, label: Label) -> Self {
        SType::Fun(Box::new(dom), Box::new(cod), label)
    }

    pub fn label(&self) -> Label {
        match self {
            SType::Bool(l) | SType::Fun(_, _, l) => *l,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SType::Bool(_) => 1,
            SType::Fun(a, b, _) => 1 + a.depth().max(b.depth()),
        }
    }

    /// All types over `lattice` with depth at most `max_depth`, smallest
    /// first.
    pub fn enumerate(lattice: &SecurityLattice, max_depth: usize) -> Vec<SType> {
        let mut out: Vec<SType> = Vec::new();
        for depth in 1..=max_depth {
            let smaller = out.clone();
            for l in lattice.labels() {
                if depth == 1 {
                    out.push(SType::Bool(l));
                    continue;
                }
                for a in &smaller {
                    for b in &smaller {
                        if a.depth().max(b.depth()) == depth - 1 {
                            out.push(SType::fun(a.clone(), b.clone(), l));
                        }
                    }
                }
            }
        }
        out
    }
}

impl InLattice for SType {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SType::Bool(l) => write!(f, "Bool@{}", lattice.name(*l)),
            SType::Fun(a, b, l) => {
                f.write_str("(")?;
                a.fmt_in(lattice, f)?;
                f.write_str(" -> ")?;
                b.fmt_in(lattice, f)?;
                write!(f, ")@{}", lattice.name(*l))
            }
        }
    }
}

pub fn subtype(lattice: &SecurityLattice, s1: &SType, s2: &SType) -> bool {
    match (s1, s2) {
        (SType::Bool(a), SType::Bool(b)) => lattice.leq(*a, *b),
        (SType::Fun(a1, b1, l1), SType::Fun(a2, b2, l2)) => {
            lattice.leq(*l1, *l2) && subtype(lattice, a2, a1) && subtype(lattice, b1, b2)
        }
        _ => false,
    }
}

/// Subtyping join. Undefined when the constructors differ.
pub fn sub_join(lattice: &SecurityLattice, s1: &SType, s2: &SType) -> Option<SType> {
    match (s1, s2) {
        (SType::Bool(a), SType::Bool(b)) => Some(SType::Bool(lattice.join(*a, *b))),
        (SType::Fun(a1, b1, l1), SType::Fun(a2, b2, l2)) => Some(SType::fun(
            sub_meet(lattice, a1, a2)?,
            sub_join(lattice, b1, b2)?,
            lattice.join(*l1, *l2),
        )),
        _ => None,
    }
}

/// Subtyping meet. Undefined when the constructors differ.
pub fn sub_meet(lattice: &SecurityLattice, s1: &SType, s2: &SType) -> Option<SType> {
    match (s1, s2) {
        (SType::Bool(a), SType::Bool(b)) => Some(SType::Bool(lattice.meet(*a, *b))),
        (SType::Fun(a1, b1, l1), SType::Fun(a2, b2, l2)) => Some(SType::fun(
            sub_join(lattice, a1, a2)?,
            sub_meet(lattice, b1, b2)?,
            lattice.meet(*l1, *l2),
        )),
        _ => None,
    }
}

/// Raise the top-level label of `s` by `l`.
pub fn stamp(lattice: &SecurityLattice, s: &SType, l: Label) -> SType {
    match s {
        SType::Bool(a) => SType::Bool(lattice.join(*a, l)),
        SType::Fun(a, b, m) => SType::Fun(a.clone(), b.clone(), lattice.join(*m, l)),
    }
}

/// Variable typing context. Later bindings shadow earlier ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeEnv<T> {
    bindings: Vec<(Name, T)>,
}

impl<T> Default for TypeEnv<T> {
    fn default() -> Self {
        TypeEnv {
            bindings: Vec::new(),
        }
    }
}

impl<T> TypeEnv<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, ty: T) -> Self {
        self.bindings.push((name.into(), ty));
        self
    }

    pub fn lookup(&self, name: &str) -> Option<&T> {
        self.bindings
            .iter()
            .rev()
            .find(|(x, _)| &**x == name)
            .map(|(_, t)| t)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &T)> {
        self.bindings.iter().map(|(x, t)| (x, t))
    }

    pub(crate) fn push(&mut self, name: Name, ty: T) {
        self.bindings.push((name, ty));
    }

    pub(crate) fn pop(&mut self) {
        self.bindings.pop();
    }
}

/// Typing rule that rejected a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Var,
    Bool,
    Lam,
    Op,
    App,
    If,
    Ascribe,
    Stamp,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Var => "var",
            Rule::Bool => "bool",
            Rule::Lam => "lambda",
            Rule::Op => "op",
            Rule::App => "app",
            Rule::If => "if",
            Rule::Ascribe => "ascription",
            Rule::Stamp => "stamp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("unknown label `{0}`")]
    UnknownLabel(Name),
    #[error("the unknown label `?` is not allowed in a static program")]
    GradualLabel,
    #[error("expected a Bool, found {0}")]
    NotBool(String),
    #[error("expected a function, found {0}")]
    NotFunction(String),
    #[error("{actual} is not a subtype of {expected}")]
    NotSubtype { actual: String, expected: String },
    #[error("{actual} is not consistently a subtype of {expected}")]
    NotConsistentSubtype { actual: String, expected: String },
    #[error("branch types {0} and {1} have no join")]
    NoJoin(String, String),
    #[error("no interior evidence for {0} and {1}")]
    NoInterior(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error in rule ({rule}) at {span}: {kind}")]
pub struct TypeError {
    pub rule: Rule,
    pub kind: TypeErrorKind,
    pub span: Span,
}

/// A static program with labels resolved, extended with the term stamping
/// form that appears during evaluation.
#[derive(Debug, Clone)]
pub struct StaticTerm {
    pub kind: StaticKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StaticKind {
    Bool(bool, Label),
    Var(Name),
    Lam {
        param: Name,
        annot: SType,
        body: Box<StaticTerm>,
        label: Label,
    },
    App(Box<StaticTerm>, Box<StaticTerm>),
    Op(BinOp, Box<StaticTerm>, Box<StaticTerm>),
    If(Box<StaticTerm>, Box<StaticTerm>, Box<StaticTerm>),
    Ascribe(Box<StaticTerm>, SType),
    Stamp(Box<StaticTerm>, Label),
}

impl PartialEq for StaticTerm {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for StaticTerm {}

impl StaticTerm {
    pub fn new(kind: StaticKind, span: Span) -> Self {
        StaticTerm { kind, span }
    }

    pub fn is_value(&self) -> bool {
        matches!(self.kind, StaticKind::Bool(..) | StaticKind::Lam { .. })
    }

    /// Resolve the labels of a surface term. Fails on `?` and on names
    /// outside the lattice.
    pub fn from_surface(t: &Term, lattice: &SecurityLattice) -> Result<StaticTerm, TypeError> {
        let err = |rule, kind| TypeError {
            rule,
            kind,
            span: t.span,
        };
        let label = |rule, l: &SurfaceLabel| match l {
            SurfaceLabel::Known(name) => lattice
                .label(name)
                .ok_or_else(|| err(rule, TypeErrorKind::UnknownLabel(name.clone()))),
            SurfaceLabel::Unknown => Err(err(rule, TypeErrorKind::GradualLabel)),
        };
        let ty = |rule, ty: &SurfaceType| resolve_type(ty, &|l| label(rule, l));
        let sub = |t: &Term| StaticTerm::from_surface(t, lattice).map(Box::new);
        let kind = match &t.kind {
            TermKind::Bool(b, l) => StaticKind::Bool(*b, label(Rule::Bool, l)?),
            TermKind::Var(x) => StaticKind::Var(x.clone()),
            TermKind::Lam {
                param,
                annot,
                body,
                label: l,
            } => StaticKind::Lam {
                param: param.clone(),
                annot: ty(Rule::Lam, annot)?,
                body: sub(body)?,
                label: label(Rule::Lam, l)?,
            },
            TermKind::App(a, b) => StaticKind::App(sub(a)?, sub(b)?),
            TermKind::BinOp(op, a, b) => StaticKind::Op(*op, sub(a)?, sub(b)?),
            TermKind::If(c, a, b) => StaticKind::If(sub(c)?, sub(a)?, sub(b)?),
            TermKind::Ascribe(a, s) => StaticKind::Ascribe(sub(a)?, ty(Rule::Ascribe, s)?),
        };
        Ok(StaticTerm { kind, span: t.span })
    }
}

fn resolve_type(
    ty: &SurfaceType,
    label: &dyn Fn(&SurfaceLabel) -> Result<Label, TypeError>,
) -> Result<SType, TypeError> {
    Ok(match ty {
        SurfaceType::Bool(l) => SType::Bool(label(l)?),
        SurfaceType::Fun(a, b, l) => {
            SType::fun(resolve_type(a, label)?, resolve_type(b, label)?, label(l)?)
        }
    })
}

impl InLattice for StaticTerm {
    fn fmt_in(&self, lattice: &SecurityLattice, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print_static(self, lattice, 0, f)
    }
}

fn static_level(t: &StaticTerm) -> u8 {
    match t.kind {
        StaticKind::If(..) | StaticKind::Ascribe(..) | StaticKind::Stamp(..) => 0,
        StaticKind::Op(..) => 1,
        StaticKind::App(..) => 2,
        _ => 3,
    }
}

fn print_static(
    t: &StaticTerm,
    lat: &SecurityLattice,
    min: u8,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    if static_level(t) < min {
        f.write_str("(")?;
        print_static(t, lat, 0, f)?;
        return f.write_str(")");
    }
    match &t.kind {
        StaticKind::Bool(b, l) => write!(f, "{b}@{}", lat.name(*l)),
        StaticKind::Var(x) => f.write_str(x),
        StaticKind::Lam {
            param,
            annot,
            body,
            label,
        } => {
            write!(f, "(\\{param}:{}. ", lat.show(annot))?;
            print_static(body, lat, 0, f)?;
            write!(f, ")@{}", lat.name(*label))
        }
        StaticKind::App(a, b) => {
            print_static(a, lat, 2, f)?;
            f.write_str(" ")?;
            print_static(b, lat, 3, f)
        }
        StaticKind::Op(op, a, b) => {
            print_static(a, lat, 1, f)?;
            write!(f, " {} ", op.symbol())?;
            print_static(b, lat, 2, f)
        }
        StaticKind::If(c, a, b) => {
            f.write_str("if ")?;
            print_static(c, lat, 0, f)?;
            f.write_str(" then ")?;
            print_static(a, lat, 0, f)?;
            f.write_str(" else ")?;
            print_static(b, lat, 0, f)
        }
        StaticKind::Ascribe(a, ty) => {
            print_static(a, lat, 1, f)?;
            write!(f, " :: {}", lat.show(ty))
        }
        StaticKind::Stamp(a, l) => {
            print_static(a, lat, 1, f)?;
            write!(f, " ⋎ {}", lat.name(*l))
        }
    }
}

/// Type a surface program in the static language.
pub fn typecheck_static(
    env: &TypeEnv<SType>,
    t: &Term,
    lattice: &SecurityLattice,
) -> Result<SType, TypeError> {
    let resolved = StaticTerm::from_surface(t, lattice)?;
    type_of(env, &resolved, lattice)
}

/// Type a resolved term, including intermediate stamps.
pub fn type_of(
    env: &TypeEnv<SType>,
    t: &StaticTerm,
    lattice: &SecurityLattice,
) -> Result<SType, TypeError> {
    let mut env = env.clone();
    Checker { lattice }.check(&mut env, t)
}

struct Checker<'a> {
    lattice: &'a SecurityLattice,
}

impl Checker<'_> {
    fn show(&self, s: &SType) -> String {
        self.lattice.render(s)
    }

    fn bool_label(&self, s: &SType, rule: Rule, span: Span) -> Result<Label, TypeError> {
        match s {
            SType::Bool(l) => Ok(*l),
            other => Err(TypeError {
                rule,
                kind: TypeErrorKind::NotBool(self.show(other)),
                span,
            }),
        }
    }

    fn check(&self, env: &mut TypeEnv<SType>, t: &StaticTerm) -> Result<SType, TypeError> {
        let lat = self.lattice;
        let fail = |rule, kind| TypeError {
            rule,
            kind,
            span: t.span,
        };
        match &t.kind {
            StaticKind::Bool(_, l) => Ok(SType::Bool(*l)),
            StaticKind::Var(x) => env
                .lookup(x)
                .cloned()
                .ok_or_else(|| fail(Rule::Var, TypeErrorKind::Unbound(x.clone()))),
            StaticKind::Lam {
                param,
                annot,
                body,
                label,
            } => {
                env.push(param.clone(), annot.clone());
                let cod = self.check(env, body);
                env.pop();
                Ok(SType::fun(annot.clone(), cod?, *label))
            }
            StaticKind::Op(_, a, b) => {
                let sa = self.check(env, a)?;
                let la = self.bool_label(&sa, Rule::Op, a.span)?;
                let sb = self.check(env, b)?;
                let lb = self.bool_label(&sb, Rule::Op, b.span)?;
                Ok(SType::Bool(lat.join(la, lb)))
            }
            StaticKind::App(a, b) => {
                let sf = self.check(env, a)?;
                let SType::Fun(dom, cod, l) = &sf else {
                    return Err(TypeError {
                        rule: Rule::App,
                        kind: TypeErrorKind::NotFunction(self.show(&sf)),
                        span: a.span,
                    });
                };
                let sa = self.check(env, b)?;
                if !subtype(lat, &sa, dom) {
                    return Err(fail(
                        Rule::App,
                        TypeErrorKind::NotSubtype {
                            actual: self.show(&sa),
                            expected: self.show(dom),
                        },
                    ));
                }
                Ok(stamp(lat, cod, *l))
            }
            StaticKind::If(c, a, b) => {
                let sc = self.check(env, c)?;
                let l = self.bool_label(&sc, Rule::If, c.span)?;
                let sa = self.check(env, a)?;
                let sb = self.check(env, b)?;
                let joined = sub_join(lat, &sa, &sb).ok_or_else(|| {
                    fail(
                        Rule::If,
                        TypeErrorKind::NoJoin(self.show(&sa), self.show(&sb)),
                    )
                })?;
                Ok(stamp(lat, &joined, l))
            }
            StaticKind::Ascribe(a, target) => {
                let sa = self.check(env, a)?;
                if !subtype(lat, &sa, target) {
                    return Err(fail(
                        Rule::Ascribe,
                        TypeErrorKind::NotSubtype {
                            actual: self.show(&sa),
                            expected: self.show(target),
                        },
                    ));
                }
                Ok(target.clone())
            }
            StaticKind::Stamp(a, l) => Ok(stamp(lat, &self.check(env, a)?, *l)),
        }
    }
}
