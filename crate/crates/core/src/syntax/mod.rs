//! Surface syntax shared by the static and gradual languages.
//!
//! Labels are kept as names here; they are resolved against a lattice by the
//! checkers. Equality on terms ignores source spans.

mod parser;
mod print;

use std::fmt;
use std::sync::Arc;

pub use parser::{parse, parse_with_default, ParseError};

pub type Name = Arc<str>;

/// A source region. Lines and columns are 1-based; a zero line marks a
/// synthesized node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: u32,
    pub end: u32,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span {
            end: other.end,
            end_line: other.end_line,
            end_col: other.end_col,
            ..self
        }
    }

    pub fn is_synthetic(&self) -> bool {
        self.line == 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_synthetic() {
            f.write_str("<generated>")
        } else {
            write!(
                f,
                "{}:{}-{}:{}",
                self.line, self.col, self.end_line, self.end_col
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceLabel {
    Known(Name),
    Unknown,
}

impl SurfaceLabel {
    pub fn known(name: &str) -> Self {
        SurfaceLabel::Known(name.into())
    }
}

impl fmt::Display for SurfaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceLabel::Known(name) => f.write_str(name),
            SurfaceLabel::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceType {
    Bool(SurfaceLabel),
    Fun(Arc<SurfaceType>, Arc<SurfaceType>, SurfaceLabel),
}

impl SurfaceType {
    pub fn label(&self) -> &SurfaceLabel {
        match self {
            SurfaceType::Bool(l) | SurfaceType::Fun(_, _, l) => l,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SurfaceType::Bool(_) => 1,
            SurfaceType::Fun(a, b, _) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceType::Bool(l) => write!(f, "Bool@{l}"),
            SurfaceType::Fun(a, b, l) => write!(f, "({a} -> {b})@{l}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Implies,
}

impl BinOp {
    pub const ALL: [BinOp; 3] = [BinOp::And, BinOp::Or, BinOp::Implies];

    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Implies => !a || b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Implies => "=>",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Bool(bool, SurfaceLabel),
    Var(Name),
    Lam {
        param: Name,
        annot: SurfaceType,
        body: Arc<Term>,
        label: SurfaceLabel,
    },
    App(Arc<Term>, Arc<Term>),
    BinOp(BinOp, Arc<Term>, Arc<Term>),
    If(Arc<Term>, Arc<Term>, Arc<Term>),
    Ascribe(Arc<Term>, SurfaceType),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Term {}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state)
    }
}

impl Term {
    pub fn new(kind: TermKind) -> Self {
        Term {
            kind,
            span: Span::default(),
        }
    }

    pub fn bool(value: bool, label: SurfaceLabel) -> Self {
        Term::new(TermKind::Bool(value, label))
    }

    pub fn var(name: &str) -> Self {
        Term::new(TermKind::Var(name.into()))
    }

    pub fn lam(param: &str, annot: SurfaceType, body: Term, label: SurfaceLabel) -> Self {
        Term::new(TermKind::Lam {
            param: param.into(),
            annot,
            body: Arc::new(body),
            label,
        })
    }

    pub fn app(fun: Term, arg: Term) -> Self {
        Term::new(TermKind::App(Arc::new(fun), Arc::new(arg)))
    }

    pub fn binop(op: BinOp, lhs: Term, rhs: Term) -> Self {
        Term::new(TermKind::BinOp(op, Arc::new(lhs), Arc::new(rhs)))
    }

    pub fn if_(cond: Term, then: Term, els: Term) -> Self {
        Term::new(TermKind::If(Arc::new(cond), Arc::new(then), Arc::new(els)))
    }

    pub fn ascribe(term: Term, ty: SurfaceType) -> Self {
        Term::new(TermKind::Ascribe(Arc::new(term), ty))
    }

    /// Height of the syntax tree; literals and variables have depth 1.
    pub fn depth(&self) -> usize {
        1 + match &self.kind {
            TermKind::Bool(..) | TermKind::Var(_) => 0,
            TermKind::Lam { body, .. } => body.depth(),
            TermKind::App(a, b) | TermKind::BinOp(_, a, b) => a.depth().max(b.depth()),
            TermKind::If(a, b, c) => a.depth().max(b.depth()).max(c.depth()),
            TermKind::Ascribe(a, _) => a.depth(),
        }
    }

    /// Whether any label position holds `?`.
    pub fn is_gradual(&self) -> bool {
        let ty_gradual = |ty: &SurfaceType| type_labels(ty).any(|l| *l == SurfaceLabel::Unknown);
        match &self.kind {
            TermKind::Bool(_, l) => *l == SurfaceLabel::Unknown,
            TermKind::Var(_) => false,
            TermKind::Lam {
                annot, body, label, ..
            } => *label == SurfaceLabel::Unknown || ty_gradual(annot) || body.is_gradual(),
            TermKind::App(a, b) | TermKind::BinOp(_, a, b) => a.is_gradual() || b.is_gradual(),
            TermKind::If(a, b, c) => a.is_gradual() || b.is_gradual() || c.is_gradual(),
            TermKind::Ascribe(a, ty) => ty_gradual(ty) || a.is_gradual(),
        }
    }

    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match &t.kind {
                TermKind::Bool(..) => {}
                TermKind::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                TermKind::Lam { param, body, .. } => {
                    bound.push(param.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                TermKind::App(a, b) | TermKind::BinOp(_, a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                TermKind::If(a, b, c) => {
                    go(a, bound, out);
                    go(b, bound, out);
                    go(c, bound, out);
                }
                TermKind::Ascribe(a, _) => go(a, bound, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Labels of a type in pre-order: the top label first, then domain, then
/// codomain.
pub fn type_labels(ty: &SurfaceType) -> impl Iterator<Item = &SurfaceLabel> {
    let mut stack = vec![ty];
    std::iter::from_fn(move || {
        let ty = stack.pop()?;
        if let SurfaceType::Fun(a, b, _) = ty {
            stack.push(b);
            stack.push(a);
        }
        Some(ty.label())
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::term(self, f)
    }
}

/// Render a term in concrete syntax that [`parse`] reads back.
pub fn print(t: &Term) -> String {
    t.to_string()
}
