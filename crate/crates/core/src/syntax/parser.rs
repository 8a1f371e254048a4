//! Hand-written lexer and recursive-descent parser.
//!
//! ```text
//! label := IDENT | "?"
//! type  := "Bool" "@" label | "(" type "->" type ")" "@" label
//! term  := "if" term "then" term "else" term | asc
//! asc   := opexp [ "::" type ]
//! opexp := app { ("&&" | "||" | "=>") app }
//! app   := atom { atom }
//! atom  := ("true" | "false") ["@" label] | IDENT
//!        | "(" "\" IDENT ":" type "." term ")" ["@" label] | "(" term ")"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::sync::Arc;

use thiserror::Error;

use super::{BinOp, Name, Span, SurfaceLabel, SurfaceType, Term, TermKind};
use crate::lattice::SecurityLattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub message: String,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(Name),
    True,
    False,
    If,
    Then,
    Else,
    BoolTy,
    Question,
    At,
    LParen,
    RParen,
    Backslash,
    Colon,
    ColonColon,
    Dot,
    Arrow,
    Op(BinOp),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(x) => format!("identifier `{x}`"),
            Tok::Eof => "end of input".to_owned(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &str {
        match self {
            Tok::Ident(x) => x,
            Tok::True => "true",
            Tok::False => "false",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::BoolTy => "Bool",
            Tok::Question => "?",
            Tok::At => "@",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Backslash => "\\",
            Tok::Colon => ":",
            Tok::ColonColon => "::",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::Op(op) => op.symbol(),
            Tok::Eof => "",
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while self.peek_char().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (start, line, col) = (self.pos, self.line, self.col);
            let Some(c) = self.bump() else {
                let span = Span {
                    start: start as u32,
                    end: start as u32,
                    line,
                    col,
                    end_line: line,
                    end_col: col,
                };
                out.push((Tok::Eof, span));
                return Ok(out);
            };
            let tok = match c {
                '?' => Tok::Question,
                '@' => Tok::At,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '\\' | 'λ' => Tok::Backslash,
                '.' => Tok::Dot,
                ':' if self.peek_char() == Some(':') => {
                    self.bump();
                    Tok::ColonColon
                }
                ':' => Tok::Colon,
                '-' if self.peek_char() == Some('>') => {
                    self.bump();
                    Tok::Arrow
                }
                '&' if self.peek_char() == Some('&') => {
                    self.bump();
                    Tok::Op(BinOp::And)
                }
                '|' if self.peek_char() == Some('|') => {
                    self.bump();
                    Tok::Op(BinOp::Or)
                }
                '=' if self.peek_char() == Some('>') => {
                    self.bump();
                    Tok::Op(BinOp::Implies)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    while self
                        .peek_char()
                        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
                    {
                        self.bump();
                    }
                    match &self.src[start..self.pos] {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "if" => Tok::If,
                        "then" => Tok::Then,
                        "else" => Tok::Else,
                        "Bool" => Tok::BoolTy,
                        word => Tok::Ident(word.into()),
                    }
                }
                '&' | '|' | '=' | '-' | '<' | '>' | '!' | '+' | '*' | '/' | '^' | '~' => {
                    return Err(ParseError {
                        message: format!("unknown operator `{c}`"),
                        line,
                        col,
                    })
                }
                other => {
                    return Err(ParseError {
                        message: format!("unexpected character `{other}`"),
                        line,
                        col,
                    })
                }
            };
            let span = Span {
                start: start as u32,
                end: self.pos as u32,
                line,
                col,
                end_line: self.line,
                end_col: self.col,
            };
            out.push((tok, span));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    default: SurfaceLabel,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].1
    }

    fn advance(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        let span = self.span();
        Err(ParseError {
            message: format!("expected {expected}, found {}", self.peek().describe()),
            line: span.line,
            col: span.col,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            self.error(&format!("`{}`", tok.text()))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.advance();
                Ok(x)
            }
            _ => self.error("an identifier"),
        }
    }

    fn label(&mut self) -> Result<SurfaceLabel, ParseError> {
        match self.peek().clone() {
            Tok::Question => {
                self.advance();
                Ok(SurfaceLabel::Unknown)
            }
            Tok::Ident(x) => {
                self.advance();
                Ok(SurfaceLabel::Known(x))
            }
            _ => self.error("a label"),
        }
    }

    fn optional_label(&mut self) -> Result<SurfaceLabel, ParseError> {
        if *self.peek() == Tok::At {
            self.advance();
            self.label()
        } else {
            Ok(self.default.clone())
        }
    }

    fn ty(&mut self) -> Result<SurfaceType, ParseError> {
        match self.peek() {
            Tok::BoolTy => {
                self.advance();
                self.expect(Tok::At)?;
                Ok(SurfaceType::Bool(self.label()?))
            }
            Tok::LParen => {
                self.advance();
                let dom = self.ty()?;
                self.expect(Tok::Arrow)?;
                let cod = self.ty()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::At)?;
                Ok(SurfaceType::Fun(
                    Arc::new(dom),
                    Arc::new(cod),
                    self.label()?,
                ))
            }
            _ => self.error("a type"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() != Tok::If {
            return self.asc();
        }
        let start = self.advance().1;
        let cond = self.term()?;
        self.expect(Tok::Then)?;
        let then = self.term()?;
        self.expect(Tok::Else)?;
        let els = self.term()?;
        Ok(Term {
            span: start.to(self.prev_span()),
            kind: TermKind::If(Arc::new(cond), Arc::new(then), Arc::new(els)),
        })
    }

    fn asc(&mut self) -> Result<Term, ParseError> {
        let t = self.opexp()?;
        if *self.peek() != Tok::ColonColon {
            return Ok(t);
        }
        self.advance();
        let ty = self.ty()?;
        Ok(Term {
            span: t.span.to(self.prev_span()),
            kind: TermKind::Ascribe(Arc::new(t), ty),
        })
    }

    fn opexp(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.app()?;
        while let Tok::Op(op) = *self.peek() {
            self.advance();
            let rhs = self.app()?;
            lhs = Term {
                span: lhs.span.to(self.prev_span()),
                kind: TermKind::BinOp(op, Arc::new(lhs), Arc::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut fun = self.atom()?;
        while matches!(
            self.peek(),
            Tok::True | Tok::False | Tok::Ident(_) | Tok::LParen
        ) {
            let arg = self.atom()?;
            fun = Term {
                span: fun.span.to(self.prev_span()),
                kind: TermKind::App(Arc::new(fun), Arc::new(arg)),
            };
        }
        Ok(fun)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::True | Tok::False => {
                let value = *self.peek() == Tok::True;
                self.advance();
                let label = self.optional_label()?;
                Ok(Term {
                    kind: TermKind::Bool(value, label),
                    span: start.to(self.prev_span()),
                })
            }
            Tok::Ident(x) => {
                self.advance();
                Ok(Term {
                    kind: TermKind::Var(x),
                    span: start,
                })
            }
            Tok::LParen => {
                self.advance();
                if *self.peek() != Tok::Backslash {
                    let inner = self.term()?;
                    self.expect(Tok::RParen)?;
                    return Ok(inner);
                }
                self.advance();
                let param = self.ident()?;
                self.expect(Tok::Colon)?;
                let annot = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                self.expect(Tok::RParen)?;
                let label = self.optional_label()?;
                Ok(Term {
                    kind: TermKind::Lam {
                        param,
                        annot,
                        body: Arc::new(body),
                        label,
                    },
                    span: start.to(self.prev_span()),
                })
            }
            _ => self.error("a term"),
        }
    }
}

/// Parse a program. Literals and lambdas without an explicit label get the
/// lattice's bottom element.
pub fn parse(source: &str, lattice: &SecurityLattice) -> Result<Term, ParseError> {
    parse_with_default(source, SurfaceLabel::known(lattice.name(lattice.bottom())))
}

/// Parse a program, filling omitted literal and lambda labels with `default`.
pub fn parse_with_default(source: &str, default: SurfaceLabel) -> Result<Term, ParseError> {
    let toks = Lexer {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
    }
    .tokens()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        default,
    };
    let t = parser.term()?;
    if *parser.peek() != Tok::Eof {
        return parser.error("end of input");
    }
    Ok(t)
}
