//! The `.gthm` hypothesis language.
//!
//! One statement per line:
//!
//! ```text
//! param x
//! point O = origin
//! point A = baseline(O, x)
//! line OA = through(O, A)
//! aux point F = foot(D, OA)
//! claim len(O,D) = len(D,C)
//! ```
//!
//! See `docs/grammar.md` for the full grammar.

mod parse;
mod render;
mod validate;

use std::fmt;

use num::rational::BigRational;
use thiserror::Error;

pub use parse::{parse, parse_with_limits, ParseLimits};
pub use render::{render, render_expr, render_line, render_point};
pub use validate::validate;

/// 1-based line/column range, `end_col` exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub end_col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A source location that does not take part in structural equality.
#[derive(Debug, Clone, Copy, Default)]
pub struct Loc(pub Span);

impl PartialEq for Loc {
    fn eq(&self, _: &Loc) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Ident {
        Ident { name: name.into(), span }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Ident) -> bool {
        self.name == other.name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Param(Ident),
    Len(Ident, Ident),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Visits every `len(P,Q)` and parameter reference in order.
    pub fn visit_refs<'a>(&'a self, f: &mut dyn FnMut(ExprRef<'a>)) {
        match self {
            Expr::Num(_) => {}
            Expr::Param(p) => f(ExprRef::Param(p)),
            Expr::Len(a, b) => f(ExprRef::Len(a, b)),
            Expr::Neg(e) => e.visit_refs(f),
            Expr::Bin(_, a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
        }
    }

    pub fn as_param(&self) -> Option<&Ident> {
        match self {
            Expr::Param(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ExprRef<'a> {
    Param(&'a Ident),
    Len(&'a Ident, &'a Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LineExpr {
    Named(Ident),
    Through(Ident, Ident),
    ExtendRay(Ident, Ident),
    Parallel(Ident, Box<LineExpr>),
    Perp(Ident, Box<LineExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pick {
    First,
    Second,
    WithinSegment(Ident, Ident),
    Nearest(Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointCons {
    Origin,
    Baseline(Ident, Expr),
    OnSegment(Ident, Ident, Expr),
    OffsetPerp(Ident, LineExpr, Expr),
    Meet(LineExpr, LineExpr),
    MeetCircle(LineExpr, Ident, Expr, Pick),
    Foot(Ident, LineExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Param,
    Point(PointCons),
    Line(LineExpr),
    Claim(Expr, Expr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementKind {
    ParamDecl,
    PointConstruction,
    LineConstruction,
    Claim,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub ident: Ident,
    pub payload: Payload,
    pub aux: bool,
    pub span: Loc,
}

impl Statement {
    pub fn kind(&self) -> StatementKind {
        match self.payload {
            Payload::Param => StatementKind::ParamDecl,
            Payload::Point(_) => StatementKind::PointConstruction,
            Payload::Line(_) => StatementKind::LineConstruction,
            Payload::Claim(..) => StatementKind::Claim,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstructionKind {
    Point(PointCons),
    Line(LineExpr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub name: String,
    pub kind: ConstructionKind,
    pub aux: bool,
    pub span: Loc,
}

impl Construction {
    pub fn is_point(&self) -> bool {
        matches!(self.kind, ConstructionKind::Point(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub lhs: Expr,
    pub rhs: Expr,
    pub span: Loc,
}

/// A validated theorem: parameters, constructions in file order, claims.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisModel {
    pub params: Vec<String>,
    pub constructions: Vec<Construction>,
    pub claims: Vec<Claim>,
}

impl HypothesisModel {
    pub fn points(&self) -> impl Iterator<Item = &Construction> {
        self.constructions.iter().filter(|c| c.is_point())
    }

    pub fn lines(&self) -> impl Iterator<Item = &Construction> {
        self.constructions.iter().filter(|c| !c.is_point())
    }

    pub fn aux(&self) -> impl Iterator<Item = &Construction> {
        self.constructions.iter().filter(|c| c.aux)
    }

    pub fn construction(&self, name: &str) -> Option<&Construction> {
        self.constructions.iter().find(|c| c.name == name)
    }

    pub fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: expected {expected}")]
    Syntax { span: Span, expected: String },
    #[error("{span}: limit exceeded: {what} (limit {limit})")]
    LimitExceeded { span: Span, what: String, limit: usize },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::LimitExceeded { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidateError {
    #[error("{span}: unknown symbol `{name}`")]
    UnknownSymbol { name: String, span: Span },
    #[error("{span}: duplicate symbol `{name}`")]
    DuplicateSymbol { name: String, span: Span },
    #[error("{span}: missing frame anchor: {detail}")]
    MissingFrameAnchor { detail: String, span: Span },
    #[error("{span}: `{name}` is used before its declaration")]
    ForwardReference { name: String, span: Span },
    #[error("{span}: `{name}` is a {found}, expected a {expected}")]
    KindMismatch { name: String, expected: &'static str, found: &'static str, span: Span },
    #[error("{span}: {detail}")]
    Incomplete { detail: String, span: Span },
}

impl ValidateError {
    pub fn span(&self) -> Span {
        match self {
            ValidateError::UnknownSymbol { span, .. }
            | ValidateError::DuplicateSymbol { span, .. }
            | ValidateError::MissingFrameAnchor { span, .. }
            | ValidateError::ForwardReference { span, .. }
            | ValidateError::KindMismatch { span, .. }
            | ValidateError::Incomplete { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validate(#[from] ValidateError),
}

impl DslError {
    pub fn span(&self) -> Span {
        match self {
            DslError::Parse(e) => e.span(),
            DslError::Validate(e) => e.span(),
        }
    }

    /// `file:line:col: message`
    pub fn diagnostic(&self, file: &str) -> String {
        let span = self.span();
        let msg = self.to_string();
        let msg = msg.split_once(": ").map(|(_, m)| m).unwrap_or(&msg);
        format!("{file}:{}:{}: {msg}", span.line, span.col)
    }
}

/// `parse` followed by `validate`.
pub fn load(text: &str) -> Result<HypothesisModel, DslError> {
    let stmts = parse(text)?;
    Ok(validate(&stmts)?)
}
