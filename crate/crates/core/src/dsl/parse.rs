use num::rational::BigRational;
use num::Zero;

use super::{BinOp, Expr, Ident, LineExpr, Loc, ParseError, Payload, Pick, PointCons, Span, Statement};
use crate::num::parse_rational;

#[derive(Debug, Clone, Copy)]
pub struct ParseLimits {
    pub max_bytes: usize,
    pub max_line_len: usize,
    pub max_statements: usize,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits { max_bytes: 1 << 20, max_line_len: 1024, max_statements: 4096 }
    }
}

pub fn parse(text: &str) -> Result<Vec<Statement>, ParseError> {
    parse_with_limits(text, ParseLimits::default())
}

pub fn parse_with_limits(text: &str, limits: ParseLimits) -> Result<Vec<Statement>, ParseError> {
    if text.len() > limits.max_bytes {
        return Err(ParseError::LimitExceeded {
            span: Span { line: 1, col: 1, end_col: 1 },
            what: "file size in bytes".into(),
            limit: limits.max_bytes,
        });
    }
    let mut out = Vec::new();
    let mut claims = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let width = raw.chars().count();
        if width > limits.max_line_len {
            return Err(ParseError::LimitExceeded {
                span: Span { line: line_no, col: limits.max_line_len + 1, end_col: width + 1 },
                what: "line length".into(),
                limit: limits.max_line_len,
            });
        }
        let tokens = lex(raw, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        if out.len() == limits.max_statements {
            return Err(ParseError::LimitExceeded {
                span: tokens[0].span,
                what: "statement count".into(),
                limit: limits.max_statements,
            });
        }
        let mut p = LineParser { toks: tokens, pos: 0, line: line_no, eol_col: width + 1 };
        let stmt = p.statement(&mut claims)?;
        out.push(stmt);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigRational),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
            continue;
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(s), span: span(line_no, start, i) });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let sp = span(line_no, start, i);
            let value = parse_rational(&s)
                .ok_or_else(|| ParseError::Syntax { span: sp, expected: "a number".into() })?;
            out.push(Token { tok: Tok::Num(value), span: sp });
        } else if "(),=+-*/".contains(c) {
            i += 1;
            out.push(Token { tok: Tok::Punct(c), span: span(line_no, start, i) });
        } else {
            return Err(ParseError::Syntax {
                span: span(line_no, start, start + 1),
                expected: format!("a token, found `{c}`"),
            });
        }
    }
    Ok(out)
}

fn span(line: usize, start: usize, end: usize) -> Span {
    Span { line, col: start + 1, end_col: end + 1 }
}

struct LineParser {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    eol_col: usize,
}

type PResult<T> = Result<T, ParseError>;

impl LineParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => Span { line: self.line, col: self.eol_col, end_col: self.eol_col },
        }
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError::Syntax { span: self.here(), expected: expected.to_string() })
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), span }) => {
                let id = Ident::new(s.clone(), *span);
                self.pos += 1;
                Ok(id)
            }
            _ => self.fail(what),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Ident(s), span }) if s == kw => {
                let sp = *span;
                self.pos += 1;
                Ok(sp)
            }
            _ => self.fail(&format!("`{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn punct(&mut self, c: char) -> PResult<()> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.fail("end of line")
        }
    }

    fn statement(&mut self, claims: &mut usize) -> PResult<Statement> {
        let first = self.here();
        let aux = if self.at_keyword("aux") {
            self.pos += 1;
            true
        } else {
            false
        };
        let kw = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.fail("`param`, `point`, `line`, `aux` or `claim`"),
        };
        let stmt = match kw.as_str() {
            "param" if !aux => {
                self.pos += 1;
                let ident = self.ident("a parameter name")?;
                Statement { ident, payload: Payload::Param, aux, span: Loc(first) }
            }
            "point" => {
                self.pos += 1;
                let ident = self.ident("a point name")?;
                self.punct('=')?;
                let cons = self.point_cons()?;
                Statement { ident, payload: Payload::Point(cons), aux, span: Loc(first) }
            }
            "line" => {
                self.pos += 1;
                let ident = self.ident("a line name")?;
                self.punct('=')?;
                let l = self.line_expr()?;
                Statement { ident, payload: Payload::Line(l), aux, span: Loc(first) }
            }
            "claim" if !aux => {
                let sp = self.keyword("claim")?;
                let lhs = self.expr()?;
                self.punct('=')?;
                let rhs = self.expr()?;
                *claims += 1;
                let ident = Ident::new(format!("claim#{claims}"), sp);
                Statement { ident, payload: Payload::Claim(lhs, rhs), aux, span: Loc(first) }
            }
            _ if aux => return self.fail("`point` or `line` after `aux`"),
            _ => return self.fail("`param`, `point`, `line`, `aux` or `claim`"),
        };
        self.end()?;
        let mut stmt = stmt;
        let end = self.toks.last().map(|t| t.span.end_col).unwrap_or(first.col);
        stmt.span = Loc(Span { line: self.line, col: first.col, end_col: end });
        Ok(stmt)
    }

    fn point_cons(&mut self) -> PResult<PointCons> {
        let name = self.ident("a point construction")?;
        let cons = match name.name.as_str() {
            "origin" => PointCons::Origin,
            "baseline" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(',')?;
                let d = self.expr()?;
                self.punct(')')?;
                PointCons::Baseline(p, d)
            }
            "on_segment" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(',')?;
                let q = self.ident("a point")?;
                self.punct(',')?;
                let d = self.expr()?;
                self.punct(')')?;
                PointCons::OnSegment(p, q, d)
            }
            "offset_perp" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(',')?;
                let l = self.line_expr()?;
                self.punct(',')?;
                let d = self.expr()?;
                self.punct(')')?;
                PointCons::OffsetPerp(p, l, d)
            }
            "meet" => {
                self.punct('(')?;
                let a = self.line_expr()?;
                self.punct(',')?;
                let b = self.line_expr()?;
                self.punct(')')?;
                PointCons::Meet(a, b)
            }
            "meet_circle" => {
                self.punct('(')?;
                let l = self.line_expr()?;
                self.punct(',')?;
                let c = self.ident("a center point")?;
                self.punct(',')?;
                let r = self.expr()?;
                self.punct(',')?;
                let pick = self.pick()?;
                self.punct(')')?;
                PointCons::MeetCircle(l, c, r, pick)
            }
            "foot" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(',')?;
                let l = self.line_expr()?;
                self.punct(')')?;
                PointCons::Foot(p, l)
            }
            _ => {
                self.pos -= 1;
                return self.fail(
                    "one of origin, baseline, on_segment, offset_perp, meet, meet_circle, foot",
                );
            }
        };
        Ok(cons)
    }

    fn pick(&mut self) -> PResult<Pick> {
        let name = self.ident("a root policy")?;
        match name.name.as_str() {
            "first" => Ok(Pick::First),
            "second" => Ok(Pick::Second),
            "within_segment" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(',')?;
                let q = self.ident("a point")?;
                self.punct(')')?;
                Ok(Pick::WithinSegment(p, q))
            }
            "nearest" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(')')?;
                Ok(Pick::Nearest(p))
            }
            _ => {
                self.pos -= 1;
                self.fail("one of first, second, within_segment, nearest")
            }
        }
    }

    fn line_expr(&mut self) -> PResult<LineExpr> {
        let name = self.ident("a line expression")?;
        match name.name.as_str() {
            "through" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                if self.eat_punct(',') {
                    let q = self.ident("a point")?;
                    self.punct(')')?;
                    return Ok(LineExpr::Through(p, q));
                }
                self.punct(')')?;
                if self.at_keyword("parallel") {
                    self.pos += 1;
                    self.punct('(')?;
                    let l = self.line_expr()?;
                    self.punct(')')?;
                    Ok(LineExpr::Parallel(p, Box::new(l)))
                } else if self.at_keyword("perp") {
                    self.pos += 1;
                    self.punct('(')?;
                    let l = self.line_expr()?;
                    self.punct(')')?;
                    Ok(LineExpr::Perp(p, Box::new(l)))
                } else {
                    self.fail("`parallel(...)` or `perp(...)`")
                }
            }
            "extend_ray" => {
                self.punct('(')?;
                let p = self.ident("a point")?;
                self.punct(',')?;
                let q = self.ident("a point")?;
                self.punct(')')?;
                Ok(LineExpr::ExtendRay(p, q))
            }
            _ => Ok(LineExpr::Named(name)),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_punct('+') {
                BinOp::Add
            } else if self.eat_punct('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = fold(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat_punct('*') {
                BinOp::Mul
            } else if self.eat_punct('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.factor()?;
            lhs = fold(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Token { tok: Tok::Num(v), .. }) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Token { tok: Tok::Punct('-'), .. }) => {
                self.pos += 1;
                let inner = self.factor()?;
                Ok(match inner {
                    Expr::Num(v) => Expr::Num(-v),
                    e => Expr::Neg(Box::new(e)),
                })
            }
            Some(Token { tok: Tok::Punct('('), .. }) => {
                self.pos += 1;
                let e = self.expr()?;
                self.punct(')')?;
                Ok(e)
            }
            Some(Token { tok: Tok::Ident(s), span }) if s == "len" => {
                self.pos += 1;
                if self.peek() != Some(&Tok::Punct('(')) {
                    return Ok(Expr::Param(Ident::new(s, span)));
                }
                self.punct('(')?;
                let a = self.ident("a point")?;
                self.punct(',')?;
                let b = self.ident("a point")?;
                self.punct(')')?;
                Ok(Expr::Len(a, b))
            }
            Some(Token { tok: Tok::Ident(s), span }) => {
                self.pos += 1;
                Ok(Expr::Param(Ident::new(s, span)))
            }
            _ => self.fail("an expression"),
        }
    }
}

// numeric literals are folded so that `1/2` and `-3` are single constants
fn fold(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    if let (Expr::Num(a), Expr::Num(b)) = (&lhs, &rhs) {
        match op {
            BinOp::Add => return Expr::Num(a + b),
            BinOp::Sub => return Expr::Num(a - b),
            BinOp::Mul => return Expr::Num(a * b),
            BinOp::Div if !b.is_zero() => return Expr::Num(a / b),
            BinOp::Div => {}
        }
    }
    Expr::Bin(op, Box::new(lhs), Box::new(rhs))
}
