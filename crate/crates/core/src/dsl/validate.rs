use std::collections::HashMap;

use super::{
    Claim, Construction, ConstructionKind, Expr, ExprRef, HypothesisModel, Ident, LineExpr, Payload, Pick,
    PointCons, Span, Statement, ValidateError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Param,
    Point,
    Line,
}

impl Sym {
    fn name(self) -> &'static str {
        match self {
            Sym::Param => "parameter",
            Sym::Point => "point",
            Sym::Line => "line",
        }
    }
}

struct Scope {
    // every declaration in the file, with its statement index
    all: HashMap<String, (Sym, usize)>,
    current: usize,
}

impl Scope {
    fn expect(&self, id: &Ident, want: Sym) -> Result<(), ValidateError> {
        match self.all.get(&id.name) {
            None => Err(ValidateError::UnknownSymbol { name: id.name.clone(), span: id.span }),
            Some(&(_, idx)) if idx >= self.current => {
                Err(ValidateError::ForwardReference { name: id.name.clone(), span: id.span })
            }
            Some(&(sym, _)) if sym != want => Err(ValidateError::KindMismatch {
                name: id.name.clone(),
                expected: want.name(),
                found: sym.name(),
                span: id.span,
            }),
            Some(_) => Ok(()),
        }
    }

    fn expr(&self, e: &Expr) -> Result<(), ValidateError> {
        let mut err = None;
        e.visit_refs(&mut |r| {
            if err.is_some() {
                return;
            }
            let res = match r {
                ExprRef::Param(p) => self.expect(p, Sym::Param),
                ExprRef::Len(a, b) => self.expect(a, Sym::Point).and_then(|_| self.expect(b, Sym::Point)),
            };
            if let Err(e) = res {
                err = Some(e);
            }
        });
        err.map_or(Ok(()), Err)
    }

    fn line(&self, l: &LineExpr) -> Result<(), ValidateError> {
        match l {
            LineExpr::Named(n) => self.expect(n, Sym::Line),
            LineExpr::Through(a, b) | LineExpr::ExtendRay(a, b) => {
                self.expect(a, Sym::Point)?;
                self.expect(b, Sym::Point)?;
                if a.name == b.name {
                    return Err(ValidateError::Incomplete {
                        detail: format!("a line needs two distinct points, got `{}` twice", a.name),
                        span: b.span,
                    });
                }
                Ok(())
            }
            LineExpr::Parallel(p, inner) | LineExpr::Perp(p, inner) => {
                self.expect(p, Sym::Point)?;
                self.line(inner)
            }
        }
    }

    fn point(&self, c: &PointCons) -> Result<(), ValidateError> {
        match c {
            PointCons::Origin => Ok(()),
            PointCons::Baseline(p, d) => {
                self.expect(p, Sym::Point)?;
                self.expr(d)
            }
            PointCons::OnSegment(p, q, d) => {
                self.expect(p, Sym::Point)?;
                self.expect(q, Sym::Point)?;
                self.expr(d)
            }
            PointCons::OffsetPerp(p, l, d) => {
                self.expect(p, Sym::Point)?;
                self.line(l)?;
                self.expr(d)
            }
            PointCons::Meet(a, b) => {
                self.line(a)?;
                self.line(b)
            }
            PointCons::MeetCircle(l, c, r, pick) => {
                self.line(l)?;
                self.expect(c, Sym::Point)?;
                self.expr(r)?;
                match pick {
                    Pick::First | Pick::Second => Ok(()),
                    Pick::WithinSegment(p, q) => {
                        self.expect(p, Sym::Point)?;
                        self.expect(q, Sym::Point)
                    }
                    Pick::Nearest(p) => self.expect(p, Sym::Point),
                }
            }
            PointCons::Foot(p, l) => {
                self.expect(p, Sym::Point)?;
                self.line(l)
            }
        }
    }
}

/// Resolves symbols and checks the frame anchors, producing a model whose
/// construction order equals statement order.
pub fn validate(stmts: &[Statement]) -> Result<HypothesisModel, ValidateError> {
    let mut all: HashMap<String, (Sym, usize)> = HashMap::new();
    for (i, s) in stmts.iter().enumerate() {
        let sym = match s.payload {
            Payload::Param => Sym::Param,
            Payload::Point(_) => Sym::Point,
            Payload::Line(_) => Sym::Line,
            Payload::Claim(..) => continue,
        };
        if all.contains_key(&s.ident.name) {
            return Err(ValidateError::DuplicateSymbol { name: s.ident.name.clone(), span: s.ident.span });
        }
        all.insert(s.ident.name.clone(), (sym, i));
    }

    let mut scope = Scope { all, current: 0 };
    let mut params = Vec::new();
    let mut constructions = Vec::new();
    let mut claims = Vec::new();
    let mut origin: Option<String> = None;
    let mut baseline_seen = false;
    let mut points_seen = 0usize;

    for (i, s) in stmts.iter().enumerate() {
        scope.current = i;
        match &s.payload {
            Payload::Param => params.push(s.ident.name.clone()),
            Payload::Point(c) => {
                match (points_seen, c) {
                    (0, PointCons::Origin) => origin = Some(s.ident.name.clone()),
                    (0, _) => {
                        return Err(anchor("the first point must be `origin`", s.ident.span));
                    }
                    (1, PointCons::Baseline(p, _)) => {
                        if Some(&p.name) != origin.as_ref() {
                            return Err(anchor("`baseline` must start at the origin point", p.span));
                        }
                        baseline_seen = true;
                    }
                    (1, _) => {
                        return Err(anchor("the second point must be `baseline(origin, d)`", s.ident.span));
                    }
                    (_, PointCons::Origin) => {
                        return Err(anchor("only one `origin` point may be declared", s.ident.span));
                    }
                    (_, PointCons::Baseline(..)) => {
                        return Err(anchor("only one `baseline` point may be declared", s.ident.span));
                    }
                    _ => {}
                }
                scope.point(c)?;
                points_seen += 1;
                constructions.push(Construction {
                    name: s.ident.name.clone(),
                    kind: ConstructionKind::Point(c.clone()),
                    aux: s.aux,
                    span: s.span,
                });
            }
            Payload::Line(l) => {
                scope.line(l)?;
                constructions.push(Construction {
                    name: s.ident.name.clone(),
                    kind: ConstructionKind::Line(l.clone()),
                    aux: s.aux,
                    span: s.span,
                });
            }
            Payload::Claim(lhs, rhs) => {
                scope.current = stmts.len();
                scope.expr(lhs)?;
                scope.expr(rhs)?;
                claims.push(Claim { lhs: lhs.clone(), rhs: rhs.clone(), span: s.span });
            }
        }
    }

    let end = stmts.last().map(|s| s.span.0).unwrap_or(Span { line: 1, col: 1, end_col: 1 });
    if origin.is_none() {
        return Err(anchor("no `origin` point declared", end));
    }
    if !baseline_seen {
        return Err(anchor("no `baseline` point declared", end));
    }
    if params.is_empty() {
        return Err(ValidateError::Incomplete { detail: "no parameters declared".into(), span: end });
    }
    if claims.is_empty() {
        return Err(ValidateError::Incomplete { detail: "no claim declared".into(), span: end });
    }
    Ok(HypothesisModel { params, constructions, claims })
}

fn anchor(detail: &str, span: Span) -> ValidateError {
    ValidateError::MissingFrameAnchor { detail: detail.to_string(), span }
}
