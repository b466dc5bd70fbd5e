use std::fmt::Write;

use super::{BinOp, ConstructionKind, Expr, HypothesisModel, LineExpr, Pick, PointCons};

/// Pretty-prints a model in canonical `.gthm` form.
pub fn render(model: &HypothesisModel) -> String {
    let mut out = String::new();
    for p in &model.params {
        writeln!(out, "param {p}").unwrap();
    }
    for c in &model.constructions {
        let aux = if c.aux { "aux " } else { "" };
        match &c.kind {
            ConstructionKind::Point(pc) => writeln!(out, "{aux}point {} = {}", c.name, render_point(pc)).unwrap(),
            ConstructionKind::Line(l) => writeln!(out, "{aux}line {} = {}", c.name, render_line(l)).unwrap(),
        }
    }
    for claim in &model.claims {
        writeln!(out, "claim {} = {}", render_expr(&claim.lhs), render_expr(&claim.rhs)).unwrap();
    }
    out
}

pub fn render_point(c: &PointCons) -> String {
    match c {
        PointCons::Origin => "origin".into(),
        PointCons::Baseline(p, d) => format!("baseline({}, {})", p.name, render_expr(d)),
        PointCons::OnSegment(p, q, d) => format!("on_segment({}, {}, {})", p.name, q.name, render_expr(d)),
        PointCons::OffsetPerp(p, l, d) => format!("offset_perp({}, {}, {})", p.name, render_line(l), render_expr(d)),
        PointCons::Meet(a, b) => format!("meet({}, {})", render_line(a), render_line(b)),
        PointCons::MeetCircle(l, c, r, pick) => {
            format!("meet_circle({}, {}, {}, {})", render_line(l), c.name, render_expr(r), render_pick(pick))
        }
        PointCons::Foot(p, l) => format!("foot({}, {})", p.name, render_line(l)),
    }
}

fn render_pick(p: &Pick) -> String {
    match p {
        Pick::First => "first".into(),
        Pick::Second => "second".into(),
        Pick::WithinSegment(a, b) => format!("within_segment({}, {})", a.name, b.name),
        Pick::Nearest(a) => format!("nearest({})", a.name),
    }
}

pub fn render_line(l: &LineExpr) -> String {
    match l {
        LineExpr::Named(n) => n.name.clone(),
        LineExpr::Through(a, b) => format!("through({}, {})", a.name, b.name),
        LineExpr::ExtendRay(a, b) => format!("extend_ray({}, {})", a.name, b.name),
        LineExpr::Parallel(p, inner) => format!("through({}) parallel({})", p.name, render_line(inner)),
        LineExpr::Perp(p, inner) => format!("through({}) perp({})", p.name, render_line(inner)),
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Num(n) if !n.is_integer() || n < &num::zero() => 0,
        _ => 4,
    }
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Num(n) => n.to_string(),
        Expr::Param(p) => p.name.clone(),
        Expr::Len(a, b) => format!("len({},{})", a.name, b.name),
        Expr::Neg(inner) => format!("-{}", wrap(inner, 3)),
        Expr::Bin(op, a, b) => {
            let (sym, p) = match op {
                BinOp::Add => ("+", 1),
                BinOp::Sub => ("-", 1),
                BinOp::Mul => ("*", 2),
                BinOp::Div => ("/", 2),
            };
            // left-associative: the right operand needs parens at equal precedence
            format!("{} {sym} {}", wrap(a, p), wrap(b, p + 1))
        }
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = render_expr(e);
    if prec(e) < min {
        format!("({s})")
    } else {
        s
    }
}
