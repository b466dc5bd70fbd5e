use std::collections::HashMap;

use num::Zero;

use crate::dsl::{BinOp, ConstructionKind, Expr, HypothesisModel, LineExpr, PointCons};

/// Degree bound of a quantity as a rational function of the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deg {
    /// Identically zero.
    Zero,
    /// Numerator and denominator total-degree bounds.
    Rat { num: u32, den: u32 },
    /// Involves a square root that is not known to be rational.
    Radical,
}

impl Deg {
    const ONE: Deg = Deg::Rat { num: 0, den: 0 };

    fn add(self, o: Deg) -> Deg {
        match (self, o) {
            (Deg::Radical, _) | (_, Deg::Radical) => Deg::Radical,
            (Deg::Zero, x) | (x, Deg::Zero) => x,
            (Deg::Rat { num: n1, den: d1 }, Deg::Rat { num: n2, den: d2 }) => {
                if d1 == 0 && d2 == 0 {
                    Deg::Rat { num: n1.max(n2), den: 0 }
                } else {
                    Deg::Rat { num: (n1 + d2).max(n2 + d1), den: d1 + d2 }
                }
            }
        }
    }

    fn mul(self, o: Deg) -> Deg {
        match (self, o) {
            (Deg::Zero, _) | (_, Deg::Zero) => Deg::Zero,
            (Deg::Radical, _) | (_, Deg::Radical) => Deg::Radical,
            (Deg::Rat { num: n1, den: d1 }, Deg::Rat { num: n2, den: d2 }) => Deg::Rat { num: n1 + n2, den: d1 + d2 },
        }
    }

    fn inv(self) -> Deg {
        match self {
            Deg::Rat { num, den } => Deg::Rat { num: den, den: num },
            _ => Deg::Radical,
        }
    }

    fn div(self, o: Deg) -> Deg {
        self.mul(o.inv())
    }
}

#[derive(Debug, Clone, Copy)]
struct P2 {
    x: Deg,
    y: Deg,
}

impl P2 {
    fn add(self, o: P2) -> P2 {
        P2 { x: self.x.add(o.x), y: self.y.add(o.y) }
    }

    fn scale(self, k: Deg) -> P2 {
        P2 { x: self.x.mul(k), y: self.y.mul(k) }
    }

    fn dot(self, o: P2) -> Deg {
        self.x.mul(o.x).add(self.y.mul(o.y))
    }

    fn cross(self, o: P2) -> Deg {
        self.x.mul(o.y).add(self.y.mul(o.x))
    }

    fn rot90(self) -> P2 {
        P2 { x: self.y, y: self.x }
    }

    fn norm(self) -> Deg {
        match (self.x, self.y) {
            (Deg::Zero, v) | (v, Deg::Zero) => v,
            _ => Deg::Radical,
        }
    }

    fn norm2(self) -> Deg {
        self.dot(self)
    }
}

/// Propagates degree bounds through the constructions, treating a negation
/// as degree-preserving and a sum as never cancelling.
pub struct DegreeMap<'a> {
    model: &'a HypothesisModel,
    points: HashMap<String, P2>,
    lines: HashMap<String, (P2, P2)>,
}

impl<'a> DegreeMap<'a> {
    pub fn new(model: &'a HypothesisModel) -> DegreeMap<'a> {
        let mut m = DegreeMap { model, points: HashMap::new(), lines: HashMap::new() };
        for c in &model.constructions {
            match &c.kind {
                ConstructionKind::Point(p) => {
                    let v = m.point(p);
                    m.points.insert(c.name.clone(), v);
                }
                ConstructionKind::Line(l) => {
                    let v = m.line(l);
                    m.lines.insert(c.name.clone(), v);
                }
            }
        }
        m
    }

    fn pt(&self, name: &str) -> P2 {
        self.points.get(name).copied().unwrap_or(P2 { x: Deg::Radical, y: Deg::Radical })
    }

    fn sub(&self, a: &str, b: &str) -> P2 {
        self.pt(a).add(self.pt(b))
    }

    pub fn expr(&self, e: &Expr) -> Deg {
        match e {
            Expr::Num(n) if n.is_zero() => Deg::Zero,
            Expr::Num(_) => Deg::ONE,
            Expr::Param(p) if self.model.is_param(&p.name) => Deg::Rat { num: 1, den: 0 },
            Expr::Param(_) => Deg::Radical,
            Expr::Len(a, b) => self.sub(&a.name, &b.name).norm(),
            Expr::Neg(e) => self.expr(e),
            Expr::Bin(op, l, r) => {
                let (l, r) = (self.expr(l), self.expr(r));
                match op {
                    BinOp::Add | BinOp::Sub => l.add(r),
                    BinOp::Mul => l.mul(r),
                    BinOp::Div => l.div(r),
                }
            }
        }
    }

    /// Bound for the square of `e`, for lengths whose square is rational.
    pub fn squared(&self, e: &Expr) -> Deg {
        match e {
            Expr::Len(a, b) => self.sub(&a.name, &b.name).norm2(),
            Expr::Neg(e) => self.squared(e),
            Expr::Bin(BinOp::Mul, l, r) => self.squared(l).mul(self.squared(r)),
            Expr::Bin(BinOp::Div, l, r) => self.squared(l).div(self.squared(r)),
            _ => {
                let d = self.expr(e);
                d.mul(d)
            }
        }
    }

    fn line(&self, l: &LineExpr) -> (P2, P2) {
        let radical = P2 { x: Deg::Radical, y: Deg::Radical };
        match l {
            LineExpr::Named(n) => self.lines.get(&n.name).copied().unwrap_or((radical, radical)),
            LineExpr::Through(p, q) | LineExpr::ExtendRay(p, q) => (self.pt(&p.name), self.sub(&q.name, &p.name)),
            LineExpr::Parallel(p, inner) => (self.pt(&p.name), self.line(inner).1),
            LineExpr::Perp(p, inner) => (self.pt(&p.name), self.line(inner).1.rot90()),
        }
    }

    fn point(&self, p: &PointCons) -> P2 {
        match p {
            PointCons::Origin => P2 { x: Deg::Zero, y: Deg::Zero },
            PointCons::Baseline(b, d) => self.pt(&b.name).add(P2 { x: self.expr(d), y: Deg::Zero }),
            PointCons::OnSegment(p, q, d) => {
                let dir = self.sub(&q.name, &p.name);
                self.pt(&p.name).add(dir.scale(self.expr(d).div(dir.norm())))
            }
            PointCons::OffsetPerp(p, l, d) => {
                let n = self.line(l).1.rot90();
                self.pt(&p.name).add(n.scale(self.expr(d).div(n.norm())))
            }
            PointCons::Meet(l1, l2) => {
                let ((p1, d1), (p2, d2)) = (self.line(l1), self.line(l2));
                let t = p2.add(p1).cross(d2).div(d1.cross(d2));
                p1.add(d1.scale(t))
            }
            PointCons::MeetCircle(..) => P2 { x: Deg::Radical, y: Deg::Radical },
            PointCons::Foot(q, l) => {
                let (p, d) = self.line(l);
                let t = self.pt(&q.name).add(p).dot(d).div(d.norm2());
                p.add(d.scale(t))
            }
        }
    }
}

/// Numerator degree bound of `lhs^2 - rhs^2`, when both squares are rational
/// functions of the parameters.
pub fn claim_degree(model: &HypothesisModel, lhs: &Expr, rhs: &Expr) -> Option<u32> {
    let m = DegreeMap::new(model);
    match m.squared(lhs).add(m.squared(rhs)) {
        Deg::Zero => Some(0),
        Deg::Rat { num, .. } => Some(num),
        Deg::Radical => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load;

    #[test]
    fn frame_degrees() {
        let m = load("param x\npoint O = origin\npoint A = baseline(O, x)\nclaim len(O,A) = x\n").unwrap();
        let d = DegreeMap::new(&m);
        assert_eq!(d.pt("O").x, Deg::Zero);
        assert_eq!(d.pt("A").x, Deg::Rat { num: 1, den: 0 });
        assert_eq!(d.pt("A").y, Deg::Zero);
        assert_eq!(claim_degree(&m, &m.claims[0].lhs, &m.claims[0].rhs), Some(2));
    }

    #[test]
    fn circles_are_radical() {
        let m = load(include_str!("../../../../fixtures/imo2012.gthm")).unwrap();
        let c = &m.claims[0];
        assert_eq!(claim_degree(&m, &c.lhs, &c.rhs), None);
    }

    #[test]
    fn parallelogram_is_rational() {
        let m = load(include_str!("../../../../fixtures/parallelogram.gthm")).unwrap();
        let c = &m.claims[0];
        assert!(claim_degree(&m, &c.lhs, &c.rhs).is_some_and(|d| d > 0));
    }
}
