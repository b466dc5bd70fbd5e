//! The Cartesian oracle: evaluates every declared point and line for a
//! parameter assignment, exactly when no square root of a non-square gets in
//! the way.

mod geom;
mod sample;

use std::collections::HashMap;

use indexmap::IndexMap;
use num::rational::BigRational;
use serde::Serialize;
use thiserror::Error;

pub use geom::{foot_of_perpendicular, intersect_lines, line_circle_meet, line_circle_roots, Coord, Exactness, Line, RootPick};
pub use sample::{sample_params, ParamAssignment, SampleRange, Sampler, Witness, RETRY_CAP};

use crate::dim::{Dim, LinearForm, Seg};
use crate::dsl::{BinOp, ConstructionKind, Expr, ExprRef, HypothesisModel, LineExpr, Pick, PointCons};
use crate::num::{NumError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("lines are parallel")]
    ParallelLines,
    #[error("line misses the circle")]
    NoIntersection,
    #[error("root policy does not select exactly one intersection")]
    AmbiguousPick,
    #[error("line has no direction")]
    DegenerateLine,
    #[error("point {0} leaves the interior of its segment")]
    OutsideSegment(String),
    #[error("distance for {0} must be positive")]
    NonPositiveDistance(String),
    #[error("points {0} and {1} coincide")]
    CoincidentPoints(String, String),
    #[error("point {0} cannot be constructed from earlier steps")]
    UnconstructiblePoint(String),
    #[error("parameter {0} has no value")]
    MissingParam(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("arithmetic failure: {0}")]
    Num(#[from] NumError),
    #[error("no non-degenerate assignment after {attempts} attempts (last: {last})")]
    DegenerateModel { attempts: usize, last: Box<SceneError> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Point,
    Line,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanStep {
    pub name: String,
    pub kind: StepKind,
    pub construction: String,
    pub radical: bool,
    pub aux: bool,
    #[serde(skip)]
    pub index: usize,
}

/// An immutable evaluator for one model.
#[derive(Debug, Clone)]
pub struct Scene {
    model: HypothesisModel,
    plan: Vec<PlanStep>,
    origin: String,
    baseline: String,
}

#[derive(Debug, Clone, Default)]
pub struct Evaluation {
    points: IndexMap<String, Coord>,
    lines: HashMap<String, Line>,
}

impl Evaluation {
    pub fn point(&self, name: &str) -> Result<&Coord, SceneError> {
        self.points.get(name).ok_or_else(|| SceneError::UnknownPoint(name.to_string()))
    }

    pub fn points(&self) -> impl Iterator<Item = (&str, &Coord)> {
        self.points.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// The same points in floating point; lines are dropped.
    pub fn to_float(&self) -> Evaluation {
        let f = |v: &Scalar| Scalar::from_f64(v.to_f64());
        let points = self.points.iter().map(|(k, c)| (k.clone(), Coord { x: f(&c.x), y: f(&c.y) })).collect();
        Evaluation { points, lines: HashMap::new() }
    }

    pub fn length(&self, seg: &Seg) -> Result<Scalar, SceneError> {
        let (a, b) = seg.ends();
        Ok(self.point(a)?.dist(self.point(b)?)?)
    }
}

pub fn build_scene(model: &HypothesisModel) -> Result<Scene, SceneError> {
    let mut radical: HashMap<&str, bool> = HashMap::new();
    let mut plan = Vec::with_capacity(model.constructions.len());
    for (index, c) in model.constructions.iter().enumerate() {
        let deps = dependencies(&c.kind);
        let mut is_radical = matches!(c.kind, ConstructionKind::Point(PointCons::MeetCircle(..)));
        for d in &deps {
            match radical.get(d.as_str()) {
                Some(r) => is_radical |= *r,
                None => return Err(SceneError::UnconstructiblePoint(c.name.clone())),
            }
        }
        radical.insert(&c.name, is_radical);
        let (kind, construction) = match &c.kind {
            ConstructionKind::Point(p) => (StepKind::Point, crate::dsl::render_point(p)),
            ConstructionKind::Line(l) => (StepKind::Line, crate::dsl::render_line(l)),
        };
        plan.push(PlanStep { name: c.name.clone(), kind, construction, radical: is_radical, aux: c.aux, index });
    }
    let mut points = model.points();
    let origin = points.next().map(|c| c.name.clone()).unwrap_or_default();
    let baseline = points.next().map(|c| c.name.clone()).unwrap_or_default();
    Ok(Scene { model: model.clone(), plan, origin, baseline })
}

/// Names of points and lines a construction reads.
pub fn dependencies(kind: &ConstructionKind) -> Vec<String> {
    let mut out = Vec::new();
    fn expr(e: &Expr, out: &mut Vec<String>) {
        e.visit_refs(&mut |r| {
            if let ExprRef::Len(a, b) = r {
                out.push(a.name.clone());
                out.push(b.name.clone());
            }
        });
    }
    fn line(l: &LineExpr, out: &mut Vec<String>) {
        match l {
            LineExpr::Named(n) => out.push(n.name.clone()),
            LineExpr::Through(a, b) | LineExpr::ExtendRay(a, b) => {
                out.push(a.name.clone());
                out.push(b.name.clone());
            }
            LineExpr::Parallel(p, inner) | LineExpr::Perp(p, inner) => {
                out.push(p.name.clone());
                line(inner, out);
            }
        }
    }
    match kind {
        ConstructionKind::Line(l) => line(l, &mut out),
        ConstructionKind::Point(p) => match p {
            PointCons::Origin => {}
            PointCons::Baseline(a, d) => {
                out.push(a.name.clone());
                expr(d, &mut out);
            }
            PointCons::OnSegment(a, b, d) => {
                out.push(a.name.clone());
                out.push(b.name.clone());
                expr(d, &mut out);
            }
            PointCons::OffsetPerp(a, l, d) => {
                out.push(a.name.clone());
                line(l, &mut out);
                expr(d, &mut out);
            }
            PointCons::Meet(a, b) => {
                line(a, &mut out);
                line(b, &mut out);
            }
            PointCons::MeetCircle(l, c, r, pick) => {
                line(l, &mut out);
                out.push(c.name.clone());
                expr(r, &mut out);
                match pick {
                    Pick::WithinSegment(a, b) => {
                        out.push(a.name.clone());
                        out.push(b.name.clone());
                    }
                    Pick::Nearest(a) => out.push(a.name.clone()),
                    Pick::First | Pick::Second => {}
                }
            }
            PointCons::Foot(a, l) => {
                out.push(a.name.clone());
                line(l, &mut out);
            }
        },
    }
    out.dedup();
    out
}

impl Scene {
    pub fn model(&self) -> &HypothesisModel {
        &self.model
    }

    pub fn plan(&self) -> &[PlanStep] {
        &self.plan
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn baseline(&self) -> &str {
        &self.baseline
    }

    pub fn point_names(&self) -> impl Iterator<Item = &str> {
        self.plan.iter().filter(|s| s.kind == StepKind::Point).map(|s| s.name.as_str())
    }

    pub fn is_radical(&self, point: &str) -> bool {
        self.plan.iter().any(|s| s.name == point && s.radical)
    }

    /// Evaluates the plan without degeneracy checks beyond what the
    /// primitives themselves reject.
    pub fn evaluate(&self, a: &ParamAssignment) -> Result<Evaluation, SceneError> {
        let mut ev = Evaluation::default();
        for step in &self.plan {
            let c = &self.model.constructions[step.index];
            match &c.kind {
                ConstructionKind::Point(p) => {
                    let coord = self.eval_point(&c.name, p, a, &ev)?;
                    ev.points.insert(c.name.clone(), coord);
                }
                ConstructionKind::Line(l) => {
                    let line = self.eval_line(l, &ev)?;
                    ev.lines.insert(c.name.clone(), line);
                }
            }
        }
        Ok(ev)
    }

    /// Evaluates and rejects assignments where two declared points coincide.
    pub fn evaluate_checked(&self, a: &ParamAssignment) -> Result<Evaluation, SceneError> {
        let ev = self.evaluate(a)?;
        let pts: Vec<(&str, (f64, f64))> = ev.points().map(|(n, c)| (n, c.to_f64())).collect();
        let scale = pts.iter().fold(1.0f64, |m, (_, (x, y))| m.max(x.abs()).max(y.abs()));
        for (i, (n1, p1)) in pts.iter().enumerate() {
            for (n2, p2) in &pts[i + 1..] {
                let d = (p1.0 - p2.0).hypot(p1.1 - p2.1);
                if !d.is_finite() || d <= 1e-9 * scale {
                    return Err(SceneError::CoincidentPoints(n1.to_string(), n2.to_string()));
                }
            }
        }
        Ok(ev)
    }

    pub fn eval_expr(&self, e: &Expr, a: &ParamAssignment, ev: &Evaluation) -> Result<Scalar, SceneError> {
        Ok(match e {
            Expr::Num(n) => Scalar::from_rational(n.clone()),
            Expr::Param(p) => Scalar::from_rational(
                a.get(&p.name).cloned().ok_or_else(|| SceneError::MissingParam(p.name.clone()))?,
            ),
            Expr::Len(p, q) => ev.point(&p.name)?.dist(ev.point(&q.name)?)?,
            Expr::Neg(inner) => self.eval_expr(inner, a, ev)?.neg(),
            Expr::Bin(op, l, r) => {
                let l = self.eval_expr(l, a, ev)?;
                let r = self.eval_expr(r, a, ev)?;
                match op {
                    BinOp::Add => l.add(&r),
                    BinOp::Sub => l.sub(&r),
                    BinOp::Mul => l.mul(&r),
                    BinOp::Div => l.div(&r)?,
                }
            }
        })
    }

    fn eval_line(&self, l: &LineExpr, ev: &Evaluation) -> Result<Line, SceneError> {
        match l {
            LineExpr::Named(n) => {
                ev.lines.get(&n.name).cloned().ok_or_else(|| SceneError::UnconstructiblePoint(n.name.clone()))
            }
            LineExpr::Through(p, q) | LineExpr::ExtendRay(p, q) => {
                Line::through(ev.point(&p.name)?, ev.point(&q.name)?)
            }
            LineExpr::Parallel(p, inner) => {
                let base = self.eval_line(inner, ev)?;
                Ok(Line { point: ev.point(&p.name)?.clone(), dir: base.dir })
            }
            LineExpr::Perp(p, inner) => {
                let base = self.eval_line(inner, ev)?;
                Ok(Line { point: ev.point(&p.name)?.clone(), dir: base.dir.rot90() })
            }
        }
    }

    fn eval_point(&self, name: &str, p: &PointCons, a: &ParamAssignment, ev: &Evaluation) -> Result<Coord, SceneError> {
        match p {
            PointCons::Origin => Ok(Coord::origin()),
            PointCons::Baseline(base, d) => {
                let d = self.eval_expr(d, a, ev)?;
                if d.signum() <= 0 {
                    return Err(SceneError::NonPositiveDistance(name.to_string()));
                }
                Ok(ev.point(&base.name)?.add(&Coord::new(d, Scalar::zero())))
            }
            PointCons::OnSegment(p, q, d) => {
                let d = self.eval_expr(d, a, ev)?;
                let p = ev.point(&p.name)?;
                let pq = ev.point(&q.name)?.sub(p);
                let len2 = pq.norm2();
                if d.signum() <= 0 {
                    return Err(SceneError::NonPositiveDistance(name.to_string()));
                }
                if d.square().sub(&len2).signum() >= 0 {
                    return Err(SceneError::OutsideSegment(name.to_string()));
                }
                let len = len2.sqrt()?;
                Ok(p.add(&pq.scale(&d.div(&len)?)))
            }
            PointCons::OffsetPerp(p, l, d) => {
                let d = self.eval_expr(d, a, ev)?;
                if d.is_zero() {
                    return Err(SceneError::NonPositiveDistance(name.to_string()));
                }
                let line = self.eval_line(l, ev)?;
                let n = line.dir.rot90();
                let len = n.norm2().sqrt()?;
                Ok(ev.point(&p.name)?.add(&n.scale(&d.div(&len)?)))
            }
            PointCons::Meet(l1, l2) => intersect_lines(&self.eval_line(l1, ev)?, &self.eval_line(l2, ev)?),
            PointCons::MeetCircle(l, c, r, pick) => {
                let line = self.eval_line(l, ev)?;
                let center = ev.point(&c.name)?;
                let radius = self.eval_expr(r, a, ev)?;
                if radius.signum() < 0 {
                    return Err(SceneError::NonPositiveDistance(name.to_string()));
                }
                let pick = match pick {
                    Pick::First => RootPick::First,
                    Pick::Second => RootPick::Second,
                    Pick::WithinSegment(p, q) => {
                        RootPick::WithinSegment(ev.point(&p.name)?.clone(), ev.point(&q.name)?.clone())
                    }
                    Pick::Nearest(p) => RootPick::Nearest(ev.point(&p.name)?.clone()),
                };
                line_circle_meet(&line, center, &radius, &pick)
            }
            PointCons::Foot(p, l) => foot_of_perpendicular(ev.point(&p.name)?, &self.eval_line(l, ev)?),
        }
    }
}

/// Direct Cartesian value of a dimension.
pub fn oracle_dimension(ev: &Evaluation, dim: &Dim) -> Result<Scalar, SceneError> {
    match dim {
        Dim::Length(s) => ev.length(s),
        Dim::Composite(f) => linear_value(ev, f),
        Dim::Ratio(n, d) => Ok(oracle_dimension(ev, n)?.div(&oracle_dimension(ev, d)?)?),
    }
}

fn linear_value(ev: &Evaluation, f: &LinearForm) -> Result<Scalar, SceneError> {
    let mut acc = Scalar::zero();
    for (c, s) in f.terms() {
        acc = acc.add(&ev.length(s)?.mul(&Scalar::from_int(*c as i64)));
    }
    Ok(acc)
}

#[derive(Debug, Serialize)]
struct PointDump {
    x: String,
    y: String,
    xf: f64,
    yf: f64,
    exactness: Exactness,
}

#[derive(Debug, Serialize)]
struct SceneDump<'a> {
    origin: &'a str,
    baseline: &'a str,
    plan: &'a [PlanStep],
    assignment: IndexMap<String, String>,
    points: IndexMap<String, PointDump>,
}

impl Scene {
    /// Plan plus coordinates at one assignment, as pretty JSON.
    pub fn to_json(&self, a: &ParamAssignment) -> Result<String, SceneError> {
        let ev = self.evaluate(a)?;
        let dump = SceneDump {
            origin: &self.origin,
            baseline: &self.baseline,
            plan: &self.plan,
            assignment: a.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            points: ev
                .points()
                .map(|(n, c)| {
                    let (xf, yf) = c.to_f64();
                    (n.to_string(), PointDump { x: c.x.to_string(), y: c.y.to_string(), xf, yf, exactness: c.exactness() })
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&dump).expect("scene dump serializes"))
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load;

    const FRAME_ONLY: &str = "param x\npoint O = origin\npoint A = baseline(O, x)\nclaim len(O,A) = x\n";

    #[test]
    fn frame_only_plan() {
        let scene = build_scene(&load(FRAME_ONLY).unwrap()).unwrap();
        assert_eq!(scene.plan().len(), 2);
        let a = ParamAssignment::from_pairs([("x", rational(7, 2))]);
        let ev = scene.evaluate(&a).unwrap();
        assert!(ev.point("O").unwrap().x.is_zero());
        assert_eq!(ev.point("A").unwrap().x.to_string(), "7/2");
        assert!(ev.point("A").unwrap().y.is_zero());
    }

    #[test]
    fn offset_sides() {
        let src = "param x\nparam z\npoint O = origin\npoint A = baseline(O, x)\nline l = through(O, A)\n\
                   point B = offset_perp(A, l, z)\npoint C = offset_perp(A, l, -z)\nclaim len(A,B) = len(A,C)\n";
        let scene = build_scene(&load(src).unwrap()).unwrap();
        let a = ParamAssignment::from_pairs([("x", rational(3, 1)), ("z", rational(2, 1))]);
        let ev = scene.evaluate(&a).unwrap();
        assert_eq!(ev.point("B").unwrap().y.to_string(), "2");
        assert_eq!(ev.point("C").unwrap().y.to_string(), "-2");
    }

    #[test]
    fn len_of_same_point_is_zero() {
        let scene = build_scene(&load(FRAME_ONLY).unwrap()).unwrap();
        let a = ParamAssignment::from_pairs([("x", rational(2, 1))]);
        let ev = scene.evaluate(&a).unwrap();
        assert!(ev.point("A").unwrap().dist(ev.point("A").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn on_segment_interiority() {
        let src = "param x\nparam y\npoint O = origin\npoint A = baseline(O, x)\npoint E = on_segment(O, A, y)\nclaim len(O,E) = y\n";
        let scene = build_scene(&load(src).unwrap()).unwrap();
        let bad = ParamAssignment::from_pairs([("x", rational(2, 1)), ("y", rational(3, 1))]);
        assert!(matches!(scene.evaluate(&bad), Err(SceneError::OutsideSegment(_))));
        let good = ParamAssignment::from_pairs([("x", rational(3, 1)), ("y", rational(2, 1))]);
        assert_eq!(scene.evaluate(&good).unwrap().point("E").unwrap().x.to_string(), "2");
    }
}
