use super::{Formula, Hyperedge, Rule};
use crate::dim::Dim;
use crate::dsl::{render_expr, ConstructionKind, Expr, HypothesisModel, PointCons};
use crate::scene::Scene;

/// The length each point construction fixes, with its distance expression.
fn defined_lengths(model: &HypothesisModel) -> Vec<(Dim, &Expr, bool, &str)> {
    let mut out = Vec::new();
    for c in &model.constructions {
        let ConstructionKind::Point(p) = &c.kind else { continue };
        let (from, expr, abs) = match p {
            PointCons::Baseline(a, d) | PointCons::OnSegment(a, _, d) => (&a.name, d, false),
            PointCons::OffsetPerp(a, _, d) => (&a.name, d, true),
            PointCons::MeetCircle(_, center, r, _) => (&center.name, r, false),
            _ => continue,
        };
        if *from != c.name {
            out.push((Dim::len(from, &c.name), expr, abs, c.name.as_str()));
        }
    }
    out
}

/// Each parameter's node: the length it is first used as verbatim.
pub fn param_nodes(model: &HypothesisModel) -> Vec<(String, Dim)> {
    let lengths = defined_lengths(model);
    model
        .params
        .iter()
        .filter_map(|p| {
            lengths
                .iter()
                .find(|(_, e, _, _)| e.as_param().is_some_and(|i| &i.name == p))
                .map(|(d, ..)| (p.clone(), d.clone()))
        })
        .collect()
}

/// Lengths fixed by a construction's distance expression.
pub fn construction(model: &HypothesisModel, _scene: &Scene) -> Vec<Hyperedge> {
    let params = param_nodes(model);
    let mut out = Vec::new();
    for (target, expr, abs, point) in defined_lengths(model) {
        if expr.as_param().is_some() && params.iter().any(|(_, d)| *d == target) {
            continue;
        }
        let mut usable = true;
        expr.visit_refs(&mut |r| {
            if let crate::dsl::ExprRef::Param(p) = r {
                usable &= params.iter().any(|(n, _)| *n == p.name);
            }
        });
        if !usable {
            continue;
        }
        let formula = Formula::Expr { expr: expr.clone(), params: params.clone(), abs };
        if formula.sources().is_empty() {
            continue;
        }
        let why = format!("{point} is constructed with {target} = {}", render_expr(expr));
        out.push(Hyperedge::new(target, Rule::Construction, why, formula));
    }
    out
}
