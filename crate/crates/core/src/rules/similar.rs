use std::collections::BTreeSet;

use super::{CapExceeded, Figure, Formula, Hyperedge, Rule};
use crate::dim::{Dim, Seg};

const ANGLE_TOL: f64 = 1e-9;
const AREA_TOL: f64 = 1e-12;

struct Triangle {
    v: [usize; 3],
    angles: [f64; 3],
    sorted: [f64; 3],
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Side-ratio edges for every pair of triangles with matching angles.
/// Returns the edges and a report if the pair budget ran out.
pub fn similar_triangles(fig: &Figure, max_pairs: usize) -> (Vec<Hyperedge>, Option<CapExceeded>) {
    let n = fig.len();
    let area_floor = AREA_TOL * fig.scale() * fig.scale();
    let mut tris = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if fig.area(i, j, k) <= area_floor {
                    continue;
                }
                let angles = [fig.angle(i, j, k), fig.angle(j, i, k), fig.angle(k, i, j)];
                let mut sorted = angles;
                sorted.sort_by(f64::total_cmp);
                tris.push(Triangle { v: [i, j, k], angles, sorted });
            }
        }
    }
    tris.sort_by(|a, b| {
        a.sorted[0]
            .total_cmp(&b.sorted[0])
            .then(a.sorted[1].total_cmp(&b.sorted[1]))
            .then(a.v.cmp(&b.v))
    });

    let mut out = Vec::new();
    let mut pairs = 0usize;
    for (x, t1) in tris.iter().enumerate() {
        for t2 in &tris[x + 1..] {
            if t2.sorted[0] - t1.sorted[0] > ANGLE_TOL {
                break;
            }
            if pairs == max_pairs {
                return (out, Some(CapExceeded::TrianglePairs { limit: max_pairs }));
            }
            pairs += 1;
            if (0..3).any(|i| (t1.sorted[i] - t2.sorted[i]).abs() > ANGLE_TOL) {
                continue;
            }
            for perm in PERMS {
                if (0..3).all(|i| (t1.angles[i] - t2.angles[perm[i]]).abs() <= ANGLE_TOL) {
                    emit(fig, t1, t2, perm, &mut out);
                }
            }
        }
    }
    (out, None)
}

fn emit(fig: &Figure, t1: &Triangle, t2: &Triangle, perm: [usize; 3], out: &mut Vec<Hyperedge>) {
    let opp = |t: &Triangle, i: usize| fig.seg(t.v[(i + 1) % 3], t.v[(i + 2) % 3]);
    let s: Vec<Seg> = (0..3).map(|i| opp(t1, i)).collect();
    let t: Vec<Seg> = (0..3).map(|i| opp(t2, perm[i])).collect();
    let names1: String = t1.v.iter().map(|&i| fig.name(i)).collect();
    let names2: String = perm.iter().map(|&p| fig.name(t2.v[p])).collect();
    let why = format!("triangles {names1} and {names2} are similar");
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let r1 = Dim::seg_ratio(&s[i], &s[j]);
            let r2 = Dim::seg_ratio(&t[i], &t[j]);
            for (num, den, r) in [(&s[i], &s[j], &r1), (&t[i], &t[j], &r2)] {
                let (n, d) = (Dim::Length(num.clone()), Dim::Length(den.clone()));
                out.push(Hyperedge::new(
                    r.clone(),
                    Rule::SimilarTriangles,
                    format!("{why}: ratio {r}"),
                    Formula::Ratio { num: n.clone(), den: d.clone() },
                ));
                out.push(Hyperedge::new(
                    n.clone(),
                    Rule::SimilarTriangles,
                    format!("{why}: {n} = {r} * {d}"),
                    Formula::Product(r.clone(), d.clone()),
                ));
                out.push(Hyperedge::new(
                    d.clone(),
                    Rule::SimilarTriangles,
                    format!("{why}: {d} = {n} / ({r})"),
                    Formula::Ratio { num: n, den: r.clone() },
                ));
            }
            if r1 != r2 {
                out.push(Hyperedge::new(
                    r2.clone(),
                    Rule::SimilarTriangles,
                    format!("{why}: {r2} = {r1}"),
                    Formula::Linear(vec![(1, r1.clone())]),
                ));
                out.push(Hyperedge::new(
                    r1.clone(),
                    Rule::SimilarTriangles,
                    format!("{why}: {r1} = {r2}"),
                    Formula::Linear(vec![(1, r2)]),
                ));
            }
        }
    }
}

/// Length ratios produced by similarity edges.
pub fn ratio_targets(edges: &[Hyperedge]) -> BTreeSet<(Seg, Seg)> {
    edges.iter().filter_map(|e| e.target.seg_pair().map(|(a, b)| (a.clone(), b.clone()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn right_triangles() -> Figure {
        // OBE ~ ACG in the parallelogram at x=4, y=1, z=2
        Figure::from_points(
            ["O", "A", "E", "B", "C", "G"].iter().map(|s| s.to_string()).collect(),
            vec![(0.0, 0.0), (4.0, 0.0), (1.0, 0.0), (1.0, 2.0), (5.0, 2.0), (5.0, 0.0)],
        )
    }

    #[test]
    fn transfer_between_similar_triangles() {
        let (edges, cap) = similar_triangles(&right_triangles(), 10_000);
        assert!(cap.is_none());
        let want = Dim::parse("CG/AG").unwrap();
        let from = Dim::parse("BE/OE").unwrap();
        assert!(edges.iter().any(|e| e.target == want && e.sources == vec![from.clone()]));
    }

    #[test]
    fn pair_cap_truncates() {
        let fig = right_triangles();
        let (full, _) = similar_triangles(&fig, 10_000);
        let (cut, cap) = similar_triangles(&fig, 1);
        assert_eq!(cap, Some(CapExceeded::TrianglePairs { limit: 1 }));
        assert!(cut.len() <= full.len());
        assert!(cut.iter().all(|e| full.contains(e)));
    }
}
