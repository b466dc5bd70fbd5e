use std::collections::BTreeSet;

use super::{Figure, Formula, Hyperedge, LinearSolve, QuadraticSolve, Rule};
use crate::dim::{Dim, LinearForm, Seg};

const SIGNS: [(i32, i32); 3] = [(1, -1), (-1, 1), (1, 1)];

/// Ratio pairs that pin down two unknown lengths.
pub fn ratio_solve(fig: &Figure, ratios: &BTreeSet<(Seg, Seg)>) -> Vec<Hyperedge> {
    let mut out = Vec::new();
    linear(fig, ratios, &mut out);
    quadratic(fig, ratios, &mut out);
    out
}

struct Lens<'a>(&'a Figure);

impl Lens<'_> {
    fn idx(&self, s: &Seg) -> (usize, usize) {
        let (a, b) = s.ends();
        (self.0.index(a).unwrap(), self.0.index(b).unwrap())
    }

    fn len(&self, s: &Seg) -> f64 {
        let (a, b) = self.idx(s);
        self.0.dist(a, b)
    }

    fn point(&self, name: &str) -> usize {
        self.0.index(name).unwrap()
    }
}

/// `target = sk*known + sv*part` at the witness, if some sign pair fits.
fn decompose(lens: &Lens, target: &Seg, known: &Seg, part: &Seg) -> Option<(i32, i32)> {
    let (t, k, p) = (lens.len(target), lens.len(known), lens.len(part));
    SIGNS.into_iter().find(|&(sk, sv)| Figure::close(t, sk as f64 * k + sv as f64 * p))
}

fn linear(fig: &Figure, ratios: &BTreeSet<(Seg, Seg)>, out: &mut Vec<Hyperedge>) {
    let lens = Lens(fig);
    for (a, b) in ratios {
        for (u, v, first_inverted) in [(a, b, false), (b, a, true)] {
            let first = Dim::seg_ratio(a, b);
            for (c, d) in ratios {
                let (w, second_inverted) = if d == u {
                    (c, false)
                } else if c == u {
                    (d, true)
                } else {
                    continue;
                };
                if w == v || w == u {
                    continue;
                }
                let Some(shared) = w.shared(v) else { continue };
                let (ow, ov) = (w.other(shared), v.other(shared));
                if ow == ov || !fig.collinear(lens.point(shared), lens.point(ow), lens.point(ov)) {
                    continue;
                }
                let known = Seg::new(ow, ov);
                if &known == u {
                    continue;
                }
                let Some((sk, sv)) = decompose(&lens, w, &known, v) else { continue };
                let composite = LinearForm::new([(sk, known.clone()), (sv, v.clone())]).into_dim();
                let second = if second_inverted {
                    Dim::ratio(Dim::Length(u.clone()), composite.clone())
                } else {
                    Dim::ratio(composite.clone(), Dim::Length(u.clone()))
                };
                let given = Dim::seg_ratio(c, d);
                out.push(Hyperedge::new(
                    second.clone(),
                    Rule::RatioSolve,
                    format!("express {w} = {}: {second} = {given}", composite.to_string().trim_matches(['(', ')'])),
                    Formula::Linear(vec![(1, given)]),
                ));

                let (ru, rv, k) = (lens.len(u), lens.len(v), lens.len(&known));
                let alpha = rv / ru;
                let beta = (sk as f64 * k + sv as f64 * rv) / ru;
                let den = beta - sv as f64 * alpha;
                if den.abs() <= 1e-9 * (beta.abs() + alpha.abs()) {
                    continue;
                }
                for (want_v, target) in [(false, u), (true, v)] {
                    let spec = LinearSolve {
                        first: first.clone(),
                        first_inverted,
                        second: second.clone(),
                        second_inverted,
                        known: Dim::Length(known.clone()),
                        sk,
                        sv,
                        want_v,
                    };
                    out.push(Hyperedge::new(
                        Dim::Length(target.clone()),
                        Rule::RatioSolve,
                        format!("solve {first} and {second} with {known} known for {target}"),
                        Formula::SolveLinear(spec),
                    ));
                }
            }
        }
    }
}

fn quadratic(fig: &Figure, ratios: &BTreeSet<(Seg, Seg)>, out: &mut Vec<Hyperedge>) {
    let lens = Lens(fig);
    for (a, b) in ratios {
        let ratio = Dim::seg_ratio(a, b);
        // ratio = v/u, or u/v when inverted
        for (u, v, ratio_inverted) in [(b, a, false), (a, b, true)] {
            let Some(n) = u.shared(v) else { continue };
            let (q, p1) = (lens.point(u.other(n)), lens.point(v.other(n)));
            let ni = lens.point(n);
            if !fig.perpendicular(ni, q, ni, p1) {
                continue;
            }
            for line in fig.lines() {
                if !line.contains(&ni) || !line.contains(&q) {
                    continue;
                }
                for &p2 in line {
                    if p2 == ni || p2 == q {
                        continue;
                    }
                    let leg = fig.seg(ni, p2);
                    let known = fig.seg(q, p2);
                    let hyp = fig.seg(p1, p2);
                    let Some((sk, su)) = decompose(&lens, &leg, &known, u) else { continue };
                    let (k, c, ru) = (lens.len(&known), lens.len(&hyp), lens.len(u));
                    let m = lens.len(v) / ru;
                    let qa = 1.0 + m * m;
                    let qb = 2.0 * (sk * su) as f64 * k;
                    let disc = (qb * qb - 4.0 * qa * (k * k - c * c)).max(0.0).sqrt();
                    let Some(root) = [1, -1].into_iter().find(|&r| Figure::close((-qb + r as f64 * disc) / (2.0 * qa), ru))
                    else {
                        continue;
                    };
                    let tri = format!("{}{}{}", fig.name(p1), n, fig.name(p2));
                    for (want_v, target) in [(false, u), (true, v)] {
                        let spec = QuadraticSolve {
                            ratio: ratio.clone(),
                            ratio_inverted,
                            known: Dim::Length(known.clone()),
                            hyp: Dim::Length(hyp.clone()),
                            sk,
                            su,
                            root,
                            want_v,
                        };
                        out.push(Hyperedge::new(
                            Dim::Length(target.clone()),
                            Rule::RatioSolve,
                            format!("{ratio} with Pythagoras in triangle {tri} ({leg} = {}) for {target}", LinearForm::new([(sk, known.clone()), (su, u.clone())])),
                            Formula::SolveQuadratic(spec),
                        ));
                    }
                }
            }
        }
    }
}
