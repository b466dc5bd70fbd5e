use super::{Figure, Formula, Hyperedge, Rule, Term};

/// Right angles between declared segments sharing a vertex.
pub fn pythagoras(fig: &Figure) -> Vec<Hyperedge> {
    let n = fig.len();
    let mut out = Vec::new();
    for v in 0..n {
        for p in 0..n {
            for q in p + 1..n {
                if v == p || v == q || !fig.perpendicular(v, p, v, q) {
                    continue;
                }
                let (a, b, c) = (fig.len_dim(v, p), fig.len_dim(v, q), fig.len_dim(p, q));
                let why = format!(
                    "right angle at {} in triangle {}{}{}",
                    fig.name(v),
                    fig.name(p),
                    fig.name(v),
                    fig.name(q)
                );
                out.push(Hyperedge::new(c.clone(), Rule::Pythagoras, format!("{why}: {c}^2 = {a}^2 + {b}^2"), Formula::Hypot(a.clone(), b.clone())));
                out.push(Hyperedge::new(b.clone(), Rule::Pythagoras, format!("{why}: {b}^2 = {c}^2 - {a}^2"), Formula::Leg { hyp: c.clone(), leg: a.clone() }));
                out.push(Hyperedge::new(a.clone(), Rule::Pythagoras, format!("{why}: {a}^2 = {c}^2 - {b}^2"), Formula::Leg { hyp: c, leg: b }));
            }
        }
    }
    out
}

/// Distances between points whose feet on a common line are declared:
/// `PQ^2 = (ZF_Q - ZF_P)^2 + (QF_Q - PF_P)^2` for any reference `Z` on the line,
/// with signs read from the witness.
pub fn distance_formula(fig: &Figure) -> Vec<Hyperedge> {
    let n = fig.len();
    let mut out = Vec::new();
    for line in fig.lines() {
        let feet: Vec<(usize, usize)> = (0..n).filter_map(|p| fig.foot_on(line, p).map(|f| (p, f))).collect();
        for (x, &(p, fp)) in feet.iter().enumerate() {
            for &(q, fq) in &feet[x + 1..] {
                if fp == fq || (p == fp && q == fq) {
                    continue;
                }
                for &z in line.iter() {
                    let mut dx: Vec<Term> = Vec::new();
                    for (sign, f) in [(1, fq), (-1, fp)] {
                        if f != z {
                            let s = if fig.along(line, z, f) > 0.0 { 1 } else { -1 };
                            dx.push((sign * s, fig.len_dim(z, f)));
                        }
                    }
                    let mut dy: Vec<Term> = Vec::new();
                    for (sign, pt, f) in [(1, q, fq), (-1, p, fp)] {
                        if pt != f {
                            let s = if fig.side(line, pt) > 0.0 { 1 } else { -1 };
                            dy.push((sign * s, fig.len_dim(pt, f)));
                        }
                    }
                    let target = fig.len_dim(p, q);
                    let why = format!(
                        "distance formula from {} along {}: {target}^2 = {}^2 + {}^2",
                        fig.name(z),
                        line.iter().map(|&i| fig.name(i)).collect::<String>(),
                        show(&dx),
                        show(&dy)
                    );
                    out.push(Hyperedge::new(target, Rule::DistanceFormula, why, Formula::Distance { dx, dy }));
                }
            }
        }
    }
    out
}

fn show(terms: &[Term]) -> String {
    let body = crate::dim::LinearForm::new(terms.iter().filter_map(|(c, d)| d.as_length().map(|s| (*c, s.clone()))));
    if terms.len() == 1 {
        body.to_string()
    } else {
        format!("({body})")
    }
}
