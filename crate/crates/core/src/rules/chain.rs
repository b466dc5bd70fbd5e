use super::{Figure, Formula, Hyperedge, Rule};

/// For every collinear triple with a strict middle point, each of the three
/// lengths follows from the other two.
pub fn segment_chain(fig: &Figure) -> Vec<Hyperedge> {
    let mut out = Vec::new();
    for line in fig.lines() {
        for (x, &i) in line.iter().enumerate() {
            for (y, &j) in line.iter().enumerate().skip(x + 1) {
                for &k in &line[y + 1..] {
                    let (p, q, r) = if fig.between(i, j, k) {
                        (i, j, k)
                    } else if fig.between(j, i, k) {
                        (j, i, k)
                    } else {
                        (i, k, j)
                    };
                    out.extend(triple(fig, p, q, r));
                }
            }
        }
    }
    out
}

fn triple(fig: &Figure, p: usize, q: usize, r: usize) -> [Hyperedge; 3] {
    let (pq, qr, pr) = (fig.len_dim(p, q), fig.len_dim(q, r), fig.len_dim(p, r));
    let why = format!("{} lies between {} and {}", fig.name(q), fig.name(p), fig.name(r));
    [
        Hyperedge::new(pr.clone(), Rule::SegmentChain, format!("{why}: {pr} = {pq} + {qr}"), Formula::Linear(vec![(1, pq.clone()), (1, qr.clone())])),
        Hyperedge::new(qr.clone(), Rule::SegmentChain, format!("{why}: {qr} = {pr} - {pq}"), Formula::Linear(vec![(1, pr.clone()), (-1, pq.clone())])),
        Hyperedge::new(pq.clone(), Rule::SegmentChain, format!("{why}: {pq} = {pr} - {qr}"), Formula::Linear(vec![(1, pr), (-1, qr)])),
    ]
}
