use super::{Figure, Formula, Hyperedge, Rule};

/// Perpendicular offsets between two parallel lines all have one length.
pub fn parallel_transfer(fig: &Figure) -> Vec<Hyperedge> {
    let lines = fig.lines();
    let mut out = Vec::new();
    for (x, l1) in lines.iter().enumerate() {
        for l2 in &lines[x + 1..] {
            if !fig.parallel(l1[0], l1[1], l2[0], l2[1]) || fig.collinear(l1[0], l1[1], l2[0]) {
                continue;
            }
            let offsets: Vec<(usize, usize)> = l1
                .iter()
                .flat_map(|&p| l2.iter().map(move |&q| (p, q)))
                .filter(|&(p, q)| fig.perpendicular(p, q, l1[0], l1[1]))
                .collect();
            let label = |l: &[usize]| l.iter().map(|&i| fig.name(i)).collect::<Vec<_>>().join("");
            for &(a, b) in &offsets {
                for &(c, d) in &offsets {
                    if (a, b) == (c, d) {
                        continue;
                    }
                    let (from, to) = (fig.len_dim(a, b), fig.len_dim(c, d));
                    let why = format!("{} is parallel to {}: {to} = {from}", label(l2), label(l1));
                    out.push(Hyperedge::new(to, Rule::ParallelTransfer, why, Formula::Linear(vec![(1, from)])));
                }
            }
        }
    }
    out
}
