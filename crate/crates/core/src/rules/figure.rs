use crate::dim::{Dim, Seg};
use crate::scene::{Evaluation, Scene};

const TOL: f64 = 1e-9;

/// Float coordinates of every declared point at one witness, plus the
/// maximal collinear groups among them.
#[derive(Debug, Clone)]
pub struct Figure {
    names: Vec<String>,
    pos: Vec<(f64, f64)>,
    lines: Vec<Vec<usize>>,
}

impl Figure {
    pub fn new(scene: &Scene, ev: &Evaluation) -> Figure {
        let mut names = Vec::new();
        let mut pos = Vec::new();
        for name in scene.point_names() {
            if let Ok(c) = ev.point(name) {
                names.push(name.to_string());
                pos.push(c.to_f64());
            }
        }
        Figure::from_points(names, pos)
    }

    pub fn from_points(names: Vec<String>, pos: Vec<(f64, f64)>) -> Figure {
        let mut fig = Figure { names, pos, lines: Vec::new() };
        let n = fig.len();
        let mut covered = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if covered[i][j] {
                    continue;
                }
                let group: Vec<usize> = (0..n).filter(|&k| k == i || k == j || fig.collinear(i, j, k)).collect();
                for &a in &group {
                    for &b in &group {
                        covered[a][b] = true;
                    }
                }
                fig.lines.push(group);
            }
        }
        fig
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn seg(&self, i: usize, j: usize) -> Seg {
        Seg::new(&self.names[i], &self.names[j])
    }

    pub fn len_dim(&self, i: usize, j: usize) -> Dim {
        Dim::Length(self.seg(i, j))
    }

    /// Lines with at least two points, each sorted by point index.
    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn vec(&self, i: usize, j: usize) -> (f64, f64) {
        (self.pos[j].0 - self.pos[i].0, self.pos[j].1 - self.pos[i].1)
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        let (x, y) = self.vec(i, j);
        x.hypot(y)
    }

    pub fn collinear(&self, i: usize, j: usize, k: usize) -> bool {
        let (a, b) = (self.vec(i, j), self.vec(i, k));
        let scale = a.0.hypot(a.1) * b.0.hypot(b.1);
        (a.0 * b.1 - a.1 * b.0).abs() <= TOL * scale
    }

    /// `j` strictly inside segment `ik`; assumes collinearity.
    pub fn between(&self, i: usize, j: usize, k: usize) -> bool {
        let (a, b) = (self.vec(j, i), self.vec(j, k));
        a.0 * b.0 + a.1 * b.1 < 0.0
    }

    /// Segments `ab` and `cd` are perpendicular.
    pub fn perpendicular(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let (u, v) = (self.vec(a, b), self.vec(c, d));
        let scale = u.0.hypot(u.1) * v.0.hypot(v.1);
        (u.0 * v.0 + u.1 * v.1).abs() <= TOL * scale
    }

    /// Segments `ab` and `cd` are parallel.
    pub fn parallel(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let (u, v) = (self.vec(a, b), self.vec(c, d));
        let scale = u.0.hypot(u.1) * v.0.hypot(v.1);
        (u.0 * v.1 - u.1 * v.0).abs() <= TOL * scale
    }

    /// Interior angle at `v` in triangle `(v, p, q)`.
    pub fn angle(&self, v: usize, p: usize, q: usize) -> f64 {
        let (a, b) = (self.vec(v, p), self.vec(v, q));
        (a.0 * b.1 - a.1 * b.0).abs().atan2(a.0 * b.0 + a.1 * b.1)
    }

    pub fn area(&self, a: usize, b: usize, c: usize) -> f64 {
        let (u, v) = (self.vec(a, b), self.vec(a, c));
        (u.0 * v.1 - u.1 * v.0).abs() / 2.0
    }

    /// Largest absolute coordinate, at least one.
    pub fn scale(&self) -> f64 {
        self.pos.iter().fold(1.0f64, |m, (x, y)| m.max(x.abs()).max(y.abs()))
    }

    /// Signed position of `p` along `line` measured from `origin`, using the
    /// direction from the line's first point to its second.
    pub fn along(&self, line: &[usize], origin: usize, p: usize) -> f64 {
        let d = self.vec(line[0], line[1]);
        let n = d.0.hypot(d.1);
        let v = self.vec(origin, p);
        (v.0 * d.0 + v.1 * d.1) / n
    }

    /// Signed distance of `p` from `line`.
    pub fn side(&self, line: &[usize], p: usize) -> f64 {
        let d = self.vec(line[0], line[1]);
        let n = d.0.hypot(d.1);
        let v = self.vec(line[0], p);
        (d.0 * v.1 - d.1 * v.0) / n
    }

    pub fn on_line(&self, line: &[usize], p: usize) -> bool {
        line.contains(&p)
    }

    /// The declared point of `line` that is the foot of `p`, or `p` itself if
    /// it lies on the line.
    pub fn foot_on(&self, line: &[usize], p: usize) -> Option<usize> {
        if self.on_line(line, p) {
            return Some(p);
        }
        line.iter().copied().find(|&f| self.perpendicular(f, p, line[0], line[1]))
    }

    /// Value of a linear combination of segment lengths at this witness.
    pub fn eval_terms(&self, terms: &[(i32, usize, usize)]) -> f64 {
        terms.iter().map(|&(c, a, b)| c as f64 * self.dist(a, b)).sum()
    }

    pub fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL * a.abs().max(b.abs()).max(1e-300)
    }
}
