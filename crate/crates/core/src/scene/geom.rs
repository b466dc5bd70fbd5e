//! Cartesian primitives over [`Scalar`] coordinates.

use serde::Serialize;

use super::SceneError;
use crate::num::{NumError, Scalar};

const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Rational,
    Float,
}

#[derive(Debug, Clone)]
pub struct Coord {
    pub x: Scalar,
    pub y: Scalar,
}

impl Coord {
    pub fn new(x: Scalar, y: Scalar) -> Coord {
        Coord { x, y }
    }

    pub fn origin() -> Coord {
        Coord::new(Scalar::zero(), Scalar::zero())
    }

    pub fn from_f64(x: f64, y: f64) -> Coord {
        Coord::new(Scalar::from_f64(x), Scalar::from_f64(y))
    }

    pub fn exactness(&self) -> Exactness {
        if self.x.is_exact() && self.y.is_exact() {
            Exactness::Rational
        } else {
            Exactness::Float
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn add(&self, o: &Coord) -> Coord {
        Coord::new(self.x.add(&o.x), self.y.add(&o.y))
    }

    pub fn sub(&self, o: &Coord) -> Coord {
        Coord::new(self.x.sub(&o.x), self.y.sub(&o.y))
    }

    pub fn scale(&self, k: &Scalar) -> Coord {
        Coord::new(self.x.mul(k), self.y.mul(k))
    }

    pub fn dot(&self, o: &Coord) -> Scalar {
        self.x.mul(&o.x).add(&self.y.mul(&o.y))
    }

    pub fn cross(&self, o: &Coord) -> Scalar {
        self.x.mul(&o.y).sub(&self.y.mul(&o.x))
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    /// Counter-clockwise quarter turn.
    pub fn rot90(&self) -> Coord {
        Coord::new(self.y.neg(), self.x.clone())
    }

    pub fn dist(&self, o: &Coord) -> Result<Scalar, NumError> {
        self.sub(o).norm2().sqrt_clamped(FLOAT_TOL)
    }
}

/// `point + t * dir`.
#[derive(Debug, Clone)]
pub struct Line {
    pub point: Coord,
    pub dir: Coord,
}

impl Line {
    pub fn through(p: &Coord, q: &Coord) -> Result<Line, SceneError> {
        let dir = q.sub(p);
        if is_negligible(&dir.norm2(), &p.norm2().add(&q.norm2())) {
            return Err(SceneError::DegenerateLine);
        }
        Ok(Line { point: p.clone(), dir })
    }

    pub fn at(&self, t: &Scalar) -> Coord {
        self.point.add(&self.dir.scale(t))
    }
}

/// Zero for exact values; below `FLOAT_TOL` relative to `scale` for floats.
fn is_negligible(v: &Scalar, scale: &Scalar) -> bool {
    if v.is_exact() {
        v.is_zero()
    } else {
        v.to_f64().abs() <= FLOAT_TOL * scale.to_f64().abs().max(f64::MIN_POSITIVE)
    }
}

pub fn intersect_lines(l1: &Line, l2: &Line) -> Result<Coord, SceneError> {
    let den = l1.dir.cross(&l2.dir);
    let scale = Scalar::from_f64((l1.dir.norm2().to_f64() * l2.dir.norm2().to_f64()).sqrt());
    if is_negligible(&den, &scale) {
        return Err(SceneError::ParallelLines);
    }
    let t = l2.point.sub(&l1.point).cross(&l2.dir).div(&den)?;
    Ok(l1.at(&t))
}

pub fn foot_of_perpendicular(p: &Coord, l: &Line) -> Result<Coord, SceneError> {
    let dd = l.dir.norm2();
    if dd.is_zero() {
        return Err(SceneError::DegenerateLine);
    }
    let t = p.sub(&l.point).dot(&l.dir).div(&dd)?;
    Ok(l.at(&t))
}

#[derive(Debug, Clone)]
pub enum RootPick {
    First,
    Second,
    WithinSegment(Coord, Coord),
    Nearest(Coord),
}

/// Intersection of `l` with the circle of the given center and radius,
/// choosing one root by `pick`. Roots are ordered by the line parameter.
pub fn line_circle_meet(l: &Line, center: &Coord, radius: &Scalar, pick: &RootPick) -> Result<Coord, SceneError> {
    let roots = line_circle_roots(l, center, radius)?;
    let points: Vec<Coord> = roots.iter().map(|t| l.at(t)).collect();
    let chosen = match pick {
        RootPick::First => Some(0),
        RootPick::Second => Some(points.len() - 1),
        RootPick::WithinSegment(p, q) => {
            let pq = q.sub(p);
            let len2 = pq.norm2();
            let inside: Vec<usize> = points
                .iter()
                .enumerate()
                .filter(|(_, r)| {
                    let s = r.sub(p).dot(&pq).div(&len2).map(|s| s.to_f64()).unwrap_or(f64::NAN);
                    s > FLOAT_TOL && s < 1.0 - FLOAT_TOL
                })
                .map(|(i, _)| i)
                .collect();
            if inside.len() == 1 {
                Some(inside[0])
            } else {
                None
            }
        }
        RootPick::Nearest(p) => {
            if points.len() == 1 {
                Some(0)
            } else {
                let d0 = points[0].sub(p).norm2();
                let d1 = points[1].sub(p).norm2();
                let diff = d0.sub(&d1);
                if is_negligible(&diff, &d0.add(&d1)) {
                    None
                } else if diff.signum() < 0 {
                    Some(0)
                } else {
                    Some(1)
                }
            }
        }
    };
    match chosen {
        Some(i) => Ok(points[i].clone()),
        None => Err(SceneError::AmbiguousPick),
    }
}

/// Distinct line parameters where `l` meets the circle, ascending.
pub fn line_circle_roots(l: &Line, center: &Coord, radius: &Scalar) -> Result<Vec<Scalar>, SceneError> {
    let a = l.dir.norm2();
    if a.is_zero() {
        return Err(SceneError::DegenerateLine);
    }
    let w = l.point.sub(center);
    let b = w.dot(&l.dir).mul(&Scalar::from_int(2));
    let c = w.norm2().sub(&radius.square());
    let disc = b.square().sub(&a.mul(&c).mul(&Scalar::from_int(4)));
    let scale = b.square().abs().add(&a.mul(&c).abs().mul(&Scalar::from_int(4)));
    let two_a = a.mul(&Scalar::from_int(2));
    if is_negligible(&disc, &scale) {
        return Ok(vec![b.neg().div(&two_a)?]);
    }
    if disc.signum() < 0 {
        return Err(SceneError::NoIntersection);
    }
    let root = disc.sqrt()?;
    let t1 = b.neg().sub(&root).div(&two_a)?;
    let t2 = b.neg().add(&root).div(&two_a)?;
    Ok(vec![t1, t2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> Coord {
        Coord::new(q(x.0, x.1), q(y.0, y.1))
    }

    fn line(p: Coord, r: Coord) -> Line {
        Line::through(&p, &r).unwrap()
    }

    #[test]
    fn diagonals_of_fixture_meet_at_d() {
        // x=4, y=1, z=2: A=(4,0), B=(1,2), C=(5,2)
        let ab = line(pt((4, 1), (0, 1)), pt((1, 1), (2, 1)));
        let oc = line(Coord::origin(), pt((5, 1), (2, 1)));
        let d = intersect_lines(&ab, &oc).unwrap();
        assert_eq!(d.x.as_rational(), Some(&BigRational::new(5.into(), 2.into())));
        assert_eq!(d.y.as_rational(), Some(&BigRational::from_integer(1.into())));
        // exact residual on both lines
        assert!(d.sub(&ab.point).cross(&ab.dir).is_zero());
        assert!(d.sub(&oc.point).cross(&oc.dir).is_zero());
    }

    #[test]
    fn parallel_translate_is_rejected() {
        let l1 = line(Coord::origin(), pt((4, 1), (0, 1)));
        let l2 = line(pt((0, 1), (1, 1)), pt((4, 1), (1, 1)));
        assert!(matches!(intersect_lines(&l1, &l2), Err(SceneError::ParallelLines)));
    }

    #[test]
    fn axes_meet_at_origin() {
        let x = line(Coord::origin(), pt((1, 1), (0, 1)));
        let y = line(Coord::origin(), pt((0, 1), (1, 1)));
        let o = intersect_lines(&x, &y).unwrap();
        assert!(o.x.is_zero() && o.y.is_zero());
    }

    #[test]
    fn float_mode_residual() {
        let l1 = Line { point: Coord::from_f64(0.1, 0.2), dir: Coord::from_f64(1.0, 3f64.sqrt()) };
        let l2 = Line { point: Coord::from_f64(5.0, -1.0), dir: Coord::from_f64(-2f64.sqrt(), 1.0) };
        let p = intersect_lines(&l1, &l2).unwrap();
        for l in [&l1, &l2] {
            let r = p.sub(&l.point).cross(&l.dir).to_f64().abs();
            assert!(r <= 1e-12 * (1.0 + p.norm2().to_f64()), "{r}");
        }
    }

    #[test]
    fn circle_meet_imo_k() {
        // a=1, h=1, q=1/2: A=(0,0), X=(1,1/2), B=(2,0), radius sqrt 2
        let ax = line(Coord::origin(), pt((1, 1), (1, 2)));
        let b = pt((2, 1), (0, 1));
        let r = q(2, 1).sqrt().unwrap();
        let k = line_circle_meet(&ax, &b, &r, &RootPick::WithinSegment(Coord::origin(), pt((1, 1), (1, 2)))).unwrap();
        // oracle: 1.25 t^2 - 4 t + 2 = 0, root in [0, 1]
        let t = (4.0 - 6f64.sqrt()) / 2.5;
        let (kx, ky) = k.to_f64();
        assert!((kx - t).abs() < 1e-12 && (ky - t / 2.0).abs() < 1e-12);
        assert!((kx - 0.6202).abs() < 1e-4 && (ky - 0.3101).abs() < 1e-4);
        assert!((k.dist(&b).unwrap().to_f64() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn circle_meet_picks() {
        let l = line(Coord::origin(), pt((1, 1), (0, 1)));
        let c = pt((5, 1), (0, 1));
        let r = q(2, 1);
        let first = line_circle_meet(&l, &c, &r, &RootPick::First).unwrap();
        let second = line_circle_meet(&l, &c, &r, &RootPick::Second).unwrap();
        assert_eq!(first.x.as_rational().unwrap().to_string(), "3");
        assert_eq!(second.x.as_rational().unwrap().to_string(), "7");
        let near = line_circle_meet(&l, &c, &r, &RootPick::Nearest(pt((8, 1), (0, 1)))).unwrap();
        assert_eq!(near.x.as_rational().unwrap().to_string(), "7");
        // segment excluding both roots
        let seg = RootPick::WithinSegment(pt((4, 1), (0, 1)), pt((6, 1), (0, 1)));
        assert!(matches!(line_circle_meet(&l, &c, &r, &seg), Err(SceneError::AmbiguousPick)));
        // segment containing both roots
        let seg = RootPick::WithinSegment(Coord::origin(), pt((10, 1), (0, 1)));
        assert!(matches!(line_circle_meet(&l, &c, &r, &seg), Err(SceneError::AmbiguousPick)));
    }

    #[test]
    fn zero_radius() {
        let l = line(Coord::origin(), pt((1, 1), (0, 1)));
        let on = line_circle_meet(&l, &pt((3, 1), (0, 1)), &Scalar::zero(), &RootPick::First).unwrap();
        assert_eq!(on.x.as_rational().unwrap().to_string(), "3");
        let off = line_circle_meet(&l, &pt((3, 1), (1, 1)), &Scalar::zero(), &RootPick::First);
        assert!(matches!(off, Err(SceneError::NoIntersection)));
    }

    #[test]
    fn feet() {
        let x_axis = line(Coord::origin(), pt((4, 1), (0, 1)));
        let g = foot_of_perpendicular(&pt((5, 1), (2, 1)), &x_axis).unwrap();
        assert_eq!((g.x.to_string(), g.y.to_string()), ("5".into(), "0".into()));
        let f = foot_of_perpendicular(&pt((5, 2), (1, 1)), &x_axis).unwrap();
        assert_eq!((f.x.to_string(), f.y.to_string()), ("5/2".into(), "0".into()));
        let on = pt((3, 1), (0, 1));
        let same = foot_of_perpendicular(&on, &x_axis).unwrap();
        assert_eq!(same.x.to_string(), "3");
        let slanted = line(Coord::origin(), pt((1, 1), (2, 1)));
        let p = pt((3, 1), (-1, 1));
        let h = foot_of_perpendicular(&p, &slanted).unwrap();
        assert!(p.sub(&h).dot(&slanted.dir).is_zero());
        let degenerate = Line { point: Coord::origin(), dir: Coord::origin() };
        assert!(matches!(foot_of_perpendicular(&p, &degenerate), Err(SceneError::DegenerateLine)));
    }
}
