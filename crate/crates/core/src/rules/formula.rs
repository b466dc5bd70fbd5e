use thiserror::Error;

use crate::dim::Dim;
use crate::dsl::{BinOp, Expr};
use crate::num::{NumError, Scalar};

pub type Term = (i32, Dim);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("source {0} has no value")]
    MissingSource(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Two ratio relations in unknown lengths `u` and `v`, the second written
/// over `k*K + s*v` with `K` known.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolve {
    /// `u/v` unless `first_inverted`, then `v/u`.
    pub first: Dim,
    pub first_inverted: bool,
    /// `(sk*K + sv*v)/u` unless `second_inverted`, then its reciprocal.
    pub second: Dim,
    pub second_inverted: bool,
    pub known: Dim,
    pub sk: i32,
    pub sv: i32,
    pub want_v: bool,
}

/// A ratio `v/u` (or `u/v`) plus a right triangle with legs `v` and
/// `sk*K + su*u` and hypotenuse `hyp`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSolve {
    pub ratio: Dim,
    /// True when `ratio = u/v`.
    pub ratio_inverted: bool,
    pub known: Dim,
    pub hyp: Dim,
    pub sk: i32,
    pub su: i32,
    /// Sign applied to the discriminant root.
    pub root: i32,
    pub want_v: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    /// `sum(c * source)`.
    Linear(Vec<Term>),
    Ratio { num: Dim, den: Dim },
    Product(Dim, Dim),
    /// `sqrt(a^2 + b^2)`.
    Hypot(Dim, Dim),
    /// `sqrt(hyp^2 - leg^2)`.
    Leg { hyp: Dim, leg: Dim },
    /// `sqrt(dx^2 + dy^2)` with signed sums for both offsets.
    Distance { dx: Vec<Term>, dy: Vec<Term> },
    SolveLinear(LinearSolve),
    SolveQuadratic(QuadraticSolve),
    /// A construction's distance expression, reading lengths as sources and
    /// parameters through their nodes. `abs` for signed offsets.
    Expr { expr: Expr, params: Vec<(String, Dim)>, abs: bool },
}

impl Formula {
    /// True for formulas whose branch was picked at the witness and may be
    /// wrong elsewhere in parameter space.
    pub fn is_regional(&self) -> bool {
        matches!(self, Formula::SolveQuadratic(_))
    }

    pub fn sources(&self) -> Vec<Dim> {
        let mut out: Vec<Dim> = match self {
            Formula::Linear(t) => t.iter().map(|(_, d)| d.clone()).collect(),
            Formula::Ratio { num, den } => vec![num.clone(), den.clone()],
            Formula::Product(a, b) | Formula::Hypot(a, b) => vec![a.clone(), b.clone()],
            Formula::Leg { hyp, leg } => vec![hyp.clone(), leg.clone()],
            Formula::Distance { dx, dy } => dx.iter().chain(dy).map(|(_, d)| d.clone()).collect(),
            Formula::SolveLinear(s) => vec![s.first.clone(), s.second.clone(), s.known.clone()],
            Formula::SolveQuadratic(s) => vec![s.ratio.clone(), s.known.clone(), s.hyp.clone()],
            Formula::Expr { expr, params, .. } => {
                let mut v = Vec::new();
                expr.visit_refs(&mut |r| match r {
                    crate::dsl::ExprRef::Len(a, b) => v.push(Dim::len(&a.name, &b.name)),
                    crate::dsl::ExprRef::Param(p) => {
                        if let Some((_, d)) = params.iter().find(|(n, _)| *n == p.name) {
                            v.push(d.clone());
                        }
                    }
                });
                v
            }
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn eval(&self, value: &dyn Fn(&Dim) -> Option<Scalar>) -> Result<Scalar, EvalError> {
        let get = |d: &Dim| value(d).ok_or_else(|| EvalError::MissingSource(d.to_string()));
        let sum = |terms: &[Term]| -> Result<Scalar, EvalError> {
            let mut acc = Scalar::zero();
            for (c, d) in terms {
                acc = acc.add(&get(d)?.mul(&Scalar::from_int(*c as i64)));
            }
            Ok(acc)
        };
        Ok(match self {
            Formula::Linear(t) => sum(t)?,
            Formula::Ratio { num, den } => get(num)?.div(&get(den)?)?,
            Formula::Product(a, b) => get(a)?.mul(&get(b)?),
            Formula::Hypot(a, b) => get(a)?.square().add(&get(b)?.square()).sqrt()?,
            Formula::Leg { hyp, leg } => get(hyp)?.square().sub(&get(leg)?.square()).sqrt()?,
            Formula::Distance { dx, dy } => sum(dx)?.square().add(&sum(dy)?.square()).sqrt()?,
            Formula::SolveLinear(s) => {
                let r1 = get(&s.first)?;
                let r2 = get(&s.second)?;
                let k = get(&s.known)?;
                let one = Scalar::from_int(1);
                // v = alpha*u and sk*K + sv*v = beta*u
                let alpha = if s.first_inverted { r1 } else { one.div(&r1)? };
                let beta = if s.second_inverted { one.div(&r2)? } else { r2 };
                let den = beta.sub(&alpha.mul(&Scalar::from_int(s.sv as i64)));
                let u = k.mul(&Scalar::from_int(s.sk as i64)).div(&den)?;
                if s.want_v {
                    alpha.mul(&u)
                } else {
                    u
                }
            }
            Formula::SolveQuadratic(s) => {
                let r = get(&s.ratio)?;
                let k = get(&s.known)?;
                let c = get(&s.hyp)?;
                let one = Scalar::from_int(1);
                let m = if s.ratio_inverted { one.div(&r)? } else { r };
                // (1+m^2) u^2 + 2 sk su K u + K^2 - c^2 = 0
                let a = one.add(&m.square());
                let b = k.mul(&Scalar::from_int(2 * (s.sk * s.su) as i64));
                let c0 = k.square().sub(&c.square());
                let disc = b.square().sub(&Scalar::from_int(4).mul(&a).mul(&c0));
                let root = disc.sqrt_clamped(1e-12 * b.square().to_f64().abs().max(1e-300))?;
                let num = b.neg().add(&root.mul(&Scalar::from_int(s.root as i64)));
                let u = num.div(&a.mul(&Scalar::from_int(2)))?;
                if s.want_v {
                    m.mul(&u)
                } else {
                    u
                }
            }
            Formula::Expr { expr, params, abs } => {
                let v = eval_expr(expr, params, &get)?;
                if *abs {
                    v.abs()
                } else {
                    v
                }
            }
        })
    }
}

fn eval_expr(
    e: &Expr,
    params: &[(String, Dim)],
    get: &dyn Fn(&Dim) -> Result<Scalar, EvalError>,
) -> Result<Scalar, EvalError> {
    Ok(match e {
        Expr::Num(n) => Scalar::from_rational(n.clone()),
        Expr::Param(p) => {
            let d = params
                .iter()
                .find(|(n, _)| *n == p.name)
                .map(|(_, d)| d)
                .ok_or_else(|| EvalError::MissingSource(p.name.clone()))?;
            get(d)?
        }
        Expr::Len(a, b) => get(&Dim::len(&a.name, &b.name))?,
        Expr::Neg(inner) => eval_expr(inner, params, get)?.neg(),
        Expr::Bin(op, l, r) => {
            let l = eval_expr(l, params, get)?;
            let r = eval_expr(r, params, get)?;
            match op {
                BinOp::Add => l.add(&r),
                BinOp::Sub => l.sub(&r),
                BinOp::Mul => l.mul(&r),
                BinOp::Div => l.div(&r)?,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn values(pairs: &[(&str, f64)]) -> BTreeMap<Dim, Scalar> {
        pairs.iter().map(|(n, v)| (Dim::parse(n).unwrap(), Scalar::from_f64(*v))).collect()
    }

    fn d(s: &str) -> Dim {
        Dim::parse(s).unwrap()
    }

    #[test]
    fn linear_solve_recovers_both_unknowns() {
        // x=4, y=1, z=2: DF=1, OF=5/2, AF=3/2
        let v = values(&[("DF/OF", 0.4), ("(OA-OF)/DF", 1.5), ("OA", 4.0)]);
        let mut f = LinearSolve {
            first: d("DF/OF"),
            first_inverted: false,
            second: d("(OA-OF)/DF"),
            second_inverted: false,
            known: d("OA"),
            sk: 1,
            sv: -1,
            want_v: false,
        };
        let get = |x: &Dim| v.get(x).cloned();
        let u = Formula::SolveLinear(f.clone()).eval(&get).unwrap().to_f64();
        assert!((u - 1.0).abs() < 1e-12);
        f.want_v = true;
        let w = Formula::SolveLinear(f).eval(&get).unwrap().to_f64();
        assert!((w - 2.5).abs() < 1e-12);
    }

    #[test]
    fn quadratic_solve_picks_signed_root() {
        // legs v = 2u and K - u, hypotenuse sqrt(41), K = 7 -> u = 2 or u = 4/5
        let v = values(&[("KN/AN", 2.0), ("AB", 7.0), ("BK", 41f64.sqrt())]);
        let get = |x: &Dim| v.get(x).cloned();
        let mut q = QuadraticSolve {
            ratio: d("KN/AN"),
            ratio_inverted: false,
            known: d("AB"),
            hyp: d("BK"),
            sk: 1,
            su: -1,
            root: 1,
            want_v: false,
        };
        let hi = Formula::SolveQuadratic(q.clone()).eval(&get).unwrap().to_f64();
        q.root = -1;
        let lo = Formula::SolveQuadratic(q).eval(&get).unwrap().to_f64();
        assert!((hi - 2.0).abs() < 1e-12, "{hi}");
        assert!((lo - 0.8).abs() < 1e-12, "{lo}");
    }

    #[test]
    fn exact_hypot() {
        let v: BTreeMap<Dim, Scalar> =
            [(d("OF"), Scalar::from_rational(crate::scene::rational(5, 2))), (d("DF"), Scalar::from_int(1))]
                .into_iter()
                .collect();
        let r = Formula::Hypot(d("OF"), d("DF")).eval(&|x| v.get(x).cloned()).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.square().as_rational().unwrap(), &crate::scene::rational(29, 4));
    }

    #[test]
    fn missing_source() {
        let err = Formula::Product(d("AB"), d("CD")).eval(&|_| None).unwrap_err();
        assert!(matches!(err, EvalError::MissingSource(_)));
    }
}
