use std::fmt;

use indexmap::IndexMap;
use num::rational::BigRational;
use num::{BigInt, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Evaluation, Scene, SceneError};

pub const RETRY_CAP: usize = 100;
const GRID_DENOMINATOR: i64 = 64;

/// Parameter values in model order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamAssignment {
    values: IndexMap<String, BigRational>,
}

impl ParamAssignment {
    pub fn new() -> ParamAssignment {
        ParamAssignment::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, BigRational)>) -> ParamAssignment {
        ParamAssignment { values: pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect() }
    }

    pub fn insert(&mut self, name: &str, value: BigRational) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&BigRational> {
        self.values.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BigRational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Every value multiplied by `k`.
    pub fn scaled(&self, k: &BigRational) -> ParamAssignment {
        ParamAssignment { values: self.values.iter().map(|(n, v)| (n.clone(), v * k)).collect() }
    }
}

impl fmt::Display for ParamAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Closed rational interval sampled on a grid of step 1/64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleRange {
    lo: BigRational,
    hi: BigRational,
}

impl SampleRange {
    pub fn new(lo: BigRational, hi: BigRational) -> Option<SampleRange> {
        (lo < hi).then_some(SampleRange { lo, hi })
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    /// Number of grid values per parameter.
    pub fn grid_size(&self) -> u64 {
        let steps = ((&self.hi - &self.lo) * BigRational::from_integer(GRID_DENOMINATOR.into())).floor();
        steps.to_integer().to_u64().unwrap_or(u64::MAX - 1) + 1
    }

    fn value_at(&self, j: u64) -> BigRational {
        &self.lo + BigRational::new(BigInt::from(j), BigInt::from(GRID_DENOMINATOR))
    }
}

impl Default for SampleRange {
    fn default() -> SampleRange {
        SampleRange { lo: BigRational::from_integer(1.into()), hi: BigRational::from_integer(10.into()) }
    }
}

impl fmt::Display for SampleRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A deterministic stream of parameter draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    range: SampleRange,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64, range: SampleRange) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng, range }
    }

    pub fn range(&self) -> &SampleRange {
        &self.range
    }

    pub fn draw_raw(&mut self, params: &[String]) -> ParamAssignment {
        let n = self.range.grid_size();
        let mut a = ParamAssignment::new();
        for p in params {
            let j = self.rng.gen_range(0..n);
            a.insert(p, self.range.value_at(j));
        }
        a
    }

    /// Draws until the scene evaluates without degeneracy, up to [`RETRY_CAP`] times.
    pub fn draw(&mut self, scene: &Scene) -> Result<(ParamAssignment, Evaluation), SceneError> {
        let mut last = None;
        for _ in 0..RETRY_CAP {
            let a = self.draw_raw(&scene.model().params);
            if a.iter().any(|(_, v)| v.is_zero()) {
                last = Some(SceneError::NonPositiveDistance("parameter".into()));
                continue;
            }
            match scene.evaluate_checked(&a) {
                Ok(ev) => return Ok((a, ev)),
                Err(e) => last = Some(e),
            }
        }
        Err(SceneError::DegenerateModel {
            attempts: RETRY_CAP,
            last: Box::new(last.unwrap_or(SceneError::DegenerateLine)),
        })
    }
}

/// The assignment used to detect relations, plus fresh draws that every
/// detected relation must also satisfy.
#[derive(Debug, Clone)]
pub struct Witness {
    pub primary: ParamAssignment,
    pub evaluation: Evaluation,
    /// Floating-point draws every relation must satisfy.
    pub confirmations: Vec<Evaluation>,
    /// More of them, for relations that may hold only in part of parameter
    /// space.
    pub probes: Vec<Evaluation>,
}

impl Witness {
    pub const CONFIRMATIONS: usize = 16;
    pub const PROBES: usize = 1024;

    pub fn draw(scene: &Scene, seed: u64, range: &SampleRange) -> Result<Witness, SceneError> {
        let mut sampler = Sampler::new(seed, 0, range.clone());
        let (primary, evaluation) = sampler.draw(scene)?;
        let mut floats = |n: usize| (0..n).map(|_| sampler.draw(scene).map(|(_, ev)| ev.to_float())).collect::<Result<Vec<_>, _>>();
        let confirmations = floats(Self::CONFIRMATIONS)?;
        let probes = floats(Self::PROBES)?;
        Ok(Witness { primary, evaluation, confirmations, probes })
    }
}

/// One non-degenerate assignment for `scene`, reproducible from `seed`.
pub fn sample_params(scene: &Scene, seed: u64, range: &SampleRange) -> Result<ParamAssignment, SceneError> {
    Sampler::new(seed, 0, range.clone()).draw(scene).map(|(a, _)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load;
    use crate::scene::build_scene;

    #[test]
    fn grid() {
        let r = SampleRange::default();
        assert_eq!(r.grid_size(), 9 * 64 + 1);
        assert_eq!(r.value_at(0), BigRational::from_integer(1.into()));
        assert_eq!(r.value_at(576), BigRational::from_integer(10.into()));
    }

    #[test]
    fn same_seed_same_draws() {
        let params = vec!["x".to_string(), "y".to_string()];
        let mut s1 = Sampler::new(9, 0, SampleRange::default());
        let mut s2 = Sampler::new(9, 0, SampleRange::default());
        for _ in 0..10 {
            assert_eq!(s1.draw_raw(&params), s2.draw_raw(&params));
        }
        let mut s3 = Sampler::new(9, 1, SampleRange::default());
        assert_ne!(s1.draw_raw(&params), s3.draw_raw(&params));
    }

    #[test]
    fn forced_parallel_meet_is_degenerate() {
        let src = "param x\nparam y\npoint O = origin\npoint A = baseline(O, x)\nline l = through(O, A)\n\
                   point B = offset_perp(O, l, y)\npoint C = offset_perp(A, l, y)\n\
                   point P = meet(through(O, A), through(B, C))\nclaim len(O,P) = x\n";
        let scene = build_scene(&load(src).unwrap()).unwrap();
        let err = sample_params(&scene, 1, &SampleRange::default()).unwrap_err();
        assert!(matches!(err, SceneError::DegenerateModel { ref last, .. } if **last == SceneError::ParallelLines));
    }
}
