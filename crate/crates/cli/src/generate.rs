//! Seeded instance generators.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use pointcover_core::geometry::{object_through, plane_through, rat, Rational};
use pointcover_core::{CoverObject, Curve, CurveFamily, Family, Point};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::instance::{objects_value, Instance};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// `k` planted objects with `m` points each, plus `noise` stray points.
    OnCurves,
    /// The `n × n` integer grid.
    Grid,
    /// `n` distinct random integer points.
    UniformRandom,
    /// Planes in three-space, the first holding `m` points on one line and
    /// `off` more beside it; the other `k - 1` hold `rest` points each.
    DegeneratePlane,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::OnCurves => "on-curves",
            Model::Grid => "grid",
            Model::UniformRandom => "uniform-random",
            Model::DegeneratePlane => "degenerate-plane",
        }
    }
}

/// Generator parameters; fields a model does not use are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    pub model: Model,
    pub family: String,
    pub n: usize,
    pub k: usize,
    /// Points per planted object; 4 for on-curves and 9 for the heavy
    /// line of degenerate-plane when unset.
    pub m: Option<usize>,
    pub noise: usize,
    pub off: usize,
    pub rest: usize,
    /// Coordinates and parameters are drawn from `[-range, range]`.
    pub range: i64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            model: Model::Grid,
            family: "line2".into(),
            n: 3,
            k: 2,
            m: None,
            noise: 0,
            off: 1,
            rest: 3,
            range: 10,
        }
    }
}

const ATTEMPTS: usize = 10_000;

struct Sampler {
    rng: ChaCha8Rng,
    seen: BTreeSet<Point>,
    points: Vec<Point>,
}

impl Sampler {
    /// Draws from `draw` until it yields a new point.
    fn add(&mut self, mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<Point>) -> Result<(), CliError> {
        for _ in 0..ATTEMPTS {
            if let Some(p) = draw(&mut self.rng) {
                if self.seen.insert(p.clone()) {
                    self.points.push(p);
                    return Ok(());
                }
            }
        }
        Err(CliError::Invalid("could not place a new distinct point; widen the range".into()))
    }

    fn int(&mut self, range: i64) -> i64 {
        self.rng.gen_range(-range..=range)
    }

    fn nonzero_vec(&mut self, dim: usize) -> Vec<i64> {
        loop {
            let v: Vec<i64> = (0..dim).map(|_| self.rng.gen_range(-3..=3)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }
}

fn q(n: i64) -> Rational {
    rat(n)
}

fn int_point(c: &[i64]) -> Point {
    Point::int(c)
}

fn curve_family(family: Family) -> Result<CurveFamily, CliError> {
    match family {
        Family::Curve(c) => Ok(c),
        Family::Plane => Err(CliError::Invalid("this model needs a planar curve family".into())),
    }
}

/// A random object of `family` and a way to sample points on it.
fn planted_object(s: &mut Sampler, family: Family, range: i64) -> (CoverObject, Box<dyn Fn(&mut ChaCha8Rng) -> Point>) {
    match family {
        Family::Curve(CurveFamily::Line) => {
            let (x0, y0) = (s.int(range), s.int(range));
            let d = s.nonzero_vec(2);
            let obj = object_through(family, &[int_point(&[x0, y0]), int_point(&[x0 + d[0], y0 + d[1]])])
                .expect("two distinct points");
            let draw = move |rng: &mut ChaCha8Rng| {
                let t = rng.gen_range(-range..=range);
                int_point(&[x0 + t * d[0], y0 + t * d[1]])
            };
            (obj, Box::new(draw))
        }
        Family::Curve(CurveFamily::Circle) => {
            let (cx, cy) = (s.int(range), s.int(range));
            let r = s.rng.gen_range(1..=range.max(1));
            let obj = CoverObject::Curve(Curve::circle(q(cx), q(cy), q(r * r)).expect("positive radius"));
            // rational parametrization; t = range + 1 stands for the point at infinity
            let draw = move |rng: &mut ChaCha8Rng| {
                let t = rng.gen_range(-range..=range + 1);
                if t == range + 1 {
                    return int_point(&[cx - r, cy]);
                }
                let den = BigInt::from(1 + t * t);
                let x = Rational::new(BigInt::from(r * (1 - t * t)), den.clone()) + q(cx);
                let y = Rational::new(BigInt::from(2 * r * t), den) + q(cy);
                Point::xy(x, y)
            };
            (obj, Box::new(draw))
        }
        Family::Curve(CurveFamily::VParabola) => {
            let a = loop {
                let a = s.rng.gen_range(-2..=2);
                if a != 0 {
                    break a;
                }
            };
            let (b, c) = (s.int(range), s.int(range));
            let obj = CoverObject::Curve(Curve::vparabola(q(a), q(b), q(c)).expect("a != 0"));
            let draw = move |rng: &mut ChaCha8Rng| {
                let x = rng.gen_range(-range..=range);
                int_point(&[x, a * x * x + b * x + c])
            };
            (obj, Box::new(draw))
        }
        Family::Plane => {
            let (base, e1, e2) = plane_frame(s, range);
            let h = plane_at(&base, &e1, &e2);
            let draw = move |rng: &mut ChaCha8Rng| {
                let (u, v) = (rng.gen_range(-range..=range), rng.gen_range(-range..=range));
                frame_point(&base, &e1, &e2, u, v)
            };
            (CoverObject::Plane(h), Box::new(draw))
        }
    }
}

type Frame = (Vec<i64>, Vec<i64>, Vec<i64>);

/// A base point and two independent directions.
fn plane_frame(s: &mut Sampler, range: i64) -> Frame {
    let base: Vec<i64> = (0..3).map(|_| s.int(range)).collect();
    loop {
        let e1 = s.nonzero_vec(3);
        let e2 = s.nonzero_vec(3);
        let cross = [e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]];
        if cross != [0, 0, 0] {
            return (base, e1, e2);
        }
    }
}

fn frame_point(base: &[i64], e1: &[i64], e2: &[i64], u: i64, v: i64) -> Point {
    let c: Vec<i64> = (0..3).map(|i| base[i] + u * e1[i] + v * e2[i]).collect();
    int_point(&c)
}

fn plane_at(base: &[i64], e1: &[i64], e2: &[i64]) -> pointcover_core::Plane3 {
    plane_through(&frame_point(base, e1, e2, 0, 0), &frame_point(base, e1, e2, 1, 0), &frame_point(base, e1, e2, 0, 1))
        .expect("independent directions")
}

fn noise(s: &mut Sampler, dim: usize, count: usize, range: i64) -> Result<(), CliError> {
    for _ in 0..count {
        s.add(|rng| Some(int_point(&(0..dim).map(|_| rng.gen_range(-range..=range)).collect::<Vec<_>>())))?;
    }
    Ok(())
}

/// Builds the instance for `params`; the same seed gives the same file.
pub fn generate(params: &GenParams, seed: u64) -> Result<Instance, CliError> {
    let family = Family::from_tag(&params.family)
        .ok_or_else(|| CliError::Invalid(format!("unknown family {:?}", params.family)))?;
    if params.range < 1 {
        return Err(CliError::Invalid("range must be positive".into()));
    }
    let range = params.range;
    let mut s = Sampler { rng: ChaCha8Rng::seed_from_u64(seed), seen: BTreeSet::new(), points: Vec::new() };
    let mut planted: Vec<CoverObject> = Vec::new();
    let (family, k) = match params.model {
        Model::Grid => {
            curve_family(family)?;
            let n = params.n as i64;
            for x in 0..n {
                for y in 0..n {
                    s.add(|_| Some(int_point(&[x, y])))?;
                }
            }
            (family, params.n)
        }
        Model::UniformRandom => {
            noise(&mut s, family.dim(), params.n, range)?;
            (family, params.k)
        }
        Model::OnCurves => {
            let m = params.m.unwrap_or(4);
            for _ in 0..params.k {
                let (obj, draw) = planted_object(&mut s, family, range);
                for _ in 0..m {
                    s.add(|rng| Some(draw(rng)))?;
                }
                planted.push(obj);
            }
            noise(&mut s, family.dim(), params.noise, range)?;
            s.points.shuffle(&mut s.rng);
            (family, params.k + params.noise)
        }
        Model::DegeneratePlane => {
            if params.k == 0 {
                return Err(CliError::Invalid("degenerate-plane needs k >= 1".into()));
            }
            let m = params.m.unwrap_or(9);
            let (base, e1, e2) = plane_frame(&mut s, range);
            for _ in 0..m {
                s.add(|rng| Some(frame_point(&base, &e1, &e2, rng.gen_range(-range..=range), 0)))?;
            }
            for _ in 0..params.off {
                s.add(|rng| {
                    let v = rng.gen_range(-range..=range);
                    (v != 0).then(|| frame_point(&base, &e1, &e2, rng.gen_range(-range..=range), v))
                })?;
            }
            let heavy = CoverObject::Plane(plane_at(&base, &e1, &e2));
            // later points stay off the heavy plane so it keeps its shape
            for _ in 1..params.k {
                let (obj, draw) = planted_object(&mut s, Family::Plane, range);
                for _ in 0..params.rest {
                    s.add(|rng| Some(draw(rng)).filter(|p| !heavy.covers(p)))?;
                }
                planted.push(obj);
            }
            for _ in 0..params.noise {
                s.add(|rng| {
                    let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-range..=range)).collect();
                    Some(int_point(&c)).filter(|p| !heavy.covers(p))
                })?;
            }
            planted.insert(0, heavy);
            s.points.shuffle(&mut s.rng);
            (Family::Plane, params.k + params.noise)
        }
    };
    let mut inst = Instance::new(family, k, s.points);
    inst.metadata.insert("model".into(), Value::from(params.model.tag()));
    inst.metadata.insert("seed".into(), Value::from(seed));
    if !planted.is_empty() {
        inst.metadata.insert("planted".into(), objects_value(&planted));
        inst.metadata.insert("planted_bound".into(), Value::from(planted.len() + params.noise));
    }
    Ok(inst)
}
