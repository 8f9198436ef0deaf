//! Synthetic benchmark objectives: base functions, shift/rotation/bias/noise
//! transforms and hybrid compositions, all reproducible from a descriptor and
//! a seed.

mod base;
mod composition;
mod descriptor;
mod transform;

pub use base::{base_eval, BaseFunction};
pub use composition::{Component, Composition};
pub use descriptor::{
    default_suite, make_test_function, Bounds, ComponentDescriptor, FunctionDescriptor,
};
pub use transform::{orthogonality_error, random_rotation, NoiseModel, Transform};

use crate::evaluator::Objective;
use crate::rng::RandomSource;
use crate::space::SearchSpace;

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Single {
        kind: BaseFunction,
        transform: Transform,
    },
    Composition(Composition),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub label: String,
    /// Benchmark category (1 unimodal, 2 multimodal basic, 3 expanded, 4 hybrid composition).
    pub category: u8,
    pub space: SearchSpace,
    pub body: Body,
    pub noise: NoiseModel,
}

impl TestFunction {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Noiseless value at `x`.
    pub fn value(&self, x: &[f64]) -> f64 {
        let (raw, bias) = self.raw_and_bias(x);
        raw + bias
    }

    fn raw_and_bias(&self, x: &[f64]) -> (f64, f64) {
        match &self.body {
            Body::Single { kind, transform } => {
                let z = transform.to_base(x, 1.0, kind.optimum_coordinate());
                (kind.eval(&z), transform.bias)
            }
            Body::Composition(c) => (c.value(x), 0.0),
        }
    }

    /// Location of the global optimum for single-body functions, or of the
    /// first component for compositions.
    pub fn optimum(&self) -> &[f64] {
        match &self.body {
            Body::Single { transform, .. } => &transform.shift,
            Body::Composition(c) => &c.components()[0].transform.shift,
        }
    }
}

impl Objective for TestFunction {
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, x: &[f64], rng: &mut dyn RandomSource) -> f64 {
        let (raw, bias) = self.raw_and_bias(x);
        self.noise.apply(raw, rng) + bias
    }
}

/// Evaluates a composition with optional multiplicative noise on the mixture value.
pub fn compose_eval(
    c: &Composition,
    x: &[f64],
    noise: NoiseModel,
    rng: &mut dyn RandomSource,
) -> f64 {
    noise.apply(c.value(x), rng)
}
