use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{mix64, RandomSource, RngStream};
use crate::space::SearchSpace;
use crate::testfuncs::base::BaseFunction;
use crate::testfuncs::composition::{Component, Composition};
use crate::testfuncs::transform::{random_rotation, NoiseModel, Transform};
use crate::testfuncs::{Body, TestFunction};

/// Shifts are drawn from the central part of the box, leaving this fraction of
/// the range free on each side.
const SHIFT_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bounds {
    Cube([f64; 2]),
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl Bounds {
    fn to_space(&self, dim: usize) -> Result<SearchSpace> {
        match self {
            Bounds::Cube([lo, hi]) => SearchSpace::cube(dim, *lo, *hi),
            Bounds::Box { lower, upper } => {
                if lower.len() != dim || upper.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: lower.len().max(upper.len()),
                    });
                }
                SearchSpace::new(lower.clone(), upper.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDescriptor {
    pub kind: BaseFunction,
    #[serde(default = "one")]
    pub sigma: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default)]
    pub bias: f64,
}

fn one() -> f64 {
    1.0
}

/// Declarative test-function description, as stored in suite and benchmark
/// config files.
///
/// Exactly one of `kind` and `composition` must be present. Composition
/// components always receive distinct seeded shifts; `shifted` only applies to
/// single-body functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDescriptor {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<BaseFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composition: Option<Vec<ComponentDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Bounds>,
    #[serde(default)]
    pub shifted: bool,
    #[serde(default)]
    pub rotated: bool,
    #[serde(default)]
    pub noisy: bool,
    #[serde(default)]
    pub optimum_on_bounds: bool,
    #[serde(default)]
    pub bias: f64,
    #[serde(default)]
    pub seed: u64,
}

impl FunctionDescriptor {
    pub fn single(label: impl Into<String>, kind: BaseFunction) -> Self {
        Self {
            label: label.into(),
            category: None,
            kind: Some(kind),
            composition: None,
            dim: None,
            bounds: None,
            shifted: false,
            rotated: false,
            noisy: false,
            optimum_on_bounds: false,
            bias: 0.0,
            seed: 0,
        }
    }

    pub fn composite(label: impl Into<String>, components: Vec<ComponentDescriptor>) -> Self {
        Self {
            kind: None,
            composition: Some(components),
            ..Self::single(label, BaseFunction::Sphere)
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn shifted(mut self) -> Self {
        self.shifted = true;
        self
    }

    pub fn rotated(mut self) -> Self {
        self.rotated = true;
        self
    }

    pub fn noisy(mut self) -> Self {
        self.noisy = true;
        self
    }

    pub fn on_bounds(mut self) -> Self {
        self.optimum_on_bounds = true;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Explicit category, or the one implied by the function family.
    pub fn resolved_category(&self) -> u8 {
        if let Some(c) = self.category {
            return c;
        }
        match (&self.composition, self.kind) {
            (Some(_), _) => 4,
            (
                None,
                Some(
                    BaseFunction::Sphere
                    | BaseFunction::Schwefel12
                    | BaseFunction::HighConditionedElliptic,
                ),
            ) => 1,
            (
                None,
                Some(BaseFunction::ExpandedGriewankRosenbrock | BaseFunction::ExpandedSchafferF6),
            ) => 3,
            _ => 2,
        }
    }

    pub fn build(&self) -> Result<TestFunction> {
        make_test_function(self, self.seed)
    }
}

/// Instantiates a descriptor. Shifts and rotations are drawn from a stream
/// keyed by `seed` and the dimension, so the same pair always yields the same
/// function.
pub fn make_test_function(desc: &FunctionDescriptor, seed: u64) -> Result<TestFunction> {
    let dim = desc
        .dim
        .filter(|d| *d > 0)
        .ok_or_else(|| Error::InvalidDescriptor(format!("`{}`: dim must be set", desc.label)))?;
    let mut rng = RngStream::new(mix64(seed) ^ mix64(dim as u64));
    let noise = if desc.noisy {
        NoiseModel::MultiplicativeGaussian
    } else {
        NoiseModel::None
    };

    let body = match (desc.kind, &desc.composition) {
        (Some(kind), None) => {
            let space = desc
                .bounds
                .clone()
                .unwrap_or_else(|| Bounds::Cube(kind.default_bounds().into()))
                .to_space(dim)?;
            let shift = if desc.shifted || desc.optimum_on_bounds {
                sample_shift(&space, desc.optimum_on_bounds, &mut rng)
            } else {
                vec![0.0; dim]
            };
            let rotation = desc.rotated.then(|| random_rotation(dim, &mut rng));
            let transform = Transform {
                shift,
                rotation,
                bias: desc.bias,
            };
            return Ok(TestFunction {
                label: desc.label.clone(),
                category: desc.resolved_category(),
                space,
                body: Body::Single { kind, transform },
                noise,
            });
        }
        (None, Some(parts)) => parts,
        (Some(_), Some(_)) => {
            return Err(Error::InvalidDescriptor(format!(
                "`{}`: set either kind or composition, not both",
                desc.label
            )))
        }
        (None, None) => {
            return Err(Error::InvalidDescriptor(format!(
                "`{}`: missing kind or composition",
                desc.label
            )))
        }
    };

    let space = desc
        .bounds
        .clone()
        .unwrap_or(Bounds::Cube([-5.0, 5.0]))
        .to_space(dim)?;
    let mut components = Vec::with_capacity(body.len());
    for (i, part) in body.iter().enumerate() {
        let shift = sample_shift(&space, desc.optimum_on_bounds && i == 0, &mut rng);
        let rotation = desc.rotated.then(|| random_rotation(dim, &mut rng));
        components.push(Component {
            kind: part.kind,
            transform: Transform {
                shift,
                rotation,
                bias: part.bias,
            },
            sigma: part.sigma,
            lambda: part.lambda,
        });
    }
    let mut composition = Composition::new(components)?;
    if desc.bias != 0.0 {
        composition = Composition::new(
            composition
                .components()
                .iter()
                .cloned()
                .map(|mut c| {
                    c.transform.bias += desc.bias;
                    c
                })
                .collect(),
        )?;
    }
    Ok(TestFunction {
        label: desc.label.clone(),
        category: desc.resolved_category(),
        space,
        body: Body::Composition(composition),
        noise,
    })
}

fn sample_shift(space: &SearchSpace, on_bounds: bool, rng: &mut impl RandomSource) -> Vec<f64> {
    space
        .lower()
        .iter()
        .zip(space.upper())
        .enumerate()
        .map(|(i, (lo, hi))| {
            let margin = SHIFT_MARGIN * (hi - lo);
            let v = rng.uniform_in(lo + margin, hi - margin);
            if on_bounds && i % 2 == 0 {
                *lo
            } else {
                v
            }
        })
        .collect()
}

/// Descriptors covering the four benchmark categories, excluding the two
/// functions whose definition depends on fixed matrix data.
pub fn default_suite() -> Vec<FunctionDescriptor> {
    use BaseFunction::*;
    let hybrid = |kinds: &[(BaseFunction, f64)], first_sigma: f64| -> Vec<ComponentDescriptor> {
        kinds
            .iter()
            .enumerate()
            .map(|(i, (kind, lambda))| ComponentDescriptor {
                kind: *kind,
                sigma: if i == 0 { first_sigma } else { 1.0 },
                lambda: *lambda,
                bias: 100.0 * i as f64,
            })
            .collect()
    };
    let mixed = [
        (Rastrigin, 1.0),
        (Rastrigin, 1.0),
        (Weierstrass, 10.0),
        (Weierstrass, 10.0),
        (Griewank, 5.0 / 60.0),
        (Griewank, 5.0 / 60.0),
        (Ackley, 5.0 / 32.0),
        (Ackley, 5.0 / 32.0),
        (Sphere, 5.0 / 100.0),
        (Sphere, 5.0 / 100.0),
    ];
    let rotated_mix = [
        (Ackley, 5.0 / 32.0),
        (Ackley, 5.0 / 32.0),
        (Rastrigin, 1.0),
        (Rastrigin, 1.0),
        (Sphere, 5.0 / 100.0),
        (Sphere, 5.0 / 100.0),
        (Weierstrass, 10.0),
        (Weierstrass, 10.0),
        (Griewank, 5.0 / 60.0),
        (Griewank, 5.0 / 60.0),
    ];
    let schaffer_mix = [
        (ExpandedSchafferF6, 5.0 / 32.0),
        (ExpandedSchafferF6, 5.0 / 32.0),
        (Rastrigin, 1.0),
        (Rastrigin, 1.0),
        (ExpandedGriewankRosenbrock, 5.0 / 100.0),
        (ExpandedGriewankRosenbrock, 5.0 / 100.0),
        (Weierstrass, 10.0),
        (Weierstrass, 10.0),
        (Griewank, 5.0 / 60.0),
        (Griewank, 5.0 / 60.0),
    ];

    let mut suite = vec![
        FunctionDescriptor::single("f01_shifted_sphere", Sphere).shifted(),
        FunctionDescriptor::single("f02_shifted_schwefel12", Schwefel12).shifted(),
        FunctionDescriptor::single("f03_shifted_rotated_elliptic", HighConditionedElliptic)
            .shifted()
            .rotated(),
        FunctionDescriptor::single("f04_shifted_schwefel12_noisy", Schwefel12)
            .shifted()
            .noisy(),
        FunctionDescriptor::single("f06_shifted_rosenbrock", Rosenbrock).shifted(),
        FunctionDescriptor::single("f07_shifted_rotated_griewank", Griewank)
            .shifted()
            .rotated(),
        FunctionDescriptor::single("f08_shifted_rotated_ackley_bounds", Ackley)
            .rotated()
            .on_bounds(),
        FunctionDescriptor::single("f09_shifted_rastrigin", Rastrigin).shifted(),
        FunctionDescriptor::single("f10_shifted_rotated_rastrigin", Rastrigin)
            .shifted()
            .rotated(),
        FunctionDescriptor::single("f11_shifted_rotated_weierstrass", Weierstrass)
            .shifted()
            .rotated(),
        FunctionDescriptor::single(
            "f13_expanded_griewank_rosenbrock",
            ExpandedGriewankRosenbrock,
        )
        .shifted(),
        FunctionDescriptor::single("f14_shifted_rotated_expanded_schaffer", ExpandedSchafferF6)
            .shifted()
            .rotated(),
        FunctionDescriptor::composite("f15_hybrid_composition", hybrid(&mixed, 1.0)),
        FunctionDescriptor::composite("f16_rotated_hybrid_composition", hybrid(&mixed, 1.0))
            .rotated(),
        FunctionDescriptor::composite("f17_rotated_hybrid_composition_noisy", hybrid(&mixed, 1.0))
            .rotated()
            .noisy(),
        FunctionDescriptor::composite("f18_rotated_hybrid_composition", hybrid(&rotated_mix, 1.0))
            .rotated(),
        FunctionDescriptor::composite(
            "f19_rotated_hybrid_composition_narrow",
            hybrid(&rotated_mix, 0.1),
        )
        .rotated(),
        FunctionDescriptor::composite(
            "f20_rotated_hybrid_composition_bounds",
            hybrid(&rotated_mix, 1.0),
        )
        .rotated()
        .on_bounds(),
        FunctionDescriptor::composite("f21_rotated_hybrid_composition", hybrid(&schaffer_mix, 1.0))
            .rotated(),
    ];
    for (i, d) in suite.iter_mut().enumerate() {
        d.seed = 1000 + i as u64;
    }
    suite
}
