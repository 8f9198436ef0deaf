//! Distance-weighted mixtures of shifted, rotated base functions.

use crate::error::{Error, Result};
use crate::testfuncs::base::BaseFunction;
use crate::testfuncs::transform::Transform;

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub kind: BaseFunction,
    pub transform: Transform,
    /// Width of the component's basin of influence.
    pub sigma: f64,
    /// Stretch applied to the search coordinates before evaluation.
    pub lambda: f64,
}

impl Component {
    pub fn value(&self, x: &[f64]) -> f64 {
        let z = self
            .transform
            .to_base(x, self.lambda, self.kind.optimum_coordinate());
        self.kind.eval(&z) + self.transform.bias
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    components: Vec<Component>,
}

impl Composition {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidDescriptor(
                "a composition needs at least two components".into(),
            ));
        }
        let dim = components[0].transform.dim();
        for c in &components {
            if c.transform.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.transform.dim(),
                });
            }
            if !(c.sigma > 0.0 && c.lambda > 0.0) {
                return Err(Error::InvalidDescriptor(
                    "component sigma and lambda must be positive".into(),
                ));
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].transform.dim()
    }

    /// Normalized mixture weights at `x`:
    /// `w_i ∝ exp(-‖x - o_i‖² / (2 D σ_i²))`.
    ///
    /// When every raw weight underflows, the nearest component (lowest index on
    /// ties) takes weight 1.
    pub fn weights(&self, x: &[f64]) -> Vec<f64> {
        let d = x.len() as f64;
        let dist2: Vec<f64> = self
            .components
            .iter()
            .map(|c| {
                x.iter()
                    .zip(&c.transform.shift)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum()
            })
            .collect();
        let raw: Vec<f64> = self
            .components
            .iter()
            .zip(&dist2)
            .map(|(c, d2)| (-d2 / (2.0 * d * c.sigma * c.sigma)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 && total.is_finite() {
            return raw.into_iter().map(|w| w / total).collect();
        }
        let mut nearest = 0;
        for (i, d2) in dist2.iter().enumerate() {
            if *d2 < dist2[nearest] {
                nearest = i;
            }
        }
        let mut w = vec![0.0; raw.len()];
        w[nearest] = 1.0;
        w
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.weights(x)
            .iter()
            .zip(&self.components)
            .filter(|(w, _)| **w > 0.0)
            .map(|(w, c)| w * c.value(x))
            .sum()
    }
}
