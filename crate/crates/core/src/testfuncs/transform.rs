use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::rng::RandomSource;

/// Uniformly distributed orthogonal matrix: QR of a standard-normal matrix
/// with the column signs fixed by the diagonal of R.
pub fn random_rotation(dim: usize, rng: &mut impl RandomSource) -> DMatrix<f64> {
    assert!(dim >= 1, "rotation dimension must be positive");
    let gaussian = DMatrix::from_fn(dim, dim, |_, _| rng.normal());
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Largest absolute entry of `M Mᵀ - I`.
pub fn orthogonality_error(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let prod = m * m.transpose();
    (prod - DMatrix::identity(n, n)).amax()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseModel {
    #[default]
    None,
    /// `v * (1 + 0.4 |N(0,1)|)`
    MultiplicativeGaussian,
}

impl NoiseModel {
    pub const MULTIPLICATIVE_SCALE: f64 = 0.4;

    pub fn apply(self, value: f64, rng: &mut dyn RandomSource) -> f64 {
        match self {
            NoiseModel::None => value,
            NoiseModel::MultiplicativeGaussian => {
                value * (1.0 + Self::MULTIPLICATIVE_SCALE * rng.normal().abs())
            }
        }
    }
}

/// Maps a search point to base-function coordinates: `z = M((x - o) / lambda) + c`
/// where `c` puts the base function's optimum at `x = o`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform {
    pub shift: Vec<f64>,
    pub rotation: Option<DMatrix<f64>>,
    pub bias: f64,
}

impl Transform {
    pub fn identity(dim: usize) -> Self {
        Self {
            shift: vec![0.0; dim],
            rotation: None,
            bias: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn to_base(&self, x: &[f64], lambda: f64, optimum: f64) -> Vec<f64> {
        let centered: Vec<f64> = x
            .iter()
            .zip(&self.shift)
            .map(|(xi, oi)| (xi - oi) / lambda)
            .collect();
        let mut z = match &self.rotation {
            Some(m) => (m * DVector::from_vec(centered)).data.into(),
            None => centered,
        };
        if optimum != 0.0 {
            for v in &mut z {
                *v += optimum;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn one_dimensional_rotation_is_sign() {
        for seed in 0..20 {
            let m = random_rotation(1, &mut RngStream::new(seed));
            assert_eq!(m[(0, 0)].abs(), 1.0);
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        for seed in 0..5 {
            let m = random_rotation(10, &mut RngStream::new(seed));
            assert!(orthogonality_error(&m) < 1e-10);
        }
    }

    #[test]
    fn rotation_preserves_norm() {
        let mut rng = RngStream::new(11);
        let m = random_rotation(30, &mut rng);
        for _ in 0..100 {
            let x = DVector::from_fn(30, |_, _| rng.uniform_in(-10.0, 10.0));
            let ratio = (&m * &x).norm() / x.norm();
            assert!((1.0 - 1e-9..=1.0 + 1e-9).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn rotation_is_seed_reproducible() {
        let a = random_rotation(6, &mut RngStream::new(5));
        let b = random_rotation(6, &mut RngStream::new(5));
        assert_eq!(a, b);
    }

    #[test]
    fn noise_never_decreases_nonnegative_values() {
        let mut rng = RngStream::new(2);
        for _ in 0..1000 {
            let v = rng.uniform_in(0.0, 50.0);
            let noisy = NoiseModel::MultiplicativeGaussian.apply(v, &mut rng);
            assert!(noisy >= v);
        }
        assert_eq!(NoiseModel::None.apply(3.5, &mut rng), 3.5);
    }
}
