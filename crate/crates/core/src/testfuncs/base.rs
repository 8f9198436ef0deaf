//! Zero-normalized closed forms of the base benchmark functions.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

const WEIERSTRASS_A: f64 = 0.5;
const WEIERSTRASS_B: f64 = 3.0;
const WEIERSTRASS_KMAX: i32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunction {
    Sphere,
    Schwefel12,
    HighConditionedElliptic,
    Rosenbrock,
    Rastrigin,
    Ackley,
    Griewank,
    Weierstrass,
    ExpandedGriewankRosenbrock,
    ExpandedSchafferF6,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 10] = [
        BaseFunction::Sphere,
        BaseFunction::Schwefel12,
        BaseFunction::HighConditionedElliptic,
        BaseFunction::Rosenbrock,
        BaseFunction::Rastrigin,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::Weierstrass,
        BaseFunction::ExpandedGriewankRosenbrock,
        BaseFunction::ExpandedSchafferF6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::Schwefel12 => "schwefel12",
            BaseFunction::HighConditionedElliptic => "high_conditioned_elliptic",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Weierstrass => "weierstrass",
            BaseFunction::ExpandedGriewankRosenbrock => "expanded_griewank_rosenbrock",
            BaseFunction::ExpandedSchafferF6 => "expanded_schaffer_f6",
        }
    }

    /// The point where the function attains 0. Every coordinate has this value.
    pub fn optimum_coordinate(self) -> f64 {
        match self {
            BaseFunction::Rosenbrock | BaseFunction::ExpandedGriewankRosenbrock => 1.0,
            _ => 0.0,
        }
    }

    /// Conventional search interval for this function family.
    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            BaseFunction::Sphere
            | BaseFunction::Schwefel12
            | BaseFunction::HighConditionedElliptic
            | BaseFunction::Rosenbrock
            | BaseFunction::ExpandedSchafferF6 => (-100.0, 100.0),
            BaseFunction::Rastrigin => (-5.0, 5.0),
            BaseFunction::Ackley => (-32.0, 32.0),
            BaseFunction::Griewank => (-600.0, 600.0),
            BaseFunction::Weierstrass => (-0.5, 0.5),
            BaseFunction::ExpandedGriewankRosenbrock => (-3.0, 1.0),
        }
    }

    pub fn eval(self, z: &[f64]) -> f64 {
        base_eval(self, z)
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BaseFunction::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidDescriptor(format!("unknown function kind `{s}`")))
    }
}

pub fn base_eval(kind: BaseFunction, z: &[f64]) -> f64 {
    match kind {
        BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
        BaseFunction::Schwefel12 => {
            let mut prefix = 0.0;
            z.iter()
                .map(|v| {
                    prefix += v;
                    prefix * prefix
                })
                .sum()
        }
        BaseFunction::HighConditionedElliptic => {
            let d = z.len();
            z.iter()
                .enumerate()
                .map(|(i, v)| {
                    let e = if d > 1 {
                        i as f64 / (d - 1) as f64
                    } else {
                        0.0
                    };
                    1e6f64.powf(e) * v * v
                })
                .sum()
        }
        BaseFunction::Rosenbrock => z.windows(2).map(|w| rosenbrock_pair(w[0], w[1])).sum(),
        BaseFunction::Rastrigin => z
            .iter()
            .map(|v| v * v + 10.0 * (1.0 - (2.0 * PI * v).cos()))
            .sum(),
        BaseFunction::Ackley => {
            let n = z.len() as f64;
            let sq = z.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
            20.0 * (1.0 - (-0.2 * sq.sqrt()).exp()) + (E - cs.exp())
        }
        BaseFunction::Griewank => griewank(z),
        BaseFunction::Weierstrass => z.iter().map(|v| weierstrass_1d(*v)).sum(),
        BaseFunction::ExpandedGriewankRosenbrock => cyclic_pairs(z)
            .map(|(x, y)| griewank(&[rosenbrock_pair(x, y)]))
            .sum(),
        BaseFunction::ExpandedSchafferF6 => cyclic_pairs(z).map(|(x, y)| schaffer_f6(x, y)).sum(),
    }
}

fn rosenbrock_pair(x: f64, y: f64) -> f64 {
    let a = x * x - y;
    let b = x - 1.0;
    100.0 * a * a + b * b
}

fn griewank(z: &[f64]) -> f64 {
    let sum = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod = z
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product::<f64>();
    sum + (1.0 - prod)
}

// Summing per-term differences keeps the value at the optimum exactly zero.
fn weierstrass_1d(v: f64) -> f64 {
    (0..=WEIERSTRASS_KMAX)
        .map(|k| {
            let ak = WEIERSTRASS_A.powi(k);
            let bk = WEIERSTRASS_B.powi(k);
            ak * ((2.0 * PI * bk * (v + 0.5)).cos() - (2.0 * PI * bk * 0.5).cos())
        })
        .sum()
}

fn schaffer_f6(x: f64, y: f64) -> f64 {
    let s = x * x + y * y;
    let num = s.sqrt().sin().powi(2) - 0.5;
    let den = (1.0 + 0.001 * s).powi(2);
    0.5 + num / den
}

fn cyclic_pairs(z: &[f64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    let n = z.len();
    (0..n).map(move |i| (z[i], z[(i + 1) % n]))
}
