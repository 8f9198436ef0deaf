use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algos::AlgorithmConfig;
use crate::error::{Error, Result};
use crate::testfuncs::{default_suite, FunctionDescriptor, TestFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmEntry {
    pub name: String,
    #[serde(flatten)]
    pub config: AlgorithmConfig,
}

/// A full benchmark matrix: algorithms × functions × dimensions × repetitions.
///
/// Every field has a default, so a config file only needs the parts it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkSpec {
    pub algorithms: Vec<AlgorithmEntry>,
    pub functions: Vec<FunctionDescriptor>,
    pub dims: Vec<usize>,
    pub budget: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            algorithms: AlgorithmConfig::presets()
                .into_iter()
                .map(|(name, config)| AlgorithmEntry { name, config })
                .collect(),
            functions: default_suite(),
            dims: vec![30, 50],
            budget: 1000,
            reps: 100,
            master_seed: 0,
            output_dir: PathBuf::from("results"),
        }
    }
}

impl BenchmarkSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn algorithm(&self, name: &str) -> Option<&AlgorithmEntry> {
        self.algorithms.iter().find(|a| a.name == name)
    }

    /// Finds a function by full label, or by the short id before the first `_`
    /// (`f09` for `f09_shifted_rastrigin`).
    pub fn function(&self, label: &str) -> Option<&FunctionDescriptor> {
        self.functions
            .iter()
            .find(|f| f.label == label)
            .or_else(|| {
                self.functions
                    .iter()
                    .find(|f| f.label.split('_').next() == Some(label))
            })
    }

    /// Builds `label` at dimension `dim`.
    pub fn build_function(&self, label: &str, dim: usize) -> Result<TestFunction> {
        let desc = self
            .function(label)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown function `{label}`")))?;
        desc.clone().with_dim(dim).build()
    }

    /// Checks the whole matrix before anything runs.
    pub fn validate(&self) -> Result<()> {
        if self.algorithms.is_empty() || self.functions.is_empty() || self.dims.is_empty() {
            return Err(Error::InvalidConfig(
                "algorithms, functions and dims must be non-empty".into(),
            ));
        }
        if self.budget == 0 || self.reps == 0 {
            return Err(Error::InvalidConfig(
                "budget and reps must be positive".into(),
            ));
        }
        let mut names = HashSet::new();
        for a in &self.algorithms {
            if !names.insert(a.name.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate algorithm `{}`",
                    a.name
                )));
            }
            check_name(&a.name)?;
            a.config
                .validate()
                .map_err(|e| Error::InvalidConfig(format!("algorithm `{}`: {e}", a.name)))?;
        }
        let mut labels = HashSet::new();
        for f in &self.functions {
            if !labels.insert(f.label.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate function `{}`",
                    f.label
                )));
            }
            check_name(&f.label)?;
            for &d in &self.dims {
                f.clone().with_dim(d).build()?;
            }
        }
        Ok(())
    }
}

// Names end up in file names and CSV cells.
fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !name.contains("__");
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "name `{name}` must be ASCII alphanumerics, '-', '_' or '.' without '__'"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algos::{DEConfig, Strategy};

    #[test]
    fn default_spec_is_valid() {
        let spec = BenchmarkSpec {
            dims: vec![5],
            ..Default::default()
        };
        spec.validate().unwrap();
    }

    #[test]
    fn rejects_small_population_for_many_pairs() {
        let spec = BenchmarkSpec {
            dims: vec![5],
            algorithms: vec![AlgorithmEntry {
                name: "SQG-DE".into(),
                config: AlgorithmConfig::De(DEConfig {
                    pop_size: 6,
                    w: 5,
                    ..DEConfig::new(Strategy::SqgBestWBin)
                }),
            }],
            ..Default::default()
        };
        let err = spec.validate().unwrap_err().to_string();
        assert!(err.contains("pop_size >= 12"), "{err}");
    }

    #[test]
    fn rejects_bad_names_and_duplicates() {
        let base = BenchmarkSpec {
            dims: vec![2],
            ..Default::default()
        };
        let mut spec = base.clone();
        spec.algorithms[0].name = "has space".into();
        assert!(spec.validate().is_err());
        let mut spec = base;
        spec.functions[1].label = spec.functions[0].label.clone();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn partial_json_config() {
        let spec: BenchmarkSpec = serde_json::from_str(
            r#"{
                "algorithms": [
                    {"name": "DE", "kind": "de", "strategy": "rand1_exp"},
                    {"name": "SQG", "kind": "sqg", "r": 3}
                ],
                "functions": [{"label": "s", "kind": "sphere", "shifted": true}],
                "dims": [4], "budget": 50, "reps": 2
            }"#,
        )
        .unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.master_seed, 0);
        let AlgorithmConfig::Sqg(sqg) = &spec.algorithms[1].config else {
            panic!()
        };
        assert_eq!(sqg.r, 3);
        let back: BenchmarkSpec = serde_json::from_str(&spec.to_json().unwrap()).unwrap();
        assert_eq!(back, spec);
    }
}
