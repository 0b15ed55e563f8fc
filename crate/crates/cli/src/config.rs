//! Experiment configuration: a flat TOML file with one section per concern.
//!
//! ```toml
//! [grid]
//! m = 5              # axis sites
//! fiber_dim = 1      # transverse dimension per axis site
//! total_mass = 1.0   # uniform cell masses total_mass / m
//! # coords  = [0.0, 1.0, 2.5]   # explicit axis coordinates (optional)
//! # weights = [0.5, 0.5, 1.0]   # explicit cell masses (optional)
//!
//! [kernel]
//! q_angle = "1/3"    # q = exp(2*pi*i * p/k), exact at roots of unity
//! # eta = 0.25       # diagonal override; default Re(q)
//!
//! [fock]
//! max_level = 5
//!
//! [model]
//! eta = 0.5
//! kappa = 1.0
//! # t_block = [[0.9, 0.25], [0.25, 0.5]]  # fiber block for T (optional)
//!
//! [run]
//! suite = "all"
//! seed = 20240901
//! samples = 1000000
//!
//! [output]
//! dir = "reports"
//! format = "json"
//! ```

use anyhow::{bail, Context};
use anyonfock::linalg::SymMatrix;
use anyonfock::{C64, Grid, KPair, QKernel};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub m: usize,
    pub fiber_dim: usize,
    pub total_mass: f64,
    pub coords: Option<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            m: 5,
            fiber_dim: 1,
            total_mass: 1.0,
            coords: None,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSection {
    /// Rational angle `p/k`: the twist is `exp(2*pi*i*p/k)`.
    pub q_angle: String,
    /// Diagonal value; defaults to `Re(q)`.
    pub eta: Option<f64>,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection {
            q_angle: "1/5".to_string(),
            eta: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FockSection {
    pub max_level: usize,
}

impl Default for FockSection {
    fn default() -> Self {
        FockSection { max_level: 5 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub eta: f64,
    pub kappa: f64,
    /// Optional fiber block applied at every axis site; identity scaled by
    /// `kappa^2` otherwise.
    pub t_block: Option<Vec<Vec<f64>>>,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            eta: 0.5,
            kappa: 1.0,
            t_block: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub suite: String,
    pub seed: u64,
    pub samples: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            suite: "all".to_string(),
            seed: 20_240_901,
            samples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "reports".to_string(),
            format: "json".to_string(),
        }
    }
}

/// Fully parsed experiment configuration.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub grid: GridSection,
    pub kernel: KernelSection,
    pub fock: FockSection,
    pub model: ModelSection,
    pub run: RunSection,
    pub output: OutputSection,
}

impl ExperimentConfig {
    /// Parse and validate a TOML document.
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).context("config parse failure")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reject invalid configurations, naming the failing field.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.grid.m == 0 {
            bail!("grid.m: must be positive");
        }
        if self.grid.fiber_dim == 0 {
            bail!("grid.fiber_dim: must be positive");
        }
        if !(self.grid.total_mass > 0.0) {
            bail!("grid.total_mass: must be positive");
        }
        if let Some(coords) = &self.grid.coords {
            if coords.len() != self.grid.m {
                bail!("grid.coords: length {} != grid.m = {}", coords.len(), self.grid.m);
            }
            if coords.windows(2).any(|w| !(w[0] < w[1])) {
                bail!("grid.coords: must be strictly increasing");
            }
        }
        if let Some(weights) = &self.grid.weights {
            if weights.len() != self.grid.m {
                bail!("grid.weights: length {} != grid.m = {}", weights.len(), self.grid.m);
            }
            if weights.iter().any(|&w| !(w > 0.0)) {
                bail!("grid.weights: must be positive");
            }
        }
        parse_angle(&self.kernel.q_angle)
            .with_context(|| format!("kernel.q_angle: cannot parse {:?}", self.kernel.q_angle))?;
        if let Some(eta) = self.kernel.eta {
            if !eta.is_finite() {
                bail!("kernel.eta: must be finite");
            }
        }
        if self.fock.max_level == 0 || self.fock.max_level > 8 {
            bail!("fock.max_level: must lie in 1..=8");
        }
        if !(self.model.kappa > 0.0) {
            bail!("model.kappa: must be positive");
        }
        if !self.model.eta.is_finite() {
            bail!("model.eta: must be finite");
        }
        if let Some(block) = &self.model.t_block {
            if block.len() != self.grid.fiber_dim {
                bail!(
                    "model.t_block: size {} != grid.fiber_dim = {}",
                    block.len(),
                    self.grid.fiber_dim
                );
            }
            for (i, row) in block.iter().enumerate() {
                if row.len() != self.grid.fiber_dim {
                    bail!("model.t_block: row {i} has length {}", row.len());
                }
            }
        }
        if !crate::suites::SUITES.contains(&self.run.suite.as_str()) {
            bail!(
                "run.suite: unknown suite {:?} (expected one of {})",
                self.run.suite,
                crate::suites::SUITES.join(", ")
            );
        }
        if self.run.samples == 0 {
            bail!("run.samples: must be positive");
        }
        match self.output.format.as_str() {
            "json" | "csv" => {}
            other => bail!("output.format: {other:?} is not json or csv"),
        }
        Ok(())
    }

    /// Build the configured grid.
    pub fn build_grid(&self) -> anyhow::Result<Grid> {
        let grid = match (&self.grid.coords, &self.grid.weights) {
            (Some(c), Some(w)) => Grid::new(c.clone(), w.clone(), self.grid.fiber_dim)?,
            (Some(c), None) => {
                let w = vec![self.grid.total_mass / self.grid.m as f64; self.grid.m];
                Grid::new(c.clone(), w, self.grid.fiber_dim)?
            }
            (None, Some(w)) => {
                let c = (1..=self.grid.m).map(|i| i as f64).collect();
                Grid::new(c, w.clone(), self.grid.fiber_dim)?
            }
            (None, None) => Grid::uniform(self.grid.m, self.grid.total_mass, self.grid.fiber_dim)?,
        };
        Ok(grid)
    }

    /// Build the configured twist kernel.
    pub fn build_kernel(&self) -> anyhow::Result<QKernel> {
        let (p, k) = parse_angle(&self.kernel.q_angle)?;
        let q = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / k as f64);
        let kernel = match self.kernel.eta {
            Some(eta) => QKernel::with_eta(q, eta)?,
            None => QKernel::new(q)?,
        };
        Ok(kernel)
    }

    /// Build the configured operator pair over a grid.
    pub fn build_kpair(&self, grid: &Grid) -> anyhow::Result<KPair> {
        let pair = match &self.model.t_block {
            Some(rows) => {
                let block = SymMatrix::from_rows(rows)?;
                KPair::uniform_block(grid, self.model.eta, block)?
            }
            None => KPair::scalar(grid, self.model.eta, self.model.kappa)?,
        };
        Ok(pair)
    }

    /// Deterministic flat echo of the resolved configuration, for reports.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut pairs = vec![
            ("grid.m".to_string(), self.grid.m.to_string()),
            ("grid.fiber_dim".to_string(), self.grid.fiber_dim.to_string()),
            (
                "grid.total_mass".to_string(),
                anyonfock::format_float(self.grid.total_mass),
            ),
            ("kernel.q_angle".to_string(), self.kernel.q_angle.clone()),
            (
                "kernel.eta".to_string(),
                self.kernel
                    .eta
                    .map(anyonfock::format_float)
                    .unwrap_or_else(|| "default".to_string()),
            ),
            ("fock.max_level".to_string(), self.fock.max_level.to_string()),
            ("model.eta".to_string(), anyonfock::format_float(self.model.eta)),
            (
                "model.kappa".to_string(),
                anyonfock::format_float(self.model.kappa),
            ),
            ("run.suite".to_string(), self.run.suite.clone()),
            ("run.seed".to_string(), self.run.seed.to_string()),
            ("run.samples".to_string(), self.run.samples.to_string()),
            ("output.format".to_string(), self.output.format.clone()),
        ];
        pairs.sort();
        pairs
    }
}

/// Parse a rational angle `p/k` (or a bare integer `p`, meaning `p/1`).
pub fn parse_angle(text: &str) -> anyhow::Result<(i64, u64)> {
    let trimmed = text.trim();
    if let Some((num, den)) = trimmed.split_once('/') {
        let p: i64 = num.trim().parse().context("numerator")?;
        let k: u64 = den.trim().parse().context("denominator")?;
        if k == 0 {
            bail!("denominator must be positive");
        }
        Ok((p, k))
    } else {
        let p: i64 = trimmed.parse().context("angle fraction")?;
        Ok((p, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.run.suite, "all");
    }

    #[test]
    fn parse_full_document() {
        let text = r#"
[grid]
m = 4
fiber_dim = 2
total_mass = 2.0

[kernel]
q_angle = "1/4"
eta = 0.1

[fock]
max_level = 4

[model]
eta = 1.0
kappa = 2.0
t_block = [[0.9, 0.25], [0.25, 0.5]]

[run]
suite = "density"
seed = 7
samples = 1000

[output]
dir = "out"
format = "csv"
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.grid.m, 4);
        assert_eq!(cfg.model.t_block.as_ref().unwrap().len(), 2);
        let grid = cfg.build_grid().unwrap();
        assert_eq!(grid.n_sites(), 8);
        let kernel = cfg.build_kernel().unwrap();
        assert!((kernel.q() - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((kernel.eta() - 0.1).abs() < 1e-15);
        cfg.build_kpair(&grid).unwrap();
    }

    #[test]
    fn rejects_named_fields() {
        let bad = ExperimentConfig {
            run: RunSection {
                suite: "nope".into(),
                ..Default::default()
            },
            ..Default::default()
        };
        let err = bad.validate().unwrap_err().to_string();
        assert!(err.contains("run.suite"), "{err}");

        let bad = ExperimentConfig {
            grid: GridSection {
                m: 0,
                ..Default::default()
            },
            ..Default::default()
        };
        let err = bad.validate().unwrap_err().to_string();
        assert!(err.contains("grid.m"), "{err}");
    }

    #[test]
    fn angle_forms() {
        assert_eq!(parse_angle("1/3").unwrap(), (1, 3));
        assert_eq!(parse_angle("-2/5").unwrap(), (-2, 5));
        assert_eq!(parse_angle("0").unwrap(), (0, 1));
        assert!(parse_angle("x/y").is_err());
        assert!(parse_angle("1/0").is_err());
    }
}
