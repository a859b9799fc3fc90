use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use grover_coherence::engine::StageMask;
use grover_coherence::model::{optimal_iterations, ConfigFile};
use grover_coherence::{make_config, AlphaParam, GroverConfig, TargetSpec};
use serde::Serialize;

use crate::InvalidInput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// n=16, targets {0, 1}
    Example1,
    /// both example2 scenarios
    Example2,
    /// n=18, subcube pattern 0...0**
    Example2Product,
    /// n=18, targets {0, 3, 5, 6}
    Example2Entangled,
}

impl Preset {
    fn expand(self) -> Vec<(&'static str, u32, TargetSpec)> {
        let product = ("example2-product", 18, TargetSpec::Pattern(format!("{}**", "0".repeat(16))));
        let entangled = ("example2-entangled", 18, TargetSpec::Indices(vec![0, 3, 5, 6]));
        match self {
            Preset::Example1 => vec![("example1", 16, TargetSpec::Indices(vec![0, 1]))],
            Preset::Example2 => vec![product, entangled],
            Preset::Example2Product => vec![product],
            Preset::Example2Entangled => vec![entangled],
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    /// Named scenario
    #[arg(long, value_enum, conflicts_with_all = ["n", "targets", "pattern", "config"])]
    pub preset: Option<Preset>,
    /// Number of qubits
    #[arg(long)]
    pub n: Option<u32>,
    /// Comma-separated target indices (requires --n)
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["pattern", "config"])]
    pub targets: Option<Vec<u64>>,
    /// Target pattern over {0,1,*}, most significant qubit first
    #[arg(long, conflicts_with = "config")]
    pub pattern: Option<String>,
    /// JSON config file: {"n": .., "targets": {"pattern": ..} | {"indices": [..]}}
    #[arg(long, conflicts_with = "n")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Tsallis parameter in (0, 2]; repeatable. 1 selects the relative entropy limit.
    #[arg(long = "alpha", value_parser = parse_alpha, default_values_t = [AlphaParam::new(2.0).unwrap(), AlphaParam::new(1.5).unwrap()])]
    pub alphas: Vec<AlphaParam>,
    /// Last iteration index (default: the optimal iteration count)
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Permit --kmax beyond twice the optimal iteration count
    #[arg(long)]
    pub allow_overshoot: bool,
}

pub fn parse_alpha(s: &str) -> std::result::Result<AlphaParam, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    AlphaParam::try_from(v).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(serialize_with = "serialize_config")]
    pub config: GroverConfig,
    pub alphas: Vec<AlphaParam>,
    pub k_max: usize,
    pub k_opt: usize,
    #[serde(skip)]
    pub captures: StageMask,
    pub outputs: Vec<String>,
}

fn serialize_config<S: serde::Serializer>(c: &GroverConfig, s: S) -> std::result::Result<S::Ok, S::Error> {
    c.to_file().serialize(s)
}

impl TargetArgs {
    pub fn resolve(&self) -> Result<Vec<(String, GroverConfig)>> {
        let invalid = |e: grover_coherence::Error| anyhow::Error::new(InvalidInput(e.to_string()));
        if let Some(p) = self.preset {
            return p
                .expand()
                .into_iter()
                .map(|(name, n, spec)| Ok((name.to_string(), make_config(n, &spec).map_err(invalid)?)))
                .collect();
        }
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: ConfigFile = serde_json::from_str(&text)
                .map_err(|e| InvalidInput(format!("{}: {e}", path.display())))?;
            let config = file.build().map_err(invalid)?;
            return Ok(vec![(custom_name(&config), config)]);
        }
        let config = match (&self.targets, &self.pattern, self.n) {
            (Some(t), None, Some(n)) => make_config(n, &TargetSpec::Indices(t.clone())),
            (Some(_), None, None) => bail!(InvalidInput("--targets requires --n".into())),
            (None, Some(p), n) => make_config(n.unwrap_or(p.chars().count() as u32), &TargetSpec::Pattern(p.clone())),
            _ => bail!(InvalidInput("give --preset, --config, --pattern, or --n with --targets".into())),
        }
        .map_err(invalid)?;
        Ok(vec![(custom_name(&config), config)])
    }
}

fn custom_name(config: &GroverConfig) -> String {
    format!("n{}_t{}", config.qubits(), config.target_count())
}

impl ScenarioArgs {
    pub fn scenarios(&self, captures: StageMask, outputs: &[&str]) -> Result<Vec<ScenarioSpec>> {
        if self.alphas.is_empty() {
            bail!(InvalidInput("at least one --alpha is required".into()));
        }
        let mut alphas = Vec::new();
        for a in &self.alphas {
            if !alphas.contains(a) {
                alphas.push(*a);
            }
        }
        self.target
            .resolve()?
            .into_iter()
            .map(|(name, config)| {
                let k_opt = optimal_iterations(&config);
                let k_max = self.kmax.unwrap_or(k_opt);
                if k_max > 2 * k_opt && !self.allow_overshoot {
                    bail!(InvalidInput(format!(
                        "--kmax {k_max} exceeds twice the optimal count {k_opt}; pass --allow-overshoot"
                    )));
                }
                Ok(ScenarioSpec {
                    name,
                    config,
                    alphas: alphas.clone(),
                    k_max,
                    k_opt,
                    captures,
                    outputs: outputs.iter().map(|s| s.to_string()).collect(),
                })
            })
            .collect()
    }
}
