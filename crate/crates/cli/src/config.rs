//! TOML experiment configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use gapshift::{BaseRegistry, GappedSubshiftSpec, Limits, Observable, ObservableRegistry, Tau};
use serde::Deserialize;

/// Malformed or invalid configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSection {
    pub tau: String,
    pub base: toml::Table,
}

impl Default for SpecSection {
    fn default() -> Self {
        let mut base = toml::Table::new();
        base.insert("kind".into(), "full".into());
        base.insert("size".into(), 1.into());
        SpecSection {
            tau: "1".into(),
            base,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ranges {
    pub n_max: usize,
    pub period_max: usize,
    /// `m` in `ε = 2^{-m}`; `-1` selects `ε ≥ 2`.
    pub precision: i64,
}

impl Default for Ranges {
    fn default() -> Self {
        Ranges {
            n_max: 12,
            period_max: 10,
            precision: 2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: "out".into() }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub max_states: usize,
    pub max_enumeration: u64,
    pub budget_secs: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        let l = Limits::default();
        Caps {
            max_states: l.max_states,
            max_enumeration: l.max_enumeration,
            budget_secs: None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spec: SpecSection,
    pub ranges: Ranges,
    pub observable: Option<toml::Table>,
    pub output: OutputSection,
    pub caps: Caps,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), ConfigError> {
        let bytes =
            std::fs::read(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| ConfigError(e.to_string()))?;
        Ok((ExperimentConfig::parse(text)?, bytes))
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.caps.max_states == 0
            || self.caps.max_enumeration == 0
            || self.caps.budget_secs == Some(0)
        {
            return Err(ConfigError("caps must be positive".into()));
        }
        if self.ranges.precision < -1 {
            return Err(ConfigError("precision must be ≥ -1".into()));
        }
        self.tau()?;
        Ok(())
    }

    pub fn tau(&self) -> Result<Tau, ConfigError> {
        Tau::parse(&self.spec.tau).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn limits(&self) -> Limits {
        let l = Limits {
            max_states: self.caps.max_states,
            max_enumeration: self.caps.max_enumeration,
            deadline: None,
        };
        match self.caps.budget_secs {
            Some(s) => l.with_budget(Duration::from_secs(s)),
            None => l,
        }
    }

    pub fn build_spec(&self) -> Result<GappedSubshiftSpec, ConfigError> {
        let base = BaseRegistry::with_builtins()
            .build(&self.spec.base, &self.limits())
            .map_err(|e| ConfigError(format!("spec.base: {e}")))?;
        GappedSubshiftSpec::new(Arc::clone(&base), self.tau()?)
            .map_err(|e| ConfigError(e.to_string()))
    }

    /// The configured observable, or `default_kind` when the section is absent.
    pub fn build_observable(
        &self,
        spec: &GappedSubshiftSpec,
        default_kind: &str,
    ) -> Result<Observable, ConfigError> {
        let table = self.observable.clone().unwrap_or_else(|| {
            let mut t = toml::Table::new();
            t.insert("kind".into(), default_kind.into());
            t
        });
        ObservableRegistry::with_builtins()
            .build(&table, spec.ambient_size())
            .map_err(|e| ConfigError(format!("observable: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_binary_tau_one() {
        let cfg = ExperimentConfig::parse("").unwrap();
        let spec = cfg.build_spec().unwrap();
        assert_eq!(spec.ambient_size(), 2);
        assert_eq!(spec.tau(), Tau::integer(1));
    }

    #[test]
    fn full_config() {
        let cfg = ExperimentConfig::parse(
            r#"
            [spec]
            tau = "2/3"
            [spec.base]
            kind = "sft"
            size = 2
            forbidden = ["1 1"]
            [ranges]
            n_max = 5
            precision = -1
            [observable]
            kind = "constant"
            value = "1/3"
            [caps]
            max_states = 1000
            budget_secs = 10
            "#,
        )
        .unwrap();
        let spec = cfg.build_spec().unwrap();
        assert_eq!(spec.base().kind(), "sft");
        assert!(cfg.build_observable(&spec, "chi0").is_ok());
        assert!(cfg.limits().deadline.is_some());
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "[spec]\ntau = \"2/0\"\n[spec.base]\nkind = \"full\"\nsize = 1",
            "[spec]\ntau = \"0.5\"\n[spec.base]\nkind = \"full\"\nsize = 1",
            "[caps]\nmax_states = 0",
            "[ranges]\nprecision = -2",
            "[bogus]\nx = 1",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
        let cfg =
            ExperimentConfig::parse("[spec]\ntau = \"1\"\n[spec.base]\nkind = \"nope\"").unwrap();
        assert!(cfg.build_spec().is_err());
    }
}
