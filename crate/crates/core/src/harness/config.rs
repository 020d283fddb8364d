use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::decision::{DecisionConfig, PolicyKind};
use crate::engine::{EngineConfig, Team};
use crate::formation::REGISTERED_FORMATIONS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TeamConfig {
    pub formation: String,
    pub policy: PolicyKind,
    pub decision: DecisionConfig,
}

impl TeamConfig {
    pub fn new(policy: PolicyKind) -> Self {
        TeamConfig {
            policy,
            ..TeamConfig::default()
        }
    }
}

impl Default for TeamConfig {
    fn default() -> Self {
        TeamConfig {
            formation: "4-4-2".into(),
            policy: PolicyKind::Model,
            decision: DecisionConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub trace: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// Everything that determines a match. Two runs with equal configs produce
/// identical traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchConfig {
    pub seed: u64,
    pub cycles: u64,
    /// Overrides `engine.noise` when set.
    pub noise: Option<bool>,
    pub engine: EngineConfig,
    pub home: TeamConfig,
    pub away: TeamConfig,
    /// Codebook file; the bundled book is used when absent.
    pub codebook: Option<PathBuf>,
    pub output: OutputPaths,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            seed: 0,
            cycles: 6000,
            noise: None,
            engine: EngineConfig::default(),
            home: TeamConfig::new(PolicyKind::Model),
            away: TeamConfig::new(PolicyKind::RandomWalk),
            codebook: None,
            output: OutputPaths::default(),
        }
    }
}

impl MatchConfig {
    pub fn from_toml_str(text: &str) -> Result<MatchConfig, HarnessError> {
        let cfg: MatchConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<MatchConfig, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        MatchConfig::from_toml_str(&text)
    }

    pub fn team(&self, team: Team) -> &TeamConfig {
        match team {
            Team::Home => &self.home,
            Team::Away => &self.away,
        }
    }

    /// Engine parameters with the noise override applied.
    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            noise: self.noise.unwrap_or(self.engine.noise),
            ..self.engine
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.cycles == 0 {
            return Err(HarnessError::Config("cycles must be at least 1".into()));
        }
        self.engine_config().validate()?;
        for team in Team::BOTH {
            let t = self.team(team);
            if !REGISTERED_FORMATIONS.contains(&t.formation.as_str()) {
                return Err(HarnessError::Config(format!(
                    "unknown formation {:?} for {team:?}; registered: {}",
                    t.formation,
                    REGISTERED_FORMATIONS.join(", ")
                )));
            }
            t.decision
                .validate()
                .map_err(|e| HarnessError::Config(format!("{team:?}: {e}")))?;
        }
        Ok(())
    }
}
