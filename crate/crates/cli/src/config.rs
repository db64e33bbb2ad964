//! Flag and config-file handling. A config file is a JSON object whose keys
//! are the long flag names with `-` replaced by `_`; flags override it.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use netgame_core::games::{parse_rational, GameInstance, UbbcInstance, UcInstance};
use netgame_core::Rational;
use serde::Deserialize;

use crate::output::Failure;
use crate::Global;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Uc,
    Ubbc,
}

impl GameKind {
    pub fn name(self) -> &'static str {
        match self {
            GameKind::Uc => "uc",
            GameKind::Ubbc => "ubbc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Alpha,
    K,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KRule {
    /// k = ceil((n-1)/4)
    Quarter,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Int(v) => v.to_string(),
            Scalar::Text(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Values {
    List(Vec<Scalar>),
    Text(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    game: Option<GameKind>,
    n: Option<usize>,
    k: Option<usize>,
    alpha: Option<Scalar>,
    budgets: Option<Vec<usize>>,
    out: Option<PathBuf>,
    format: Option<Format>,
    cap: Option<u64>,
    seed: Option<u64>,
    pub name: Option<String>,
    profile: Option<serde_json::Value>,
    pub random: Option<bool>,
    pub axis: Option<Axis>,
    values: Option<Values>,
    pub k_rule: Option<KRule>,
    density: Option<Scalar>,
    offset: Option<Scalar>,
    pub no_prune_parallel: Option<bool>,
    pub no_prune_disconnected: Option<bool>,
    pub profiles: Option<bool>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Inline JSON for an embedded profile object, the string otherwise.
    pub fn profile_source(&self) -> Option<String> {
        self.profile.as_ref().map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
    }

    pub fn values_text(&self) -> Option<String> {
        self.values.as_ref().map(|v| match v {
            Values::Text(t) => t.clone(),
            Values::List(items) => items.iter().map(Scalar::text).collect::<Vec<_>>().join(","),
        })
    }

    pub fn density_text(&self) -> Option<String> {
        self.density.as_ref().map(Scalar::text)
    }

    pub fn offset_text(&self) -> Option<String> {
        self.offset.as_ref().map(Scalar::text)
    }

    pub fn merge_global(&self, flags: &Global) -> Result<Settings, Failure> {
        let alpha = match flags
            .alpha
            .clone()
            .or(self.alpha.as_ref().map(Scalar::text))
        {
            Some(text) => Some(parse_rational(&text)?),
            None => None,
        };
        Ok(Settings {
            game: flags.game.or(self.game),
            n: flags.n.or(self.n),
            k: flags.k.or(self.k),
            alpha,
            budgets: flags.budgets.clone().or(self.budgets.clone()),
            out: flags.out.clone().or(self.out.clone()),
            format: flags.format.or(self.format),
            cap: flags.cap.or(self.cap),
            seed: flags.seed.or(self.seed).unwrap_or(0),
        })
    }
}

/// Global parameters after merging flags over the config file.
#[derive(Debug, Clone)]
pub struct Settings {
    pub game: Option<GameKind>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub alpha: Option<Rational>,
    pub budgets: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub cap: Option<u64>,
    pub seed: u64,
}

impl Settings {
    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn require_n(&self) -> Result<usize, Failure> {
        self.n
            .ok_or_else(|| Failure::Usage("--n is required".into()))
    }

    /// The game instance described by the flags. `n` may come from elsewhere
    /// (a profile), in which case it must agree with `--n` when both exist.
    pub fn instance(&self, n: Option<usize>) -> Result<GameInstance, Failure> {
        let n = match (self.n, n) {
            (Some(a), Some(b)) if a != b => {
                return Err(Failure::Usage(format!(
                    "--n {a} disagrees with the profile's n = {b}"
                )))
            }
            (a, b) => a.or(b).or(self.budgets.as_ref().map(Vec::len)),
        };
        let n = n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
        let game = self
            .game
            .ok_or_else(|| Failure::Usage("--game is required (uc or ubbc)".into()))?;
        Ok(match game {
            GameKind::Uc => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| Failure::Usage("--alpha is required for uc".into()))?;
                UcInstance::new(n, alpha)?.into()
            }
            GameKind::Ubbc => {
                let budgets = match (&self.budgets, self.k) {
                    (Some(b), _) => {
                        if b.len() != n {
                            return Err(Failure::Usage(format!("{} budgets for n = {n}", b.len())));
                        }
                        b.clone()
                    }
                    (None, Some(k)) => vec![k; n],
                    (None, None) => {
                        return Err(Failure::Usage("ubbc needs --k or --budgets".into()))
                    }
                };
                UbbcInstance::new(budgets)?.into()
            }
        })
    }
}
