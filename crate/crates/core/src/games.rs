//! UC and UBBC game instances and their cost functions.

use std::fmt;

use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::graph::{all_pairs_distances, induce_graph, Agent, InducedGraph, StrategyProfile};
use crate::{Error, Extended, Rational, Result};

/// An individual or social cost; `Infinite` when some pair is disconnected.
pub type Cost = Extended<Rational>;

/// `<N, α>`: every built edge costs `alpha` on top of the usage cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UcInstance {
    n: usize,
    alpha: Rational,
}

impl UcInstance {
    pub fn new(n: usize, alpha: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("UC needs n >= 2, got {n}")));
        }
        if alpha <= Rational::zero() {
            return Err(Error::Argument(format!("UC needs alpha > 0, got {alpha}")));
        }
        Ok(UcInstance { n, alpha })
    }

    /// Skips the `alpha > 0` check so tests can compare against pure usage cost.
    #[cfg(test)]
    pub(crate) fn with_any_alpha(n: usize, alpha: Rational) -> Self {
        UcInstance { n, alpha }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }
}

/// `<N, k>`: agent `i` may build at most `budgets[i]` edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UbbcInstance {
    budgets: Vec<usize>,
}

impl UbbcInstance {
    pub fn new(budgets: Vec<usize>) -> Result<Self> {
        if budgets.len() < 2 {
            return Err(Error::Argument(format!(
                "UBBC needs n >= 2, got {}",
                budgets.len()
            )));
        }
        if let Some(i) = budgets.iter().position(|&k| k == 0) {
            return Err(Error::Argument(format!("agent {i} has a zero budget")));
        }
        Ok(UbbcInstance { budgets })
    }

    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        UbbcInstance::new(vec![k; n])
    }

    pub fn n(&self) -> usize {
        self.budgets.len()
    }

    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn budget(&self, i: Agent) -> usize {
        self.budgets[i]
    }

    /// `Some(k)` when every agent has the same budget `k`.
    pub fn uniform_budget(&self) -> Option<usize> {
        let k = self.budgets[0];
        self.budgets.iter().all(|&b| b == k).then_some(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GameInstance {
    Uc(UcInstance),
    Ubbc(UbbcInstance),
}

impl From<UcInstance> for GameInstance {
    fn from(inst: UcInstance) -> Self {
        GameInstance::Uc(inst)
    }
}

impl From<UbbcInstance> for GameInstance {
    fn from(inst: UbbcInstance) -> Self {
        GameInstance::Ubbc(inst)
    }
}

impl GameInstance {
    pub fn n(&self) -> usize {
        match self {
            GameInstance::Uc(g) => g.n(),
            GameInstance::Ubbc(g) => g.n(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GameInstance::Uc(_) => "uc",
            GameInstance::Ubbc(_) => "ubbc",
        }
    }

    /// Largest strategy agent `i` may play.
    pub fn max_links(&self, i: Agent) -> usize {
        match self {
            GameInstance::Uc(g) => g.n() - 1,
            GameInstance::Ubbc(g) => g.budget(i).min(g.n() - 1),
        }
    }

    /// Per-edge construction cost (zero in UBBC).
    pub fn edge_price(&self) -> Rational {
        match self {
            GameInstance::Uc(g) => g.alpha(),
            GameInstance::Ubbc(_) => Rational::zero(),
        }
    }

    pub fn cost(&self, profile: &StrategyProfile) -> Result<CostVector> {
        match self {
            GameInstance::Uc(g) => uc_cost(g, profile),
            GameInstance::Ubbc(g) => ubbc_cost(g, profile),
        }
    }

    /// Checks agent count and, for UBBC, budget feasibility.
    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        check_n(self.n(), profile)?;
        if let GameInstance::Ubbc(g) = self {
            check_feasible(g, profile)?;
        }
        Ok(())
    }

    /// Uniformly random strategy sizes, then uniformly random members.
    pub fn random_profile<R: Rng + ?Sized>(&self, rng: &mut R) -> StrategyProfile {
        let n = self.n();
        let strategies = (0..n)
            .map(|i| {
                let size = rng.gen_range(0..=self.max_links(i));
                let mut s: Vec<Agent> = sample(rng, n - 1, size)
                    .into_iter()
                    .map(|j| if j >= i { j + 1 } else { j })
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        StrategyProfile::new(n, strategies).expect("sampled strategies are valid")
    }
}

impl fmt::Display for GameInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameInstance::Uc(g) => write!(f, "uc(n={}, alpha={})", g.n, g.alpha),
            GameInstance::Ubbc(g) => match g.uniform_budget() {
                Some(k) => write!(f, "ubbc(n={}, k={k})", g.n()),
                None => write!(f, "ubbc(budgets={:?})", g.budgets),
            },
        }
    }
}

// {"game":"uc","n":N,"alpha":"p/q"} / {"game":"ubbc","n":N,"budgets":[...]}
impl Serialize for GameInstance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("game", self.name())?;
        map.serialize_entry("n", &self.n())?;
        match self {
            GameInstance::Uc(g) => map.serialize_entry("alpha", &g.alpha.to_string())?,
            GameInstance::Ubbc(g) => map.serialize_entry("budgets", &g.budgets)?,
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    game: String,
    n: usize,
    alpha: Option<RationalRepr>,
    budgets: Option<Vec<usize>>,
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let parsed: Rational = text
        .trim()
        .parse()
        .map_err(|_| Error::Argument(format!("not a rational: {text:?}")))?;
    Ok(parsed)
}

impl<'de> Deserialize<'de> for GameInstance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawInstance::deserialize(deserializer)?;
        let inst = match raw.game.as_str() {
            "uc" => {
                let alpha = match raw.alpha {
                    Some(RationalRepr::Int(a)) => Rational::from_integer(a),
                    Some(RationalRepr::Text(t)) => parse_rational(&t).map_err(de::Error::custom)?,
                    None => return Err(de::Error::missing_field("alpha")),
                };
                UcInstance::new(raw.n, alpha).map(GameInstance::Uc)
            }
            "ubbc" => {
                let budgets = raw.budgets.ok_or_else(|| de::Error::missing_field("budgets"))?;
                if budgets.len() != raw.n {
                    return Err(de::Error::custom(format!(
                        "{} budgets for n = {}",
                        budgets.len(),
                        raw.n
                    )));
                }
                UbbcInstance::new(budgets).map(GameInstance::Ubbc)
            }
            other => return Err(de::Error::unknown_variant(other, &["uc", "ubbc"])),
        };
        inst.map_err(de::Error::custom)
    }
}

/// Per-agent costs and their (saturating) sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVector {
    costs: Vec<Cost>,
    social: Cost,
}

impl CostVector {
    pub fn new(costs: Vec<Cost>) -> Self {
        let social = costs.iter().copied().sum();
        CostVector { costs, social }
    }

    pub fn from_rationals(values: impl IntoIterator<Item = Rational>) -> Self {
        CostVector::new(values.into_iter().map(Extended::Finite).collect())
    }

    pub fn costs(&self) -> &[Cost] {
        &self.costs
    }

    pub fn social(&self) -> Cost {
        self.social
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn max(&self) -> Option<Cost> {
        self.costs.iter().copied().max()
    }

    pub fn min(&self) -> Option<Cost> {
        self.costs.iter().copied().min()
    }
}

/// `Σ_i c_i`, saturating at `Infinite`.
pub fn social_cost(cv: &CostVector) -> Cost {
    cv.social()
}

fn check_n(n: usize, profile: &StrategyProfile) -> Result<()> {
    if profile.n() != n {
        return Err(Error::Structural(format!(
            "profile has {} agents, instance has {n}",
            profile.n()
        )));
    }
    Ok(())
}

fn check_feasible(inst: &UbbcInstance, profile: &StrategyProfile) -> Result<()> {
    for i in 0..inst.n() {
        let declared = profile.strategy(i).len();
        if declared > inst.budget(i) {
            return Err(Error::Infeasible {
                agent: i,
                declared,
                budget: inst.budget(i),
            });
        }
    }
    Ok(())
}

/// True iff `|s_i| <= k_i` for every agent.
pub fn feasible(inst: &UbbcInstance, profile: &StrategyProfile) -> bool {
    profile.n() == inst.n() && check_feasible(inst, profile).is_ok()
}

/// Sum of shortest-path distances from each agent.
pub fn usage_costs(graph: &InducedGraph) -> Vec<Extended<u64>> {
    let d = all_pairs_distances(graph);
    (0..graph.n()).map(|i| d.row_sum(i)).collect()
}

fn usage_to_cost(u: Extended<u64>) -> Cost {
    u.map(|v| Rational::from_integer(v as i64))
}

/// `c_i(s) = α|s_i| + Σ_j ℓ(i, j)`.
pub fn uc_cost(inst: &UcInstance, profile: &StrategyProfile) -> Result<CostVector> {
    check_n(inst.n, profile)?;
    let usage = usage_costs(&induce_graph(profile));
    let costs = usage
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            let build = inst.alpha * Rational::from_integer(profile.strategy(i).len() as i64);
            Extended::Finite(build) + usage_to_cost(u)
        })
        .collect();
    Ok(CostVector::new(costs))
}

/// `c_i(s) = Σ_{j≠i} ℓ(i, j)`; the profile must respect the budgets.
pub fn ubbc_cost(inst: &UbbcInstance, profile: &StrategyProfile) -> Result<CostVector> {
    check_n(inst.n(), profile)?;
    check_feasible(inst, profile)?;
    let usage = usage_costs(&induce_graph(profile));
    Ok(CostVector::new(usage.into_iter().map(usage_to_cost).collect()))
}
