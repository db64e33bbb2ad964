//! Generators for the named equilibrium profiles, each paired with the cost
//! prediction its closed form gives.

use std::fmt;

use crate::games::{GameInstance, UbbcInstance, UcInstance};
use crate::graph::{Agent, StrategyProfile};
use crate::{Error, Rational, Result};

/// Agents sharing one predicted cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tier {
    pub name: &'static str,
    pub agents: Vec<Agent>,
    pub cost: Rational,
}

/// Closed-form costs of a construction, for comparing against evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prediction {
    pub tiers: Vec<Tier>,
    pub ratio: Rational,
    pub social_cost: Rational,
}

impl Prediction {
    fn from_tiers(tiers: Vec<Tier>) -> Self {
        let tiers: Vec<Tier> = tiers.into_iter().filter(|t| !t.agents.is_empty()).collect();
        let max = tiers.iter().map(|t| t.cost).max().expect("some tier is populated");
        let min = tiers.iter().map(|t| t.cost).min().expect("some tier is populated");
        let social_cost = tiers
            .iter()
            .map(|t| t.cost * Rational::from_integer(t.agents.len() as i64))
            .sum();
        Prediction {
            tiers,
            ratio: max / min,
            social_cost,
        }
    }

    /// Predicted cost of agent `i`.
    pub fn cost_of(&self, i: Agent) -> Option<Rational> {
        self.tiers
            .iter()
            .find(|t| t.agents.contains(&i))
            .map(|t| t.cost)
    }
}

/// Roles in a star centred on agent 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarPartition {
    pub center: Agent,
    /// Leaves that pay for their own edge.
    pub buyers: Vec<Agent>,
    /// Leaves whose edge the center pays for.
    pub freeloaders: Vec<Agent>,
    /// Number of edges the center buys.
    pub k: usize,
}

/// Cost tiers of the general wind turbine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurbineTiers {
    pub minimum: Vec<Agent>,
    pub intermediate: Vec<Agent>,
    pub maximum: Vec<Agent>,
    /// Predicted costs `(n−1, 2(n−k−1), 2(n−1)−k)`.
    pub costs: [u64; 3],
}

fn int(v: usize) -> Rational {
    Rational::from_integer(v as i64)
}

fn circulant(n: usize, k: usize) -> Vec<Vec<Agent>> {
    (0..n)
        .map(|i| (1..=k).map(|d| (i + d) % n).collect())
        .collect()
}

fn profile(n: usize, strategies: Vec<Vec<Agent>>) -> StrategyProfile {
    StrategyProfile::new(n, strategies).expect("constructions emit valid profiles")
}

fn require(ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Argument(message()))
    }
}

/// Complete graph with ownership spread as evenly as possible. Odd `n` uses
/// the circulant `s_i = {i+1, …, i+(n−1)/2}`; even `n` adds the diameter
/// pairs `{i, i+n/2}`, bought by the lower half.
pub fn complete_balanced(n: usize) -> Result<StrategyProfile> {
    require(n >= 3, || format!("complete-balanced needs n >= 3, got {n}"))?;
    let mut s = circulant(n, (n - 1) / 2);
    if n.is_multiple_of(2) {
        for (i, si) in s.iter_mut().enumerate().take(n / 2) {
            si.push(i + n / 2);
        }
    }
    Ok(profile(n, s))
}

/// Complete graph where agent 0 buys all its edges, agent 1 buys none and
/// agent `i ≥ 2` buys `{1, …, i−1}`.
pub fn complete_max_ownership(n: usize) -> Result<StrategyProfile> {
    require(n >= 3, || format!("complete-max needs n >= 3, got {n}"))?;
    let s = (0..n)
        .map(|i| match i {
            0 => (1..n).collect(),
            _ => (1..i).collect(),
        })
        .collect();
    Ok(profile(n, s))
}

/// Star on agent 0 where the center buys the edges to agents `1..=k` and
/// every other leaf buys its own.
pub fn star(n: usize, k: usize) -> Result<(StrategyProfile, StarPartition)> {
    require(n >= 3, || format!("star needs n >= 3, got {n}"))?;
    require(k < n, || format!("the center buys at most n-1 = {} edges, got k={k}", n - 1))?;
    let mut s = vec![Vec::new(); n];
    s[0] = (1..=k).collect();
    for si in s.iter_mut().skip(k + 1) {
        si.push(0);
    }
    let partition = StarPartition {
        center: 0,
        buyers: (k + 1..n).collect(),
        freeloaders: (1..=k).collect(),
        k,
    };
    Ok((profile(n, s), partition))
}

/// Smallest budget accepted by [`equality_cycle`].
pub fn equality_min_budget(n: usize) -> usize {
    n.saturating_sub(1).div_ceil(4)
}

/// `s_i = {i+1, …, i+k} mod n`: every agent ends up with the same cost.
pub fn equality_cycle(n: usize, k: usize) -> Result<StrategyProfile> {
    require(n >= 3, || format!("equality-cycle needs n >= 3, got {n}"))?;
    let min = equality_min_budget(n).max(1);
    require(k >= min, || format!("equality-cycle needs k >= ceil((n-1)/4) = {min}, got k={k}"))?;
    require(k < n, || format!("equality-cycle needs k <= n-1 = {}, got k={k}", n - 1))?;
    Ok(profile(n, circulant(n, k)))
}

/// Agent 0 at the hub, `0 → 1 → 2 → 0` as the nacelle and every other agent
/// a blade linking to the hub.
pub fn wind_turbine(n: usize) -> Result<StrategyProfile> {
    require(n >= 4, || format!("wind-turbine needs n >= 4, got {n}"))?;
    general_wind_turbine(n, 1).map(|(p, _)| p)
}

/// The three-step general wind turbine with uniform budget `k`.
pub fn general_wind_turbine(n: usize, k: usize) -> Result<(StrategyProfile, TurbineTiers)> {
    require(k >= 1, || "general-wind-turbine needs k >= 1".to_string())?;
    require(2 * k < n, || {
        format!("general-wind-turbine needs k <= (n-1)/2, got n={n}, k={k}")
    })?;
    let mut s = vec![Vec::new(); n];
    for (i, si) in s.iter_mut().enumerate() {
        *si = if i <= k {
            (i + 1..=i + k).collect()
        } else if i < 2 * k {
            (0..i - k).chain(i + 1..=2 * k).collect()
        } else {
            (0..k).collect()
        };
    }
    let (nn, kk) = (n as u64, k as u64);
    let tiers = TurbineTiers {
        minimum: (0..k).collect(),
        intermediate: (k..=2 * k).collect(),
        maximum: (2 * k + 1..n).collect(),
        costs: [nn - 1, 2 * (nn - kk - 1), 2 * (nn - 1) - kk],
    };
    Ok((profile(n, s), tiers))
}

/// A named construction with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionSpec {
    CompleteBalanced { n: usize },
    CompleteMax { n: usize },
    Star { n: usize, k: usize },
    EqualityCycle { n: usize, k: usize },
    WindTurbine { n: usize },
    GeneralWindTurbine { n: usize, k: usize },
}

/// A built construction: the game it lives in, the profile and its
/// predicted costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub instance: GameInstance,
    pub profile: StrategyProfile,
    pub prediction: Prediction,
}

impl ConstructionSpec {
    pub const NAMES: [&'static str; 6] = [
        "complete-balanced",
        "complete-max",
        "star",
        "equality-cycle",
        "wind-turbine",
        "general-wind-turbine",
    ];

    /// Parses a CLI name; `k` is required by the budgeted constructions and
    /// the star.
    pub fn from_name(name: &str, n: usize, k: Option<usize>) -> Result<Self> {
        let need_k = || Error::Argument(format!("{name} needs --k"));
        Ok(match name {
            "complete-balanced" => ConstructionSpec::CompleteBalanced { n },
            "complete-max" => ConstructionSpec::CompleteMax { n },
            "star" => ConstructionSpec::Star {
                n,
                k: k.ok_or_else(need_k)?,
            },
            "equality-cycle" => ConstructionSpec::EqualityCycle {
                n,
                k: k.ok_or_else(need_k)?,
            },
            "wind-turbine" => ConstructionSpec::WindTurbine { n },
            "general-wind-turbine" => ConstructionSpec::GeneralWindTurbine {
                n,
                k: k.ok_or_else(need_k)?,
            },
            other => {
                return Err(Error::Argument(format!(
                    "unknown construction {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConstructionSpec::CompleteBalanced { .. } => "complete-balanced",
            ConstructionSpec::CompleteMax { .. } => "complete-max",
            ConstructionSpec::Star { .. } => "star",
            ConstructionSpec::EqualityCycle { .. } => "equality-cycle",
            ConstructionSpec::WindTurbine { .. } => "wind-turbine",
            ConstructionSpec::GeneralWindTurbine { .. } => "general-wind-turbine",
        }
    }

    /// `"uc"` or `"ubbc"`.
    pub fn game(&self) -> &'static str {
        match self {
            ConstructionSpec::CompleteBalanced { .. }
            | ConstructionSpec::CompleteMax { .. }
            | ConstructionSpec::Star { .. } => "uc",
            _ => "ubbc",
        }
    }

    /// Builds the profile. UC constructions need `alpha`; UBBC ones ignore it.
    pub fn build(&self, alpha: Option<Rational>) -> Result<Construction> {
        let uc = |n: usize| -> Result<(UcInstance, Rational)> {
            let alpha = alpha.ok_or_else(|| {
                Error::Argument(format!("{} is a UC construction and needs --alpha", self.name()))
            })?;
            Ok((UcInstance::new(n, alpha)?, alpha))
        };
        let (instance, profile, tiers): (GameInstance, _, _) = match *self {
            ConstructionSpec::CompleteBalanced { n } => {
                let p = complete_balanced(n)?;
                let (inst, a) = uc(n)?;
                let big = n / 2;
                let tiers = if n % 2 == 1 {
                    vec![Tier {
                        name: "all",
                        agents: (0..n).collect(),
                        cost: int(n - 1) + a * int((n - 1) / 2),
                    }]
                } else {
                    vec![
                        Tier {
                            name: "heavy",
                            agents: (0..big).collect(),
                            cost: int(n - 1) + a * int(big),
                        },
                        Tier {
                            name: "light",
                            agents: (big..n).collect(),
                            cost: int(n - 1) + a * int(big - 1),
                        },
                    ]
                };
                (inst.into(), p, tiers)
            }
            ConstructionSpec::CompleteMax { n } => {
                let p = complete_max_ownership(n)?;
                let (inst, a) = uc(n)?;
                let tiers = (0..n)
                    .map(|i| Tier {
                        name: "agent",
                        agents: vec![i],
                        cost: int(n - 1) + a * int(p.strategy(i).len()),
                    })
                    .collect();
                (inst.into(), p, tiers)
            }
            ConstructionSpec::Star { n, k } => {
                let (p, part) = star(n, k)?;
                let (inst, a) = uc(n)?;
                let tiers = vec![
                    Tier {
                        name: "center",
                        agents: vec![part.center],
                        cost: int(n - 1) + a * int(k),
                    },
                    Tier {
                        name: "buyers",
                        agents: part.buyers,
                        cost: int(2 * n - 3) + a,
                    },
                    Tier {
                        name: "freeloaders",
                        agents: part.freeloaders,
                        cost: int(2 * n - 3),
                    },
                ];
                (inst.into(), p, tiers)
            }
            ConstructionSpec::EqualityCycle { n, k } => {
                let p = equality_cycle(n, k)?;
                // Degree 2k (capped at n−1) and diameter at most 2.
                let cost = int(2 * (n - 1) - (2 * k).min(n - 1));
                let tiers = vec![Tier {
                    name: "all",
                    agents: (0..n).collect(),
                    cost,
                }];
                (UbbcInstance::uniform(n, k)?.into(), p, tiers)
            }
            ConstructionSpec::WindTurbine { n } => {
                let p = wind_turbine(n)?;
                let tiers = vec![
                    Tier {
                        name: "hub",
                        agents: vec![0],
                        cost: int(n - 1),
                    },
                    Tier {
                        name: "nacelle",
                        agents: vec![1, 2],
                        cost: int(2 * n - 4),
                    },
                    Tier {
                        name: "blades",
                        agents: (3..n).collect(),
                        cost: int(2 * n - 3),
                    },
                ];
                (UbbcInstance::uniform(n, 1)?.into(), p, tiers)
            }
            ConstructionSpec::GeneralWindTurbine { n, k } => {
                let (p, t) = general_wind_turbine(n, k)?;
                let [lo, mid, hi] = t.costs.map(|c| Rational::from_integer(c as i64));
                let tiers = vec![
                    Tier {
                        name: "minimum",
                        agents: t.minimum,
                        cost: lo,
                    },
                    Tier {
                        name: "intermediate",
                        agents: t.intermediate,
                        cost: mid,
                    },
                    Tier {
                        name: "maximum",
                        agents: t.maximum,
                        cost: hi,
                    },
                ];
                (UbbcInstance::uniform(n, k)?.into(), p, tiers)
            }
        };
        let prediction = Prediction::from_tiers(tiers);
        Ok(Construction {
            spec: *self,
            instance,
            profile,
            prediction,
        })
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionSpec::CompleteBalanced { n }
            | ConstructionSpec::CompleteMax { n }
            | ConstructionSpec::WindTurbine { n } => write!(f, "{}(n={n})", self.name()),
            ConstructionSpec::Star { n, k }
            | ConstructionSpec::EqualityCycle { n, k }
            | ConstructionSpec::GeneralWindTurbine { n, k } => {
                write!(f, "{}(n={n},k={k})", self.name())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{diameter2_sufficient, is_nash};
    use crate::graph::{all_pairs_distances, has_parallel_declaration, induce_graph};
    use crate::metrics::inequality_ratio;
    use crate::Extended;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn check_prediction(c: &Construction) {
        let costs = c.instance.cost(&c.profile).unwrap();
        for i in 0..c.profile.n() {
            assert_eq!(
                costs.costs()[i],
                Extended::Finite(c.prediction.cost_of(i).unwrap()),
                "{} agent {i}",
                c.spec
            );
        }
        assert_eq!(costs.social(), Extended::Finite(c.prediction.social_cost));
        assert_eq!(inequality_ratio(&costs).unwrap(), c.prediction.ratio);
    }

    #[test]
    fn complete_graphs() {
        for n in 3..10 {
            for p in [complete_balanced(n).unwrap(), complete_max_ownership(n).unwrap()] {
                let g = induce_graph(&p);
                assert_eq!(g.edge_count(), n * (n - 1) / 2);
                assert!(!has_parallel_declaration(&p));
            }
        }
        let p = complete_balanced(4).unwrap();
        let sizes: Vec<_> = (0..4).map(|i| p.strategy(i).len()).collect();
        assert_eq!(sizes, vec![2, 2, 1, 1]);
        assert!((0..5).all(|i| complete_balanced(5).unwrap().strategy(i).len() == 2));
        assert!(complete_max_ownership(6).unwrap().strategy(1).is_empty());
        assert!(complete_balanced(2).is_err());
    }

    #[test]
    fn complete_predictions() {
        for n in 3..9 {
            for a in [q(1, 2), q(3, 1)] {
                check_prediction(&ConstructionSpec::CompleteBalanced { n }.build(Some(a)).unwrap());
                check_prediction(&ConstructionSpec::CompleteMax { n }.build(Some(a)).unwrap());
            }
        }
        let c = ConstructionSpec::CompleteMax { n: 3 }.build(Some(q(1, 2))).unwrap();
        assert_eq!(c.prediction.ratio, q(3, 2));
        let c = ConstructionSpec::CompleteBalanced { n: 4 }.build(Some(q(1, 1))).unwrap();
        assert_eq!(c.prediction.ratio, q(5, 4));
    }

    #[test]
    fn star_tiers() {
        let c = ConstructionSpec::Star { n: 10, k: 4 }.build(Some(q(2, 1))).unwrap();
        let costs: Vec<_> = c.prediction.tiers.iter().map(|t| t.cost).collect();
        assert_eq!(costs, vec![q(17, 1), q(19, 1), q(17, 1)]);
        check_prediction(&c);
        for n in [3, 5, 8] {
            for k in 0..n {
                check_prediction(&ConstructionSpec::Star { n, k }.build(Some(q(3, 2))).unwrap());
            }
        }
        assert!(star(5, 5).is_err());
    }

    #[test]
    fn star_is_nash_exactly_from_alpha_one() {
        for (a, expected) in [(q(1, 2), false), (q(1, 1), true), (q(3, 2), true), (q(2, 1), true), (q(3, 1), true)] {
            for k in [0, 2, 5] {
                let c = ConstructionSpec::Star { n: 6, k }.build(Some(a)).unwrap();
                assert_eq!(is_nash(&c.instance, &c.profile).unwrap(), expected, "alpha {a} k {k}");
            }
        }
    }

    #[test]
    fn equality_cycles() {
        for (n, k, cost) in [(8, 2, 10), (5, 1, 6), (9, 2, 12)] {
            let c = ConstructionSpec::EqualityCycle { n, k }.build(None).unwrap();
            assert_eq!(c.prediction.tiers[0].cost, q(cost, 1));
            check_prediction(&c);
            let inst = UbbcInstance::uniform(n, k).unwrap();
            assert!(diameter2_sufficient(&inst, &c.profile).unwrap());
        }
        let err = equality_cycle(8, 1).unwrap_err();
        assert!(err.to_string().contains("ceil((n-1)/4) = 2"), "{err}");
    }

    #[test]
    fn turbines() {
        let c = ConstructionSpec::WindTurbine { n: 6 }.build(None).unwrap();
        assert_eq!(c.prediction.ratio, q(9, 5));
        check_prediction(&c);
        assert_eq!(
            wind_turbine(7).unwrap(),
            general_wind_turbine(7, 1).unwrap().0
        );
        let c = ConstructionSpec::GeneralWindTurbine { n: 11, k: 3 }.build(None).unwrap();
        check_prediction(&c);
        assert_eq!(c.prediction.social_cost, q(154, 1));
        assert_eq!(c.prediction.ratio, q(17, 10));
        let (p, t) = general_wind_turbine(11, 3).unwrap();
        assert!((0..11).all(|i| p.strategy(i).len() == 3));
        assert_eq!(t.costs, [10, 14, 17]);
        assert_eq!(all_pairs_distances(&induce_graph(&p)).diameter(), Extended::Finite(2));
        assert!(general_wind_turbine(7, 4).is_err());
        assert!(general_wind_turbine(7, 3).unwrap().1.maximum.is_empty());
    }
}
