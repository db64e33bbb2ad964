use std::fs;
use std::io::{self, Read};

use netgame_core::equilibria::{cut_lemma_witness, diameter2_sufficient, improving_deviation};
use netgame_core::games::GameInstance;
use netgame_core::graph::{all_pairs_distances, induce_graph, StrategyProfile};
use netgame_core::metrics::{gini, inequality_ratio, ubbc_nir_bound, uc_nir_bound, Bound};
use netgame_core::Extended;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{Format, Settings};
use crate::output::{csv_text, decimal, exact, exact_cost, json, Failure, Outcome};

/// A bare profile, or any record with `profile` (and optionally `instance`)
/// fields, such as the output of `construct`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Input {
    Bare(StrategyProfile),
    Wrapped {
        profile: StrategyProfile,
        instance: Option<GameInstance>,
    },
}

fn read_source(source: &str) -> Result<String, Failure> {
    if source == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(text)
    } else if source.trim_start().starts_with('{') {
        Ok(source.to_string())
    } else {
        fs::read_to_string(source).map_err(|e| Failure::Usage(format!("cannot read {source}: {e}")))
    }
}

fn load(settings: &Settings, source: &str) -> Result<(GameInstance, StrategyProfile), Failure> {
    let text = read_source(source)?;
    let input: Input =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad profile: {e}")))?;
    let (profile, embedded) = match input {
        Input::Bare(p) => (p, None),
        Input::Wrapped { profile, instance } => (profile, instance),
    };
    let instance = match embedded {
        Some(inst) if settings.game.is_none() => inst,
        _ => settings.instance(Some(profile.n()))?,
    };
    Ok((instance, profile))
}

pub fn run(settings: &Settings, source: Option<String>, random: bool) -> Result<Outcome, Failure> {
    let (instance, profile) = match (source, random) {
        (Some(_), true) => {
            return Err(Failure::Usage(
                "--profile and --random are exclusive".into(),
            ))
        }
        (Some(src), false) => load(settings, &src)?,
        (None, true) => {
            let instance = settings.instance(None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
            let profile = instance.random_profile(&mut rng);
            (instance, profile)
        }
        (None, false) => return Err(Failure::Usage("verify needs --profile or --random".into())),
    };

    if let Err(e) = instance.check_profile(&profile) {
        let record = json!({
            "instance": instance,
            "profile": profile,
            "feasible": false,
            "error": e.to_string(),
        });
        return Ok(Outcome {
            text: json(&record),
            failure: Some(e.into()),
        });
    }

    let graph = induce_graph(&profile);
    let diameter = all_pairs_distances(&graph).diameter();
    let parallel: Vec<[usize; 2]> = graph
        .edges()
        .filter(|&e| graph.owners(e).is_some_and(|o| o.len() > 1))
        .map(|e| {
            let (a, b) = e.endpoints();
            [a, b]
        })
        .collect();

    let mut deviation = None;
    for i in 0..profile.n() {
        if let Some(r) = improving_deviation(&instance, &profile, i)? {
            deviation = Some((i, r));
            break;
        }
    }
    let nash = deviation.is_none();

    let (sufficient, witness) = match &instance {
        GameInstance::Ubbc(g) => (
            Some(diameter2_sufficient(g, &profile)?),
            cut_lemma_witness(g, &profile)?,
        ),
        GameInstance::Uc(_) => (None, None),
    };

    let costs = instance.cost(&profile)?;
    let ratio = inequality_ratio(&costs);
    let gini = gini(&costs);
    let bound: Bound = match &instance {
        GameInstance::Uc(g) => uc_nir_bound(g.alpha())?,
        GameInstance::Ubbc(_) => ubbc_nir_bound(),
    };
    let holds = ratio.as_ref().ok().map(|r| bound.admits(*r));

    let mut violations = Vec::new();
    if sufficient == Some(true) && !nash {
        violations.push("diameter-2 criterion holds on a non-equilibrium".to_string());
    }
    if witness.is_some() && nash {
        violations.push("cut witness found on an equilibrium".to_string());
    }
    if nash && !bound.asymptotic && holds == Some(false) {
        violations.push(format!(
            "equilibrium ratio exceeds the {} bound {}",
            bound.kind(),
            bound.value
        ));
    }

    let diameter_value = match diameter {
        Extended::Finite(d) => json!(d),
        Extended::Infinite => json!("inf"),
    };
    let (ratio_field, ratio_value) = match &ratio {
        Ok(r) => ("ratio", json!(exact(*r))),
        Err(e) => ("ratio_error", json!(e.to_string())),
    };
    let text = match settings.format_or(Format::Json) {
        Format::Json => {
            let mut record = json!({
                "instance": instance,
                "profile": profile,
                "feasible": true,
                "parallel_declarations": parallel,
                "diameter": diameter_value,
                "is_nash": nash,
                "improving_deviation": deviation.as_ref().map(|(i, r)| json!({
                    "agent": i,
                    "strategy": r.strategy,
                    "cost": exact_cost(r.cost),
                    "current_cost": exact_cost(costs.costs()[*i]),
                })),
                "diam2_sufficient": sufficient,
                "cut_witness": witness,
                "costs": costs.costs().iter().map(|c| exact_cost(*c)).collect::<Vec<_>>(),
                "gini": match &gini {
                    Ok(g) => json!(exact(*g)),
                    Err(e) => json!(e.to_string()),
                },
                "social_cost": exact_cost(costs.social()),
                "bound": {
                    "value": exact(bound.value),
                    "kind": bound.kind(),
                    "holds": holds,
                },
            });
            if let Value::Object(map) = &mut record {
                map.insert(ratio_field.into(), ratio_value);
            }
            json(&record)
        }
        Format::Csv => {
            let opt = |b: Option<bool>| b.map_or(String::new(), |b| b.to_string());
            let header = [
                "profile_json",
                "feasible",
                "parallel_declarations",
                "diameter",
                "is_nash",
                "diam2_sufficient",
                "cut_witness",
                "costs",
                "ratio_exact",
                "ratio_decimal",
                "gini_exact",
                "gini_decimal",
                "social_cost_exact",
                "bound_exact",
                "bound_kind",
                "bound_holds",
            ];
            let row = vec![
                profile.to_json(),
                "true".into(),
                parallel.len().to_string(),
                diameter.to_string(),
                nash.to_string(),
                opt(sufficient),
                witness.as_ref().map_or(String::new(), |w| {
                    serde_json::to_string(w).expect("witness serialises")
                }),
                costs
                    .costs()
                    .iter()
                    .map(|c| exact_cost(*c))
                    .collect::<Vec<_>>()
                    .join(" "),
                ratio.as_ref().map_or_else(|e| e.to_string(), |r| exact(*r)),
                ratio.as_ref().map_or(String::new(), |r| decimal(*r)),
                gini.as_ref().map_or_else(|e| e.to_string(), |g| exact(*g)),
                gini.as_ref().map_or(String::new(), |g| decimal(*g)),
                exact_cost(costs.social()),
                exact(bound.value),
                bound.kind().into(),
                opt(holds),
            ];
            csv_text(vec![header.map(String::from).to_vec(), row])?
        }
    };
    Ok(Outcome {
        text,
        failure: (!violations.is_empty()).then(|| Failure::Invariant(violations.join("; "))),
    })
}
