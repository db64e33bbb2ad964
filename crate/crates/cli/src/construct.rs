use netgame_core::constructions::ConstructionSpec;
use netgame_core::metrics::inequality_ratio;
use netgame_core::Extended;
use serde_json::json;

use crate::config::{Format, Settings};
use crate::output::{csv_text, decimal, decimal_cost, exact, exact_cost, json, Failure, Outcome};

pub fn run(settings: &Settings, name: Option<String>) -> Result<Outcome, Failure> {
    let name = name.ok_or_else(|| {
        Failure::Usage(format!(
            "--name is required: {}",
            ConstructionSpec::NAMES.join(", ")
        ))
    })?;
    if settings.budgets.is_some() {
        return Err(Failure::Usage(
            "constructions take a uniform --k, not --budgets".into(),
        ));
    }
    let spec = ConstructionSpec::from_name(&name, settings.require_n()?, settings.k)?;
    if let Some(game) = settings.game {
        if game.name() != spec.game() {
            return Err(Failure::Usage(format!(
                "{name} is a {} construction, not {}",
                spec.game(),
                game.name()
            )));
        }
    }
    let built = spec.build(settings.alpha)?;
    let costs = built.instance.cost(&built.profile)?;
    let ratio = inequality_ratio(&costs);
    let prediction = &built.prediction;

    let mut mismatches = Vec::new();
    for (i, c) in costs.costs().iter().enumerate() {
        if prediction.cost_of(i).map(Extended::Finite) != Some(*c) {
            mismatches.push(format!("agent {i} costs {c}"));
        }
    }
    match &ratio {
        Ok(r) if *r == prediction.ratio => {}
        Ok(r) => mismatches.push(format!("ratio {r} != {}", prediction.ratio)),
        Err(e) => mismatches.push(format!("ratio: {e}")),
    }
    if costs.social() != Extended::Finite(prediction.social_cost) {
        mismatches.push(format!(
            "social cost {} != {}",
            costs.social(),
            prediction.social_cost
        ));
    }
    let invariant = (!mismatches.is_empty()).then(|| {
        format!(
            "{spec} disagrees with its prediction: {}",
            mismatches.join("; ")
        )
    });

    let text = match settings.format_or(Format::Json) {
        Format::Json => json(&json!({
            "construction": spec.name(),
            "instance": built.instance,
            "profile": built.profile,
            "prediction": {
                "tiers": prediction.tiers.iter().map(|t| json!({
                    "name": t.name,
                    "agents": t.agents,
                    "cost": exact(t.cost),
                })).collect::<Vec<_>>(),
                "ratio": exact(prediction.ratio),
                "social_cost": exact(prediction.social_cost),
            },
            "evaluated": {
                "costs": costs.costs().iter().map(|c| exact_cost(*c)).collect::<Vec<_>>(),
                "ratio": ratio.as_ref().map(|r| exact(*r)).unwrap_or_else(|e| e.to_string()),
                "social_cost": exact_cost(costs.social()),
            },
            "matches": invariant.is_none(),
        })),
        Format::Csv => {
            let mut rows = vec![[
                "record",
                "agent",
                "tier",
                "strategy",
                "predicted_exact",
                "predicted_decimal",
                "evaluated_exact",
                "evaluated_decimal",
            ]
            .map(String::from)
            .to_vec()];
            for (i, &c) in costs.costs().iter().enumerate() {
                let tier = prediction.tiers.iter().find(|t| t.agents.contains(&i));
                rows.push(vec![
                    "agent".into(),
                    i.to_string(),
                    tier.map_or("", |t| t.name).into(),
                    serde_json::to_string(built.profile.strategy(i)).expect("list serialises"),
                    tier.map_or(String::new(), |t| exact(t.cost)),
                    tier.map_or(String::new(), |t| decimal(t.cost)),
                    exact_cost(c),
                    decimal_cost(c),
                ]);
            }
            let (ratio_exact, ratio_decimal) = match &ratio {
                Ok(r) => (exact(*r), decimal(*r)),
                Err(e) => (e.to_string(), String::new()),
            };
            rows.push(vec![
                "ratio".into(),
                String::new(),
                String::new(),
                String::new(),
                exact(prediction.ratio),
                decimal(prediction.ratio),
                ratio_exact,
                ratio_decimal,
            ]);
            rows.push(vec![
                "social_cost".into(),
                String::new(),
                String::new(),
                String::new(),
                exact(prediction.social_cost),
                decimal(prediction.social_cost),
                exact_cost(costs.social()),
                decimal_cost(costs.social()),
            ]);
            csv_text(rows)?
        }
    };
    Ok(Outcome {
        text,
        failure: invariant.map(Failure::Invariant),
    })
}
