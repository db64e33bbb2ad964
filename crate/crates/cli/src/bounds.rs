use netgame_core::games::parse_rational;
use netgame_core::metrics::{
    star_max_ratio_limit, ubbc_efficient_cost, ubbc_nir_bound, uc_nir_bound,
};
use serde_json::{json, Map, Value};

use crate::config::{Format, Settings};
use crate::output::{csv_text, decimal, exact, json, Failure, Outcome};
use crate::sweep::parse_values;

pub const DEFAULT_ALPHAS: &str = "1/2,1,3/2,2,3";

pub const COLUMNS: [&str; 11] = [
    "game",
    "alpha",
    "bound_exact",
    "bound_decimal",
    "bound_kind",
    "star_limit_exact",
    "star_limit_decimal",
    "n",
    "k",
    "efficient_cost",
    "efficient_clamped",
];

pub fn run(settings: &Settings, values: Option<String>) -> Result<Outcome, Failure> {
    let values = match values {
        Some(v) => v,
        None => settings
            .alpha
            .map(exact)
            .unwrap_or_else(|| DEFAULT_ALPHAS.into()),
    };
    let mut rows = Vec::new();
    for text in parse_values(&values)? {
        let alpha = parse_rational(&text)?;
        let bound = uc_nir_bound(alpha)?;
        let limit = star_max_ratio_limit(alpha)?;
        rows.push(vec![
            "uc".into(),
            exact(alpha),
            exact(bound.value),
            decimal(bound.value),
            bound.kind().into(),
            exact(limit),
            decimal(limit),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    let ubbc = ubbc_nir_bound();
    let (n, k, efficient, clamped) = match (settings.n, settings.k) {
        (Some(n), Some(k)) => {
            let e = ubbc_efficient_cost(n, k)?;
            (
                n.to_string(),
                k.to_string(),
                e.value.to_string(),
                e.clamped.to_string(),
            )
        }
        _ => Default::default(),
    };
    rows.push(vec![
        "ubbc".into(),
        String::new(),
        exact(ubbc.value),
        decimal(ubbc.value),
        ubbc.kind().into(),
        String::new(),
        String::new(),
        n,
        k,
        efficient,
        clamped,
    ]);

    let text = match settings.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = vec![COLUMNS.map(String::from).to_vec()];
            out.extend(rows);
            csv_text(out)?
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .into_iter()
                .map(|r| {
                    let map: Map<String, Value> = COLUMNS
                        .iter()
                        .zip(r)
                        .filter(|(_, v)| !v.is_empty())
                        .map(|(c, v)| (c.to_string(), json!(v)))
                        .collect();
                    Value::Object(map)
                })
                .collect();
            json(&Value::Array(records))
        }
    };
    Ok(Outcome::ok(text))
}
