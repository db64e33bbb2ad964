use netgame_core::equilibria::{enumerate_nash, EnumerationOptions, NashEntry};
use netgame_core::metrics::gini;
use serde_json::json;

use crate::config::{Format, Settings};
use crate::output::{csv_text, decimal, exact, exact_cost, json, Failure, Outcome};

pub struct Flags {
    pub prune_parallel: bool,
    pub prune_disconnected: bool,
    pub include_profiles: bool,
}

pub const COLUMNS: [&str; 11] = [
    "profile_id",
    "profile_json",
    "is_nash",
    "ratio_exact",
    "ratio_decimal",
    "social_cost_exact",
    "gini_exact",
    "gini_decimal",
    "diameter",
    "parallel",
    "notes",
];

pub fn run(settings: &Settings, flags: Flags) -> Result<Outcome, Failure> {
    let instance = settings.instance(None)?;
    let mut options = EnumerationOptions::for_game(&instance);
    options.pruning.skip_parallel &= flags.prune_parallel;
    options.pruning.skip_disconnected &= flags.prune_disconnected;
    if let Some(cap) = settings.cap {
        options.cap.max_profiles = cap;
    }
    let report = enumerate_nash(&instance, &options)?;
    let nir = report.nir.map(exact);

    let text = match settings.format_or(Format::Csv) {
        Format::Csv => {
            let mut rows = vec![COLUMNS.map(String::from).to_vec()];
            for (id, e) in report.entries.iter().enumerate() {
                rows.push(row(id, e));
            }
            rows.push(vec![
                "summary".into(),
                String::new(),
                String::new(),
                nir.clone().unwrap_or_default(),
                report.nir.map(decimal).unwrap_or_default(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!(
                    "nir nash_count={} examined={} total_profiles={}",
                    report.nash_count(),
                    report.examined,
                    report.total_profiles
                ),
            ]);
            csv_text(rows)?
        }
        Format::Json => {
            let mut record = json!({
                "instance": report.instance,
                "nash_count": report.nash_count(),
                "nir": nir,
                "examined": report.examined,
                "total_profiles": report.total_profiles,
            });
            if flags.include_profiles {
                record["profiles"] = report
                    .entries
                    .iter()
                    .map(|e| {
                        json!({
                            "profile": e.profile,
                            "costs": e.costs.costs().iter().map(|c| exact_cost(*c)).collect::<Vec<_>>(),
                            "ratio": e.ratio.map(exact),
                            "diameter": e.diameter.to_string(),
                            "parallel": e.parallel,
                            "notes": e.notes,
                        })
                    })
                    .collect();
            }
            json(&record)
        }
    };
    Ok(Outcome::ok(text))
}

fn row(id: usize, e: &NashEntry) -> Vec<String> {
    let g = gini(&e.costs).ok();
    vec![
        id.to_string(),
        e.profile.to_json(),
        "true".into(),
        e.ratio.map(exact).unwrap_or_default(),
        e.ratio.map(decimal).unwrap_or_default(),
        exact_cost(e.costs.social()),
        g.map(exact).unwrap_or_default(),
        g.map(decimal).unwrap_or_default(),
        e.diameter.to_string(),
        e.parallel.to_string(),
        e.notes.join(" "),
    ]
}
