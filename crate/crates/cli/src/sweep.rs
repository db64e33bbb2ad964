use netgame_core::constructions::ConstructionSpec;
use netgame_core::equilibria::{enumerate_nash, EnumerationOptions};
use netgame_core::games::{parse_rational, GameInstance};
use netgame_core::metrics::{inequality_ratio, ubbc_nir_bound, uc_nir_bound};
use netgame_core::{Error, Rational};
use serde_json::{json, Map, Value};

use crate::config::{Axis, Format, GameKind, KRule, Settings};
use crate::output::{csv_text, decimal, exact, exact_cost, json, Failure, Outcome};

/// Profiles the per-row oracle may enumerate unless `--cap` says otherwise.
pub const DEFAULT_ORACLE_CAP: u64 = 100_000;

pub struct Request {
    pub axis: Option<Axis>,
    pub values: Option<String>,
    pub name: Option<String>,
    pub k_rule: Option<KRule>,
    pub density: Option<String>,
    pub offset: Option<String>,
}

pub const COLUMNS: [&str; 15] = [
    "axis",
    "value",
    "n",
    "k",
    "alpha",
    "construction",
    "ratio_exact",
    "ratio_decimal",
    "predicted_ratio_exact",
    "social_cost_exact",
    "bound_exact",
    "bound_kind",
    "oracle_nir_exact",
    "oracle_nir_decimal",
    "error",
];

enum KSource {
    Fixed(Option<usize>),
    Quarter,
    Density(Rational, Rational),
}

impl KSource {
    fn k(&self, n: usize) -> Result<Option<usize>, String> {
        match *self {
            KSource::Fixed(k) => Ok(k),
            KSource::Quarter => Ok(Some((n.max(1) - 1).div_ceil(4))),
            KSource::Density(d, b) => {
                let k = (d * Rational::from_integer(n as i64) + b)
                    .floor()
                    .to_integer();
                usize::try_from(k)
                    .map(Some)
                    .map_err(|_| format!("derived k = {k} is negative"))
            }
        }
    }
}

/// `"a..b"` (inclusive, integers) or a comma separated list.
pub fn parse_values(text: &str) -> Result<Vec<String>, Failure> {
    if let Some((a, b)) = text.split_once("..") {
        let parse = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("bad range bound {s:?}")))
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(Failure::Usage(format!("empty range {text:?}")));
        }
        return Ok((a..=b).map(|v| v.to_string()).collect());
    }
    let values: Vec<String> = text
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if values.is_empty() {
        return Err(Failure::Usage("--values is empty".into()));
    }
    Ok(values)
}

pub fn run(settings: &Settings, req: Request) -> Result<Outcome, Failure> {
    let axis = req
        .axis
        .ok_or_else(|| Failure::Usage("--axis is required (alpha, k or n)".into()))?;
    let values = parse_values(
        req.values
            .as_deref()
            .ok_or_else(|| Failure::Usage("--values is required".into()))?,
    )?;
    let k_source = match (axis, req.k_rule, &req.density) {
        (Axis::K, Some(_), _) | (Axis::K, _, Some(_)) => {
            return Err(Failure::Usage(
                "--k-rule and --density conflict with --axis k".into(),
            ))
        }
        (_, Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "--k-rule and --density are exclusive".into(),
            ))
        }
        (_, Some(KRule::Quarter), None) => KSource::Quarter,
        (_, None, Some(d)) => {
            let offset = match &req.offset {
                Some(b) => parse_rational(b)?,
                None => Rational::from_integer(0),
            };
            KSource::Density(parse_rational(d)?, offset)
        }
        (_, None, None) => KSource::Fixed(settings.k),
    };
    // Validates the name once, up front.
    let game = match &req.name {
        Some(name) => {
            let spec = ConstructionSpec::from_name(name, 1, Some(0))?;
            let game = match spec.game() {
                "uc" => GameKind::Uc,
                _ => GameKind::Ubbc,
            };
            if settings.game.is_some_and(|g| g != game) {
                return Err(Failure::Usage(format!(
                    "{name} is a {} construction",
                    spec.game()
                )));
            }
            Some(game)
        }
        None => settings.game,
    };

    let rows: Vec<Row> = values
        .iter()
        .map(|v| evaluate(settings, axis, v, &k_source, game, req.name.as_deref()))
        .collect();
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();

    let text = match settings.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = vec![COLUMNS.map(String::from).to_vec()];
            out.extend(rows.into_iter().map(Row::cells));
            csv_text(out)?
        }
        Format::Json => {
            let records: Vec<Value> = rows
                .into_iter()
                .map(|r| {
                    let map: Map<String, Value> = COLUMNS
                        .iter()
                        .zip(r.cells())
                        .map(|(c, v)| (c.to_string(), json!(v)))
                        .collect();
                    Value::Object(map)
                })
                .collect();
            json(&Value::Array(records))
        }
    };
    Ok(Outcome {
        text,
        failure: (failed == values.len()).then(|| Failure::Usage("every sweep row failed".into())),
    })
}

#[derive(Default)]
struct Row {
    axis: String,
    value: String,
    n: String,
    k: String,
    alpha: String,
    construction: String,
    ratio: Option<Rational>,
    predicted: Option<Rational>,
    social: String,
    bound: String,
    bound_kind: String,
    oracle: Option<Rational>,
    error: String,
}

impl Row {
    fn cells(self) -> Vec<String> {
        vec![
            self.axis,
            self.value,
            self.n,
            self.k,
            self.alpha,
            self.construction,
            self.ratio.map(exact).unwrap_or_default(),
            self.ratio.map(decimal).unwrap_or_default(),
            self.predicted.map(exact).unwrap_or_default(),
            self.social,
            self.bound,
            self.bound_kind,
            self.oracle.map(exact).unwrap_or_default(),
            self.oracle.map(decimal).unwrap_or_default(),
            self.error,
        ]
    }
}

fn evaluate(
    settings: &Settings,
    axis: Axis,
    value: &str,
    k_source: &KSource,
    game: Option<GameKind>,
    name: Option<&str>,
) -> Row {
    let mut row = Row {
        axis: format!("{axis:?}").to_lowercase(),
        value: value.to_string(),
        ..Row::default()
    };
    if let Err(e) = fill(&mut row, settings, axis, value, k_source, game, name) {
        row.error = e;
    }
    row
}

fn fill(
    row: &mut Row,
    settings: &Settings,
    axis: Axis,
    value: &str,
    k_source: &KSource,
    game: Option<GameKind>,
    name: Option<&str>,
) -> Result<(), String> {
    let mut local = settings.clone();
    local.game = game;
    let count = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| format!("{v:?} is not a count"))
    };
    match axis {
        Axis::Alpha => local.alpha = Some(parse_rational(value).map_err(|e| e.to_string())?),
        Axis::N => {
            local.n = Some(count(value)?);
            local.budgets = None;
        }
        Axis::K => {
            local.k = Some(count(value)?);
            local.budgets = None;
        }
    }
    if axis != Axis::K {
        if let Some(n) = local.n {
            local.k = k_source.k(n)?;
        }
    }
    row.n = local.n.map(|n| n.to_string()).unwrap_or_default();
    row.k = local.k.map(|k| k.to_string()).unwrap_or_default();
    row.alpha = local.alpha.map(exact).unwrap_or_default();

    match game {
        Some(GameKind::Uc) => {
            let alpha = local.alpha.ok_or("uc needs alpha")?;
            let b = uc_nir_bound(alpha).map_err(|e| e.to_string())?;
            row.bound = exact(b.value);
            row.bound_kind = b.kind().into();
        }
        Some(GameKind::Ubbc) => {
            let b = ubbc_nir_bound();
            row.bound = exact(b.value);
            row.bound_kind = b.kind().into();
        }
        None => {}
    }

    if let Some(name) = name {
        let n = local.n.ok_or("a construction needs n")?;
        let spec = ConstructionSpec::from_name(name, n, local.k).map_err(|e| e.to_string())?;
        row.construction = spec.to_string();
        let built = spec.build(local.alpha).map_err(|e| e.to_string())?;
        let costs = built
            .instance
            .cost(&built.profile)
            .map_err(|e| e.to_string())?;
        row.ratio = Some(inequality_ratio(&costs).map_err(|e| e.to_string())?);
        row.predicted = Some(built.prediction.ratio);
        row.social = exact_cost(costs.social());
    }

    if game.is_some() && local.n.is_some() {
        let instance: GameInstance = local.instance(None).map_err(|e| e.to_string())?;
        let mut options = EnumerationOptions::for_game(&instance);
        options.cap.max_profiles = settings.cap.unwrap_or(DEFAULT_ORACLE_CAP);
        match enumerate_nash(&instance, &options) {
            Ok(report) => row.oracle = report.nir,
            Err(Error::Budget { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(())
}
