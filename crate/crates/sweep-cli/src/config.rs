//! Sweep configuration: a small TOML dialect with a `mode`, an `output`
//! stem, optional `seed`, a `[params]` table of fixed values, and zero or
//! more `[[axes]]` entries describing swept parameters.
//!
//! Validation walks the raw TOML value by hand instead of deserializing
//! into structs so that one pass can report every problem at once, each
//! tagged with the path of the offending field (`params.sigma`,
//! `axes[1].steps`, ...).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

/// Steps used for a range axis that does not say otherwise.
pub const DEFAULT_STEPS: usize = 201;

/// Upper bound on the number of grid points a config may request.
pub const MAX_GRID_POINTS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Duopoly equilibrium regions and utility/welfare gaps between
    /// independent and identical predictors.
    DuopolyRegion,
    /// One predictor-source game in full detail, including the largest
    /// accuracy a firm would give up for correlation and a simulated check
    /// of the weaker-predictor mixture.
    MetaGame,
    /// Grid of predictor-source games over shared and own-data accuracies.
    MetaRegion,
    /// Duopoly with brand-loyal consumers, swept over loyalty split and
    /// price sensitivity.
    LoyaltyRegion,
    /// Markets of n equally accurate firms, k of which share a predictor.
    NfirmRegion,
    /// Gaussian-copula orthant estimates against the closed-form joint
    /// prediction distribution.
    CopulaCheck,
    /// Parameter estimates and replayed payoffs from a prediction log.
    Empirical,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::DuopolyRegion,
        Mode::MetaGame,
        Mode::MetaRegion,
        Mode::LoyaltyRegion,
        Mode::NfirmRegion,
        Mode::CopulaCheck,
        Mode::Empirical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::DuopolyRegion => "duopoly-region",
            Mode::MetaGame => "meta-game",
            Mode::MetaRegion => "meta-region",
            Mode::LoyaltyRegion => "loyalty-region",
            Mode::NfirmRegion => "nfirm-region",
            Mode::CopulaCheck => "copula-check",
            Mode::Empirical => "empirical",
        }
    }

    pub fn from_name(name: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.name() == name)
    }

    /// Grid modes accept `[[axes]]`; the others evaluate one fixed setup.
    pub fn takes_axes(self) -> bool {
        matches!(
            self,
            Mode::DuopolyRegion | Mode::MetaRegion | Mode::LoyaltyRegion | Mode::NfirmRegion
        )
    }

    /// Modes that draw random samples and therefore need an explicit seed.
    pub fn randomized(self) -> bool {
        matches!(self, Mode::MetaGame | Mode::CopulaCheck)
    }

    pub(crate) fn params(self) -> &'static [ParamSpec] {
        match self {
            Mode::DuopolyRegion => DUOPOLY_PARAMS,
            Mode::MetaGame => META_GAME_PARAMS,
            Mode::MetaRegion => META_REGION_PARAMS,
            Mode::LoyaltyRegion => LOYALTY_PARAMS,
            Mode::NfirmRegion => NFIRM_PARAMS,
            Mode::CopulaCheck => COPULA_PARAMS,
            Mode::Empirical => EMPIRICAL_PARAMS,
        }
    }

    pub(crate) fn param(self, name: &str) -> Option<&'static ParamSpec> {
        self.params().iter().find(|p| p.name == name)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What values a parameter accepts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kind {
    /// Real number in an interval; the bools open the respective end.
    Float {
        min: f64,
        max: f64,
        min_open: bool,
        max_open: bool,
    },
    /// Positive sample count.
    Count { min: u64 },
    /// Integer in an inclusive range.
    Int { min: i64, max: i64 },
    /// Free-form string (file path).
    Text,
}

impl Kind {
    fn range_text(&self) -> String {
        match *self {
            Kind::Float {
                min,
                max,
                min_open,
                max_open,
            } => {
                if max == f64::INFINITY {
                    if min_open {
                        format!("must be greater than {min}")
                    } else {
                        format!("must be at least {min}")
                    }
                } else {
                    let lo = if min_open { '(' } else { '[' };
                    let hi = if max_open { ')' } else { ']' };
                    format!("must lie in {lo}{min}, {max}{hi}")
                }
            }
            Kind::Count { min } => format!("must be an integer of at least {min}"),
            Kind::Int { min, max } => format!("must be an integer between {min} and {max}"),
            Kind::Text => "must be a string".to_string(),
        }
    }

    fn accepts(&self, x: f64) -> bool {
        match *self {
            Kind::Float {
                min,
                max,
                min_open,
                max_open,
            } => {
                x.is_finite()
                    && (if min_open { x > min } else { x >= min })
                    && (if max_open { x < max } else { x <= max })
            }
            Kind::Count { min } => x.fract() == 0.0 && x >= min as f64,
            Kind::Int { min, max } => x.fract() == 0.0 && x >= min as f64 && x <= max as f64,
            Kind::Text => false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub sweepable: bool,
    /// Fixed fallback when the config omits the parameter entirely.
    pub default: Option<f64>,
}

const fn closed(name: &'static str, min: f64, max: f64, sweepable: bool) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Float {
            min,
            max,
            min_open: false,
            max_open: false,
        },
        sweepable,
        default: None,
    }
}

const fn positive(name: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Float {
            min: 0.0,
            max: f64::INFINITY,
            min_open: true,
            max_open: true,
        },
        sweepable: false,
        default: None,
    }
}

const fn count(name: &'static str, min: u64, default: u64) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Count { min },
        sweepable: false,
        default: Some(default as f64),
    }
}

const fn int(name: &'static str, min: i64, max: i64, sweepable: bool) -> ParamSpec {
    ParamSpec {
        name,
        kind: Kind::Int { min, max },
        sweepable,
        default: None,
    }
}

const DUOPOLY_PARAMS: &[ParamSpec] = &[
    closed("theta", 0.0, 1.0, true),
    closed("a", 0.5, 1.0, true),
    closed("sigma", 0.0, 0.5, true),
    positive("h"),
    positive("l"),
];

const META_GAME_PARAMS: &[ParamSpec] = &[
    closed("theta", 0.0, 1.0, false),
    closed("sigma", 0.0, 0.5, false),
    positive("h"),
    positive("l"),
    closed("a_c", 0.5, 1.0, false),
    ParamSpec {
        name: "a_i",
        kind: Kind::Float {
            min: 0.5,
            max: 1.0,
            min_open: true,
            max_open: false,
        },
        sweepable: false,
        default: None,
    },
    ParamSpec {
        name: "rho_c",
        kind: Kind::Float {
            min: 0.0,
            max: 1.0,
            min_open: true,
            max_open: false,
        },
        sweepable: false,
        default: None,
    },
    count("draws", 1, 1_000_000),
];

const META_REGION_PARAMS: &[ParamSpec] = &[
    closed("theta", 0.0, 1.0, true),
    closed("sigma", 0.0, 0.5, true),
    positive("h"),
    positive("l"),
    closed("a_c", 0.5, 1.0, true),
    closed("a_i", 0.5, 1.0, true),
    ParamSpec {
        name: "rho_c",
        kind: Kind::Float {
            min: 0.0,
            max: 1.0,
            min_open: true,
            max_open: false,
        },
        sweepable: true,
        default: None,
    },
];

const LOYALTY_PARAMS: &[ParamSpec] = &[
    closed("theta", 0.0, 1.0, true),
    closed("a", 0.5, 1.0, true),
    positive("h"),
    positive("l"),
    closed("gamma", 0.0, 1.0, true),
    closed("sigma", 0.0, 1.0, true),
];

const NFIRM_PARAMS: &[ParamSpec] = &[
    int("n", 2, nfirm::MAX_FIRMS as i64, false),
    int("k", 0, nfirm::MAX_FIRMS as i64, true),
    closed("a", 0.5, 1.0, true),
    closed("theta", 0.0, 1.0, true),
    closed("sigma", 0.0, 0.5, true),
    positive("h"),
    positive("l"),
];

const COPULA_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "a",
        kind: Kind::Float {
            min: 0.5,
            max: 1.0,
            min_open: false,
            max_open: true,
        },
        sweepable: false,
        default: None,
    },
    closed("rho", 0.0, 1.0, false),
    count("samples", copula::MIN_SAMPLES, 1_000_000),
];

const EMPIRICAL_PARAMS: &[ParamSpec] = &[
    ParamSpec {
        name: "log",
        kind: Kind::Text,
        sweepable: false,
        default: None,
    },
    closed("sigma", 0.0, 0.5, false),
    positive("h"),
    positive("l"),
];

/// One swept parameter: either an inclusive range sampled at `steps`
/// evenly spaced points or an explicit value list.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub spec: AxisSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxisSpec {
    Linspace { min: f64, max: f64, steps: usize },
    Values(Vec<f64>),
}

impl Axis {
    pub fn len(&self) -> usize {
        match &self.spec {
            AxisSpec::Linspace { steps, .. } => *steps,
            AxisSpec::Values(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, i: usize) -> f64 {
        match &self.spec {
            AxisSpec::Linspace { min, max, steps } => {
                if i + 1 == *steps {
                    *max
                } else {
                    min + (max - min) * i as f64 / (*steps as f64 - 1.0)
                }
            }
            AxisSpec::Values(v) => v[i],
        }
    }

    pub fn expand(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

/// Fixed parameter value after validation.
#[derive(Debug, Clone, PartialEq)]
pub enum FixedValue {
    Number(f64),
    Count(u64),
    Text(String),
}

/// A validated sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    /// Output path stem; `.csv`, `.schema.txt`, and `.manifest.json` are
    /// appended to it.
    pub output: String,
    pub seed: Option<u64>,
    pub fixed: BTreeMap<String, FixedValue>,
    pub axes: Vec<Axis>,
}

impl SweepConfig {
    pub fn number(&self, name: &str) -> Option<f64> {
        match self.fixed.get(name) {
            Some(FixedValue::Number(x)) => Some(*x),
            Some(FixedValue::Count(c)) => Some(*c as f64),
            _ => None,
        }
    }

    pub fn count(&self, name: &str) -> Option<u64> {
        match self.fixed.get(name) {
            Some(FixedValue::Count(c)) => Some(*c),
            Some(FixedValue::Number(x)) if x.fract() == 0.0 && *x >= 0.0 => Some(*x as u64),
            _ => None,
        }
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.fixed.get(name) {
            Some(FixedValue::Text(s)) => Some(s),
            _ => None,
        }
    }

    /// Number of grid points the axes span (1 when there are none).
    pub fn grid_len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }
}

/// One validation problem, tagged with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum ConfigFailure {
    #[error("could not read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config is not valid TOML: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("config has {} validation error(s)", .0.len())]
    Invalid(Vec<ConfigError>),
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SweepConfig, ConfigFailure> {
    let text = fs::read_to_string(path)?;
    parse_config(&text)
}

/// Parse and validate a config, reporting every problem in one pass.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigFailure> {
    let table: toml::Table = text.parse()?;
    let mut errors = Vec::new();

    for key in table.keys() {
        if !matches!(key.as_str(), "mode" | "output" | "seed" | "params" | "axes") {
            errors.push(ConfigError::new(key, "unknown field"));
        }
    }

    let mode = parse_mode(&table, &mut errors);
    let output = parse_output(&table, &mut errors);
    let seed = parse_seed(&table, &mut errors);
    let mut fixed = BTreeMap::new();
    let mut axes = Vec::new();

    if let Some(mode) = mode {
        // Parameters that were given but rejected stay out of `fixed`; track
        // them so they are not additionally reported as missing.
        let mut broken = BTreeSet::new();
        parse_params(&table, mode, &mut fixed, &mut broken, &mut errors);
        parse_axes(&table, mode, &fixed, &mut axes, &mut broken, &mut errors);
        check_required(mode, &mut fixed, &axes, &broken, &mut errors);
        check_cross_field(mode, &fixed, &axes, seed, &mut errors);
    }

    if !errors.is_empty() {
        return Err(ConfigFailure::Invalid(errors));
    }
    Ok(SweepConfig {
        mode: mode.expect("mode errors were reported"),
        output: output.expect("output errors were reported"),
        seed,
        fixed,
        axes,
    })
}

fn parse_mode(table: &toml::Table, errors: &mut Vec<ConfigError>) -> Option<Mode> {
    let names = Mode::ALL.map(Mode::name).join(", ");
    match table.get("mode") {
        None => {
            errors.push(ConfigError::new(
                "mode",
                format!("missing (one of: {names})"),
            ));
            None
        }
        Some(toml::Value::String(s)) => {
            let mode = Mode::from_name(s);
            if mode.is_none() {
                errors.push(ConfigError::new(
                    "mode",
                    format!("unknown mode \"{s}\" (one of: {names})"),
                ));
            }
            mode
        }
        Some(_) => {
            errors.push(ConfigError::new("mode", "must be a string"));
            None
        }
    }
}

fn parse_output(table: &toml::Table, errors: &mut Vec<ConfigError>) -> Option<String> {
    match table.get("output") {
        None => {
            errors.push(ConfigError::new("output", "missing output path stem"));
            None
        }
        Some(toml::Value::String(s)) => {
            if s.is_empty() || Path::new(s).file_name().is_none() {
                errors.push(ConfigError::new("output", "must end in a file name"));
                None
            } else {
                Some(s.clone())
            }
        }
        Some(_) => {
            errors.push(ConfigError::new("output", "must be a string"));
            None
        }
    }
}

fn parse_seed(table: &toml::Table, errors: &mut Vec<ConfigError>) -> Option<u64> {
    match table.get("seed") {
        None => None,
        Some(toml::Value::Integer(i)) if *i >= 0 => Some(*i as u64),
        Some(_) => {
            errors.push(ConfigError::new("seed", "must be a non-negative integer"));
            None
        }
    }
}

fn as_number(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Float(f) => Some(*f),
        toml::Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn parse_params(
    table: &toml::Table,
    mode: Mode,
    fixed: &mut BTreeMap<String, FixedValue>,
    broken: &mut BTreeSet<String>,
    errors: &mut Vec<ConfigError>,
) {
    let params = match table.get("params") {
        None => return,
        Some(toml::Value::Table(t)) => t,
        Some(_) => {
            errors.push(ConfigError::new("params", "must be a table"));
            return;
        }
    };
    for (key, value) in params {
        let path = format!("params.{key}");
        let spec = match mode.param(key) {
            Some(s) => s,
            None => {
                errors.push(ConfigError::new(
                    path,
                    format!("unknown parameter for mode {mode}"),
                ));
                continue;
            }
        };
        let mut reject = |message: String, errors: &mut Vec<ConfigError>| {
            errors.push(ConfigError::new(path.clone(), message));
            broken.insert(key.clone());
        };
        match spec.kind {
            Kind::Text => match value {
                toml::Value::String(s) if !s.is_empty() => {
                    fixed.insert(key.clone(), FixedValue::Text(s.clone()));
                }
                _ => reject("must be a non-empty string".into(), errors),
            },
            Kind::Count { .. } | Kind::Int { .. } => match as_number(value) {
                Some(x) if spec.kind.accepts(x) => {
                    if matches!(spec.kind, Kind::Count { .. }) {
                        fixed.insert(key.clone(), FixedValue::Count(x as u64));
                    } else {
                        fixed.insert(key.clone(), FixedValue::Number(x));
                    }
                }
                _ => reject(spec.kind.range_text(), errors),
            },
            Kind::Float { .. } => match as_number(value) {
                Some(x) if spec.kind.accepts(x) => {
                    fixed.insert(key.clone(), FixedValue::Number(x));
                }
                _ => reject(spec.kind.range_text(), errors),
            },
        }
    }
}

fn parse_axes(
    table: &toml::Table,
    mode: Mode,
    fixed: &BTreeMap<String, FixedValue>,
    axes: &mut Vec<Axis>,
    broken: &mut BTreeSet<String>,
    errors: &mut Vec<ConfigError>,
) {
    let list = match table.get("axes") {
        None => return,
        Some(toml::Value::Array(a)) => a,
        Some(_) => {
            errors.push(ConfigError::new("axes", "must be an array of tables"));
            return;
        }
    };
    if !mode.takes_axes() && !list.is_empty() {
        errors.push(ConfigError::new(
            "axes",
            format!("mode {mode} takes no axes"),
        ));
        return;
    }
    for (i, entry) in list.iter().enumerate() {
        let base = format!("axes[{i}]");
        let entry = match entry.as_table() {
            Some(t) => t,
            None => {
                errors.push(ConfigError::new(base, "must be a table"));
                continue;
            }
        };
        for key in entry.keys() {
            if !matches!(key.as_str(), "name" | "min" | "max" | "steps" | "values") {
                errors.push(ConfigError::new(format!("{base}.{key}"), "unknown field"));
            }
        }
        let name = match entry.get("name") {
            Some(toml::Value::String(s)) => s.clone(),
            Some(_) => {
                errors.push(ConfigError::new(format!("{base}.name"), "must be a string"));
                continue;
            }
            None => {
                errors.push(ConfigError::new(format!("{base}.name"), "missing"));
                continue;
            }
        };
        let spec = match mode.param(&name) {
            Some(s) if s.sweepable => s,
            Some(_) => {
                errors.push(ConfigError::new(
                    format!("{base}.name"),
                    format!("\"{name}\" cannot be swept; set it in [params]"),
                ));
                continue;
            }
            None => {
                errors.push(ConfigError::new(
                    format!("{base}.name"),
                    format!("\"{name}\" is not a parameter of mode {mode}"),
                ));
                continue;
            }
        };
        if axes.iter().any(|a| a.name == name) {
            errors.push(ConfigError::new(
                format!("{base}.name"),
                format!("duplicate axis \"{name}\""),
            ));
            continue;
        }
        if fixed.contains_key(&name) {
            errors.push(ConfigError::new(
                base,
                format!("\"{name}\" is both fixed in [params] and swept as an axis"),
            ));
            continue;
        }
        if let Some(axis_spec) = parse_axis_spec(entry, &base, spec, errors) {
            axes.push(Axis {
                name,
                spec: axis_spec,
            });
        } else {
            broken.insert(name);
        }
    }
}

fn parse_axis_spec(
    entry: &toml::Table,
    base: &str,
    spec: &ParamSpec,
    errors: &mut Vec<ConfigError>,
) -> Option<AxisSpec> {
    let has_range =
        entry.contains_key("min") || entry.contains_key("max") || entry.contains_key("steps");
    match entry.get("values") {
        Some(_) if has_range => {
            errors.push(ConfigError::new(
                base.to_string(),
                "specify either min/max/steps or values, not both",
            ));
            None
        }
        Some(toml::Value::Array(raw)) => {
            if raw.is_empty() {
                errors.push(ConfigError::new(
                    format!("{base}.values"),
                    "must not be empty",
                ));
                return None;
            }
            let mut values = Vec::with_capacity(raw.len());
            for (j, v) in raw.iter().enumerate() {
                let parsed = as_number(v);
                match parsed {
                    Some(x) if spec.kind.accepts(x) => values.push(x),
                    _ => {
                        errors.push(ConfigError::new(
                            format!("{base}.values[{j}]"),
                            spec.kind.range_text(),
                        ));
                        // Keep a placeholder so cross-field checks can still
                        // report the remaining entries under their own index.
                        values.push(parsed.unwrap_or(f64::NAN));
                    }
                }
            }
            Some(AxisSpec::Values(values))
        }
        Some(_) => {
            errors.push(ConfigError::new(
                format!("{base}.values"),
                "must be an array of numbers",
            ));
            None
        }
        None => {
            if matches!(spec.kind, Kind::Int { .. }) {
                errors.push(ConfigError::new(
                    base.to_string(),
                    format!(
                        "integer parameter \"{}\" sweeps explicit values, not a range",
                        spec.name
                    ),
                ));
                return None;
            }
            let mut bound = |key: &str| -> Option<f64> {
                match entry.get(key) {
                    Some(v) => match as_number(v) {
                        Some(x) if spec.kind.accepts(x) => Some(x),
                        _ => {
                            errors.push(ConfigError::new(
                                format!("{base}.{key}"),
                                spec.kind.range_text(),
                            ));
                            None
                        }
                    },
                    None => {
                        errors.push(ConfigError::new(format!("{base}.{key}"), "missing"));
                        None
                    }
                }
            };
            let min = bound("min");
            let max = bound("max");
            let steps = match entry.get("steps") {
                None => Some(DEFAULT_STEPS),
                Some(toml::Value::Integer(s)) if *s >= 2 => Some(*s as usize),
                Some(_) => {
                    errors.push(ConfigError::new(
                        format!("{base}.steps"),
                        "must be an integer of at least 2",
                    ));
                    None
                }
            };
            match (min, max, steps) {
                (Some(min), Some(max), Some(steps)) => {
                    if min < max {
                        Some(AxisSpec::Linspace { min, max, steps })
                    } else {
                        errors.push(ConfigError::new(
                            format!("{base}.min"),
                            "must be less than max",
                        ));
                        None
                    }
                }
                _ => None,
            }
        }
    }
}

fn check_required(
    mode: Mode,
    fixed: &mut BTreeMap<String, FixedValue>,
    axes: &[Axis],
    broken: &BTreeSet<String>,
    errors: &mut Vec<ConfigError>,
) {
    for spec in mode.params() {
        if fixed.contains_key(spec.name)
            || axes.iter().any(|a| a.name == spec.name)
            || broken.contains(spec.name)
        {
            continue;
        }
        if let Some(default) = spec.default {
            let value = if matches!(spec.kind, Kind::Count { .. }) {
                FixedValue::Count(default as u64)
            } else {
                FixedValue::Number(default)
            };
            fixed.insert(spec.name.to_string(), value);
            continue;
        }
        let hint = if spec.sweepable {
            "missing; set it in [params] or sweep it as an axis"
        } else {
            "missing; set it in [params]"
        };
        errors.push(ConfigError::new(format!("params.{}", spec.name), hint));
    }
}

fn check_cross_field(
    mode: Mode,
    fixed: &BTreeMap<String, FixedValue>,
    axes: &[Axis],
    seed: Option<u64>,
    errors: &mut Vec<ConfigError>,
) {
    if mode.randomized() && seed.is_none() {
        errors.push(ConfigError::new(
            "seed",
            format!("mode {mode} draws samples and needs an explicit seed"),
        ));
    }

    let num = |name: &str| match fixed.get(name) {
        Some(FixedValue::Number(x)) => Some(*x),
        _ => None,
    };
    if let (Some(h), Some(l)) = (num("h"), num("l")) {
        if h <= l {
            errors.push(ConfigError::new("params.h", "must exceed l"));
        }
    }
    if mode == Mode::MetaGame {
        if let (Some(a_c), Some(a_i)) = (num("a_c"), num("a_i")) {
            if a_c > a_i {
                errors.push(ConfigError::new("params.a_c", "must not exceed a_i"));
            }
        }
    }
    if mode == Mode::NfirmRegion {
        if let Some(n) = num("n") {
            if let Some(k) = num("k") {
                if k > n {
                    errors.push(ConfigError::new("params.k", "must not exceed n"));
                }
            }
            if let Some(axis) = axes.iter().find(|a| a.name == "k") {
                for (j, v) in axis.expand().into_iter().enumerate() {
                    if v > n {
                        let i = axes.iter().position(|a| a.name == "k").unwrap();
                        errors.push(ConfigError::new(
                            format!("axes[{i}].values[{j}]"),
                            "must not exceed n",
                        ));
                    }
                }
            }
        }
    }

    let total = axes
        .iter()
        .map(Axis::len)
        .try_fold(1usize, |acc, len| acc.checked_mul(len))
        .unwrap_or(usize::MAX);
    if total > MAX_GRID_POINTS {
        errors.push(ConfigError::new(
            "axes",
            format!("grid has {total} points; the limit is {MAX_GRID_POINTS}"),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors_of(text: &str) -> Vec<ConfigError> {
        match parse_config(text) {
            Err(ConfigFailure::Invalid(errs)) => errs,
            other => panic!("expected validation errors, got {other:?}"),
        }
    }

    fn has_error(errs: &[ConfigError], path: &str, fragment: &str) -> bool {
        errs.iter()
            .any(|e| e.path == path && e.message.contains(fragment))
    }

    const MINIMAL_DUOPOLY: &str = r#"
        mode = "duopoly-region"
        output = "out/duopoly"

        [params]
        theta = 0.75
        h = 2.0
        l = 1.0

        [[axes]]
        name = "sigma"
        min = 0.0
        max = 0.5
        steps = 11

        [[axes]]
        name = "a"
        values = [0.7, 0.8, 0.9]
    "#;

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(MINIMAL_DUOPOLY).unwrap();
        assert_eq!(cfg.mode, Mode::DuopolyRegion);
        assert_eq!(cfg.output, "out/duopoly");
        assert_eq!(cfg.seed, None);
        assert_eq!(cfg.number("theta"), Some(0.75));
        assert_eq!(cfg.axes.len(), 2);
        assert_eq!(cfg.axes[0].len(), 11);
        assert_eq!(cfg.axes[0].value(0), 0.0);
        assert_eq!(cfg.axes[0].value(10), 0.5);
        assert_eq!(cfg.axes[1].expand(), vec![0.7, 0.8, 0.9]);
        assert_eq!(cfg.grid_len(), 33);
    }

    #[test]
    fn range_axis_defaults_to_201_steps() {
        let cfg = parse_config(
            r#"
            mode = "duopoly-region"
            output = "x"
            [params]
            theta = 0.75
            a = 0.9
            h = 2.0
            l = 1.0
            [[axes]]
            name = "sigma"
            min = 0.0
            max = 0.5
        "#,
        )
        .unwrap();
        assert_eq!(cfg.axes[0].len(), DEFAULT_STEPS);
    }

    #[test]
    fn linspace_hits_both_endpoints_exactly() {
        let axis = Axis {
            name: "sigma".into(),
            spec: AxisSpec::Linspace {
                min: 0.1,
                max: 0.3,
                steps: 7,
            },
        };
        let v = axis.expand();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.3);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn all_problems_reported_in_one_pass() {
        let errs = errors_of(
            r#"
            mode = "duopoly-region"
            outputs = "typo"
            [params]
            theta = 1.5
            gamma = 0.5
            h = 2.0
            l = 1.0
            [[axes]]
            name = "sigma"
            min = 0.0
            max = 0.7
            [[axes]]
            name = "a"
            min = 0.9
            max = 0.6
            steps = 1
        "#,
        );
        assert!(has_error(&errs, "outputs", "unknown field"));
        assert!(has_error(&errs, "output", "missing"));
        assert!(has_error(&errs, "params.theta", "[0, 1]"));
        assert!(has_error(&errs, "params.gamma", "unknown parameter"));
        assert!(has_error(&errs, "axes[0].max", "[0, 0.5]"));
        assert!(has_error(&errs, "axes[1].steps", "at least 2"));
        assert!(errs.len() >= 6);
    }

    #[test]
    fn sigma_cap_depends_on_mode() {
        let errs = errors_of(
            r#"
            mode = "duopoly-region"
            output = "x"
            [params]
            theta = 0.75
            a = 0.9
            h = 2.0
            l = 1.0
            [[axes]]
            name = "sigma"
            min = 0.0
            max = 0.7
        "#,
        );
        assert!(has_error(&errs, "axes[0].max", "[0, 0.5]"));

        let loyal = parse_config(
            r#"
            mode = "loyalty-region"
            output = "x"
            [params]
            theta = 0.75
            a = 0.9
            h = 2.0
            l = 1.0
            gamma = 0.5
            [[axes]]
            name = "sigma"
            min = 0.0
            max = 1.0
        "#,
        );
        assert!(loyal.is_ok(), "loyalty sigma may reach 1.0: {loyal:?}");
    }

    #[test]
    fn randomized_modes_demand_a_seed() {
        let errs = errors_of(
            r#"
            mode = "copula-check"
            output = "x"
            [params]
            a = 0.9
            rho = 0.5
        "#,
        );
        assert!(has_error(&errs, "seed", "explicit seed"));

        let ok = parse_config(
            r#"
            mode = "copula-check"
            output = "x"
            seed = 7
            [params]
            a = 0.9
            rho = 0.5
        "#,
        )
        .unwrap();
        assert_eq!(ok.seed, Some(7));
        assert_eq!(ok.count("samples"), Some(1_000_000));
    }

    #[test]
    fn point_modes_reject_axes() {
        let errs = errors_of(
            r#"
            mode = "copula-check"
            output = "x"
            seed = 1
            [params]
            a = 0.9
            rho = 0.5
            [[axes]]
            name = "a"
            min = 0.5
            max = 0.9
        "#,
        );
        assert!(has_error(&errs, "axes", "takes no axes"));
    }

    #[test]
    fn axis_name_clashes_are_flagged() {
        let errs = errors_of(
            r#"
            mode = "duopoly-region"
            output = "x"
            [params]
            theta = 0.75
            sigma = 0.2
            h = 2.0
            l = 1.0
            [[axes]]
            name = "sigma"
            min = 0.0
            max = 0.5
            [[axes]]
            name = "a"
            min = 0.5
            max = 1.0
            [[axes]]
            name = "a"
            values = [0.7]
            [[axes]]
            name = "h"
            min = 1.5
            max = 3.0
        "#,
        );
        assert!(has_error(
            &errs,
            "axes[0]",
            "both fixed in [params] and swept"
        ));
        assert!(has_error(&errs, "axes[2].name", "duplicate axis"));
        assert!(has_error(&errs, "axes[3].name", "cannot be swept"));
    }

    #[test]
    fn integer_axes_validate_integrality() {
        let errs = errors_of(
            r#"
            mode = "nfirm-region"
            output = "x"
            [params]
            n = 5
            a = 0.9
            theta = 0.9
            sigma = 0.05
            h = 7.0
            l = 1.0
            [[axes]]
            name = "k"
            values = [2, 3.5, 6]
        "#,
        );
        assert!(has_error(&errs, "axes[0].values[1]", "integer"));
        assert!(has_error(&errs, "axes[0].values[2]", "must not exceed n"));

        let ok = parse_config(
            r#"
            mode = "nfirm-region"
            output = "x"
            [params]
            n = 5
            a = 0.9
            theta = 0.9
            sigma = 0.05
            h = 7.0
            l = 1.0
            [[axes]]
            name = "k"
            values = [0, 2, 5]
        "#,
        )
        .unwrap();
        assert_eq!(ok.axes[0].expand(), vec![0.0, 2.0, 5.0]);
    }

    #[test]
    fn ranged_integer_axis_is_rejected() {
        let errs = errors_of(
            r#"
            mode = "nfirm-region"
            output = "x"
            [params]
            n = 5
            a = 0.9
            theta = 0.9
            sigma = 0.05
            h = 7.0
            l = 1.0
            [[axes]]
            name = "k"
            min = 0
            max = 5
        "#,
        );
        assert!(has_error(&errs, "axes[0]", "explicit values"));
    }

    #[test]
    fn meta_game_checks_accuracy_order_and_price_order() {
        let errs = errors_of(
            r#"
            mode = "meta-game"
            output = "x"
            seed = 3
            [params]
            theta = 0.75
            sigma = 0.1
            h = 1.0
            l = 2.0
            a_c = 0.8
            a_i = 0.6
            rho_c = 1.0
        "#,
        );
        assert!(has_error(&errs, "params.a_c", "must not exceed a_i"));
        assert!(has_error(&errs, "params.h", "must exceed l"));
    }

    #[test]
    fn missing_parameters_name_the_fix() {
        let errs = errors_of(
            r#"
            mode = "duopoly-region"
            output = "x"
            [params]
            h = 2.0
            l = 1.0
        "#,
        );
        assert!(has_error(&errs, "params.theta", "sweep it as an axis"));
        assert!(has_error(&errs, "params.a", "sweep it as an axis"));
        assert!(has_error(&errs, "params.sigma", "sweep it as an axis"));
    }

    #[test]
    fn syntax_errors_surface_as_syntax() {
        match parse_config("mode = [unclosed") {
            Err(ConfigFailure::Syntax(_)) => {}
            other => panic!("expected syntax failure, got {other:?}"),
        }
    }

    #[test]
    fn oversized_grid_is_rejected() {
        let errs = errors_of(
            r#"
            mode = "duopoly-region"
            output = "x"
            [params]
            theta = 0.75
            h = 2.0
            l = 1.0
            [[axes]]
            name = "sigma"
            min = 0.0
            max = 0.5
            steps = 100000
            [[axes]]
            name = "a"
            min = 0.5
            max = 1.0
            steps = 100000
        "#,
        );
        assert!(has_error(&errs, "axes", "limit"));
    }
}
