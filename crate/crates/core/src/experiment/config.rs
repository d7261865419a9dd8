//! Run configuration: JSON ingestion with defaults, structural checks that
//! report every offending key at once, and range validation.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::features::DEFAULT_MASK_FACTOR;
use crate::schmidt::{FrequencyGridConfig, PumpConfig, SchmidtConfig};

pub const FIGURE_IDS: std::ops::RangeInclusive<u32> = 1..=21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerSweep {
    /// Lowest pump power, W.
    pub min: f64,
    /// Highest pump power, W.
    pub max: f64,
    pub n_points: usize,
    pub scale: SweepScale,
}

impl Default for PowerSweep {
    fn default() -> Self {
        Self { min: 1e-8, max: 0.5, n_points: 40, scale: SweepScale::Log }
    }
}

impl PowerSweep {
    pub fn powers(&self) -> Vec<f64> {
        if self.n_points <= 1 {
            return vec![self.min];
        }
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    SweepScale::Log => self.min * (self.max / self.min).powf(t),
                    SweepScale::Linear => self.min + (self.max - self.min) * t,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub frequency: FrequencyGridConfig,
    /// Zero padding of the time grid conjugate to the frequency grid.
    pub time_oversample: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { frequency: FrequencyGridConfig::default(), time_oversample: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    /// Core excluded from the pedestal fit, in narrow widths.
    pub mask_factor: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self { mask_factor: DEFAULT_MASK_FACTOR }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: String,
    /// Figures produced by a `figure` run without an explicit id.
    pub figures: Vec<u32>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: "out".into(), figures: FIGURE_IDS.collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub pump: PumpConfig,
    pub schmidt: SchmidtConfig,
    pub gamma_list: Vec<f64>,
    pub power_sweep: PowerSweep,
    pub grids: GridConfig,
    pub features: FeatureConfig,
    pub outputs: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            pump: PumpConfig::default(),
            schmidt: SchmidtConfig::default(),
            gamma_list: vec![0.0, 0.1, 0.5, 1.0],
            power_sweep: PowerSweep::default(),
            grids: GridConfig::default(),
            features: FeatureConfig::default(),
            outputs: OutputConfig::default(),
        }
    }
}

/// String-valued keys restricted to a fixed set of values.
const ENUM_KEYS: &[(&str, &[&str])] = &[("power_sweep.scale", &["log", "linear"])];

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(n) if n.is_u64() => "a non-negative integer",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Whether `v` may stand where the default holds `reference`.
fn compatible(v: &Value, reference: &Value) -> bool {
    match (reference, v) {
        (Value::Number(r), Value::Number(n)) => !r.is_u64() || n.is_u64(),
        (Value::Bool(_), Value::Bool(_)) | (Value::String(_), Value::String(_)) => true,
        (Value::Array(_), Value::Array(_)) | (Value::Object(_), Value::Object(_)) => true,
        _ => false,
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Walks `input` against the serialized defaults, records unknown keys and
/// type mismatches, and removes them so the rest can still be checked.
fn check_structure(
    input: &mut Map<String, Value>,
    reference: &Map<String, Value>,
    path: &str,
    errors: &mut Vec<String>,
) {
    let keys: Vec<String> = input.keys().cloned().collect();
    for key in keys {
        let here = join(path, &key);
        let Some(r) = reference.get(&key) else {
            errors.push(format!("`{here}`: unknown key"));
            input.remove(&key);
            continue;
        };
        let v = input.get_mut(&key).expect("key listed above");
        if !compatible(v, r) {
            errors.push(format!("`{here}`: expected {}, found {}", kind(r), kind(v)));
            input.remove(&key);
            continue;
        }
        match (v, r) {
            (Value::Object(vo), Value::Object(ro)) => check_structure(vo, ro, &here, errors),
            (Value::Array(va), Value::Array(ra)) => {
                if let Some(elem) = ra.first() {
                    let bad: Vec<usize> =
                        va.iter().enumerate().filter(|(_, e)| !compatible(e, elem)).map(|(k, _)| k).collect();
                    for k in &bad {
                        errors.push(format!("`{here}[{k}]`: expected {}, found {}", kind(elem), kind(&va[*k])));
                    }
                    if !bad.is_empty() {
                        input.remove(&key);
                    }
                }
            }
            (Value::String(s), _) => {
                if let Some((_, allowed)) = ENUM_KEYS.iter().find(|(k, _)| *k == here) {
                    if !allowed.contains(&s.as_str()) {
                        errors.push(format!("`{here}`: `{s}` is not one of {}", allowed.join(", ")));
                        input.remove(&key);
                    }
                }
            }
            _ => {}
        }
    }
}

fn positive(errors: &mut Vec<String>, key: &str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        errors.push(format!("`{key}`: must be positive and finite, got {v}"));
    }
}

fn at_least(errors: &mut Vec<String>, key: &str, v: usize, min: usize) {
    if v < min {
        errors.push(format!("`{key}`: must be at least {min}, got {v}"));
    }
}

impl RunConfig {
    /// Range checks; returns one message per violated bound.
    pub fn validate(&self) -> Vec<String> {
        let mut e = Vec::new();
        let p = &self.pump;
        for (k, v) in [
            ("pump.power", p.power),
            ("pump.repetition_rate", p.repetition_rate),
            ("pump.central_wavelength", p.central_wavelength),
            ("pump.spectral_fwhm", p.spectral_fwhm),
            ("pump.beam_radius", p.beam_radius),
            ("pump.crystal_length", p.crystal_length),
            ("pump.coupling_scale", p.coupling_scale),
        ] {
            positive(&mut e, k, v);
        }
        let s = &self.schmidt;
        for (k, v) in [("schmidt.mu_spectral", s.mu_spectral), ("schmidt.mu_transverse", s.mu_transverse)] {
            if !(v > 0.0 && v < 1.0) {
                e.push(format!("`{k}`: must lie in (0, 1), got {v}"));
            }
        }
        at_least(&mut e, "schmidt.n_q", s.n_q, 1);
        at_least(&mut e, "schmidt.n_m", s.n_m, 1);
        if s.n_m.is_multiple_of(2) {
            e.push(format!("`schmidt.n_m`: {} must be odd so that m runs symmetrically about 0", s.n_m));
        }
        at_least(&mut e, "schmidt.n_l", s.n_l, 1);
        if s.transverse_degeneracy < 1 {
            e.push("`schmidt.transverse_degeneracy`: must be at least 1, got 0".into());
        }
        if self.gamma_list.is_empty() {
            e.push("`gamma_list`: must not be empty".into());
        }
        for (k, g) in self.gamma_list.iter().enumerate() {
            if !(0.0..=1.0).contains(g) {
                e.push(format!("`gamma_list[{k}]`: {g} is outside the bound [0, 1]"));
            }
        }
        let w = &self.power_sweep;
        positive(&mut e, "power_sweep.min", w.min);
        positive(&mut e, "power_sweep.max", w.max);
        if w.max < w.min {
            e.push(format!("`power_sweep.max`: {} is below `power_sweep.min` {}", w.max, w.min));
        }
        at_least(&mut e, "power_sweep.n_points", w.n_points, 1);
        at_least(
            &mut e,
            "grids.frequency.n_points",
            self.grids.frequency.n_points,
            crate::grid::FrequencyGrid::MIN_POINTS,
        );
        positive(&mut e, "grids.frequency.half_span_sigmas", self.grids.frequency.half_span_sigmas);
        at_least(&mut e, "grids.time_oversample", self.grids.time_oversample, 1);
        if !(self.features.mask_factor > 1.0 && self.features.mask_factor.is_finite()) {
            e.push(format!("`features.mask_factor`: must exceed 1, got {}", self.features.mask_factor));
        }
        if self.outputs.directory.is_empty() {
            e.push("`outputs.directory`: must not be empty".into());
        }
        for (k, id) in self.outputs.figures.iter().enumerate() {
            if !FIGURE_IDS.contains(id) {
                e.push(format!("`outputs.figures[{k}]`: {id} is outside 1..=21"));
            }
        }
        e
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses a JSON document into a validated configuration, filling defaults.
/// All unknown keys, type mismatches and range violations are reported
/// together.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Object(mut input) = value else {
        return Err(Error::Config(vec![format!("top level: expected an object, found {}", kind(&value))]));
    };
    let Value::Object(reference) = serde_json::to_value(RunConfig::default())? else {
        unreachable!("config serializes to an object")
    };
    let mut errors = Vec::new();
    check_structure(&mut input, &reference, "", &mut errors);
    let cfg: RunConfig = match serde_json::from_value(Value::Object(input)) {
        Ok(c) => c,
        Err(e) => {
            errors.push(e.to_string());
            return Err(Error::Config(errors));
        }
    };
    errors.extend(cfg.validate());
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(errors))
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_config(&text)
}
