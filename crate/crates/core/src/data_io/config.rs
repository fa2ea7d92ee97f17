use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::family::{Component, DataFamily, ProfileKind};
use super::validate::{DEFAULT_SOBOLEV, MAX_SOBOLEV};
use crate::error::{Error, Result};
use crate::integrators::{Quadrature, Scheme, StepConfig};
use crate::model::Parameters;
use crate::spectral::Grid;

/// Sample times for linear dispersive checks, `start:end:count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSamples {
    pub start: f64,
    /// End time; `None` means the trust-window end.
    pub end: Option<f64>,
    pub count: usize,
    pub geometric: bool,
}

impl TimeSamples {
    pub fn times(&self, trust_end: f64) -> Vec<f64> {
        let end = self.end.unwrap_or(trust_end);
        let n = self.count.max(2);
        (0..n)
            .map(|i| {
                let a = i as f64 / (n - 1) as f64;
                if self.geometric {
                    self.start * (end / self.start).powf(a)
                } else {
                    self.start + a * (end - self.start)
                }
            })
            .collect()
    }
}

impl Default for TimeSamples {
    fn default() -> Self {
        TimeSamples {
            start: 2.0,
            end: None,
            count: 20,
            geometric: false,
        }
    }
}

/// Everything a run needs, read from a flat `key = value` file.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub step: StepConfig,
    pub params: Parameters,
    pub family: DataFamily,
    /// Rescale the data so the larger hypothesis total is this fraction of `ε₀`.
    pub scale_to_eps0: Option<f64>,
    pub sobolev: f64,
    pub enforce_data_norms: bool,
    pub samples: TimeSamples,
}

const KEYS: &[&str] = &[
    "grid.n",
    "grid.length",
    "t_end",
    "h",
    "scheme",
    "dealias",
    "quadrature",
    "snapshot_stride",
    "eps0",
    "delta",
    "big_n",
    "sobolev",
    "seed",
    "scale_to_eps0",
    "enforce_data_norms",
    "samples.start",
    "samples.end",
    "samples.count",
    "samples.spacing",
];
const COMPONENT_KEYS: &[&str] = &["kind", "amplitude", "sigma", "carrier"];
const COMPONENTS: &[&str] = &["u", "n0", "n1"];

fn known(key: &str) -> bool {
    KEYS.contains(&key)
        || key.split_once('.').is_some_and(|(c, k)| COMPONENTS.contains(&c) && COMPONENT_KEYS.contains(&k))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
        }
    }
    Ok(map)
}

struct Reader<'a>(&'a BTreeMap<String, String>);

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("key `{key}`: cannot parse `{v}`: {e}")))
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parse(key)?
            .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    fn component(&self, name: &str) -> Result<Component> {
        let key = |k: &str| format!("{name}.{k}");
        let kind = match self.raw(&key("kind")) {
            Some(k) => ProfileKind::from_str(k)?,
            None => ProfileKind::Gaussian,
        };
        let carrier = match self.raw(&key("carrier")) {
            None => [0.0; 3],
            Some(v) => {
                let parts: Vec<f64> = v
                    .split(',')
                    .map(|p| p.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Config(format!("key `{}`: {e}", key("carrier"))))?;
                parts
                    .try_into()
                    .map_err(|_| Error::Config(format!("key `{}` needs three components", key("carrier"))))?
            }
        };
        Ok(Component {
            kind,
            amplitude: self.or(&key("amplitude"), 0.0)?,
            sigma: self.or(&key("sigma"), 1.0)?,
            carrier,
        })
    }
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::Config(format!("expected a boolean, got `{other}`"))),
    }
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !known(k)) {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        let r = Reader(map);
        let grid = Grid::new(r.required("grid.n")?, r.required("grid.length")?)
            .map_err(|e| Error::Config(e.to_string()))?;
        let scheme: Scheme = r.or("scheme", Scheme::StrangSplit)?;
        let h: f64 = r.required("h")?;
        let t_end: f64 = r.required("t_end")?;
        let stride: usize = r.or("snapshot_stride", 1)?;
        let mut step = StepConfig::new(scheme, h, t_end, stride);
        step.dealias = r.raw("dealias").map(parse_bool).transpose()?.unwrap_or(false);
        step.quadrature = match r.raw("quadrature") {
            None | Some("trapezoid") => Quadrature::Trapezoid,
            Some("midpoint") => Quadrature::Midpoint,
            Some(other) => return Err(Error::Config(format!("unknown quadrature `{other}`"))),
        };
        step.validate()?;
        let defaults = Parameters::default();
        let params = Parameters::new(
            r.or("eps0", defaults.eps0)?,
            r.or("delta", defaults.delta)?,
            r.or("big_n", defaults.big_n)?,
        );
        let sobolev: f64 = r.or("sobolev", DEFAULT_SOBOLEV)?;
        if !(0.0..=MAX_SOBOLEV).contains(&sobolev) {
            return Err(Error::Config(format!("sobolev must lie in [0, {MAX_SOBOLEV}], got {sobolev}")));
        }
        let family = DataFamily {
            u: r.component("u")?,
            n0: r.component("n0")?,
            n1: r.component("n1")?,
            seed: r.or("seed", 0)?,
        };
        let samples = TimeSamples {
            start: r.or("samples.start", 2.0)?,
            end: r.parse("samples.end")?,
            count: r.or("samples.count", 20)?,
            geometric: match r.raw("samples.spacing") {
                None | Some("linear") => false,
                Some("geometric") => true,
                Some(other) => return Err(Error::Config(format!("unknown spacing `{other}`"))),
            },
        };
        Ok(RunConfig {
            grid,
            step,
            params,
            family,
            scale_to_eps0: r.parse("scale_to_eps0")?,
            sobolev,
            enforce_data_norms: r
                .raw("enforce_data_norms")
                .map(parse_bool)
                .transpose()?
                .unwrap_or(true),
            samples,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        RunConfig::from_map(&parse_key_values(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text)
    }

    /// Canonical `key=value` lines; parsing them yields an equal config.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let mut kv: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| kv.push((k.to_string(), v));
        put("grid.n", self.grid.n().to_string());
        put("grid.length", self.grid.length().to_string());
        put("t_end", self.step.t_end.to_string());
        put("h", self.step.h.to_string());
        put("scheme", self.step.scheme.as_str().to_string());
        put("dealias", self.step.dealias.to_string());
        put(
            "quadrature",
            match self.step.quadrature {
                Quadrature::Trapezoid => "trapezoid",
                Quadrature::Midpoint => "midpoint",
            }
            .to_string(),
        );
        put("snapshot_stride", self.step.snapshot_stride.to_string());
        put("eps0", self.params.eps0.to_string());
        put("delta", self.params.delta.to_string());
        put("big_n", self.params.big_n.to_string());
        put("sobolev", self.sobolev.to_string());
        put("seed", self.family.seed.to_string());
        if let Some(f) = self.scale_to_eps0 {
            put("scale_to_eps0", f.to_string());
        }
        put("enforce_data_norms", self.enforce_data_norms.to_string());
        put("samples.start", self.samples.start.to_string());
        if let Some(e) = self.samples.end {
            put("samples.end", e.to_string());
        }
        put("samples.count", self.samples.count.to_string());
        put(
            "samples.spacing",
            if self.samples.geometric { "geometric" } else { "linear" }.to_string(),
        );
        for (name, c) in [("u", &self.family.u), ("n0", &self.family.n0), ("n1", &self.family.n1)] {
            put(&format!("{name}.kind"), c.kind.as_str().to_string());
            put(&format!("{name}.amplitude"), c.amplitude.to_string());
            put(&format!("{name}.sigma"), c.sigma.to_string());
            put(
                &format!("{name}.carrier"),
                format!("{},{},{}", c.carrier[0], c.carrier[1], c.carrier[2]),
            );
        }
        kv
    }

    pub fn to_text(&self) -> String {
        self.to_key_values()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}
