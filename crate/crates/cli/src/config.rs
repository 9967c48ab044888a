use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use coherent_loops::special::HalfInt;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config {path}, line {line}, column {column}: {msg}")]
    Parse { path: PathBuf, line: usize, column: usize, msg: String },
    #[error("field `{field}`: {msg}")]
    Field { field: &'static str, msg: String },
    #[error("missing required field `{0}`")]
    Missing(&'static str),
}

fn field(field: &'static str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, msg: msg.into() }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    #[default]
    Loop,
    Coherent,
}

/// Every option, both as flags and as keys of the optional JSON config.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Spin j (integer or half-integer, e.g. 25 or 12.5).
    #[arg(long, global = true)]
    pub j: Option<f64>,
    /// Tensor power k = 2j.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// First weight.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m1: Option<f64>,
    /// Second weight; `wigner` sweeps all of -j..j when it is omitted.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m2: Option<f64>,
    /// Rotation angle about the y axis.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Sweep a:b:step, endpoints included.
    #[arg(long = "beta-range", global = true)]
    pub beta_range: Option<String>,
    /// Grid resolution NxM.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Bisection tolerance for the allowed-window edges.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Initial node count of the torus quadrature oracle.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Which state `field` evaluates.
    #[arg(long, global = true, value_enum)]
    pub state: Option<StateKind>,
    /// Base point colatitude of the coherent state.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Base point longitude of the coherent state.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Multiplies every invariant tolerance.
    #[arg(long = "tol-scale", global = true)]
    pub tol_scale: Option<f64>,
    /// Flip the sign of the standard lift (mutation check).
    #[arg(long = "flip-lift-sign", global = true)]
    #[serde(default)]
    pub flip_lift_sign: bool,
}

macro_rules! take {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Options {
    pub fn from_file(path: &Path) -> Result<Options, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.into(),
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })
    }

    /// Flags that were given replace the file's values.
    pub fn overlay(mut self, flags: &Options) -> Options {
        take!(
            self, flags, j, k, m1, m2, beta, beta_range, grid, out, format, tol, nodes, state, theta, phi, seed,
            trials, tol_scale
        );
        self.flip_lift_sign |= flags.flip_lift_sign;
        self
    }

    pub fn level_k(&self) -> Result<u32, ConfigError> {
        let from_j = self
            .j
            .map(|j| {
                let twice = 2.0 * j;
                if j < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
                    Err(field("j", format!("{j} is not a non-negative half-integer")))
                } else {
                    Ok(twice as u32)
                }
            })
            .transpose()?;
        match (from_j, self.k) {
            (Some(a), Some(b)) if a != b => Err(field("k", format!("k = {b} disagrees with 2j = {a}"))),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Err(ConfigError::Missing("j or k")),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn tol(&self) -> Result<f64, ConfigError> {
        positive("tol", self.tol.unwrap_or(1e-10))
    }

    pub fn tol_scale(&self) -> Result<f64, ConfigError> {
        positive("tol_scale", self.tol_scale.unwrap_or(1.0))
    }

    pub fn nodes(&self) -> Result<usize, ConfigError> {
        match self.nodes.unwrap_or(128) {
            n if n >= 4 => Ok(n),
            n => Err(field("nodes", format!("{n} is below the minimum of 4"))),
        }
    }

    pub fn beta(&self) -> Result<f64, ConfigError> {
        let b = self.beta.ok_or(ConfigError::Missing("beta"))?;
        if b.is_finite() {
            Ok(b)
        } else {
            Err(field("beta", "must be finite"))
        }
    }

    pub fn grid(&self, default: (usize, usize)) -> Result<(usize, usize), ConfigError> {
        let Some(g) = &self.grid else { return Ok(default) };
        let (a, b) = g.split_once(['x', 'X']).ok_or_else(|| field("grid", format!("`{g}` is not of the form NxM")))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| field("grid", format!("`{s}`: {e}")));
        let (n, m) = (parse(a)?, parse(b)?);
        if n < 2 || m < 2 {
            return Err(field("grid", format!("{n}x{m} is smaller than 2x2")));
        }
        Ok((n, m))
    }

    /// The sweep as an explicit list; a lone `beta` is a one-point sweep.
    pub fn betas(&self) -> Result<Vec<f64>, ConfigError> {
        match (&self.beta_range, self.beta) {
            (Some(r), _) => parse_range(r),
            (None, Some(_)) => Ok(vec![self.beta()?]),
            (None, None) => Err(ConfigError::Missing("beta or beta_range")),
        }
    }
}

fn positive(name: &'static str, x: f64) -> Result<f64, ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(field(name, format!("{x} is not positive")))
    }
}

pub fn parse_range(r: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = r.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(field("beta_range", format!("`{r}` is not of the form a:b:step")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| field("beta_range", format!("`{s}`: {e}")));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if step.is_nan() || step <= 0.0 || !a.is_finite() || !b.is_finite() || b < a {
        return Err(field("beta_range", format!("`{r}` is empty")));
    }
    // round so that b itself is kept despite representation error
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + step * i as f64).collect())
}

/// A weight of level `k`: matching parity and `|m| <= k/2`.
pub fn weight(name: &'static str, m: Option<f64>, k: u32) -> Result<HalfInt, ConfigError> {
    let m = m.ok_or(ConfigError::Missing(name))?;
    let twice = 2.0 * m;
    if twice.fract() != 0.0 || !twice.is_finite() {
        return Err(field(name, format!("{m} is not a half-integer")));
    }
    let twice = twice as i64;
    if twice.abs() > k as i64 || (k as i64 - twice) % 2 != 0 {
        return Err(field(name, format!("{m} is not a weight of spin {}", k as f64 / 2.0)));
    }
    Ok(HalfInt::from_twice(twice))
}
