//! Flat `key = value` run configuration.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::analysis::{log_radii, ScanDomain, Thresholds, DEFAULT_BZ_TOL, DEFAULT_CLASSIFY_TOL, PATH_ZERO_TOL};
use crate::cmatrix::DEFAULT_TOL;
use crate::models::{Model, ModelError};
use crate::sublattice::Momentum;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: `{value}` ({msg})")]
    BadValue { key: String, value: String, msg: String },
    #[error("no model given (set `model = <id>`)")]
    MissingModel,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Model,
    /// `None` means the model's own `q*`.
    pub q: Option<Momentum>,
    pub thetas: Vec<f64>,
    pub radii: Vec<f64>,
    pub tol: f64,
    pub zero_tol: f64,
    pub thresholds: Thresholds,
    pub grid: (usize, usize),
    pub domain: ScanDomain,
    pub bz_tol: f64,
    pub bz_classify_tol: f64,
}

impl RunConfig {
    pub fn new(model: Model) -> Self {
        RunConfig {
            model,
            q: None,
            thetas: vec![0.0],
            radii: log_radii(1e-6, 1e-2, 12).expect("valid default radii"),
            tol: DEFAULT_TOL,
            zero_tol: PATH_ZERO_TOL,
            thresholds: Thresholds::default(),
            grid: (64, 64),
            domain: ScanDomain::brillouin_zone(),
            bz_tol: DEFAULT_BZ_TOL,
            bz_classify_tol: DEFAULT_CLASSIFY_TOL,
        }
    }

    /// Applies `(key, value)` pairs in order; later pairs win.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self, ConfigError> {
        let id = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "model")
            .map(|(_, v)| v.as_str())
            .ok_or(ConfigError::MissingModel)?;
        let mut cfg = RunConfig::new(Model::from_id(id)?);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn q_or_star(&self) -> Result<Momentum, ModelError> {
        match self.q {
            Some(q) => Ok(q),
            None => self.model.q_star(),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |msg: &str| ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            msg: msg.to_string(),
        };
        match key {
            // Resolved before any other key.
            "model" => {}
            "q" => {
                self.q = if value == "qstar" {
                    None
                } else {
                    let v = parse_list(value).ok_or_else(|| bad("expected `qx, qy` or `qstar`"))?;
                    match v[..] {
                        [x, y] => Some([x, y]),
                        _ => return Err(bad("expected two components")),
                    }
                };
            }
            "theta" => {
                self.thetas = parse_list(value)
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| bad("expected a comma-separated list of angles"))?;
            }
            "radii" => {
                let parts: Vec<&str> = value.split(':').map(str::trim).collect();
                let [lo, hi, n] = parts[..] else {
                    return Err(bad("expected `min:max:count`"));
                };
                let (lo, hi) = (
                    parse_real(lo).ok_or_else(|| bad("min"))?,
                    parse_real(hi).ok_or_else(|| bad("max"))?,
                );
                let n: usize = n.parse().map_err(|_| bad("count"))?;
                if !(lo > 0.0 && lo < hi) || n < 4 {
                    return Err(bad("need 0 < min < max and count >= 4"));
                }
                self.radii = log_radii(lo, hi, n).map_err(|e| bad(&e.to_string()))?;
            }
            "tol" => self.tol = positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "zero_tol" => self.zero_tol = positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "converge" => {
                self.thresholds.converge = positive(value).ok_or_else(|| bad("expected a positive number"))?
            }
            "bounded" => self.thresholds.bounded = positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "bz_tol" => self.bz_tol = positive(value).ok_or_else(|| bad("expected a positive number"))?,
            "bz_classify_tol" => {
                self.bz_classify_tol = positive(value).ok_or_else(|| bad("expected a positive number"))?
            }
            "grid" => {
                let (nx, ny) = value.split_once('x').ok_or_else(|| bad("expected `NXxNY`"))?;
                let nx: usize = nx.trim().parse().map_err(|_| bad("NX"))?;
                let ny: usize = ny.trim().parse().map_err(|_| bad("NY"))?;
                if nx < 16 || ny < 16 {
                    return Err(bad("grid needs at least 16 points per axis"));
                }
                self.grid = (nx, ny);
            }
            "bounds" => {
                self.domain = if value == "bz" {
                    ScanDomain::brillouin_zone()
                } else {
                    let (xs, ys) = value
                        .split_once(',')
                        .ok_or_else(|| bad("expected `xmin:xmax, ymin:ymax` or `bz`"))?;
                    let range = |s: &str| -> Option<(f64, f64)> {
                        let (a, b) = s.split_once(':')?;
                        Some((parse_real(a.trim())?, parse_real(b.trim())?))
                    };
                    let (x0, x1) = range(xs).ok_or_else(|| bad("x range"))?;
                    let (y0, y1) = range(ys).ok_or_else(|| bad("y range"))?;
                    if !(x0 < x1 && y0 < y1) {
                        return Err(bad("need min < max on both axes"));
                    }
                    ScanDomain::Rect {
                        min: [x0, y0],
                        max: [x1, y1],
                    }
                };
            }
            _ => {
                if self.model.get(key).is_none() {
                    return Err(ConfigError::UnknownKey(key.to_string()));
                }
                let z = parse_complex(value).ok_or_else(|| bad("expected a real or complex number"))?;
                self.model.set(key, z)?;
            }
        }
        Ok(())
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_text(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: n + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::Syntax {
                line: n + 1,
                msg: "empty key or value".into(),
            });
        }
        pairs.push((k.to_string(), v.to_string()));
    }
    Ok(pairs)
}

pub fn read_file(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_text(&text)
}

fn positive(s: &str) -> Option<f64> {
    parse_real(s).filter(|v| *v > 0.0)
}

fn parse_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(|p| parse_real(p.trim())).collect()
}

/// A float, or a multiple of `pi` such as `pi/2`, `-2pi/3`, `0.5*pi`.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim().parse::<f64>().ok().filter(|d| *d != 0.0)?),
        None => (s, 1.0),
    };
    let coef = num.strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(c * PI / den)
}

/// Real numbers or `a+bi` literals (`2i`, `-i`, `1-0.5i`, `1e-3+2e-2i`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Some(v) = parse_real(s) {
        return Some(Complex64::new(v, 0.0));
    }
    let body = s.strip_suffix('i')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t.trim() {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            other => parse_real(other),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(parse_real(&body[..k])?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}
