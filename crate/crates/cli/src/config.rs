//! Run configuration: command-line flags layered over an optional config
//! file layered over built-in defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use oufield::catalog::Family;
use oufield::suites::SuiteConfig;
use oufield::{CdfSpec, GridSpec, OUParams};

/// Keys accepted in a config file; each mirrors the flag of the same name.
pub const CONFIG_KEYS: [&str; 19] = [
    "family", "alpha", "beta", "sigma", "S", "T", "cdf", "rate", "grid-s", "grid-t", "s-points", "t-points",
    "margin", "seed", "replicates", "tol", "threads", "out", "points",
];

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Field family: wiener, ou, bivariate, tied-down, scaled, kiefer, fg
    #[arg(long)]
    pub family: Option<String>,
    /// OU rate in s, or scaled-bridge exponent in s
    #[arg(long)]
    pub alpha: Option<f64>,
    /// OU rate in t, or scaled-bridge exponent in t
    #[arg(long)]
    pub beta: Option<f64>,
    /// OU noise intensity
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Scaled-bridge horizon in s
    #[arg(long = "S")]
    pub s_horizon: Option<f64>,
    /// Scaled-bridge horizon in t
    #[arg(long = "T")]
    pub t_horizon: Option<f64>,
    /// CDF for the (F,G) bridge: uniform or exponential, or a pair `F,G`
    #[arg(long)]
    pub cdf: Option<String>,
    /// Rate of the exponential CDF
    #[arg(long)]
    pub rate: Option<f64>,
    /// Number of grid points along s
    #[arg(long = "grid-s")]
    pub grid_s: Option<usize>,
    /// Number of grid points along t
    #[arg(long = "grid-t")]
    pub grid_t: Option<usize>,
    /// Explicit s-grid, comma separated (overrides --grid-s)
    #[arg(long = "s-points", allow_hyphen_values = true)]
    pub s_points: Option<String>,
    /// Explicit t-grid, comma separated (overrides --grid-t)
    #[arg(long = "t-points", allow_hyphen_values = true)]
    pub t_points: Option<String>,
    /// Relative distance kept between the grid and the zero set of the field
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Absolute tolerance of the identity checks
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads; 0 uses all cores
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file supplying defaults for any flag
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Kernel arguments `s1,t1,s2,t2`
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CdfKind {
    Uniform,
    Exponential,
}

impl FromStr for CdfKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "uniform" => Ok(CdfKind::Uniform),
            "exponential" => Ok(CdfKind::Exponential),
            other => Err(format!("unknown cdf '{other}' (expected uniform or exponential)")),
        }
    }
}

/// Command-dependent defaults.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub grid: usize,
    pub replicates: usize,
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: Option<String>,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub s_horizon: f64,
    pub t_horizon: f64,
    pub cdf: (CdfKind, CdfKind),
    pub rate: f64,
    pub grid_s: usize,
    pub grid_t: usize,
    /// Grid size came from a flag or the config file rather than a default.
    pub grid_explicit: bool,
    pub s_points: Option<Vec<f64>>,
    pub t_points: Option<Vec<f64>>,
    pub margin: f64,
    pub seed: u64,
    pub replicates: usize,
    pub tol: f64,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub points: Option<Vec<f64>>,
}

pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| format!("config line {}: expected `key = value`, got '{raw}'", n + 1))?;
        let key = k.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key '{}'", n + 1, k.trim()));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("--{key}: '{x}': {e}")))
        .collect()
}

fn from_file<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, String>
where
    T::Err: std::fmt::Display,
{
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|e| format!("config key '{key}': '{v}': {e}")))
        .transpose()
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("--{name} must be positive and finite, got {v}"))
    }
}

impl RunConfig {
    pub fn resolve(flags: &Flags, defaults: Defaults) -> Result<Self, String> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        macro_rules! pick {
            ($field:ident, $key:literal, $default:expr) => {
                match flags.$field.clone() {
                    Some(v) => v,
                    None => from_file(&file, $key)?.unwrap_or($default),
                }
            };
        }
        macro_rules! pick_opt {
            ($field:ident, $key:literal) => {
                match flags.$field.clone() {
                    Some(v) => Some(v),
                    None => from_file(&file, $key)?,
                }
            };
        }

        let cdf: String = pick!(cdf, "cdf", "exponential".to_string());
        let cdf = match cdf.split_once(',') {
            Some((f, g)) => (f.parse()?, g.parse()?),
            None => {
                let k: CdfKind = cdf.parse()?;
                (k, k)
            }
        };
        let list = |v: Option<String>, key: &str| v.map(|s| parse_list(key, &s)).transpose();
        let s_points = list(pick_opt!(s_points, "s-points"), "s-points")?;
        let t_points = list(pick_opt!(t_points, "t-points"), "t-points")?;
        let points = list(pick_opt!(points, "points"), "points")?;
        let out: Option<PathBuf> = pick_opt!(out, "out");

        let cfg = RunConfig {
            family: pick_opt!(family, "family"),
            alpha: positive("alpha", pick!(alpha, "alpha", 0.5))?,
            beta: positive("beta", pick!(beta, "beta", 0.5))?,
            sigma: positive("sigma", pick!(sigma, "sigma", 1.0))?,
            s_horizon: positive("S", pick!(s_horizon, "S", 1.0))?,
            t_horizon: positive("T", pick!(t_horizon, "T", 1.0))?,
            cdf,
            rate: positive("rate", pick!(rate, "rate", 1.0))?,
            grid_s: pick!(grid_s, "grid-s", defaults.grid),
            grid_t: pick!(grid_t, "grid-t", defaults.grid),
            grid_explicit: flags.grid_s.is_some()
                || flags.grid_t.is_some()
                || file.contains_key("grid-s")
                || file.contains_key("grid-t"),
            s_points,
            t_points,
            margin: pick!(margin, "margin", 1e-3),
            seed: pick!(seed, "seed", 42),
            replicates: pick!(replicates, "replicates", defaults.replicates),
            tol: pick!(tol, "tol", 1e-10),
            threads: pick!(threads, "threads", 0),
            out,
            points,
        };
        if cfg.grid_s == 0 || cfg.grid_t == 0 {
            return Err("--grid-s and --grid-t must be at least 1".into());
        }
        if !(cfg.margin > 0.0 && cfg.margin < 0.5) {
            return Err(format!("--margin must lie in (0, 0.5), got {}", cfg.margin));
        }
        if !(cfg.tol >= 0.0) {
            return Err(format!("--tol must be non-negative, got {}", cfg.tol));
        }
        Ok(cfg)
    }

    pub fn ou_params(&self) -> Result<OUParams, String> {
        OUParams::new(self.alpha, self.beta, self.sigma).map_err(|e| e.to_string())
    }

    fn cdf_spec(&self, kind: CdfKind) -> Result<CdfSpec, String> {
        match kind {
            CdfKind::Uniform => Ok(CdfSpec::uniform()),
            CdfKind::Exponential => CdfSpec::exponential(self.rate).map_err(|e| e.to_string()),
        }
    }

    pub fn family(&self) -> Result<Family, String> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| format!("--family is required (one of {})", Family::NAMES.join(", ")))?;
        Ok(match name {
            "wiener" => Family::Wiener,
            "ou" => Family::Ou(self.ou_params()?),
            "bivariate" => Family::BivariateBridge,
            "tied-down" => Family::TiedDownBridge,
            "scaled" => Family::ScaledBridge {
                s_horizon: self.s_horizon,
                alpha: self.alpha,
                t_horizon: self.t_horizon,
                beta: self.beta,
            },
            "kiefer" => Family::Kiefer,
            "fg" => Family::FgBridge {
                f: self.cdf_spec(self.cdf.0)?,
                g: self.cdf_spec(self.cdf.1)?,
            },
            other => {
                return Err(format!(
                    "unknown family '{other}' (expected one of {})",
                    Family::NAMES.join(", ")
                ))
            }
        })
    }

    /// Explicit points when given, otherwise the family's default grid.
    pub fn grid(&self, family: &Family) -> Result<GridSpec, String> {
        let default = family.default_grid(self.grid_s, self.grid_t, self.margin).map_err(|e| e.to_string())?;
        let s = self.s_points.clone().unwrap_or_else(|| default.s_points().to_vec());
        let t = self.t_points.clone().unwrap_or_else(|| default.t_points().to_vec());
        GridSpec::new(s, t).map_err(|e| e.to_string())
    }

    pub fn suite_config(&self) -> Result<SuiteConfig, String> {
        Ok(SuiteConfig {
            ou: self.ou_params()?,
            scaled: (self.s_horizon, self.alpha, self.t_horizon, self.beta),
            fg: (self.cdf_spec(self.cdf.0)?, self.cdf_spec(self.cdf.1)?),
            n_s: self.grid_s,
            n_t: self.grid_t,
            margin: self.margin,
            tol: self.tol,
            seed: self.seed,
            replicates: self.replicates,
            ..SuiteConfig::default()
        })
    }
}
