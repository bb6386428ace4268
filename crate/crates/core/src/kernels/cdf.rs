use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Scalar function handle used for distribution functions and densities.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const SPOT_CHECK_PAIRS: usize = 64;
const SPOT_CHECK_SEED: u64 = 0x00cd_f5ec;

/// A cumulative distribution function on `[0, ∞)` together with its horizon
/// `inf{s : F(s) = 1}` (possibly infinite).
///
/// The evaluator is arbitrary; monotonicity and range are spot-checked at
/// construction on a fixed set of random ordered pairs, not proven.
#[derive(Clone)]
pub struct CdfSpec {
    name: String,
    horizon: f64,
    cdf: ScalarFn,
    survival: Option<ScalarFn>,
    density: Option<ScalarFn>,
}

impl fmt::Debug for CdfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CdfSpec")
            .field("name", &self.name)
            .field("horizon", &self.horizon)
            .field("has_survival", &self.survival.is_some())
            .field("has_density", &self.density.is_some())
            .finish()
    }
}

impl CdfSpec {
    /// Wraps `cdf` after spot-checking `F(0) = 0`, `0 ≤ F ≤ 1` and monotonicity.
    pub fn new(
        name: impl Into<String>,
        horizon: f64,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let spec = CdfSpec {
            name: name.into(),
            horizon,
            cdf: Arc::new(cdf),
            survival: None,
            density: None,
        };
        spec.spot_check()?;
        Ok(spec)
    }

    /// Attaches an accurate evaluator for `1 − F`.
    pub fn with_survival(mut self, survival: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.survival = Some(Arc::new(survival));
        self
    }

    /// Attaches the density as metadata.
    pub fn with_density(mut self, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.density = Some(Arc::new(density));
        self
    }

    /// Uniform distribution on `[0, 1]`: `F(s) = s`, horizon 1.
    pub fn uniform() -> Self {
        CdfSpec {
            name: "uniform".into(),
            horizon: 1.0,
            cdf: Arc::new(|s| s.clamp(0.0, 1.0)),
            survival: Some(Arc::new(|s| 1.0 - s.clamp(0.0, 1.0))),
            density: Some(Arc::new(|s| if (0.0..=1.0).contains(&s) { 1.0 } else { 0.0 })),
        }
    }

    /// Exponential distribution `F(s) = 1 − e^{−rate·s}`, infinite horizon.
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Parameter(format!(
                "exponential rate must be positive and finite, got {rate}"
            )));
        }
        Ok(CdfSpec {
            name: format!("exponential(rate={rate})"),
            horizon: f64::INFINITY,
            cdf: Arc::new(move |s| -(-rate * s).exp_m1()),
            survival: Some(Arc::new(move |s| (-rate * s).exp())),
            density: Some(Arc::new(move |s| rate * (-rate * s).exp())),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `inf{s : F(s) = 1}`; `f64::INFINITY` when never attained.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn cdf(&self, s: f64) -> f64 {
        (self.cdf)(s)
    }

    /// `1 − F(s)`, through the dedicated evaluator when one was supplied.
    pub fn survival(&self, s: f64) -> f64 {
        match &self.survival {
            Some(sf) => sf(s),
            None => 1.0 - (self.cdf)(s),
        }
    }

    pub fn density(&self, s: f64) -> Option<f64> {
        self.density.as_ref().map(|d| d(s))
    }

    /// Ensures `0 ≤ s < horizon`.
    pub fn check_arg(&self, s: f64) -> Result<()> {
        if s.is_nan() || s < 0.0 || s >= self.horizon {
            return Err(Error::Domain(format!(
                "{}: argument {s} outside [0, {})",
                self.name, self.horizon
            )));
        }
        Ok(())
    }

    fn spot_check(&self) -> Result<()> {
        if !(self.horizon > 0.0) {
            return Err(Error::Parameter(format!(
                "{}: horizon must be positive, got {}",
                self.name, self.horizon
            )));
        }
        let f0 = self.cdf(0.0);
        if f0 != 0.0 {
            return Err(Error::Parameter(format!("{}: F(0) = {f0}, expected 0", self.name)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
        // Map (0, 1) onto the support: linearly for finite horizons,
        // through u/(1−u) otherwise.
        let finite = self.horizon.is_finite();
        let to_support = |u: f64| {
            if finite {
                u * self.horizon
            } else {
                u / (1.0 - u)
            }
        };
        for _ in 0..SPOT_CHECK_PAIRS {
            let u1: f64 = rng.random_range(0.0..0.9);
            let u2: f64 = rng.random_range(0.0..0.9);
            let (a, b) = (to_support(u1.min(u2)), to_support(u1.max(u2)));
            let (fa, fb) = (self.cdf(a), self.cdf(b));
            if !(0.0..=1.0).contains(&fa) || !(0.0..=1.0).contains(&fb) {
                return Err(Error::Parameter(format!(
                    "{}: F left [0, 1] near s = {a} or s = {b}",
                    self.name
                )));
            }
            if fa > fb {
                return Err(Error::Parameter(format!(
                    "{}: F not monotone: F({a}) = {fa} > F({b}) = {fb}",
                    self.name
                )));
            }
            if finite && fb >= 1.0 {
                return Err(Error::Parameter(format!(
                    "{}: F({b}) = 1 below the declared horizon {}",
                    self.name, self.horizon
                )));
            }
        }
        Ok(())
    }
}
