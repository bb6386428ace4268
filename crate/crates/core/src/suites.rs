//! Catalog-wide verification suites: deterministic identity checks, Monte
//! Carlo covariance gates and the separability falsifier.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::Family;
use crate::error::Result;
use crate::kernels::{CdfSpec, Kernel2D, OUParams};
use crate::mcverify::{covariance_gate, empirical_covariance, ou_stationarity_gate, DEFAULT_SIGMAS};
use crate::report::VerificationReport;
use crate::sampling::sample_ou_via_wiener;
use crate::transforms::{
    identity_check, product_form_falsifier, rank_one_test, separability_falsifier, slice_candidates, target_kernel,
    SeparabilityVerdict,
};

/// Parameter grid of the scaled-bridge identity checks.
pub const SCALED_EXPONENTS: [f64; 4] = [0.3, 0.5, 1.0, 2.0];
pub const SCALED_HORIZONS: [(f64, f64); 2] = [(1.0, 1.0), (2.0, 3.0)];

/// Shift used by the OU stationarity gate.
pub const STATIONARITY_SHIFT: (f64, f64) = (1.7, -0.4);

/// Random rank-one matrices checked by the falsifier suite.
const CONTROL_TRIALS: usize = 100;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub ou: OUParams,
    /// `(S, α, T, β)` of the configured scaled bridge.
    pub scaled: (f64, f64, f64, f64),
    pub fg: (CdfSpec, CdfSpec),
    pub n_s: usize,
    pub n_t: usize,
    pub margin: f64,
    pub tol: f64,
    pub seed: u64,
    pub replicates: usize,
    pub confidence_sigmas: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let exp = CdfSpec::exponential(1.0).expect("rate 1 is valid");
        SuiteConfig {
            ou: OUParams::standard(),
            scaled: (1.0, 0.5, 1.0, 0.5),
            fg: (exp.clone(), exp),
            n_s: 6,
            n_t: 6,
            margin: 1e-3,
            tol: 1e-10,
            seed: 42,
            replicates: 100_000,
            confidence_sigmas: DEFAULT_SIGMAS,
        }
    }
}

impl SuiteConfig {
    fn scaled_family(&self) -> Family {
        let (s_horizon, alpha, t_horizon, beta) = self.scaled;
        Family::ScaledBridge {
            s_horizon,
            alpha,
            t_horizon,
            beta,
        }
    }

    fn fg_family(&self) -> Family {
        Family::FgBridge {
            f: self.fg.0.clone(),
            g: self.fg.1.clone(),
        }
    }
}

/// Reports of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub pass: bool,
    pub reports: Vec<VerificationReport>,
}

impl SuiteOutcome {
    pub fn new(suite: impl Into<String>, reports: Vec<VerificationReport>) -> Self {
        SuiteOutcome {
            suite: suite.into(),
            pass: reports.iter().all(|r| r.pass),
            reports,
        }
    }

    pub fn merge(suite: impl Into<String>, parts: Vec<SuiteOutcome>) -> Self {
        Self::new(suite, parts.into_iter().flat_map(|p| p.reports).collect())
    }
}

fn identity_families(cfg: &SuiteConfig) -> Vec<Family> {
    let mut out = vec![Family::TiedDownBridge];
    for &(s_horizon, t_horizon) in &SCALED_HORIZONS {
        for &alpha in &SCALED_EXPONENTS {
            for &beta in &SCALED_EXPONENTS {
                out.push(Family::ScaledBridge {
                    s_horizon,
                    alpha,
                    t_horizon,
                    beta,
                });
            }
        }
    }
    let (s, a, t, b) = cfg.scaled;
    let listed = SCALED_HORIZONS.contains(&(s, t)) && SCALED_EXPONENTS.contains(&a) && SCALED_EXPONENTS.contains(&b);
    if !listed {
        out.push(cfg.scaled_family());
    }
    out.push(Family::Kiefer);
    let uniform = CdfSpec::uniform();
    let exp = CdfSpec::exponential(1.0).expect("rate 1 is valid");
    for (f, g) in [
        (uniform.clone(), uniform.clone()),
        (exp.clone(), exp.clone()),
        (uniform.clone(), exp.clone()),
        (exp, uniform),
    ] {
        out.push(Family::FgBridge { f, g });
    }
    out.push(cfg.fg_family());
    out
}

fn describe(fam: &Family) -> String {
    match fam {
        Family::Ou(p) => format!("ou(alpha={},beta={},sigma={})", p.alpha(), p.beta(), p.sigma()),
        Family::ScaledBridge {
            s_horizon,
            alpha,
            t_horizon,
            beta,
        } => format!("scaled(S={s_horizon},alpha={alpha},T={t_horizon},beta={beta})"),
        Family::FgBridge { f, g } => format!("fg(F={},G={})", f.name(), g.name()),
        other => other.name().to_string(),
    }
}

/// Induced covariance against the closed-form kernel for every represented
/// family, on `n_s × n_t` grids kept `margin` away from the boundary.
pub fn identity_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let reports = identity_families(cfg)
        .iter()
        .map(|fam| {
            let name = format!("identity[{}]", describe(fam));
            let run = || -> Result<VerificationReport> {
                let rep = fam.representation()?.expect("identity families are represented");
                let target = target_kernel(&rep).expect("standard OU parameters");
                let grid = fam.default_grid(cfg.n_s, cfg.n_t, cfg.margin)?;
                let mut r = identity_check(&rep, &target, &grid, cfg.tol);
                r.check_name = name.clone();
                Ok(r)
            };
            run().unwrap_or_else(|e| VerificationReport {
                tolerance: Some(cfg.tol),
                ..VerificationReport::failure(name.clone(), e.to_string())
            })
        })
        .collect();
    SuiteOutcome::new("identity", reports)
}

/// Families sampled by the Monte Carlo suite, each through its default path.
pub fn montecarlo_families(cfg: &SuiteConfig) -> Vec<Family> {
    vec![
        Family::Ou(cfg.ou),
        Family::TiedDownBridge,
        cfg.scaled_family(),
        Family::Kiefer,
        cfg.fg_family(),
    ]
}

fn gate_family(cfg: &SuiteConfig, fam: &Family) -> Result<VerificationReport> {
    let grid = fam.default_grid(cfg.n_s, cfg.n_t, cfg.margin)?;
    let samples = fam.sample(&grid, cfg.seed, cfg.replicates)?;
    let emp = empirical_covariance(&samples)?;
    let mut r = covariance_gate(&emp, &fam.kernel()?, cfg.confidence_sigmas);
    r.check_name = format!("covariance-gate[{}]", describe(fam));
    Ok(r)
}

fn stationarity(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let fam = Family::Ou(cfg.ou);
    let base = fam.default_grid(cfg.n_s, cfg.n_t, cfg.margin)?;
    let shifted = base.shifted(STATIONARITY_SHIFT.0, STATIONARITY_SHIFT.1)?;
    let a = empirical_covariance(&sample_ou_via_wiener(&cfg.ou, &base, cfg.seed, cfg.replicates)?)?;
    let b = empirical_covariance(&sample_ou_via_wiener(
        &cfg.ou,
        &shifted,
        cfg.seed.wrapping_add(1),
        cfg.replicates,
    )?)?;
    ou_stationarity_gate(&a, &b, &cfg.ou, cfg.confidence_sigmas)
}

/// Covariance gates for the sampled catalog plus the OU stationarity gate.
pub fn montecarlo_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut reports: Vec<VerificationReport> = montecarlo_families(cfg)
        .iter()
        .map(|fam| {
            gate_family(cfg, fam).unwrap_or_else(|e| {
                VerificationReport::failure(format!("covariance-gate[{}]", describe(fam)), e.to_string())
            })
        })
        .collect();
    reports.push(
        stationarity(cfg).unwrap_or_else(|e| VerificationReport::failure("ou-stationarity", e.to_string())),
    );
    SuiteOutcome::new("montecarlo", reports)
}

fn verdict_report(name: &str, pass: bool, residual: f64, verdict: SeparabilityVerdict) -> VerificationReport {
    VerificationReport {
        pass,
        max_residual: residual,
        n_entries_tested: 1,
        n_entries_outside_band: usize::from(!pass),
        ..VerificationReport::new(name)
    }
    .with_meta("verdict", verdict)
}

/// Rank test against the bivariate Wiener bridge and rank-one controls.
pub fn falsify_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let mut reports = Vec::new();

    match separability_falsifier(&[0.5, 1.0], &[0.5, 1.0]) {
        Ok((s2, verdict)) => reports.push(
            verdict_report(
                "separability-falsifier[bivariate-bridge]",
                verdict == SeparabilityVerdict::NotSeparable,
                s2,
                verdict,
            )
            .with_meta("second_singular_value", s2)
            .with_meta("grid", "{1/2,1}x{1/2,1}"),
        ),
        Err(e) => reports.push(VerificationReport::failure("separability-falsifier[bivariate-bridge]", e.to_string())),
    }

    let name = "slice-contradiction[s2=0.9]";
    match slice_candidates(0.9) {
        Ok((a, b)) => {
            let gap = (a - b).abs() / a.abs().max(b.abs());
            reports.push(
                VerificationReport {
                    pass: gap > 0.1,
                    max_residual: gap,
                    n_entries_tested: 1,
                    n_entries_outside_band: usize::from(gap <= 0.1),
                    tolerance: Some(0.1),
                    ..VerificationReport::new(name)
                }
                .with_meta("from_t2_half", a)
                .with_meta("from_t2_one", b),
            )
        }
        Err(e) => reports.push(VerificationReport::failure(name, e.to_string())),
    }

    let grid = [0.55, 0.7, 0.85, 1.0];
    for (label, kernel) in [
        ("tied-down", Kernel2D::tied_down_bridge()),
        ("kiefer", Kernel2D::kiefer()),
        ("wiener", Kernel2D::wiener()),
    ] {
        let name = format!("rank-one-control[{label}]");
        match product_form_falsifier(&kernel, (0.5, 0.5), &grid, &grid) {
            Ok(t) => reports.push(verdict_report(
                &name,
                t.verdict == SeparabilityVerdict::Separable,
                t.second_singular_value / t.largest_singular_value,
                t.verdict,
            )),
            Err(e) => reports.push(VerificationReport::failure(name, e.to_string())),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut falsified = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..CONTROL_TRIALS {
        let (r, c) = (rng.random_range(2..=8), rng.random_range(2..=8));
        let a: Vec<f64> = (0..r).map(|_| rng.random_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..c).map(|_| rng.random_range(-2.0..2.0)).collect();
        let m = DMatrix::from_fn(r, c, |i, j| a[i] * b[j]);
        match rank_one_test(&m) {
            Ok(t) => {
                worst = worst.max(t.second_singular_value / t.largest_singular_value);
                if t.verdict != SeparabilityVerdict::Separable {
                    falsified += 1;
                }
            }
            Err(_) => falsified += 1,
        }
    }
    reports.push(
        VerificationReport {
            pass: falsified == 0,
            max_residual: worst,
            n_entries_tested: CONTROL_TRIALS,
            n_entries_outside_band: falsified,
            ..VerificationReport::new("rank-one-control[random]")
        }
        .with_meta("seed", cfg.seed),
    );

    SuiteOutcome::new("falsify", reports)
}
