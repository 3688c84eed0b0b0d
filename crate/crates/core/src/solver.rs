//! Damped Newton inversion of `s ↦ (t(T_i, W_k(s, t)))_i` with `t` fixed.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::{densities_at, jacobian_at_unchecked, WkContext, WkParams};
use crate::error::{Error, Result};
use crate::poly::{det_rational, Polynomial, VarId};
use crate::rational::{approximate, ratio, to_f64, Rational};

/// Denominator cap when rationalizing iterates for the exact Jacobian.
pub const ITERATE_DENOMINATOR: u64 = 1_000_000;
/// Denominator cap for the exact re-verification of a converged solution.
pub const VERIFY_DENOMINATOR: u64 = 1_000_000_000_000;
/// Dyadic radii tried by [`probe_ball`]: `eps · 2^-m` for `m < PROBE_RADII`.
pub const PROBE_RADII: u32 = 5;
const RESTART_SEED: u64 = 0x5eed;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub min_step: f64,
    /// `t`-values; defaults to `1/n_i`.
    pub fixed_t: Option<Vec<Vec<Rational>>>,
    /// Starting `s`; defaults to `s_i = 1/(2ℓ Σ_j t_{i,j})`, which is `1/(2ℓ)` at the default `t`.
    pub initial_s: Option<Vec<f64>>,
    pub trace: bool,
    pub restarts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tolerance: 1e-10,
            max_iterations: 100,
            min_step: 1.0 / (1u64 << 20) as f64,
            fixed_t: None,
            initial_s: None,
            trace: false,
            restarts: 8,
        }
    }
}

impl SolveOptions {
    fn check(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("at least one iteration is required".into()));
        }
        if !(self.min_step > 0.0 && self.min_step <= 1.0) {
            return Err(Error::Domain("minimum step must lie in (0, 1]".into()));
        }
        if let Some(t) = &self.fixed_t {
            if t.iter().flatten().any(|x| *x <= Rational::zero()) {
                return Err(Error::Domain("fixed t-values must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    SingularJacobian,
    DomainViolation,
    NoConvergence,
}

/// Exact densities at the rationalized solution.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    #[serde(with = "crate::rational::serde_string_vec")]
    pub s: Vec<Rational>,
    #[serde(with = "crate::rational::serde_string_vec")]
    pub densities: Vec<Rational>,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub s: Vec<f64>,
    pub iterations: usize,
    /// Newton runs started, counting restarts.
    pub attempts: usize,
    pub residual: f64,
    /// `max_i |ln G_i(s) − ln x_i|` at each accepted iterate.
    pub residual_history: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// `t_{i,j} = 1/n_i`, `s_i = 1/(2ℓ)`.
pub fn default_params(ctx: &WkContext) -> WkParams {
    let ell = ctx.ell() as i64;
    WkParams {
        s: vec![ratio(1, 2 * ell); ctx.ell()],
        t: ctx.sizes().iter().map(|&n| vec![ratio(1, n as i64); n]).collect(),
    }
}

/// Defaults scaled entrywise by `1 + u`, `u ∈ {-1/2, -7/16, …, 1/2}`,
/// redrawn until inside the domain.
pub fn perturbed_defaults<R: Rng + ?Sized>(ctx: &WkContext, rng: &mut R) -> WkParams {
    let base = default_params(ctx);
    let mut jitter = |q: &Rational| q * ratio(rng.random_range(8..=24), 16);
    loop {
        let p = WkParams {
            s: base.s.iter().map(&mut jitter).collect(),
            t: base.t.iter().map(|row| row.iter().map(&mut jitter).collect()).collect(),
        };
        if p.validate(ctx).is_ok() {
            return p;
        }
    }
}

struct System {
    t: Vec<Vec<Rational>>,
    t_sums: Vec<f64>,
    densities: Vec<Polynomial>,
    point: BTreeMap<VarId, f64>,
}

impl System {
    fn new(ctx: &WkContext, t: Vec<Vec<Rational>>) -> Result<Self> {
        let densities = (0..ctx.ell()).map(|i| ctx.symbolic_density(i)).collect::<Result<Vec<_>>>()?;
        let mut point = BTreeMap::new();
        for (i, row) in t.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                point.insert(VarId::T(i, j), to_f64(x));
            }
        }
        let t_sums = t.iter().map(|row| row.iter().map(to_f64).sum()).collect();
        Ok(System { t, t_sums, densities, point })
    }

    fn in_domain(&self, s: &[f64]) -> bool {
        s.iter().all(|&x| x > 0.0) && s.iter().zip(&self.t_sums).map(|(a, b)| a * b).sum::<f64>() < 1.0
    }

    fn densities(&mut self, s: &[f64]) -> Result<Vec<f64>> {
        for (i, &x) in s.iter().enumerate() {
            self.point.insert(VarId::S(i), x);
        }
        self.densities.iter().map(|p| p.evaluate_f64(&self.point)).collect()
    }

    /// A point with mass `m ∈ [0.1, 0.9]` split at random between the blocks.
    fn restart_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let weights: Vec<f64> = self.t_sums.iter().map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mass = rng.random_range(0.1..0.9);
        weights.iter().zip(&self.t_sums).map(|(w, m)| mass * w / total / m).collect()
    }

    fn params(&self, s: &[f64], max_den: u64) -> WkParams {
        WkParams { s: s.iter().map(|&x| approximate(x, max_den)).collect(), t: self.t.clone() }
    }
}

fn abs_residual(g: &[f64], target: &[f64]) -> f64 {
    g.iter().zip(target).fold(0.0, |m, (d, x)| m.max((d - x).abs()))
}

fn log_residual(g: &[f64], target: &[f64]) -> f64 {
    g.iter().zip(target).fold(0.0, |m, (d, x)| m.max((d.ln() - x.ln()).abs()))
}

/// Solves `t(T_i, W_k(s, t)) = x_i` for `s` with `t` fixed.
///
/// Each Newton step is taken in `u = ln s` on `ln G(s) = ln x`, using the
/// exact Jacobian at a rationalized iterate. If the run from the initial `s`
/// fails, up to `opts.restarts` further runs start from a fixed
/// pseudo-random sequence of points; the first failure is reported if all fail.
pub fn solve(ctx: &WkContext, target: &[f64], opts: &SolveOptions) -> Result<SolveReport> {
    opts.check()?;
    let ell = ctx.ell();
    if target.len() != ell {
        return Err(Error::Domain(format!("expected {ell} target values, got {}", target.len())));
    }
    let t = opts.fixed_t.clone().unwrap_or_else(|| default_params(ctx).t);
    WkParams { s: vec![ratio(1, 1 << 20); ell], t: t.clone() }.validate(ctx)?;
    let mut sys = System::new(ctx, t)?;
    let s0 = match &opts.initial_s {
        Some(s) if s.len() != ell => {
            return Err(Error::Domain(format!("expected {ell} initial s-values, got {}", s.len())));
        }
        Some(s) => s.clone(),
        None => sys.t_sums.iter().map(|m| 1.0 / (2.0 * ell as f64 * m)).collect(),
    };

    let mut report = SolveReport {
        status: SolveStatus::DomainViolation,
        s: s0.clone(),
        iterations: 0,
        attempts: 1,
        residual: f64::INFINITY,
        residual_history: Vec::new(),
        verification: None,
        trace: opts.trace.then(Vec::new),
        message: None,
    };
    if let Some(x) = target.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
        report.message = Some(format!("target {x} is not in the open interval (0, 1)"));
        return Ok(report);
    }
    if !sys.in_domain(&s0) {
        report.message = Some("initial s is outside the domain".into());
        return Ok(report);
    }

    let first = newton(ctx, &mut sys, s0, target, opts, report)?;
    let mut result = first.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let mut attempts = 1;
    while !result.converged() && attempts <= opts.restarts {
        let start = sys.restart_point(&mut rng);
        attempts += 1;
        let fresh = SolveReport { s: start.clone(), trace: opts.trace.then(Vec::new), ..first.clone() };
        result = newton(ctx, &mut sys, start, target, opts, fresh)?;
    }
    if !result.converged() {
        result = first;
    }
    result.attempts = attempts;
    if result.converged() {
        let exact = sys.params(&result.s, VERIFY_DENOMINATOR);
        if exact.validate(ctx).is_ok() {
            let densities = densities_at(ctx, &exact)?;
            let residual = abs_residual(&densities.iter().map(to_f64).collect::<Vec<_>>(), target);
            result.verification = Some(Verification {
                s: exact.s,
                densities,
                residual,
                passed: residual <= 10.0 * opts.tolerance,
            });
        }
    }
    Ok(result)
}

fn newton(
    ctx: &WkContext,
    sys: &mut System,
    s0: Vec<f64>,
    target: &[f64],
    opts: &SolveOptions,
    mut report: SolveReport,
) -> Result<SolveReport> {
    let ell = ctx.ell();
    report.iterations = 0;
    report.residual_history.clear();
    let mut s = s0;
    let mut g = sys.densities(&s)?;
    let mut merit = log_residual(&g, target);
    report.residual_history.push(merit);
    if let Some(tr) = report.trace.as_mut() {
        tr.push(s.clone());
    }
    let finish = |mut report: SolveReport, status, s, g: &[f64], message: Option<&str>| {
        report.status = status;
        report.residual = abs_residual(g, target);
        report.s = s;
        report.message = message.map(str::to_string);
        Ok(report)
    };
    while abs_residual(&g, target) > opts.tolerance {
        if report.iterations == opts.max_iterations {
            return finish(report, SolveStatus::NoConvergence, s, &g, Some("iteration cap reached"));
        }
        let jac = jacobian_at_unchecked(ctx, &sys.params(&s, ITERATE_DENOMINATOR))?;
        if det_rational(&jac).is_zero() {
            return finish(report, SolveStatus::SingularJacobian, s, &g, Some("Jacobian determinant is zero"));
        }
        // Newton in u = ln s on ln G(s) = ln x
        let j = DMatrix::from_fn(ell, ell, |a, b| to_f64(&jac[a][b]) * s[b] / g[a]);
        let rhs = DVector::from_iterator(ell, g.iter().zip(target).map(|(d, x)| x.ln() - d.ln()));
        let Some(delta) = j.lu().solve(&rhs) else {
            return finish(report, SolveStatus::SingularJacobian, s, &g, Some("Jacobian is numerically singular"));
        };

        let mut step = 1.0;
        let mut any_inside = false;
        let mut accepted = None;
        while step >= opts.min_step {
            let cand: Vec<f64> = s.iter().zip(delta.iter()).map(|(a, d)| a * (step * d).exp()).collect();
            if sys.in_domain(&cand) {
                any_inside = true;
                let gc = sys.densities(&cand)?;
                let mc = log_residual(&gc, target);
                if mc < merit {
                    accepted = Some((cand, gc, mc));
                    break;
                }
            }
            step /= 2.0;
        }
        report.iterations += 1;
        let Some((cand, gc, mc)) = accepted else {
            return if any_inside {
                finish(report, SolveStatus::NoConvergence, s, &g, Some("no damped step reduced the residual"))
            } else {
                finish(report, SolveStatus::DomainViolation, s, &g, Some("every damped step left the domain"))
            };
        };
        s = cand;
        g = gc;
        merit = mc;
        report.residual_history.push(merit);
        if let Some(tr) = report.trace.as_mut() {
            tr.push(s.clone());
        }
    }
    finish(report, SolveStatus::Converged, s, &g, None)
}

/// Success rate of [`solve`] at one radius.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusResult {
    pub radius: f64,
    pub samples: usize,
    pub converged: usize,
    pub success_rate: f64,
    /// Targets where the solve did not converge.
    pub failures: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub x0: Vec<f64>,
    pub eps: f64,
    pub success_rate: f64,
    pub largest_full_radius: Option<f64>,
    pub radii: Vec<RadiusResult>,
}

/// Uniform point of `B_r(x0) ∩ (0,1)^ℓ` by rejection.
fn ball_point<R: Rng + ?Sized>(rng: &mut R, x0: &[f64], r: f64) -> Vec<f64> {
    let d = x0.len();
    loop {
        let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let len = dir.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        let rad = r * rng.random::<f64>().powf(1.0 / d as f64);
        let p: Vec<f64> = x0.iter().zip(&dir).map(|(c, u)| c + rad * u / len).collect();
        if p.iter().all(|&x| x > 0.0 && x < 1.0) {
            return p;
        }
    }
}

/// Runs [`solve`] on `samples` points of `B_ε(x0)` for the radii
/// `ε, ε/2, …`, stopping at the first radius where every solve converges.
pub fn probe_ball(
    ctx: &WkContext,
    x0: &[f64],
    eps: f64,
    samples: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<ProbeReport> {
    if !(eps >= 0.0) {
        return Err(Error::Domain("eps must be non-negative".into()));
    }
    if x0.len() != ctx.ell() {
        return Err(Error::Domain(format!("expected {} centre values, got {}", ctx.ell(), x0.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radii = Vec::new();
    let tries: Vec<f64> = if eps == 0.0 {
        vec![0.0]
    } else {
        (0..PROBE_RADII).map(|m| eps / f64::from(1u32 << m)).collect()
    };
    for radius in tries {
        let points: Vec<Vec<f64>> = if radius == 0.0 {
            vec![x0.to_vec()]
        } else {
            (0..samples).map(|_| ball_point(&mut rng, x0, radius)).collect()
        };
        let outcomes = points
            .par_iter()
            .map(|x| solve(ctx, x, opts).map(|r| r.converged()))
            .collect::<Result<Vec<bool>>>()?;
        let converged = outcomes.iter().filter(|&&c| c).count();
        let n = outcomes.len();
        let rate = if n == 0 { 1.0 } else { converged as f64 / n as f64 };
        let failures = points.iter().zip(&outcomes).filter(|(_, &c)| !c).map(|(x, _)| x.clone()).collect();
        radii.push(RadiusResult { radius, samples: n, converged, success_rate: rate, failures });
        if converged == n {
            break;
        }
    }
    Ok(ProbeReport {
        x0: x0.to_vec(),
        eps,
        success_rate: radii[0].success_rate,
        largest_full_radius: radii.iter().find(|r| r.converged == r.samples).map(|r| r.radius),
        radii,
    })
}

/// Exact Lyndon densities at `p`, as floats.
pub fn target_densities(ctx: &WkContext, p: &WkParams) -> Result<Vec<f64>> {
    Ok(densities_at(ctx, p)?.iter().map(to_f64).collect())
}

impl ProbeReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports are serializable")
    }
}

impl SolveReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports are serializable")
    }
}
