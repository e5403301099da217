//! GARCH(1,1) with Gaussian innovations: simulation, quasi-maximum
//! likelihood fitting and standardized-residual filtering.
//!
//! The model is `r_t = σ_t ε_t`, `σ²_t = ω + α r²_{t-1} + β σ²_{t-1}` with
//! `ε_t` iid standard normal and no mean term.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;
use crate::optim::NelderMead;
use crate::surrogate::{standard_normals, Seed};

/// Simulated steps discarded before the returned series starts.
pub const BURN_IN: usize = 1_000;

/// Shortest series [`fit`] accepts.
pub const MIN_FIT_LEN: usize = 500;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Covariance-stationary GARCH(1,1) parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct GarchParams {
    omega: f64,
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    omega: f64,
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for GarchParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        GarchParams::new(raw.omega, raw.alpha, raw.beta)
    }
}

impl GarchParams {
    pub fn new(omega: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(omega.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParams(format!("omega must be positive, got {omega}")));
        }
        if alpha < 0.0 || beta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "alpha and beta must be non-negative, got alpha={alpha}, beta={beta}"
            )));
        }
        if alpha + beta >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "alpha + beta must be below 1 for stationarity, got {}",
                alpha + beta
            )));
        }
        Ok(Self { omega, alpha, beta })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn persistence(&self) -> f64 {
        self.alpha + self.beta
    }

    /// `ω / (1 - α - β)`.
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }

    #[inline]
    fn next_variance(&self, prev_return: f64, prev_variance: f64) -> f64 {
        self.omega + self.alpha * prev_return * prev_return + self.beta * prev_variance
    }
}

/// Simulates `n` returns after a [`BURN_IN`]-step warm-up started at the
/// unconditional variance.
pub fn simulate(params: &GarchParams, n: usize, seed: Seed) -> Result<ReturnSeries> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    let mut rng = seed.rng();
    let shocks = standard_normals(&mut rng, n + BURN_IN);
    let mut values = Vec::with_capacity(n);
    let mut variance = params.unconditional_variance();
    let mut prev = 0.0;
    for (t, z) in shocks.into_iter().enumerate() {
        if t > 0 {
            variance = params.next_variance(prev, variance);
        }
        prev = variance.sqrt() * z;
        if t >= BURN_IN {
            values.push(prev);
        }
    }
    ReturnSeries::new(values)
}

/// Conditional variances of `returns` under `params`, started at the
/// sample variance of the series.
pub fn conditional_variances(params: &GarchParams, returns: &ReturnSeries) -> Vec<f64> {
    let r = returns.values();
    let mut out = Vec::with_capacity(r.len());
    let mut h = returns.variance();
    for t in 0..r.len() {
        if t > 0 {
            h = params.next_variance(r[t - 1], h);
        }
        out.push(h);
    }
    out
}

/// `½ Σ [ln 2π + ln h_t + r_t² / h_t]` for given variances.
pub fn nll_from_variances(returns: &[f64], variances: &[f64]) -> f64 {
    0.5 * returns
        .iter()
        .zip(variances)
        .map(|(r, h)| LN_2PI + h.ln() + r * r / h)
        .sum::<f64>()
}

/// Gaussian negative log-likelihood, with `σ²_0` = sample variance.
pub fn neg_log_likelihood(params: &GarchParams, returns: &ReturnSeries) -> Result<f64> {
    if returns.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            found: returns.len(),
        });
    }
    let r = returns.values();
    let mut h = returns.variance();
    let mut acc = 0.0;
    for t in 0..r.len() {
        if t > 0 {
            h = params.next_variance(r[t - 1], h);
        }
        acc += h.ln() + r[t] * r[t] / h;
    }
    let nll = 0.5 * (r.len() as f64 * LN_2PI + acc);
    if nll.is_finite() {
        Ok(nll)
    } else {
        Err(Error::NonFiniteLikelihood)
    }
}

/// Fitted parameters, in-sample conditional variances and likelihood.
#[derive(Debug, Clone, PartialEq)]
pub struct GarchFit {
    pub params: GarchParams,
    pub log_likelihood: f64,
    pub conditional_variances: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchFitSummary {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub log_likelihood: f64,
    pub converged: bool,
}

impl GarchFit {
    pub fn summary(&self) -> GarchFitSummary {
        GarchFitSummary {
            omega: self.params.omega,
            alpha: self.params.alpha,
            beta: self.params.beta,
            log_likelihood: self.log_likelihood,
            converged: self.converged,
        }
    }

    /// `{omega, alpha, beta, log_likelihood, converged}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes")
    }

    /// `index,variance` CSV of the conditional variances.
    pub fn write_variances_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["index", "variance"])?;
        for (i, h) in self.conditional_variances.iter().enumerate() {
            out.write_record([i.to_string(), h.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// `(ln ω, logit(α+β), logit(α/(α+β)))`: any real triple maps back to a
/// stationary parameter set.
fn to_unconstrained(p: &GarchParams) -> [f64; 3] {
    const EDGE: f64 = 1e-6;
    let persistence = p.persistence().clamp(EDGE, 1.0 - EDGE);
    let share = if p.persistence() > 0.0 {
        p.alpha / p.persistence()
    } else {
        0.5
    };
    [p.omega.ln(), logit(persistence), logit(share.clamp(EDGE, 1.0 - EDGE))]
}

fn from_unconstrained(theta: &[f64]) -> Result<GarchParams> {
    let persistence = logistic(theta[1]);
    let share = logistic(theta[2]);
    GarchParams::new(theta[0].exp(), persistence * share, persistence * (1.0 - share))
}

/// Starting point used when [`fit`] is given none: `ω = 0.1·var`, `α = 0.05`, `β = 0.90`.
pub fn default_initial(returns: &ReturnSeries) -> Result<GarchParams> {
    GarchParams::new(0.1 * returns.variance(), 0.05, 0.90)
}

/// Gaussian QMLE by Nelder-Mead on the unconstrained reparameterization.
///
/// The search is restarted from its best vertex until a restart improves the
/// objective by less than the relative tolerance, within a total budget of
/// 2,000 iterations. A fit that runs out of budget is returned with
/// `converged = false`.
pub fn fit(returns: &ReturnSeries, initial: Option<GarchParams>) -> Result<GarchFit> {
    if returns.len() < MIN_FIT_LEN {
        return Err(Error::SeriesTooShort {
            needed: MIN_FIT_LEN,
            found: returns.len(),
        });
    }
    if returns.variance() <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let start = match initial {
        Some(p) => p,
        None => default_initial(returns)?,
    };
    let objective = |theta: &[f64]| {
        from_unconstrained(theta)
            .and_then(|p| neg_log_likelihood(&p, returns))
            .unwrap_or(f64::INFINITY)
    };

    let settings = NelderMead::default();
    let budget = settings.max_iterations;
    let mut theta = to_unconstrained(&start).to_vec();
    let mut best = objective(&theta);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < budget {
        let run = NelderMead {
            max_iterations: budget - iterations,
            ..settings
        }
        .minimize(objective, &theta);
        iterations += run.iterations;
        converged = run.converged;
        let improvement = best - run.value;
        if run.value <= best {
            theta = run.x;
            best = run.value;
        }
        if !converged || !(improvement > settings.f_tol * best.abs()) {
            break;
        }
    }

    let params = from_unconstrained(&theta)?;
    let conditional_variances = conditional_variances(&params, returns);
    let nll = nll_from_variances(returns.values(), &conditional_variances);
    if !nll.is_finite() {
        return Err(Error::NonFiniteLikelihood);
    }
    Ok(GarchFit {
        params,
        log_likelihood: -nll,
        conditional_variances,
        converged,
        iterations,
    })
}

/// Standardized residuals `r_t / σ_t`.
pub fn filter(returns: &ReturnSeries, fit: &GarchFit) -> Result<ReturnSeries> {
    filter_with_variances(returns, &fit.conditional_variances)
}

pub fn filter_with_variances(returns: &ReturnSeries, variances: &[f64]) -> Result<ReturnSeries> {
    if returns.len() != variances.len() {
        return Err(Error::LengthMismatch {
            series: returns.len(),
            fit: variances.len(),
        });
    }
    ReturnSeries::new(
        returns
            .values()
            .iter()
            .zip(variances)
            .map(|(r, h)| r / h.sqrt())
            .collect(),
    )
}
