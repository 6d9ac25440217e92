// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Log-log scaling fits of subgraph counts against edge counts, the implied
//! slopes of `G(n, p)` and the clique-bound feasibility of a fitted law.

pub mod regime;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::census::{binomial, Mode};
use crate::error::{Error, Result};
use crate::null::expected_counts_gnp;

pub use regime::{
    regime_analytic_counts, regime_graph, regime_model_build, regime_trajectory, RegimeModelSpec,
};

/// `ln count = alpha + beta ln m` by ordinary least squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub alpha: f64,
    pub beta: f64,
    pub r2: f64,
    pub n_points: usize,
    /// Points dropped because a coordinate was not positive.
    pub excluded: usize,
    pub residuals: Vec<f64>,
}

impl RegressionFit {
    /// The prefactor `A = e^alpha`.
    pub fn a(&self) -> f64 {
        self.alpha.exp()
    }

    pub fn predict(&self, m: f64) -> f64 {
        (self.alpha + self.beta * m.ln()).exp()
    }
}

pub fn loglog_fit(points: &[(f64, f64)]) -> Result<RegressionFit> {
    let kept: Vec<(f64, f64)> = points
        .iter()
        .filter(|(m, c)| *m > 0.0 && *c > 0.0)
        .map(|&(m, c)| (m.ln(), c.ln()))
        .collect();
    let excluded = points.len() - kept.len();
    let mut xs: Vec<f64> = kept.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "log-log fit needs at least 2 distinct positive m values, got {}",
            xs.len()
        )));
    }
    let n = kept.len() as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let beta = sxy / sxx;
    let alpha = my - beta * mx;
    let residuals: Vec<f64> = kept.iter().map(|p| p.1 - alpha - beta * p.0).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let sst: f64 = kept.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r2 = if sst == 0.0 {
        1.0
    } else {
        (1.0 - sse / sst).clamp(0.0, 1.0)
    };
    Ok(RegressionFit {
        alpha,
        beta,
        r2,
        n_points: kept.len(),
        excluded,
        residuals,
    })
}

/// Integer `(m, count)` pairs, as produced by censuses over time.
pub fn loglog_fit_counts(points: &[(u64, u64)]) -> Result<RegressionFit> {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(m, c)| (m as f64, c as f64)).collect();
    loglog_fit(&pts)
}

/// Asymptotic slope of any `b`-node count against `m` in `G(n, p)`.
pub fn er_implied_slope(b: u64) -> Result<Ratio<u64>> {
    if b < 3 {
        return Err(Error::UnsupportedSize(b as usize));
    }
    Ok(Ratio::new(b, 2))
}

/// `(E m, E counts)` of `G(n, p)` for every `n` in `ns`, classes in code
/// order.
pub fn gnp_expected_trajectory(ns: &[u64], p: f64, mode: Mode) -> Result<Vec<(f64, [f64; 8])>> {
    ns.iter()
        .map(|&n| {
            let m = binomial(n as u128, 2).unwrap_or(0) as f64 * p;
            Ok((m, expected_counts_gnp(n, p, mode)?))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundedClass {
    Triangle,
    FourComplete,
}

/// How the clique number evolves as the graph grows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CliquePolicy {
    Fixed(u64),
    Growing,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feasibility {
    /// The fitted law exceeds the clique bound for all `m > m_star`.
    Crossover {
        m_star: f64,
        c_w: f64,
    },
    NeverViolated {
        c_w: f64,
    },
}

impl BoundedClass {
    pub fn critical_slope(self) -> f64 {
        match self {
            BoundedClass::Triangle => 1.5,
            BoundedClass::FourComplete => 2.0,
        }
    }

    /// Log prefactor `C(w)` of the clique bound `ln count <= C(w) + crit ln m`.
    pub fn log_prefactor(self, policy: CliquePolicy) -> Result<f64> {
        match (self, policy) {
            (BoundedClass::Triangle, CliquePolicy::Growing) => Ok(-0.5 * 4.5f64.ln()),
            (BoundedClass::FourComplete, CliquePolicy::Growing) => Ok(-(6f64.ln())),
            (BoundedClass::Triangle, CliquePolicy::Fixed(w)) => {
                if w < 3 {
                    return Err(Error::InvalidArgument(format!(
                        "clique number {w} admits no triangle"
                    )));
                }
                let w = w as f64;
                Ok((w - 2.0).ln() - 0.5 * (4.5 * (w - 1.0) * w).ln())
            }
            (BoundedClass::FourComplete, CliquePolicy::Fixed(w)) => {
                if w < 4 {
                    return Err(Error::InvalidArgument(format!(
                        "clique number {w} admits no 4-complete"
                    )));
                }
                let c = |k| binomial(w as u128, k).map_or(f64::INFINITY, |v| v as f64);
                Ok(c(4).ln() - 2.0 * c(2).ln())
            }
        }
    }
}

/// Edge count beyond which `alpha + beta ln m` breaks the clique bound.
pub fn scaling_feasibility(
    alpha: f64,
    beta: f64,
    class: BoundedClass,
    policy: CliquePolicy,
) -> Result<Feasibility> {
    let c_w = class.log_prefactor(policy)?;
    let excess = beta - class.critical_slope();
    if excess <= 0.0 {
        return Ok(Feasibility::NeverViolated { c_w });
    }
    Ok(Feasibility::Crossover {
        m_star: ((c_w - alpha) / excess).exp(),
        c_w,
    })
}
