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

//! Simulated annealing over edge-pair switches that drives a degree-matched
//! graph to given non-nested 3-star and triangle counts.
//!
//! Energy is `Σ_i |r_i - q_i| / (r_i + q_i)` over the two counts, the
//! temperature follows `Ψ(t+1) = Ψ(t) / ln(t+1)` from `Ψ(1) = 100`, and one
//! switch is attempted per temperature step. Improving switches are always
//! kept; others are kept with probability `exp(-|ΔE| / Ψ(t))`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rewire::EdgeSwitcher;
use crate::census::{three_star_count, triangle_count};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub initial_temperature: f64,
    pub stop_energy: f64,
    pub max_steps: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            initial_temperature: 100.0,
            stop_energy: 1e-5,
            max_steps: 1_000_000,
        }
    }
}

/// `(|M̃_3^(3)|, |M_7^(3)|)`.
pub type ThreeNodeTargets = (u64, u64);

/// Temperature `Ψ(t)` for `t >= 1`.
pub fn temperature(initial: f64, t: u64) -> f64 {
    let mut psi = initial;
    for s in 1..t {
        psi /= ((s + 1) as f64).ln();
    }
    psi
}

pub fn energy(real: ThreeNodeTargets, rand: ThreeNodeTargets) -> f64 {
    let term = |r: u64, q: u64| {
        if r + q == 0 {
            0.0
        } else {
            r.abs_diff(q) as f64 / (r + q) as f64
        }
    };
    term(real.0, rand.0) + term(real.1, rand.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: u64,
    pub energy: f64,
    pub improving: bool,
}

#[derive(Clone, Debug)]
pub struct AnnealOutcome {
    /// Final graph when converged, otherwise the lowest-energy graph seen.
    pub graph: Graph,
    pub converged: bool,
    pub steps: u64,
    pub accepted: u64,
    pub energy: f64,
    /// Energy after every accepted switch.
    pub trace: Vec<TraceStep>,
}

pub fn anneal_match<R: Rng + ?Sized>(
    g_rand: &Graph,
    targets: ThreeNodeTargets,
    config: &AnnealConfig,
    rng: &mut R,
) -> AnnealOutcome {
    let stars = three_star_count(g_rand) as i64;
    let mut triangles = triangle_count(g_rand) as i64;
    let theta = |tri: i64| ((stars - 3 * tri) as u64, tri as u64);

    let mut sw = EdgeSwitcher::new(g_rand);
    let mut current = energy(targets, theta(triangles));
    let mut best = (current, sw.clone());
    let mut psi = config.initial_temperature;
    let mut trace = Vec::new();
    let mut accepted = 0;
    let mut step = 0;
    let mut converged = current < config.stop_energy;

    while !converged && step < config.max_steps {
        step += 1;
        if step > 1 {
            psi /= (step as f64).ln();
        }
        let Some(s) = sw.propose(rng) else {
            if sw.m() < 2 || (step % 10_000 == 0 && !sw.any_valid()) {
                break;
            }
            continue;
        };
        let delta_tri = sw.apply_counting_triangles(&s);
        let proposed = energy(targets, theta(triangles + delta_tri));
        let delta = proposed - current;
        let keep = delta <= 0.0 || rng.random::<f64>() < (-delta.abs() / psi).exp();
        if keep {
            triangles += delta_tri;
            current = proposed;
            accepted += 1;
            trace.push(TraceStep {
                step,
                energy: current,
                improving: delta < 0.0,
            });
            if current < best.0 {
                best = (current, sw.clone());
            }
            converged = current < config.stop_energy;
        } else {
            sw.revert(&s);
        }
    }

    let (energy, graph) = if converged {
        (current, sw.to_graph())
    } else {
        (best.0, best.1.to_graph())
    };
    AnnealOutcome {
        graph,
        converged,
        steps: step,
        accepted,
        energy,
        trace,
    }
}
