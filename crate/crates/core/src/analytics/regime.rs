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

//! Regime-switching growth: a star up to `n*` nodes, after which every new
//! node links to all existing nodes.

use serde::{Deserialize, Serialize};

use super::{loglog_fit_counts, RegressionFit};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeModelSpec {
    pub n_star: usize,
    pub n_final: usize,
}

impl RegimeModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_star < 2 || self.n_star >= self.n_final {
            return Err(Error::InvalidArgument(format!(
                "regime model needs 2 <= n* < n_final, got n* = {}, n_final = {}",
                self.n_star, self.n_final
            )));
        }
        Ok(())
    }
}

/// The model graph with `l` nodes; node 0 is the star centre.
pub fn regime_graph(n_star: usize, l: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..l.min(n_star)).map(|i| (0, i)).collect();
    for v in n_star..l {
        edges.extend((0..v).map(|u| (u, v)));
    }
    Graph::from_index_edges(l, &edges)
}

/// Graphs for `l = 2..=n_final`.
pub fn regime_model_build(spec: RegimeModelSpec) -> Result<Vec<Graph>> {
    spec.validate()?;
    Ok((2..=spec.n_final)
        .map(|l| regime_graph(spec.n_star, l))
        .collect())
}

/// Closed-form `(m, |M_3^(3)|)` at size `l`.
pub fn regime_analytic_counts(n_star: usize, l: usize) -> Result<(u64, u64)> {
    if l < 2 || n_star < 2 {
        return Err(Error::InvalidArgument(format!(
            "need l >= 2 and n* >= 2, got l = {l}, n* = {n_star}"
        )));
    }
    let ns = n_star as u64;
    if l <= n_star {
        let m = l as u64 - 1;
        return Ok((m, m * m.saturating_sub(1) / 2));
    }
    let a = (l - n_star) as u64;
    let m = (a + 1) * (2 * ns + a - 2) / 2;
    let stars = (a + 1) * (a * (ns - 1) + (ns + a - 1) * (ns + a - 2)) / 2;
    Ok((m, stars))
}

/// Fit of `|M_3^(3)|` on `m` over `l` in `ls`.
pub fn regime_trajectory(
    n_star: usize,
    ls: impl IntoIterator<Item = usize>,
) -> Result<RegressionFit> {
    let pts = ls
        .into_iter()
        .map(|l| regime_analytic_counts(n_star, l))
        .collect::<Result<Vec<_>>>()?;
    loglog_fit_counts(&pts)
}
