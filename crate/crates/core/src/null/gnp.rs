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

//! Erdős–Rényi null: expected counts and seeded sampling.

use rand::Rng;

use crate::census::{binomial, classes, Mode};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Consecutive disconnected draws tolerated by [`sample_gnp_connected`].
pub const MAX_REJECTIONS: usize = 10_000;

fn choose(n: u64, k: u64) -> f64 {
    binomial(n as u128, k as u128).map_or(f64::INFINITY, |v| v as f64)
}

/// Expected counts of the eight 3-/4-node classes in `G(n, p)`, in class
/// code order (M3, M7, M11, M13, M15, M30, M31, M63). Non-nested mode
/// multiplies each by `(1-p)^(b(b-1)/2 - c)`.
pub fn expected_counts_gnp(n: u64, p: f64, mode: Mode) -> Result<[f64; 8]> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "p = {p} is not a probability"
        )));
    }
    let c3 = choose(n, 3);
    let c4 = choose(n, 4);
    let nested = [
        3.0 * c3 * p.powi(2),
        c3 * p.powi(3),
        4.0 * c4 * p.powi(3),
        12.0 * c4 * p.powi(3),
        3.0 * c3 * n.saturating_sub(3) as f64 * p.powi(4),
        3.0 * c4 * p.powi(4),
        6.0 * c4 * p.powi(5),
        c4 * p.powi(6),
    ];
    Ok(match mode {
        Mode::Nested => nested,
        Mode::NonNested => {
            let mut out = nested;
            for (v, class) in out.iter_mut().zip(classes::three_and_four()) {
                let missing = class.b * (class.b - 1) / 2 - class.edge_count();
                *v *= (1.0 - p).powi(missing as i32);
            }
            out
        }
    })
}

/// One unconditioned draw from `G(n, p)`.
pub fn sample_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_index_edges(n, &edges)
}

/// Draw from `G(n, p)` conditioned on connectivity, by rejection.
pub fn sample_gnp_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "connected G(n, p) sampling needs 0 < p < 1, got {p}"
        )));
    }
    for _ in 0..MAX_REJECTIONS {
        let g = sample_gnp(n, p, rng);
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Disconnected {
        n,
        p,
        attempts: MAX_REJECTIONS,
    })
}
