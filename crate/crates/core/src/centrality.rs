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

//! Node centralities: degree, Estrada subgraph centrality and subgraph
//! membership, plus top-k rankings and Pearson correlations between them.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::census::{edge_coverage_counts, membership_counts, Mode, SubgraphClass};
use crate::error::{Error, Result};
use crate::graph::Graph;

const EIGEN_EPS: f64 = 1e-10;
const EIGEN_MAX_ITER: usize = 10_000;
const SERIES_TERMS: usize = 30;

/// One value per node, aligned with node indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub measure: String,
    pub values: Vec<f64>,
}

/// What a membership count tallies for each node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// Instances whose node set contains the node.
    #[default]
    Containment,
    /// Instance edges incident to the node.
    EdgeCoverage,
}

pub fn degree_centrality(g: &Graph) -> Result<CentralityVector> {
    if g.n() < 2 {
        return Err(Error::InvalidArgument(
            "degree centrality needs n >= 2".into(),
        ));
    }
    let d = (g.n() - 1) as f64;
    Ok(CentralityVector {
        measure: "degree".into(),
        values: g.degrees().iter().map(|&k| k as f64 / d).collect(),
    })
}

fn adjacency(g: &Graph) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(g.n(), g.n());
    for &(i, j) in g.edges() {
        a[(i, j)] = 1.0;
        a[(j, i)] = 1.0;
    }
    a
}

/// `B_S(i) = Σ_j ν_j(i)² e^{λ_j}` from the eigendecomposition of `g`.
pub fn subgraph_centrality_estrada(g: &Graph) -> Result<CentralityVector> {
    let values = if g.n() == 0 {
        Vec::new()
    } else {
        let eig = SymmetricEigen::try_new(adjacency(g), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or(Error::EigenNonConvergence)?;
        let w: Vec<f64> = eig.eigenvalues.iter().map(|l| l.exp()).collect();
        (0..g.n())
            .map(|i| {
                let row = eig.eigenvectors.row(i);
                row.iter().zip(&w).map(|(v, e)| v * v * e).sum()
            })
            .collect()
    };
    Ok(CentralityVector {
        measure: "subgraph".into(),
        values,
    })
}

/// Diagonal of `exp(g)` from a Taylor series on `g / 2^s`, squared back
/// `s` times, with `s` chosen so the scaled matrix has norm at most 1/2.
pub fn subgraph_centrality_series(g: &Graph) -> CentralityVector {
    let n = g.n();
    let norm = g.degrees().iter().copied().max().unwrap_or(0) as f64;
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let a = adjacency(g) / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for tau in 1..=SERIES_TERMS {
        term = &term * &a / tau as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    CentralityVector {
        measure: "subgraph-series".into(),
        values: (0..n).map(|i| sum[(i, i)]).collect(),
    }
}

pub fn membership_centrality(
    g: &Graph,
    class: &SubgraphClass,
    mode: Mode,
    kind: Membership,
) -> Result<CentralityVector> {
    let counts = match kind {
        Membership::Containment => membership_counts(g, class, mode)?,
        Membership::EdgeCoverage => edge_coverage_counts(g, class, mode)?,
    };
    let key = class.key(mode == Mode::NonNested && !class.is_complete());
    let measure = match kind {
        Membership::Containment => format!("membership:{key}"),
        Membership::EdgeCoverage => format!("edge-coverage:{key}"),
    };
    Ok(CentralityVector {
        measure,
        values: counts.into_iter().map(|c| c as f64).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRecord {
    pub rank: usize,
    pub measure: String,
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub measures: Vec<String>,
    pub top: Vec<RankRecord>,
    /// Pearson correlations; `None` when either vector is constant.
    pub correlations: Vec<Vec<Option<f64>>>,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Top `k` nodes per measure (ties by label) and the correlation matrix.
pub fn rank_and_correlate(
    labels: &[String],
    vs: &[CentralityVector],
    k: usize,
) -> Result<RankingReport> {
    if let Some(v) = vs.iter().find(|v| v.values.len() != labels.len()) {
        return Err(Error::InvalidArgument(format!(
            "measure `{}` has {} values for {} nodes",
            v.measure,
            v.values.len(),
            labels.len()
        )));
    }
    let mut top = Vec::new();
    for v in vs {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| {
            v.values[b]
                .total_cmp(&v.values[a])
                .then_with(|| labels[a].cmp(&labels[b]))
        });
        for (r, &i) in order.iter().take(k).enumerate() {
            top.push(RankRecord {
                rank: r + 1,
                measure: v.measure.clone(),
                label: labels[i].clone(),
                value: v.values[i],
            });
        }
    }
    let correlations = vs
        .iter()
        .map(|a| vs.iter().map(|b| pearson(&a.values, &b.values)).collect())
        .collect();
    Ok(RankingReport {
        measures: vs.iter().map(|v| v.measure.clone()).collect(),
        top,
        correlations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::classes;
    use crate::graph::families::*;

    #[test]
    fn degree_examples() {
        assert!(degree_centrality(&complete(5))
            .unwrap()
            .values
            .iter()
            .all(|&v| v == 1.0));
        let s = degree_centrality(&star(5)).unwrap().values;
        let hub = (0..5).find(|&i| star(5).degree(i) == 4).unwrap();
        assert_eq!(s[hub], 1.0);
        assert!(s.iter().enumerate().all(|(i, &v)| i == hub || v == 0.25));
        assert!(degree_centrality(&cycle(4))
            .unwrap()
            .values
            .iter()
            .all(|&v| (v - 2.0 / 3.0).abs() < 1e-15));
        assert!(degree_centrality(&Graph::from_index_edges(1, &[])).is_err());
    }

    #[test]
    fn estrada_small_cases() {
        let one = subgraph_centrality_estrada(&Graph::from_index_edges(1, &[])).unwrap();
        assert!((one.values[0] - 1.0).abs() < 1e-12);
        let k2 = subgraph_centrality_estrada(&complete(2)).unwrap();
        assert!(k2.values.iter().all(|v| (v - 1f64.cosh()).abs() < 1e-9));
        let k3 = subgraph_centrality_estrada(&complete(3)).unwrap();
        let want = (2f64.exp() + 2.0 * (-1f64).exp()) / 3.0;
        assert!(k3.values.iter().all(|v| (v - want).abs() < 1e-9));
    }

    #[test]
    fn routes_agree() {
        for g in [complete(7), cycle(9), star(6), path(5)] {
            let a = subgraph_centrality_estrada(&g).unwrap().values;
            let b = subgraph_centrality_series(&g).values;
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn membership_examples() {
        let k4 = membership_centrality(
            &complete(4),
            &classes::triangle(),
            Mode::Nested,
            Membership::Containment,
        )
        .unwrap();
        assert!(k4.values.iter().all(|&v| v == 3.0));
        let c4 = membership_centrality(
            &cycle(4),
            &classes::four_circle(),
            Mode::NonNested,
            Membership::Containment,
        )
        .unwrap();
        assert!(c4.values.iter().all(|&v| v == 1.0));
        let g = star(5);
        let s = membership_centrality(
            &g,
            &classes::three_star(),
            Mode::Nested,
            Membership::Containment,
        )
        .unwrap();
        let hub = (0..5).find(|&i| g.degree(i) == 4).unwrap();
        assert_eq!(s.values[hub], 6.0);
    }

    #[test]
    fn edge_coverage_differs_from_containment() {
        // a triangle covers two incident edges at each of its nodes
        let k4 = membership_centrality(
            &complete(4),
            &classes::triangle(),
            Mode::Nested,
            Membership::EdgeCoverage,
        )
        .unwrap();
        assert!(k4.values.iter().all(|&v| v == 6.0));
    }

    #[test]
    fn correlation_examples() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let x = CentralityVector {
            measure: "x".into(),
            values: vec![1.0, 2.0, 4.0],
        };
        let neg = CentralityVector {
            measure: "neg".into(),
            values: vec![-1.0, -2.0, -4.0],
        };
        let flat = CentralityVector {
            measure: "flat".into(),
            values: vec![2.0, 2.0, 2.0],
        };
        let r = rank_and_correlate(&labels, &[x.clone(), neg, flat], 2).unwrap();
        assert!((r.correlations[0][0].unwrap() - 1.0).abs() < 1e-12);
        assert!((r.correlations[0][1].unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(r.correlations[0][2], None);
        let flat_top: Vec<&str> = r
            .top
            .iter()
            .filter(|t| t.measure == "flat")
            .map(|t| t.label.as_str())
            .collect();
        assert_eq!(flat_top, ["a", "b"]);
        assert_eq!(r.top[0].label, "c");
    }
}
