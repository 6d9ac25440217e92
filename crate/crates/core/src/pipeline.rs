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

//! Per-period orchestration of the full analysis over a [`PeriodSeries`].

use std::collections::BTreeMap;

use log::{info, warn};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{loglog_fit_counts, RegressionFit};
use crate::census::classes;
use crate::census::{clique_analysis, fisher_ryan_bound, CensusReport, Mode};
use crate::centrality::{
    degree_centrality, membership_centrality, rank_and_correlate, subgraph_centrality_estrada,
    CentralityVector, Membership, RankingReport,
};
use crate::error::Result;
use crate::geo::{kde, spatial_census, CenterMethod, Kde, Sphere, TriangleGeometry};
use crate::graph::{edge_churn, global_metrics, Churn, Graph, GraphMetrics};
use crate::ingest::PeriodSeries;
use crate::null::{
    motif_scan, stream, AnnealConfig, ClassTarget, EnsembleSpec, NullKind, ZScoreReport,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Whether `seed` was generated rather than given.
    pub seed_generated: bool,
    pub nulls: Vec<NullKind>,
    pub replications: usize,
    pub bootstrap: usize,
    pub rewire_steps: Option<usize>,
    pub anneal: AnnealConfig,
    /// Motif-scan classes; each null's defaults when unset.
    pub motif_classes: Option<Vec<ClassTarget>>,
    /// Classes counted by enumeration in addition to the 3-/4-node census.
    pub extra_classes: Vec<ClassTarget>,
    pub centrality: bool,
    pub membership_classes: Vec<ClassTarget>,
    pub top_k: usize,
    pub sphere: Sphere,
    pub center: CenterMethod,
    pub kde_bandwidth: Option<f64>,
    pub cliques: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            seed_generated: false,
            nulls: Vec::new(),
            replications: 1000,
            bootstrap: 100,
            rewire_steps: None,
            anneal: AnnealConfig::default(),
            motif_classes: None,
            extra_classes: Vec::new(),
            centrality: true,
            membership_classes: vec![
                ClassTarget::new(classes::triangle(), Mode::Nested),
                ClassTarget::new(classes::four_complete(), Mode::Nested),
            ],
            top_k: 10,
            sphere: Sphere::default(),
            center: CenterMethod::default(),
            kde_bandwidth: None,
            cliques: true,
        }
    }
}

impl PipelineConfig {
    pub fn census_only(seed: u64) -> PipelineConfig {
        PipelineConfig {
            seed,
            centrality: false,
            cliques: false,
            ..PipelineConfig::default()
        }
    }

    fn ensemble(&self, kind: NullKind, seed: u64) -> EnsembleSpec {
        EnsembleSpec {
            kind,
            replications: self.replications,
            bootstrap: self.bootstrap,
            master_seed: seed,
            rewire_steps: self.rewire_steps,
            anneal: self.anneal,
            targets: self.motif_classes.clone(),
            edge_probability: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueSummary {
    pub clique_number: usize,
    pub maximal_cliques: usize,
    /// Maximum cliques as sorted label lists.
    pub maximum_cliques: Vec<Vec<String>>,
    /// Clique-number bounds on edges, triangles and 4-completes.
    pub bounds: [u64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralitySection {
    pub labels: Vec<String>,
    pub vectors: Vec<CentralityVector>,
    pub ranking: RankingReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialSection {
    pub triangles: Vec<TriangleGeometry>,
    /// Absent when there are fewer than two triangles or all areas match.
    pub area_density: Option<Kde>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub period: String,
    pub seed: u64,
    pub metrics: GraphMetrics,
    pub census: CensusReport,
    pub cliques: Option<CliqueSummary>,
    pub zscores: Vec<ZScoreReport>,
    pub centrality: Option<CentralitySection>,
    pub spatial: Option<SpatialSection>,
    /// Against the previous period.
    pub churn: Option<Churn>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodError {
    pub period: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub class: String,
    pub fit: Option<RegressionFit>,
    pub points: Vec<(String, u64, u64)>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunBundle {
    pub config: PipelineConfig,
    pub periods: Vec<PeriodReport>,
    pub errors: Vec<PeriodError>,
    pub scaling: Vec<ScalingRow>,
}

/// Seed for period `index`, drawn from its own stream of the master seed.
pub fn period_seed(master: u64, index: usize) -> u64 {
    stream(master, index as u64).random()
}

fn clique_summary(g: &Graph) -> CliqueSummary {
    let c = clique_analysis(g);
    let w = c.clique_number as u64;
    let t = c.complete_counts;
    CliqueSummary {
        clique_number: c.clique_number,
        maximal_cliques: c.maximal_cliques.len(),
        maximum_cliques: c
            .maximum_cliques()
            .map(|q| q.iter().map(|&v| g.label(v).to_string()).collect())
            .collect(),
        bounds: [
            fisher_ryan_bound(t[0], w, 1),
            fisher_ryan_bound(t[1], w, 2),
            fisher_ryan_bound(t[2], w, 3),
        ],
    }
}

fn analyze_period(
    label: &str,
    g: &Graph,
    seed: u64,
    coords: Option<&BTreeMap<String, crate::geo::GeoPoint>>,
    config: &PipelineConfig,
) -> Result<PeriodReport> {
    info!("period {label}: n = {}, m = {}", g.n(), g.m());
    let extra: Vec<_> = config
        .extra_classes
        .iter()
        .map(|t| (t.class.clone(), t.mode))
        .collect();
    let census = CensusReport::with_extended(g, &extra)?;
    let cliques = config.cliques.then(|| clique_summary(g));
    let zscores = config
        .nulls
        .iter()
        .enumerate()
        .map(|(k, &kind)| motif_scan(g, &config.ensemble(kind, seed.wrapping_add(k as u64))))
        .collect::<Result<Vec<_>>>()?;
    let centrality = if config.centrality {
        let mut vectors = vec![degree_centrality(g)?, subgraph_centrality_estrada(g)?];
        for t in &config.membership_classes {
            vectors.push(membership_centrality(
                g,
                &t.class,
                t.mode,
                Membership::Containment,
            )?);
        }
        let labels = g.labels().to_vec();
        let ranking = rank_and_correlate(&labels, &vectors, config.top_k)?;
        Some(CentralitySection {
            labels,
            vectors,
            ranking,
        })
    } else {
        None
    };
    let spatial = match coords {
        Some(c) => {
            let triangles = spatial_census(g, c, config.sphere, config.center)?;
            let areas: Vec<f64> = triangles.iter().map(|t| t.area).collect();
            let area_density = match kde(&areas, config.kde_bandwidth) {
                Ok(k) => Some(k),
                Err(e) => {
                    warn!("period {label}: no area density ({e})");
                    None
                }
            };
            Some(SpatialSection {
                triangles,
                area_density,
            })
        }
        None => None,
    };
    Ok(PeriodReport {
        period: label.to_string(),
        seed,
        metrics: global_metrics(g),
        census,
        cliques,
        zscores,
        centrality,
        spatial,
        churn: None,
    })
}

/// `(m, count)` fits for every census key across the successful periods.
pub fn scaling_fits(periods: &[PeriodReport]) -> Vec<ScalingRow> {
    let mut keys: Vec<String> = Vec::new();
    let mut points: BTreeMap<String, Vec<(String, u64, u64)>> = BTreeMap::new();
    for p in periods {
        for (key, count) in p.census.record() {
            if !points.contains_key(&key) {
                keys.push(key.clone());
            }
            points
                .entry(key)
                .or_default()
                .push((p.period.clone(), p.census.m as u64, count));
        }
    }
    keys.into_iter()
        .map(|class| {
            let pts = points.remove(&class).unwrap_or_default();
            let xy: Vec<(u64, u64)> = pts.iter().map(|p| (p.1, p.2)).collect();
            let (fit, error) = match loglog_fit_counts(&xy) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            ScalingRow {
                class,
                fit,
                points: pts,
                error,
            }
        })
        .collect()
}

/// Analyze every period. A failing period is recorded in `errors` and the
/// others proceed.
pub fn run_pipeline(series: &PeriodSeries, config: &PipelineConfig) -> RunBundle {
    let outcomes: Vec<Result<PeriodReport>> = series
        .periods
        .par_iter()
        .enumerate()
        .map(|(i, (label, g))| {
            analyze_period(
                label,
                g,
                period_seed(config.seed, i),
                series.coords.as_ref(),
                config,
            )
        })
        .collect();
    let mut periods = Vec::new();
    let mut errors = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(mut report) => {
                if i > 0 {
                    report.churn = Some(edge_churn(&series.periods[i - 1].1, &series.periods[i].1));
                }
                periods.push(report);
            }
            Err(e) => {
                warn!("period {}: {e}", series.periods[i].0);
                errors.push(PeriodError {
                    period: series.periods[i].0.clone(),
                    message: e.to_string(),
                });
            }
        }
    }
    let scaling = scaling_fits(&periods);
    RunBundle {
        config: config.clone(),
        periods,
        errors,
        scaling,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::regime_graph;
    use crate::graph::families;

    #[test]
    fn single_k4_census() {
        let b = run_pipeline(
            &PeriodSeries::single("Q1", families::complete(4)),
            &PipelineConfig::census_only(1),
        );
        assert_eq!(
            b.periods[0].census.nested.to_array(),
            [12, 4, 4, 12, 12, 3, 6, 1]
        );
        assert!(b.errors.is_empty());
    }

    #[test]
    fn identical_periods_have_no_churn() {
        let g = families::cycle(5);
        let s = PeriodSeries {
            periods: vec![("a".into(), g.clone()), ("b".into(), g)],
            coords: None,
        };
        let b = run_pipeline(&s, &PipelineConfig::census_only(1));
        assert_eq!(
            b.periods[1].churn,
            Some(Churn {
                added_pct: Some(0.0),
                lost_pct: Some(0.0)
            })
        );
    }

    #[test]
    fn regime_series_fit() {
        let s = PeriodSeries {
            periods: (4..=30)
                .map(|l| (format!("l{l:02}"), regime_graph(20, l)))
                .collect(),
            coords: None,
        };
        let b = run_pipeline(&s, &PipelineConfig::census_only(0));
        let row = b.scaling.iter().find(|r| r.class == "M_3_3").unwrap();
        let fit = row.fit.as_ref().unwrap();
        assert!((fit.beta - 1.56).abs() < 0.02 && (fit.r2 - 0.983).abs() < 0.005);
    }

    #[test]
    fn failing_period_is_recorded() {
        let s = PeriodSeries {
            periods: vec![
                ("ok".into(), families::cycle(5)),
                ("bad".into(), Graph::from_index_edges(4, &[(0, 1), (2, 3)])),
            ],
            coords: None,
        };
        let config = PipelineConfig {
            nulls: vec![NullKind::Rewire],
            replications: 5,
            bootstrap: 2,
            ..PipelineConfig::census_only(3)
        };
        let b = run_pipeline(&s, &config);
        assert_eq!(b.periods.len(), 1);
        assert_eq!(b.errors[0].period, "bad");
    }
}
