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

//! Null ensembles and z-score inference for subgraph counts.

use log::{debug, warn};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::anneal::{anneal_match, AnnealConfig};
use super::gnp::{expected_counts_gnp, sample_gnp_connected};
use super::rewire::rewire_chain;
use super::rng::{bootstrap_stream, stream, StreamRng};
use crate::census::{
    classes, count_instances, star_code, star_count, CensusReport, Mode, SubgraphClass,
};
use crate::error::{Error, Result};
use crate::graph::{families, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullKind {
    /// Connected `G(n, p)` with `p` equal to the observed density.
    Gnp,
    /// Degree-preserving edge switching.
    Rewire,
    /// Rewiring followed by annealing onto the observed non-nested 3-node
    /// counts.
    RewireAnneal,
}

impl NullKind {
    pub fn name(self) -> &'static str {
        match self {
            NullKind::Gnp => "gnp",
            NullKind::Rewire => "rewire",
            NullKind::RewireAnneal => "rewire_anneal",
        }
    }
}

impl std::str::FromStr for NullKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<NullKind> {
        match s {
            "gnp" => Ok(NullKind::Gnp),
            "rewire" => Ok(NullKind::Rewire),
            "anneal" | "rewire_anneal" | "rewire-anneal" => Ok(NullKind::RewireAnneal),
            _ => Err(Error::InvalidArgument(format!(
                "unknown null ensemble `{s}`"
            ))),
        }
    }
}

/// A class together with the counting mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTarget {
    pub class: SubgraphClass,
    pub mode: Mode,
}

impl ClassTarget {
    pub fn new(class: SubgraphClass, mode: Mode) -> ClassTarget {
        ClassTarget { class, mode }
    }

    pub fn key(&self) -> String {
        self.class
            .key(self.mode == Mode::NonNested && !self.class.is_complete())
    }

    /// Parse a record key such as `Mt_3_3`.
    pub fn parse(s: &str) -> Result<ClassTarget> {
        let (class, non_nested) = SubgraphClass::parse_key(s)?;
        let mode = if non_nested {
            Mode::NonNested
        } else {
            Mode::Nested
        };
        Ok(ClassTarget { class, mode })
    }
}

/// Classes tested against each ensemble by default.
pub fn default_targets(kind: NullKind) -> Vec<ClassTarget> {
    use Mode::*;
    match kind {
        NullKind::Gnp => vec![
            ClassTarget::new(classes::three_star(), Nested),
            ClassTarget::new(classes::three_star(), NonNested),
            ClassTarget::new(classes::triangle(), Nested),
        ],
        NullKind::Rewire => vec![
            ClassTarget::new(classes::three_star(), NonNested),
            ClassTarget::new(classes::triangle(), Nested),
        ],
        NullKind::RewireAnneal => vec![
            ClassTarget::new(classes::four_star(), NonNested),
            ClassTarget::new(classes::four_path(), NonNested),
            ClassTarget::new(classes::tadpole(), NonNested),
            ClassTarget::new(classes::four_circle(), NonNested),
            ClassTarget::new(classes::diamond(), NonNested),
            ClassTarget::new(classes::four_complete(), Nested),
        ],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: NullKind,
    pub replications: usize,
    pub bootstrap: usize,
    pub master_seed: u64,
    /// Successful switches per rewired replication, `100 m` when unset.
    pub rewire_steps: Option<usize>,
    pub anneal: AnnealConfig,
    /// Overrides [`default_targets`].
    pub targets: Option<Vec<ClassTarget>>,
    /// Edge probability of the `G(n, p)` null, the observed density when
    /// unset.
    pub edge_probability: Option<f64>,
}

impl EnsembleSpec {
    pub fn new(kind: NullKind, master_seed: u64) -> EnsembleSpec {
        EnsembleSpec {
            kind,
            replications: 1000,
            bootstrap: 100,
            master_seed,
            rewire_steps: None,
            anneal: AnnealConfig::default(),
            targets: None,
            edge_probability: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 replications, got {}",
                self.replications
            )));
        }
        if self.bootstrap < 1 {
            return Err(Error::InvalidArgument(
                "need at least 1 bootstrap resample".into(),
            ));
        }
        if let Some(p) = self.edge_probability {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "p = {p} is not a probability"
                )));
            }
        }
        Ok(())
    }

    pub fn targets(&self) -> Vec<ClassTarget> {
        self.targets
            .clone()
            .unwrap_or_else(|| default_targets(self.kind))
    }

    pub fn gnp_probability(&self, g: &Graph) -> f64 {
        self.edge_probability.unwrap_or_else(|| g.density())
    }

    pub fn switches_for(&self, g: &Graph) -> usize {
        self.rewire_steps.unwrap_or(100 * g.m())
    }
}

/// Counts of `targets` in `g`, in order.
pub fn target_counts(g: &Graph, targets: &[ClassTarget]) -> Result<Vec<u64>> {
    let small = targets
        .iter()
        .any(|t| t.class.b <= 4)
        .then(|| CensusReport::of(g));
    targets
        .iter()
        .map(|t| {
            if let Some(v) = small.as_ref().and_then(|r| r.count(&t.class, t.mode)) {
                return Ok(v);
            }
            if t.mode == Mode::Nested && t.class.a == star_code(t.class.b) {
                return Ok(star_count(g, t.class.b));
            }
            count_instances(g, &t.class, t.mode)
        })
        .collect()
}

/// Per-class null moments plus the raw replication samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullStats {
    pub targets: Vec<ClassTarget>,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    /// `samples[k]` holds class `k` over the retained replications, in
    /// replication order.
    pub samples: Vec<Vec<u64>>,
    /// Whether `mu[k]` is the closed-form `G(n, p)` expectation.
    pub analytic_mean: Vec<bool>,
    pub retained: usize,
    /// Annealing runs that hit the step cap.
    pub discarded: usize,
    /// Rewired replications that ended up disconnected.
    pub disconnected: usize,
    /// Replications where no valid switch existed.
    pub stalled: usize,
}

struct Replica {
    counts: Vec<u64>,
    disconnected: bool,
    stalled: bool,
}

fn replicate(
    g: &Graph,
    spec: &EnsembleSpec,
    targets: &[ClassTarget],
    index: usize,
) -> Result<Option<Replica>> {
    let mut rng = stream(spec.master_seed, index as u64);
    let (graph, stalled) = match spec.kind {
        NullKind::Gnp => {
            let p = spec.gnp_probability(g);
            let draw = if p >= 1.0 {
                families::complete(g.n())
            } else {
                sample_gnp_connected(g.n(), p, &mut rng)?
            };
            (draw, false)
        }
        NullKind::Rewire | NullKind::RewireAnneal => {
            let out = rewire_chain(g, spec.switches_for(g), &mut rng);
            (out.graph, out.stalled)
        }
    };
    let graph = if spec.kind == NullKind::RewireAnneal {
        let c = CensusReport::of(g);
        let goal = (c.non_nested.three_star, c.nested.triangle);
        let out = anneal_match(&graph, goal, &spec.anneal, &mut rng);
        if !out.converged {
            warn!(
                "replication {index}: annealing stopped at energy {:.3e} after {} steps, discarded",
                out.energy, out.steps
            );
            return Ok(None);
        }
        out.graph
    } else {
        graph
    };
    Ok(Some(Replica {
        counts: target_counts(&graph, targets)?,
        disconnected: spec.kind != NullKind::Gnp && !graph.is_connected(),
        stalled,
    }))
}

fn mean(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with `n - 1` in the denominator, around `center`
/// being the sample mean.
fn sample_sd(xs: &[u64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|&x| (x as f64 - m).powi(2)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

/// Draw the ensemble and summarise it per class.
pub fn null_ensemble_stats(g: &Graph, spec: &EnsembleSpec) -> Result<NullStats> {
    spec.validate()?;
    let targets = spec.targets();
    let replicas = (0..spec.replications)
        .into_par_iter()
        .map(|i| replicate(g, spec, &targets, i))
        .collect::<Result<Vec<_>>>()?;
    let discarded = replicas.iter().filter(|r| r.is_none()).count();
    let kept: Vec<Replica> = replicas.into_iter().flatten().collect();
    if kept.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "only {} of {} replications converged",
            kept.len(),
            spec.replications
        )));
    }
    let samples: Vec<Vec<u64>> = (0..targets.len())
        .map(|k| kept.iter().map(|r| r.counts[k]).collect())
        .collect();

    let analytic = if spec.kind == NullKind::Gnp {
        let p = spec.gnp_probability(g);
        Some((
            expected_counts_gnp(g.n() as u64, p, Mode::Nested)?,
            expected_counts_gnp(g.n() as u64, p, Mode::NonNested)?,
        ))
    } else {
        None
    };
    let small = classes::three_and_four();
    let mut mu = Vec::new();
    let mut analytic_mean = Vec::new();
    for (t, xs) in targets.iter().zip(&samples) {
        let slot = small
            .iter()
            .position(|c| c.a == t.class.a && c.b == t.class.b);
        match (&analytic, slot) {
            (Some((nested, non_nested)), Some(k)) => {
                mu.push(if t.mode == Mode::Nested {
                    nested[k]
                } else {
                    non_nested[k]
                });
                analytic_mean.push(true);
            }
            _ => {
                mu.push(mean(xs));
                analytic_mean.push(false);
            }
        }
    }
    let sigma = samples.iter().map(|xs| sample_sd(xs)).collect();
    let disconnected = kept.iter().filter(|r| r.disconnected).count();
    let stalled = kept.iter().filter(|r| r.stalled).count();
    debug!(
        "{} null: {} of {} replications kept",
        spec.kind.name(),
        kept.len(),
        spec.replications
    );
    Ok(NullStats {
        targets,
        mu,
        sigma,
        samples,
        analytic_mean,
        retained: kept.len(),
        discarded,
        disconnected,
        stalled,
    })
}

/// Two-sided add-one-smoothed tail fraction of `samples` at least as far
/// from `mu` as `observed`.
pub fn empirical_p(observed: f64, mu: f64, samples: &[u64]) -> f64 {
    let d = (observed - mu).abs();
    let tol = 1e-9 * d.max(1.0);
    let hits = samples
        .iter()
        .filter(|&&s| (s as f64 - mu).abs() >= d - tol)
        .count();
    (1 + hits) as f64 / (samples.len() + 1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapBand {
    pub median: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZTest {
    pub z: f64,
    pub p_emp: f64,
    pub p_boot: BootstrapBand,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// z-score and p-values for one class. The bootstrap resamples the null
/// sample `bootstrap` times, re-centres on each resample's mean and reports
/// the median and 2.5/97.5 percentiles of the resulting empirical p.
pub fn z_and_pvalue(
    observed: u64,
    mu: f64,
    sigma: f64,
    samples: &[u64],
    bootstrap: usize,
    rng: &mut StreamRng,
) -> Result<ZTest> {
    if sigma.is_nan() || sigma <= 0.0 || samples.is_empty() {
        return Err(Error::DegenerateNull);
    }
    if bootstrap < 1 {
        return Err(Error::InvalidArgument(
            "need at least 1 bootstrap resample".into(),
        ));
    }
    let obs = observed as f64;
    let mut ps: Vec<f64> = (0..bootstrap)
        .map(|_| {
            let resample: Vec<u64> = (0..samples.len())
                .map(|_| samples[rng.random_range(0..samples.len())])
                .collect();
            empirical_p(obs, mean(&resample), &resample)
        })
        .collect();
    ps.sort_by(f64::total_cmp);
    Ok(ZTest {
        z: (obs - mu) / sigma,
        p_emp: empirical_p(obs, mu, samples),
        p_boot: BootstrapBand {
            median: quantile(&ps, 0.5),
            lower: quantile(&ps, 0.025),
            upper: quantile(&ps, 0.975),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Motif,
    AntiMotif,
    NotSignificant,
    Degenerate,
}

impl Verdict {
    pub fn from_z(z: Option<f64>) -> Verdict {
        match z {
            None => Verdict::Degenerate,
            Some(z) if z > 2.0 => Verdict::Motif,
            Some(z) if z < -2.0 => Verdict::AntiMotif,
            Some(_) => Verdict::NotSignificant,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Motif => "motif",
            Verdict::AntiMotif => "anti-motif",
            Verdict::NotSignificant => "not-significant",
            Verdict::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZScoreRow {
    pub class: String,
    pub observed: u64,
    pub mu: f64,
    pub sigma: f64,
    pub z: Option<f64>,
    pub p_emp: Option<f64>,
    pub p_boot: Option<BootstrapBand>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZScoreReport {
    pub ensemble: NullKind,
    pub seed: u64,
    pub replications: usize,
    pub bootstrap: usize,
    pub retained: usize,
    pub discarded: usize,
    pub disconnected: usize,
    pub stalled: usize,
    pub rows: Vec<ZScoreRow>,
}

impl ZScoreReport {
    pub fn row(&self, key: &str) -> Option<&ZScoreRow> {
        self.rows.iter().find(|r| r.class == key)
    }
}

/// Observed counts against the ensemble described by `spec`.
pub fn motif_scan(g: &Graph, spec: &EnsembleSpec) -> Result<ZScoreReport> {
    spec.validate()?;
    if !g.is_connected() {
        return Err(Error::InvalidArgument(
            "motif scan needs a connected graph".into(),
        ));
    }
    let stats = null_ensemble_stats(g, spec)?;
    let observed = target_counts(g, &stats.targets)?;
    let mut rows = Vec::new();
    for (k, t) in stats.targets.iter().enumerate() {
        let mut rng = bootstrap_stream(spec.master_seed, k as u64);
        let test = match z_and_pvalue(
            observed[k],
            stats.mu[k],
            stats.sigma[k],
            &stats.samples[k],
            spec.bootstrap,
            &mut rng,
        ) {
            Ok(t) => Some(t),
            Err(Error::DegenerateNull) => None,
            Err(e) => return Err(e),
        };
        let z = test.map(|t| t.z);
        rows.push(ZScoreRow {
            class: t.key(),
            observed: observed[k],
            mu: stats.mu[k],
            sigma: stats.sigma[k],
            z,
            p_emp: test.map(|t| t.p_emp),
            p_boot: test.map(|t| t.p_boot),
            verdict: Verdict::from_z(z),
        });
    }
    Ok(ZScoreReport {
        ensemble: spec.kind,
        seed: spec.master_seed,
        replications: spec.replications,
        bootstrap: spec.bootstrap,
        retained: stats.retained,
        discarded: stats.discarded,
        disconnected: stats.disconnected,
        stalled: stats.stalled,
        rows,
    })
}
