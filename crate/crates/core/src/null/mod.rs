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

//! Randomized null ensembles and motif inference.

pub mod anneal;
pub mod gnp;
pub mod inference;
pub mod rewire;
pub mod rng;

pub use anneal::{anneal_match, energy, temperature, AnnealConfig, AnnealOutcome};
pub use gnp::{expected_counts_gnp, sample_gnp, sample_gnp_connected, MAX_REJECTIONS};
pub use inference::{
    default_targets, empirical_p, motif_scan, null_ensemble_stats, target_counts, z_and_pvalue,
    BootstrapBand, ClassTarget, EnsembleSpec, NullKind, NullStats, Verdict, ZScoreReport,
    ZScoreRow, ZTest,
};
pub use rewire::{rewire_chain, EdgeSwitcher, RewireOutcome, Switch};
pub use rng::{bootstrap_stream, stream, StreamRng};
