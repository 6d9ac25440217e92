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

//! Small-subgraph analytics for undirected networks observed over time:
//! exact nested and non-nested censuses, motif detection against three
//! randomized null ensembles, log-log scaling fits, subgraph-based node
//! centralities and the spherical geometry of triangle subgraphs.

pub mod analytics;
pub mod census;
pub mod centrality;
pub mod error;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod null;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
pub use graph::Graph;
