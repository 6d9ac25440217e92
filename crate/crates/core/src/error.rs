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

use thiserror::Error;

/// Errors raised by graph construction, analysis and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on `{label}` (row {row})")]
    SelfLoop { label: String, row: usize },
    #[error("empty edge list")]
    EmptyEdgeList,
    #[error("no data")]
    NoData,
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("unknown header `{found}`, expected `{expected}`")]
    Header { found: String, expected: String },
    #[error("template is not connected")]
    DisconnectedTemplate,
    #[error("unsupported subgraph size {0}, expected 3..=6")]
    UnsupportedSize(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no connected G({n}, {p}) draw in {attempts} attempts, try a larger p")]
    Disconnected { n: usize, p: f64, attempts: usize },
    #[error("degenerate null: zero variance")]
    DegenerateNull,
    #[error("eigendecomposition did not converge")]
    EigenNonConvergence,
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("missing coordinates for: {}", .0.join(", "))]
    MissingCoordinates(Vec<String>),
    #[error("zero variance in data, pass an explicit bandwidth")]
    ZeroVariance,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
