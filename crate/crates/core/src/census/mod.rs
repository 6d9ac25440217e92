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

//! Exact subgraph censuses.
//!
//! Nested counts for the eight 3- and 4-node classes come from closed-form
//! expressions in degrees, traces of adjacency powers, and triangle counts in
//! node neighbourhoods. Non-nested counts are integer linear combinations of
//! the nested ones. Larger classes go through the enumeration engine.

pub mod canonical;
pub mod clique;
pub mod enumerate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

pub use canonical::{canonical_code, classes, gamma_ratio, SubgraphClass, Template};
pub use clique::{clique_analysis, fisher_ryan_bound, CliqueAnalysis};
pub use enumerate::{
    count_instances, edge_coverage_counts, enumerate_instances, enumerate_instances_with,
    membership_counts, Instance, Route,
};

/// Whether an instance may sit inside a denser subgraph on the same nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Nested,
    NonNested,
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn exact_div(num: u128, den: u128, what: &str) -> u128 {
    assert!(
        num.is_multiple_of(den),
        "internal consistency: {what} = {num}/{den} is not integral"
    );
    num / den
}

fn checked(v: Option<u128>, what: &str) -> u128 {
    v.unwrap_or_else(|| panic!("overflow computing {what}"))
}

fn to_u64(v: u128, what: &str) -> u64 {
    u64::try_from(v).unwrap_or_else(|_| panic!("{what} = {v} exceeds 64 bits"))
}

/// Nested counts of the eight connected 3- and 4-node classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedCounts {
    pub three_star: u64,
    pub triangle: u64,
    pub four_star: u64,
    pub four_path: u64,
    pub tadpole: u64,
    pub four_circle: u64,
    pub diamond: u64,
    pub four_complete: u64,
}

impl NestedCounts {
    /// In class-code order: M3, M7, M11, M13, M15, M30, M31, M63.
    pub fn to_array(&self) -> [u64; 8] {
        [
            self.three_star,
            self.triangle,
            self.four_star,
            self.four_path,
            self.tadpole,
            self.four_circle,
            self.diamond,
            self.four_complete,
        ]
    }

    pub fn get(&self, class: &SubgraphClass) -> Option<u64> {
        classes::three_and_four()
            .iter()
            .position(|c| c.a == class.a && c.b == class.b)
            .map(|k| self.to_array()[k])
    }
}

/// Non-nested counts of the six classes that can be nested. The triangle and
/// 4-complete are their own non-nested counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonNestedCounts {
    pub three_star: u64,
    pub four_star: u64,
    pub four_path: u64,
    pub tadpole: u64,
    pub four_circle: u64,
    pub diamond: u64,
}

impl NonNestedCounts {
    /// In class-code order: M̃3, M̃11, M̃13, M̃15, M̃30, M̃31.
    pub fn to_array(&self) -> [u64; 6] {
        [
            self.three_star,
            self.four_star,
            self.four_path,
            self.tadpole,
            self.four_circle,
            self.diamond,
        ]
    }

    /// Non-nested count of any of the eight 3-/4-node classes, taking the
    /// complete classes from `nested`.
    pub fn get(&self, class: &SubgraphClass, nested: &NestedCounts) -> Option<u64> {
        Some(match (class.b, class.a) {
            (3, 3) => self.three_star,
            (3, 7) => nested.triangle,
            (4, 11) => self.four_star,
            (4, 13) => self.four_path,
            (4, 15) => self.tadpole,
            (4, 30) => self.four_circle,
            (4, 31) => self.diamond,
            (4, 63) => nested.four_complete,
            _ => return None,
        })
    }
}

/// `|M_3^(3)| = Σ_i C(k_i, 2)`, exact.
pub fn three_star_count(g: &Graph) -> u64 {
    star_count(g, 3)
}

/// Number of `b`-node stars, `Σ_i C(k_i, b-1)`.
pub fn star_count(g: &Graph, b: usize) -> u64 {
    assert!(b >= 2, "a star needs at least two nodes");
    let total = g.degrees().iter().try_fold(0u128, |acc, &k| {
        acc.checked_add(binomial(k as u128, b as u128 - 1)?)
    });
    to_u64(checked(total, "star count"), "star count")
}

/// Triangles via `tr(g^3) / 6`.
pub fn triangle_count(g: &Graph) -> u64 {
    let trace: u128 = (0..g.n()).map(|i| closed_walks3(g, i) as u128).sum();
    to_u64(exact_div(trace, 6, "tr(g^3)/6"), "triangles")
}

/// `(g^3)_ii`, closed walks of length three at `i`.
fn closed_walks3(g: &Graph, i: usize) -> u64 {
    g.neighbors(i).map(|j| g.common_neighbors(i, j)).sum()
}

/// `tr(h^3)` for `h` the subgraph induced by the neighbourhood of `i`.
fn neighborhood_trace3(g: &Graph, i: usize) -> u64 {
    let nb = g.row(i);
    let mut trace = 0u64;
    for a in g.neighbors(i) {
        let na = g.row(a);
        for b in bits::iter(na).filter(|&b| bits::get(nb, b)) {
            trace += bits::and3_count(nb, na, g.row(b));
        }
    }
    trace
}

/// Nested counts of the eight 3- and 4-node classes from the closed forms.
///
/// Panics if an intermediate division leaves a remainder or a count
/// overflows; either indicates a bug rather than bad input.
pub fn nested_census(g: &Graph) -> NestedCounts {
    let n = g.n();
    let m = g.m() as u128;
    let k: Vec<u128> = g.degrees().iter().map(|&d| d as u128).collect();
    let diag3: Vec<u128> = (0..n).map(|i| closed_walks3(g, i) as u128).collect();

    let m3 = k.iter().map(|&d| d * d.saturating_sub(1) / 2).sum::<u128>();
    let m7 = exact_div(diag3.iter().sum(), 6, "tr(g^3)/6");
    let m11 = k
        .iter()
        .map(|&d| checked(binomial(d, 3), "C(k,3)"))
        .sum::<u128>();

    let walk_pairs: u128 = g
        .edges()
        .iter()
        .map(|&(i, j)| (k[i] - 1) * (k[j] - 1))
        .sum();
    let m13 = checked(walk_pairs.checked_sub(3 * m7), "4-path count");

    let m15 = exact_div(
        (0..n)
            .filter(|&i| k[i] > 2)
            .map(|i| diag3[i] * (k[i] - 2))
            .sum(),
        2,
        "tadpole sum / 2",
    );

    // tr(g^4) = Σ_ij (g^2)_ij^2, and (g^2)_ii = k_i
    let mut trace4: u128 = k.iter().map(|&d| d * d).sum();
    // Σ_{i,j} C((g^2)_ij g_ij, 2) over ordered pairs
    let mut diamond_sum: u128 = 0;
    for i in 0..n {
        for j in i + 1..n {
            let c = g.common_neighbors(i, j) as u128;
            trace4 += 2 * c * c;
            if g.has_edge(i, j) && c >= 2 {
                diamond_sum += c * (c - 1);
            }
        }
    }
    let m30 = exact_div(
        checked(trace4.checked_sub(4 * m3 + 2 * m), "tr(g^4) - 4|M3| - 2m"),
        8,
        "4-circle / 8",
    );
    // each unordered pair appears twice in the ordered sum: (1/2)*2*C(c,2) = c(c-1)/2
    let m31 = exact_div(diamond_sum, 2, "diamond sum");

    let m63 = exact_div(
        (0..n).map(|i| neighborhood_trace3(g, i) as u128).sum(),
        24,
        "Σ tr(g_-i^3)/24",
    );

    NestedCounts {
        three_star: to_u64(m3, "M3"),
        triangle: to_u64(m7, "M7"),
        four_star: to_u64(m11, "M11"),
        four_path: to_u64(m13, "M13"),
        tadpole: to_u64(m15, "M15"),
        four_circle: to_u64(m30, "M30"),
        diamond: to_u64(m31, "M31"),
        four_complete: to_u64(m63, "M63"),
    }
}

/// Non-nested counts as linear combinations of the nested ones.
pub fn nonnested_census(c: &NestedCounts) -> NonNestedCounts {
    let [m3, m7, m11, m13, m15, m30, m31, m63] = c.to_array().map(|v| v as i128);
    let nn = |v: i128, what: &str| -> u64 {
        assert!(
            v >= 0,
            "internal consistency: negative non-nested {what} = {v}"
        );
        v as u64
    };
    NonNestedCounts {
        three_star: nn(m3 - 3 * m7, "3-star"),
        four_star: nn(m11 - m15 + 2 * m31 - 4 * m63, "4-star"),
        four_path: nn(m13 - 2 * m15 - 4 * m30 + 6 * m31 - 12 * m63, "4-path"),
        tadpole: nn(m15 - 4 * m31 + 12 * m63, "tadpole"),
        four_circle: nn(m30 - m31 + 3 * m63, "4-circle"),
        diamond: nn(m31 - 6 * m63, "diamond"),
    }
}

/// One class count in a census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub class: SubgraphClass,
    pub mode: Mode,
    pub count: u64,
}

/// Nested and non-nested counts for every in-scope class of one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub m: usize,
    pub nested: NestedCounts,
    pub non_nested: NonNestedCounts,
    /// 5-node classes and the 6-star, when requested.
    pub extended: Vec<ClassCount>,
}

impl CensusReport {
    /// The 3-/4-node census only.
    pub fn of(g: &Graph) -> CensusReport {
        let nested = nested_census(g);
        CensusReport {
            n: g.n(),
            m: g.m(),
            non_nested: nonnested_census(&nested),
            nested,
            extended: Vec::new(),
        }
    }

    /// Census plus the given extra classes. Stars use the degree formula,
    /// everything else the enumeration engine.
    pub fn with_extended(g: &Graph, extra: &[(SubgraphClass, Mode)]) -> Result<CensusReport> {
        let mut report = CensusReport::of(g);
        for (class, mode) in extra {
            let count = match mode {
                Mode::Nested if class.a == star_code(class.b) => star_count(g, class.b),
                _ => count_instances(g, class, *mode)?,
            };
            report.extended.push(ClassCount {
                class: class.clone(),
                mode: *mode,
                count,
            });
        }
        Ok(report)
    }

    pub fn count(&self, class: &SubgraphClass, mode: Mode) -> Option<u64> {
        let base = match mode {
            Mode::Nested => self.nested.get(class),
            Mode::NonNested => self.non_nested.get(class, &self.nested),
        };
        base.or_else(|| {
            self.extended
                .iter()
                .find(|c| c.class.a == class.a && c.class.b == class.b && c.mode == mode)
                .map(|c| c.count)
        })
    }

    /// Flat `(key, count)` record: eight `M_a_b`, six `Mt_a_b`, then extras.
    pub fn record(&self) -> Vec<(String, u64)> {
        let mut out = Vec::new();
        for (class, v) in classes::three_and_four().iter().zip(self.nested.to_array()) {
            out.push((class.key(false), v));
        }
        for class in classes::three_and_four()
            .iter()
            .filter(|c| !c.is_complete())
        {
            let v = self.non_nested.get(class, &self.nested).unwrap_or_default();
            out.push((class.key(true), v));
        }
        for c in &self.extended {
            out.push((c.class.key(c.mode == Mode::NonNested), c.count));
        }
        out
    }
}

/// Canonical code of the `b`-node star.
pub fn star_code(b: usize) -> u64 {
    // edges (i, b-1) for i < b-1 are the last pair of each row
    Template::from_edges(b, &(0..b - 1).map(|i| (i, b - 1)).collect::<Vec<_>>())
        .map(|t| t.value())
        .unwrap_or(0)
}

/// Loop-count model for listing 4-circles with ordered indices
/// (`i < j`, `i < x < y`) versus unrestricted indices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeModel {
    pub ordered: u128,
    pub unrestricted: u128,
    pub ratio: f64,
}

pub fn runtime_model(n: u64) -> Result<RuntimeModel> {
    if n < 4 {
        return Err(Error::InvalidArgument("runtime model needs n >= 4".into()));
    }
    let n = n as u128;
    let poly = 3 * n * n * n + 6 * n + 16 - n * n;
    let ordered = exact_div((n - 3) * poly, 24, "T(n)");
    let unrestricted = n.pow(4);
    Ok(RuntimeModel {
        ordered,
        unrestricted,
        ratio: unrestricted as f64 / ordered as f64,
    })
}
