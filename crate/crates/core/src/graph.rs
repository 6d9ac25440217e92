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

//! Simple undirected graphs over labelled nodes, plus the descriptive
//! metrics reported per period (density, path lengths, clustering, degrees,
//! route churn).

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) mod bits {
    #[inline]
    pub fn words(n: usize) -> usize {
        n.div_ceil(64).max(1)
    }

    #[inline]
    pub fn get(row: &[u64], j: usize) -> bool {
        row[j >> 6] >> (j & 63) & 1 == 1
    }

    #[inline]
    pub fn set(row: &mut [u64], j: usize) {
        row[j >> 6] |= 1 << (j & 63);
    }

    #[inline]
    pub fn clear(row: &mut [u64], j: usize) {
        row[j >> 6] &= !(1 << (j & 63));
    }

    #[inline]
    pub fn and_count(a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x & y).count_ones() as u64)
            .sum()
    }

    #[inline]
    pub fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .zip(c)
            .map(|((x, y), z)| (x & y & z).count_ones() as u64)
            .sum()
    }

    /// Iterate the set bit positions of a bitset row.
    pub fn iter(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
        row.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// A simple, undirected, unweighted graph. Immutable once built.
///
/// Node labels are sorted lexicographically and index `i` refers to the
/// `i`-th label. Adjacency is stored as dense bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    rows: Vec<Vec<u64>>,
    degrees: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Build a graph from label pairs. Reversed and exact duplicates collapse
    /// to a single undirected edge.
    pub fn from_edges<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Graph> {
        if pairs.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let mut labels = BTreeSet::new();
        for (row, (a, b)) in pairs.iter().enumerate() {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return Err(Error::SelfLoop {
                    label: a.to_string(),
                    row: row + 1,
                });
            }
            labels.insert(a);
            labels.insert(b);
        }
        let labels: Vec<String> = labels.into_iter().map(str::to_string).collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let edges = pairs
            .iter()
            .map(|(a, b)| (index[a.as_ref()], index[b.as_ref()]))
            .collect::<Vec<_>>();
        Ok(Graph::from_parts(labels, edges))
    }

    /// Graph on nodes `0..n` with zero-padded labels (`v00`, `v01`, ...), so
    /// that label order equals index order. Isolated nodes are kept.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let width = n.saturating_sub(1).to_string().len();
        let labels = (0..n).map(|i| format!("v{i:0width$}")).collect();
        Graph::from_parts(labels, edges.to_vec())
    }

    /// Assemble from labels (must already be sorted and unique) and index
    /// pairs. Self-loops are dropped, duplicates collapse.
    pub(crate) fn from_parts(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Graph {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        let n = labels.len();
        let words = bits::words(n);
        let mut rows = vec![vec![0u64; words]; n];
        for &(a, b) in &edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for n = {n}");
            if a != b {
                bits::set(&mut rows[a], b);
                bits::set(&mut rows[b], a);
            }
        }
        Graph::from_rows(labels, rows)
    }

    pub(crate) fn from_rows(labels: Vec<String>, rows: Vec<Vec<u64>>) -> Graph {
        let degrees: Vec<usize> = rows
            .iter()
            .map(|r| r.iter().map(|w| w.count_ones() as usize).sum())
            .collect();
        let mut edges = Vec::with_capacity(degrees.iter().sum::<usize>() / 2);
        for (i, row) in rows.iter().enumerate() {
            edges.extend(bits::iter(row).filter(|&j| j > i).map(|j| (i, j)));
        }
        Graph {
            labels,
            rows,
            degrees,
            edges,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        bits::get(&self.rows[i], j)
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        bits::iter(&self.rows[i])
    }

    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub(crate) fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Number of common neighbours of `i` and `j`, i.e. `(g^2)_ij`.
    #[inline]
    pub fn common_neighbors(&self, i: usize, j: usize) -> u64 {
        bits::and_count(&self.rows[i], &self.rows[j])
    }

    /// `d(G) = 2m / (n(n-1))`; zero for fewer than two nodes.
    pub fn density(&self) -> f64 {
        let n = self.n();
        if n < 2 {
            return 0.0;
        }
        2.0 * self.m() as f64 / (n as f64 * (n as f64 - 1.0))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }

    /// Induced subgraph on `nodes` (labels carried over).
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
            .collect();
        Graph::from_parts(labels, edges)
    }

    /// Breadth-first distances from `s`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for v in self.neighbors(u) {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Number of triangles through each node.
    pub fn triangles_per_node(&self) -> Vec<u64> {
        (0..self.n())
            .map(|i| {
                self.neighbors(i)
                    .map(|j| self.common_neighbors(i, j))
                    .sum::<u64>()
                    / 2
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    /// Computed on the largest component when `connected` is false.
    pub diameter: usize,
    pub average_path_length: f64,
    pub clustering_overall: f64,
    pub clustering_average: f64,
    pub connected: bool,
    pub largest_component: usize,
}

/// Density, diameter, average shortest path length and both clustering
/// coefficients. Path metrics use all-pairs BFS on the largest component.
pub fn global_metrics(g: &Graph) -> GraphMetrics {
    let comps = g.components();
    let largest = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .cloned()
        .unwrap_or_default();

    let mut diameter = 0usize;
    let mut total = 0u128;
    for &s in &largest {
        let dist = g.bfs_distances(s);
        for &t in &largest {
            if let Some(d) = dist[t] {
                diameter = diameter.max(d);
                total += d as u128;
            }
        }
    }
    let k = largest.len();
    let average_path_length = if k >= 2 {
        total as f64 / (k as f64 * (k as f64 - 1.0))
    } else {
        0.0
    };

    let tri = g.triangles_per_node();
    let mut closed = 0u128;
    let mut triples = 0u128;
    let mut local_sum = 0.0;
    for (i, &t) in tri.iter().enumerate() {
        let k = g.degree(i) as u128;
        let pairs = k * k.saturating_sub(1) / 2;
        closed += t as u128;
        triples += pairs;
        if pairs > 0 {
            local_sum += t as f64 / pairs as f64;
        }
    }
    // closed = 3 * triangles, triples = |M_3^(3)|
    let clustering_overall = if triples == 0 {
        0.0
    } else {
        closed as f64 / triples as f64
    };
    let clustering_average = if g.n() == 0 {
        0.0
    } else {
        local_sum / g.n() as f64
    };

    GraphMetrics {
        n: g.n(),
        m: g.m(),
        density: g.density(),
        diameter,
        average_path_length,
        clustering_overall,
        clustering_average,
        connected: comps.len() == 1,
        largest_component: k,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub centrality: Vec<f64>,
    pub sum_k: u128,
    pub sum_k2: u128,
    pub sum_k3: u128,
    pub mean_k: f64,
    pub mean_k2: f64,
    pub mean_k3: f64,
    /// `(k, P(k))` for every degree present, ascending in `k`.
    pub distribution: Vec<(usize, f64)>,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "degree statistics need at least two nodes".into(),
        ));
    }
    let degrees = g.degrees().to_vec();
    let (mut s1, mut s2, mut s3) = (0u128, 0u128, 0u128);
    let mut hist = std::collections::BTreeMap::<usize, usize>::new();
    for &k in &degrees {
        let k128 = k as u128;
        s1 += k128;
        s2 += k128 * k128;
        s3 += k128 * k128 * k128;
        *hist.entry(k).or_default() += 1;
    }
    let nf = n as f64;
    Ok(DegreeStats {
        centrality: degrees.iter().map(|&k| k as f64 / (nf - 1.0)).collect(),
        degrees,
        sum_k: s1,
        sum_k2: s2,
        sum_k3: s3,
        mean_k: s1 as f64 / nf,
        mean_k2: s2 as f64 / nf,
        mean_k3: s3 as f64 / nf,
        distribution: hist.into_iter().map(|(k, c)| (k, c as f64 / nf)).collect(),
    })
}

/// Percentages of routes added and lost between two periods. Either side is
/// `None` when its denominator graph has no edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Churn {
    pub added_pct: Option<f64>,
    pub lost_pct: Option<f64>,
}

pub fn edge_churn(prev: &Graph, curr: &Graph) -> Churn {
    fn labelled(g: &Graph) -> BTreeSet<(&str, &str)> {
        g.edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (g.label(a), g.label(b));
                if x < y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect()
    }
    let p = labelled(prev);
    let c = labelled(curr);
    let pct = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    Churn {
        added_pct: pct(c.difference(&p).count(), c.len()),
        lost_pct: pct(p.difference(&c).count(), p.len()),
    }
}

/// Common families used in tests and the scaling analyses.
pub mod families {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_index_edges(n, &e)
    }

    pub fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_index_edges(n, &e)
    }

    pub fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_index_edges(n, &e)
    }

    /// `S_{1,n-1}` with node 0 as the center.
    pub fn star(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_index_edges(n, &e)
    }
}
