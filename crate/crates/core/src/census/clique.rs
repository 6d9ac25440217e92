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

//! Maximal cliques, clique number and complete-subgraph bounds.

use serde::{Deserialize, Serialize};

use super::binomial;
use crate::graph::{bits, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueAnalysis {
    /// Each clique sorted; list sorted by decreasing size, then lexicographically.
    pub maximal_cliques: Vec<Vec<usize>>,
    pub clique_number: usize,
    /// `T_1..T_4`: nodes, edges, triangles, 4-completes.
    pub complete_counts: [u64; 4],
}

impl CliqueAnalysis {
    pub fn maximum_cliques(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.maximal_cliques
            .iter()
            .take_while(move |c| c.len() == self.clique_number)
    }
}

/// Bron–Kerbosch with Tomita pivoting over bitset rows.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let words = bits::words(n);
    let mut p = vec![0u64; words];
    for v in 0..n {
        bits::set(&mut p, v);
    }
    let x = vec![0u64; words];
    let mut out = Vec::new();
    let mut r = Vec::new();
    expand(g, &mut r, p, x, &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

fn expand(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: Vec<u64>,
    mut x: Vec<u64>,
    out: &mut Vec<Vec<usize>>,
) {
    let p_empty = p.iter().all(|&w| w == 0);
    if p_empty {
        if x.iter().all(|&w| w == 0) {
            out.push(r.clone());
        }
        return;
    }
    // pivot maximising |P ∩ N(u)| over u in P ∪ X
    let pivot = bits::iter(&p)
        .chain(bits::iter(&x))
        .max_by_key(|&u| bits::and_count(&p, g.row(u)))
        .expect("P is non-empty");
    let candidates: Vec<usize> = bits::iter(&p)
        .filter(|&v| !bits::get(g.row(pivot), v))
        .collect();
    for v in candidates {
        let nv = g.row(v);
        let p_next: Vec<u64> = p.iter().zip(nv).map(|(a, b)| a & b).collect();
        let x_next: Vec<u64> = x.iter().zip(nv).map(|(a, b)| a & b).collect();
        r.push(v);
        expand(g, r, p_next, x_next, out);
        r.pop();
        bits::clear(&mut p, v);
        bits::set(&mut x, v);
    }
}

pub fn clique_analysis(g: &Graph) -> CliqueAnalysis {
    let maximal_cliques = maximal_cliques(g);
    let clique_number = maximal_cliques.first().map_or(0, Vec::len);
    let census = super::nested_census(g);
    CliqueAnalysis {
        maximal_cliques,
        clique_number,
        complete_counts: [
            g.n() as u64,
            g.m() as u64,
            census.triangle,
            census.four_complete,
        ],
    }
}

/// Upper bound on `T_{h+1}` given `T_h` and the clique number `w`:
/// `floor(C(w, h+1) * (T_h / C(w, h))^((h+1)/h))`. Zero when `h = 0` or
/// `h >= w`, where the bound is undefined.
pub fn fisher_ryan_bound(t_h: u64, w: u64, h: u64) -> u64 {
    if h == 0 || h >= w {
        return 0;
    }
    let upper = binomial(w as u128, h as u128 + 1).expect("small binomial") as f64;
    let lower = binomial(w as u128, h as u128).expect("small binomial") as f64;
    let exponent = (h as f64 + 1.0) / h as f64;
    let bound = upper * (t_h as f64 / lower).powf(exponent);
    // absorb rounding just below an exact integer
    (bound * (1.0 + 1e-12)).floor() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn k4_one_clique() {
        let ca = clique_analysis(&complete(4));
        assert_eq!(ca.maximal_cliques, vec![vec![0, 1, 2, 3]]);
        assert_eq!(ca.clique_number, 4);
        assert_eq!(ca.complete_counts, [4, 6, 4, 1]);
    }

    #[test]
    fn triangle_with_pendant() {
        let g = Graph::from_index_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let ca = clique_analysis(&g);
        assert_eq!(ca.maximal_cliques, vec![vec![0, 1, 2], vec![2, 3]]);
        assert_eq!(ca.clique_number, 3);
    }

    #[test]
    fn c5_five_edges() {
        let ca = clique_analysis(&cycle(5));
        assert_eq!(ca.maximal_cliques.len(), 5);
        assert!(ca.maximal_cliques.iter().all(|c| c.len() == 2));
        assert_eq!(ca.clique_number, 2);
    }

    #[test]
    fn bound_worked_numbers() {
        assert_eq!(fisher_ryan_bound(88, 11, 1), 3520);
        assert_eq!(fisher_ryan_bound(522, 11, 2), 4824);
        assert_eq!(fisher_ryan_bound(1501, 11, 3), 6266);
    }

    #[test]
    fn bound_undefined_above_clique_number() {
        assert_eq!(fisher_ryan_bound(10, 3, 3), 0);
        assert_eq!(fisher_ryan_bound(10, 3, 0), 0);
    }
}
