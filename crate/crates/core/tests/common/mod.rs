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

//! Brute-force census oracle shared by the integration suites. It classifies
//! every node subset and every spanning edge subset by degree sequence,
//! without touching the library's canonical codes or enumeration engine.

#![allow(dead_code)]

use netmotif::Graph;

/// Slots in the library's class-code order: M3, M7, M11, M13, M15, M30,
/// M31, M63.
pub fn classify(b: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut deg = vec![0usize; b];
    for &(i, j) in edges {
        deg[i] += 1;
        deg[j] += 1;
    }
    if deg.contains(&0) || !connected(b, edges) {
        return None;
    }
    let max = *deg.iter().max().unwrap();
    Some(match (b, edges.len()) {
        (3, 2) => 0,
        (3, 3) => 1,
        (4, 3) if max == 3 => 2,
        (4, 3) => 3,
        (4, 4) if max == 3 => 4,
        (4, 4) => 5,
        (4, 5) => 6,
        (4, 6) => 7,
        _ => return None,
    })
}

fn connected(b: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; b];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(i, j) in edges {
            for (x, y) in [(i, j), (j, i)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn subsets(n: usize, b: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == b {
        f(cur);
        return;
    }
    for v in start..n {
        cur.push(v);
        subsets(n, b, v + 1, cur, f);
        cur.pop();
    }
}

/// `(nested, non_nested)` counts in class-code order.
pub fn oracle_census(g: &Graph) -> ([u64; 8], [u64; 8]) {
    let mut nested = [0u64; 8];
    let mut non_nested = [0u64; 8];
    for b in [3, 4] {
        subsets(g.n(), b, 0, &mut Vec::new(), &mut |nodes| {
            let mut present = Vec::new();
            for p in 0..b {
                for q in p + 1..b {
                    if g.has_edge(nodes[p], nodes[q]) {
                        present.push((p, q));
                    }
                }
            }
            if let Some(k) = classify(b, &present) {
                non_nested[k] += 1;
            }
            for mask in 1u32..(1 << present.len()) {
                let chosen: Vec<(usize, usize)> = (0..present.len())
                    .filter(|&e| mask >> e & 1 == 1)
                    .map(|e| present[e])
                    .collect();
                if let Some(k) = classify(b, &chosen) {
                    nested[k] += 1;
                }
            }
        });
    }
    (nested, non_nested)
}
