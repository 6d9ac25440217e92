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

//! Degree-preserving edge-pair switching.
//!
//! A switch replaces edges `(x1, y1)` and `(x2, y2)` by `(x1, y2)` and
//! `(x2, y1)`. It is only applied when the four nodes are distinct and
//! neither replacement edge already exists, so the graph stays simple and
//! every degree is unchanged.

use log::warn;
use rand::Rng;

use crate::graph::{bits, Graph};

/// Mutable working copy of a graph for switch chains.
#[derive(Clone, Debug)]
pub struct EdgeSwitcher {
    labels: Vec<String>,
    rows: Vec<Vec<u64>>,
    edges: Vec<(usize, usize)>,
}

/// A proposed switch: edge slots and the oriented endpoints
/// `(x1, y1)`, `(x2, y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Switch {
    slots: (usize, usize),
    first: (usize, usize),
    second: (usize, usize),
}

impl Switch {
    pub fn removed(&self) -> [(usize, usize); 2] {
        [self.first, self.second]
    }

    pub fn added(&self) -> [(usize, usize); 2] {
        let (x1, y1) = self.first;
        let (x2, y2) = self.second;
        [(x1, y2), (x2, y1)]
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl EdgeSwitcher {
    pub fn new(g: &Graph) -> EdgeSwitcher {
        EdgeSwitcher {
            labels: g.labels().to_vec(),
            rows: g.rows().to_vec(),
            edges: g.edges().to_vec(),
        }
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        bits::get(&self.rows[a], b)
    }

    #[inline]
    pub fn common_neighbors(&self, a: usize, b: usize) -> u64 {
        bits::and_count(&self.rows[a], &self.rows[b])
    }

    fn candidate(&self, i: usize, j: usize, flip: bool) -> Option<Switch> {
        let first = self.edges[i];
        let (a, b) = self.edges[j];
        let second = if flip { (b, a) } else { (a, b) };
        let (x1, y1) = first;
        let (x2, y2) = second;
        let distinct = x1 != x2 && x1 != y2 && y1 != x2 && y1 != y2;
        (distinct && !self.has_edge(x1, y2) && !self.has_edge(x2, y1)).then_some(Switch {
            slots: (i, j),
            first,
            second,
        })
    }

    /// Draw one random edge pair; `Some` when it forms a valid switch.
    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Switch> {
        let m = self.edges.len();
        if m < 2 {
            return None;
        }
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        self.candidate(i, j, rng.random::<bool>())
    }

    /// Whether any valid switch exists, by exhaustive scan.
    pub fn any_valid(&self) -> bool {
        let m = self.edges.len();
        (0..m).any(|i| {
            (i + 1..m).any(|j| {
                self.candidate(i, j, false).is_some() || self.candidate(i, j, true).is_some()
            })
        })
    }

    fn set_edge(&mut self, (a, b): (usize, usize), present: bool) {
        if present {
            bits::set(&mut self.rows[a], b);
            bits::set(&mut self.rows[b], a);
        } else {
            bits::clear(&mut self.rows[a], b);
            bits::clear(&mut self.rows[b], a);
        }
    }

    pub fn apply(&mut self, s: &Switch) {
        self.apply_counting_triangles(s);
    }

    /// Apply `s` and return the resulting change in the triangle count.
    pub fn apply_counting_triangles(&mut self, s: &Switch) -> i64 {
        let mut delta = 0i64;
        for e in s.removed() {
            self.set_edge(e, false);
            delta -= self.common_neighbors(e.0, e.1) as i64;
        }
        for e in s.added() {
            delta += self.common_neighbors(e.0, e.1) as i64;
            self.set_edge(e, true);
        }
        let [a, b] = s.added();
        self.edges[s.slots.0] = ordered(a.0, a.1);
        self.edges[s.slots.1] = ordered(b.0, b.1);
        delta
    }

    /// Undo a switch previously applied with [`apply_counting_triangles`].
    ///
    /// [`apply_counting_triangles`]: EdgeSwitcher::apply_counting_triangles
    pub fn revert(&mut self, s: &Switch) {
        for e in s.added() {
            self.set_edge(e, false);
        }
        for e in s.removed() {
            self.set_edge(e, true);
        }
        self.edges[s.slots.0] = ordered(s.first.0, s.first.1);
        self.edges[s.slots.1] = ordered(s.second.0, s.second.1);
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_rows(self.labels.clone(), self.rows.clone())
    }
}

#[derive(Clone, Debug)]
pub struct RewireOutcome {
    pub graph: Graph,
    pub applied: usize,
    /// No valid switch exists; the input is returned unchanged.
    pub stalled: bool,
}

/// Run the switching chain until `successful_switches` switches have been
/// applied. Rejected draws do not count.
pub fn rewire_chain<R: Rng + ?Sized>(
    g: &Graph,
    successful_switches: usize,
    rng: &mut R,
) -> RewireOutcome {
    let mut sw = EdgeSwitcher::new(g);
    let patience = (10 * sw.m()).max(1_000);
    let mut applied = 0;
    let mut misses = 0;
    while applied < successful_switches {
        match sw.propose(rng) {
            Some(s) => {
                sw.apply(&s);
                applied += 1;
                misses = 0;
            }
            None => {
                misses += 1;
                if misses >= patience {
                    if !sw.any_valid() {
                        warn!("no valid edge switch exists (n = {}, m = {})", g.n(), g.m());
                        return RewireOutcome {
                            graph: g.clone(),
                            applied,
                            stalled: true,
                        };
                    }
                    misses = 0;
                }
            }
        }
    }
    RewireOutcome {
        graph: sw.to_graph(),
        applied,
        stalled: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::null::rng::stream;

    /// Exhaustive check of both pairings for every edge pair.
    fn oracle_has_valid_switch(g: &Graph) -> bool {
        let e = g.edges();
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                let (x1, y1) = e[a];
                for (x2, y2) in [e[b], (e[b].1, e[b].0)] {
                    let nodes = [x1, y1, x2, y2];
                    let distinct = (0..4).all(|p| (p + 1..4).all(|q| nodes[p] != nodes[q]));
                    if distinct && !g.has_edge(x1, y2) && !g.has_edge(x2, y1) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn path4_switches_to_the_other_path() {
        // (0,1),(3,2) -> (0,2),(3,1) is the only valid switch
        let g = path(4);
        assert!(oracle_has_valid_switch(&g));
        let out = rewire_chain(&g, 1, &mut stream(1, 0));
        assert!(!out.stalled);
        assert_eq!(out.graph.edges(), &[(0, 2), (1, 2), (1, 3)][..]);
    }

    #[test]
    fn star_has_no_switch() {
        let g = star(4);
        assert!(!oracle_has_valid_switch(&g));
        assert!(!EdgeSwitcher::new(&g).any_valid());
        let out = rewire_chain(&g, 5, &mut stream(1, 0));
        assert!(out.stalled);
        assert_eq!(out.graph, g);
    }

    #[test]
    fn c6_switch_keeps_degrees() {
        let g = cycle(6);
        let sw = EdgeSwitcher::new(&g);
        let slot = |e| g.edges().iter().position(|&x| x == e).unwrap();
        // (0,1) and (3,4) -> (0,4), (3,1) or (0,3), (4,1)
        let (a, b) = (slot((0, 1)), slot((3, 4)));
        assert!(sw.candidate(a, b, false).is_some() && sw.candidate(a, b, true).is_some());
        let s = sw.candidate(a, b, false);
        let s = s.expect("valid switch on C6");
        let mut sw = sw;
        sw.apply(&s);
        let h = sw.to_graph();
        assert_eq!(h.m(), 6);
        assert!(h.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn complete_graph_stalls() {
        let out = rewire_chain(&complete(6), 10, &mut stream(3, 0));
        assert!(out.stalled);
        assert_eq!(out.applied, 0);
    }

    #[test]
    fn triangle_delta_matches_recount() {
        let g = crate::null::gnp::sample_gnp(25, 0.3, &mut stream(9, 0));
        let mut sw = EdgeSwitcher::new(&g);
        let mut rng = stream(9, 1);
        let mut tri = crate::census::triangle_count(&g) as i64;
        for _ in 0..200 {
            if let Some(s) = sw.propose(&mut rng) {
                tri += sw.apply_counting_triangles(&s);
                assert_eq!(tri, crate::census::triangle_count(&sw.to_graph()) as i64);
            }
        }
    }

    #[test]
    fn revert_restores() {
        let g = crate::null::gnp::sample_gnp(15, 0.4, &mut stream(4, 0));
        let mut sw = EdgeSwitcher::new(&g);
        let mut rng = stream(4, 1);
        let s = loop {
            if let Some(s) = sw.propose(&mut rng) {
                break s;
            }
        };
        sw.apply_counting_triangles(&s);
        assert_ne!(sw.to_graph(), g);
        sw.revert(&s);
        assert_eq!(sw.to_graph(), g);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn degrees_preserved(seed in any::<u64>(), n in 5usize..20, p in 0.15f64..0.7, steps in 0usize..200) {
                let g = crate::null::gnp::sample_gnp(n, p, &mut stream(seed, 0));
                let out = rewire_chain(&g, steps, &mut stream(seed, 1));
                prop_assert_eq!(out.graph.n(), g.n());
                prop_assert_eq!(out.graph.m(), g.m());
                prop_assert_eq!(out.graph.degrees(), g.degrees());
                if !out.stalled {
                    prop_assert_eq!(out.applied, steps);
                }
            }
        }
    }
}
