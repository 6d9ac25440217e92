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

//! Instance listing for classes of 3 to 6 nodes.
//!
//! Two routes produce the same instance sets:
//!
//! * [`Route::Extension`] grows connected node sets outward from a root
//!   node (each connected set is visited once, rooted at its smallest node)
//!   and classifies the induced subgraph.
//! * [`Route::Subsets`] walks every increasing index tuple. This is the
//!   brute-force route and is only sensible for small graphs or `b <= 4`.
//!
//! A nested instance is one copy of the class inside the induced subgraph,
//! i.e. a node set together with the edge subset that realises the class.
//! A non-nested instance is a node set whose induced subgraph is the class.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::canonical::{labelled_copies, mask_has, pair_bit, MAX_NODES, MIN_NODES};
use super::{Mode, SubgraphClass};
use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    #[default]
    Extension,
    Subsets,
}

/// One occurrence: sorted node indices plus the occurrence's edges as an
/// upper-triangle mask over those nodes (local positions).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub nodes: Vec<usize>,
    pub edge_mask: u32,
}

impl Instance {
    /// Edges as global index pairs `(i, j)`, `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let b = self.nodes.len();
        let mut out = Vec::new();
        for p in 0..b {
            for q in p + 1..b {
                if mask_has(b, self.edge_mask, p, q) {
                    out.push((self.nodes[p], self.nodes[q]));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }
}

/// Precomputed matcher for one class and mode.
pub(crate) struct Matcher {
    mode: Mode,
    copies: Vec<u32>,
}

impl Matcher {
    pub(crate) fn new(class: &SubgraphClass, mode: Mode) -> Result<Matcher> {
        if !(MIN_NODES..=MAX_NODES).contains(&class.b) {
            return Err(Error::UnsupportedSize(class.b));
        }
        Ok(Matcher {
            mode,
            copies: labelled_copies(&class.template()),
        })
    }

    /// Call `f(edge_mask)` once per instance on a node set whose induced
    /// subgraph (under sorted order) is `induced`.
    #[inline]
    fn matches(&self, induced: u32, mut f: impl FnMut(u32)) {
        match self.mode {
            Mode::NonNested => {
                if self.copies.binary_search(&induced).is_ok() {
                    f(induced)
                }
            }
            Mode::Nested => {
                for &c in &self.copies {
                    if c & !induced == 0 {
                        f(c)
                    }
                }
            }
        }
    }
}

fn induced_mask(g: &Graph, nodes: &[usize]) -> u32 {
    let b = nodes.len();
    let mut mask = 0;
    for p in 0..b {
        for q in p + 1..b {
            if g.has_edge(nodes[p], nodes[q]) {
                mask |= pair_bit(b, p, q);
            }
        }
    }
    mask
}

/// Visit every connected `b`-node set whose smallest node is `root`.
fn extend_from_root(g: &Graph, b: usize, root: usize, visit: &mut impl FnMut(&[usize])) {
    let words = bits::words(g.n());
    // nodes in the set or adjacent to it
    let mut closed = vec![0u64; words];
    bits::set(&mut closed, root);
    for (w, r) in closed.iter_mut().zip(g.row(root)) {
        *w |= r;
    }
    let ext: Vec<usize> = g.neighbors(root).filter(|&u| u > root).collect();
    let mut current = vec![root];
    extend(g, b, root, &mut current, ext, &closed, visit);
}

fn extend(
    g: &Graph,
    b: usize,
    root: usize,
    current: &mut Vec<usize>,
    mut ext: Vec<usize>,
    closed: &[u64],
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == b {
        visit(current);
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next_ext = ext.clone();
        // exclusive neighbours of w: larger than root, outside current ∪ N(current)
        for u in g.neighbors(w) {
            if u > root && !bits::get(closed, u) {
                next_ext.push(u);
            }
        }
        let mut next_closed = closed.to_vec();
        for (c, r) in next_closed.iter_mut().zip(g.row(w)) {
            *c |= r;
        }
        current.push(w);
        extend(g, b, root, current, next_ext, &next_closed, visit);
        current.pop();
    }
}

/// Visit every increasing `b`-tuple whose first element is `first`.
fn subsets_from(n: usize, b: usize, first: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(n: usize, b: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if cur.len() == b {
            visit(cur);
            return;
        }
        let start = cur.last().map_or(0, |&v| v + 1);
        for v in start..n {
            cur.push(v);
            go(n, b, cur, visit);
            cur.pop();
        }
    }
    let mut cur = vec![first];
    go(n, b, &mut cur, visit);
}

/// Parallel fold over every instance of `class`. `visit` receives the
/// sorted node set and the instance edge mask. Per-root partial results are
/// merged in root order.
pub(crate) fn fold_instances<T, I, V, M>(
    g: &Graph,
    class: &SubgraphClass,
    mode: Mode,
    route: Route,
    init: I,
    visit: V,
    merge: M,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, &[usize], u32) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let matcher = Matcher::new(class, mode)?;
    let b = class.b;
    let n = g.n();
    let parts: Vec<T> = (0..n)
        .into_par_iter()
        .map(|root| {
            let mut acc = init();
            let mut sorted = Vec::with_capacity(b);
            let mut on_set = |nodes: &[usize]| {
                sorted.clear();
                sorted.extend_from_slice(nodes);
                sorted.sort_unstable();
                let induced = induced_mask(g, &sorted);
                matcher.matches(induced, |mask| visit(&mut acc, &sorted, mask));
            };
            match route {
                Route::Extension => extend_from_root(g, b, root, &mut on_set),
                Route::Subsets => subsets_from(n, b, root, &mut on_set),
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(init(), merge))
}

/// All instances of `class` in `g`, sorted, via the extension route.
pub fn enumerate_instances(g: &Graph, class: &SubgraphClass, mode: Mode) -> Result<Vec<Instance>> {
    enumerate_instances_with(g, class, mode, Route::Extension)
}

pub fn enumerate_instances_with(
    g: &Graph,
    class: &SubgraphClass,
    mode: Mode,
    route: Route,
) -> Result<Vec<Instance>> {
    let mut all = fold_instances(
        g,
        class,
        mode,
        route,
        Vec::new,
        |acc: &mut Vec<Instance>, nodes, mask| {
            acc.push(Instance {
                nodes: nodes.to_vec(),
                edge_mask: mask,
            })
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    all.sort_unstable();
    Ok(all)
}

/// Number of instances, without materialising them.
pub fn count_instances(g: &Graph, class: &SubgraphClass, mode: Mode) -> Result<u64> {
    fold_instances(
        g,
        class,
        mode,
        Route::Extension,
        || 0u64,
        |acc, _, _| *acc += 1,
        |a, b| a + b,
    )
}

/// Per-node number of instances containing the node.
pub fn membership_counts(g: &Graph, class: &SubgraphClass, mode: Mode) -> Result<Vec<u64>> {
    let n = g.n();
    fold_instances(
        g,
        class,
        mode,
        Route::Extension,
        || vec![0u64; n],
        |acc, nodes, _| {
            for &v in nodes {
                acc[v] += 1;
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// Per-node number of instance edges incident to the node, summed over
/// instances.
pub fn edge_coverage_counts(g: &Graph, class: &SubgraphClass, mode: Mode) -> Result<Vec<u64>> {
    let n = g.n();
    let b = class.b;
    fold_instances(
        g,
        class,
        mode,
        Route::Extension,
        || vec![0u64; n],
        |acc, nodes, mask| {
            for p in 0..b {
                for q in p + 1..b {
                    if mask_has(b, mask, p, q) {
                        acc[nodes[p]] += 1;
                        acc[nodes[q]] += 1;
                    }
                }
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

/// Nested 4-circles by the ordered loop nest: reference node `i` is the
/// smallest, `j` is opposite, and the interchangeable pair satisfies
/// `i < x < y`. Returns each cycle once as `[i, x, j, y]` in cycle order.
pub fn four_circles_by_loops(g: &Graph) -> Vec<[usize; 4]> {
    let n = g.n();
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(3) {
        for j in i + 1..n {
            for x in i + 1..n - 1 {
                if x == j || !g.has_edge(i, x) || !g.has_edge(x, j) {
                    continue;
                }
                for y in x + 1..n {
                    if y != j && g.has_edge(i, y) && g.has_edge(y, j) {
                        out.push([i, x, j, y]);
                    }
                }
            }
        }
    }
    out
}
