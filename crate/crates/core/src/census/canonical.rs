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

//! Canonical decimal codes for small connected subgraphs.
//!
//! A `b`-node graph is written as the row-major upper triangle of its
//! adjacency matrix, read as a binary number with the `(0,1)` entry as the
//! most significant bit. The canonical code is the minimum of that number
//! over all `b!` relabelings, so the 4-star is `M_11^(4)` and the triangle
//! is `M_7^(3)`.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 3;
pub const MAX_NODES: usize = 6;

#[inline]
pub(crate) fn pair_count(b: usize) -> usize {
    b * (b - 1) / 2
}

/// Bit of pair `(i, j)` (any order) in a `b`-node upper-triangle mask.
#[inline]
pub(crate) fn pair_bit(b: usize, i: usize, j: usize) -> u32 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // row-major index of (i, j) among the upper-triangle pairs
    let k = i * (2 * b - i - 1) / 2 + (j - i - 1);
    1 << (pair_count(b) - 1 - k)
}

#[inline]
pub(crate) fn mask_has(b: usize, mask: u32, i: usize, j: usize) -> bool {
    mask & pair_bit(b, i, j) != 0
}

/// Every permutation of `0..b` in lexicographic order.
pub(crate) fn permutations(b: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(b), &mut vec![false; b], &mut out);
    out
}

/// Relabel node `v` as `perm[v]`.
pub(crate) fn permute_mask(b: usize, mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0;
    for i in 0..b {
        for j in i + 1..b {
            if mask_has(b, mask, i, j) {
                out |= pair_bit(b, perm[i], perm[j]);
            }
        }
    }
    out
}

pub(crate) fn mask_connected(b: usize, mask: u32) -> bool {
    let mut seen = 1u32;
    let mut stack = vec![0usize];
    while let Some(u) = stack.pop() {
        for v in 0..b {
            if v != u && seen >> v & 1 == 0 && mask_has(b, mask, u, v) {
                seen |= 1 << v;
                stack.push(v);
            }
        }
    }
    seen.count_ones() as usize == b
}

/// A small labelled graph on `b` nodes, stored as an upper-triangle mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Template {
    b: usize,
    mask: u32,
}

impl Template {
    pub fn from_edges(b: usize, edges: &[(usize, usize)]) -> Result<Template> {
        if !(2..=MAX_NODES).contains(&b) {
            return Err(Error::UnsupportedSize(b));
        }
        let mut mask = 0;
        for &(i, j) in edges {
            if i == j || i >= b || j >= b {
                return Err(Error::InvalidArgument(format!(
                    "template edge ({i}, {j}) invalid for {b} nodes"
                )));
            }
            mask |= pair_bit(b, i, j);
        }
        Ok(Template { b, mask })
    }

    /// From a symmetric 0/1 adjacency matrix.
    pub fn from_adjacency(adj: &[Vec<bool>]) -> Result<Template> {
        let b = adj.len();
        let mut edges = Vec::new();
        for (i, row) in adj.iter().enumerate() {
            if row.len() != b || row[i] {
                return Err(Error::InvalidArgument(
                    "template must be square with an empty diagonal".into(),
                ));
            }
            for j in i + 1..b {
                if row[j] != adj[j][i] {
                    return Err(Error::InvalidArgument("template is not symmetric".into()));
                }
                if row[j] {
                    edges.push((i, j));
                }
            }
        }
        Template::from_edges(b, &edges)
    }

    /// The template whose upper-triangle value (under the identity labelling)
    /// is `value`.
    pub fn from_value(b: usize, value: u64) -> Result<Template> {
        if !(2..=MAX_NODES).contains(&b) {
            return Err(Error::UnsupportedSize(b));
        }
        if value >> pair_count(b) != 0 {
            return Err(Error::InvalidArgument(format!(
                "{value} does not fit a {b}-node upper triangle"
            )));
        }
        Ok(Template {
            b,
            mask: value as u32,
        })
    }

    pub fn nodes(&self) -> usize {
        self.b
    }

    /// Decimal value of the upper triangle under the current labelling.
    pub fn value(&self) -> u64 {
        self.mask as u64
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && mask_has(self.b, self.mask, i, j)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.b {
            for j in i + 1..self.b {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        mask_connected(self.b, self.mask)
    }

    pub fn relabel(&self, perm: &[usize]) -> Template {
        Template {
            b: self.b,
            mask: permute_mask(self.b, self.mask, perm),
        }
    }
}

/// `(b, a)` for a connected template with `3 <= b <= 6`, by brute force over
/// all `b!` labellings.
pub fn canonical_code(t: &Template) -> Result<(usize, u64)> {
    let b = t.nodes();
    if !(MIN_NODES..=MAX_NODES).contains(&b) {
        return Err(Error::UnsupportedSize(b));
    }
    if !t.is_connected() {
        return Err(Error::DisconnectedTemplate);
    }
    let a = permutations(b)
        .iter()
        .map(|p| permute_mask(b, t.mask, p))
        .min()
        .unwrap_or(t.mask);
    Ok((b, a as u64))
}

/// All distinct labellings of `t` as masks, ascending.
pub(crate) fn labelled_copies(t: &Template) -> Vec<u32> {
    permutations(t.b)
        .iter()
        .map(|p| permute_mask(t.b, t.mask, p))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// A connected `b`-node subgraph class `M_a^(b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgraphClass {
    pub b: usize,
    pub a: u64,
    pub name: Option<String>,
}

impl SubgraphClass {
    /// Class from its canonical code. Fails when `a` is not the canonical
    /// code of a connected `b`-node graph.
    pub fn new(b: usize, a: u64) -> Result<SubgraphClass> {
        let t = Template::from_value(b, a)?;
        let (_, canon) = canonical_code(&t)?;
        if canon != a {
            return Err(Error::InvalidArgument(format!(
                "{a} is not a canonical {b}-node code (canonical form is {canon})"
            )));
        }
        Ok(SubgraphClass {
            b,
            a,
            name: known_name(b, a).map(str::to_string),
        })
    }

    pub fn from_template(t: &Template) -> Result<SubgraphClass> {
        let (b, a) = canonical_code(t)?;
        SubgraphClass::new(b, a)
    }

    pub fn template(&self) -> Template {
        Template {
            b: self.b,
            mask: self.a as u32,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.template().edge_count()
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == pair_count(self.b)
    }

    /// Record key, `M_{a}_{b}` or `Mt_{a}_{b}` for non-nested counts.
    pub fn key(&self, non_nested: bool) -> String {
        let prefix = if non_nested { "Mt" } else { "M" };
        format!("{prefix}_{}_{}", self.a, self.b)
    }

    /// Parse `M_7_3`, `Mt_30_4` or a bare `7_3`.
    pub fn parse_key(s: &str) -> Result<(SubgraphClass, bool)> {
        let (non_nested, rest) = if let Some(r) = s.strip_prefix("Mt_") {
            (true, r)
        } else if let Some(r) = s.strip_prefix("M_") {
            (false, r)
        } else {
            (false, s)
        };
        let bad = || Error::InvalidArgument(format!("bad class key `{s}`"));
        let (a, b) = rest.split_once('_').ok_or_else(bad)?;
        let a = a.parse().map_err(|_| bad())?;
        let b = b.parse().map_err(|_| bad())?;
        Ok((SubgraphClass::new(b, a)?, non_nested))
    }
}

impl fmt::Display for SubgraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{}^({})", self.a, self.b)
    }
}

fn known_name(b: usize, a: u64) -> Option<&'static str> {
    Some(match (b, a) {
        (3, 3) => "3-star",
        (3, 7) => "triangle",
        (4, 11) => "4-star",
        (4, 13) => "4-path",
        (4, 15) => "tadpole",
        (4, 30) => "4-circle",
        (4, 31) => "diamond",
        (4, 63) => "4-complete",
        (5, 75) => "5-star",
        (5, 79) => "cricket",
        (5, 87) => "bull",
        (5, 94) => "banner",
        (5, 236) => "5-circle",
        (6, 1099) => "6-star",
        _ => return None,
    })
}

/// Named classes used throughout the census and motif analyses.
pub mod classes {
    use super::SubgraphClass;

    fn class(b: usize, a: u64) -> SubgraphClass {
        SubgraphClass::new(b, a).expect("built-in class codes are canonical")
    }

    pub fn three_star() -> SubgraphClass {
        class(3, 3)
    }
    pub fn triangle() -> SubgraphClass {
        class(3, 7)
    }
    pub fn four_star() -> SubgraphClass {
        class(4, 11)
    }
    pub fn four_path() -> SubgraphClass {
        class(4, 13)
    }
    pub fn tadpole() -> SubgraphClass {
        class(4, 15)
    }
    pub fn four_circle() -> SubgraphClass {
        class(4, 30)
    }
    pub fn diamond() -> SubgraphClass {
        class(4, 31)
    }
    pub fn four_complete() -> SubgraphClass {
        class(4, 63)
    }
    pub fn five_star() -> SubgraphClass {
        class(5, 75)
    }
    pub fn cricket() -> SubgraphClass {
        class(5, 79)
    }
    pub fn bull() -> SubgraphClass {
        class(5, 87)
    }
    pub fn banner() -> SubgraphClass {
        class(5, 94)
    }
    pub fn five_circle() -> SubgraphClass {
        class(5, 236)
    }
    pub fn six_star() -> SubgraphClass {
        class(6, 1099)
    }

    /// The eight connected 3- and 4-node classes, in code order.
    pub fn three_and_four() -> Vec<SubgraphClass> {
        vec![
            three_star(),
            triangle(),
            four_star(),
            four_path(),
            tadpole(),
            four_circle(),
            diamond(),
            four_complete(),
        ]
    }

    /// The 5-node classes and the 6-star used for the extended scaling fits.
    pub fn extended() -> Vec<SubgraphClass> {
        vec![
            five_star(),
            cricket(),
            bull(),
            banner(),
            five_circle(),
            six_star(),
        ]
    }
}

/// `max |E(H)| / |V(H)|` over the subgraphs `H` of the class template.
pub fn gamma_ratio(class: &SubgraphClass) -> Ratio<u64> {
    let t = class.template();
    let b = t.nodes();
    let mut best = Ratio::new(0, 1);
    for subset in 1u32..(1 << b) {
        let nodes: Vec<usize> = (0..b).filter(|v| subset >> v & 1 == 1).collect();
        let mut e = 0u64;
        for (x, &i) in nodes.iter().enumerate() {
            for &j in &nodes[x + 1..] {
                e += t.has_edge(i, j) as u64;
            }
        }
        best = best.max(Ratio::new(e, nodes.len() as u64));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_code() {
        let t = Template::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(canonical_code(&t).unwrap(), (3, 7));
    }

    #[test]
    fn four_star_labellings() {
        // center at each of the four positions
        let values: Vec<u64> = (0..4)
            .map(|c| {
                let e: Vec<_> = (0..4).filter(|&v| v != c).map(|v| (c, v)).collect();
                Template::from_edges(4, &e).unwrap().value()
            })
            .collect();
        assert_eq!(values, [56, 38, 21, 11]);
        for c in 0..4 {
            let e: Vec<_> = (0..4).filter(|&v| v != c).map(|v| (c, v)).collect();
            assert_eq!(
                canonical_code(&Template::from_edges(4, &e).unwrap()).unwrap(),
                (4, 11)
            );
        }
    }

    #[test]
    fn six_star_code() {
        let e: Vec<_> = (1..6).map(|v| (0, v)).collect();
        assert_eq!(
            canonical_code(&Template::from_edges(6, &e).unwrap()).unwrap(),
            (6, 1099)
        );
    }

    #[test]
    fn named_five_node_codes() {
        let cases: [(&[(usize, usize)], u64); 4] = [
            (&[(0, 1), (0, 2), (0, 3), (0, 4)], 75),
            (&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 236),
            // bull: triangle with two horns on different corners
            (&[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)], 87),
            // cricket: triangle with two horns on one corner
            (&[(0, 1), (1, 2), (0, 2), (0, 3), (0, 4)], 79),
        ];
        for (edges, a) in cases {
            let t = Template::from_edges(5, edges).unwrap();
            assert_eq!(canonical_code(&t).unwrap(), (5, a));
        }
        // banner: 4-circle with a pendant
        let t = Template::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap();
        assert_eq!(canonical_code(&t).unwrap(), (5, 94));
    }

    #[test]
    fn disconnected_rejected() {
        let t = Template::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            canonical_code(&t),
            Err(Error::DisconnectedTemplate)
        ));
        let t = Template::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(canonical_code(&t), Err(Error::UnsupportedSize(2))));
    }

    #[test]
    fn non_canonical_code_rejected() {
        assert!(SubgraphClass::new(4, 56).is_err());
        assert!(SubgraphClass::new(4, 11).is_ok());
    }

    #[test]
    fn builtin_classes_are_canonical_and_named() {
        for c in classes::three_and_four()
            .into_iter()
            .chain(classes::extended())
        {
            assert!(c.name.is_some());
            assert!(c.template().is_connected());
        }
    }

    #[test]
    fn eight_classes_are_all_connected_3_and_4_node_graphs() {
        for b in 3..=4 {
            let codes: BTreeSet<u64> = (0u64..1 << pair_count(b))
                .filter_map(|v| canonical_code(&Template::from_value(b, v).unwrap()).ok())
                .map(|(_, a)| a)
                .collect();
            let expect: BTreeSet<u64> = classes::three_and_four()
                .into_iter()
                .filter(|c| c.b == b)
                .map(|c| c.a)
                .collect();
            assert_eq!(codes, expect);
        }
    }

    #[test]
    fn keys_round_trip() {
        let c = classes::four_circle();
        assert_eq!(c.key(true), "Mt_30_4");
        assert_eq!(
            SubgraphClass::parse_key("Mt_30_4").unwrap(),
            (c.clone(), true)
        );
        assert_eq!(SubgraphClass::parse_key("M_30_4").unwrap(), (c, false));
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_ratio(&classes::triangle()), Ratio::new(1, 1));
        assert_eq!(gamma_ratio(&classes::three_star()), Ratio::new(2, 3));
        assert_eq!(gamma_ratio(&classes::four_complete()), Ratio::new(3, 2));
        // the tadpole's densest part is its triangle
        assert_eq!(gamma_ratio(&classes::tadpole()), Ratio::new(1, 1));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn code_invariant_under_relabelling(b in 3usize..=6, value in any::<u32>(), seed in any::<u64>()) {
                let value = value as u64 & ((1 << pair_count(b)) - 1);
                let t = Template::from_value(b, value).unwrap();
                prop_assume!(t.is_connected());
                let perms = permutations(b);
                let p = &perms[(seed % perms.len() as u64) as usize];
                prop_assert_eq!(canonical_code(&t).unwrap(), canonical_code(&t.relabel(p)).unwrap());
            }
        }
    }
}
