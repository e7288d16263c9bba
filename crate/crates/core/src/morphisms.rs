//! Relations between architectures: inclusion candidates, tunneling pairs
//! and achievable hidden widths.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::architect::{weight_space, ArchitectureSpec, GroupAnalysis};
use crate::error::Result;
use crate::linalg::subspace_leq;
use crate::scalar::Scalar;

/// Unordered pairs `(a, b)`, `a < b`, of architectures with the same `H` and different `K`.
pub fn tunnel_edges<S: Scalar>(archs: &[ArchitectureSpec<S>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..archs.len() {
        for b in a + 1..archs.len() {
            if archs[a].h == archs[b].h && archs[a].k != archs[b].k {
                out.push((a, b));
            }
        }
    }
    out
}

/// Directed edges `a → b` meaning `a` is a candidate limit of `b`: some
/// member `(H', K')` of `b`'s pair class has `H' ≤ H_a`, `K' ≤ K_a` and
/// `ran(a) ⊆ ran(H', K')`. This is a sufficient condition only.
pub fn inclusion_candidates<S: Scalar>(analysis: &GroupAnalysis<S>, archs: &[ArchitectureSpec<S>]) -> Result<Vec<(usize, usize)>> {
    let (group, lattice) = (&analysis.group, &analysis.lattice);
    let mut out = Vec::new();
    for (a, arch_a) in archs.iter().enumerate() {
        let (ha, ka) = (lattice.get(arch_a.h), lattice.get(arch_a.k));
        for (b, arch_b) in archs.iter().enumerate() {
            if a == b {
                continue;
            }
            for &(h2, k2) in &arch_b.pair_class.members {
                if !lattice.get(h2).is_subset_of(ha) || !lattice.get(k2).is_subset_of(ka) {
                    continue;
                }
                let v = weight_space(group, lattice, h2, k2);
                if subspace_leq(&arch_a.weight_space, &v, group.tolerances())? {
                    out.push((a, b));
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Drops every edge implied by a longer path.
pub fn transitive_reduction(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if i != k && reach[i][k] {
                let (row_k, row_i) = if i < k {
                    let (lo, hi) = reach.split_at_mut(k);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = reach.split_at_mut(i);
                    (&lo[k], &mut hi[0])
                };
                for (r, &via) in row_i.iter_mut().zip(row_k.iter()) {
                    *r |= via;
                }
            }
        }
    }
    edges
        .iter()
        .copied()
        .filter(|&(a, b)| !(0..n).any(|m| m != a && m != b && reach[a][m] && reach[m][b]))
        .collect()
}

/// Widths `≤ max_width` of the form `Σ cᵢ nᵢ + 2ε`, `ε ∈ {0, 1}`.
pub fn width_semigroup(sizes: &[usize], max_width: usize) -> BTreeSet<usize> {
    let mut reachable = vec![false; max_width + 1];
    reachable[0] = true;
    for w in 1..=max_width {
        reachable[w] = sizes.iter().any(|&s| s > 0 && s <= w && reachable[w - s]);
    }
    (0..=max_width)
        .filter(|&w| reachable[w] || (w >= 2 && reachable[w - 2]))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismGraph {
    pub schema: u32,
    pub nodes: Vec<String>,
    /// Candidate inclusions, `from → to`.
    pub inclusion_edges: Vec<(usize, usize)>,
    pub tunnel_edges: Vec<(usize, usize)>,
    /// Nodes grouped by the height of `H` in the subgroup lattice.
    pub layers: Vec<Vec<usize>>,
}

impl MorphismGraph {
    pub fn build<S: Scalar>(analysis: &GroupAnalysis<S>, archs: &[ArchitectureSpec<S>]) -> Result<MorphismGraph> {
        let heights = analysis.lattice.heights();
        let levels: BTreeSet<usize> = archs.iter().map(|a| heights[a.h]).collect();
        let layers = levels
            .iter()
            .map(|&l| (0..archs.len()).filter(|&i| heights[archs[i].h] == l).collect())
            .collect();
        Ok(MorphismGraph {
            schema: 1,
            nodes: archs.iter().map(|a| a.name.clone()).collect(),
            inclusion_edges: inclusion_candidates(analysis, archs)?,
            tunnel_edges: tunnel_edges(archs),
            layers,
        })
    }

    pub fn has_inclusion(&self, from: &str, to: &str) -> bool {
        self.inclusion_edges
            .iter()
            .any(|&(a, b)| self.nodes[a] == from && self.nodes[b] == to)
    }

    /// Black arcs for the transitive reduction of the inclusion candidates,
    /// red double-headed arcs for tunneling, one rank per layer.
    pub fn to_dot(&self, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{title}\" {{");
        let _ = writeln!(out, "  rankdir=BT;");
        for (i, name) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  a{i} [label=\"{name}\"];");
        }
        for layer in &self.layers {
            let ids: Vec<String> = layer.iter().map(|i| format!("a{i}")).collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
        }
        for (a, b) in transitive_reduction(self.nodes.len(), &self.inclusion_edges) {
            let _ = writeln!(out, "  a{a} -> a{b} [color=black, label=\"candidate\"];");
        }
        for &(a, b) in &self.tunnel_edges {
            let _ = writeln!(out, "  a{a} -> a{b} [dir=both, color=\"red:red\"];");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::architect::enumerate_architectures;
    use crate::group::GroupSpec;
    use crate::scalar::Tolerances;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn c6_permutation_graph() {
        let g = GroupSpec::preset("C6").unwrap().build::<BigRational>(48, Tolerances::default()).unwrap();
        let an = GroupAnalysis::new(g).unwrap();
        let archs = enumerate_architectures(&an).unwrap();
        let graph = MorphismGraph::build(&an, &archs).unwrap();
        let pairs: Vec<(&str, &str)> = graph
            .tunnel_edges
            .iter()
            .map(|&(a, b)| (graph.nodes[a].as_str(), graph.nodes[b].as_str()))
            .collect();
        assert_eq!(pairs, [("1.0", "1.1"), ("3.0", "3.1")]);
        assert!(graph.has_inclusion("1.1", "0.0"));
        assert!(graph.has_inclusion("3.1", "1.1"));
        assert_eq!(graph.layers.len(), 3);
        let dot = graph.to_dot("C6");
        assert_eq!(dot.matches("red:red").count(), 2);
    }

    #[test]
    fn width_examples() {
        let w = width_semigroup(&[3, 6], 13);
        assert_eq!(w.into_iter().collect::<Vec<_>>(), [0, 2, 3, 5, 6, 8, 9, 11, 12]);
        assert_eq!(width_semigroup(&[1], 10).len(), 11);
        assert_eq!(width_semigroup(&[], 10).into_iter().collect::<Vec<_>>(), [0, 2]);
    }

    #[test]
    fn reduction_drops_shortcuts() {
        assert_eq!(transitive_reduction(3, &[(0, 1), (1, 2), (0, 2)]), [(0, 1), (1, 2)]);
    }

    proptest! {
        #[test]
        fn widths_are_closed_under_adding_sizes(sizes in proptest::collection::vec(1usize..8, 0..4), max in 0usize..40) {
            let w = width_semigroup(&sizes, max);
            for &x in &w {
                for &s in &sizes {
                    if x + s <= max {
                        prop_assert!(w.contains(&(x + s)));
                    }
                }
            }
        }
    }
}
