//! First cohomology `H¹(G, M_H)` over F2, with classes labeled by `K`.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{GsnnError, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupLattice, Transversal};
use crate::reps::{build_rho, factor_rho, SignedPermRep};
use crate::scalar::Scalar;

/// `value[g] = (1 − diag ζ^L(g))/2` as 0/1 entries, together with the
/// permutation part `π(g)` needed to state the cocycle condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub h: usize,
    pub values: Vec<Vec<u8>>,
    pub pi: Vec<Vec<usize>>,
}

impl Cocycle {
    /// `ẑ(g₁g₂) = ẑ(g₁) + π(g₁)ẑ(g₂)` for every pair, where `(πv)_{p(i)} = v_i`.
    pub fn check<S: Scalar>(&self, group: &FiniteGroup<S>) -> bool {
        let n = group.order();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let za = &self.values[a];
                let zb = &self.values[b];
                let mut moved = vec![0u8; zb.len()];
                for (i, &v) in zb.iter().enumerate() {
                    moved[self.pi[a][i]] = v;
                }
                let rhs: Vec<u8> = za.iter().zip(&moved).map(|(x, y)| x ^ y).collect();
                self.values[group.mul(a, b)] == rhs
            })
        })
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().flatten().all(|&v| v == 0)
    }
}

pub fn cocycle_of(rep: &SignedPermRep, h: usize) -> Result<Cocycle> {
    let f = factor_rho(rep)?;
    Ok(Cocycle {
        h,
        values: f
            .zeta_left
            .iter()
            .map(|z| z.iter().map(|&s| u8::from(s < 0)).collect())
            .collect(),
        pi: f.pi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub h: usize,
    pub k: usize,
    pub representative: Cocycle,
    pub is_zero: bool,
}

#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub h: usize,
    pub classes: Vec<CohomologyClass>,
    /// `addition[a][b]` is the index of the sum of classes `a` and `b`.
    pub addition: Vec<Vec<usize>>,
}

/// Classes are `K = H` first, then the index-2 subgroups of `H` by id. The
/// sum of the classes of `K₁` and `K₂` is the class of
/// `(K₁ ∩ K₂) ∪ ((H ∖ K₁) ∩ (H ∖ K₂))`.
pub fn cohomology_group<S: Scalar>(group: &FiniteGroup<S>, lattice: &SubgroupLattice, h: usize) -> Result<CohomologyGroup> {
    let mut ks = vec![h];
    ks.extend(lattice.index2_subgroups(h));
    let mut classes = Vec::with_capacity(ks.len());
    for &k in &ks {
        let t = Transversal::standard(group, lattice, h, k)?;
        let rep = build_rho(group, lattice, &t)?;
        let representative = cocycle_of(&rep, h)?;
        if !representative.check(group) {
            return Err(GsnnError::InternalInconsistency("cocycle condition fails".into()));
        }
        classes.push(CohomologyClass {
            h,
            k,
            representative,
            is_zero: k == h,
        });
    }
    let hs = lattice.get(h);
    let position: BTreeMap<usize, usize> = ks.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut addition = vec![vec![0; ks.len()]; ks.len()];
    for (a, &k1) in ks.iter().enumerate() {
        for (b, &k2) in ks.iter().enumerate() {
            let (s1, s2) = (lattice.get(k1), lattice.get(k2));
            let sum = Subgroup::from_members(
                hs.members()
                    .iter()
                    .copied()
                    .filter(|&x| s1.contains(x) == s2.contains(x))
                    .collect(),
            );
            let id = lattice
                .id_of(&sum)
                .and_then(|id| position.get(&id).copied())
                .ok_or_else(|| GsnnError::InternalInconsistency("class sum is not a listed subgroup".into()))?;
            addition[a][b] = id;
        }
    }
    let cg = CohomologyGroup { h, classes, addition };
    if !cg.check_axioms() {
        return Err(GsnnError::InternalInconsistency("cohomology addition is not an elementary abelian 2-group".into()));
    }
    Ok(cg)
}

impl CohomologyGroup {
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    /// Zero is class 0, every class is its own inverse, and the table is
    /// commutative and associative.
    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        let t = &self.addition;
        self.classes.first().is_some_and(|c| c.is_zero)
            && (0..n).all(|a| t[0][a] == a && t[a][a] == 0)
            && (0..n).all(|a| (0..n).all(|b| t[a][b] == t[b][a]))
            && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| t[t[a][b]][c] == t[a][t[b][c]])))
    }

    /// Index of the class labeled by subgroup `k`.
    pub fn class_of(&self, k: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.k == k)
    }

    pub fn to_json(&self) -> CohomologyJson {
        CohomologyJson {
            h: self.h,
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    k: c.k,
                    is_zero: c.is_zero,
                })
                .collect(),
            addition: self.addition.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassJson {
    #[serde(rename = "K")]
    pub k: usize,
    pub is_zero: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyJson {
    #[serde(rename = "H")]
    pub h: usize,
    pub classes: Vec<ClassJson>,
    pub addition: Vec<Vec<usize>>,
}

/// Partition of the classes of `H¹(G, M_H)` into orbits: `K` and `K'` share an
/// orbit iff some `g` normalizing `H` conjugates `K` to `K'`.
pub fn aut_orbits(lattice: &SubgroupLattice, cg: &CohomologyGroup) -> Vec<Vec<usize>> {
    let normalizer = lattice.normalizer(cg.h);
    let mut orbit_of = vec![usize::MAX; cg.order()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for a in 0..cg.order() {
        if orbit_of[a] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = normalizer
            .iter()
            .filter_map(|&g| cg.class_of(lattice.conjugate(cg.classes[a].k, g)))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &b in &orbit {
            orbit_of[b] = orbits.len();
        }
        orbits.push(orbit);
    }
    orbits
}

pub fn is_zero_class(c: &CohomologyClass) -> bool {
    c.h == c.k
}

const PALETTE: &[&str] = &["red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta"];

/// Cayley-style picture of a representation: one node per hidden neuron and,
/// for each generator, arcs `i → p(i)`; an arc is dashed when it reverses sign.
pub fn cohomology_dot<S: Scalar>(group: &FiniteGroup<S>, rep: &SignedPermRep, title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{title}\" {{");
    let _ = writeln!(out, "  node [shape=circle];");
    for i in 0..rep.degree {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", i + 1);
    }
    for (c, &g) in group.generators().iter().enumerate() {
        let color = PALETTE[c % PALETTE.len()];
        let im = &rep.images[g];
        for i in 0..rep.degree {
            let style = if im.signs[i] < 0 { "dashed" } else { "solid" };
            let _ = writeln!(out, "  n{i} -> n{} [color={color}, style={style}];", im.perm[i]);
        }
    }
    out.push_str("}\n");
    out
}
