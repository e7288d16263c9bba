use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::FiniteGroup;
use crate::error::{GsnnError, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A subgroup as a sorted list of element indices.
///
/// Ordered by `(order, members)`, which is also the order of
/// [`SubgroupLattice::subgroups`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Wraps a member list without checking closure.
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    /// Subgroup generated by `gens`.
    pub fn generated_by<S: Scalar>(group: &FiniteGroup<S>, gens: &[usize]) -> Self {
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = group.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            members: (0..group.order()).filter(|&i| seen[i]).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn is_closed<S: Scalar>(&self, group: &FiniteGroup<S>) -> bool {
        self.contains(0)
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(group.mul(a, b))))
    }

    /// `g⁻¹ S g`.
    pub fn conjugate<S: Scalar>(&self, group: &FiniteGroup<S>, g: usize) -> Subgroup {
        Subgroup::from_members(self.members.iter().map(|&s| group.conjugate(s, g)).collect())
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order(), &self.members).cmp(&(other.order(), &other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A conjugacy class of pairs `K ≤ H` with `|H:K| ≤ 2`. The representative
/// `(h, k)` is the least member under subgroup order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub h: usize,
    pub k: usize,
    /// `|H:K|`, 1 or 2.
    pub index: usize,
    /// All `(H', K')` in the class, sorted.
    pub members: Vec<(usize, usize)>,
}

impl PairClass {
    pub fn tau(&self) -> usize {
        self.index - 1
    }
}

/// All subgroups of a group, sorted by `(order, members)` and addressed by
/// position.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    ids: HashMap<Vec<usize>, usize>,
    /// `conj[g][s]` is the id of `g⁻¹ S g`.
    conj: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    /// Enumerates subgroups starting from cyclic ones and repeatedly adjoining
    /// one element until no new subgroup appears.
    pub fn enumerate<S: Scalar>(group: &FiniteGroup<S>) -> Self {
        let n = group.order();
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        let mut frontier: Vec<Subgroup> = Vec::new();
        for g in 0..n {
            let c = Subgroup::generated_by(group, &[g]);
            if found.insert(c.clone()) {
                frontier.push(c);
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for g in 0..n {
                    if s.contains(g) {
                        continue;
                    }
                    let mut gens = s.members.clone();
                    gens.push(g);
                    let t = Subgroup::generated_by(group, &gens);
                    if found.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
            frontier = next;
        }
        let subgroups: Vec<Subgroup> = found.into_iter().collect();
        let ids: HashMap<Vec<usize>, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();
        let conj = (0..n)
            .map(|g| {
                subgroups
                    .iter()
                    .map(|s| ids[&s.conjugate(group, g).members])
                    .collect()
            })
            .collect();
        SubgroupLattice { subgroups, ids, conj }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, id: usize) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn id_of(&self, s: &Subgroup) -> Option<usize> {
        self.ids.get(&s.members).copied()
    }

    /// The whole group.
    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Id of `g⁻¹ S g`.
    pub fn conjugate(&self, id: usize, g: usize) -> usize {
        self.conj[g][id]
    }

    /// Ids of all conjugates of `id`, sorted.
    pub fn conjugacy_class(&self, id: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.conj.iter().map(|row| row[id]).collect();
        set.into_iter().collect()
    }

    /// Ids of the conjugacy class representatives (least member of each class).
    pub fn class_representatives(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&id| self.conjugacy_class(id)[0] == id)
            .collect()
    }

    /// Ids of the subgroups contained in `h`, including `h` itself.
    pub fn subgroups_of(&self, h: usize) -> Vec<usize> {
        let hs = &self.subgroups[h];
        (0..self.len())
            .filter(|&k| self.subgroups[k].is_subset_of(hs))
            .collect()
    }

    /// Ids of the index-2 subgroups of `h`.
    pub fn index2_subgroups(&self, h: usize) -> Vec<usize> {
        let order = self.subgroups[h].order();
        self.subgroups_of(h)
            .into_iter()
            .filter(|&k| 2 * self.subgroups[k].order() == order)
            .collect()
    }

    /// Normalizer `N_G(H)` as element indices.
    pub fn normalizer(&self, h: usize) -> Vec<usize> {
        (0..self.conj.len()).filter(|&g| self.conj[g][h] == h).collect()
    }

    /// Length of the longest chain of subgroups from the trivial one up to `id`.
    pub fn height(&self, id: usize) -> usize {
        self.heights()[id]
    }

    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for i in 0..self.len() {
            for j in 0..i {
                if self.subgroups[j].order() < self.subgroups[i].order()
                    && self.subgroups[j].is_subset_of(&self.subgroups[i])
                {
                    h[i] = h[i].max(h[j] + 1);
                }
            }
        }
        h
    }

    /// Conjugacy classes of pairs `K ≤ H` with `|H:K| ≤ 2`, sorted by representative.
    pub fn pair_classes(&self) -> Vec<PairClass> {
        let mut pairs = Vec::new();
        for h in 0..self.len() {
            pairs.push((h, h));
            for k in self.index2_subgroups(h) {
                pairs.push((h, k));
            }
        }
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut classes: Vec<PairClass> = Vec::new();
        for &(h, k) in &pairs {
            if seen.contains_key(&(h, k)) {
                continue;
            }
            let members: BTreeSet<(usize, usize)> = self
                .conj
                .iter()
                .map(|row| (row[h], row[k]))
                .collect();
            let members: Vec<(usize, usize)> = members.into_iter().collect();
            for &m in &members {
                seen.insert(m, classes.len());
            }
            let (rh, rk) = members[0];
            classes.push(PairClass {
                h: rh,
                k: rk,
                index: self.subgroups[rh].order() / self.subgroups[rk].order(),
                members,
            });
        }
        classes.sort_by_key(|c| (c.h, c.k));
        classes
    }
}

/// Left transversal of `H` in `G` together with a flip element of `H ∖ K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transversal {
    pub h: usize,
    pub k: usize,
    /// `g_1, …, g_n` with `g_1 = e`.
    pub reps: Vec<usize>,
    /// Least element of `H ∖ K`; `None` when `K = H`.
    pub h_flip: Option<usize>,
    /// `coset_of[x] = j` iff `x ∈ g_j H`.
    coset_of: Vec<usize>,
}

impl Transversal {
    /// Greedy transversal: scan elements in order, keep each one whose coset
    /// is not yet represented.
    pub fn standard<S: Scalar>(group: &FiniteGroup<S>, lattice: &SubgroupLattice, h: usize, k: usize) -> Result<Self> {
        let hs = lattice.get(h);
        let mut reps = Vec::new();
        let mut covered = vec![false; group.order()];
        for g in 0..group.order() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in hs.members() {
                covered[group.mul(g, x)] = true;
            }
        }
        Self::from_reps(group, lattice, h, k, reps)
    }

    /// Validates an explicit list of coset representatives.
    pub fn from_reps<S: Scalar>(
        group: &FiniteGroup<S>,
        lattice: &SubgroupLattice,
        h: usize,
        k: usize,
        reps: Vec<usize>,
    ) -> Result<Self> {
        let (hs, ks) = (lattice.get(h), lattice.get(k));
        if !ks.is_subset_of(hs) || (hs.order() != ks.order() && hs.order() != 2 * ks.order()) {
            return Err(GsnnError::InvalidPair(format!(
                "subgroup {k} is not of index at most 2 in subgroup {h}"
            )));
        }
        if reps.first() != Some(&0) || reps.len() * hs.order() != group.order() {
            return Err(GsnnError::InvalidPair("transversal must start at the identity and cover G".into()));
        }
        let mut coset_of = vec![usize::MAX; group.order()];
        for (j, &g) in reps.iter().enumerate() {
            for &x in hs.members() {
                let y = group.mul(g, x);
                if coset_of[y] != usize::MAX {
                    return Err(GsnnError::InvalidPair("two representatives share a coset".into()));
                }
                coset_of[y] = j;
            }
        }
        let h_flip = hs.members().iter().copied().find(|&x| !ks.contains(x));
        Ok(Transversal {
            h,
            k,
            reps,
            h_flip,
            coset_of,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Index `j` with `x ∈ g_j H`.
    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x]
    }
}

/// `{g ∈ G : g·p = p}`, verified to be closed.
pub fn stabilizer_of_matrix<S: Scalar>(group: &FiniteGroup<S>, p: &Matrix<S>) -> Result<Subgroup> {
    let eps = group.tolerances().equality;
    let members: Vec<usize> = (0..group.order())
        .filter(|&g| group.matrix(g).mul(p).approx_eq(p, eps))
        .collect();
    let s = Subgroup::from_members(members);
    if !s.is_closed(group) {
        return Err(GsnnError::InternalInconsistency("stabilizer is not a subgroup".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use num_rational::BigRational;

    fn d6() -> FiniteGroup<BigRational> {
        GroupSpec::DihedralPerm { n: 6 }.build(48, Default::default()).unwrap()
    }

    #[test]
    fn d6_element_order_matches_breadth_first_words() {
        let g = d6();
        // e, r, t, r², rt, r⁵t, ...; r³ is element 6.
        assert_eq!(g.mul(1, 1), 3);
        assert_eq!(g.mul(3, 1), 6);
        assert_eq!(g.mul(1, 2), 4);
        assert_eq!(Subgroup::generated_by(&g, &[6, 2]).members(), &[0, 2, 6, 11]);
    }

    #[test]
    fn d6_has_sixteen_subgroups_in_ten_classes() {
        let g = d6();
        let l = SubgroupLattice::enumerate(&g);
        assert_eq!(l.len(), 16);
        assert_eq!(l.class_representatives().len(), 10);
        assert_eq!(l.get(0).order(), 1);
        assert_eq!(l.get(l.top()).order(), 12);
        for s in l.subgroups() {
            assert!(s.is_closed(&g));
        }
    }

    #[test]
    fn cyclic_six_pair_classes() {
        let g = GroupSpec::CyclicPerm { n: 6 }.build::<BigRational>(48, Default::default()).unwrap();
        let l = SubgroupLattice::enumerate(&g);
        let classes = l.pair_classes();
        // Four subgroups, each with K = H, plus index-2 pairs C2>1 and C6>C3.
        assert_eq!(classes.len(), 6);
        assert_eq!(classes.iter().filter(|c| c.index == 2).count(), 2);
    }

    #[test]
    fn standard_transversal_starts_at_identity() {
        let g = d6();
        let l = SubgroupLattice::enumerate(&g);
        let klein = l.id_of(&Subgroup::from_members(vec![0, 2, 6, 11])).unwrap();
        let t = Transversal::standard(&g, &l, klein, l.id_of(&Subgroup::from_members(vec![0, 6])).unwrap()).unwrap();
        assert_eq!(t.reps, vec![0, 1, 3]);
        assert_eq!(t.h_flip, Some(2));
        for x in 0..12 {
            let j = t.coset_of(x);
            assert!(l.get(klein).contains(g.mul(g.inv(t.reps[j]), x)));
        }
    }

    #[test]
    fn transversal_rejects_bad_pair() {
        let g = d6();
        let l = SubgroupLattice::enumerate(&g);
        assert!(matches!(Transversal::standard(&g, &l, 0, l.top()), Err(GsnnError::InvalidPair(_))));
    }

    #[test]
    fn heights_follow_longest_chain() {
        let g = d6();
        let l = SubgroupLattice::enumerate(&g);
        let h = l.heights();
        assert_eq!(h[0], 0);
        assert_eq!(h[l.top()], 3);
    }
}
