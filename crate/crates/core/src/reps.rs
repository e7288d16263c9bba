//! Signed permutation representations and the induced representation `ρ_HK`.

use serde::{Deserialize, Serialize};

use crate::error::{GsnnError, Result};
use crate::group::{FiniteGroup, PairClass, Subgroup, SubgroupLattice, Transversal};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A signed permutation: `e_i ↦ signs[i]·e_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let signs = other
            .perm
            .iter()
            .zip(&other.signs)
            .map(|(&j, &s)| s * self.signs[j])
            .collect();
        SignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.degree();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        SignedPerm { perm, signs }
    }

    pub fn to_matrix<S: Scalar>(&self) -> Matrix<S> {
        let n = self.degree();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(self.perm[i], i)] = S::from_i64(self.signs[i] as i64);
        }
        m
    }

    /// Reads a signed permutation matrix back.
    pub fn from_matrix<S: Scalar>(m: &Matrix<S>, eps: f64) -> Option<SignedPerm> {
        let n = m.rows();
        let mut perm = vec![0; n];
        let mut signs = vec![0i8; n];
        for j in 0..n {
            let mut hit = None;
            for i in 0..n {
                let x = &m[(i, j)];
                if x.negligible(eps) {
                    continue;
                }
                let s = if x.approx_eq(&S::one(), eps) {
                    1
                } else if x.approx_eq(&-S::one(), eps) {
                    -1
                } else {
                    return None;
                };
                if hit.replace((i, s)).is_some() {
                    return None;
                }
            }
            let (i, s) = hit?;
            perm[j] = i;
            signs[j] = s;
        }
        Some(SignedPerm { perm, signs })
    }

    /// Applies the signed permutation to a vector: `(Av)_{p(i)} = s_i v_i`.
    pub fn apply<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        for i in 0..v.len() {
            out[self.perm[i]] = if self.signs[i] > 0 { v[i].clone() } else { -v[i].clone() };
        }
        out
    }
}

/// A homomorphism `G → PZ(n)`, one image per group element in element order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermRep {
    pub degree: usize,
    pub images: Vec<SignedPerm>,
    /// `(H, K)` subgroup ids when the representation was induced.
    pub source_pair: Option<(usize, usize)>,
}

impl SignedPermRep {
    pub fn check_homomorphism<S: Scalar>(&self, group: &FiniteGroup<S>) -> bool {
        let n = group.order();
        self.images.len() == n
            && (0..n).all(|a| {
                (0..n).all(|b| self.images[a].compose(&self.images[b]) == self.images[group.mul(a, b)])
            })
    }

    /// `g ↦ A⁻¹ ρ(g) A`.
    pub fn conjugate_by(&self, a: &SignedPerm) -> SignedPermRep {
        let ai = a.inverse();
        SignedPermRep {
            degree: self.degree,
            images: self.images.iter().map(|x| ai.compose(x).compose(a)).collect(),
            source_pair: None,
        }
    }

    pub fn direct_sum(&self, other: &SignedPermRep) -> SignedPermRep {
        let shift = self.degree;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut perm = a.perm.clone();
                perm.extend(b.perm.iter().map(|&p| p + shift));
                let mut signs = a.signs.clone();
                signs.extend(&b.signs);
                SignedPerm { perm, signs }
            })
            .collect();
        SignedPermRep {
            degree: self.degree + other.degree,
            images,
            source_pair: None,
        }
    }

    pub fn to_json(&self) -> RepJson {
        RepJson {
            degree: self.degree,
            images: self
                .images
                .iter()
                .map(|x| ImageJson {
                    perm: x.perm.iter().map(|p| p + 1).collect(),
                    signs: x.signs.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &RepJson) -> Result<SignedPermRep> {
        let images = json
            .images
            .iter()
            .map(|im| {
                if im.perm.len() != json.degree || im.signs.len() != json.degree {
                    return Err(GsnnError::DimensionMismatch {
                        expected: json.degree,
                        found: im.perm.len(),
                    });
                }
                if im.perm.iter().any(|&p| p == 0 || p > json.degree) || im.signs.iter().any(|s| s.abs() != 1) {
                    return Err(GsnnError::InvalidSpec("malformed signed permutation".into()));
                }
                Ok(SignedPerm {
                    perm: im.perm.iter().map(|p| p - 1).collect(),
                    signs: im.signs.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignedPermRep {
            degree: json.degree,
            images,
            source_pair: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageJson {
    /// 1-indexed.
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepJson {
    pub degree: usize,
    pub images: Vec<ImageJson>,
}

/// Builds `ρ_HK` on the transversal: `ρ(g)e_i = ±e_j` where `g·g_i ∈ g_j H`,
/// with sign `+` exactly when `g_j⁻¹ g g_i ∈ K`.
pub fn build_rho<S: Scalar>(group: &FiniteGroup<S>, lattice: &SubgroupLattice, t: &Transversal) -> Result<SignedPermRep> {
    let (hs, ks) = (lattice.get(t.h), lattice.get(t.k));
    let n = t.len();
    let mut images = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let mut perm = vec![0; n];
        let mut signs = vec![0i8; n];
        for i in 0..n {
            let x = group.mul(g, t.reps[i]);
            let j = t.coset_of(x);
            let y = group.mul(group.inv(t.reps[j]), x);
            if !hs.contains(y) {
                return Err(GsnnError::InternalInconsistency("coset lookup left H".into()));
            }
            perm[i] = j;
            signs[i] = if ks.contains(y) { 1 } else { -1 };
        }
        images.push(SignedPerm { perm, signs });
    }
    Ok(SignedPermRep {
        degree: n,
        images,
        source_pair: Some((t.h, t.k)),
    })
}

/// `ρ(g) = ζ^L(g) π(g) = π(g) ζ(g)` with the sign vectors stored per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFactorization {
    /// `pi[g][i] = p(i)`.
    pub pi: Vec<Vec<usize>>,
    /// Diagonal of `ζ^L(g)`: indexed by target row.
    pub zeta_left: Vec<Vec<i8>>,
    /// Diagonal of `ζ(g)`: indexed by source column.
    pub zeta_right: Vec<Vec<i8>>,
}

pub fn factor_rho(rep: &SignedPermRep) -> Result<RepFactorization> {
    let mut f = RepFactorization {
        pi: Vec::new(),
        zeta_left: Vec::new(),
        zeta_right: Vec::new(),
    };
    for im in &rep.images {
        let mut left = vec![0i8; rep.degree];
        for i in 0..rep.degree {
            left[im.perm[i]] = im.signs[i];
        }
        let pi = SignedPerm {
            perm: im.perm.clone(),
            signs: vec![1; rep.degree],
        };
        let zl = SignedPerm {
            perm: (0..rep.degree).collect(),
            signs: left.clone(),
        };
        let zr = SignedPerm {
            perm: (0..rep.degree).collect(),
            signs: im.signs.clone(),
        };
        if zl.compose(&pi) != *im || pi.compose(&zr) != *im {
            return Err(GsnnError::InternalInconsistency("factorization does not recompose".into()));
        }
        f.pi.push(im.perm.clone());
        f.zeta_left.push(left);
        f.zeta_right.push(im.signs.clone());
    }
    Ok(f)
}

/// Irreducible in the signed-permutation sense: the orbit of `±e_1` meets every axis.
pub fn is_irreducible(rep: &SignedPermRep) -> bool {
    if rep.degree == 0 {
        return false;
    }
    let mut hit = vec![false; rep.degree];
    for im in &rep.images {
        hit[im.perm[0]] = true;
    }
    hit.into_iter().all(|x| x)
}

/// `(H, K)` and the signs `z` recovered from an irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredPair {
    pub h: usize,
    pub k: usize,
    /// `z[i]` with `ρ(g_i)e_1 = z_i e_i`.
    pub z: Vec<i8>,
    pub transversal: Transversal,
}

/// Reads off `H = st(±e_1)` and `K = st(e_1)`, picks `g_i` as the least
/// element carrying `e_1` to `±e_i`, and checks that
/// `ρ = diag(z)·ρ_HK·diag(z)` on that transversal.
pub fn recover_pair<S: Scalar>(
    rep: &SignedPermRep,
    group: &FiniteGroup<S>,
    lattice: &SubgroupLattice,
) -> Result<RecoveredPair> {
    if !is_irreducible(rep) {
        return Err(GsnnError::NotIrreducible);
    }
    if rep.images.len() != group.order() {
        return Err(GsnnError::DimensionMismatch {
            expected: group.order(),
            found: rep.images.len(),
        });
    }
    let hs = Subgroup::from_members((0..group.order()).filter(|&g| rep.images[g].perm[0] == 0).collect());
    let ks = Subgroup::from_members(
        (0..group.order())
            .filter(|&g| rep.images[g].perm[0] == 0 && rep.images[g].signs[0] == 1)
            .collect(),
    );
    let lookup = |s: &Subgroup| {
        lattice
            .id_of(s)
            .ok_or_else(|| GsnnError::InternalInconsistency("stabilizer is not a subgroup; input is not a homomorphism".into()))
    };
    let (h, k) = (lookup(&hs)?, lookup(&ks)?);
    let mut reps = vec![usize::MAX; rep.degree];
    let mut z = vec![0i8; rep.degree];
    for g in 0..group.order() {
        let i = rep.images[g].perm[0];
        if reps[i] == usize::MAX {
            reps[i] = g;
            z[i] = rep.images[g].signs[0];
        }
    }
    let transversal = Transversal::from_reps(group, lattice, h, k, reps)?;
    let induced = build_rho(group, lattice, &transversal)?;
    let d = SignedPerm {
        perm: (0..rep.degree).collect(),
        signs: z.clone(),
    };
    let conjugated = induced.conjugate_by(&d);
    if conjugated.images != rep.images {
        return Err(GsnnError::InternalInconsistency("recovered pair does not reproduce the representation".into()));
    }
    Ok(RecoveredPair { h, k, z, transversal })
}

/// `|H:K|` of an irreducible representation.
pub fn rep_type<S: Scalar>(rep: &SignedPermRep, group: &FiniteGroup<S>, lattice: &SubgroupLattice) -> Result<usize> {
    let p = recover_pair(rep, group, lattice)?;
    Ok(lattice.get(p.h).order() / lattice.get(p.k).order())
}

/// Position in `classes` of the pair class of an irreducible representation.
pub fn conjugacy_class_id<S: Scalar>(
    rep: &SignedPermRep,
    group: &FiniteGroup<S>,
    lattice: &SubgroupLattice,
    classes: &[PairClass],
) -> Result<usize> {
    let p = recover_pair(rep, group, lattice)?;
    classes
        .iter()
        .position(|c| c.members.contains(&(p.h, p.k)))
        .ok_or_else(|| GsnnError::InternalInconsistency("pair class not listed".into()))
}

/// Splits a representation into its orbits on axes. Blocks are ordered by
/// their least axis and relabeled in ascending axis order.
pub fn orbit_decompose(rep: &SignedPermRep) -> Vec<(Vec<usize>, SignedPermRep)> {
    let mut block_of = vec![usize::MAX; rep.degree];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for start in 0..rep.degree {
        if block_of[start] != usize::MAX {
            continue;
        }
        let mut axes: Vec<usize> = rep.images.iter().map(|im| im.perm[start]).collect();
        axes.sort_unstable();
        axes.dedup();
        for &a in &axes {
            block_of[a] = blocks.len();
        }
        blocks.push(axes);
    }
    blocks
        .into_iter()
        .map(|axes| {
            let local = |a: usize| axes.binary_search(&a).expect("orbit is closed");
            let images = rep
                .images
                .iter()
                .map(|im| SignedPerm {
                    perm: axes.iter().map(|&a| local(im.perm[a])).collect(),
                    signs: axes.iter().map(|&a| im.signs[a]).collect(),
                })
                .collect();
            let sub = SignedPermRep {
                degree: axes.len(),
                images,
                source_pair: None,
            };
            (axes, sub)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn setup(name: &str) -> (FiniteGroup<BigRational>, SubgroupLattice) {
        let g = GroupSpec::preset(name).unwrap().build(48, Default::default()).unwrap();
        let l = SubgroupLattice::enumerate(&g);
        (g, l)
    }

    #[test]
    fn every_induced_rep_is_an_irreducible_homomorphism() {
        for name in ["C6", "D4", "Q8", "D6", "C2^2"] {
            let (g, l) = setup(name);
            for c in l.pair_classes() {
                let t = Transversal::standard(&g, &l, c.h, c.k).unwrap();
                let rho = build_rho(&g, &l, &t).unwrap();
                assert!(rho.check_homomorphism(&g), "{name} {c:?}");
                assert!(is_irreducible(&rho));
                assert_eq!(rho.degree * l.get(c.h).order(), g.order());
                let back = recover_pair(&rho, &g, &l).unwrap();
                assert_eq!((back.h, back.k), (c.h, c.k));
                assert!(back.z.iter().all(|&s| s == 1));
                factor_rho(&rho).unwrap();
            }
        }
    }

    #[test]
    fn flip_element_negates_first_axis() {
        let (g, l) = setup("D6");
        let c = l.pair_classes().into_iter().find(|c| c.index == 2).unwrap();
        let t = Transversal::standard(&g, &l, c.h, c.k).unwrap();
        let rho = build_rho(&g, &l, &t).unwrap();
        let f = t.h_flip.unwrap();
        assert_eq!((rho.images[f].perm[0], rho.images[f].signs[0]), (0, -1));
    }

    #[test]
    fn direct_sum_decomposes_back() {
        let (g, l) = setup("C6");
        let classes = l.pair_classes();
        let a = build_rho(&g, &l, &Transversal::standard(&g, &l, classes[1].h, classes[1].k).unwrap()).unwrap();
        let b = build_rho(&g, &l, &Transversal::standard(&g, &l, classes[0].h, classes[0].k).unwrap()).unwrap();
        let sum = a.direct_sum(&b);
        assert!(sum.check_homomorphism(&g));
        assert!(!is_irreducible(&sum));
        let parts = orbit_decompose(&sum);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].1.images, a.images);
        assert_eq!(parts[1].1.images, b.images);
    }

    #[test]
    fn not_irreducible_is_reported() {
        let (g, l) = setup("C2");
        let rep = SignedPermRep {
            degree: 2,
            images: vec![SignedPerm::identity(2); 2],
            source_pair: None,
        };
        assert!(matches!(recover_pair(&rep, &g, &l), Err(GsnnError::NotIrreducible)));
    }

    #[test]
    fn json_is_one_indexed_and_round_trips() {
        let (g, l) = setup("C3");
        let rho = build_rho(&g, &l, &Transversal::standard(&g, &l, 0, 0).unwrap()).unwrap();
        let j = rho.to_json();
        assert!(j.images.iter().all(|im| im.perm.iter().all(|&p| p >= 1)));
        assert_eq!(SignedPermRep::from_json(&j).unwrap().images, rho.images);
    }

    fn signed_perm(n: usize) -> impl Strategy<Value = SignedPerm> {
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n))
            .prop_map(|(perm, signs)| SignedPerm { perm, signs })
    }

    proptest! {
        #[test]
        fn conjugated_reps_recover_same_pair(idx in 0usize..64, a in signed_perm(6)) {
            let (g, l) = setup("D6");
            let classes = l.pair_classes();
            let six: Vec<_> = classes.iter().filter(|c| g.order() / l.get(c.h).order() == 6).collect();
            let c = six[idx % six.len()];
            let rho = build_rho(&g, &l, &Transversal::standard(&g, &l, c.h, c.k).unwrap()).unwrap();
            let conj = rho.conjugate_by(&a);
            prop_assert!(conj.check_homomorphism(&g));
            let id = conjugacy_class_id(&conj, &g, &l, &classes).unwrap();
            prop_assert_eq!((classes[id].h, classes[id].k), (c.h, c.k));
            let back = recover_pair(&conj, &g, &l).unwrap();
            prop_assert!(classes[id].members.contains(&(back.h, back.k)));
        }

        #[test]
        fn signed_perm_matrix_agrees_with_compose(a in signed_perm(5), b in signed_perm(5)) {
            let m: Matrix<BigRational> = a.to_matrix::<BigRational>().mul(&b.to_matrix());
            prop_assert_eq!(m, a.compose(&b).to_matrix());
            prop_assert_eq!(a.compose(&a.inverse()), SignedPerm::identity(5));
            prop_assert_eq!(SignedPerm::from_matrix(&a.to_matrix::<BigRational>(), 0.0), Some(a));
        }
    }
}
