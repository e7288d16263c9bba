//! Admissibility, naming, canonical parameter families and enumeration of
//! irreducible invariant architectures.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{cocycle_of, CohomologyClass};
use crate::error::{GsnnError, Result};
use crate::group::{stabilizer_of_matrix, FiniteGroup, GroupSpec, PairClass, Subgroup, SubgroupLattice, Transversal};
use crate::linalg::{average, dot, projector_onto, range_basis, Matrix, SubspaceBasis};
use crate::reps::{build_rho, RepJson, SignedPermRep};
use crate::scalar::{Entry, Scalar, Tolerances};
use crate::verify::SNNInstance;

/// `P_A`, the average of the matrices of `A`.
pub fn subgroup_projector<S: Scalar>(group: &FiniteGroup<S>, s: &Subgroup) -> Matrix<S> {
    average(group.dim(), s.members().iter().map(|&g| group.matrix(g)))
}

/// `ran(P_K − τP_H)` with `τ = |H:K| − 1`.
pub fn weight_space<S: Scalar>(group: &FiniteGroup<S>, lattice: &SubgroupLattice, h: usize, k: usize) -> SubspaceBasis<S> {
    let pk = subgroup_projector(group, lattice.get(k));
    let d = if h == k {
        pk
    } else {
        pk.sub(&subgroup_projector(group, lattice.get(h)))
    };
    range_basis(&d, group.tolerances())
}

#[derive(Clone, Debug)]
pub struct Admissibility<S> {
    pub admissible: bool,
    pub weight_space: SubspaceBasis<S>,
    /// Pointwise stabilizer of the weight space.
    pub stabilizer: Subgroup,
}

/// A pair is admissible when its weight space is nonzero and its pointwise
/// stabilizer in `G` is exactly `K`.
pub fn admissible<S: Scalar>(group: &FiniteGroup<S>, lattice: &SubgroupLattice, h: usize, k: usize) -> Result<Admissibility<S>> {
    let v = weight_space(group, lattice, h, k);
    let p = projector_onto(&v, group.tolerances());
    let stabilizer = stabilizer_of_matrix(group, &p)?;
    Ok(Admissibility {
        admissible: !v.is_zero() && &stabilizer == lattice.get(k),
        weight_space: v,
        stabilizer,
    })
}

/// A group with its subgroup lattice, pair classes and the admissibility of
/// each class representative.
#[derive(Clone, Debug)]
pub struct GroupAnalysis<S> {
    pub group: FiniteGroup<S>,
    pub lattice: SubgroupLattice,
    pub classes: Vec<PairClass>,
    pub admissibility: Vec<Admissibility<S>>,
}

impl<S: Scalar> GroupAnalysis<S> {
    pub fn new(group: FiniteGroup<S>) -> Result<Self> {
        let lattice = SubgroupLattice::enumerate(&group);
        let classes = lattice.pair_classes();
        let admissibility = classes
            .par_iter()
            .map(|c| admissible(&group, &lattice, c.h, c.k))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupAnalysis {
            group,
            lattice,
            classes,
            admissibility,
        })
    }

    pub fn admissible_flags(&self) -> Vec<bool> {
        self.admissibility.iter().map(|a| a.admissible).collect()
    }

    /// Class sizes of every subgroup, by id.
    fn class_sizes(&self) -> Vec<usize> {
        (0..self.lattice.len()).map(|id| self.lattice.conjugacy_class(id).len()).collect()
    }
}

/// Assignment of `i.j` labels to pair classes.
///
/// `i` numbers the conjugacy classes of `H` that carry at least one
/// architecture, ordered by `(|H|, class size, members)`. Within an `H`,
/// `j = 0` is `K = H` and `j = 1, 2, …` number the admissible index-2 classes
/// by `(class size of K, members)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Naming {
    labels: BTreeMap<(usize, usize), (usize, usize)>,
}

impl Naming {
    pub fn from_analysis<S: Scalar>(analysis: &GroupAnalysis<S>) -> Naming {
        let mut naming = Naming { labels: BTreeMap::new() };
        naming.extend(analysis, &analysis.admissible_flags());
        naming
    }

    /// Names taken from `reference` when its multiplication table coincides
    /// with `target`'s; pairs admissible only in `target` get fresh labels.
    pub fn with_reference<S: Scalar, T: Scalar>(target: &GroupAnalysis<S>, reference: &GroupAnalysis<T>) -> Naming {
        if target.group.mult_table() != reference.group.mult_table() {
            return Naming::from_analysis(target);
        }
        let mut naming = Naming { labels: BTreeMap::new() };
        naming.extend(target, &reference.admissible_flags());
        naming.extend(target, &target.admissible_flags());
        naming
    }

    fn extend<S: Scalar>(&mut self, analysis: &GroupAnalysis<S>, flags: &[bool]) {
        let sizes = analysis.class_sizes();
        let key = |id: usize| (analysis.lattice.get(id).order(), sizes[id], analysis.lattice.get(id).members().to_vec());
        let mut pending: Vec<&PairClass> = analysis
            .classes
            .iter()
            .zip(flags)
            .filter(|(c, &ok)| ok && !self.labels.contains_key(&(c.h, c.k)))
            .map(|(c, _)| c)
            .collect();
        pending.sort_by_key(|c| (key(c.h), c.index, key(c.k)));
        for c in pending {
            let existing_i = self.labels.iter().find(|((h, _), _)| *h == c.h).map(|(_, &(i, _))| i);
            let i = existing_i.unwrap_or_else(|| self.labels.values().map(|&(i, _)| i + 1).max().unwrap_or(0));
            let j = if c.h == c.k {
                0
            } else {
                self.labels
                    .iter()
                    .filter(|((h, _), _)| *h == c.h)
                    .map(|(_, &(_, j))| j + 1)
                    .max()
                    .unwrap_or(1)
                    .max(1)
            };
            self.labels.insert((c.h, c.k), (i, j));
        }
    }

    /// Label of the class with representative `(h, k)`.
    pub fn label(&self, h: usize, k: usize) -> Option<(usize, usize)> {
        self.labels.get(&(h, k)).copied()
    }
}

/// Naming for a group built from `spec`: planar groups borrow the labels of
/// their permutation counterpart.
pub fn naming_for_spec<S: Scalar>(spec: &GroupSpec, analysis: &GroupAnalysis<S>, max_order: usize, tol: Tolerances) -> Result<Naming> {
    match spec.naming_reference() {
        Some(reference) => {
            let g = reference.build::<num_rational::BigRational>(max_order, tol)?;
            Ok(Naming::with_reference(analysis, &GroupAnalysis::new(g)?))
        }
        None => Ok(Naming::from_analysis(analysis)),
    }
}

#[derive(Clone, Debug)]
pub struct ArchitectureSpec<S> {
    pub name: String,
    /// Position in [`GroupAnalysis::classes`].
    pub class_index: usize,
    pub pair_class: PairClass,
    pub h: usize,
    pub k: usize,
    /// `|H:K| − 1`.
    pub tau: usize,
    pub hidden: usize,
    pub rep: SignedPermRep,
    pub transversal: Transversal,
    pub weight_space: SubspaceBasis<S>,
    pub cohomology: CohomologyClass,
}

impl<S: Scalar> ArchitectureSpec<S> {
    pub fn arch_type(&self) -> usize {
        self.tau + 1
    }

    /// `W` with rows `g_i·w`.
    pub fn weight_matrix(&self, group: &FiniteGroup<S>, w: &[S]) -> Matrix<S> {
        let rows = self.transversal.reps.iter().map(|&g| group.matrix(g).mul_vec(w)).collect();
        Matrix::from_rows(rows).expect("rows share the input dimension")
    }

    pub fn to_json(&self, group: &FiniteGroup<S>, lattice: &SubgroupLattice) -> ArchitectureJson {
        ArchitectureJson {
            schema: 1,
            name: self.name.clone(),
            h: self.h,
            k: self.k,
            h_order: lattice.get(self.h).order(),
            k_order: lattice.get(self.k).order(),
            arch_type: self.arch_type(),
            hidden: self.hidden,
            weight_space_basis: self
                .weight_space
                .vectors
                .iter()
                .map(|v| v.iter().map(Scalar::to_entry).collect())
                .collect(),
            pattern: constraint_pattern(self, group).ok(),
            cohomology: CohomologyTag {
                ring: self.h,
                class: self.k,
                is_zero: self.cohomology.is_zero,
            },
            transversal: self.transversal.reps.clone(),
            rep: self.rep.to_json(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyTag {
    pub ring: usize,
    pub class: usize,
    pub is_zero: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArchitectureJson {
    pub schema: u32,
    pub name: String,
    #[serde(rename = "H")]
    pub h: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "H_order")]
    pub h_order: usize,
    #[serde(rename = "K_order")]
    pub k_order: usize,
    #[serde(rename = "type")]
    pub arch_type: usize,
    pub hidden: usize,
    pub weight_space_basis: Vec<Vec<Entry>>,
    pub pattern: Option<ConstraintPattern>,
    pub cohomology: CohomologyTag,
    pub transversal: Vec<usize>,
    pub rep: RepJson,
}

/// All admissible architectures named by `naming`, in name order.
pub fn enumerate_with_naming<S: Scalar>(analysis: &GroupAnalysis<S>, naming: &Naming) -> Result<Vec<ArchitectureSpec<S>>> {
    let (group, lattice) = (&analysis.group, &analysis.lattice);
    let mut archs = analysis
        .classes
        .par_iter()
        .zip(&analysis.admissibility)
        .enumerate()
        .filter(|(_, (_, adm))| adm.admissible)
        .map(|(class_index, (c, adm))| {
            let (i, j) = naming
                .label(c.h, c.k)
                .ok_or_else(|| GsnnError::InternalInconsistency(format!("pair ({}, {}) has no name", c.h, c.k)))?;
            let transversal = Transversal::standard(group, lattice, c.h, c.k)?;
            let rep = build_rho(group, lattice, &transversal)?;
            let representative = cocycle_of(&rep, c.h)?;
            Ok(((i, j), ArchitectureSpec {
                name: format!("{i}.{j}"),
                class_index,
                pair_class: c.clone(),
                h: c.h,
                k: c.k,
                tau: c.tau(),
                hidden: transversal.len(),
                rep,
                transversal,
                weight_space: adm.weight_space.clone(),
                cohomology: CohomologyClass {
                    h: c.h,
                    k: c.k,
                    representative,
                    is_zero: c.h == c.k,
                },
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    archs.sort_by_key(|(label, _)| *label);
    Ok(archs.into_iter().map(|(_, a)| a).collect())
}

/// All admissible architectures, named from the group itself.
pub fn enumerate_architectures<S: Scalar>(analysis: &GroupAnalysis<S>) -> Result<Vec<ArchitectureSpec<S>>> {
    enumerate_with_naming(analysis, &Naming::from_analysis(analysis))
}

/// Paletted weight pattern: a cell is `0` when the weight vanishes on the
/// whole family and `±c` when it equals (or is the negative of) every other
/// cell carrying color `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintPattern {
    pub rows: usize,
    pub cols: usize,
    pub colors: usize,
    pub cells: Vec<Vec<i64>>,
}

impl ConstraintPattern {
    pub fn negative_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|&&c| c < 0).count()
    }
}

/// Colors cells of `W` by their coordinate functional over the weight-space
/// basis. Exact mode only.
pub fn constraint_pattern<S: Scalar>(arch: &ArchitectureSpec<S>, group: &FiniteGroup<S>) -> Result<ConstraintPattern> {
    if !S::EXACT {
        return Err(GsnnError::UnsupportedMode);
    }
    let basis: Vec<Matrix<S>> = arch.weight_space.vectors.iter().map(|v| arch.weight_matrix(group, v)).collect();
    let (rows, cols) = (arch.hidden, group.dim());
    let mut palette: Vec<Vec<S>> = Vec::new();
    let mut cells = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            let f: Vec<S> = basis.iter().map(|b| b[(i, j)].clone()).collect();
            if f.iter().all(|x| x.is_zero()) {
                continue;
            }
            let neg: Vec<S> = f.iter().map(|x| -x.clone()).collect();
            cells[i][j] = if let Some(c) = palette.iter().position(|p| *p == f) {
                c as i64 + 1
            } else if let Some(c) = palette.iter().position(|p| *p == neg) {
                -(c as i64 + 1)
            } else {
                palette.push(f);
                palette.len() as i64
            };
        }
    }
    Ok(ConstraintPattern {
        rows,
        cols,
        colors: palette.len(),
        cells,
    })
}

/// Scalars of the canonical parameter family.
#[derive(Clone, Debug)]
pub struct SampleParams<S> {
    pub a: S,
    pub b: S,
    /// Projected onto the fixed space of `G` before use.
    pub c: Vec<S>,
    pub d: S,
    /// Coordinates of `w` in the weight-space basis; `None` picks the first basis vector.
    pub w_coeffs: Option<Vec<S>>,
    /// Scale `w` to unit norm when the norm is representable.
    pub unit_normalize: bool,
}

impl<S: Scalar> SampleParams<S> {
    pub fn standard(dim: usize) -> Self {
        SampleParams {
            a: S::one(),
            b: S::zero(),
            c: vec![S::zero(); dim],
            d: S::zero(),
            w_coeffs: None,
            unit_normalize: true,
        }
    }
}

/// Member of the family: rows `g_i·w`, `a_* = a·1`, `b_* = b·1` for type 1
/// and `0` for type 2, `c_* = −½τWᵀa_* + P_G c`.
pub fn sample_instance<S: Scalar>(arch: &ArchitectureSpec<S>, group: &FiniteGroup<S>, params: &SampleParams<S>) -> Result<SNNInstance<S>> {
    let eps = group.tolerances().equality;
    if params.a.negligible(eps) {
        return Err(GsnnError::ZeroOutputScale);
    }
    if params.c.len() != group.dim() {
        return Err(GsnnError::DimensionMismatch {
            expected: group.dim(),
            found: params.c.len(),
        });
    }
    let mut w = match &params.w_coeffs {
        Some(coeffs) => arch.weight_space.combine(coeffs)?,
        None => arch.weight_space.vectors.first().cloned().ok_or(GsnnError::ZeroWeight)?,
    };
    if w.iter().all(|x| x.negligible(eps)) {
        return Err(GsnnError::ZeroWeight);
    }
    if params.unit_normalize {
        if let Some(norm) = dot(&w, &w).sqrt_exact() {
            w = w.into_iter().map(|x| x / norm.clone()).collect();
        }
    }
    let n = arch.hidden;
    let wm = arch.weight_matrix(group, &w);
    let a = vec![params.a.clone(); n];
    let b = vec![if arch.tau == 0 { params.b.clone() } else { S::zero() }; n];
    let pg = average(group.dim(), group.elements().iter().map(|e| &e.matrix));
    let mut c = pg.mul_vec(&params.c);
    if arch.tau == 1 {
        let half = S::from_ratio(1, 2);
        for (ck, x) in c.iter_mut().zip(wm.transpose().mul_vec(&a)) {
            *ck = ck.clone() - half.clone() * x;
        }
    }
    Ok(SNNInstance {
        w: wm,
        a,
        b,
        c,
        d: params.d.clone(),
    })
}

/// Pairwise orthogonality of the weight spaces of the admissible `K ≤ H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub h: usize,
    /// Admissible `K`, `K = H` first when present.
    pub ks: Vec<usize>,
    /// `orthogonal[a][b]` for `a ≠ b`; the diagonal is `true`.
    pub orthogonal: Vec<Vec<bool>>,
}

impl OrthogonalityReport {
    pub fn all_orthogonal(&self) -> bool {
        self.orthogonal.iter().flatten().all(|&x| x)
    }
}

pub fn orthogonality_check<S: Scalar>(group: &FiniteGroup<S>, lattice: &SubgroupLattice, h: usize) -> Result<OrthogonalityReport> {
    let mut candidates = vec![h];
    candidates.extend(lattice.index2_subgroups(h));
    let mut ks = Vec::new();
    let mut spaces = Vec::new();
    for k in candidates {
        let adm = admissible(group, lattice, h, k)?;
        if adm.admissible {
            ks.push(k);
            spaces.push(adm.weight_space);
        }
    }
    let tol = group.tolerances().orthogonality;
    let orthogonal = (0..ks.len())
        .map(|p| {
            (0..ks.len())
                .map(|q| {
                    p == q
                        || spaces[p]
                            .vectors
                            .iter()
                            .all(|u| spaces[q].vectors.iter().all(|v| dot(u, v).negligible(tol)))
                })
                .collect()
        })
        .collect();
    Ok(OrthogonalityReport { h, ks, orthogonal })
}
