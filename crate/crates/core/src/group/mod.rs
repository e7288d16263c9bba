//! Finite groups of orthogonal matrices, stored with explicit multiplication
//! and inverse tables so every later query is index arithmetic.

mod presets;
mod subgroups;

pub use presets::{GroupSpec, TABLE_GROUPS};
pub use subgroups::{
    stabilizer_of_matrix, PairClass, Subgroup, SubgroupLattice, Transversal,
};

use std::collections::HashMap;

use crate::error::{GsnnError, Result};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Tolerances};

/// Upper bound on the group order used when none is configured.
pub const DEFAULT_MAX_ORDER: usize = 48;

#[derive(Clone, Debug)]
pub struct GroupElement<S> {
    pub matrix: Matrix<S>,
    /// 0-indexed image array when `matrix` is a permutation matrix.
    pub perm_image: Option<Vec<usize>>,
}

impl<S: Scalar> GroupElement<S> {
    pub fn new(matrix: Matrix<S>) -> Self {
        let perm_image = matrix.as_permutation();
        GroupElement { matrix, perm_image }
    }
}

/// Immutable after construction. `elements[0]` is the identity and element
/// order is the breadth-first discovery order of [`FiniteGroup::close_generators`].
#[derive(Clone, Debug)]
pub struct FiniteGroup<S> {
    dim: usize,
    elements: Vec<GroupElement<S>>,
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    tol: Tolerances,
}

impl<S: Scalar> FiniteGroup<S> {
    /// Closes `gens` under multiplication by breadth-first search, right
    /// multiplying each discovered element by every generator in turn.
    pub fn close_generators(
        dim: usize,
        gens: &[Matrix<S>],
        max_order: usize,
        tol: Tolerances,
    ) -> Result<Self> {
        for (index, g) in gens.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(GsnnError::DimensionMismatch {
                    expected: dim,
                    found: g.rows().max(g.cols()),
                });
            }
            if !g.is_orthogonal(tol.equality) {
                return Err(GsnnError::NonOrthogonalGenerator { index, dim });
            }
        }
        let mut lookup = ElementLookup::new(tol.equality);
        let mut elements = vec![GroupElement::new(Matrix::identity(dim))];
        lookup.insert(&elements[0], 0);
        let mut cursor = 0;
        while cursor < elements.len() {
            for g in gens {
                let prod = elements[cursor].matrix.mul(g);
                let candidate = GroupElement::new(prod);
                if lookup.find(&candidate, &elements).is_none() {
                    if elements.len() == max_order {
                        return Err(GsnnError::OrderBoundExceeded { bound: max_order });
                    }
                    lookup.insert(&candidate, elements.len());
                    elements.push(candidate);
                }
            }
            cursor += 1;
        }

        let n = elements.len();
        let mut mult = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = match (&elements[i].perm_image, &elements[j].perm_image) {
                    (Some(a), Some(b)) => {
                        let image: Vec<usize> = b.iter().map(|&x| a[x]).collect();
                        lookup.find_perm(&image)
                    }
                    _ => {
                        let candidate = GroupElement::new(elements[i].matrix.mul(&elements[j].matrix));
                        lookup.find(&candidate, &elements)
                    }
                };
                mult[i][j] = prod.ok_or_else(|| {
                    GsnnError::InternalInconsistency(format!("product of {i} and {j} escaped the closure"))
                })?;
            }
        }
        let inverse = (0..n)
            .map(|i| mult[i].iter().position(|&p| p == 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GsnnError::InternalInconsistency("missing inverse".into()))?;
        let generators = gens
            .iter()
            .map(|g| lookup.find(&GroupElement::new(g.clone()), &elements).expect("generator in closure"))
            .collect();

        Ok(FiniteGroup {
            dim,
            elements,
            mult,
            inverse,
            generators,
            tol,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        Self::close_generators(dim, &[], 1, Tolerances::default()).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Dimension `m` of the input space the group acts on.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn element(&self, i: usize) -> &GroupElement<S> {
        &self.elements[i]
    }

    pub fn matrix(&self, i: usize) -> &Matrix<S> {
        &self.elements[i].matrix
    }

    pub fn elements(&self) -> &[GroupElement<S>] {
        &self.elements
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn mult_table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    /// Element indices of the generators the group was closed from.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// `g⁻¹ s g`.
    pub fn conjugate(&self, s: usize, g: usize) -> usize {
        self.mult[self.mult[self.inverse[g]][s]][g]
    }

    /// Index of the element equal to `m`, if any.
    pub fn find(&self, m: &Matrix<S>) -> Option<usize> {
        self.elements.iter().position(|e| e.matrix.approx_eq(m, self.tol.equality))
    }

    pub fn is_permutation_group(&self) -> bool {
        self.elements.iter().all(|e| e.perm_image.is_some())
    }

    /// Exhaustive associativity check on the index table.
    pub fn check_associativity(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.mult[self.mult[a][b]][c] == self.mult[a][self.mult[b][c]]))
        })
    }

    /// Checks the table against the stored matrices entry by entry.
    pub fn check_closure(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.matrix(i)
                    .mul(self.matrix(j))
                    .approx_eq(self.matrix(self.mult[i][j]), self.tol.equality)
            })
        })
    }
}

/// Element lookup: hashed on the permutation image when there is one,
/// otherwise a linear scan with tolerance.
struct ElementLookup {
    perms: HashMap<Vec<usize>, usize>,
    eps: f64,
}

impl ElementLookup {
    fn new(eps: f64) -> Self {
        ElementLookup {
            perms: HashMap::new(),
            eps,
        }
    }

    fn insert<S: Scalar>(&mut self, e: &GroupElement<S>, index: usize) {
        if let Some(p) = &e.perm_image {
            self.perms.insert(p.clone(), index);
        }
    }

    fn find_perm(&self, image: &[usize]) -> Option<usize> {
        self.perms.get(image).copied()
    }

    fn find<S: Scalar>(&self, e: &GroupElement<S>, elements: &[GroupElement<S>]) -> Option<usize> {
        if let Some(p) = &e.perm_image {
            if let Some(&i) = self.perms.get(p) {
                return Some(i);
            }
        }
        elements.iter().position(|x| x.matrix.approx_eq(&e.matrix, self.eps))
    }
}
