//! Shallow ReLU networks: evaluation, canonical forms and empirical checks.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GsnnError, Result};
use crate::group::FiniteGroup;
use crate::linalg::{dot, Matrix};
use crate::reps::{SignedPerm, SignedPermRep};
use crate::scalar::{Entry, Scalar, Tolerances};

/// Cosine above which two float rows count as positively parallel.
pub const PARALLEL_COSINE: f64 = 1.0 - 1e-10;

/// `f(x) = aᵀ relu(Wx + b) + cᵀx + d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SNNInstance<S> {
    /// `n × m`.
    pub w: Matrix<S>,
    pub a: Vec<S>,
    pub b: Vec<S>,
    pub c: Vec<S>,
    pub d: S,
}

fn relu<S: Scalar>(x: S) -> S {
    if x > S::zero() {
        x
    } else {
        S::zero()
    }
}

impl<S: Scalar> SNNInstance<S> {
    pub fn hidden(&self) -> usize {
        self.w.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.w.cols()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let (n, m) = (self.w.rows(), self.w.cols());
        for (expected, found) in [(n, self.a.len()), (n, self.b.len()), (m, self.c.len())] {
            if expected != found {
                return Err(GsnnError::DimensionMismatch { expected, found });
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[S]) -> Result<S> {
        self.check_shapes()?;
        if x.len() != self.input_dim() {
            return Err(GsnnError::DimensionMismatch {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        let mut out = dot(&self.c, x) + self.d.clone();
        for i in 0..self.hidden() {
            let pre = dot(self.w.row(i), x) + self.b[i].clone();
            out = out + self.a[i].clone() * relu(pre);
        }
        Ok(out)
    }

    /// Applies a signed permutation to the hidden layer without changing the
    /// function: row `i` moves to `p(i)` and is multiplied by `s_i`, and each
    /// flipped neuron's linear part goes into `(c, d)`.
    pub fn act(&self, g: &SignedPerm) -> Result<SNNInstance<S>> {
        self.check_shapes()?;
        let (n, m) = (self.hidden(), self.input_dim());
        if g.degree() != n {
            return Err(GsnnError::DimensionMismatch { expected: n, found: g.degree() });
        }
        let mut out = SNNInstance {
            w: Matrix::zeros(n, m),
            a: vec![S::zero(); n],
            b: vec![S::zero(); n],
            c: self.c.clone(),
            d: self.d.clone(),
        };
        for i in 0..n {
            let (j, s) = (g.perm[i], g.signs[i]);
            out.a[j] = self.a[i].clone();
            for k in 0..m {
                out.w[(j, k)] = if s > 0 { self.w[(i, k)].clone() } else { -self.w[(i, k)].clone() };
            }
            out.b[j] = if s > 0 { self.b[i].clone() } else { -self.b[i].clone() };
            if s < 0 {
                for k in 0..m {
                    out.c[k] = out.c[k].clone() + self.a[i].clone() * self.w[(i, k)].clone();
                }
                out.d = out.d.clone() + self.a[i].clone() * self.b[i].clone();
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> InstanceJson {
        let v = |xs: &[S]| xs.iter().map(Scalar::to_entry).collect();
        InstanceJson {
            w: (0..self.hidden()).map(|i| v(self.w.row(i))).collect(),
            a: v(&self.a),
            b: v(&self.b),
            c: v(&self.c),
            d: self.d.to_entry(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(rename = "W")]
    pub w: Vec<Vec<Entry>>,
    pub a: Vec<Entry>,
    pub b: Vec<Entry>,
    pub c: Vec<Entry>,
    pub d: Entry,
}

/// Unique representative of a network modulo hidden-neuron permutation,
/// sign flips and positive rescaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n_star: usize,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

impl CanonicalForm {
    pub fn to_instance(&self) -> SNNInstance<f64> {
        let m = self.c.len();
        let w = if self.w.is_empty() {
            Matrix::zeros(0, m)
        } else {
            Matrix::from_rows(self.w.clone()).expect("rectangular")
        };
        SNNInstance {
            w,
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.to_instance().eval(x)
    }

    pub fn approx_eq(&self, other: &CanonicalForm, eps: f64) -> bool {
        let close = |x: &[f64], y: &[f64]| x.len() == y.len() && x.iter().zip(y).all(|(p, q)| (p - q).abs() <= eps);
        self.n_star == other.n_star
            && self.w.iter().zip(&other.w).all(|(p, q)| close(p, q))
            && close(&self.b, &other.b)
            && close(&self.a, &other.a)
            && close(&self.c, &other.c)
            && (self.d - other.d).abs() <= eps
    }
}

/// Brings an instance to its canonical form.
///
/// Rows with `a = 0` are dropped and rows with `w = 0` contribute the
/// constant `a·relu(b)`. Every other row of `[W|b]` is flipped so its first
/// nonzero `W` entry is positive (moving `a(wᵀx + b)` into the affine part),
/// positively parallel rows are merged by adding their rescaled `a`, rows
/// whose merged `a` vanishes are dropped, and the rest are scaled to unit
/// `W` norm and sorted lexicographically.
pub fn canonicalize<S: Scalar>(inst: &SNNInstance<S>, tol: &Tolerances) -> Result<CanonicalForm> {
    inst.check_shapes()?;
    let (n, m) = (inst.hidden(), inst.input_dim());
    let eps = tol.equality;
    let mut c = inst.c.clone();
    let mut d = inst.d.clone();
    // (row of [W|b] scaled so its first W entry is 1, coefficient)
    let mut rows: Vec<(Vec<S>, S)> = Vec::new();
    for i in 0..n {
        let a = inst.a[i].clone();
        if a.negligible(eps) {
            continue;
        }
        let w = inst.w.row(i);
        let Some(lead) = w.iter().find(|x| !x.negligible(eps)).cloned() else {
            d = d + a * relu(inst.b[i].clone());
            continue;
        };
        if lead < S::zero() {
            for k in 0..m {
                c[k] = c[k].clone() + a.clone() * w[k].clone();
            }
            d = d + a.clone() * inst.b[i].clone();
        }
        let scale = lead.abs();
        let mut r: Vec<S> = w.iter().map(|x| x.clone() / lead.clone()).collect();
        r.push(inst.b[i].clone() / lead.clone());
        let coef = a * scale;
        match rows.iter_mut().find(|(q, _)| parallel(q, &r)) {
            Some((_, acc)) => *acc = acc.clone() + coef,
            None => rows.push((r, coef)),
        }
    }
    let mut out: Vec<(Vec<f64>, f64)> = rows
        .into_iter()
        .filter(|(_, a)| !a.negligible(eps))
        .map(|(r, a)| {
            let r: Vec<f64> = r.iter().map(Scalar::to_f64).collect();
            let norm = r[..m].iter().map(|x| x * x).sum::<f64>().sqrt();
            (r.iter().map(|x| x / norm).collect(), a.to_f64() * norm)
        })
        .collect();
    out.sort_by(|(p, _), (q, _)| lex(p, q));
    Ok(CanonicalForm {
        n_star: out.len(),
        w: out.iter().map(|(r, _)| r[..m].to_vec()).collect(),
        b: out.iter().map(|(r, _)| r[m]).collect(),
        a: out.iter().map(|(_, a)| *a).collect(),
        c: c.iter().map(Scalar::to_f64).collect(),
        d: d.to_f64(),
    })
}

/// Both rows are already scaled to a leading `W` entry of 1.
fn parallel<S: Scalar>(p: &[S], q: &[S]) -> bool {
    if S::EXACT {
        return p == q;
    }
    let pf: Vec<f64> = p.iter().map(Scalar::to_f64).collect();
    let qf: Vec<f64> = q.iter().map(Scalar::to_f64).collect();
    let num: f64 = pf.iter().zip(&qf).map(|(x, y)| x * y).sum();
    let np = pf.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nq = qf.iter().map(|x| x * x).sum::<f64>().sqrt();
    num / (np * nq) >= PARALLEL_COSINE
}

fn lex(p: &[f64], q: &[f64]) -> Ordering {
    p.iter()
        .zip(q)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Standard normal sample points, reproducible from `seed`.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect()
}

/// `max |f(gx) − f(x)|` over `trials` sample points and all `g ∈ G`.
pub fn invariance_report<S: Scalar>(group: &FiniteGroup<S>, inst: &SNNInstance<S>, trials: usize, seed: u64) -> Result<f64> {
    inst.check_shapes()?;
    if inst.input_dim() != group.dim() {
        return Err(GsnnError::DimensionMismatch {
            expected: group.dim(),
            found: inst.input_dim(),
        });
    }
    let points = sample_points(group.dim(), trials, seed);
    let gaps = points
        .par_iter()
        .map(|x| {
            let x: Vec<S> = x.iter().map(|&v| S::from_f64(v)).collect();
            let fx = inst.eval(&x)?;
            let mut worst = 0.0f64;
            for g in 0..group.order() {
                let gx = match &group.element(g).perm_image {
                    Some(p) => {
                        let mut gx = x.clone();
                        for (j, &pj) in p.iter().enumerate() {
                            gx[pj] = x[j].clone();
                        }
                        gx
                    }
                    None => group.matrix(g).mul_vec(&x),
                };
                worst = worst.max((inst.eval(&gx)? - fx.clone()).abs().to_f64());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// Largest residual of the invariance equations
/// `ρ(g)W = Wg`, `π(g)a = a`, `ρ(g)b = b` and `gc = c + ½(I − g)Wᵀa`.
pub fn constraint_residual<S: Scalar>(group: &FiniteGroup<S>, rep: &SignedPermRep, inst: &SNNInstance<S>) -> Result<f64> {
    inst.check_shapes()?;
    if rep.degree != inst.hidden() {
        return Err(GsnnError::DimensionMismatch {
            expected: rep.degree,
            found: inst.hidden(),
        });
    }
    let m = inst.input_dim();
    let half = S::from_ratio(1, 2);
    let wta = inst.w.transpose().mul_vec(&inst.a);
    let mut worst = 0.0f64;
    let mut track = |x: S| worst = worst.max(x.abs().to_f64());
    for (g, image) in rep.images.iter().enumerate() {
        let gm = group.matrix(g);
        let lhs = image.to_matrix::<S>().mul(&inst.w);
        let rhs = inst.w.mul(gm);
        for i in 0..lhs.rows() {
            for j in 0..m {
                track(lhs[(i, j)].clone() - rhs[(i, j)].clone());
            }
        }
        let pi = SignedPerm {
            perm: image.perm.clone(),
            signs: vec![1; rep.degree],
        };
        for (x, y) in pi.apply(&inst.a).into_iter().zip(&inst.a) {
            track(x - y.clone());
        }
        for (x, y) in image.apply(&inst.b).into_iter().zip(&inst.b) {
            track(x - y.clone());
        }
        let gc = gm.mul_vec(&inst.c);
        let gwta = gm.mul_vec(&wta);
        for k in 0..m {
            let expected = inst.c[k].clone() + half.clone() * (wta[k].clone() - gwta[k].clone());
            track(gc[k].clone() - expected);
        }
    }
    Ok(worst)
}

/// `relu(x) − relu(zx) = H(−z)·x` for each `(x, z)` with `z = ±1`.
pub fn relu_identity_check(samples: &[(f64, i8)]) -> bool {
    samples.iter().all(|&(x, z)| {
        let lhs = x.max(0.0) - (z as f64 * x).max(0.0);
        let rhs = if z < 0 { x } else { 0.0 };
        (lhs - rhs).abs() <= 1e-12 * x.abs().max(1.0)
    })
}
