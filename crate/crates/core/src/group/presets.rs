//! Named group constructions and the JSON group specification.

use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{GsnnError, Result};
use crate::linalg::Matrix;
use crate::scalar::{Entry, Scalar, Tolerances};

/// Groups listed in the summary table, by preset name.
pub const TABLE_GROUPS: &[&str] = &[
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "trivial", "C2^2", "C2^3", "C2xC4", "D3", "D4", "Q8",
];

/// A group description. Permutations are 1-indexed image lists:
/// `[i_1, …, i_n]` sends `e_j` to `e_{i_j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    /// The trivial group acting on `dim` coordinates.
    Trivial {
        #[serde(default = "one")]
        dim: usize,
    },
    /// `C_n` generated by the cycle `[2, …, n, 1]`.
    CyclicPerm { n: usize },
    /// `D_n` generated by the cycle and the reversal `[n, …, 1]`.
    DihedralPerm { n: usize },
    /// The quaternion group as a permutation group on 8 coordinates.
    QuaternionPerm,
    /// Direct sum of the factors' actions.
    Product { factors: Vec<GroupSpec> },
    /// Rotations of the plane by multiples of `360/n` degrees.
    #[serde(rename = "rotation2d")]
    Rotation2d { n: usize },
    /// Rotations plus the reflection about the line at `axis_deg` degrees.
    #[serde(rename = "dihedral2d")]
    Dihedral2d {
        n: usize,
        #[serde(default)]
        axis_deg: f64,
    },
    /// Explicit generators, as 1-indexed permutations or as matrices.
    Generators {
        #[serde(default)]
        dim: Option<usize>,
        #[serde(default)]
        perms: Vec<Vec<usize>>,
        #[serde(default)]
        matrices: Vec<Vec<Vec<Entry>>>,
    },
}

fn one() -> usize {
    1
}

impl GroupSpec {
    /// Looks up a preset such as `C6`, `D4`, `Q8`, `C2^3`, `C2xC4`, `C6-rot`,
    /// `D6-rot` or `D6-rot@15`.
    pub fn preset(name: &str) -> Option<GroupSpec> {
        let name = name.trim();
        match name {
            "trivial" | "{e}" | "e" | "C1" => return Some(GroupSpec::Trivial { dim: 1 }),
            "Q8" => return Some(GroupSpec::QuaternionPerm),
            _ => {}
        }
        if let Some(rest) = name.strip_suffix("-rot") {
            return match parse_letter(rest)? {
                ('C', n) => Some(GroupSpec::Rotation2d { n }),
                ('D', n) => Some(GroupSpec::Dihedral2d { n, axis_deg: 0.0 }),
                _ => None,
            };
        }
        if let Some((head, axis)) = name.split_once("-rot@") {
            let axis_deg: f64 = axis.parse().ok()?;
            return match parse_letter(head)? {
                ('D', n) => Some(GroupSpec::Dihedral2d { n, axis_deg }),
                _ => None,
            };
        }
        let mut factors = Vec::new();
        for part in name.split('x') {
            let (base, power) = match part.split_once('^') {
                Some((b, p)) => (b, p.parse::<usize>().ok()?),
                None => (part, 1),
            };
            let spec = match parse_letter(base)? {
                ('C', n) => GroupSpec::CyclicPerm { n },
                ('D', n) => GroupSpec::DihedralPerm { n },
                _ => return None,
            };
            if power == 0 {
                return None;
            }
            factors.extend(std::iter::repeat_n(spec, power));
        }
        if factors.len() == 1 {
            factors.pop()
        } else {
            Some(GroupSpec::Product { factors })
        }
    }

    /// Accepts a preset name or inline JSON.
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let t = text.trim();
        if t.starts_with('{') {
            Ok(serde_json::from_str(t)?)
        } else {
            GroupSpec::preset(t).ok_or_else(|| GsnnError::InvalidSpec(format!("unknown group preset `{t}`")))
        }
    }

    /// True when the generators have irrational entries.
    pub fn requires_float(&self) -> bool {
        match self {
            GroupSpec::Rotation2d { n } | GroupSpec::Dihedral2d { n, .. } => *n > 2 && *n != 4,
            GroupSpec::Product { factors } => factors.iter().any(|f| f.requires_float()),
            GroupSpec::Generators { matrices, .. } => {
                matrices.iter().flatten().flatten().any(|e| matches!(e, Entry::Float(x) if x.fract() != 0.0))
            }
            _ => false,
        }
    }

    /// Permutation group with the same abstract structure and element order,
    /// used to name the architectures of the planar groups.
    pub fn naming_reference(&self) -> Option<GroupSpec> {
        match self {
            GroupSpec::Rotation2d { n } => Some(GroupSpec::CyclicPerm { n: *n }),
            GroupSpec::Dihedral2d { n, .. } => Some(GroupSpec::DihedralPerm { n: *n }),
            _ => None,
        }
    }

    /// Ambient dimension and generator matrices.
    pub fn generators<S: Scalar>(&self) -> Result<(usize, Vec<Matrix<S>>)> {
        match self {
            GroupSpec::Trivial { dim } => Ok((*dim, Vec::new())),
            GroupSpec::CyclicPerm { n } => {
                check_positive(*n)?;
                Ok((*n, vec![perm_matrix(&cycle(*n))?]))
            }
            GroupSpec::DihedralPerm { n } => {
                check_positive(*n)?;
                let reversal: Vec<usize> = (1..=*n).rev().collect();
                Ok((*n, vec![perm_matrix(&cycle(*n))?, perm_matrix(&reversal)?]))
            }
            GroupSpec::QuaternionPerm => {
                let i = perm_matrix(&[3, 4, 2, 1, 7, 8, 6, 5])?;
                let j = perm_matrix(&[5, 6, 8, 7, 2, 1, 3, 4])?;
                Ok((8, vec![i, j]))
            }
            GroupSpec::Product { factors } => {
                let parts = factors
                    .iter()
                    .map(|f| f.generators::<S>())
                    .collect::<Result<Vec<_>>>()?;
                let dim: usize = parts.iter().map(|p| p.0).sum();
                let mut gens = Vec::new();
                let mut offset = 0;
                for (d, fgens) in parts {
                    for g in fgens {
                        let mut m = Matrix::identity(dim);
                        for r in 0..d {
                            for c in 0..d {
                                m[(offset + r, offset + c)] = g[(r, c)].clone();
                            }
                        }
                        gens.push(m);
                    }
                    offset += d;
                }
                Ok((dim, gens))
            }
            GroupSpec::Rotation2d { n } => {
                check_positive(*n)?;
                Ok((2, vec![planar::<S>(rotation(*n))?]))
            }
            GroupSpec::Dihedral2d { n, axis_deg } => {
                check_positive(*n)?;
                let th = 2.0 * axis_deg.to_radians();
                let refl = [[th.cos(), th.sin()], [th.sin(), -th.cos()]];
                Ok((2, vec![planar::<S>(rotation(*n))?, planar::<S>(refl)?]))
            }
            GroupSpec::Generators { dim, perms, matrices } => {
                let mut gens = Vec::new();
                for p in perms {
                    gens.push(perm_matrix(p)?);
                }
                for m in matrices {
                    let rows = m
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|e| S::from_entry(e).ok_or_else(|| GsnnError::InvalidSpec(format!("bad entry {e:?}"))))
                                .collect::<Result<Vec<S>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    gens.push(Matrix::from_rows(rows)?);
                }
                let d = match (dim, gens.first()) {
                    (Some(d), _) => *d,
                    (None, Some(g)) => g.rows(),
                    (None, None) => return Err(GsnnError::InvalidSpec("no generators and no dimension".into())),
                };
                Ok((d, gens))
            }
        }
    }

    pub fn build<S: Scalar>(&self, max_order: usize, tol: Tolerances) -> Result<FiniteGroup<S>> {
        if S::EXACT && self.requires_float() {
            return Err(GsnnError::UnsupportedMode);
        }
        let (dim, gens) = self.generators::<S>()?;
        FiniteGroup::close_generators(dim, &gens, max_order, tol)
    }
}

fn parse_letter(s: &str) -> Option<(char, usize)> {
    let mut chars = s.chars();
    let letter = chars.next()?;
    let n: usize = chars.as_str().parse().ok()?;
    (n > 0).then_some((letter, n))
}

fn check_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(GsnnError::InvalidSpec("group parameter n must be positive".into()))
    } else {
        Ok(())
    }
}

fn cycle(n: usize) -> Vec<usize> {
    (1..=n).map(|i| i % n + 1).collect()
}

fn perm_matrix<S: Scalar>(image: &[usize]) -> Result<Matrix<S>> {
    let n = image.len();
    let mut seen = vec![false; n];
    for &i in image {
        if i == 0 || i > n || seen[i - 1] {
            return Err(GsnnError::InvalidSpec(format!("{image:?} is not a permutation of 1..={n}")));
        }
        seen[i - 1] = true;
    }
    Ok(Matrix::from_permutation(&image.iter().map(|i| i - 1).collect::<Vec<_>>()))
}

fn rotation(n: usize) -> [[f64; 2]; 2] {
    let th = std::f64::consts::TAU / n as f64;
    [[th.cos(), -th.sin()], [th.sin(), th.cos()]]
}

/// Rounds entries that are within 1e-12 of a half-integer so the rotations
/// of order 1, 2 and 4 stay exact.
fn planar<S: Scalar>(m: [[f64; 2]; 2]) -> Result<Matrix<S>> {
    let snap = |x: f64| {
        let r = (2.0 * x).round() / 2.0;
        if (x - r).abs() < 1e-12 {
            r
        } else {
            x
        }
    };
    Matrix::from_rows(m.iter().map(|row| row.iter().map(|&x| S::from_f64(snap(x))).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn order(name: &str) -> usize {
        GroupSpec::preset(name)
            .unwrap()
            .build::<BigRational>(48, Tolerances::default())
            .unwrap()
            .order()
    }

    #[test]
    fn preset_orders() {
        for (name, n) in [
            ("trivial", 1),
            ("C2", 2),
            ("C5", 5),
            ("C8", 8),
            ("C2^2", 4),
            ("C2^3", 8),
            ("C2xC4", 8),
            ("D3", 6),
            ("D4", 8),
            ("D6", 12),
            ("Q8", 8),
        ] {
            assert_eq!(order(name), n, "{name}");
        }
    }

    #[test]
    fn product_dimensions() {
        let (d, _) = GroupSpec::preset("C2xC4").unwrap().generators::<f64>().unwrap();
        assert_eq!(d, 6);
        let (d, _) = GroupSpec::preset("C2^3").unwrap().generators::<f64>().unwrap();
        assert_eq!(d, 6);
    }

    #[test]
    fn quaternion_is_not_abelian_and_has_one_involution() {
        let g = GroupSpec::QuaternionPerm.build::<BigRational>(48, Tolerances::default()).unwrap();
        let involutions = (1..8).filter(|&x| g.mul(x, x) == 0).count();
        assert_eq!(involutions, 1);
        assert!((0..8).any(|a| (0..8).any(|b| g.mul(a, b) != g.mul(b, a))));
    }

    #[test]
    fn planar_groups_need_float_mode() {
        let spec = GroupSpec::preset("D6-rot@15").unwrap();
        assert!(matches!(spec.build::<BigRational>(48, Tolerances::default()), Err(GsnnError::UnsupportedMode)));
        assert_eq!(spec.build::<f64>(48, Tolerances::default()).unwrap().order(), 12);
        assert_eq!(GroupSpec::preset("C4-rot").unwrap().build::<BigRational>(48, Tolerances::default()).unwrap().order(), 4);
    }

    #[test]
    fn json_round_trip() {
        let spec: GroupSpec = serde_json::from_str(r#"{"kind":"dihedral2d","n":6,"axis_deg":15}"#).unwrap();
        assert_eq!(spec, GroupSpec::Dihedral2d { n: 6, axis_deg: 15.0 });
        let spec = GroupSpec::parse(r#"{"kind":"generators","perms":[[2,1,3]]}"#).unwrap();
        let (d, g) = spec.generators::<BigRational>().unwrap();
        assert_eq!((d, g.len()), (3, 1));
        let back: GroupSpec = serde_json::from_str(&serde_json::to_string(&GroupSpec::preset("C2^2").unwrap()).unwrap()).unwrap();
        assert_eq!(back, GroupSpec::preset("C2^2").unwrap());
    }

    #[test]
    fn invalid_permutation_is_rejected() {
        let spec = GroupSpec::Generators { dim: None, perms: vec![vec![1, 1]], matrices: vec![] };
        assert!(matches!(spec.generators::<f64>(), Err(GsnnError::InvalidSpec(_))));
    }
}
