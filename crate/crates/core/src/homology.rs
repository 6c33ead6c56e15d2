//! Reduced integer homology of simplicial complexes.
//!
//! The chain complex is augmented by a single generator in dimension -1, so
//! the empty complex has `H~_{-1} = Z` and a point has zero homology.
//! Boundary matrices are reduced top-down with clearing; a dimension whose
//! echelon form has only unit pivots is torsion free, anything else goes
//! through [`sparse_smith`].

use std::fmt;

use num_bigint::BigInt;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{column_reduce, sparse_smith, SparseColumn, SparseMatrix};
use crate::scalar::Ring;

/// One reduced homology group `Z^betti ⊕ Z/t1 ⊕ Z/t2 ⊕ ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyGroup<T> {
    pub betti: usize,
    /// Invariant factors, each at least 2 and dividing the next.
    pub torsion: Vec<T>,
}

impl<T: Ring> HomologyGroup<T> {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Reduced homology by dimension, starting at -1. Trailing zero groups are
/// dropped, so equal homology means equal values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyProfile<T> {
    groups: Vec<HomologyGroup<T>>,
}

impl<T: Ring> HomologyProfile<T> {
    /// `groups[i]` is the group in dimension `i - 1`.
    pub fn new(mut groups: Vec<HomologyGroup<T>>) -> Self {
        while groups.last().is_some_and(HomologyGroup::is_zero) {
            groups.pop();
        }
        HomologyProfile { groups }
    }

    /// Free profile from `(dimension, rank)` pairs.
    pub fn free(ranks: &[(isize, usize)]) -> Self {
        let top = ranks.iter().map(|(d, _)| *d).max().unwrap_or(-1);
        let mut groups: Vec<HomologyGroup<T>> = (0..=(top + 1))
            .map(|_| HomologyGroup {
                betti: 0,
                torsion: Vec::new(),
            })
            .collect();
        for &(d, r) in ranks {
            groups[(d + 1) as usize].betti += r;
        }
        Self::new(groups)
    }

    pub fn group(&self, d: isize) -> Option<&HomologyGroup<T>> {
        usize::try_from(d + 1).ok().and_then(|i| self.groups.get(i))
    }

    pub fn betti(&self, d: isize) -> usize {
        self.group(d).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, d: isize) -> &[T] {
        self.group(d).map_or(&[], |g| g.torsion.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.iter().any(|g| !g.torsion.is_empty())
    }

    /// Highest dimension with a nonzero group, if any.
    pub fn top_dim(&self) -> Option<isize> {
        if self.groups.is_empty() {
            None
        } else {
            Some(self.groups.len() as isize - 2)
        }
    }

    /// Nonzero Betti numbers as `(dimension, rank)`.
    pub fn nonzero_betti(&self) -> Vec<(isize, usize)> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.betti > 0)
            .map(|(i, g)| (i as isize - 1, g.betti))
            .collect()
    }

    /// Alternating sum of reduced Betti numbers.
    pub fn euler(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if i % 2 == 1 {
                    g.betti as i64
                } else {
                    -(g.betti as i64)
                }
            })
            .sum()
    }

    pub fn to_bigint(&self) -> HomologyProfile<BigInt> {
        HomologyProfile {
            groups: self
                .groups
                .iter()
                .map(|g| HomologyGroup {
                    betti: g.betti,
                    torsion: g.torsion.iter().map(Ring::to_bigint).collect(),
                })
                .collect(),
        }
    }

    pub fn groups(&self) -> &[HomologyGroup<T>] {
        &self.groups
    }
}

impl<T: Ring> fmt::Display for HomologyProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, g) in self.groups.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "H{}=", i as isize - 1)?;
            let mut parts = Vec::new();
            match g.betti {
                0 => {}
                1 => parts.push("Z".to_string()),
                b => parts.push(format!("Z^{b}")),
            }
            parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
            write!(f, "{}", parts.join("+"))?;
        }
        Ok(())
    }
}

fn boundary<T: Ring>(k: &SimplicialComplex, d: usize) -> Result<SparseMatrix<T>> {
    if d == 0 {
        let one = T::one();
        return Ok(SparseMatrix::new(1, vec![vec![(0, one)]; k.count(0)]));
    }
    let faces = k.simplices(d - 1);
    let minus = -T::one();
    let cols = k
        .simplices(d)
        .iter()
        .map(|s| {
            let mut col: SparseColumn<T> = (0..s.len())
                .map(|i| {
                    let mut face = s.clone();
                    face.remove(i);
                    let row = faces
                        .binary_search(&face)
                        .map_err(|_| Error::Invalid(format!("face {face:?} missing")))?;
                    Ok((row, if i % 2 == 0 { T::one() } else { minus.clone() }))
                })
                .collect::<Result<_>>()?;
            col.sort_by_key(|(r, _)| *r);
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::new(faces.len(), cols))
}

/// Reduced homology over `T`; fixed-width types may report overflow.
pub fn homology_over<T: Ring>(k: &SimplicialComplex) -> Result<HomologyProfile<T>> {
    let top = k.dim();
    if top < 0 {
        return Ok(HomologyProfile::free(&[(-1, 1)]));
    }
    let top = top as usize;
    // rank[d] = rank of the boundary C_d -> C_{d-1}, d = 0..=top
    let mut rank = vec![0usize; top + 1];
    // torsion[d + 1] for H_d, from the boundary out of dimension d + 1
    let mut torsion: Vec<Vec<T>> = vec![Vec::new(); top + 2];
    let mut cleared: Vec<bool> = Vec::new();
    for d in (0..=top).rev() {
        let red = column_reduce(boundary::<T>(k, d)?, &cleared)?;
        rank[d] = red.rank();
        if !red.unit_pivots() {
            torsion[d] = sparse_smith(&red.to_matrix())?
                .into_iter()
                .filter(|t| !t.is_unit())
                .collect();
        }
        cleared = vec![false; red.nrows];
        for (row, owner) in red.low_owner.iter().enumerate() {
            if let Some(c) = owner {
                if red.pivot(*c).is_some_and(|(_, v)| v.is_unit()) {
                    cleared[row] = true;
                }
            }
        }
    }
    let mut groups = Vec::with_capacity(top + 2);
    for i in 0..top + 2 {
        // dimension i - 1
        let n = if i == 0 { 1 } else { k.count(i - 1) };
        let out_rank = if i == 0 { 0 } else { rank[i - 1] };
        let in_rank = rank.get(i).copied().unwrap_or(0);
        groups.push(HomologyGroup {
            betti: n - out_rank - in_rank,
            torsion: std::mem::take(&mut torsion[i]),
        });
    }
    Ok(HomologyProfile::new(groups))
}

/// Reduced homology with exact coefficients: fixed-width first, unbounded
/// integers if that overflows.
pub fn homology(k: &SimplicialComplex) -> Result<HomologyProfile<BigInt>> {
    match homology_over::<i64>(k) {
        Ok(p) => Ok(p.to_bigint()),
        Err(Error::ArithmeticOverflow) => homology_over::<BigInt>(k),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{coset_simplicial, nerve_complex, order_complex, Simplex};
    use crate::families::{cosets_of_family, family_all_proper, family_normal_proper};
    use crate::linalg::dense_smith;
    use crate::spec::group;

    const CAP: usize = 2_000_000;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn from_faces(n: usize, faces: &[Simplex]) -> SimplicialComplex {
        SimplicialComplex::from_maximal_faces(labels(n), faces, CAP).unwrap()
    }

    /// Homology from dense Smith forms of every boundary, no clearing.
    fn dense_oracle(k: &SimplicialComplex) -> HomologyProfile<i64> {
        if k.dim() < 0 {
            return HomologyProfile::free(&[(-1, 1)]);
        }
        let top = k.dim() as usize;
        let factors: Vec<Vec<i64>> = (0..=top)
            .map(|d| dense_smith(boundary::<i64>(k, d).unwrap().to_dense()).unwrap())
            .collect();
        let groups = (0..top + 2)
            .map(|i| {
                let n = if i == 0 { 1 } else { k.count(i - 1) };
                let out_rank = if i == 0 { 0 } else { factors[i - 1].len() };
                let incoming = factors.get(i).cloned().unwrap_or_default();
                HomologyGroup {
                    betti: n - out_rank - incoming.len(),
                    torsion: incoming.into_iter().filter(|&t| t > 1).collect(),
                }
            })
            .collect();
        HomologyProfile::new(groups)
    }

    #[test]
    fn basic_spaces() {
        let points = from_faces(3, &[vec![0], vec![1], vec![2]]);
        assert_eq!(homology(&points).unwrap(), HomologyProfile::free(&[(0, 2)]));
        let circle = from_faces(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(homology(&circle).unwrap(), HomologyProfile::free(&[(1, 1)]));
        let disk = from_faces(3, &[vec![0, 1, 2]]);
        assert!(homology(&disk).unwrap().is_zero());
        let empty = SimplicialComplex::empty();
        let h = homology(&empty).unwrap();
        assert_eq!(h.betti(-1), 1);
        assert_eq!(h.euler(), -1);
        let sphere = from_faces(
            4,
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        );
        assert_eq!(homology(&sphere).unwrap(), HomologyProfile::free(&[(2, 1)]));
    }

    /// Six-vertex triangulation of the real projective plane.
    fn rp2() -> SimplicialComplex {
        from_faces(
            6,
            &[
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![0, 1, 5],
                vec![1, 2, 4],
                vec![2, 3, 5],
                vec![1, 3, 4],
                vec![1, 3, 5],
                vec![2, 4, 5],
            ],
        )
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        let k = rp2();
        let h = homology(&k).unwrap();
        assert_eq!(h.torsion(1), &[BigInt::from(2)]);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.betti(2), 0);
        assert_eq!(h, dense_oracle(&k).to_bigint());
        assert_eq!(homology_over::<BigInt>(&k).unwrap(), h);
        assert_eq!(format!("{h}"), "H1=Z/2");
    }

    #[test]
    fn coset_complex_examples() {
        let z6 = group("cyclic:6").unwrap();
        let c = cosets_of_family(&family_normal_proper(&z6).unwrap());
        let h = homology(&order_complex(&c, CAP).unwrap()).unwrap();
        assert_eq!(h, HomologyProfile::free(&[(1, 2)]));
    }

    #[test]
    fn agrees_with_dense_oracle_on_coset_complexes() {
        for text in [
            "symmetric:3",
            "cyclic:4",
            "product:cyclic:2,cyclic:2",
            "q8",
            "dihedral:4",
        ] {
            let g = group(text).unwrap();
            let c = cosets_of_family(&family_all_proper(&g).unwrap());
            for k in [
                order_complex(&c, CAP).unwrap(),
                coset_simplicial(&c, &g, CAP).unwrap(),
            ] {
                let h = homology(&k).unwrap();
                assert_eq!(h, dense_oracle(&k).to_bigint(), "{text}");
                assert_eq!(h.euler(), k.reduced_euler(), "{text}");
            }
        }
        let g = group("symmetric:3").unwrap();
        let c = cosets_of_family(&family_all_proper(&g).unwrap());
        let k = nerve_complex(&c, CAP).unwrap();
        assert_eq!(homology(&k).unwrap(), dense_oracle(&k).to_bigint());
    }
}
