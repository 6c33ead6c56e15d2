//! Exact integer elimination: Smith normal form and column echelon reduction.
//!
//! All routines are generic over [`Ring`] and use checked arithmetic, so a
//! fixed-width run either returns the exact answer or
//! [`Error::ArithmeticOverflow`].

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::scalar::Ring;

/// Active submatrices at most this many rows and columns are densified.
pub const DENSE_THRESHOLD: usize = 400;

/// A sparse column: `(row, value)` pairs, rows strictly increasing, no zeros.
pub type SparseColumn<T> = Vec<(usize, T)>;

/// Column-major sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    pub nrows: usize,
    pub cols: Vec<SparseColumn<T>>,
}

impl<T: Ring> SparseMatrix<T> {
    pub fn new(nrows: usize, cols: Vec<SparseColumn<T>>) -> Self {
        SparseMatrix { nrows, cols }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|c| {
                (0..nrows)
                    .filter(|&r| !rows[r][c].is_zero())
                    .map(|r| (r, rows[r][c].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { nrows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols()]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r][c] = v.clone();
            }
        }
        out
    }
}

/// Normalizes nonzero diagonal entries into invariant factors
/// `d1 | d2 | ... | dk`, all positive. Units are kept.
pub fn invariant_factors<T: Ring>(diag: Vec<T>) -> Result<Vec<T>> {
    let mut d: Vec<T> = diag
        .into_iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.abs())
        .collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[j].is_multiple_of(&d[i]) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = (d[i].clone() / g.clone()).mul_c(&d[j])?;
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
    Ok(d)
}

/// Invariant factors of a dense matrix (units included, zeros dropped).
#[allow(clippy::needless_range_loop)]
pub fn dense_smith<T: Ring>(mut m: Vec<Vec<T>>) -> Result<Vec<T>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..nrows.min(ncols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..nrows {
            for c in t..ncols {
                if !m[r][c].is_zero() && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..nrows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                for c in t..ncols {
                    m[r][c] = m[r][c].sub_mul_c(&q, &m[t][c])?;
                }
                if !m[r][t].is_zero() {
                    // remainder is smaller than the pivot: promote it
                    m.swap(t, r);
                    dirty = true;
                }
            }
            for c in t + 1..ncols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for r in t..nrows {
                    m[r][c] = m[r][c].sub_mul_c(&q, &m[r][t])?;
                }
                if !m[t][c].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, c);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(m[t][t].clone());
    }
    invariant_factors(diag)
}

/// Invariant factors of a sparse matrix.
///
/// Eliminates one pivot at a time, preferring the smallest magnitude and then
/// the least Markowitz fill, until the active block fits under
/// [`DENSE_THRESHOLD`] and is finished densely.
pub fn sparse_smith<T: Ring>(m: &SparseMatrix<T>) -> Result<Vec<T>> {
    let mut e = Eliminator::new(m);
    let mut diag = Vec::new();
    loop {
        if e.active_rows.len() <= DENSE_THRESHOLD && e.active_cols.len() <= DENSE_THRESHOLD {
            let dense = e.active_dense();
            diag.extend(dense_smith(dense)?);
            break;
        }
        let Some((r, c)) = e.choose_pivot() else {
            break;
        };
        diag.push(e.eliminate(r, c)?);
    }
    invariant_factors(diag)
}

struct Eliminator<T> {
    cols: Vec<BTreeMap<usize, T>>,
    rows: Vec<BTreeSet<usize>>,
    active_rows: BTreeSet<usize>,
    active_cols: BTreeSet<usize>,
}

impl<T: Ring> Eliminator<T> {
    fn new(m: &SparseMatrix<T>) -> Self {
        let mut rows = vec![BTreeSet::new(); m.nrows];
        let cols: Vec<BTreeMap<usize, T>> = m
            .cols
            .iter()
            .enumerate()
            .map(|(c, col)| {
                for (r, _) in col {
                    rows[*r].insert(c);
                }
                col.iter().cloned().collect()
            })
            .collect();
        let active_rows = (0..m.nrows).filter(|&r| !rows[r].is_empty()).collect();
        let active_cols = (0..cols.len()).filter(|&c| !cols[c].is_empty()).collect();
        Eliminator {
            cols,
            rows,
            active_rows,
            active_cols,
        }
    }

    fn active_dense(&self) -> Vec<Vec<T>> {
        let row_pos: BTreeMap<usize, usize> = self
            .active_rows
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i))
            .collect();
        let mut out = vec![vec![T::zero(); self.active_cols.len()]; self.active_rows.len()];
        for (j, &c) in self.active_cols.iter().enumerate() {
            for (r, v) in &self.cols[c] {
                out[row_pos[r]][j] = v.clone();
            }
        }
        out
    }

    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize, usize)> = None;
        for &c in &self.active_cols {
            let ccount = self.cols[c].len().saturating_sub(1);
            for (&r, v) in &self.cols[c] {
                let fill = ccount * self.rows[r].len().saturating_sub(1);
                let a = v.abs();
                let better = match &best {
                    None => true,
                    Some((ba, bf, _, _)) => a < *ba || (a == *ba && fill < *bf),
                };
                if better {
                    best = Some((a, fill, r, c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            self.cols[c].remove(&r);
            self.rows[r].remove(&c);
        } else {
            self.cols[c].insert(r, v);
            self.rows[r].insert(c);
        }
    }

    fn get(&self, r: usize, c: usize) -> T {
        self.cols[c].get(&r).cloned().unwrap_or_else(T::zero)
    }

    /// rows (a, b) <- (x a + y b, u a + v b)
    fn row_transform(&mut self, a: usize, b: usize, x: &T, y: &T, u: &T, v: &T) -> Result<()> {
        let touched: BTreeSet<usize> = self.rows[a].union(&self.rows[b]).copied().collect();
        for c in touched {
            let (va, vb) = (self.get(a, c), self.get(b, c));
            let na = x.mul_c(&va)?.add_c(&y.mul_c(&vb)?)?;
            let nb = u.mul_c(&va)?.add_c(&v.mul_c(&vb)?)?;
            self.set(a, c, na);
            self.set(b, c, nb);
        }
        Ok(())
    }

    /// columns (a, b) <- (x a + y b, u a + v b)
    fn col_transform(&mut self, a: usize, b: usize, x: &T, y: &T, u: &T, v: &T) -> Result<()> {
        let touched: BTreeSet<usize> = self.cols[a]
            .keys()
            .chain(self.cols[b].keys())
            .copied()
            .collect();
        for r in touched {
            let (va, vb) = (self.get(r, a), self.get(r, b));
            let na = x.mul_c(&va)?.add_c(&y.mul_c(&vb)?)?;
            let nb = u.mul_c(&va)?.add_c(&v.mul_c(&vb)?)?;
            self.set(r, a, na);
            self.set(r, b, nb);
        }
        Ok(())
    }

    /// Clears row `r` and column `c` around the pivot and retires both.
    fn eliminate(&mut self, r: usize, c: usize) -> Result<T> {
        let (one, zero) = (T::one(), T::zero());
        loop {
            let mut changed = false;
            let others: Vec<usize> = self.cols[c].keys().copied().filter(|&x| x != r).collect();
            for r2 in others {
                let p = self.get(r, c);
                let a = self.get(r2, c);
                if a.is_zero() {
                    continue;
                }
                if a.is_multiple_of(&p) {
                    let q = a / p;
                    self.row_transform(r2, r, &one, &-q, &zero, &one)?;
                } else {
                    let (g, x, y) = p.bezout(&a)?;
                    let (pg, ag) = (p / g.clone(), a / g);
                    // det = x*pg + y*ag = 1
                    self.row_transform(r, r2, &x, &y, &-ag, &pg)?;
                    changed = true;
                }
            }
            let others: Vec<usize> = self.rows[r].iter().copied().filter(|&x| x != c).collect();
            for c2 in others {
                let p = self.get(r, c);
                let a = self.get(r, c2);
                if a.is_zero() {
                    continue;
                }
                if a.is_multiple_of(&p) {
                    let q = a / p;
                    self.col_transform(c2, c, &one, &-q, &zero, &one)?;
                } else {
                    let (g, x, y) = p.bezout(&a)?;
                    let (pg, ag) = (p / g.clone(), a / g);
                    self.col_transform(c, c2, &x, &y, &-ag, &pg)?;
                    changed = true;
                }
            }
            if !changed && self.cols[c].len() == 1 && self.rows[r].len() == 1 {
                break;
            }
        }
        let p = self.get(r, c);
        self.set(r, c, T::zero());
        self.active_rows.remove(&r);
        self.active_cols.remove(&c);
        Ok(p)
    }
}

/// `dst - q * src` for sorted sparse columns.
fn axpy<T: Ring>(dst: &[(usize, T)], q: &T, src: &[(usize, T)]) -> Result<SparseColumn<T>> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j == src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i == dst.len() || src[j].0 < dst[i].0 {
            out.push((src[j].0, T::zero().sub_mul_c(q, &src[j].1)?));
            j += 1;
        } else {
            let v = dst[i].1.sub_mul_c(q, &src[j].1)?;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// `x * a + y * b` for sorted sparse columns.
fn combine<T: Ring>(x: &T, a: &[(usize, T)], y: &T, b: &[(usize, T)]) -> Result<SparseColumn<T>> {
    let neg_y = -y.clone();
    let scaled: SparseColumn<T> = a
        .iter()
        .map(|(r, v)| Ok((*r, x.mul_c(v)?)))
        .collect::<Result<_>>()?;
    axpy(&scaled, &neg_y, b)
}

/// Result of [`column_reduce`]: a column echelon form reached by unimodular
/// column operations, so it has the same rank and cokernel as the input.
#[derive(Debug, Clone)]
pub struct ColumnReduction<T> {
    pub nrows: usize,
    /// Reduced columns; zero columns are empty.
    pub columns: Vec<SparseColumn<T>>,
    /// For each row, the column whose lowest entry sits in it.
    pub low_owner: Vec<Option<usize>>,
}

impl<T: Ring> ColumnReduction<T> {
    pub fn rank(&self) -> usize {
        self.columns.iter().filter(|c| !c.is_empty()).count()
    }

    /// Whether every pivot is a unit, which makes the cokernel free.
    pub fn unit_pivots(&self) -> bool {
        self.columns
            .iter()
            .filter_map(|c| c.last())
            .all(|(_, v)| v.is_unit())
    }

    pub fn pivot(&self, col: usize) -> Option<&(usize, T)> {
        self.columns[col].last()
    }

    /// The nonzero reduced columns as a matrix.
    pub fn to_matrix(&self) -> SparseMatrix<T> {
        SparseMatrix::new(
            self.nrows,
            self.columns
                .iter()
                .filter(|c| !c.is_empty())
                .cloned()
                .collect(),
        )
    }
}

/// Reduces columns left to right until all lowest nonzero rows differ.
///
/// Columns flagged in `cleared` are known to be combinations (with unit
/// leading coefficient) of other columns that vanish, and are zeroed without
/// work. Non-divisible pivot collisions are resolved with a Bezout step.
pub fn column_reduce<T: Ring>(
    mut m: SparseMatrix<T>,
    cleared: &[bool],
) -> Result<ColumnReduction<T>> {
    let mut low_owner: Vec<Option<usize>> = vec![None; m.nrows];
    for j in 0..m.cols.len() {
        if cleared.get(j).copied().unwrap_or(false) {
            m.cols[j].clear();
            continue;
        }
        loop {
            let Some((low, b)) = m.cols[j].last().cloned() else {
                break;
            };
            let Some(i) = low_owner[low] else {
                low_owner[low] = Some(j);
                break;
            };
            let a = m.cols[i].last().unwrap().1.clone();
            if b.is_multiple_of(&a) {
                let q = b / a;
                m.cols[j] = axpy(&m.cols[j], &q, &m.cols[i])?;
            } else {
                let (g, x, y) = a.bezout(&b)?;
                let (ag, bg) = (a / g.clone(), b / g);
                let ci = std::mem::take(&mut m.cols[i]);
                let cj = std::mem::take(&mut m.cols[j]);
                m.cols[i] = combine(&x, &ci, &y, &cj)?;
                m.cols[j] = combine(&ag, &cj, &-bg, &ci)?;
            }
        }
    }
    Ok(ColumnReduction {
        nrows: m.nrows,
        columns: m.cols,
        low_owner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    /// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1},
    /// with D_k the gcd of all k x k minors. Exponential; tiny matrices only.
    fn determinantal_oracle(a: &[Vec<i64>]) -> Vec<i64> {
        fn det(a: &[Vec<i64>]) -> i64 {
            let n = a.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = a[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(c, _)| *c != j)
                                .map(|(_, v)| *v)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * a[0][j] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
        let mut prev = 1i64;
        let mut out = Vec::new();
        for k in 1..=r.min(c) {
            let mut g = 0i64;
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<i64>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| a[i][j]).collect())
                        .collect();
                    g = num_integer::gcd(g, det(&sub));
                }
            }
            if g == 0 {
                break;
            }
            out.push(g / prev);
            prev = g;
        }
        out
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(
            invariant_factors(vec![4i64, 6, 0, -1]).unwrap(),
            vec![1, 2, 12]
        );
        assert_eq!(invariant_factors(vec![2i64, 3]).unwrap(), vec![1, 6]);
        assert_eq!(invariant_factors(vec![2i64, 2, 4]).unwrap(), vec![2, 2, 4]);
    }

    #[test]
    fn dense_examples() {
        assert_eq!(
            dense_smith(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).unwrap(),
            vec![2, 6, 12]
        );
        assert_eq!(
            dense_smith(m(&[&[0, 0], &[0, 0]])).unwrap(),
            Vec::<i64>::new()
        );
        assert_eq!(
            dense_smith(m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])).unwrap(),
            vec![1, 1, 2]
        );
    }

    #[test]
    fn sparse_above_threshold() {
        // block diagonal: 450 copies of [[2,1],[0,2]] whose cokernel is Z/4
        let blocks = 450;
        let mut cols = Vec::new();
        for b in 0..blocks {
            cols.push(vec![(2 * b, 2i64)]);
            cols.push(vec![(2 * b, 1), (2 * b + 1, 2)]);
        }
        let mat = SparseMatrix::new(2 * blocks, cols);
        let f = sparse_smith(&mat).unwrap();
        assert_eq!(f.len(), 2 * blocks);
        assert_eq!(f.iter().filter(|&&x| x == 4).count(), blocks);
        assert_eq!(f.iter().filter(|&&x| x == 1).count(), blocks);
    }

    #[test]
    fn column_reduction_rank_and_units() {
        let mat = SparseMatrix::from_dense(&m(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]));
        let red = column_reduce(mat, &[]).unwrap();
        assert_eq!(red.rank(), 3);
        assert!(!red.unit_pivots());
        let f = sparse_smith(&red.to_matrix()).unwrap();
        assert_eq!(f, vec![1, 1, 2]);

        let mat = SparseMatrix::from_dense(&m(&[&[1, -1, 0], &[-1, 0, 1], &[0, 1, -1]]));
        let red = column_reduce(mat, &[]).unwrap();
        assert_eq!(red.rank(), 2);
        assert!(red.unit_pivots());
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let mat = vec![vec![big, 3], vec![5, big]];
        assert_eq!(dense_smith(mat), Err(crate::Error::ArithmeticOverflow));
        let as_big: Vec<Vec<BigInt>> = vec![
            vec![BigInt::from(big), BigInt::from(3)],
            vec![BigInt::from(5), BigInt::from(big)],
        ];
        let f = dense_smith(as_big).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], BigInt::from(1));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-4i64..5, c), r)
        })
    }

    proptest! {
        #[test]
        fn dense_matches_determinantal_divisors(a in small_matrix()) {
            prop_assert_eq!(dense_smith(a.clone()).unwrap(), determinantal_oracle(&a));
        }

        #[test]
        fn sparse_matches_dense(a in small_matrix()) {
            let sparse = SparseMatrix::from_dense(&a);
            let mut e = Eliminator::new(&sparse);
            let mut diag = Vec::new();
            while let Some((r, c)) = e.choose_pivot() {
                diag.push(e.eliminate(r, c).unwrap());
            }
            prop_assert_eq!(invariant_factors(diag).unwrap(), dense_smith(a.clone()).unwrap());
        }

        #[test]
        fn column_reduction_preserves_invariants(a in small_matrix()) {
            let red = column_reduce(SparseMatrix::from_dense(&a), &[]).unwrap();
            let expected = dense_smith(a.clone()).unwrap();
            prop_assert_eq!(red.rank(), expected.len());
            prop_assert_eq!(dense_smith(red.to_matrix().to_dense()).unwrap(), expected.clone());
            if red.unit_pivots() {
                prop_assert!(expected.iter().all(|&d| d == 1));
            }
        }

        #[test]
        fn fixed_width_agrees_with_bigint(a in small_matrix()) {
            let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let f64s: Vec<BigInt> = dense_smith(a).unwrap().into_iter().map(BigInt::from).collect();
            prop_assert_eq!(dense_smith(big).unwrap(), f64s);
        }
    }
}
