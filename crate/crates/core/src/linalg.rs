//! Exact linear algebra over any [`Field`]: fraction-free row echelon form,
//! null spaces, reduced row echelon bases and canonical reduction modulo a
//! subspace.

use crate::exactnum::Field;

/// Row echelon form produced by [`echelon_fraction_free`].
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    /// Nonzero rows, in pivot order.
    pub rows: Vec<Vec<K>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<K> Echelon<K> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Bareiss-style elimination: the pivot is the first nonzero entry of the
/// column (scanning rows top to bottom) and every update divides by the
/// previous pivot, which keeps entries small without introducing fractions
/// beyond those already present in the input.
pub fn echelon_fraction_free<K: Field>(mut m: Vec<Vec<K>>, ncols: usize, zero: &K) -> Echelon<K> {
    let nrows = m.len();
    let mut prev = zero.one_like();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let factor = row[c].clone();
            if factor.is_zero() {
                // Keep the fraction-free invariant: scale by piv / prev.
                for j in c + 1..ncols {
                    row[j] = row[j].times(&piv).over(&prev);
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = row[j].times(&piv).minus(&factor.times(&pivot_row[j]));
                row[j] = v.over(&prev);
            }
            row[c] = zero.zero_like();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon {
        rows: m,
        pivots,
        ncols,
    }
}

/// Scales a vector so that its first nonzero entry is one.
pub fn normalize_leading<K: Field>(v: &mut [K]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = x.over(&lead);
        }
    }
}

/// Basis of `{x : M x = 0}`, one vector per free column (free entry one,
/// other free entries zero), each normalized to leading coefficient one.
pub fn nullspace<K: Field>(m: Vec<Vec<K>>, ncols: usize, zero: &K) -> Vec<Vec<K>> {
    // In reduced form the solution with a given free entry one is read off
    // the free column directly.
    let (rows, pivots) = rref(m, ncols, zero);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![zero.zero_like(); ncols];
        x[free] = zero.one_like();
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                x[pc] = row[free].negated();
            }
        }
        normalize_leading(&mut x);
        basis.push(x);
    }
    basis
}

pub fn rank<K: Field>(m: Vec<Vec<K>>, ncols: usize, zero: &K) -> usize {
    echelon_fraction_free(m, ncols, zero).rank()
}

/// Reduced row echelon form (pivots one, zeros above and below).
pub fn rref<K: Field>(m: Vec<Vec<K>>, ncols: usize, zero: &K) -> (Vec<Vec<K>>, Vec<usize>) {
    let ech = echelon_fraction_free(m, ncols, zero);
    let mut rows = ech.rows;
    let pivots = ech.pivots;
    for i in (0..rows.len()).rev() {
        let pc = pivots[i];
        let lead = rows[i][pc].clone();
        for x in rows[i].iter_mut() {
            *x = x.over(&lead);
        }
        for k in 0..i {
            let f = rows[k][pc].clone();
            if f.is_zero() {
                continue;
            }
            let pivot_row = rows[i].clone();
            for (x, y) in rows[k].iter_mut().zip(&pivot_row) {
                *x = x.minus(&f.times(y));
            }
        }
    }
    (rows, pivots)
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse<K: Field>(m: &[Vec<K>], zero: &K) -> Option<Vec<Vec<K>>> {
    let n = m.len();
    let aug: Vec<Vec<K>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { zero.one_like() } else { zero.zero_like() }));
            r
        })
        .collect();
    let (rows, pivots) = rref(aug, 2 * n, zero);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Indices of `k` coordinates on which `k` linearly independent vectors
/// (the rows of `gens`) restrict to an invertible square matrix.
pub fn independent_coordinates<K: Field>(gens: &[Vec<K>], ambient: usize, zero: &K) -> Option<Vec<usize>> {
    let (_, pivots) = rref(gens.to_vec(), ambient, zero);
    (pivots.len() == gens.len()).then_some(pivots)
}

/// A linear subspace stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<K> {
    basis: Vec<Vec<K>>,
    pivots: Vec<usize>,
    ambient: usize,
}

impl<K: Field> Subspace<K> {
    pub fn span(vectors: Vec<Vec<K>>, ambient: usize, zero: &K) -> Self {
        let (basis, pivots) = rref(vectors, ambient, zero);
        Subspace {
            basis,
            pivots,
            ambient,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<K>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v + self`: the unique element of the
    /// coset whose pivot coordinates vanish.
    pub fn reduce(&self, v: &[K]) -> Vec<K> {
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = out[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row) {
                *x = x.minus(&f.times(y));
            }
        }
        out
    }

    pub fn contains(&self, v: &[K]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Coordinates with respect to the echelon basis, if `v` lies in the
    /// subspace. These are simply the pivot entries of `v`.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        if self.contains(v) {
            Some(self.pivots.iter().map(|&c| v[c].clone()).collect())
        } else {
            None
        }
    }

    pub fn combine(&self, coords: &[K], zero: &K) -> Vec<K> {
        let mut out = vec![zero.zero_like(); self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            for (x, y) in out.iter_mut().zip(row) {
                *x = x.plus(&c.times(y));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, Rational};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    /// Plain Gauss-Jordan rank, used as an oracle for the fraction-free path.
    fn rank_oracle(mut m: Vec<Vec<Rational>>, ncols: usize) -> usize {
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| m[i][c] != int(0)) else {
                continue;
            };
            m.swap(r, p);
            for i in 0..m.len() {
                if i != r && m[i][c] != int(0) {
                    let f = &m[i][c] / &m[r][c];
                    let pr = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pr) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn grid_evaluation_matrix_rank() {
        // 3×3 grid {0,1,2}² against monomials 1, x, y, x², xy, y².
        let mut m = Vec::new();
        for x in 0..3i64 {
            for y in 0..3i64 {
                m.push(vec![1, x, y, x * x, x * y, y * y]);
            }
        }
        let m: Vec<Vec<Rational>> = m
            .into_iter()
            .map(|r| r.into_iter().map(int).collect())
            .collect();
        assert_eq!(rank_oracle(m.clone(), 6), 6);
        assert_eq!(rank(m.clone(), 6, &int(0)), 6);
        assert!(nullspace(m, 6, &int(0)).is_empty());
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let ns = nullspace(m.clone(), 4, &int(0));
        assert_eq!(ns.len(), 4 - rank_oracle(m.clone(), 4));
        for v in &ns {
            for row in &m {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(dot, int(0));
            }
        }
    }

    #[test]
    fn subspace_reduction_is_canonical() {
        let s = Subspace::span(vec![vec![int(2), int(0)]], 2, &int(0));
        assert_eq!(s.dim(), 1);
        let a = s.reduce(&[rat(7, 3), int(1)]);
        let b = s.reduce(&[int(-5), int(1)]);
        assert_eq!(a, b);
        assert_eq!(a, vec![int(0), int(1)]);
        assert!(s.contains(&[int(9), int(0)]));
        assert_eq!(s.coordinates(&[int(9), int(0)]), Some(vec![int(9)]));
        assert_eq!(s.coordinates(&[int(9), int(1)]), None);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m, &int(0)).unwrap();
        assert_eq!(inv, mat(&[&[1, -1], &[-1, 2]]));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]]), &int(0)).is_none());
        let pc = independent_coordinates(&mat(&[&[0, 3, 1]]), 3, &int(0)).unwrap();
        assert_eq!(pc, vec![1]);
    }

    #[test]
    fn rref_has_unit_pivots() {
        let (rows, piv) = rref(mat(&[&[2, 4, 2], &[1, 3, 0]]), 3, &int(0));
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rows[0], vec![int(1), int(0), int(3)]);
        assert_eq!(rows[1], vec![int(0), int(1), int(-1)]);
    }
}
