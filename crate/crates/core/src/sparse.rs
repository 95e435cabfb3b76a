//! Thin helpers over faer's compressed-column matrices.

use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

pub type SparseMatrix = SparseColMat<usize, f64>;
pub type Entry = Triplet<usize, usize, f64>;

/// Builds a matrix from triplets; duplicates are summed.
pub fn from_triplets(nrows: usize, ncols: usize, entries: &[Entry]) -> SparseMatrix {
    SparseColMat::try_new_from_triplets(nrows, ncols, entries).expect("triplet indices are in range")
}

pub fn zeros(nrows: usize, ncols: usize) -> SparseMatrix {
    from_triplets(nrows, ncols, &[])
}

pub fn entries(a: &SparseMatrix) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
    a.triplet_iter().map(|t| (t.row, t.col, *t.val))
}

pub fn mul_vec(a: &SparseMatrix, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.ncols(), x.len());
    let mut y = vec![0.0; a.nrows()];
    for (i, j, v) in entries(a) {
        y[i] += v * x[j];
    }
    y
}

pub fn mul_transpose_vec(a: &SparseMatrix, x: &[f64]) -> Vec<f64> {
    assert_eq!(a.nrows(), x.len());
    let mut y = vec![0.0; a.ncols()];
    for (i, j, v) in entries(a) {
        y[j] += v * x[i];
    }
    y
}

pub fn transpose(a: &SparseMatrix) -> SparseMatrix {
    let t: Vec<Entry> = entries(a).map(|(i, j, v)| Triplet::new(j, i, v)).collect();
    from_triplets(a.ncols(), a.nrows(), &t)
}

pub fn product(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a * b
}

/// `alpha * a + beta * b`.
pub fn combine(alpha: f64, a: &SparseMatrix, beta: f64, b: &SparseMatrix) -> SparseMatrix {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let t: Vec<Entry> = entries(a)
        .map(|(i, j, v)| Triplet::new(i, j, alpha * v))
        .chain(entries(b).map(|(i, j, v)| Triplet::new(i, j, beta * v)))
        .collect();
    from_triplets(a.nrows(), a.ncols(), &t)
}

pub fn scale(alpha: f64, a: &SparseMatrix) -> SparseMatrix {
    let t: Vec<Entry> = entries(a).map(|(i, j, v)| Triplet::new(i, j, alpha * v)).collect();
    from_triplets(a.nrows(), a.ncols(), &t)
}

/// `diag(d) * a`.
pub fn scale_rows(d: &[f64], a: &SparseMatrix) -> SparseMatrix {
    let t: Vec<Entry> = entries(a).map(|(i, j, v)| Triplet::new(i, j, d[i] * v)).collect();
    from_triplets(a.nrows(), a.ncols(), &t)
}

/// `a * diag(d)`.
pub fn scale_cols(a: &SparseMatrix, d: &[f64]) -> SparseMatrix {
    let t: Vec<Entry> = entries(a).map(|(i, j, v)| Triplet::new(i, j, v * d[j])).collect();
    from_triplets(a.nrows(), a.ncols(), &t)
}

pub fn diagonal(a: &SparseMatrix) -> Vec<f64> {
    let mut d = vec![0.0; a.nrows().min(a.ncols())];
    for (i, j, v) in entries(a) {
        if i == j {
            d[i] += v;
        }
    }
    d
}

pub fn max_abs(a: &SparseMatrix) -> f64 {
    entries(a).fold(0.0, |m, (_, _, v)| m.max(v.abs()))
}

pub fn max_off_diagonal(a: &SparseMatrix) -> f64 {
    entries(a).filter(|(i, j, _)| i != j).fold(0.0, |m, (_, _, v)| m.max(v.abs()))
}

/// Largest entry of `a - aᵀ`.
pub fn asymmetry(a: &SparseMatrix) -> f64 {
    max_abs(&combine(1.0, a, -1.0, &transpose(a)))
}

/// Places blocks at the given offsets of an `nrows × ncols` matrix.
pub fn stack(nrows: usize, ncols: usize, blocks: &[(usize, usize, f64, &SparseMatrix)]) -> SparseMatrix {
    let mut t = Vec::new();
    for &(r0, c0, alpha, b) in blocks {
        t.extend(entries(b).map(|(i, j, v)| Triplet::new(r0 + i, c0 + j, alpha * v)));
    }
    from_triplets(nrows, ncols, &t)
}

pub fn to_dense(a: &SparseMatrix) -> Mat<f64> {
    a.to_dense()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn max_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseMatrix {
        from_triplets(
            2,
            3,
            &[Triplet::new(0, 0, 1.0), Triplet::new(1, 2, 2.0), Triplet::new(1, 2, 0.5), Triplet::new(0, 1, -1.0)],
        )
    }

    #[test]
    fn duplicates_sum_and_products_match_dense() {
        let a = sample();
        assert_eq!(to_dense(&a)[(1, 2)], 2.5);
        let x = [1.0, 2.0, 3.0];
        assert_eq!(mul_vec(&a, &x), vec![-1.0, 7.5]);
        assert_eq!(mul_transpose_vec(&a, &[1.0, 2.0]), vec![1.0, -1.0, 5.0]);
        let ata = product(&transpose(&a), &a);
        let dense = to_dense(&a).transpose() * to_dense(&a);
        assert_eq!(to_dense(&ata), dense);
        assert_eq!(asymmetry(&ata), 0.0);
        assert_eq!(diagonal(&ata), vec![1.0, 1.0, 6.25]);
    }

    #[test]
    fn stacking_and_scaling() {
        let a = sample();
        let s = stack(3, 4, &[(1, 1, 2.0, &a)]);
        assert_eq!(to_dense(&s)[(2, 3)], 5.0);
        assert_eq!(to_dense(&scale_rows(&[2.0, 0.0], &a))[(1, 2)], 0.0);
        assert_eq!(to_dense(&scale_cols(&a, &[3.0, 1.0, 1.0]))[(0, 0)], 3.0);
        assert_eq!(max_off_diagonal(&a), 2.5);
    }
}
