//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Matrix whose columns are the given vectors.
pub(crate) fn columns(vectors: &[DVector<f64>]) -> DMatrix<f64> {
    DMatrix::from_columns(vectors)
}

/// Numerical rank of a set of vectors: singular values above
/// `rel_tol * largest` are counted.
pub(crate) fn rank(vectors: &[DVector<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let svd = columns(vectors).svd(false, false);
    let max = svd.singular_values.max();
    if max == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > rel_tol * max)
        .count()
}

/// Vector orthogonal (in the auxiliary Euclidean sense) to the `d-1`
/// given vectors in `d`-space, built from signed maximal minors. Its length
/// is the `(d-1)`-volume of the spanned parallelotope, so a zero result
/// means the vectors are dependent.
pub(crate) fn cofactor_normal(vectors: &[DVector<f64>]) -> DVector<f64> {
    let d = vectors.len() + 1;
    let m = columns(vectors); // d x (d-1)
    DVector::from_fn(d, |k, _| {
        let minor = m.clone().remove_row(k);
        let det = if minor.nrows() == 0 { 1.0 } else { minor.determinant() };
        if k % 2 == 0 {
            det
        } else {
            -det
        }
    })
}

/// Least-squares solution of `a x = b` together with the smallest and
/// largest singular value of `a`.
pub(crate) fn least_squares(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
) -> Option<(DVector<f64>, f64, f64)> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let x = svd.solve(b, f64::EPSILON * smax.max(f64::MIN_POSITIVE)).ok()?;
    Some((x, smin, smax))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_normal_is_orthogonal() {
        let a = DVector::from_vec(vec![1.0, 2.0, 0.5, -1.0]);
        let b = DVector::from_vec(vec![0.0, 1.0, 3.0, 2.0]);
        let c = DVector::from_vec(vec![-2.0, 0.3, 1.0, 1.0]);
        let n = cofactor_normal(&[a.clone(), b.clone(), c.clone()]);
        assert!(n.norm() > 1e-6);
        for v in [a, b, c] {
            assert!(n.dot(&v).abs() < 1e-12);
        }
    }

    #[test]
    fn cofactor_normal_in_the_plane_is_a_rotation() {
        let n = cofactor_normal(&[DVector::from_vec(vec![1.0, 0.0])]);
        assert_eq!(n, DVector::from_vec(vec![0.0, -1.0]));
    }

    #[test]
    fn rank_detects_dependence() {
        let a = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let b = &a * 2.0;
        assert_eq!(rank(&[a.clone(), b], 1e-12), 1);
        assert_eq!(rank(&[a, DVector::from_vec(vec![0.0, 1.0, 0.0])], 1e-12), 2);
    }
}
