//! Small dense linear algebra for least-squares fits.
//!
//! Everything here works on symmetric positive semi-definite systems
//! assembled from normal equations. Sizes stay tiny (at most a few
//! hundred), so a plain Cholesky factorization is plenty.

/// Solves `a * x = rhs` for each right-hand-side column, where `a` is
/// symmetric positive definite. Returns `None` when a pivot collapses,
/// which means the underlying samples do not determine the system.
pub(crate) fn solve_spd(a: &[Vec<f64>], rhs: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let scale = a
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let tol = scale * 1e-12;

    // Lower-triangular factor L with a * x = L L^T x.
    let mut l = vec![vec![0.0f64; n]; n];
    for j in 0..n {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if d <= tol {
            return None;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..n {
            let mut v = a[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k];
            }
            l[i][j] = v / l[j][j];
        }
    }

    let mut solutions = Vec::with_capacity(rhs.len());
    for b in rhs {
        debug_assert_eq!(b.len(), n);
        let mut y = vec![0.0f64; n];
        for i in 0..n {
            let mut v = b[i];
            for k in 0..i {
                v -= l[i][k] * y[k];
            }
            y[i] = v / l[i][i];
        }
        let mut x = vec![0.0f64; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in i + 1..n {
                v -= l[k][i] * x[k];
            }
            x[i] = v / l[i][i];
        }
        solutions.push(x);
    }
    Some(solutions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_small_definite_system() {
        let a = vec![vec![4.0, 2.0], vec![2.0, 3.0]];
        let rhs = vec![vec![2.0, 5.0], vec![8.0, 10.0]];
        let x = solve_spd(&a, &rhs).unwrap();
        for (sol, b) in x.iter().zip(&rhs) {
            for i in 0..2 {
                let back: f64 = (0..2).map(|j| a[i][j] * sol[j]).sum();
                assert!((back - b[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_systems_are_refused() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let rhs = vec![vec![1.0, 1.0]];
        assert!(solve_spd(&a, &rhs).is_none());
    }
}
