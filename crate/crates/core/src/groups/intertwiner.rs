use super::lattice::{kernel, lattice_basis};
use super::matrix::IntMatrix;

/// Z-basis of `{X (m×n) : X·A = B·X}` for square `A` (n×n) and `B` (m×m).
pub fn solve_intertwiners(a: &IntMatrix, b: &IntMatrix) -> Vec<IntMatrix> {
    assert!(a.is_square() && b.is_square(), "intertwiners need square matrices");
    let (n, m) = (a.rows(), b.rows());
    let idx = |i: usize, j: usize| i * n + j;
    let mut c = IntMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            let r = idx(i, j);
            for k in 0..n {
                c[(r, idx(i, k))] += a[(k, j)];
            }
            for k in 0..m {
                c[(r, idx(k, j))] -= b[(i, k)];
            }
        }
    }
    lattice_basis(&kernel(&c), m * n)
        .into_iter()
        .map(|v| IntMatrix::from_rows(&v.chunks(n.max(1)).take(m).map(|r| r.to_vec()).collect::<Vec<_>>()))
        .map(|x| if n == 0 { IntMatrix::zeros(m, 0) } else { x })
        .collect()
}
