//! Integer lattices: kernels, particular solutions, bases and quotient coordinates.

use super::matrix::{Int, IntMatrix};
use super::smith::smith_normal_form;

/// Basis of `{x : m x = 0}` as column vectors.
pub fn kernel(m: &IntMatrix) -> Vec<Vec<Int>> {
    let s = smith_normal_form(m);
    (s.rank()..m.cols()).map(|j| s.v.column(j)).collect()
}

/// Some integer `x` with `m x = b`.
pub fn solve(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let s = smith_normal_form(m);
    let ub = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![0; m.cols()];
    for (i, &c) in ub.iter().enumerate() {
        let d = diag.get(i).copied().unwrap_or(0);
        if d == 0 {
            if c != 0 {
                return None;
            }
        } else if c % d != 0 {
            return None;
        } else {
            y[i] = c / d;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// `m` with one extra column `moduli[i] * e_i` per nonzero modulus.
fn augment(m: &IntMatrix, moduli: &[Int]) -> IntMatrix {
    assert_eq!(moduli.len(), m.rows(), "one modulus per row");
    let extra: Vec<Vec<Int>> = moduli
        .iter()
        .enumerate()
        .filter(|(_, &q)| q != 0)
        .map(|(i, &q)| {
            let mut c = vec![0; m.rows()];
            c[i] = q;
            c
        })
        .collect();
    m.hstack(&IntMatrix::from_columns(&extra, m.rows()))
}

/// Some `x` with `(m x)_i ≡ b_i (mod moduli_i)`; modulus 0 means exact equality.
pub fn solve_mod(m: &IntMatrix, b: &[Int], moduli: &[Int]) -> Option<Vec<Int>> {
    let z = solve(&augment(m, moduli), b)?;
    Some(z[..m.cols()].to_vec())
}

/// Basis (rows) of `{x : (m x)_i ≡ 0 (mod moduli_i)}`.
pub fn kernel_mod(m: &IntMatrix, moduli: &[Int]) -> Vec<Vec<Int>> {
    let gens: Vec<Vec<Int>> = kernel(&augment(m, moduli)).into_iter().map(|z| z[..m.cols()].to_vec()).collect();
    lattice_basis(&gens, m.cols())
}

/// Row-echelon basis of the integer span of `gens`.
pub fn lattice_basis(gens: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
    for g in &rows {
        assert_eq!(g.len(), dim, "generator length");
    }
    let mut basis = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = rows[i][col].div_euclid(rows[p][col]);
                    let prow = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut r = rows.swap_remove(p);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            basis.push(r);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        col += 1;
    }
    // reduce entries above pivots for a canonical basis
    for k in 0..basis.len() {
        let pc = basis[k].iter().position(|&x| x != 0).unwrap();
        for i in 0..k {
            let q = basis[i][pc].div_euclid(basis[k][pc]);
            if q != 0 {
                let prow = basis[k].clone();
                for (x, y) in basis[i].iter_mut().zip(&prow) {
                    *x -= q * y;
                }
            }
        }
    }
    basis
}

/// Coefficients `c` with `sum c_k basis_k = v`, if `v` lies in the span.
pub fn lattice_coords(basis: &[Vec<Int>], v: &[Int]) -> Option<Vec<Int>> {
    if basis.is_empty() {
        return v.iter().all(|&x| x == 0).then(Vec::new);
    }
    let m = IntMatrix::from_columns(basis, v.len());
    solve(&m, v)
}

/// Coordinates on `Z^m / L` for a sublattice given by generators.
///
/// A row vector `x` is sent to `x * v`; coordinate `i` is then read modulo
/// `moduli[i]` (0 = free). Coordinates with modulus 1 are dropped.
#[derive(Clone, Debug)]
pub struct QuotientCoords {
    v: IntMatrix,
    moduli: Vec<Int>,
    kept: Vec<usize>,
}

impl QuotientCoords {
    pub fn new(relations: &[Vec<Int>], dim: usize) -> Self {
        let r = IntMatrix::from_rows_with_cols(relations, dim);
        let s = smith_normal_form(&r);
        let diag = s.diagonal();
        let moduli: Vec<Int> = (0..dim).map(|i| diag.get(i).copied().unwrap_or(0)).collect();
        // canonical order: free coordinates first, then torsion ascending
        let mut kept: Vec<usize> = (0..dim).filter(|&i| moduli[i] == 0).collect();
        kept.extend((0..dim).filter(|&i| moduli[i] > 1));
        QuotientCoords { v: s.v, moduli, kept }
    }

    pub fn free_rank(&self) -> usize {
        self.kept.iter().filter(|&&i| self.moduli[i] == 0).count()
    }

    pub fn torsion(&self) -> Vec<Int> {
        self.kept.iter().map(|&i| self.moduli[i]).filter(|&d| d > 1).collect()
    }

    /// Moduli of the kept coordinates (0 for free ones).
    pub fn moduli(&self) -> Vec<Int> {
        self.kept.iter().map(|&i| self.moduli[i]).collect()
    }

    pub fn coords(&self, x: &[Int]) -> Vec<Int> {
        let y = self.v.transpose().mul_vec(x);
        self.kept
            .iter()
            .map(|&i| if self.moduli[i] == 0 { y[i] } else { y[i].rem_euclid(self.moduli[i]) })
            .collect()
    }

    pub fn is_zero(&self, x: &[Int]) -> bool {
        self.coords(x).iter().all(|&c| c == 0)
    }

    /// Some `x` with `coords(x) = c`.
    pub fn preimage(&self, c: &[Int]) -> Vec<Int> {
        let mut y = vec![0; self.v.rows()];
        for (&i, &x) in self.kept.iter().zip(c) {
            y[i] = x;
        }
        solve(&self.v.transpose(), &y).expect("unimodular transform")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_projection() {
        let k = kernel(&IntMatrix::from_rows(&[vec![0, 1]]));
        assert_eq!(lattice_basis(&k, 2), vec![vec![1, 0]]);
    }

    #[test]
    fn solve_reports_infeasible() {
        let m = IntMatrix::from_rows(&[vec![2, 4]]);
        assert!(solve(&m, &[3]).is_none());
        let x = solve(&m, &[6]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![6]);
    }

    #[test]
    fn modular_solution() {
        // 2x ≡ 1 mod 3
        let m = IntMatrix::from_rows(&[vec![2]]);
        let x = solve_mod(&m, &[1], &[3]).unwrap();
        assert_eq!((2 * x[0]).rem_euclid(3), 1);
        assert_eq!(kernel_mod(&m, &[4]), vec![vec![2]]);
    }

    #[test]
    fn preimage_round_trip() {
        let q = QuotientCoords::new(&[vec![2, 4], vec![0, 6]], 2);
        for c in [vec![1i64, 0], vec![0, 1], vec![1, 5]] {
            let c: Vec<Int> = c.iter().zip(q.moduli()).map(|(x, m)| x.rem_euclid(m)).collect();
            assert_eq!(q.coords(&q.preimage(&c)), c);
        }
    }

    #[test]
    fn quotient_coordinates() {
        let q = QuotientCoords::new(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(q.free_rank(), 0);
        assert_eq!(q.torsion(), vec![6]);
        assert!(q.is_zero(&[2, 3]));
        assert!(!q.is_zero(&[1, 0]));
    }
}
