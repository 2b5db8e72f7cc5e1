use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// Result of `smith_normal_form`: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Diagonal entries of `d`, length min(rows, cols).
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = BigMat::from(m);
    let mut u = BigMat::identity(rows);
    let mut v = BigMat::identity(cols);
    loop {
        row_hermite(&mut a, &mut u);
        if !a.is_diagonal() {
            let (mut at, mut vt) = (a.transpose(), v.transpose());
            row_hermite(&mut at, &mut vt);
            (a, v) = (at.transpose(), vt.transpose());
            continue;
        }
        match divisibility_offender(&a) {
            // col i += col j turns diag(p, q) into a block whose next pass yields gcd and lcm
            Some((i, j)) => {
                a.add_col(i, j);
                v.add_col(i, j);
            }
            None => break,
        }
    }
    let r = (0..rows.min(cols)).take_while(|&i| !a.0[i][i].is_zero()).count();
    reduce_against_kernel(&mut u.0, r);
    let mut vt = v.transpose();
    reduce_against_kernel(&mut vt.0, r);
    Smith { u: u.to_int(), d: a.to_int(), v: vt.transpose().to_int() }
}

struct BigMat(Vec<Vec<BigInt>>, usize);

impl BigMat {
    fn from(m: &IntMatrix) -> Self {
        BigMat(m.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(), m.cols())
    }

    fn identity(n: usize) -> Self {
        BigMat((0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect(), n)
    }

    fn transpose(&self) -> Self {
        let rows = self.0.len();
        BigMat((0..self.1).map(|j| (0..rows).map(|i| self.0[i][j].clone()).collect()).collect(), rows)
    }

    fn is_diagonal(&self) -> bool {
        self.0.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    fn add_col(&mut self, dst: usize, src: usize) {
        for r in &mut self.0 {
            let x = r[src].clone();
            r[dst] += x;
        }
    }

    fn to_int(&self) -> IntMatrix {
        let rows: Vec<Vec<Int>> = self.0.iter().map(|r| r.iter().map(|x| Int::try_from(x).expect("integer overflow")).collect()).collect();
        IntMatrix::from_rows_with_cols(&rows, self.1)
    }
}

fn combine(x: &BigInt, a: &[BigInt], y: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(p, q)| x * p + y * q).collect()
}

/// Row-style Hermite form of `a`, mirroring every row operation on `u`.
fn row_hermite(a: &mut BigMat, u: &mut BigMat) {
    let rows = a.0.len();
    let mut r = 0;
    for c in 0..a.1 {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a.0[i][c].is_zero() {
                continue;
            }
            let (p, q) = (a.0[r][c].clone(), a.0[i][c].clone());
            let e = p.extended_gcd(&q);
            let (s, t) = (-(&q / &e.gcd), &p / &e.gcd);
            for m in [&mut *a, &mut *u] {
                let (top, bot) = (m.0[r].clone(), m.0[i].clone());
                m.0[r] = combine(&e.x, &top, &e.y, &bot);
                m.0[i] = combine(&s, &top, &t, &bot);
            }
        }
        if a.0[r][c].is_zero() {
            continue;
        }
        if a.0[r][c].is_negative() {
            for m in [&mut *a, &mut *u] {
                m.0[r].iter_mut().for_each(|x| *x = -&*x);
            }
        }
        let p = a.0[r][c].clone();
        for k in 0..r {
            let q = a.0[k][c].div_floor(&p);
            if !q.is_zero() {
                for m in [&mut *a, &mut *u] {
                    let pivot = m.0[r].clone();
                    m.0[k] = combine(&BigInt::one(), &m.0[k], &-&q, &pivot);
                }
            }
        }
        r += 1;
    }
}

fn divisibility_offender(a: &BigMat) -> Option<(usize, usize)> {
    let n = a.0.len().min(a.1);
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (&a.0[i][i], &a.0[j][j]);
            if (p.is_zero() && !q.is_zero()) || (!p.is_zero() && !q.is_multiple_of(p)) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Rows `r..` of a transform span a kernel; LLL-reduce them and size-reduce rows `..r` against them.
fn reduce_against_kernel(rows: &mut [Vec<BigInt>], r: usize) {
    let (head, kernel) = rows.split_at_mut(r);
    if kernel.is_empty() {
        return;
    }
    lll(kernel);
    let star = gram_schmidt(kernel);
    for v in head.iter_mut() {
        for j in (0..kernel.len()).rev() {
            let q = round(&(dot_q(v, &star[j]) / dot_qq(&star[j], &star[j])));
            if !q.is_zero() {
                *v = combine(&BigInt::one(), v, &-q, &kernel[j]);
            }
        }
    }
}

fn dot_q(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| y * x).fold(BigRational::zero(), |s, t| s + t)
}

fn dot_qq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(BigRational::zero(), |s, t| s + t)
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(b.len());
    for v in b {
        let mut w: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for s in &star {
            let mu = dot_q(v, s) / dot_qq(s, s);
            for (wi, si) in w.iter_mut().zip(s) {
                *wi -= &mu * si;
            }
        }
        star.push(w);
    }
    star
}

/// Textbook LLL with δ = 3/4; the rows are linearly independent.
fn lll(b: &mut [Vec<BigInt>]) {
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    while k < b.len() {
        for j in (0..k).rev() {
            let star = gram_schmidt(&b[..=j]);
            let q = round(&(dot_q(&b[k], &star[j]) / dot_qq(&star[j], &star[j])));
            if !q.is_zero() {
                b[k] = combine(&BigInt::one(), &b[k], &-q, &b[j]);
            }
        }
        let star = gram_schmidt(&b[..=k]);
        let mu = dot_q(&b[k], &star[k - 1]) / dot_qq(&star[k - 1], &star[k - 1]);
        if dot_qq(&star[k], &star[k]) >= (&delta - &mu * &mu) * dot_qq(&star[k - 1], &star[k - 1]) {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(s.u.det().abs(), 1);
        assert_eq!(s.v.det().abs(), 1);
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && (w[0] == 0 && w[1] == 0 || w[0] != 0 && w[1] % w[0] == 0));
        }
        s
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![2, 4]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        let s = check(&IntMatrix::zeros(3, 2));
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(3));
    }

    #[test]
    fn non_divisible_diagonal_gets_fixed() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![1, 6]);
    }
}
