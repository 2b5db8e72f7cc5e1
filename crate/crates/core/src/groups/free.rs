//! Words in a free group: letters are nonzero integers, `-k` is the inverse of `k`.

pub type Word = Vec<i64>;

/// Free reduction of a concatenation.
pub fn reduce_concat(parts: &[&[i64]]) -> Word {
    let mut out: Word = Vec::new();
    for part in parts {
        for &x in part.iter() {
            if x == 0 {
                continue;
            }
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
    }
    out
}

pub fn reduce(w: &[i64]) -> Word {
    reduce_concat(&[w])
}

pub fn is_reduced(w: &[i64]) -> bool {
    w.iter().all(|&x| x != 0) && w.windows(2).all(|p| p[0] != -p[1])
}

pub fn inverse(w: &[i64]) -> Word {
    reduce(&w.iter().rev().map(|x| -x).collect::<Vec<_>>())
}

pub fn power(w: &[i64], n: i64) -> Word {
    let base = if n < 0 { inverse(w) } else { reduce(w) };
    let parts: Vec<&[i64]> = std::iter::repeat(base.as_slice()).take(n.unsigned_abs() as usize).collect();
    reduce_concat(&parts)
}

/// `g w g⁻¹`.
pub fn conjugate(g: &[i64], w: &[i64]) -> Word {
    reduce_concat(&[g, w, &inverse(g)])
}

/// Strips matching first/last letters of a reduced word.
pub fn cyclic_reduce(w: &[i64]) -> Word {
    let w = reduce(w);
    let (mut lo, mut hi) = (0, w.len());
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Conjugacy in a free group: cyclic reductions agree up to rotation.
pub fn are_conjugate(u: &[i64], v: &[i64]) -> bool {
    let (a, b) = (cyclic_reduce(u), cyclic_reduce(v));
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter()))
}

/// All reduced words of length at most `len` over `rank` generators, shortest first.
pub fn words_up_to(rank: usize, len: usize) -> Vec<Word> {
    let letters: Vec<i64> = (1..=rank as i64).flat_map(|k| [k, -k]).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &x in &letters {
                if w.last() != Some(&-x) {
                    let mut nw: Word = w.clone();
                    nw.push(x);
                    next.push(nw);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        assert_eq!(reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(reduce_concat(&[&[1, 2], &inverse(&[1, 2])]), Vec::<i64>::new());
        assert_eq!(power(&[1, 2], -2), vec![-2, -1, -2, -1]);
    }

    #[test]
    fn conjugacy() {
        assert_eq!(conjugate(&[1], &[2]), vec![1, 2, -1]);
        assert!(are_conjugate(&[1, 2, -1], &[2]));
        assert!(are_conjugate(&[1, 2, 3], &[3, 1, 2]));
        assert!(!are_conjugate(&[1, 2], &[1, -2]));
    }

    #[test]
    fn enumeration_counts() {
        // 1 + 4 + 12 reduced words of length <= 2 in rank 2
        assert_eq!(words_up_to(2, 2).len(), 17);
    }
}
