//! Dense vectors, polynomials and matrices over a prime field with the prime
//! passed explicitly. Polynomials are `Vec<u32>` with the constant term first
//! and no trailing zeros; the zero polynomial is empty.

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv(a: u32, p: u32) -> Option<u32> {
    if a.is_multiple_of(p) {
        return None;
    }
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    Some(s0.rem_euclid(p as i64) as u32)
}

#[inline]
pub(crate) fn mulm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn addm(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn subm(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Unreduced-length product, coefficients reduced mod p, trimmed.
pub(crate) fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    mul_acc(&mut acc, a, b, p);
    let mut out: Vec<u32> = acc.into_iter().map(|c| (c % p as u64) as u32).collect();
    trim(&mut out);
    out
}

/// `acc += a * b` without reduction. Safe as long as the caller reduces
/// before the accumulator can overflow: every term is below `p^2`.
pub(crate) fn mul_acc(acc: &mut [u64], a: &[u32], b: &[u32], p: u32) {
    // Flush when a column could overflow; with p < 2^16 this never triggers.
    let limit = u64::MAX / 2;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as u64;
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            *slot += x * y as u64;
            if *slot > limit {
                *slot %= p as u64;
            }
        }
    }
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn poly_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let db = b.len() - 1;
    let lead_inv = inv(b[db], p).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let c = mulm(c, lead_inv, p);
        q[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                let k = i - db + j;
                r[k] = subm(r[k], mulm(c, bj, p), p);
            }
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo the irreducible `m`.
pub(crate) fn poly_inv_mod(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<u32> = Vec::new();
    let mut s1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        let (qt, r) = poly_divrem(&r0, &r1, p);
        let qs = poly_mul(&qt, &s1, p);
        let s2 = poly_sub(&s0, &qs, p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv(r0[0], p)?;
    let mut out: Vec<u32> = s0.iter().map(|&x| mulm(x, c, p)).collect();
    trim(&mut out);
    Some(out)
}

pub(crate) fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(subm(x, y, p));
    }
    trim(&mut out);
    out
}

/// Reduced row echelon form in place over the rows. Returns the pivot columns.
pub(crate) fn rref(rows: &mut [Vec<u32>], cols: usize, p: u32) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let li = inv(rows[r][c], p).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = mulm(*x, li, p);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = subm(*x, mulm(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : A v = 0}` for the row-major matrix `a` with `cols` columns.
pub(crate) fn kernel(a: &[Vec<u32>], cols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, cols, p);
    let mut is_pivot = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let mut out = Vec::new();
    for free in 0..cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = subm(0, m[i][free], p);
        }
        out.push(v);
    }
    out
}

/// Inverse of a square matrix, if it exists.
pub(crate) fn invert(a: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = a.len();
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n, p);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn mat_vec(m: &[Vec<u32>], v: &[u32], p: u32) -> Vec<u32> {
    m.iter()
        .map(|row| {
            let mut acc = 0u64;
            for (&x, &y) in row.iter().zip(v) {
                acc += x as u64 * y as u64;
                if acc > u64::MAX / 2 {
                    acc %= p as u64;
                }
            }
            (acc % p as u64) as u32
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime() {
        for p in [2u32, 3, 5, 7, 13] {
            for a in 1..p {
                assert_eq!(mulm(a, inv(a, p).unwrap(), p), 1);
            }
            assert_eq!(inv(0, p), None);
        }
    }

    #[test]
    fn divrem_reconstructs() {
        let p = 5;
        let a = vec![1, 2, 3, 4, 1, 3];
        let b = vec![2, 0, 1];
        let (q, r) = poly_divrem(&a, &b, p);
        let mut back = poly_mul(&q, &b, p);
        back.resize(a.len(), 0);
        for (i, &c) in r.iter().enumerate() {
            back[i] = addm(back[i], c, p);
        }
        assert_eq!(back, a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn inverse_modulo_irreducible() {
        // x^2 + x + 1 over F_2
        let m = vec![1, 1, 1];
        let g = vec![0, 1];
        let gi = poly_inv_mod(&g, &m, 2).unwrap();
        let (_, prod) = poly_divrem(&poly_mul(&g, &gi, 2), &m, 2);
        assert_eq!(prod, vec![1]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel(&[vec![1, 1], vec![1, 1]], 2, 3);
        assert_eq!(k, vec![vec![2, 1]]);
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let a = vec![vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]];
        let ai = invert(&a, 5).unwrap();
        for (i, row) in a.iter().enumerate() {
            for j in 0..3 {
                let col: Vec<u32> = ai.iter().map(|r| r[j]).collect();
                let dot = mat_vec(std::slice::from_ref(row), &col, 5)[0];
                assert_eq!(dot, u32::from(i == j));
            }
        }
    }
}
