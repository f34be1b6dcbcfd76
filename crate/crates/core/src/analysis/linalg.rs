//! Exact integer linear algebra by fraction-free Gaussian elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Divides by the gcd of the entries and makes the first nonzero entry
/// positive.
fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x /= &g;
        if neg {
            *x = -&*x;
        }
    }
}

/// Reduced row echelon form over the integers: every pivot row is primitive
/// and pivot columns are zero in all other rows. Returns the pivot columns.
fn echelon(m: &mut Vec<Vec<BigInt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        primitive(&mut m[row]);
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let a = m[row][col].clone();
            let b = m[r][col].clone();
            let (pivot, target) = (m[row].clone(), &mut m[r]);
            for (x, y) in target.iter_mut().zip(&pivot) {
                *x = &*x * &a - y * &b;
            }
            primitive(target);
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

/// Basis of `{x : Mx = 0}` for an `r × cols` matrix, as primitive integer
/// vectors.
pub fn null_space(m: &[Vec<i64>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a = to_big(m);
    let pivots = echelon(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let lcm = a
        .iter()
        .zip(&pivots)
        .fold(BigInt::one(), |l, (row, &p)| l.lcm(&row[p]));
    free.iter()
        .map(|&f| {
            let mut v = vec![BigInt::zero(); cols];
            v[f] = lcm.clone();
            for (row, &p) in a.iter().zip(&pivots) {
                v[p] = -(&row[f] * &lcm) / &row[p];
            }
            primitive(&mut v);
            v
        })
        .collect()
}

/// Basis of `{y : yᵀM = 0}` for a matrix with `rows` rows.
pub fn left_null_space(m: &[Vec<i64>], rows: usize) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    let transposed: Vec<Vec<i64>> = (0..cols).map(|c| (0..rows).map(|r| m[r][c]).collect()).collect();
    null_space(&transposed, rows)
}

pub fn rank(vectors: &[Vec<BigInt>]) -> usize {
    let Some(cols) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut a = vectors.to_vec();
    echelon(&mut a, cols).len()
}

/// True when `v` is a rational linear combination of `basis`.
pub fn in_span(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut extended = basis.to_vec();
    extended.push(v.to_vec());
    rank(&extended) == rank(basis) || v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mul(m: &[Vec<i64>], x: &[BigInt]) -> Vec<BigInt> {
        m.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| BigInt::from(*a) * b).sum())
            .collect()
    }

    #[test]
    fn two_place_cycle() {
        // p1 -t1-> p2 -t2-> p1
        let c = vec![vec![-1, 1], vec![1, -1]];
        assert_eq!(null_space(&c, 2), vec![big(&[1, 1])]);
        assert_eq!(left_null_space(&c, 2), vec![big(&[1, 1])]);
    }

    #[test]
    fn zero_matrix_gives_standard_basis() {
        let c = vec![vec![0, 0, 0]; 2];
        assert_eq!(left_null_space(&c, 2), vec![big(&[1, 0]), big(&[0, 1])]);
    }

    #[test]
    fn full_rank_has_empty_null_space() {
        let c = vec![vec![2, 1], vec![1, 3]];
        assert!(null_space(&c, 2).is_empty());
    }

    #[test]
    fn fractional_pivots() {
        let c = vec![vec![2, 3, 0], vec![0, 0, 4]];
        let ns = null_space(&c, 3);
        assert_eq!(ns, vec![big(&[3, -2, 0])]);
        assert!(mul(&c, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn span_membership() {
        let basis = vec![big(&[1, 0, 1]), big(&[0, 1, 1])];
        assert!(in_span(&basis, &big(&[2, 3, 5])));
        assert!(!in_span(&basis, &big(&[0, 0, 1])));
        assert!(in_span(&[], &big(&[0, 0])));
    }
}
