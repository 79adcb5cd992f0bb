//! Exact linear algebra over the rationals: ranks, affine dimension,
//! elimination and inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::{Rational, RationalPoint};

/// Scales a rational vector by a positive factor to a primitive integer vector.
pub fn to_primitive(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive(ints)
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return v;
            }
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let piv = &top[rank];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..ncols {
                row[k] = &row[k] * &piv[c] - &f * &piv[k];
            }
            *row = primitive(std::mem::take(row));
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    integer_rank(rows.iter().map(|r| to_primitive(r)).collect())
}

/// Dimension of the affine hull; `-1` for no points.
pub fn affine_dim(points: &[RationalPoint]) -> i64 {
    let Some(first) = points.first() else {
        return -1;
    };
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rational_rank(&diffs) as i64
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        if !piv.is_one() {
            for v in rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let prow = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, pv) in prow.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[j] -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solution set of `A x = b` as `x0 + span(N)`, or `None` if inconsistent.
/// Null-space vectors are returned as primitive integer vectors.
pub fn affine_solution(eqs: &[(Vec<Rational>, Rational)], nvars: usize) -> Option<(Vec<Rational>, Vec<Vec<BigInt>>)> {
    let mut rows: Vec<Vec<Rational>> = eqs
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut x0 = vec![Rational::zero(); nvars];
    for (r, &p) in pivots.iter().enumerate() {
        x0[p] = rows[r][nvars].clone();
    }
    let mut is_pivot = vec![false; nvars];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut null = Vec::new();
    for f in (0..nvars).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Rational::zero(); nvars];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][f].clone();
        }
        null.push(to_primitive(&v));
    }
    Some((x0, null))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn dimension_examples() {
        assert_eq!(affine_dim(&[]), -1);
        assert_eq!(affine_dim(&[RationalPoint::from_ints(&[1, 2])]), 0);
        let square = [[0, 0], [1, 0], [0, 1], [1, 1]].map(|p| RationalPoint::from_ints(&p));
        assert_eq!(affine_dim(&square), 2);
        let line = [[0, 0, 1], [2, 2, 1], [1, 1, 1]].map(|p| RationalPoint::from_ints(&p));
        assert_eq!(affine_dim(&line), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(inverse(&[vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
    }

    #[test]
    fn affine_solutions() {
        let eqs = vec![(vec![int(1), int(1), int(0)], int(1)), (vec![int(0), int(0), int(2)], int(1))];
        let (x0, null) = affine_solution(&eqs, 3).unwrap();
        assert_eq!(x0, vec![int(1), int(0), ratio(1, 2)]);
        assert_eq!(null, vec![vec![BigInt::from(-1), BigInt::from(1), BigInt::from(0)]]);
        let bad = vec![(vec![int(1)], int(1)), (vec![int(2)], int(3))];
        assert!(affine_solution(&bad, 1).is_none());
    }

    proptest! {
        #[test]
        fn dim_invariant_under_translation_and_permutation(
            pts in proptest::collection::vec(proptest::collection::vec(-3i64..4, 4), 1..7),
            shift in proptest::collection::vec(-5i64..6, 4),
        ) {
            let points: Vec<RationalPoint> = pts.iter().map(|p| RationalPoint::from_ints(p)).collect();
            let moved: Vec<RationalPoint> = pts
                .iter()
                .map(|p| RationalPoint::from_ints(&[p[2] + shift[2], p[0] + shift[0], p[3] + shift[3], p[1] + shift[1]]))
                .collect();
            prop_assert_eq!(affine_dim(&points), affine_dim(&moved));
            let rows: Vec<Vec<Rational>> = pts.iter().map(|p| p.iter().map(|&v| int(v)).collect()).collect();
            prop_assert!(rational_rank(&rows) <= 4);
        }
    }
}
