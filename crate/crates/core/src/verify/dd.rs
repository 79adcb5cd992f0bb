//! Double description vertex enumeration for bounded polyhedra.
//!
//! Equations are eliminated first (`x = x0 + N t`), the remaining
//! inequalities are homogenized with an extra coordinate `t0 >= 0`, and the
//! extreme rays of the resulting pointed cone are built one constraint at a
//! time. Adjacency of two rays is decided combinatorially from their sets of
//! tight constraints.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{affine_solution, inverse, primitive, rational_rank, to_primitive};
use crate::rational::{Rational, RationalPoint};
use crate::{CtpError, Limits, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains_all(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    tight: Bits,
}

fn eval(c: &[BigInt], v: &[BigInt]) -> BigInt {
    c.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
}

/// Outcome of vertex enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdResult {
    pub vertices: Vec<RationalPoint>,
}

/// Vertices of `{x : A x = b, G x >= h}`. Errors with [`CtpError::Unbounded`]
/// if the polyhedron is nonempty and unbounded.
pub fn enumerate_vertices(
    nvars: usize,
    equations: &[(Vec<Rational>, Rational)],
    inequalities: &[(Vec<Rational>, Rational)],
    limits: &Limits,
) -> Result<DdResult> {
    let Some((x0, null)) = affine_solution(equations, nvars) else {
        return Ok(DdResult { vertices: Vec::new() });
    };
    let k = null.len();
    let dim = k + 1;

    // homogenized constraints over (t0, t)
    let mut cons: Vec<Vec<BigInt>> = Vec::with_capacity(inequalities.len() + 1);
    let mut unit = vec![BigInt::zero(); dim];
    unit[0] = BigInt::from(1);
    cons.push(unit);
    for (g, h) in inequalities {
        let g0: Rational = g.iter().zip(&x0).map(|(a, b)| a * b).sum::<Rational>() - h;
        let mut row = Vec::with_capacity(dim);
        row.push(g0);
        for nv in &null {
            let s: Rational = g
                .iter()
                .zip(nv)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * Rational::from_integer(b.clone()))
                .sum();
            row.push(s);
        }
        let ints = to_primitive(&row);
        if ints.iter().all(|v| v.is_zero()) {
            continue;
        }
        cons.push(ints);
    }
    let m = cons.len();

    // initial simplicial cone from independent constraints, in processing order
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vec<Rational>> = Vec::new();
    for (idx, row) in cons.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        let mut trial = basis_rows.clone();
        trial.push(row.iter().map(|v| Rational::from_integer(v.clone())).collect());
        if rational_rank(&trial) == trial.len() {
            basis_rows = trial;
            basis.push(idx);
        }
    }
    if basis.len() < dim {
        return lineality_case(nvars, equations, inequalities, limits);
    }
    let inv = inverse(&basis_rows).expect("independent rows");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<Rational> = inv.iter().map(|r| r[j].clone()).collect();
            let mut tight = Bits::new(m);
            for (jj, &b) in basis.iter().enumerate() {
                if jj != j {
                    tight.set(b);
                }
            }
            Ray {
                v: to_primitive(&col),
                tight,
            }
        })
        .collect();

    let in_basis: std::collections::HashSet<usize> = basis.iter().copied().collect();
    for (ci, c) in cons.iter().enumerate() {
        if in_basis.contains(&ci) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| eval(c, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.tight.set(ci);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if (common.count() as usize) + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(t, r)| t != p && t != q && r.tight.contains_all(&common));
                if blocked {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let v: Vec<BigInt> = rays[p].v.iter().zip(&rays[q].v).map(|(x, y)| &b * x + a * y).collect();
                let mut tight = common;
                tight.set(ci);
                fresh.push(Ray { v: primitive(v), tight });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight.set(ci);
            }
            next.push(r);
        }
        next.extend(fresh);
        if next.len() > limits.max_dd_rays {
            return Err(CtpError::CapExceeded {
                what: "double description rays",
                limit: limits.max_dd_rays as u64,
            });
        }
        rays = next;
    }

    let mut vertices = Vec::with_capacity(rays.len());
    for r in &rays {
        if !r.v[0].is_positive() {
            return Err(CtpError::Unbounded);
        }
        let t0 = Rational::from_integer(r.v[0].clone());
        let mut x = x0.clone();
        for (nv, tj) in null.iter().zip(&r.v[1..]) {
            if tj.is_zero() {
                continue;
            }
            let s = Rational::from_integer(tj.clone()) / &t0;
            for (xi, ni) in x.iter_mut().zip(nv) {
                if !ni.is_zero() {
                    *xi += &s * Rational::from_integer(ni.clone());
                }
            }
        }
        vertices.push(RationalPoint(x));
    }
    vertices.sort();
    vertices.dedup();
    Ok(DdResult { vertices })
}

/// The constraint matrix has a nontrivial kernel: the polyhedron is either
/// empty or contains a line.
fn lineality_case(
    nvars: usize,
    equations: &[(Vec<Rational>, Rational)],
    inequalities: &[(Vec<Rational>, Rational)],
    limits: &Limits,
) -> Result<DdResult> {
    use super::lp::{LinearProgram, LpOutcome, Relation, Sense};
    let mut lp = LinearProgram::new(nvars, Sense::Min);
    for j in 0..nvars {
        lp.set_free(j);
    }
    for (a, b) in equations {
        lp.add_dense_row(a, Relation::Eq, b.clone());
    }
    for (g, h) in inequalities {
        lp.add_dense_row(g, Relation::Ge, h.clone());
    }
    match lp.solve(limits)? {
        LpOutcome::Infeasible { .. } => Ok(DdResult { vertices: Vec::new() }),
        _ => Err(CtpError::Unbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn unit_box() {
        let ineqs = vec![
            (row(&[1, 0]), int(0)),
            (row(&[0, 1]), int(0)),
            (row(&[-1, 0]), int(-1)),
            (row(&[0, -1]), int(-1)),
        ];
        let r = enumerate_vertices(2, &[], &ineqs, &lim()).unwrap();
        let expected: Vec<RationalPoint> = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|p| RationalPoint::from_ints(p)).collect();
        assert_eq!(r.vertices, expected);
    }

    #[test]
    fn simplex_with_equation() {
        let eqs = vec![(row(&[1, 1, 1]), int(1))];
        let ineqs = (0..3)
            .map(|j| {
                let mut e = vec![int(0); 3];
                e[j] = int(1);
                (e, int(0))
            })
            .collect::<Vec<_>>();
        let r = enumerate_vertices(3, &eqs, &ineqs, &lim()).unwrap();
        assert_eq!(r.vertices.len(), 3);
        // cut off a corner: x0 <= 1/2
        let mut cut = ineqs.clone();
        cut.push((row(&[-1, 0, 0]), ratio(-1, 2)));
        let r = enumerate_vertices(3, &eqs, &cut, &lim()).unwrap();
        assert_eq!(r.vertices.len(), 4);
        assert!(r.vertices.contains(&RationalPoint(vec![ratio(1, 2), ratio(1, 2), int(0)])));
    }

    #[test]
    fn empty_and_unbounded() {
        let ineqs = vec![(row(&[1]), int(1)), (row(&[-1]), int(0))];
        assert!(enumerate_vertices(1, &[], &ineqs, &lim()).unwrap().vertices.is_empty());
        let half_line = vec![(row(&[1]), int(0))];
        assert_eq!(enumerate_vertices(1, &[], &half_line, &lim()), Err(CtpError::Unbounded));
        let strip = vec![(row(&[1, 0]), int(0)), (row(&[-1, 0]), int(-1))];
        assert_eq!(enumerate_vertices(2, &[], &strip, &lim()), Err(CtpError::Unbounded));
        let inconsistent = vec![(row(&[1]), int(0)), (row(&[1]), int(1))];
        assert!(enumerate_vertices(1, &inconsistent, &[], &lim()).unwrap().vertices.is_empty());
    }

    #[test]
    fn point_from_equations() {
        let eqs = vec![(row(&[1, 0]), int(2)), (row(&[0, 1]), int(3))];
        let ineqs = vec![(row(&[1, 1]), int(0))];
        let r = enumerate_vertices(2, &eqs, &ineqs, &lim()).unwrap();
        assert_eq!(r.vertices, vec![RationalPoint::from_ints(&[2, 3])]);
    }

    #[test]
    fn cube_with_degenerate_cut() {
        // 3-cube with the redundant x0 + x1 + x2 <= 3 that touches one vertex
        let mut ineqs = Vec::new();
        for j in 0..3 {
            let mut e = vec![int(0); 3];
            e[j] = int(1);
            ineqs.push((e.clone(), int(0)));
            ineqs.push((e.iter().map(|v| -v).collect(), int(-1)));
        }
        ineqs.push((row(&[-1, -1, -1]), int(-3)));
        let r = enumerate_vertices(3, &[], &ineqs, &lim()).unwrap();
        assert_eq!(r.vertices.len(), 8);
        ineqs.push((row(&[-1, -1, -1]), int(-2)));
        let r = enumerate_vertices(3, &[], &ineqs, &lim()).unwrap();
        assert_eq!(r.vertices.len(), 7);
    }

    #[test]
    fn ray_cap() {
        let mut ineqs = Vec::new();
        for j in 0..4 {
            let mut e = vec![int(0); 4];
            e[j] = int(1);
            ineqs.push((e.clone(), int(0)));
            ineqs.push((e.iter().map(|v| -v).collect(), int(-1)));
        }
        let small = Limits {
            max_dd_rays: 8,
            ..Limits::default()
        };
        assert!(enumerate_vertices(4, &[], &ineqs, &small).unwrap_err().is_cap_exceeded());
    }
}
