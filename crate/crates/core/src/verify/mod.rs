//! Exact polyhedral verification: LP, affine dimension, validity and facet
//! checks, vertex enumeration, hull membership, smallest faces and the
//! vertex-pair test that every cyclic transversal polytope passes.

pub mod dd;
pub mod linalg;
pub mod lp;

use num_traits::{One, Signed, Zero};

use crate::config::BlockConfiguration;
use crate::ineq::{transversal_equations, LinEq, LinIneq};
use crate::rational::{int, Rational, RationalPoint};
use crate::{CtpError, Limits, Result};

pub use linalg::affine_dim;
pub use lp::{check_certificate, check_farkas, LinearProgram, LpOutcome, LpSolution, Relation, Sense};

/// A dense constraint `coeffs . x (=|>=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// `{x in R^dim : equations hold, inequalities (>=) hold}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub equations: Vec<DenseConstraint>,
    pub inequalities: Vec<DenseConstraint>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope {
            dim,
            equations: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn add_equation(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.dim);
        self.equations.push(DenseConstraint { coeffs, rhs });
    }

    pub fn add_inequality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.dim);
        self.inequalities.push(DenseConstraint { coeffs, rhs });
    }

    pub fn add_lin_eq(&mut self, b: &BlockConfiguration, eq: &LinEq) -> Result<()> {
        self.check_space(b)?;
        let coeffs = eq.coeffs.dense(b)?;
        self.add_equation(coeffs, eq.rhs.clone());
        Ok(())
    }

    pub fn add_lin_ineq(&mut self, b: &BlockConfiguration, q: &LinIneq) -> Result<()> {
        self.check_space(b)?;
        let coeffs = q.coeffs.dense(b)?;
        self.add_inequality(coeffs, q.rhs.clone());
        Ok(())
    }

    fn check_space(&self, b: &BlockConfiguration) -> Result<()> {
        if b.size() != self.dim {
            return Err(CtpError::DimensionMismatch(format!(
                "polytope lives in dimension {}, configuration has size {}",
                self.dim,
                b.size()
            )));
        }
        Ok(())
    }

    /// Nonnegativity `x_j >= 0` for every coordinate.
    pub fn add_nonnegativity(&mut self) {
        for j in 0..self.dim {
            let mut e = vec![Rational::zero(); self.dim];
            e[j] = Rational::one();
            self.add_inequality(e, Rational::zero());
        }
    }

    /// The transversal polytope: transversal equations and nonnegativity.
    pub fn transversal_polytope(b: &BlockConfiguration) -> Self {
        let mut h = HPolytope::new(b.size());
        for eq in transversal_equations(b) {
            h.add_lin_eq(b, &eq).expect("indices of the same configuration");
        }
        h.add_nonnegativity();
        h
    }

    pub fn contains(&self, x: &RationalPoint) -> bool {
        x.len() == self.dim
            && self.equations.iter().all(|c| x.dot(&c.coeffs) == c.rhs)
            && self.inequalities.iter().all(|c| x.dot(&c.coeffs) >= c.rhs)
    }

    /// An LP over this polytope. Inequalities of the form `x_j >= 0` become
    /// variable bounds; all other variables are free.
    pub fn to_lp(&self, objective: &[Rational], sense: Sense) -> LinearProgram {
        let mut bounded = vec![false; self.dim];
        let mut rows = Vec::new();
        for c in &self.inequalities {
            let nz: Vec<usize> = (0..self.dim).filter(|&j| !c.coeffs[j].is_zero()).collect();
            if nz.len() == 1 && c.coeffs[nz[0]].is_positive() && c.rhs.is_zero() {
                bounded[nz[0]] = true;
            } else {
                rows.push(c);
            }
        }
        let mut lp = LinearProgram::new(self.dim, sense);
        for (j, b) in bounded.iter().enumerate() {
            if !b {
                lp.set_free(j);
            }
        }
        lp.set_objective_dense(objective);
        for c in &self.equations {
            lp.add_dense_row(&c.coeffs, Relation::Eq, c.rhs.clone());
        }
        for c in rows {
            lp.add_dense_row(&c.coeffs, Relation::Ge, c.rhs.clone());
        }
        lp
    }

    fn as_pairs(list: &[DenseConstraint]) -> Vec<(Vec<Rational>, Rational)> {
        list.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect()
    }
}

/// The convex hull of a finite point list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    pub vertices: Vec<RationalPoint>,
}

impl VPolytope {
    pub fn new(vertices: Vec<RationalPoint>) -> Self {
        VPolytope { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> i64 {
        affine_dim(&self.vertices)
    }
}

/// Optimizes over an H-polytope.
pub fn lp_solve(objective: &[Rational], h: &HPolytope, sense: Sense, limits: &Limits) -> Result<LpOutcome> {
    if objective.len() != h.dim {
        return Err(CtpError::DimensionMismatch("objective length".into()));
    }
    h.to_lp(objective, sense).solve(limits)
}

/// Result of a validity check over a vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    /// Smallest left-hand value over the vertices.
    pub min_lhs: Option<Rational>,
    /// Index of the first vertex attaining the minimum.
    pub worst: Option<usize>,
}

pub fn is_valid(coeffs: &[Rational], rhs: &Rational, v: &VPolytope) -> ValidityReport {
    let mut best: Option<(usize, Rational)> = None;
    for (k, p) in v.vertices.iter().enumerate() {
        let lhs = p.dot(coeffs);
        if best.as_ref().is_none_or(|(_, b)| lhs < *b) {
            best = Some((k, lhs));
        }
    }
    match best {
        None => ValidityReport {
            valid: true,
            min_lhs: None,
            worst: None,
        },
        Some((k, lhs)) => ValidityReport {
            valid: lhs >= *rhs,
            min_lhs: Some(lhs),
            worst: Some(k),
        },
    }
}

/// True iff the valid inequality is tight on a face of dimension one less
/// than the polytope.
pub fn is_facet(coeffs: &[Rational], rhs: &Rational, v: &VPolytope) -> Result<bool> {
    let report = is_valid(coeffs, rhs, v);
    if !report.valid {
        return Err(CtpError::InvalidInequality(format!(
            "violated at vertex {}",
            report.worst.unwrap_or(0)
        )));
    }
    let tight: Vec<RationalPoint> = v.vertices.iter().filter(|p| p.dot(coeffs) == *rhs).cloned().collect();
    Ok(affine_dim(&tight) == v.dim() - 1)
}

/// Vertex enumeration by double description; the result is sorted.
pub fn dd_vertices(h: &HPolytope, limits: &Limits) -> Result<VPolytope> {
    let r = dd::enumerate_vertices(
        h.dim,
        &HPolytope::as_pairs(&h.equations),
        &HPolytope::as_pairs(&h.inequalities),
        limits,
    )?;
    Ok(VPolytope::new(r.vertices))
}

fn hull_lp(z: &RationalPoint, v: &VPolytope) -> Result<LinearProgram> {
    if v.vertices.iter().any(|p| p.len() != z.len()) {
        return Err(CtpError::DimensionMismatch("point and vertices differ in length".into()));
    }
    let k = v.len();
    let mut lp = LinearProgram::new(k, Sense::Max);
    for c in 0..z.len() {
        let coeffs: Vec<(usize, Rational)> = (0..k)
            .filter(|&w| !v.vertices[w][c].is_zero())
            .map(|w| (w, v.vertices[w][c].clone()))
            .collect();
        lp.add_row(coeffs, Relation::Eq, z[c].clone());
    }
    lp.add_row((0..k).map(|w| (w, Rational::one())).collect(), Relation::Eq, Rational::one());
    Ok(lp)
}

/// Convex weights expressing `z` over `v`, if any.
pub fn hull_weights(z: &RationalPoint, v: &VPolytope, limits: &Limits) -> Result<Option<Vec<Rational>>> {
    if v.is_empty() {
        return Ok(None);
    }
    let lp = hull_lp(z, v)?;
    Ok(lp.solve(limits)?.optimal().map(|s| s.x.clone()))
}

pub fn hull_membership(z: &RationalPoint, v: &VPolytope, limits: &Limits) -> Result<bool> {
    Ok(hull_weights(z, v, limits)?.is_some())
}

/// Indices of the vertices of the smallest face containing `z`: those with
/// positive weight in some convex representation of `z`.
///
/// Repeatedly maximizes the total weight on vertices not yet known to be in
/// the support; when that maximum is zero, no further vertex can carry weight.
pub fn smallest_face_support(z: &RationalPoint, v: &VPolytope, limits: &Limits) -> Result<Vec<usize>> {
    if v.is_empty() {
        return Err(CtpError::InvalidPoint("empty vertex list".into()));
    }
    let base = hull_lp(z, v)?;
    let mut support = vec![false; v.len()];
    loop {
        let mut lp = base.clone();
        let mut any = false;
        for (w, s) in support.iter().enumerate() {
            if !s {
                lp.set_objective(w, Rational::one());
                any = true;
            }
        }
        if !any {
            break;
        }
        let sol = match lp.solve(limits)? {
            LpOutcome::Optimal(s) => s,
            LpOutcome::Infeasible { .. } => {
                return Err(CtpError::InvalidPoint("point lies outside the hull".into()));
            }
            LpOutcome::Unbounded => unreachable!("weights are bounded"),
        };
        if !sol.value.is_positive() {
            break;
        }
        for (w, lam) in sol.x.iter().enumerate() {
            if lam.is_positive() {
                support[w] = true;
            }
        }
    }
    Ok((0..v.len()).filter(|&w| support[w]).collect())
}

/// Outcome of the vertex-pair test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecessaryOutcome {
    /// The vertex count is a power of two; nothing to check.
    PassVacuous,
    /// Every vertex pair lies in a common proper face.
    Pass,
    /// The midpoint of this pair lies in the relative interior.
    Fail(usize, usize),
}

impl NecessaryOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self, NecessaryOutcome::Fail(..))
    }
}

/// If the vertex count is not a power of two, every pair of vertices must lie
/// in a common proper face; the first pair that does not is returned.
pub fn ctp_necessary_condition(v: &VPolytope, limits: &Limits) -> Result<NecessaryOutcome> {
    let n = v.len();
    if n == 0 || n.is_power_of_two() {
        return Ok(NecessaryOutcome::PassVacuous);
    }
    let pairs = (n * (n - 1) / 2) as u64;
    if pairs > limits.max_transversals {
        return Err(CtpError::CapExceeded {
            what: "vertex pairs",
            limit: limits.max_transversals,
        });
    }
    for a in 0..n {
        for b in a + 1..n {
            let mid = v.vertices[a].midpoint(&v.vertices[b]);
            if smallest_face_support(&mid, v, limits)?.len() == n {
                return Ok(NecessaryOutcome::Fail(a, b));
            }
        }
    }
    Ok(NecessaryOutcome::Pass)
}

/// Which side of a comparison a discrepancy belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// A vertex of the H-description missing from the vertex list.
    HOnly,
    /// A listed vertex that is not a vertex of the H-description.
    VOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityReport {
    pub equal: bool,
    pub witness: Option<(Side, RationalPoint)>,
    pub h_vertices: usize,
}

/// Compares `conv(V)` with the H-polytope through its vertex set.
pub fn polytope_equal(v: &VPolytope, h: &HPolytope, limits: &Limits) -> Result<EqualityReport> {
    let hv = dd_vertices(h, limits)?;
    let mut listed = v.vertices.clone();
    listed.sort();
    listed.dedup();
    let listed_set: std::collections::HashSet<&RationalPoint> = listed.iter().collect();
    let h_set: std::collections::HashSet<&RationalPoint> = hv.vertices.iter().collect();
    let witness = hv
        .vertices
        .iter()
        .find(|p| !listed_set.contains(p))
        .map(|p| (Side::HOnly, p.clone()))
        .or_else(|| {
            listed
                .iter()
                .find(|p| !h_set.contains(p))
                .map(|p| (Side::VOnly, p.clone()))
        });
    Ok(EqualityReport {
        equal: witness.is_none(),
        witness,
        h_vertices: hv.len(),
    })
}

/// Tours of `K_q` as edge-incidence vectors over edges `(a, b)`, `a < b`, in
/// lexicographic order. Tours start at node 1 and are listed by the
/// lexicographic order of the remaining visiting sequence, one orientation
/// each.
pub fn tsp_vertices(q: usize) -> Vec<RationalPoint> {
    assert!(q >= 3);
    let edge = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // index of (a, b) among pairs in lexicographic order
        a * q - a * (a + 1) / 2 + (b - a - 1)
    };
    let m = q * (q - 1) / 2;
    let mut out = Vec::new();
    let mut rest: Vec<usize> = (1..q).collect();
    loop {
        if rest[0] < rest[q - 2] {
            let mut x = vec![0i64; m];
            let mut prev = 0;
            for &v in &rest {
                x[edge(prev, v)] = 1;
                prev = v;
            }
            x[edge(prev, 0)] = 1;
            out.push(RationalPoint::from_ints(&x));
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Bases of the uniform matroid `U_{k,m}` as 0/1 vectors, subsets in
/// lexicographic order.
pub fn uniform_matroid_vertices(k: usize, m: usize) -> Vec<RationalPoint> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut x = vec![Rational::zero(); m];
        for &p in &pick {
            x[p] = int(1);
        }
        out.push(RationalPoint(x));
        let Some(i) = (0..k).rev().find(|&i| pick[i] < m - k + i) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::vertices;
    use crate::ineq::{all_los, basis_sum_inequality, basis_sum_witness, los, LosSpec};
    use crate::rational::ratio;

    fn lim() -> Limits {
        Limits::default()
    }

    fn full_v(d: usize, n: usize) -> (BlockConfiguration, VPolytope) {
        let b = BlockConfiguration::full(d, n).unwrap();
        let v = VPolytope::new(vertices(&b, &lim()).unwrap());
        (b, v)
    }

    fn unit(dim: usize, j: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); dim];
        e[j] = Rational::one();
        e
    }

    #[test]
    fn lp_solve_examples() {
        let mut h = HPolytope::new(1);
        h.add_equation(vec![int(1)], int(1));
        let s = lp_solve(&[int(0)], &h, Sense::Min, &lim()).unwrap();
        assert_eq!(s.optimal().unwrap().x, vec![int(1)]);
        let mut h = HPolytope::new(1);
        h.add_inequality(vec![int(1)], int(1));
        let s = lp_solve(&[int(1)], &h, Sense::Min, &lim()).unwrap();
        assert_eq!(s.optimal().unwrap().value, int(1));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(full_v(1, 3).1.dim(), 3);
        assert_eq!(full_v(2, 3).1.dim(), 9);
        assert_eq!(affine_dim(&[RationalPoint::from_ints(&[4, 4])]), 0);
    }

    #[test]
    fn validity_examples() {
        let (b, v) = full_v(2, 4);
        for (_, q) in all_los(&b, false, &lim()).unwrap() {
            let c = q.coeffs.dense(&b).unwrap();
            assert!(is_valid(&c, &q.rhs, &v).valid);
            let neg = q.negated();
            let r = is_valid(&neg.coeffs.dense(&b).unwrap(), &neg.rhs, &v);
            assert!(!r.valid);
            assert!(r.worst.is_some());
        }
        let (b, v) = full_v(3, 3);
        let q = basis_sum_inequality(&b).unwrap();
        assert!(is_valid(&q.coeffs.dense(&b).unwrap(), &q.rhs, &v).valid);
    }

    #[test]
    fn facet_examples() {
        let (b, v) = full_v(2, 3);
        for (_, q) in all_los(&b, false, &lim()).unwrap() {
            assert!(is_facet(&q.coeffs.dense(&b).unwrap(), &q.rhs, &v).unwrap());
        }
        let (b, v) = full_v(1, 3);
        assert!(!is_facet(&unit(b.size(), 0), &int(0), &v).unwrap());
        let (b, v) = full_v(1, 4);
        assert!(is_facet(&unit(b.size(), 0), &int(0), &v).unwrap());
        assert!(is_facet(&unit(b.size(), 0), &int(1), &v).is_err());
    }

    #[test]
    fn parity_description_by_dd() {
        let (b, v) = full_v(1, 3);
        let mut h = HPolytope::transversal_polytope(&b);
        for (_, q) in all_los(&b, false, &lim()).unwrap() {
            h.add_lin_ineq(&b, &q).unwrap();
        }
        let got = dd_vertices(&h, &lim()).unwrap();
        let mut expected = v.vertices.clone();
        expected.sort();
        assert_eq!(got.vertices, expected);
        let tp = dd_vertices(&HPolytope::transversal_polytope(&b), &lim()).unwrap();
        assert_eq!(tp.len(), 8);
    }

    #[test]
    fn hull_examples() {
        let (b, v) = full_v(3, 3);
        assert!(hull_membership(&v.vertices[5], &v, &lim()).unwrap());
        let bary = RationalPoint::barycenter(&v.vertices);
        assert!(hull_membership(&bary, &v, &lim()).unwrap());
        let x = basis_sum_witness(&b).unwrap();
        assert!(!hull_membership(&x, &v, &lim()).unwrap());
    }

    #[test]
    fn face_support_examples() {
        let (_, v) = full_v(1, 3);
        assert_eq!(smallest_face_support(&v.vertices[2], &v, &lim()).unwrap(), vec![2]);
        let bary = RationalPoint::barycenter(&v.vertices);
        assert_eq!(smallest_face_support(&bary, &v, &lim()).unwrap().len(), 4);
        let u = VPolytope::new(uniform_matroid_vertices(2, 4));
        let mid = u.vertices[0].midpoint(&u.vertices[5]);
        assert_eq!(smallest_face_support(&mid, &u, &lim()).unwrap().len(), 6);
        let edge_mid = u.vertices[0].midpoint(&u.vertices[1]);
        assert_eq!(smallest_face_support(&edge_mid, &u, &lim()).unwrap(), vec![0, 1]);
        let outside = RationalPoint::from_ints(&[1, 1, 1, 1]);
        assert!(smallest_face_support(&outside, &u, &lim()).is_err());
    }

    #[test]
    fn necessary_condition_examples() {
        let tsp = VPolytope::new(tsp_vertices(5));
        assert_eq!(tsp.len(), 12);
        let outcome = ctp_necessary_condition(&tsp, &lim()).unwrap();
        let NecessaryOutcome::Fail(a, b) = outcome else {
            panic!("expected failure");
        };
        assert_eq!(a, 0);
        // tour 1-3-5-2-4: edges 13, 35, 25, 24, 14
        let idx = |a: usize, b: usize| (a - 1) * 5 - (a - 1) * a / 2 + (b - a - 1);
        let mut expected = vec![0i64; 10];
        for (p, q) in [(1, 3), (3, 5), (2, 5), (2, 4), (1, 4)] {
            expected[idx(p, q)] = 1;
        }
        assert_eq!(tsp.vertices[b], RationalPoint::from_ints(&expected));
        let u = VPolytope::new(uniform_matroid_vertices(2, 4));
        assert_eq!(ctp_necessary_condition(&u, &lim()).unwrap(), NecessaryOutcome::Fail(0, 5));
        let (_, v) = full_v(1, 3);
        assert_eq!(ctp_necessary_condition(&v, &lim()).unwrap(), NecessaryOutcome::PassVacuous);
        let b = BlockConfiguration::from_strs(2, &[&["00", "01", "10"], &["00", "01", "10"]]).unwrap();
        let v = VPolytope::new(vertices(&b, &lim()).unwrap());
        assert_eq!(v.len(), 3);
        assert_eq!(ctp_necessary_condition(&v, &lim()).unwrap(), NecessaryOutcome::Pass);
    }

    #[test]
    fn equality_examples() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["00", "01", "11"], &["01", "10", "11"]]).unwrap();
        let v = VPolytope::new(vertices(&b, &lim()).unwrap());
        let mut h = HPolytope::transversal_polytope(&b);
        for (_, q) in all_los(&b, false, &lim()).unwrap() {
            h.add_lin_ineq(&b, &q).unwrap();
        }
        let r = polytope_equal(&v, &h, &lim()).unwrap();
        assert!(r.equal, "{r:?}");
        let mut weak = HPolytope::transversal_polytope(&b);
        weak.add_lin_ineq(&b, &los(&b, &LosSpec::new("01".parse().unwrap(), [0]).unwrap()).unwrap()).unwrap();
        let r = polytope_equal(&v, &weak, &lim()).unwrap();
        assert!(!r.equal);
        let (side, p) = r.witness.unwrap();
        assert_eq!(side, Side::HOnly);
        assert!(weak.contains(&p));
    }

    #[test]
    fn dd_round_trip_through_facets() {
        // H-description of a small polytope from its facets, then back
        let pts = vec![
            RationalPoint::from_ints(&[0, 0]),
            RationalPoint::from_ints(&[2, 0]),
            RationalPoint::from_ints(&[0, 1]),
            RationalPoint(vec![ratio(3, 2), ratio(1, 2)]),
        ];
        let v = VPolytope::new(pts.clone());
        let mut h = HPolytope::new(2);
        // candidate facet normals from the small integer box, kept if valid and facet
        for a in -3i64..=3 {
            for c in -3i64..=3 {
                if a == 0 && c == 0 {
                    continue;
                }
                let coeffs = vec![int(a), int(c)];
                let rhs = pts.iter().map(|p| p.dot(&coeffs)).min().unwrap();
                if is_facet(&coeffs, &rhs, &v).unwrap() {
                    h.add_inequality(coeffs, rhs);
                }
            }
        }
        let mut expected = pts;
        expected.sort();
        assert_eq!(dd_vertices(&h, &lim()).unwrap().vertices, expected);
    }
}
