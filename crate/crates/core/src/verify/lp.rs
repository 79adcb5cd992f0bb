//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Every optimal answer carries dual multipliers, and [`check_certificate`]
//! verifies primal feasibility, dual feasibility and equal objective values
//! against the original problem data. Infeasible answers carry a Farkas
//! vector checked by [`check_farkas`].

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::{CtpError, Limits, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// `min|max c.x` subject to rows, with each variable either `>= 0` or free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    nvars: usize,
    free: Vec<bool>,
    rows: Vec<LpRow>,
    objective: Vec<Rational>,
    sense: Sense,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// Multipliers of the rows for the problem in minimization form.
    pub dual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }
}

impl LinearProgram {
    /// A problem with `nvars` nonnegative variables and zero objective.
    pub fn new(nvars: usize, sense: Sense) -> Self {
        LinearProgram {
            nvars,
            free: vec![false; nvars],
            rows: Vec::new(),
            objective: vec![Rational::zero(); nvars],
            sense,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[LpRow] {
        &self.rows
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn is_free(&self, j: usize) -> bool {
        self.free[j]
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn set_objective(&mut self, j: usize, c: Rational) {
        self.objective[j] = c;
    }

    pub fn set_objective_dense(&mut self, c: &[Rational]) {
        assert_eq!(c.len(), self.nvars);
        self.objective = c.to_vec();
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, rel: Relation, rhs: Rational) {
        let coeffs: Vec<(usize, Rational)> = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        assert!(coeffs.iter().all(|(j, _)| *j < self.nvars), "variable index out of range");
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    pub fn add_dense_row(&mut self, coeffs: &[Rational], rel: Relation, rhs: Rational) {
        self.add_row(coeffs.iter().cloned().enumerate().collect(), rel, rhs);
    }

    fn min_form_objective(&self) -> Vec<Rational> {
        match self.sense {
            Sense::Min => self.objective.clone(),
            Sense::Max => self.objective.iter().map(|c| -c).collect(),
        }
    }

    pub fn solve(&self, limits: &Limits) -> Result<LpOutcome> {
        Tableau::build(self, limits)?.run(self)
    }
}

struct Tableau {
    m: usize,
    /// Structural columns: (original variable, sign).
    structural: Vec<(usize, bool)>,
    nslack: usize,
    nart: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Column that was basic for each row at the start.
    init_col: Vec<usize>,
    row_sign: Vec<bool>,
    phase1: Vec<Rational>,
    phase2: Vec<Rational>,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.structural.len() + self.nslack + self.nart
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.structural.len() + self.nslack
    }

    fn build(lp: &LinearProgram, limits: &Limits) -> Result<Tableau> {
        let mut structural = Vec::new();
        let mut col_of = vec![(0usize, None); lp.nvars];
        for (j, col) in col_of.iter_mut().enumerate() {
            col.0 = structural.len();
            structural.push((j, true));
            if lp.free[j] {
                col.1 = Some(structural.len());
                structural.push((j, false));
            }
        }
        let m = lp.rows.len();
        let mut row_sign = Vec::with_capacity(m);
        let mut rels = Vec::with_capacity(m);
        for row in &lp.rows {
            let neg = row.rhs.is_negative();
            row_sign.push(!neg);
            rels.push(match (row.rel, neg) {
                (Relation::Eq, _) => Relation::Eq,
                (Relation::Le, false) | (Relation::Ge, true) => Relation::Le,
                (Relation::Ge, false) | (Relation::Le, true) => Relation::Ge,
            });
        }
        let nslack = rels.iter().filter(|r| **r != Relation::Eq).count();
        let nart = rels.iter().filter(|r| **r != Relation::Le).count();
        let ns = structural.len();
        let ncols = ns + nslack + nart;
        if ncols > limits.max_lp_vars {
            return Err(CtpError::CapExceeded {
                what: "LP size",
                limit: limits.max_lp_vars as u64,
            });
        }
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = ns;
        let mut art = ns + nslack;
        for (i, row) in lp.rows.iter().enumerate() {
            let mut t = vec![Rational::zero(); ncols + 1];
            let sign = if row_sign[i] { Rational::one() } else { -Rational::one() };
            for (j, v) in &row.coeffs {
                let v = v * &sign;
                let (plus, minus) = col_of[*j];
                if let Some(mc) = minus {
                    t[mc] -= &v;
                }
                t[plus] += v;
            }
            t[ncols] = &row.rhs * &sign;
            match rels[i] {
                Relation::Le => {
                    t[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    t[slack] = -Rational::one();
                    slack += 1;
                    t[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    t[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(t);
        }
        let c = lp.min_form_objective();
        let mut phase2 = vec![Rational::zero(); ncols + 1];
        for (k, (j, plus)) in structural.iter().enumerate() {
            phase2[k] = if *plus { c[*j].clone() } else { -c[*j].clone() };
        }
        let mut phase1 = vec![Rational::zero(); ncols + 1];
        for v in phase1.iter_mut().take(ncols).skip(ns + nslack) {
            *v = Rational::one();
        }
        let init_col = basis.clone();
        let mut tab = Tableau {
            m,
            structural,
            nslack,
            nart,
            rows,
            basis,
            init_col,
            row_sign,
            phase1,
            phase2,
        };
        // price out the initial basis
        for r in 0..m {
            let b = tab.basis[r];
            for obj in [&mut tab.phase1, &mut tab.phase2] {
                if !obj[b].is_zero() {
                    let f = obj[b].clone();
                    for (o, v) in obj.iter_mut().zip(&tab.rows[r]) {
                        if !v.is_zero() {
                            *o -= &f * v;
                        }
                    }
                }
            }
        }
        Ok(tab)
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        if !piv.is_one() {
            for v in self.rows[p].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let nz: Vec<usize> = (0..self.rows[p].len()).filter(|&k| !self.rows[p][k].is_zero()).collect();
        let prow = std::mem::take(&mut self.rows[p]);
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == p || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &k in &nz {
                row[k] -= &f * &prow[k];
            }
        }
        for obj in [&mut self.phase1, &mut self.phase2] {
            if obj[q].is_zero() {
                continue;
            }
            let f = obj[q].clone();
            for &k in &nz {
                obj[k] -= &f * &prow[k];
            }
        }
        self.rows[p] = prow;
        self.basis[p] = q;
    }

    /// Bland's rule on the given objective row. Returns false if unbounded.
    fn optimize(&mut self, phase_one: bool) -> bool {
        let ncols = self.ncols();
        loop {
            let obj = if phase_one { &self.phase1 } else { &self.phase2 };
            let entering = (0..ncols).find(|&k| !self.is_artificial(k) && obj[k].is_negative());
            let Some(q) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.m {
                let a = &self.rows[r][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][ncols] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q),
                None => return false,
            }
        }
    }

    fn duals(&self, obj: &[Rational], phase_one: bool) -> Vec<Rational> {
        (0..self.m)
            .map(|i| {
                let col = self.init_col[i];
                let cost = if phase_one && self.is_artificial(col) {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                let y = cost - &obj[col];
                if self.row_sign[i] {
                    y
                } else {
                    -y
                }
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpOutcome> {
        let ncols = self.ncols();
        if self.nart > 0 {
            self.optimize(true);
            let infeasibility = -self.phase1[ncols].clone();
            if infeasibility.is_positive() {
                let farkas = self.duals(&self.phase1.clone(), true);
                return Ok(LpOutcome::Infeasible { farkas });
            }
            for r in 0..self.m {
                if !self.is_artificial(self.basis[r]) {
                    continue;
                }
                if let Some(q) = (0..ncols).find(|&k| !self.is_artificial(k) && !self.rows[r][k].is_zero()) {
                    self.pivot(r, q);
                }
            }
        }
        if !self.optimize(false) {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![Rational::zero(); lp.nvars];
        for r in 0..self.m {
            let b = self.basis[r];
            if b < self.structural.len() {
                let (j, plus) = self.structural[b];
                if plus {
                    x[j] += &self.rows[r][ncols];
                } else {
                    x[j] -= &self.rows[r][ncols];
                }
            }
        }
        let value: Rational = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        let dual = self.duals(&self.phase2.clone(), false);
        Ok(LpOutcome::Optimal(LpSolution { value, x, dual }))
    }
}

fn row_value(row: &LpRow, x: &[Rational]) -> Rational {
    row.coeffs.iter().map(|(j, v)| v * &x[*j]).sum()
}

fn dual_sign_ok(rel: Relation, y: &Rational) -> bool {
    match rel {
        Relation::Ge => !y.is_negative(),
        Relation::Le => !y.is_positive(),
        Relation::Eq => true,
    }
}

fn column_products(lp: &LinearProgram, y: &[Rational]) -> Vec<Rational> {
    let mut aty = vec![Rational::zero(); lp.nvars];
    for (row, yi) in lp.rows.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (j, v) in &row.coeffs {
            aty[*j] += v * yi;
        }
    }
    aty
}

/// Verifies an optimality certificate against the original data.
pub fn check_certificate(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.x.len() != lp.nvars || sol.dual.len() != lp.rows.len() {
        return false;
    }
    for (j, v) in sol.x.iter().enumerate() {
        if !lp.free[j] && v.is_negative() {
            return false;
        }
    }
    for row in &lp.rows {
        let lhs = row_value(row, &sol.x);
        let ok = match row.rel {
            Relation::Le => lhs <= row.rhs,
            Relation::Ge => lhs >= row.rhs,
            Relation::Eq => lhs == row.rhs,
        };
        if !ok {
            return false;
        }
    }
    if !lp.rows.iter().zip(&sol.dual).all(|(r, y)| dual_sign_ok(r.rel, y)) {
        return false;
    }
    let c = lp.min_form_objective();
    let aty = column_products(lp, &sol.dual);
    for j in 0..lp.nvars {
        let reduced = &c[j] - &aty[j];
        if lp.free[j] && !reduced.is_zero() || !lp.free[j] && reduced.is_negative() {
            return false;
        }
    }
    let primal: Rational = c.iter().zip(&sol.x).map(|(a, b)| a * b).sum();
    let dual: Rational = lp.rows.iter().zip(&sol.dual).map(|(r, y)| &r.rhs * y).sum();
    let value_ok = match lp.sense {
        Sense::Min => sol.value == primal,
        Sense::Max => sol.value == -primal.clone(),
    };
    value_ok && primal == dual
}

/// Verifies that `y` proves infeasibility: `y^T A` is `<= 0` on nonnegative
/// and `= 0` on free variables, row signs match the relations, and `y.b > 0`.
pub fn check_farkas(lp: &LinearProgram, y: &[Rational]) -> bool {
    if y.len() != lp.rows.len() {
        return false;
    }
    if !lp.rows.iter().zip(y).all(|(r, v)| dual_sign_ok(r.rel, v)) {
        return false;
    }
    let aty = column_products(lp, y);
    for (free, v) in lp.free.iter().zip(&aty) {
        if *free && !v.is_zero() || !*free && v.is_positive() {
            return false;
        }
    }
    let by: Rational = lp.rows.iter().zip(y).map(|(r, v)| &r.rhs * v).sum();
    by.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn solved(lp: &LinearProgram) -> LpSolution {
        match lp.solve(&lim()).unwrap() {
            LpOutcome::Optimal(s) => {
                assert!(check_certificate(lp, &s), "certificate rejected: {s:?}");
                s
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn single_equation() {
        let mut lp = LinearProgram::new(1, Sense::Min);
        lp.set_free(0);
        lp.add_row(vec![(0, int(1))], Relation::Eq, int(1));
        let s = solved(&lp);
        assert_eq!(s.value, int(0));
        assert_eq!(s.x, vec![int(1)]);
    }

    #[test]
    fn lower_bound() {
        let mut lp = LinearProgram::new(1, Sense::Min);
        lp.set_free(0);
        lp.set_objective(0, int(1));
        lp.add_row(vec![(0, int(1))], Relation::Ge, int(1));
        assert_eq!(solved(&lp).value, int(1));
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18
        let mut lp = LinearProgram::new(2, Sense::Max);
        lp.set_objective_dense(&[int(3), int(5)]);
        lp.add_row(vec![(0, int(1))], Relation::Le, int(4));
        lp.add_row(vec![(1, int(2))], Relation::Le, int(12));
        lp.add_row(vec![(0, int(3)), (1, int(2))], Relation::Le, int(18));
        let s = solved(&lp);
        assert_eq!(s.value, int(36));
        assert_eq!(s.x, vec![int(2), int(6)]);
    }

    #[test]
    fn fractional_optimum() {
        let mut lp = LinearProgram::new(2, Sense::Min);
        lp.set_objective_dense(&[int(-1), int(-1)]);
        lp.add_row(vec![(0, int(2)), (1, int(1))], Relation::Le, int(2));
        lp.add_row(vec![(0, int(1)), (1, int(3))], Relation::Le, int(3));
        let s = solved(&lp);
        assert_eq!(s.value, ratio(-7, 5));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Min);
        lp.add_row(vec![(0, int(1))], Relation::Ge, int(2));
        lp.add_row(vec![(0, int(1))], Relation::Le, int(1));
        match lp.solve(&lim()).unwrap() {
            LpOutcome::Infeasible { farkas } => assert!(check_farkas(&lp, &farkas)),
            other => panic!("{other:?}"),
        }
        let mut lp = LinearProgram::new(1, Sense::Max);
        lp.set_objective(0, int(1));
        assert_eq!(lp.solve(&lim()).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equations() {
        let mut lp = LinearProgram::new(3, Sense::Min);
        lp.set_objective_dense(&[int(1), int(2), int(3)]);
        lp.add_row(vec![(0, int(1)), (1, int(1)), (2, int(1))], Relation::Eq, int(1));
        lp.add_row(vec![(0, int(2)), (1, int(2)), (2, int(2))], Relation::Eq, int(2));
        lp.add_row(vec![(0, int(1))], Relation::Le, ratio(1, 2));
        let s = solved(&lp);
        assert_eq!(s.value, ratio(3, 2));
    }

    #[test]
    fn negative_rhs_and_free_variables() {
        let mut lp = LinearProgram::new(2, Sense::Max);
        lp.set_free(0);
        lp.set_free(1);
        lp.set_objective_dense(&[int(1), int(1)]);
        lp.add_row(vec![(0, int(-1))], Relation::Ge, int(-3));
        lp.add_row(vec![(0, int(1)), (1, int(-1))], Relation::Eq, int(-5));
        let s = solved(&lp);
        assert_eq!(s.x, vec![int(3), int(8)]);
        assert_eq!(s.value, int(11));
    }

    #[test]
    fn size_cap() {
        let lp = LinearProgram::new(10, Sense::Min);
        let small = Limits {
            max_lp_vars: 5,
            ..Limits::default()
        };
        assert!(lp.solve(&small).unwrap_err().is_cap_exceeded());
    }

    fn brute_force_box_min(c: &[i64], cuts: &[(Vec<i64>, i64)]) -> Option<Rational> {
        // best 0/1 point of the cut box
        let k = c.len();
        let mut best: Option<Rational> = None;
        for mask in 0u32..1 << k {
            let x: Vec<i64> = (0..k).map(|j| (mask >> j & 1) as i64).collect();
            if cuts.iter().all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() <= *b) {
                let v = int(c.iter().zip(&x).map(|(p, q)| p * q).sum());
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn box_problems_certify(c in proptest::collection::vec(-5i64..6, 3),
                                a in proptest::collection::vec(-3i64..4, 3),
                                b in 0i64..4) {
            let mut lp = LinearProgram::new(3, Sense::Min);
            lp.set_objective_dense(&c.iter().map(|&v| int(v)).collect::<Vec<_>>());
            for j in 0..3 {
                lp.add_row(vec![(j, int(1))], Relation::Le, int(1));
            }
            lp.add_dense_row(&a.iter().map(|&v| int(v)).collect::<Vec<_>>(), Relation::Le, int(b));
            let s = solved(&lp);
            // the LP relaxation is at most the best 0/1 point
            if let Some(ip) = brute_force_box_min(&c, &[(a.clone(), b)]) {
                prop_assert!(s.value <= ip);
            }
            if a.iter().all(|&v| v >= 0) {
                // no cut binds below the origin, so the integer optimum is the LP one
                let unconstrained: i64 = c.iter().filter(|&&v| v < 0).sum();
                prop_assert!(s.value >= int(unconstrained));
            }
        }
    }
}
