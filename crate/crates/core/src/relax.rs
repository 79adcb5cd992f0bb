//! Rank-`r` relaxations: preimages of cyclic transversal polytopes of images
//! under linear maps, represented through the image vertex lists.

use std::collections::HashSet;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::config::BlockConfiguration;
use crate::enumerate::vertices;
use crate::gf2::{canonical_rank_maps, BitMatrix};
use crate::ineq::{check_in_tp, transversal_equations, LinIneq};
use crate::rational::{Rational, RationalPoint};
use crate::verify::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::verify::{hull_membership, is_valid, VPolytope};
use crate::{CtpError, Limits, Result};

/// `Phi^{-1}(CTP(phi(B)))` as the image configuration, its vertices, and the
/// image position of every base coordinate.
#[derive(Clone, Debug)]
pub struct PhiRelaxation {
    base: BlockConfiguration,
    phi: BitMatrix,
    image: BlockConfiguration,
    image_vertices: VPolytope,
    positions: Vec<usize>,
}

impl PhiRelaxation {
    pub fn new(b: &BlockConfiguration, phi: &BitMatrix, limits: &Limits) -> Result<Self> {
        let image = b.image(phi)?;
        let image_vertices = VPolytope::new(vertices(&image, limits)?);
        let positions = b.image_positions(phi, &image);
        Ok(PhiRelaxation {
            base: b.clone(),
            phi: phi.clone(),
            image,
            image_vertices,
            positions,
        })
    }

    pub fn base(&self) -> &BlockConfiguration {
        &self.base
    }

    pub fn phi(&self) -> &BitMatrix {
        &self.phi
    }

    pub fn image(&self) -> &BlockConfiguration {
        &self.image
    }

    pub fn image_vertices(&self) -> &VPolytope {
        &self.image_vertices
    }

    /// The induced map `Phi`.
    pub fn apply(&self, x: &RationalPoint) -> RationalPoint {
        let mut out = RationalPoint::zeros(self.image.size());
        for (v, &p) in x.iter().zip(&self.positions) {
            out.0[p] += v;
        }
        out
    }

    pub fn contains(&self, x: &RationalPoint, limits: &Limits) -> Result<bool> {
        hull_membership(&self.apply(x), &self.image_vertices, limits)
    }
}

pub fn phi_membership(b: &BlockConfiguration, phi: &BitMatrix, x: &RationalPoint, limits: &Limits) -> Result<bool> {
    check_in_tp(b, x)?;
    PhiRelaxation::new(b, phi, limits)?.contains(x, limits)
}

/// Representatives of the rank-`r` maps (`r` clamped to `d`) such that every
/// relaxation they define appears once: maps in row echelon form, further
/// collapsed when they agree on their kernel inside `span(B)`. Maps vanishing
/// on all of `span(B)` are dropped since their relaxation is `TP(B)`.
pub fn rank_r_maps(b: &BlockConfiguration, r: usize, limits: &Limits) -> Result<Vec<BitMatrix>> {
    let d = b.d();
    let r = r.min(d);
    if r == 0 {
        return Ok(Vec::new());
    }
    if d * r >= 64 || (1u64 << (d * r)) > limits.max_maps {
        return Err(CtpError::CapExceeded {
            what: "linear map enumeration",
            limit: limits.max_maps,
        });
    }
    limits.check_width(b.rank())?;
    let span = b.span();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for phi in canonical_rank_maps(d, r) {
        let kernel: Vec<u64> = span
            .iter()
            .filter(|w| phi.apply_unchecked(w).is_zero())
            .map(|w| w.encoding())
            .collect();
        if kernel.len() == span.len() {
            continue;
        }
        if seen.insert(kernel) {
            out.push(phi);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    /// First map (in enumeration order) whose relaxation excludes the point.
    pub violating: Option<BitMatrix>,
}

pub fn rank_r_membership(b: &BlockConfiguration, r: usize, x: &RationalPoint, limits: &Limits) -> Result<MembershipReport> {
    check_in_tp(b, x)?;
    let maps = rank_r_maps(b, r, limits)?;
    let verdicts: Vec<Result<bool>> = maps
        .par_iter()
        .map(|phi| PhiRelaxation::new(b, phi, limits)?.contains(x, limits))
        .collect();
    for (phi, v) in maps.iter().zip(verdicts) {
        if !v? {
            return Ok(MembershipReport {
                member: false,
                violating: Some(phi.clone()),
            });
        }
    }
    Ok(MembershipReport {
        member: true,
        violating: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankValidity {
    pub valid: bool,
    /// Minimum of the left-hand side over the relaxation.
    pub min_lhs: Rational,
    /// A minimizer in the relaxation.
    pub point: RationalPoint,
}

/// Minimizes the inequality's left-hand side over `R^r(B)` with one LP in
/// `x` and a convex multiplier vector per map.
pub fn validity_over_rank_r(b: &BlockConfiguration, r: usize, ineq: &LinIneq, limits: &Limits) -> Result<RankValidity> {
    ineq.check_indices(b)?;
    let relaxations = rank_r_maps(b, r, limits)?
        .par_iter()
        .map(|phi| PhiRelaxation::new(b, phi, limits))
        .collect::<Result<Vec<_>>>()?;
    let n = b.size();
    let total = n + relaxations.iter().map(|p| p.image_vertices.len()).sum::<usize>();
    if total > limits.max_lp_vars {
        return Err(CtpError::CapExceeded {
            what: "LP variables",
            limit: limits.max_lp_vars as u64,
        });
    }
    let mut lp = LinearProgram::new(total, Sense::Min);
    for (j, c) in ineq.coeffs.dense(b)?.into_iter().enumerate() {
        lp.set_objective(j, c);
    }
    for eq in transversal_equations(b) {
        let row = eq
            .coeffs
            .terms()
            .map(|(c, v)| Ok((b.require_index(c)?, v.clone())))
            .collect::<Result<Vec<_>>>()?;
        lp.add_row(row, Relation::Eq, eq.rhs.clone());
    }
    let mut offset = n;
    for rel in &relaxations {
        let verts = &rel.image_vertices.vertices;
        for k in 0..rel.image.size() {
            let mut row: Vec<(usize, Rational)> = (0..n)
                .filter(|&p| rel.positions[p] == k)
                .map(|p| (p, Rational::one()))
                .collect();
            row.extend(
                verts
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v[k].is_zero())
                    .map(|(w, v)| (offset + w, -v[k].clone())),
            );
            lp.add_row(row, Relation::Eq, Rational::zero());
        }
        lp.add_row((0..verts.len()).map(|w| (offset + w, Rational::one())).collect(), Relation::Eq, Rational::one());
        offset += verts.len();
    }
    match lp.solve(limits)? {
        LpOutcome::Optimal(s) => Ok(RankValidity {
            valid: s.value >= ineq.rhs,
            point: RationalPoint(s.x[..n].to_vec()),
            min_lhs: s.value,
        }),
        LpOutcome::Infeasible { .. } => Err(CtpError::InvalidInput(
            "relaxation is empty: the configuration has no cyclic transversal".into(),
        )),
        LpOutcome::Unbounded => Err(CtpError::Unbounded),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtRankResult {
    pub rank: usize,
    /// For `rank > 0`: a point of `R^(rank-1)` violating the inequality.
    pub certificate: Option<RationalPoint>,
    pub certificate_lhs: Option<Rational>,
}

/// Smallest `r` with the inequality valid over `R^r(B)`.
pub fn ct_rank(b: &BlockConfiguration, ineq: &LinIneq, limits: &Limits) -> Result<CtRankResult> {
    let verts = VPolytope::new(vertices(b, limits)?);
    let report = is_valid(&ineq.coeffs.dense(b)?, &ineq.rhs, &verts);
    if !report.valid {
        return Err(CtpError::InvalidInequality(format!(
            "not valid for the cyclic transversal polytope (minimum {})",
            report.min_lhs.map_or_else(|| "none".into(), |v| v.to_string())
        )));
    }
    let top = b.rank();
    let mut last: Option<RankValidity> = None;
    for r in 0..top {
        let v = validity_over_rank_r(b, r, ineq, limits)?;
        if v.valid {
            return Ok(finish(r, last));
        }
        last = Some(v);
    }
    Ok(finish(top, last))
}

fn finish(rank: usize, last: Option<RankValidity>) -> CtRankResult {
    CtRankResult {
        rank,
        certificate_lhs: last.as_ref().map(|v| v.min_lhs.clone()),
        certificate: last.map(|v| v.point),
    }
}
