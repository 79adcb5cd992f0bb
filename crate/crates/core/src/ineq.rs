//! Linear constraints over the coordinate space of a block configuration:
//! transversal equations, lifted odd-set (LOS) inequalities, lifting along
//! linear maps, shifting, evaluation and LOS separation.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ensure_cyclic, BlockConfiguration, CoordIndex};
use crate::gf2::{BitMatrix, BitVec};
use crate::rational::{format_rational, int, parse_rational, ratio, Rational, RationalPoint};
use crate::{CtpError, Limits, Result};

/// A linear form `sum c_k x_k` with only nonzero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(BTreeMap<CoordIndex, Rational>);

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (CoordIndex, Rational)>) -> Self {
        let mut f = LinearForm::new();
        for (c, v) in terms {
            f.add_term(c, v);
        }
        f
    }

    pub fn add_term(&mut self, c: CoordIndex, v: Rational) {
        let entry = self.0.entry(c).or_insert_with(Rational::zero);
        *entry += v;
        if entry.is_zero() {
            self.0.remove(&c);
        }
    }

    pub fn get(&self, c: &CoordIndex) -> Rational {
        self.0.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoordIndex, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> LinearForm {
        LinearForm(self.0.iter().map(|(c, v)| (*c, -v)).collect())
    }

    /// Dense coefficient vector in the layout of `b`.
    pub fn dense(&self, b: &BlockConfiguration) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); b.size()];
        for (c, v) in &self.0 {
            out[b.require_index(c)?] = v.clone();
        }
        Ok(out)
    }

    pub fn from_dense(b: &BlockConfiguration, dense: &[Rational]) -> Self {
        LinearForm::from_terms(b.coords().zip(dense.iter().cloned()))
    }

    pub fn value(&self, b: &BlockConfiguration, x: &RationalPoint) -> Result<Rational> {
        b.check_point(x)?;
        let mut acc = Rational::zero();
        for (c, v) in &self.0 {
            acc += v * &x[b.require_index(c)?];
        }
        Ok(acc)
    }
}

/// The inequality `coeffs . x >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinIneq {
    pub coeffs: LinearForm,
    pub rhs: Rational,
}

/// The equation `coeffs . x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinEq {
    pub coeffs: LinearForm,
    pub rhs: Rational,
}

/// Left-hand value and slack `lhs - rhs` of an inequality at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub lhs: Rational,
    pub slack: Rational,
}

impl Evaluation {
    pub fn satisfied(&self) -> bool {
        !self.slack.is_negative()
    }
}

impl LinIneq {
    pub fn new(coeffs: LinearForm, rhs: Rational) -> Self {
        LinIneq { coeffs, rhs }
    }

    /// `coeffs . x <= rhs`, stored as `-coeffs . x >= -rhs`.
    pub fn at_most(coeffs: LinearForm, rhs: Rational) -> Self {
        LinIneq {
            coeffs: coeffs.negated(),
            rhs: -rhs,
        }
    }

    pub fn negated(&self) -> Self {
        LinIneq {
            coeffs: self.coeffs.negated(),
            rhs: -self.rhs.clone(),
        }
    }

    pub fn evaluate(&self, b: &BlockConfiguration, x: &RationalPoint) -> Result<Evaluation> {
        let lhs = self.coeffs.value(b, x)?;
        let slack = &lhs - &self.rhs;
        Ok(Evaluation { lhs, slack })
    }

    pub fn check_indices(&self, b: &BlockConfiguration) -> Result<()> {
        for (c, _) in self.coeffs.terms() {
            b.require_index(c)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = IneqFile {
            coeffs: self
                .coeffs
                .terms()
                .map(|(c, v)| CoeffEntry {
                    block: c.block + 1,
                    elem: c.elem,
                    c: format_rational(v),
                })
                .collect(),
            rhs: format_rational(&self.rhs),
            sense: ">=".into(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    /// Reads the inequality JSON format; `"<="` inputs are negated into `>=` form.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: IneqFile = serde_json::from_str(text)?;
        let mut coeffs = LinearForm::new();
        for e in &file.coeffs {
            if e.block == 0 {
                return Err(CtpError::Parse("block indices are 1-based".into()));
            }
            coeffs.add_term(CoordIndex::new(e.block - 1, e.elem), parse_rational(&e.c)?);
        }
        let rhs = parse_rational(&file.rhs)?;
        match file.sense.as_str() {
            ">=" => Ok(LinIneq::new(coeffs, rhs)),
            "<=" => Ok(LinIneq::at_most(coeffs, rhs)),
            other => Err(CtpError::Parse(format!("unsupported sense {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    block: usize,
    elem: BitVec,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct IneqFile {
    coeffs: Vec<CoeffEntry>,
    rhs: String,
    sense: String,
}

impl LinEq {
    pub fn residual(&self, b: &BlockConfiguration, x: &RationalPoint) -> Result<Rational> {
        Ok(self.coeffs.value(b, x)? - &self.rhs)
    }
}

/// A nonzero `eta` and an odd subset of blocks (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LosSpec {
    pub eta: BitVec,
    pub odd_set: BTreeSet<usize>,
}

impl LosSpec {
    pub fn new(eta: BitVec, odd_set: impl IntoIterator<Item = usize>) -> Result<Self> {
        let spec = LosSpec {
            eta,
            odd_set: odd_set.into_iter().collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta.is_zero() {
            return Err(CtpError::InvalidLos("eta must be nonzero".into()));
        }
        if self.odd_set.len().is_multiple_of(2) {
            return Err(CtpError::InvalidLos(format!(
                "odd set has even cardinality {}",
                self.odd_set.len()
            )));
        }
        Ok(())
    }

    /// 1-based block indices, for display.
    pub fn blocks_one_based(&self) -> Vec<usize> {
        self.odd_set.iter().map(|i| i + 1).collect()
    }
}

/// One equation `sum_w x^i_w = 1` per block.
pub fn transversal_equations(b: &BlockConfiguration) -> Vec<LinEq> {
    (0..b.len())
        .map(|i| LinEq {
            coeffs: LinearForm::from_terms(
                b.block(i).iter().map(|&w| (CoordIndex::new(i, w), Rational::one())),
            ),
            rhs: Rational::one(),
        })
        .collect()
}

/// The LOS inequality for `(eta, I)`: coefficient one on `(i, w)` iff
/// `i in I` and `eta.w = 0`, or `i not in I` and `eta.w = 1`.
pub fn los(b: &BlockConfiguration, spec: &LosSpec) -> Result<LinIneq> {
    spec.validate()?;
    if spec.eta.width() != b.d() {
        return Err(CtpError::WidthMismatch {
            expected: b.d(),
            found: spec.eta.width(),
        });
    }
    if let Some(&i) = spec.odd_set.iter().next_back() {
        if i >= b.len() {
            return Err(CtpError::InvalidLos(format!("block {} out of range", i + 1)));
        }
    }
    let mut coeffs = LinearForm::new();
    for c in b.coords() {
        let odd = spec.eta.dot_unchecked(&c.elem);
        if spec.odd_set.contains(&c.block) != odd {
            coeffs.add_term(c, Rational::one());
        }
    }
    Ok(LinIneq::new(coeffs, Rational::one()))
}

/// All odd subsets of `0..n` in increasing order of their bitmask.
pub fn odd_subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    assert!(n < 63, "too many blocks for odd-set enumeration");
    (1u64..(1 << n))
        .filter(|m| m.count_ones() % 2 == 1)
        .map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

fn candidate_etas(b: &BlockConfiguration, restrict_to_span: bool, limits: &Limits) -> Result<Vec<BitVec>> {
    if restrict_to_span {
        // one eta per nonzero functional on span(B): subsets of the pivot
        // bits of a reduced basis
        let pivots: Vec<u64> = b.span_basis().iter().map(|v| v.encoding() & v.encoding().wrapping_neg()).collect();
        return Ok((1u64..1 << pivots.len())
            .map(|m| {
                let e = (0..pivots.len()).filter(|k| m >> k & 1 == 1).fold(0, |acc, k| acc | pivots[k]);
                BitVec::new(b.d(), e).unwrap()
            })
            .collect());
    }
    limits.check_width(b.d())?;
    Ok((1..1u64 << b.d()).map(|e| BitVec::new(b.d(), e).unwrap()).collect())
}

/// Every `(eta, I)` pair before deduplication.
pub fn los_specs(b: &BlockConfiguration, restrict_to_span: bool, limits: &Limits) -> Result<Vec<LosSpec>> {
    let etas = candidate_etas(b, restrict_to_span, limits)?;
    let mut out = Vec::new();
    for eta in etas {
        for set in odd_subsets(b.len()) {
            out.push(LosSpec { eta, odd_set: set });
        }
    }
    Ok(out)
}

/// All LOS inequalities, deduplicated by coefficient vector; the first spec
/// producing a given inequality is kept.
pub fn all_los(b: &BlockConfiguration, restrict_to_span: bool, limits: &Limits) -> Result<Vec<(LosSpec, LinIneq)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for spec in los_specs(b, restrict_to_span, limits)? {
        let ineq = los(b, &spec)?;
        if seen.insert(ineq.coeffs.clone()) {
            out.push((spec, ineq));
        }
    }
    Ok(out)
}

/// The phi-lifting of an inequality over `phi(B)`: coefficient of `(i, w)`
/// becomes the coefficient of `(i, phi(w))`.
pub fn lift(phi: &BitMatrix, b: &BlockConfiguration, ineq: &LinIneq) -> Result<LinIneq> {
    let image = b.image(phi)?;
    ineq.check_indices(&image)?;
    let coeffs = LinearForm::from_terms(b.coords().map(|c| {
        let target = CoordIndex::new(c.block, phi.apply_unchecked(&c.elem));
        (c, ineq.coeffs.get(&target))
    }));
    Ok(LinIneq::new(coeffs, ineq.rhs.clone()))
}

/// What the lifting of a LOS inequality turns into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftClass {
    /// The LOS inequality for `(phi^T eta, I)`.
    Los(LosSpec, LinIneq),
    /// `phi^T eta = 0`: the inequality `sum_{i in I} sum_w x^i_w >= 1`, valid on the transversal polytope.
    TpValid(LinIneq),
}

impl LiftClass {
    pub fn inequality(&self) -> &LinIneq {
        match self {
            LiftClass::Los(_, q) | LiftClass::TpValid(q) => q,
        }
    }
}

pub fn classify_lifting(phi: &BitMatrix, b: &BlockConfiguration, spec: &LosSpec) -> Result<LiftClass> {
    spec.validate()?;
    let eta = phi.transpose_apply(&spec.eta)?;
    if eta.is_zero() {
        let coeffs = LinearForm::from_terms(
            b.coords()
                .filter(|c| spec.odd_set.contains(&c.block))
                .map(|c| (c, Rational::one())),
        );
        return Ok(LiftClass::TpValid(LinIneq::new(coeffs, Rational::one())));
    }
    let lifted = LosSpec {
        eta,
        odd_set: spec.odd_set.clone(),
    };
    let ineq = los(b, &lifted)?;
    Ok(LiftClass::Los(lifted, ineq))
}

/// The sigma-shift of an inequality, as an inequality over `B + sigma`.
pub fn shift_ineq(sigma: &[BitVec], b: &BlockConfiguration, ineq: &LinIneq) -> Result<LinIneq> {
    let shifted = b.shift(sigma, true)?;
    ineq.check_indices(b)?;
    let _ = shifted;
    let coeffs = LinearForm::from_terms(
        ineq.coeffs
            .terms()
            .map(|(c, v)| (CoordIndex::new(c.block, c.elem.xor(&sigma[c.block])), v.clone())),
    );
    Ok(LinIneq::new(coeffs, ineq.rhs.clone()))
}

pub fn evaluate(ineq: &LinIneq, b: &BlockConfiguration, x: &RationalPoint) -> Result<Evaluation> {
    ineq.evaluate(b, x)
}

/// Checks nonnegativity and the transversal equations.
pub fn check_in_tp(b: &BlockConfiguration, x: &RationalPoint) -> Result<()> {
    b.check_point(x)?;
    if !x.is_nonnegative() {
        return Err(CtpError::InvalidPoint("negative coordinate".into()));
    }
    for i in 0..b.len() {
        let s: Rational = b.block_range(i).map(|k| x[k].clone()).sum();
        if !s.is_one() {
            return Err(CtpError::InvalidPoint(format!(
                "block {} sums to {}, not 1",
                i + 1,
                s
            )));
        }
    }
    Ok(())
}

/// Minimum LOS left-hand side over all odd sets for a fixed `eta`, together
/// with the minimizing odd set.
///
/// With `a_i` the mass of block `i` on `eta`-even elements, the left-hand side
/// of `(eta, I)` is `sum_{i in I} a_i + sum_{i not in I} (1 - a_i)`. Taking
/// `I = {i : a_i < 1 - a_i}` minimizes it without the parity constraint; if
/// that set is even, toggling the block with the smallest `|2 a_i - 1|`
/// (lowest index on ties) is optimal.
pub fn min_los_for_eta(b: &BlockConfiguration, eta: &BitVec, x: &RationalPoint) -> Result<(LosSpec, Rational)> {
    if eta.is_zero() {
        return Err(CtpError::InvalidLos("eta must be nonzero".into()));
    }
    if eta.width() != b.d() {
        return Err(CtpError::WidthMismatch {
            expected: b.d(),
            found: eta.width(),
        });
    }
    check_in_tp(b, x)?;
    Ok(min_los_unchecked(b, eta, x))
}

fn min_los_unchecked(b: &BlockConfiguration, eta: &BitVec, x: &RationalPoint) -> (LosSpec, Rational) {
    let n = b.len();
    let mut even_mass = Vec::with_capacity(n);
    for i in 0..n {
        let r = b.block_range(i);
        let a: Rational = b
            .block(i)
            .iter()
            .zip(r)
            .filter(|(w, _)| !eta.dot_unchecked(w))
            .map(|(_, k)| x[k].clone())
            .sum();
        even_mass.push(a);
    }
    let one = Rational::one();
    let mut set: BTreeSet<usize> = BTreeSet::new();
    let mut lhs = Rational::zero();
    for (i, a) in even_mass.iter().enumerate() {
        let other = &one - a;
        if *a < other {
            set.insert(i);
            lhs += a;
        } else {
            lhs += other;
        }
    }
    if set.len().is_multiple_of(2) {
        let mut best: Option<(usize, Rational)> = None;
        for (i, a) in even_mass.iter().enumerate() {
            let gap = (a * int(2) - &one).abs();
            if best.as_ref().is_none_or(|(_, g)| gap < *g) {
                best = Some((i, gap));
            }
        }
        let (i, gap) = best.expect("at least one block");
        if !set.remove(&i) {
            set.insert(i);
        }
        lhs += gap;
    }
    (LosSpec { eta: *eta, odd_set: set }, lhs)
}

/// Violated LOS inequality for a fixed `eta`, if any.
pub fn separate_los_fixed_eta(b: &BlockConfiguration, eta: &BitVec, x: &RationalPoint) -> Result<Option<LosSpec>> {
    let (spec, lhs) = min_los_for_eta(b, eta, x)?;
    Ok((lhs < Rational::one()).then_some(spec))
}

/// A maximally violated LOS inequality with its violation `1 - lhs`, or `None`
/// if `x` satisfies all of them. Ties go to the smallest `eta` encoding.
pub fn separate_los(
    b: &BlockConfiguration,
    x: &RationalPoint,
    restrict_to_span: bool,
    limits: &Limits,
) -> Result<Option<(LosSpec, Rational)>> {
    check_in_tp(b, x)?;
    let etas = candidate_etas(b, restrict_to_span, limits)?;
    let results: Vec<(LosSpec, Rational)> = etas.par_iter().map(|eta| min_los_unchecked(b, eta, x)).collect();
    let mut best: Option<(LosSpec, Rational)> = None;
    for (spec, lhs) in results {
        if lhs < Rational::one() && best.as_ref().is_none_or(|(_, l)| lhs < *l) {
            best = Some((spec, lhs));
        }
    }
    Ok(best.map(|(spec, lhs)| (spec, Rational::one() - lhs)))
}

fn basis_sum_elements(d: usize) -> Result<[BitVec; 5]> {
    if d < 3 {
        return Err(CtpError::InvalidInput("needs d >= 3".into()));
    }
    let e = |j| BitVec::unit(d, j);
    let zero = BitVec::zero(d);
    let all = e(0).xor(&e(1)).xor(&e(2));
    Ok([zero, e(0), e(1), e(2), all])
}

/// The valid inequality `x^1_111 + sum_{i in 2,3} sum_{w in 000,100,010,001} x^i_w
/// + sum_{i >= 4} x^i_000 <= n - 1` on the full configuration, in `>=` form.
pub fn basis_sum_inequality(b: &BlockConfiguration) -> Result<LinIneq> {
    let n = b.len();
    if n < 3 {
        return Err(CtpError::InvalidInput("needs n >= 3".into()));
    }
    let [zero, e1, e2, e3, all] = basis_sum_elements(b.d())?;
    let mut form = LinearForm::new();
    form.add_term(CoordIndex::new(0, all), Rational::one());
    for i in 1..3 {
        for w in [zero, e1, e2, e3] {
            form.add_term(CoordIndex::new(i, w), Rational::one());
        }
    }
    for i in 3..n {
        form.add_term(CoordIndex::new(i, zero), Rational::one());
    }
    let ineq = LinIneq::at_most(form, int(n as i64 - 1));
    ineq.check_indices(b)?;
    Ok(ineq)
}

/// A point of the transversal polytope that satisfies every LOS inequality
/// but violates [`basis_sum_inequality`].
pub fn basis_sum_witness(b: &BlockConfiguration) -> Result<RationalPoint> {
    let n = b.len();
    if n < 3 {
        return Err(CtpError::InvalidInput("needs n >= 3".into()));
    }
    let [zero, e1, e2, e3, all] = basis_sum_elements(b.d())?;
    let mut x = RationalPoint::zeros(b.size());
    let mut set = |i: usize, w: BitVec, v: Rational| -> Result<()> {
        x.0[b.require_index(&CoordIndex::new(i, w))?] = v;
        Ok(())
    };
    set(0, zero, ratio(1, 3))?;
    set(0, all, ratio(2, 3))?;
    for i in 1..3 {
        set(i, zero, ratio(1, 3))?;
        for w in [e1, e2, e3, all] {
            set(i, w, ratio(1, 6))?;
        }
    }
    for i in 3..n {
        set(i, zero, Rational::one())?;
    }
    Ok(x)
}

/// Symmetric difference `I △ {i : eta . sigma(i) = 1}`.
pub fn shifted_odd_set(spec: &LosSpec, sigma: &[BitVec]) -> BTreeSet<usize> {
    let flips: BTreeSet<usize> = sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| spec.eta.dot_unchecked(s))
        .map(|(i, _)| i)
        .collect();
    spec.odd_set.symmetric_difference(&flips).copied().collect()
}

/// Validates that `sigma` is cyclic for configurations of width `d`.
pub fn check_cyclic(d: usize, sigma: &[BitVec]) -> Result<()> {
    ensure_cyclic(d, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{cyclic_transversals, incidence, transversals, vertices};
    use crate::sample::random_tp_point;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn transversal_equation_examples() {
        let f = BlockConfiguration::full(1, 3).unwrap();
        let eqs = transversal_equations(&f);
        assert_eq!(eqs.len(), 3);
        for (i, eq) in eqs.iter().enumerate() {
            assert_eq!(eq.coeffs.len(), 2);
            assert!(eq.coeffs.get(&CoordIndex::new(i, bv("0"))).is_one());
            assert!(eq.coeffs.get(&CoordIndex::new(i, bv("1"))).is_one());
        }
        for v in vertices(&f, &lim()).unwrap() {
            assert!(eqs.iter().all(|e| e.residual(&f, &v).unwrap().is_zero()));
        }
        let single = BlockConfiguration::from_strs(2, &[&["01"], &["01"]]).unwrap();
        let eqs = transversal_equations(&single);
        assert_eq!(eqs[1].coeffs.terms().count(), 1);
    }

    #[test]
    fn odd_set_inequality_for_width_one() {
        let f = BlockConfiguration::full(1, 3).unwrap();
        let spec = LosSpec::new(bv("1"), [0]).unwrap();
        let q = los(&f, &spec).unwrap();
        let expected = LinearForm::from_terms([
            (CoordIndex::new(0, bv("0")), Rational::one()),
            (CoordIndex::new(1, bv("1")), Rational::one()),
            (CoordIndex::new(2, bv("1")), Rational::one()),
        ]);
        assert_eq!(q.coeffs, expected);
        assert!(q.rhs.is_one());
    }

    #[test]
    fn los_coefficients_full_2_3() {
        let f = BlockConfiguration::full(2, 3).unwrap();
        let q = los(&f, &LosSpec::new(bv("11"), [0]).unwrap()).unwrap();
        let support: Vec<(usize, String)> = q.coeffs.terms().map(|(c, _)| (c.block + 1, c.elem.to_string())).collect();
        let mut expected = vec![
            (1, "00".to_string()),
            (1, "11".to_string()),
            (2, "10".to_string()),
            (2, "01".to_string()),
            (3, "10".to_string()),
            (3, "01".to_string()),
        ];
        expected.sort_by_key(|(i, s)| (*i, s.parse::<BitVec>().unwrap()));
        assert_eq!(support, expected);
    }

    #[test]
    fn los_rejects_bad_specs() {
        assert!(LosSpec::new(bv("00"), [0]).is_err());
        assert!(LosSpec::new(bv("01"), [0, 1]).is_err());
        let f = BlockConfiguration::full(2, 3).unwrap();
        assert!(los(&f, &LosSpec::new(bv("1"), [0]).unwrap()).is_err());
        assert!(los(&f, &LosSpec::new(bv("01"), [5]).unwrap()).is_err());
    }

    #[test]
    fn los_valid_on_vertices() {
        let configs = [
            BlockConfiguration::full(2, 4).unwrap(),
            BlockConfiguration::from_strs(3, &[&["000", "110"], &["011", "101", "111"], &["100", "010", "001"]]).unwrap(),
        ];
        for b in &configs {
            let vs = vertices(b, &lim()).unwrap();
            for (_, q) in all_los(b, false, &lim()).unwrap() {
                for v in &vs {
                    assert!(q.evaluate(b, v).unwrap().satisfied());
                }
            }
        }
    }

    #[test]
    fn all_los_counts() {
        let f = BlockConfiguration::full(2, 3).unwrap();
        assert_eq!(los_specs(&f, false, &lim()).unwrap().len(), 3 * 4);
        assert_eq!(all_los(&f, false, &lim()).unwrap().len(), 12);
        let f1 = BlockConfiguration::full(1, 3).unwrap();
        let sets: Vec<Vec<usize>> = all_los(&f1, false, &lim())
            .unwrap()
            .iter()
            .map(|(s, _)| s.blocks_one_based())
            .collect();
        assert_eq!(sets, vec![vec![1], vec![2], vec![3], vec![1, 2, 3]]);
        // blocks inside {00, 11}: eta = 10 and eta = 01 restrict identically
        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["00", "11"], &["11"]]).unwrap();
        let specs = los_specs(&b, false, &lim()).unwrap();
        let deduped = all_los(&b, false, &lim()).unwrap();
        assert_eq!(specs.len(), 12);
        let q10 = los(&b, &LosSpec::new(bv("10"), [0]).unwrap()).unwrap();
        let q01 = los(&b, &LosSpec::new(bv("01"), [0]).unwrap()).unwrap();
        assert_eq!(q10, q01);
        assert!(deduped.iter().any(|(s, _)| s.eta == bv("10")));
        assert!(!deduped.iter().any(|(s, _)| s.eta == bv("01")));
        // restricting eta drops only the trivial rows where eta vanishes on span(B)
        let restricted = all_los(&b, true, &lim()).unwrap();
        let as_set = |v: &[(LosSpec, LinIneq)]| v.iter().map(|(_, q)| q.clone()).collect::<HashSet<_>>();
        let nontrivial: Vec<(LosSpec, LinIneq)> = deduped
            .iter()
            .filter(|(s, _)| b.span().iter().any(|w| w.dot_unchecked(&s.eta)))
            .cloned()
            .collect();
        assert_eq!(as_set(&restricted), as_set(&nontrivial));
        assert!(nontrivial.len() < deduped.len());
    }

    #[test]
    fn lift_identity_and_pullback() {
        let b = BlockConfiguration::from_strs(3, &[&["000", "110", "011"], &["100", "111"], &["101", "010", "001"]]).unwrap();
        let id = BitMatrix::identity(3);
        let q = los(&b, &LosSpec::new(bv("101"), [1]).unwrap()).unwrap();
        assert_eq!(lift(&id, &b, &q).unwrap(), q);

        let phi = BitMatrix::from_strs(3, &["110", "001"]).unwrap();
        let img = b.image(&phi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let coeffs: Vec<Rational> = (0..img.size())
            .map(|_| ratio(rng.random_range(-5..6), rng.random_range(1..4)))
            .collect();
        let qbar = LinIneq::new(LinearForm::from_dense(&img, &coeffs), ratio(1, 2));
        let lifted = lift(&phi, &b, &qbar).unwrap();
        for _ in 0..100 {
            let x = random_tp_point(&b, &mut rng);
            let (_, fx) = b.induced_map_apply(&phi, &x).unwrap();
            assert_eq!(lifted.evaluate(&b, &x).unwrap(), qbar.evaluate(&img, &fx).unwrap());
        }
    }

    #[test]
    fn lift_commutes_with_composition() {
        let b = BlockConfiguration::full(3, 3).unwrap();
        let phi = BitMatrix::from_strs(3, &["110", "011"]).unwrap();
        let psi = BitMatrix::from_strs(2, &["11"]).unwrap();
        let img2 = b.image(&psi.compose(&phi).unwrap()).unwrap();
        let q = los(&img2, &LosSpec::new(bv("1"), [2]).unwrap()).unwrap();
        let step = lift(&phi, &b, &lift(&psi, &b.image(&phi).unwrap(), &q).unwrap()).unwrap();
        let direct = lift(&psi.compose(&phi).unwrap(), &b, &q).unwrap();
        assert_eq!(step, direct);
    }

    #[test]
    fn classify_lifting_branches() {
        let b = BlockConfiguration::full(2, 3).unwrap();
        let inv = BitMatrix::from_strs(2, &["11", "01"]).unwrap();
        let img = b.image(&inv).unwrap();
        for (spec, q) in all_los(&img, false, &lim()).unwrap() {
            let class = classify_lifting(&inv, &b, &spec).unwrap();
            assert!(matches!(class, LiftClass::Los(..)));
            assert_eq!(class.inequality(), &lift(&inv, &b, &q).unwrap());
        }
        let phi = BitMatrix::from_strs(2, &["10", "10"]).unwrap();
        let img = b.image(&phi).unwrap();
        let spec = LosSpec::new(bv("11"), [0]).unwrap();
        let class = classify_lifting(&phi, &b, &spec).unwrap();
        let LiftClass::TpValid(q) = &class else {
            panic!("expected the transversal-polytope branch");
        };
        assert_eq!(q, &lift(&phi, &b, &los(&img, &spec).unwrap()).unwrap());
        for t in transversals(&b, &lim()).unwrap() {
            let v = incidence(&t, &b).unwrap().to_point();
            assert!(q.evaluate(&b, &v).unwrap().satisfied());
        }
    }

    #[test]
    fn shift_examples() {
        let f = BlockConfiguration::full(2, 3).unwrap();
        let q = los(&f, &LosSpec::new(bv("10"), [0]).unwrap()).unwrap();
        let zero = vec![BitVec::zero(2); 3];
        assert_eq!(shift_ineq(&zero, &f, &q).unwrap(), q);
        let sigma = vec![bv("10"), bv("11"), bv("01")];
        let twice = shift_ineq(&sigma, &f, &shift_ineq(&sigma, &f, &q).unwrap()).unwrap();
        assert_eq!(twice, q);
        assert!(shift_ineq(&[bv("10"), bv("00"), bv("00")], &f, &q).is_err());

        for (spec, q) in all_los(&f, false, &lim()).unwrap() {
            for sigma in cyclic_transversals(&f, &lim()).unwrap() {
                let shifted = shift_ineq(sigma.entries(), &f, &q).unwrap();
                let expected = LosSpec {
                    eta: spec.eta,
                    odd_set: shifted_odd_set(&spec, sigma.entries()),
                };
                assert_eq!(shifted, los(&f, &expected).unwrap());
            }
        }
    }

    #[test]
    fn shift_preserves_block_coefficient_multisets() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "01", "11"], &["10", "01"], &["11", "10"]]).unwrap();
        let sigma = vec![bv("11"), bv("01"), bv("10")];
        let q = LinIneq::new(
            LinearForm::from_dense(&b, &(1..=7).map(int).collect::<Vec<_>>()),
            int(3),
        );
        let shifted = shift_ineq(&sigma, &b, &q).unwrap();
        let moved = b.shift(&sigma, true).unwrap();
        for i in 0..3 {
            let mut before: Vec<Rational> = b.block(i).iter().map(|w| q.coeffs.get(&CoordIndex::new(i, *w))).collect();
            let mut after: Vec<Rational> = moved.block(i).iter().map(|w| shifted.coeffs.get(&CoordIndex::new(i, *w))).collect();
            before.sort();
            after.sort();
            assert_eq!(before, after);
        }
        let vs = vertices(&b, &lim()).unwrap();
        let min = vs.iter().map(|v| q.evaluate(&b, v).unwrap().lhs).min().unwrap();
        let valid = LinIneq::new(q.coeffs.clone(), min);
        let vs2 = vertices(&moved, &lim()).unwrap();
        let shifted_valid = shift_ineq(&sigma, &b, &valid).unwrap();
        assert!(vs2.iter().all(|v| shifted_valid.evaluate(&moved, v).unwrap().satisfied()));
    }

    #[test]
    fn evaluate_examples() {
        let f = BlockConfiguration::full(3, 3).unwrap();
        let x = basis_sum_witness(&f).unwrap();
        let q = basis_sum_inequality(&f).unwrap();
        let e = q.evaluate(&f, &x).unwrap();
        assert_eq!(-e.lhs.clone(), ratio(7, 3));
        assert!(!e.satisfied());
        let zero = RationalPoint::zeros(f.size());
        let los1 = los(&f, &LosSpec::new(bv("100"), [0]).unwrap()).unwrap();
        assert!(los1.evaluate(&f, &zero).unwrap().lhs.is_zero());
        assert!(los1.evaluate(&f, &RationalPoint::zeros(3)).is_err());
    }

    #[test]
    fn fixed_eta_separation_examples() {
        let f = BlockConfiguration::full(1, 3).unwrap();
        // x^i_1 = (1, 0, 0)
        let x = RationalPoint::from_ints(&[0, 1, 1, 0, 1, 0]);
        let spec = separate_los_fixed_eta(&f, &bv("1"), &x).unwrap().unwrap();
        assert_eq!(spec.blocks_one_based(), vec![1]);
        assert!(los(&f, &spec).unwrap().evaluate(&f, &x).unwrap().lhs.is_zero());

        let half = RationalPoint(vec![ratio(1, 2); 6]);
        assert_eq!(separate_los_fixed_eta(&f, &bv("1"), &half).unwrap(), None);
        let brute: Rational = odd_subsets(3)
            .map(|set| los(&f, &LosSpec { eta: bv("1"), odd_set: set }).unwrap().evaluate(&f, &half).unwrap().lhs)
            .min()
            .unwrap();
        assert_eq!(brute, ratio(3, 2));
        assert_eq!(min_los_for_eta(&f, &bv("1"), &half).unwrap().1, brute);

        let not_tp = RationalPoint::from_ints(&[1, 1, 1, 0, 1, 0]);
        assert!(matches!(separate_los_fixed_eta(&f, &bv("1"), &not_tp), Err(CtpError::InvalidPoint(_))));
    }

    #[test]
    fn separation_examples() {
        let f = BlockConfiguration::full(3, 3).unwrap();
        for v in vertices(&f, &lim()).unwrap().iter().take(20) {
            assert_eq!(separate_los(&f, v, false, &lim()).unwrap(), None);
        }
        let x = basis_sum_witness(&f).unwrap();
        assert_eq!(separate_los(&f, &x, false, &lim()).unwrap(), None);
        let vs = vertices(&f, &lim()).unwrap();
        let mid = vs[3].midpoint(&vs[40]);
        assert_eq!(separate_los(&f, &mid, false, &lim()).unwrap(), None);
        let mut bad = RationalPoint::zeros(f.size());
        for i in 0..3 {
            let k = f.index_of(&CoordIndex::new(i, bv("100"))).unwrap();
            bad.0[k] = Rational::one();
        }
        let (spec, violation) = separate_los(&f, &bad, false, &lim()).unwrap().unwrap();
        assert!(violation.is_one());
        assert!(los(&f, &spec).unwrap().evaluate(&f, &bad).unwrap().lhs.is_zero());
    }

    #[test]
    fn separation_agrees_with_all_los() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "01", "11"], &["10", "01"], &["11", "10", "00"], &["01", "11"]]).unwrap();
        let ineqs = all_los(&b, false, &lim()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let x = random_tp_point(&b, &mut rng);
            let all_ok = ineqs.iter().all(|(_, q)| q.evaluate(&b, &x).unwrap().satisfied());
            assert_eq!(separate_los(&b, &x, false, &lim()).unwrap().is_none(), all_ok);
        }
    }

    #[test]
    fn inequality_json_round_trip() {
        let f = BlockConfiguration::full(3, 3).unwrap();
        let q = basis_sum_inequality(&f).unwrap();
        let text = q.to_json();
        assert!(text.contains("\"rhs\": \"-2/1\""));
        assert_eq!(LinIneq::from_json(&text).unwrap(), q);
        let le = r#"{"coeffs": [{"block": 1, "elem": "000", "c": "1"}], "rhs": "1/2", "sense": "<="}"#;
        let parsed = LinIneq::from_json(le).unwrap();
        assert_eq!(parsed.rhs, ratio(-1, 2));
    }
}
