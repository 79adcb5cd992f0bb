//! Reproducible checks of the structural results, grouped in named suites.
//! Each suite returns a verdict, human-readable detail lines and its runtime.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::config::BlockConfiguration;
use crate::enumerate::{cyclic_transversals, incidence, transversals, vertices};
use crate::extform::{build_flownet, optimize_over_flow, paths, project_to_x};
use crate::gf2::BitVec;
use crate::ineq::{
    all_los, basis_sum_inequality, basis_sum_witness, classify_lifting, lift, los, min_los_for_eta, odd_subsets,
    separate_los, separate_los_fixed_eta, LiftClass, LinIneq, LinearForm,
};
use crate::rational::{format_rational, int, ratio, Rational, RationalPoint};
use crate::reduce::{
    cut_config, from_sat, matching_config, packing_config, packing_config_small, perfect_matching_config,
    simplex_config, cube_config, stable_set_config, Graph, SatFormula, SetFamily,
};
use crate::relax::{ct_rank, rank_r_membership};
use crate::sample::{
    random_config, random_low_rank_config, random_map, random_rational_objective, random_spec, random_tp_point,
    random_vertex_mix, seeded,
};
use crate::verify::{
    ctp_necessary_condition, dd_vertices, hull_membership, is_facet, is_valid, polytope_equal,
    tsp_vertices, uniform_matroid_vertices, HPolytope, NecessaryOutcome, Side, VPolytope,
};
use crate::{CtpError, Limits, Result};

/// Suite names with their criterion number and time budget in seconds.
pub const SUITES: [(&str, usize, u64); 12] = [
    ("parity", 1, 5),
    ("dim", 2, 30),
    ("facets", 3, 60),
    ("rank2", 4, 120),
    ("prop5", 5, 120),
    ("lifting", 6, 30),
    ("r2r1", 7, 300),
    ("ctrank", 8, 300),
    ("flow", 9, 120),
    ("reductions", 10, 60),
    ("necessary", 11, 60),
    ("separation", 12, 10),
];

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub criterion: usize,
    pub passed: bool,
    pub details: Vec<String>,
    pub seconds: f64,
    pub budget_seconds: u64,
}

impl CheckReport {
    pub fn within_budget(&self) -> bool {
        self.seconds <= self.budget_seconds as f64
    }

    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {:<10} {:>8.2}s (budget {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.suite,
            self.seconds,
            self.budget_seconds
        )
    }
}

/// Collects detail lines and turns failed expectations into a failed verdict.
#[derive(Default)]
struct Log {
    lines: Vec<String>,
    ok: bool,
}

impl Log {
    fn new() -> Self {
        Log {
            lines: Vec::new(),
            ok: true,
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn expect(&mut self, cond: bool, s: impl Into<String>) {
        let s = s.into();
        if !cond {
            self.ok = false;
            self.lines.push(format!("FAILED: {s}"));
        }
    }
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs a suite by name. Unknown names are an error; a suite that raises an
/// error is reported as failed.
pub fn run_suite(name: &str, seed: u64, limits: &Limits) -> Result<CheckReport> {
    let &(suite, criterion, budget) = SUITES
        .iter()
        .find(|s| s.0 == name)
        .ok_or_else(|| CtpError::InvalidInput(format!("unknown suite {name:?}; expected one of {}", suite_names().join(", "))))?;
    let start = Instant::now();
    let mut log = Log::new();
    let res = match suite {
        "parity" => parity(&mut log, limits),
        "dim" => dim(&mut log, limits),
        "facets" => facets(&mut log, limits),
        "rank2" => rank2(&mut log, seed, limits),
        "prop5" => prop5(&mut log, limits),
        "lifting" => lifting(&mut log, seed, limits),
        "r2r1" => r2r1(&mut log, seed, limits),
        "ctrank" => ctrank(&mut log, seed, limits),
        "flow" => flow(&mut log, seed, limits),
        "reductions" => reductions(&mut log, seed, limits),
        "necessary" => necessary(&mut log, limits),
        _ => separation(&mut log, seed),
    };
    if let Err(e) = res {
        log.ok = false;
        log.note(format!("error: {e}"));
    }
    let elapsed: Duration = start.elapsed();
    Ok(CheckReport {
        suite: suite.to_string(),
        criterion,
        passed: log.ok,
        details: log.lines,
        seconds: elapsed.as_secs_f64(),
        budget_seconds: budget,
    })
}

pub fn run_all(seed: u64, limits: &Limits) -> Vec<CheckReport> {
    SUITES
        .iter()
        .map(|s| run_suite(s.0, seed, limits).expect("known suite"))
        .collect()
}

fn cfg(d: usize, blocks: &[&[&str]]) -> BlockConfiguration {
    BlockConfiguration::from_strs(d, blocks).expect("valid corpus entry")
}

/// Small configurations of varied shape: full, sparse, low rank, without
/// cyclic transversals, and from reductions. All have at most 16 vertices.
pub fn corpus() -> Vec<(String, BlockConfiguration)> {
    let mut out: Vec<(String, BlockConfiguration)> = vec![
        ("full(1,3)".into(), BlockConfiguration::full(1, 3).unwrap()),
        ("full(1,4)".into(), BlockConfiguration::full(1, 4).unwrap()),
        ("full(2,2)".into(), BlockConfiguration::full(2, 2).unwrap()),
        ("full(2,3)".into(), BlockConfiguration::full(2, 3).unwrap()),
        ("single block".into(), cfg(2, &[&["00", "01", "11"]])),
        ("no cyclic transversal".into(), cfg(2, &[&["01"], &["10"]])),
        ("sparse d=2".into(), cfg(2, &[&["00", "01"], &["01", "11", "10"], &["11", "10"], &["00", "01"]])),
        ("sparse d=3".into(), cfg(3, &[&["000", "110", "011"], &["100", "111"], &["101", "010", "001"]])),
        ("rank one in d=3".into(), cfg(3, &[&["000", "101"], &["101"], &["000", "101"], &["000", "101"]])),
        ("sparse d=4".into(), cfg(4, &[&["1000", "0100", "1100"], &["0110", "1010"], &["0010", "0001", "1111"], &["0011", "0111"]])),
    ];
    let three: Vec<BitVec> = ["00", "10", "01"].iter().map(|s| s.parse().unwrap()).collect();
    out.push(("simplex on 3 points".into(), simplex_config(&three).unwrap()));
    out.push(("cube(2)".into(), cube_config(2).unwrap()));
    out.push(("stable sets of P3".into(), stable_set_config(&Graph::path(3)).unwrap().config));
    out.push(("matchings of K4".into(), matching_config(&Graph::complete(4)).unwrap().config));
    out.push(("perfect matchings of K4".into(), perfect_matching_config(&Graph::complete(4)).unwrap().config));
    out.push(("cuts of C4".into(), cut_config(&Graph::cycle(4), true).unwrap().config));
    let f = SatFormula::new(3, vec![vec![1, -2], vec![2, 3], vec![-1, -3]]).unwrap();
    out.push(("2-SAT on 3 variables".into(), from_sat(&f, 2).unwrap().config));
    let mut rng = seeded(7);
    for k in 0..3 {
        let b = loop {
            let b = random_low_rank_config(4, 2, 3, 9, &mut rng);
            if vertices(&b, &Limits::default()).unwrap().len() <= 16 {
                break b;
            }
        };
        out.push((format!("random rank 2, d=4 #{}", k + 1), b));
    }
    out
}

fn full_vertices(d: usize, n: usize, limits: &Limits) -> Result<(BlockConfiguration, VPolytope)> {
    let b = BlockConfiguration::full(d, n)?;
    let v = VPolytope::new(vertices(&b, limits)?);
    Ok((b, v))
}

fn tp_with_all_los(b: &BlockConfiguration, limits: &Limits) -> Result<HPolytope> {
    let mut h = HPolytope::transversal_polytope(b);
    for (_, q) in all_los(b, false, limits)? {
        h.add_lin_ineq(b, &q)?;
    }
    Ok(h)
}

fn sorted(mut v: Vec<RationalPoint>) -> Vec<RationalPoint> {
    v.sort();
    v
}

fn parity(log: &mut Log, limits: &Limits) -> Result<()> {
    for n in 3..=5 {
        let (b, v) = full_vertices(1, n, limits)?;
        let h = tp_with_all_los(&b, limits)?;
        let got = dd_vertices(&h, limits)?;
        let dim = got.dim();
        log.note(format!("n={n}: {} vertices from the odd-set system, dim {dim}", got.len()));
        log.expect(got.vertices == sorted(v.vertices), format!("n={n}: vertex sets differ"));
        log.expect(dim == n as i64, format!("n={n}: dimension {dim}, expected {n}"));
    }
    Ok(())
}

fn dim(log: &mut Log, limits: &Limits) -> Result<()> {
    log.note("   d   n  expected  computed");
    for (d, n) in [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (3, 3)] {
        let (_, v) = full_vertices(d, n, limits)?;
        let expected = (n * ((1 << d) - 1)) as i64;
        let got = v.dim();
        log.note(format!("{d:>4}{n:>4}{expected:>10}{got:>10}"));
        log.expect(got == expected, format!("full({d},{n})"));
    }
    Ok(())
}

fn nonneg(b: &BlockConfiguration, k: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); b.size()];
    c[k] = Rational::one();
    c
}

fn facets(log: &mut Log, limits: &Limits) -> Result<()> {
    for (d, n) in [(1, 4), (2, 3), (2, 4)] {
        let (b, v) = full_vertices(d, n, limits)?;
        let list = all_los(&b, false, limits)?;
        let mut los_ok = 0;
        for (spec, q) in &list {
            let ok = is_facet(&q.coeffs.dense(&b)?, &q.rhs, &v)?;
            los_ok += ok as usize;
            log.expect(ok, format!("full({d},{n}): LOS (eta={}, I={:?}) is not a facet", spec.eta, spec.blocks_one_based()));
        }
        let mut nn_ok = 0;
        for k in 0..b.size() {
            let ok = is_facet(&nonneg(&b, k), &Rational::zero(), &v)?;
            nn_ok += ok as usize;
            log.expect(ok, format!("full({d},{n}): x_{} >= 0 is not a facet", b.coord(k)));
        }
        log.note(format!(
            "full({d},{n}): {los_ok}/{} LOS facets, {nn_ok}/{} nonnegativity facets",
            list.len(),
            b.size()
        ));
    }
    let (b, v) = full_vertices(1, 3, limits)?;
    let mut nn = 0;
    for k in 0..b.size() {
        nn += is_facet(&nonneg(&b, k), &Rational::zero(), &v)? as usize;
    }
    log.note(format!("full(1,3): {nn}/{} nonnegativity facets", b.size()));
    log.expect(nn == 0, "full(1,3): some nonnegativity inequality defines a facet");
    Ok(())
}

fn rank2(log: &mut Log, seed: u64, limits: &Limits) -> Result<()> {
    let mut rng = seeded(seed ^ 0x4);
    let mut h_sizes = Vec::new();
    for k in 0..20 {
        let d = rng.random_range(2..=4);
        let rank = rng.random_range(1..=2);
        let n = rng.random_range(2..=5);
        let b = random_low_rank_config(d, rank, n, 14, &mut rng);
        let v = VPolytope::new(vertices(&b, limits)?);
        let rep = polytope_equal(&v, &tp_with_all_los(&b, limits)?, limits)?;
        h_sizes.push(rep.h_vertices);
        log.expect(rep.equal, format!("instance {}: {b:?} differs, witness {:?}", k + 1, rep.witness));
    }
    log.note(format!("20 configurations of rank <= 2; vertex counts {h_sizes:?}"));
    Ok(())
}

fn prop5(log: &mut Log, limits: &Limits) -> Result<()> {
    for n in [3, 4] {
        let (b, v) = full_vertices(3, n, limits)?;
        let x = basis_sum_witness(&b)?;
        let sep = separate_los(&b, &x, false, limits)?;
        log.expect(sep.is_none(), format!("n={n}: a LOS inequality cuts the witness"));
        let q = basis_sum_inequality(&b)?;
        let at_most_lhs = -q.evaluate(&b, &x)?.lhs;
        let threshold = -q.rhs.clone();
        log.note(format!(
            "n={n}: basis-sum LHS at witness = {} (threshold {}), expected n - 2/3",
            format_rational(&at_most_lhs),
            format_rational(&threshold)
        ));
        log.expect(at_most_lhs == int(n as i64) - ratio(2, 3), format!("n={n}: wrong LHS"));
        log.expect(at_most_lhs > threshold, format!("n={n}: witness does not violate"));
        log.expect(is_valid(&q.coeffs.dense(&b)?, &q.rhs, &v).valid, format!("n={n}: basis-sum inequality invalid"));
        log.expect(!hull_membership(&x, &v, limits)?, format!("n={n}: witness lies in the hull"));
    }
    let (b, v) = full_vertices(3, 3, limits)?;
    let rep = polytope_equal(&v, &tp_with_all_los(&b, limits)?, limits)?;
    log.note(format!("full(3,3): TP + LOS has {} vertices, CTP has {}", rep.h_vertices, v.len()));
    match &rep.witness {
        Some((Side::HOnly, p)) if !p.is_integral() => {
            log.note(format!("fractional vertex of TP + LOS: {p:?}"));
        }
        other => log.expect(false, format!("expected a fractional extra vertex, got {other:?}")),
    }
    log.expect(!rep.equal, "full(3,3): TP + LOS equals the CTP");
    Ok(())
}

fn lifting(log: &mut Log, seed: u64, limits: &Limits) -> Result<()> {
    let mut rng = seeded(seed ^ 0x6);
    let (mut los_count, mut tp_count) = (0, 0);
    for t in 0..500 {
        let d = rng.random_range(1..=4);
        let n = rng.random_range(1..=4);
        let b = random_config(d, n, 4, &mut rng);
        let r = rng.random_range(1..=4);
        let phi = random_map(r, d, &mut rng);
        let spec = random_spec(r, n, &mut rng);
        let image = b.image(&phi)?;
        let lifted = lift(&phi, &b, &los(&image, &spec)?)?;
        let class = classify_lifting(&phi, &b, &spec)?;
        log.expect(class.inequality() == &lifted, format!("triple {}: classification differs from lifting", t + 1));
        match class {
            LiftClass::Los(..) => los_count += 1,
            LiftClass::TpValid(q) => {
                tp_count += 1;
                for xi in transversals(&b, limits)? {
                    let p = incidence(&xi, &b)?.to_point();
                    log.expect(q.evaluate(&b, &p)?.satisfied(), format!("triple {}: TP-valid lifting violated", t + 1));
                }
            }
        }
    }
    log.note(format!("500 triples: {los_count} LOS liftings, {tp_count} TP-valid liftings"));
    log.expect(tp_count > 0 && los_count > 0, "both branches should occur");
    Ok(())
}

/// Alternates full-support points with mixtures of transversal incidence
/// vectors, which are more often cut by some inequality.
fn sample_tp_points(b: &BlockConfiguration, count: usize, seed: u64, limits: &Limits) -> Result<Vec<RationalPoint>> {
    let mut rng = seeded(seed);
    let tv: Vec<RationalPoint> = transversals(b, limits)?
        .iter()
        .map(|xi| incidence(xi, b).map(|v| v.to_point()))
        .collect::<Result<_>>()?;
    Ok((0..count)
        .map(|k| {
            if k % 2 == 0 {
                random_tp_point(b, &mut rng)
            } else {
                let m = rng.random_range(2..=4);
                random_vertex_mix(&tv, m, &mut rng)
            }
        })
        .collect())
}

fn r2r1(log: &mut Log, seed: u64, limits: &Limits) -> Result<()> {
    for d in [2, 3] {
        let b = BlockConfiguration::full(d, 3)?;
        let points = sample_tp_points(&b, 100, seed ^ (0x70 + d as u64), limits)?;
        let mut inside = 0;
        for (k, x) in points.iter().enumerate() {
            let r1 = rank_r_membership(&b, 1, x, limits)?.member;
            let r2 = rank_r_membership(&b, 2, x, limits)?.member;
            let los_ok = separate_los(&b, x, false, limits)?.is_none();
            inside += r1 as usize;
            log.expect(r1 == r2, format!("full({d},3) point {}: rank 1 says {r1}, rank 2 says {r2}", k + 1));
            log.expect(r1 == los_ok, format!("full({d},3) point {}: rank 1 says {r1}, LOS separation says {los_ok}", k + 1));
        }
        log.note(format!("full({d},3): 100 points, {inside} in the rank-1 relaxation"));
    }
    Ok(())
}

fn ctrank(log: &mut Log, seed: u64, limits: &Limits) -> Result<()> {
    let (b, v) = full_vertices(2, 3, limits)?;
    let mut ones = 0;
    let mut ranks = BTreeSet::new();
    for (spec, q) in all_los(&b, false, limits)? {
        if !is_facet(&q.coeffs.dense(&b)?, &q.rhs, &v)? {
            continue;
        }
        let r = ct_rank(&b, &q, limits)?.rank;
        ranks.insert(r);
        ones += (r == 1) as usize;
        log.expect(r == 1, format!("LOS (eta={}, I={:?}) has CT-rank {r}", spec.eta, spec.blocks_one_based()));
    }
    log.note(format!("full(2,3): {ones} facet-defining LOS inequalities of CT-rank 1"));
    let b3 = BlockConfiguration::full(3, 3)?;
    let q = basis_sum_inequality(&b3)?;
    let res = ct_rank(&b3, &q, limits)?;
    ranks.insert(res.rank);
    log.note(format!(
        "full(3,3): basis-sum inequality has CT-rank {}; certificate LHS {}",
        res.rank,
        res.certificate_lhs.as_ref().map_or("-".into(), format_rational)
    ));
    log.expect(res.rank == 3, "basis-sum inequality should have CT-rank 3");
    // random valid inequalities, made tight by lowering the right-hand side to the vertex minimum
    let mut rng = seeded(seed ^ 0x8);
    for (conf, count) in [(&b, 10), (&b3, 3)] {
        let verts = VPolytope::new(vertices(conf, limits)?);
        for _ in 0..count {
            let c = random_rational_objective(conf.size(), 3, &mut rng);
            let rhs = is_valid(&c, &Rational::zero(), &verts).min_lhs.unwrap();
            let q = LinIneq::new(LinearForm::from_dense(conf, &c), rhs);
            ranks.insert(ct_rank(conf, &q, limits)?.rank);
        }
    }
    log.note(format!("CT-ranks observed: {ranks:?}"));
    log.expect(!ranks.contains(&2), "an inequality reported CT-rank 2");
    Ok(())
}

fn flow(log: &mut Log, seed: u64, limits: &Limits) -> Result<()> {
    let mut rng = seeded(seed ^ 0x9);
    for (name, b) in corpus() {
        let bound = (1usize << b.rank()) * b.size();
        let full_net = build_flownet(&b, false, limits)?;
        let net = build_flownet(&b, true, limits)?;
        log.expect(full_net.arcs().len() <= bound, format!("{name}: {} arcs exceed {bound}", full_net.arcs().len()));
        log.expect(full_net.nodes().len() == 2 + (b.len() - 1) * (1 << b.rank()), format!("{name}: node count"));
        let ps = paths(&net, limits)?;
        let mut projected: Vec<RationalPoint> = ps
            .iter()
            .map(|p| project_to_x(&net, &net.path_indicator(p)))
            .collect::<Result<_>>()?;
        projected.sort();
        let n_paths = projected.len();
        projected.dedup();
        let verts = sorted(vertices(&b, limits)?);
        log.expect(projected.len() == n_paths, format!("{name}: two paths share a projection"));
        log.expect(projected == verts, format!("{name}: projected paths differ from the vertices"));
        log.expect(paths(&full_net, limits)?.len() == n_paths, format!("{name}: pruning changed the path count"));
        let vp = VPolytope::new(verts);
        for _ in 0..10 {
            let c = random_rational_objective(b.size(), 5, &mut rng);
            let lp = optimize_over_flow(&net, &c, limits)?.map(|(v, _)| v);
            let brute = is_valid(&c, &Rational::zero(), &vp).min_lhs;
            log.expect(lp == brute, format!("{name}: flow optimum {lp:?} vs vertex minimum {brute:?}"));
        }
        log.note(format!(
            "{name}: {} arcs (bound {bound}, {} unpruned), {n_paths} paths",
            net.arcs().len(),
            full_net.arcs().len()
        ));
    }
    Ok(())
}

fn brute_sat(f: &SatFormula) -> Vec<Vec<bool>> {
    (0u64..1 << f.num_vars)
        .map(|m| (0..f.num_vars).map(|v| m >> v & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| f.satisfied_by(a))
        .collect()
}

fn subsets(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << k).map(move |m| (0..k).map(|j| m >> j & 1 == 1).collect())
}

fn brute_stable(g: &Graph) -> Vec<Vec<bool>> {
    subsets(g.nodes())
        .filter(|s| g.edges().iter().all(|&(u, v)| !(s[u] && s[v])))
        .collect()
}

fn brute_packings(fam: &SetFamily) -> Vec<Vec<bool>> {
    subsets(fam.members().len())
        .filter(|s| {
            let mut used = vec![false; fam.ground()];
            fam.members().iter().zip(s).filter(|(_, &on)| on).all(|(h, _)| {
                h.iter().all(|&e| !std::mem::replace(&mut used[e], true))
            })
        })
        .collect()
}

fn brute_matchings(g: &Graph, perfect: bool) -> Vec<Vec<bool>> {
    subsets(g.edges().len())
        .filter(|s| {
            let mut deg = vec![0; g.nodes()];
            for (&(u, v), &on) in g.edges().iter().zip(s) {
                if on {
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            deg.iter().all(|&x| x <= 1) && (!perfect || deg.iter().all(|&x| x == 1))
        })
        .collect()
}

fn brute_cuts(g: &Graph) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = subsets(g.nodes())
        .map(|side| g.edges().iter().map(|&(u, v)| side[u] != side[v]).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

fn same(mut a: Vec<Vec<bool>>, mut b: Vec<Vec<bool>>) -> bool {
    a.sort();
    b.sort();
    a == b
}

fn random_2sat<R: Rng>(q: usize, rng: &mut R) -> SatFormula {
    loop {
        let p = rng.random_range(1..=2 * q);
        let clauses: Vec<Vec<i64>> = (0..p)
            .map(|_| {
                let a = rng.random_range(1..=q as i64);
                let len = rng.random_range(1..=2);
                let mut c = vec![if rng.random_bool(0.5) { a } else { -a }];
                if len == 2 && q > 1 {
                    let b = loop {
                        let b = rng.random_range(1..=q as i64);
                        if b != a {
                            break b;
                        }
                    };
                    c.push(if rng.random_bool(0.5) { b } else { -b });
                }
                c
            })
            .collect();
        if let Ok(f) = SatFormula::new(q, clauses) {
            return f;
        }
    }
}

fn reductions(log: &mut Log, seed: u64, limits: &Limits) -> Result<()> {
    let mut rng = seeded(seed ^ 0xa);
    let mut formulas = 0;
    for q in 1..=6 {
        for _ in 0..4 {
            let f = random_2sat(q, &mut rng);
            let r = from_sat(&f, 2)?;
            let p = f.clauses.len();
            let sols = r.solutions(limits)?;
            let size: usize = 2 * q + f.clauses.iter().map(|c| (1usize << c.len()) - 1).sum::<usize>();
            log.expect(same(sols.clone(), brute_sat(&f)), format!("2-SAT {:?}: solution sets differ", f.clauses));
            log.expect(cyclic_transversals(&r.config, limits)?.len() == sols.len(), "2-SAT decode not injective");
            log.expect(r.config.len() == q + p, "2-SAT length");
            log.expect(r.config.size() == size && size <= 2 * q + 3 * p, "2-SAT size");
            log.expect(r.config.rank() <= 2 * p, "2-SAT rank");
            formulas += 1;
        }
    }
    log.note(format!("{formulas} random 2-SAT formulas on 1..6 variables match brute force"));
    for (name, g) in [("P3", Graph::path(3)), ("C5", Graph::cycle(5)), ("K3", Graph::complete(3))] {
        let r = stable_set_config(&g)?;
        let sols = r.solutions(limits)?;
        log.note(format!("stable sets of {name}: {}", sols.len()));
        log.expect(same(sols, brute_stable(&g)), format!("stable sets of {name}"));
        let (v, e) = (g.nodes(), g.edges().len());
        log.expect(r.config.len() == v + e && r.config.size() == 2 * v + 3 * e, format!("{name}: stable set length/size"));
    }
    for (name, g, want, want_perfect) in [("K3", Graph::complete(3), 4, 0), ("K4", Graph::complete(4), 10, 3)] {
        let (v, e) = (g.nodes(), g.edges().len());
        let m = matching_config(&g)?;
        let pm = perfect_matching_config(&g)?;
        let ms = m.solutions(limits)?;
        let pms = pm.solutions(limits)?;
        log.note(format!("{name}: {} matchings, {} perfect matchings", ms.len(), pms.len()));
        log.expect(ms.len() == want && same(ms, brute_matchings(&g, false)), format!("matchings of {name}"));
        log.expect(pms.len() == want_perfect && same(pms, brute_matchings(&g, true)), format!("perfect matchings of {name}"));
        log.expect(m.config.size() == v + 2 * e, format!("{name}: matching size"));
        log.expect(pm.config.size() == 2 * e, format!("{name}: perfect matching size"));
        let fam = SetFamily::new(v, g.edges().iter().map(|&(a, b)| vec![a, b]).collect())?;
        let big = packing_config(&fam)?;
        let hs = fam.members().len();
        let total: usize = fam.members().iter().map(Vec::len).sum();
        log.expect(big.config.len() == hs + v && big.config.size() == 2 * hs + v + total, format!("{name}: packing length/size"));
        log.expect(same(big.solutions(limits)?, brute_packings(&fam)), format!("{name}: packing solutions"));
    }
    // families with members of varied size, including singletons for the large variant
    for _ in 0..10 {
        let ground = rng.random_range(2..=5);
        let k = rng.random_range(1..=4);
        let members: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let s: BTreeSet<usize> = (0..ground).filter(|_| rng.random_bool(0.5)).collect();
                if s.is_empty() { vec![0] } else { s.into_iter().collect() }
            })
            .collect();
        let fam = SetFamily::new(ground, members)?;
        let brute = brute_packings(&fam);
        log.expect(same(packing_config(&fam)?.solutions(limits)?, brute.clone()), format!("packing {:?}", fam.members()));
        if fam.members().iter().all(|h| h.len() >= 2) {
            let small = packing_config_small(&fam)?;
            let total: usize = fam.members().iter().map(Vec::len).sum();
            log.expect(small.config.size() == ground + total, "small packing size");
            log.expect(same(small.solutions(limits)?, brute), format!("small packing {:?}", fam.members()));
        }
    }
    for (name, g, want) in [("K3", Graph::complete(3), 4), ("C4", Graph::cycle(4), 8)] {
        let sols = cut_config(&g, true)?.solutions(limits)?;
        log.note(format!("cuts of {name}: {}", sols.len()));
        log.expect(sols.len() == want && same(sols, brute_cuts(&g)), format!("cuts of {name}"));
    }
    Ok(())
}

fn necessary(log: &mut Log, limits: &Limits) -> Result<()> {
    let mut checked = 0;
    for (name, b) in corpus() {
        let v = VPolytope::new(vertices(&b, limits)?);
        let out = ctp_necessary_condition(&v, limits)?;
        if out == NecessaryOutcome::Pass {
            checked += 1;
        }
        log.expect(out.passed(), format!("{name}: {out:?}"));
    }
    log.note(format!("corpus: all pass ({checked} with a non-power-of-two vertex count)"));
    let tsp = VPolytope::new(tsp_vertices(5));
    let complement: RationalPoint = RationalPoint(tsp.vertices[0].iter().map(|x| int(1) - x).collect());
    let partner = tsp.vertices.iter().position(|p| *p == complement);
    let out = ctp_necessary_condition(&tsp, limits)?;
    log.note(format!("TSP(5): {} vertices, {out:?}", tsp.len()));
    log.expect(tsp.len() == 12, "TSP(5) should have 12 tours");
    log.expect(partner.is_some() && out == NecessaryOutcome::Fail(0, partner.unwrap()), "TSP(5) should fail on tours 1-2-3-4-5 and 1-3-5-2-4");
    let u24 = VPolytope::new(uniform_matroid_vertices(2, 4));
    let out = ctp_necessary_condition(&u24, limits)?;
    log.note(format!("U(2,4): {} vertices, {out:?}", u24.len()));
    log.expect(u24.len() == 6 && !out.passed(), "U(2,4) should fail");
    Ok(())
}

fn separation(log: &mut Log, seed: u64) -> Result<()> {
    let mut rng = seeded(seed ^ 0xc);
    let mut violated = 0;
    for t in 0..200 {
        let d = rng.random_range(1..=4);
        let n = rng.random_range(1..=10);
        let b = random_config(d, n, 4, &mut rng);
        let x = random_tp_point(&b, &mut rng);
        let eta = crate::sample::random_nonzero(d, &mut rng);
        let (_, fast) = min_los_for_eta(&b, &eta, &x)?;
        let brute = odd_subsets(n)
            .map(|set| {
                let spec = crate::ineq::LosSpec::new(eta, set).unwrap();
                los(&b, &spec).and_then(|q| q.evaluate(&b, &x)).map(|e| e.lhs)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .unwrap();
        log.expect(fast == brute, format!("point {}: minimum {fast} vs brute force {brute}", t + 1));
        let cut = separate_los_fixed_eta(&b, &eta, &x)?;
        violated += cut.is_some() as usize;
        log.expect(cut.is_some() == (brute < Rational::one()), format!("point {}: separation verdict", t + 1));
    }
    log.note(format!("200 points: minima agree with brute force; {violated} violated"));
    Ok(())
}
