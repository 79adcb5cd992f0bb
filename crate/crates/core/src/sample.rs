//! Seeded random instances: points of the transversal polytope, vertex
//! mixtures, configurations, maps and odd-set specifications.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::Exp1;

use crate::config::BlockConfiguration;
use crate::gf2::{self, BitMatrix, BitVec};
use crate::ineq::LosSpec;
use crate::rational::{int, ratio, Rational, RationalPoint};

/// Denominator used when rationalizing sampled weights.
pub const DENOMINATOR: i64 = 1000;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splits `DENOMINATOR` into `k` positive parts proportional to exponential
/// weights (parts may be zero only if `k > DENOMINATOR`).
fn split_unit<R: Rng>(rng: &mut R, k: usize) -> Vec<i64> {
    let w: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    let base = if (k as i64) <= DENOMINATOR { 1 } else { 0 };
    let spare = (DENOMINATOR - base * k as i64).max(0) as f64;
    let mut parts: Vec<i64> = w.iter().map(|x| base + (spare * x / total).floor() as i64).collect();
    let sum: i64 = parts.iter().sum();
    let largest = (0..k).max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a))).unwrap();
    parts[largest] += DENOMINATOR - sum;
    parts
}

/// A point of the transversal polytope with full support (for blocks of at
/// most `DENOMINATOR` elements) and denominators dividing `DENOMINATOR`.
pub fn random_tp_point<R: Rng>(b: &BlockConfiguration, rng: &mut R) -> RationalPoint {
    let mut x = Vec::with_capacity(b.size());
    for blk in b.blocks() {
        for p in split_unit(rng, blk.len()) {
            x.push(ratio(p, DENOMINATOR));
        }
    }
    RationalPoint(x)
}

/// A convex combination of `k` distinct vertices with weights `1..=10`.
pub fn random_vertex_mix<R: Rng>(vertices: &[RationalPoint], k: usize, rng: &mut R) -> RationalPoint {
    assert!(!vertices.is_empty());
    let k = k.clamp(1, vertices.len());
    let picks = index::sample(rng, vertices.len(), k).into_vec();
    let weights: Vec<i64> = (0..k).map(|_| rng.random_range(1..=10)).collect();
    let total: i64 = weights.iter().sum();
    let refs: Vec<&RationalPoint> = picks.iter().map(|&i| &vertices[i]).collect();
    let w: Vec<Rational> = weights.iter().map(|&v| ratio(v, total)).collect();
    RationalPoint::combination(&refs, &w)
}

pub fn random_bitvec<R: Rng>(d: usize, rng: &mut R) -> BitVec {
    let mask = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    BitVec::new(d, rng.random::<u64>() & mask).unwrap()
}

pub fn random_nonzero<R: Rng>(d: usize, rng: &mut R) -> BitVec {
    loop {
        let v = random_bitvec(d, rng);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_map<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    let r: Vec<BitVec> = (0..rows).map(|_| random_bitvec(cols, rng)).collect();
    BitMatrix::from_rows(cols, &r).unwrap()
}

/// A uniformly random odd subset of `0..n`.
pub fn random_odd_set<R: Rng>(n: usize, rng: &mut R) -> BTreeSet<usize> {
    loop {
        let set: BTreeSet<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if set.len() % 2 == 1 {
            return set;
        }
    }
}

pub fn random_spec<R: Rng>(d: usize, n: usize, rng: &mut R) -> LosSpec {
    LosSpec {
        eta: random_nonzero(d, rng),
        odd_set: random_odd_set(n, rng),
    }
}

fn random_subset<R: Rng>(pool: &[BitVec], max: usize, rng: &mut R) -> Vec<BitVec> {
    let k = rng.random_range(1..=max.min(pool.len()));
    index::sample(rng, pool.len(), k).into_iter().map(|i| pool[i]).collect()
}

/// `n` blocks, each a random non-empty subset of `F_2^d` of at most
/// `max_block` elements.
pub fn random_config<R: Rng>(d: usize, n: usize, max_block: usize, rng: &mut R) -> BlockConfiguration {
    let all: Vec<BitVec> = (0..1u64 << d).map(|e| BitVec::new(d, e).unwrap()).collect();
    let blocks = (0..n).map(|_| random_subset(&all, max_block, rng)).collect();
    BlockConfiguration::new(d, blocks).unwrap()
}

/// Blocks drawn from a random subspace of dimension `rank`, with total size
/// at most `max_size` (at least one element per block).
pub fn random_low_rank_config<R: Rng>(d: usize, rank: usize, n: usize, max_size: usize, rng: &mut R) -> BlockConfiguration {
    assert!(rank <= d && n <= max_size);
    let basis = loop {
        let cand: Vec<BitVec> = (0..rank).map(|_| random_nonzero(d, rng)).collect();
        if gf2::rank(&cand).unwrap() == rank {
            break cand;
        }
    };
    let space = gf2::span(&basis, d).unwrap();
    let mut budget = max_size - n;
    let mut blocks = Vec::with_capacity(n);
    for _ in 0..n {
        let blk = random_subset(&space, 1 + budget, rng);
        budget -= blk.len() - 1;
        blocks.push(blk);
    }
    BlockConfiguration::new(d, blocks).unwrap()
}

/// Integer objective entries in `-range..=range`.
pub fn random_objective<R: Rng>(len: usize, range: i64, rng: &mut R) -> Vec<Rational> {
    (0..len).map(|_| int(rng.random_range(-range..=range))).collect()
}

/// Objective entries `p/q` with `|p| <= range`, `1 <= q <= 4`.
pub fn random_rational_objective<R: Rng>(len: usize, range: i64, rng: &mut R) -> Vec<Rational> {
    (0..len)
        .map(|_| ratio(rng.random_range(-range..=range), rng.random_range(1..=4)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::check_in_tp;
    use num_traits::Signed;

    #[test]
    fn tp_points_are_in_tp() {
        let mut rng = seeded(1);
        let b = random_config(3, 5, 8, &mut rng);
        for _ in 0..50 {
            let x = random_tp_point(&b, &mut rng);
            check_in_tp(&b, &x).unwrap();
            assert!(x.iter().all(|v| v.is_positive()));
            assert!(x.iter().all(|v| (v * int(DENOMINATOR)).is_integer()));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let b = BlockConfiguration::full(2, 3).unwrap();
        let a = random_tp_point(&b, &mut seeded(9));
        let c = random_tp_point(&b, &mut seeded(9));
        assert_eq!(a, c);
    }

    #[test]
    fn low_rank_configs_respect_bounds() {
        let mut rng = seeded(3);
        for _ in 0..50 {
            let b = random_low_rank_config(4, 2, 4, 14, &mut rng);
            assert!(b.rank() <= 2);
            assert!(b.size() <= 14);
            assert_eq!(b.len(), 4);
        }
    }

    #[test]
    fn odd_sets_are_odd() {
        let mut rng = seeded(4);
        for n in 1..8 {
            let s = random_odd_set(n, &mut rng);
            assert_eq!(s.len() % 2, 1);
            assert!(s.iter().all(|&i| i < n));
        }
    }
}
