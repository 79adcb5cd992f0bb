//! Exhaustive enumeration of (cyclic) transversals.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::One;
use rayon::prelude::*;

use crate::config::BlockConfiguration;
use crate::gf2::BitVec;
use crate::rational::{Rational, RationalPoint};
use crate::{CtpError, Limits, Result};

/// A choice of one element per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transversal(pub Vec<BitVec>);

impl Transversal {
    pub fn entries(&self) -> &[BitVec] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// XOR of all entries.
    pub fn sum(&self) -> Option<BitVec> {
        let first = self.0.first()?;
        Some(self.0.iter().fold(BitVec::zero(first.width()), |acc, w| acc.xor(w)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.sum().is_none_or(|s| s.is_zero())
    }

    /// Entry-wise sum with `sigma`.
    pub fn shifted(&self, sigma: &[BitVec]) -> Transversal {
        Transversal(self.0.iter().zip(sigma).map(|(a, b)| a.xor(b)).collect())
    }

    pub fn is_valid_for(&self, b: &BlockConfiguration) -> bool {
        self.len() == b.len() && self.0.iter().enumerate().all(|(i, w)| b.contains(i, w))
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.0.iter().map(|w| w.to_string()).collect()
    }
}

/// Sparse 0/1 incidence vector: the coordinate position chosen in each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceVector {
    positions: Vec<usize>,
    size: usize,
}

impl IncidenceVector {
    /// Positions of the ones, one per block, in block order.
    pub fn support(&self) -> &[usize] {
        &self.positions
    }

    pub fn to_point(&self) -> RationalPoint {
        let mut p = RationalPoint::zeros(self.size);
        for &k in &self.positions {
            p.0[k] = Rational::one();
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.size
    }
}

pub fn is_cyclic(xi: &Transversal) -> bool {
    xi.is_cyclic()
}

fn estimate(b: &BlockConfiguration) -> f64 {
    let product: f64 = b.blocks().iter().map(|blk| blk.len() as f64).product();
    product / 2f64.powi(b.rank() as i32)
}

/// All cyclic transversals in lexicographic order of entry encodings.
///
/// The first `n - 1` entries range over their blocks; the last one is forced
/// to the prefix sum and accepted iff it lies in the final block.
pub fn cyclic_transversals(b: &BlockConfiguration, limits: &Limits) -> Result<Vec<Transversal>> {
    let cap = limits.max_transversals;
    if estimate(b) > cap as f64 {
        return Err(CtpError::CapExceeded {
            what: "transversal enumeration",
            limit: cap,
        });
    }
    let n = b.len();
    let d = b.d();
    if n == 1 {
        let z = BitVec::zero(d);
        return Ok(if b.contains(0, &z) {
            vec![Transversal(vec![z])]
        } else {
            Vec::new()
        });
    }
    let last: HashSet<u64> = b.block(n - 1).iter().map(|w| w.encoding()).collect();
    let count = AtomicU64::new(0);
    let chunks: Vec<Result<Vec<Transversal>>> = b
        .block(0)
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let mut prefix = vec![first];
            dfs(b, &last, &mut prefix, first, &mut out, &count, cap)?;
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    Ok(all)
}

fn dfs(
    b: &BlockConfiguration,
    last: &HashSet<u64>,
    prefix: &mut Vec<BitVec>,
    sum: BitVec,
    out: &mut Vec<Transversal>,
    count: &AtomicU64,
    cap: u64,
) -> Result<()> {
    let n = b.len();
    if prefix.len() == n - 1 {
        if last.contains(&sum.encoding()) {
            if count.fetch_add(1, Ordering::Relaxed) >= cap {
                return Err(CtpError::CapExceeded {
                    what: "transversal enumeration",
                    limit: cap,
                });
            }
            let mut entries = prefix.clone();
            entries.push(sum);
            out.push(Transversal(entries));
        }
        return Ok(());
    }
    for &w in b.block(prefix.len()) {
        prefix.push(w);
        dfs(b, last, prefix, sum.xor(&w), out, count, cap)?;
        prefix.pop();
    }
    Ok(())
}

/// All transversals (cyclic or not), lexicographically.
pub fn transversals(b: &BlockConfiguration, limits: &Limits) -> Result<Vec<Transversal>> {
    let total: f64 = b.blocks().iter().map(|blk| blk.len() as f64).product();
    if total > limits.max_transversals as f64 {
        return Err(CtpError::CapExceeded {
            what: "transversal enumeration",
            limit: limits.max_transversals,
        });
    }
    let mut out = vec![Vec::with_capacity(b.len())];
    for blk in b.blocks() {
        out = out
            .into_iter()
            .flat_map(|p| {
                blk.iter().map(move |&w| {
                    let mut q = p.clone();
                    q.push(w);
                    q
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Transversal).collect())
}

pub fn incidence(xi: &Transversal, b: &BlockConfiguration) -> Result<IncidenceVector> {
    if xi.len() != b.len() {
        return Err(CtpError::DimensionMismatch(format!(
            "transversal has {} entries, configuration has {} blocks",
            xi.len(),
            b.len()
        )));
    }
    let positions = xi
        .0
        .iter()
        .enumerate()
        .map(|(i, w)| {
            b.block(i)
                .binary_search(w)
                .map(|k| b.block_range(i).start + k)
                .map_err(|_| CtpError::NotInBlock {
                    block: i + 1,
                    elem: w.to_string(),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IncidenceVector {
        positions,
        size: b.size(),
    })
}

/// Incidence vectors of all cyclic transversals: the vertices of the CTP.
pub fn vertices(b: &BlockConfiguration, limits: &Limits) -> Result<Vec<RationalPoint>> {
    cyclic_transversals(b, limits)?
        .iter()
        .map(|xi| incidence(xi, b).map(|v| v.to_point()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn brute_force(b: &BlockConfiguration) -> Vec<Transversal> {
        let mut all: Vec<_> = transversals(b, &Limits::default())
            .unwrap()
            .into_iter()
            .filter(|t| t.is_cyclic())
            .collect();
        all.sort();
        all
    }

    #[test]
    fn cyclicity_examples() {
        let w = bv("101");
        assert!(Transversal(vec![w, w]).is_cyclic());
        assert!(!Transversal(vec![bv("100"), bv("010")]).is_cyclic());
        assert!(Transversal(vec![bv("100"), bv("010"), bv("110")]).is_cyclic());
    }

    #[test]
    fn full_counts() {
        let limits = Limits::default();
        for (d, n) in [(1, 3), (2, 3), (1, 5), (2, 4)] {
            let f = BlockConfiguration::full(d, n).unwrap();
            assert_eq!(cyclic_transversals(&f, &limits).unwrap().len(), 1 << (d * (n - 1)));
        }
        let b = BlockConfiguration::from_strs(3, &[&["100"], &["010"]]).unwrap();
        assert!(cyclic_transversals(&b, &limits).unwrap().is_empty());
    }

    #[test]
    fn matches_brute_force_in_order() {
        let b = BlockConfiguration::from_strs(
            3,
            &[&["000", "110", "011"], &["100", "010", "111"], &["101", "001", "000"], &["110", "011"]],
        )
        .unwrap();
        let fast = cyclic_transversals(&b, &Limits::default()).unwrap();
        assert_eq!(fast, brute_force(&b));
        let repeat = cyclic_transversals(&b, &Limits::default()).unwrap();
        assert_eq!(fast, repeat);
    }

    #[test]
    fn cap_is_enforced() {
        let f = BlockConfiguration::full(2, 6).unwrap();
        let limits = Limits {
            max_transversals: 100,
            ..Limits::default()
        };
        assert!(cyclic_transversals(&f, &limits).unwrap_err().is_cap_exceeded());
        // the estimate is below the cap here but the DFS still hits it
        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["00", "11"], &["00", "11"]]).unwrap();
        let tight = Limits {
            max_transversals: 3,
            ..Limits::default()
        };
        assert!(cyclic_transversals(&b, &tight).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn incidence_examples() {
        let b = BlockConfiguration::full(2, 3).unwrap();
        let cts = cyclic_transversals(&b, &Limits::default()).unwrap();
        let mut seen = BTreeSet::new();
        for xi in &cts {
            let v = incidence(xi, &b).unwrap();
            assert_eq!(v.support().len(), 3);
            let p = v.to_point();
            for i in 0..3 {
                let s: Rational = b.block_range(i).map(|k| p[k].clone()).sum();
                assert!(s.is_one());
            }
            assert!(seen.insert(p));
        }
        let bad = Transversal(vec![bv("00"), bv("00"), bv("00")]);
        let small = BlockConfiguration::from_strs(2, &[&["00"], &["11"], &["11"]]).unwrap();
        assert!(incidence(&bad, &small).is_err());
    }

    #[test]
    fn vertex_examples() {
        let limits = Limits::default();
        let f = BlockConfiguration::full(1, 3).unwrap();
        let vs = vertices(&f, &limits).unwrap();
        let proj: BTreeSet<String> = vs
            .iter()
            .map(|p| (0..3).map(|i| if p[2 * i + 1].is_one() { '1' } else { '0' }).collect())
            .collect();
        let expected: BTreeSet<String> = ["000", "110", "101", "011"].iter().map(|s| s.to_string()).collect();
        assert_eq!(proj, expected);

        let omega = vec![bv("00"), bv("10"), bv("11")];
        let simplex = BlockConfiguration::new(2, vec![omega.clone(), omega]).unwrap();
        assert_eq!(vertices(&simplex, &limits).unwrap().len(), 3);

        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["00", "11"], &["00", "11"]]).unwrap();
        assert_eq!(vertices(&b, &limits).unwrap().len(), brute_force(&b).len());
        assert_eq!(brute_force(&b).len(), 4);
    }

    #[test]
    fn shift_equivariance() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "01", "11"], &["10", "01"], &["11", "10", "00"]]).unwrap();
        let sigma = vec![bv("11"), bv("01"), bv("10")];
        let shifted = b.shift(&sigma, true).unwrap();
        let limits = Limits::default();
        let mut moved: Vec<_> = cyclic_transversals(&b, &limits)
            .unwrap()
            .iter()
            .map(|xi| xi.shifted(&sigma))
            .collect();
        moved.sort();
        assert_eq!(moved, cyclic_transversals(&shifted, &limits).unwrap());
        // shifting by a cyclic transversal puts the zero vector into every block
        for xi in cyclic_transversals(&b, &limits).unwrap() {
            let s = b.shift(xi.entries(), true).unwrap();
            assert!((0..3).all(|i| s.contains(i, &BitVec::zero(2))));
        }
    }

    #[test]
    fn images_of_cyclic_transversals_are_cyclic() {
        let b = BlockConfiguration::full(3, 3).unwrap();
        let phi = crate::gf2::BitMatrix::from_strs(3, &["110", "011"]).unwrap();
        let img = b.image(&phi).unwrap();
        let limits = Limits::default();
        let targets: HashSet<Transversal> = cyclic_transversals(&img, &limits).unwrap().into_iter().collect();
        for xi in cyclic_transversals(&b, &limits).unwrap() {
            let mapped = Transversal(xi.entries().iter().map(|w| phi.apply(w).unwrap()).collect());
            assert!(targets.contains(&mapped));
        }
    }
}
