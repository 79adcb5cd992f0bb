//! Block configurations and their structural operations.

use std::fmt;
use std::ops::Range;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::gf2::{self, BitMatrix, BitVec};
use crate::rational::{format_rational, parse_rational, Rational, RationalPoint};
use crate::{CtpError, Limits, Result};

/// A coordinate `(i, omega)` of the space indexed by a configuration.
/// Blocks are 0-based in the API and 1-based in every text format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordIndex {
    pub block: usize,
    pub elem: BitVec,
}

impl CoordIndex {
    pub fn new(block: usize, elem: BitVec) -> Self {
        CoordIndex { block, elem }
    }
}

impl fmt::Display for CoordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}_{}", self.block + 1, self.elem)
    }
}

/// An ordered sequence of non-empty subsets of `F_2^d`.
///
/// Blocks are kept sorted by element encoding, which fixes the coordinate
/// layout: ascending block, then ascending encoding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockConfiguration {
    d: usize,
    blocks: Vec<Vec<BitVec>>,
    offsets: Vec<usize>,
}

impl BlockConfiguration {
    pub fn new(d: usize, blocks: Vec<Vec<BitVec>>) -> Result<Self> {
        if d == 0 || d > gf2::MAX_WIDTH {
            return Err(CtpError::InvalidWidth(d));
        }
        if blocks.is_empty() {
            return Err(CtpError::NoBlocks);
        }
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(CtpError::EmptyBlock(i + 1));
            }
            for w in &block {
                if w.width() != d {
                    return Err(CtpError::WidthMismatch {
                        expected: d,
                        found: w.width(),
                    });
                }
            }
            block.sort_unstable();
            block.dedup();
            sorted.push(block);
        }
        let mut offsets = Vec::with_capacity(sorted.len() + 1);
        let mut acc = 0;
        for b in &sorted {
            offsets.push(acc);
            acc += b.len();
        }
        offsets.push(acc);
        Ok(BlockConfiguration {
            d,
            blocks: sorted,
            offsets,
        })
    }

    /// Convenience constructor from bitstrings.
    pub fn from_strs(d: usize, blocks: &[&[&str]]) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|s| s.parse()).collect::<Result<Vec<BitVec>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, blocks)
    }

    /// The full configuration: `n` copies of `F_2^d`.
    pub fn full(d: usize, n: usize) -> Result<Self> {
        Self::full_with(d, n, &Limits::default())
    }

    pub fn full_with(d: usize, n: usize, limits: &Limits) -> Result<Self> {
        if d == 0 {
            return Err(CtpError::InvalidWidth(d));
        }
        limits.check_width(d)?;
        let all: Vec<BitVec> = (0..1u64 << d).map(|b| BitVec::from_bits(d, b)).collect();
        Self::new(d, vec![all; n])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total number of coordinates.
    pub fn size(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn blocks(&self) -> &[Vec<BitVec>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[BitVec] {
        &self.blocks[i]
    }

    pub fn contains(&self, i: usize, w: &BitVec) -> bool {
        self.blocks
            .get(i)
            .is_some_and(|b| b.binary_search(w).is_ok())
    }

    pub fn span_basis(&self) -> Vec<BitVec> {
        let all: Vec<BitVec> = self.blocks.iter().flatten().copied().collect();
        gf2::basis(&all).expect("uniform width")
    }

    pub fn rank(&self) -> usize {
        self.span_basis().len()
    }

    /// Elements of the span of all blocks, sorted by encoding.
    pub fn span(&self) -> Vec<BitVec> {
        let enc: Vec<u64> = self.span_basis().iter().map(|b| b.encoding()).collect();
        gf2::span_of_basis(self.d, &enc)
    }

    pub fn is_full(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1usize << self.d)
    }

    /// Position range of block `i` in the coordinate layout.
    pub fn block_range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn index_of(&self, c: &CoordIndex) -> Option<usize> {
        let pos = self.blocks.get(c.block)?.binary_search(&c.elem).ok()?;
        Some(self.offsets[c.block] + pos)
    }

    pub fn require_index(&self, c: &CoordIndex) -> Result<usize> {
        self.index_of(c).ok_or_else(|| CtpError::NotInBlock {
            block: c.block + 1,
            elem: c.elem.to_string(),
        })
    }

    pub fn coord(&self, pos: usize) -> CoordIndex {
        let block = self.offsets.partition_point(|&o| o <= pos) - 1;
        CoordIndex {
            block,
            elem: self.blocks[block][pos - self.offsets[block]],
        }
    }

    /// All coordinates in canonical order.
    pub fn coords(&self) -> impl Iterator<Item = CoordIndex> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, b)| {
            b.iter().map(move |&elem| CoordIndex { block: i, elem })
        })
    }

    pub(crate) fn check_point(&self, x: &RationalPoint) -> Result<()> {
        if x.len() != self.size() {
            return Err(CtpError::DimensionMismatch(format!(
                "point has {} coordinates, configuration has size {}",
                x.len(),
                self.size()
            )));
        }
        Ok(())
    }

    fn check_sequence(&self, sigma: &[BitVec]) -> Result<()> {
        if sigma.len() != self.len() {
            return Err(CtpError::DimensionMismatch(format!(
                "sequence has length {}, configuration has {} blocks",
                sigma.len(),
                self.len()
            )));
        }
        for s in sigma {
            if s.width() != self.d {
                return Err(CtpError::WidthMismatch {
                    expected: self.d,
                    found: s.width(),
                });
            }
        }
        Ok(())
    }

    /// The sigma-shift `(B(1) + sigma(1), ..., B(n) + sigma(n))`.
    pub fn shift(&self, sigma: &[BitVec], require_cyclic: bool) -> Result<Self> {
        self.check_sequence(sigma)?;
        if require_cyclic {
            ensure_cyclic(self.d, sigma)?;
        }
        let blocks = self
            .blocks
            .iter()
            .zip(sigma)
            .map(|(b, s)| b.iter().map(|w| w.xor(s)).collect())
            .collect();
        Self::new(self.d, blocks)
    }

    /// The configuration `phi(B)`; duplicate images collapse.
    pub fn image(&self, phi: &BitMatrix) -> Result<Self> {
        self.check_map(phi)?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|w| phi.apply_unchecked(w)).collect())
            .collect();
        Self::new(phi.nrows(), blocks)
    }

    fn check_map(&self, phi: &BitMatrix) -> Result<()> {
        if phi.ncols() != self.d || phi.nrows() == 0 {
            return Err(CtpError::DimensionMismatch(format!(
                "map is {}x{}, configuration width is {}",
                phi.nrows(),
                phi.ncols(),
                self.d
            )));
        }
        Ok(())
    }

    /// For every coordinate of `self`, the position of its image coordinate in
    /// `image`.
    pub(crate) fn image_positions(&self, phi: &BitMatrix, image: &BlockConfiguration) -> Vec<usize> {
        self.coords()
            .map(|c| {
                let target = CoordIndex::new(c.block, phi.apply_unchecked(&c.elem));
                image.index_of(&target).expect("image coordinate exists")
            })
            .collect()
    }

    /// Applies the phi-induced map: image coordinate `(i, w')` collects the
    /// mass of all `(i, w)` with `phi(w) = w'`.
    pub fn induced_map_apply(&self, phi: &BitMatrix, x: &RationalPoint) -> Result<(Self, RationalPoint)> {
        self.check_map(phi)?;
        self.check_point(x)?;
        let image = self.image(phi)?;
        let positions = self.image_positions(phi, &image);
        let mut out = vec![Rational::zero(); image.size()];
        for (v, &p) in x.iter().zip(&positions) {
            out[p] += v;
        }
        Ok((image, RationalPoint(out)))
    }

    /// Zero-fills a point over `self` into the coordinate space of the full
    /// configuration with the same width and length.
    pub fn embed_into_full(&self, x: &RationalPoint) -> Result<(Self, RationalPoint)> {
        self.check_point(x)?;
        let full = Self::full(self.d, self.len())?;
        let mut out = RationalPoint::zeros(full.size());
        for (pos, c) in self.coords().enumerate() {
            out.0[full.index_of(&c).unwrap()] = x[pos].clone();
        }
        Ok((full, out))
    }

    /// The coordinate projection from the full configuration onto `self`.
    pub fn restrict_from_full(&self, full_point: &RationalPoint) -> Result<RationalPoint> {
        let full = Self::full(self.d, self.len())?;
        full.check_point(full_point)?;
        Ok(RationalPoint(
            self.coords()
                .map(|c| full_point[full.index_of(&c).unwrap()].clone())
                .collect(),
        ))
    }

    /// Cartesian-product configuration: blocks of `a` padded with zeros in
    /// the high coordinates, then blocks of `b` padded in the low ones.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        let za = BitVec::zero(a.d);
        let zb = BitVec::zero(b.d);
        let mut blocks = Vec::with_capacity(a.len() + b.len());
        for blk in &a.blocks {
            blocks.push(blk.iter().map(|w| w.concat(&zb)).collect::<Result<Vec<_>>>()?);
        }
        for blk in &b.blocks {
            blocks.push(blk.iter().map(|w| za.concat(w)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(a.d + b.d, blocks)
    }

    pub fn to_json(&self) -> String {
        let file = ConfigFile {
            d: self.d,
            blocks: self.blocks.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile = serde_json::from_str(text)?;
        Self::new(file.d, file.blocks)
    }

    /// Writes a point as `{"coords": [{"block", "elem", "v"}]}`, skipping zeros.
    pub fn point_to_json(&self, x: &RationalPoint) -> Result<String> {
        if x.len() != self.size() {
            return Err(CtpError::DimensionMismatch(format!("point has {} coordinates, expected {}", x.len(), self.size())));
        }
        let coords = self
            .coords()
            .zip(x.iter())
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| PointEntry {
                block: c.block + 1,
                elem: c.elem,
                v: format_rational(v),
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&PointFile { coords }).expect("serializable");
        s.push('\n');
        Ok(s)
    }

    /// Reads the point format; unlisted coordinates are zero.
    pub fn point_from_json(&self, text: &str) -> Result<RationalPoint> {
        let file: PointFile = serde_json::from_str(text)?;
        let mut x = RationalPoint::zeros(self.size());
        for e in &file.coords {
            if e.block == 0 {
                return Err(CtpError::Parse("block indices are 1-based".into()));
            }
            let k = self.require_index(&CoordIndex::new(e.block - 1, e.elem))?;
            x.0[k] = parse_rational(&e.v)?;
        }
        Ok(x)
    }
}

#[derive(Serialize, Deserialize)]
struct PointEntry {
    block: usize,
    elem: BitVec,
    v: String,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    coords: Vec<PointEntry>,
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    d: usize,
    blocks: Vec<Vec<BitVec>>,
}

impl fmt::Debug for BlockConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockConfiguration(d={}, ", self.d)?;
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let elems: Vec<String> = b.iter().map(|w| w.to_string()).collect();
                format!("{{{}}}", elems.join(","))
            })
            .collect();
        write!(f, "{})", parts.join(" "))
    }
}

pub(crate) fn ensure_cyclic(d: usize, sigma: &[BitVec]) -> Result<()> {
    let sum = sigma.iter().fold(BitVec::zero(d), |acc, s| acc.xor(s));
    if !sum.is_zero() {
        return Err(CtpError::NotCyclic(sum.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn constructor_examples() {
        let full = BlockConfiguration::full(2, 3).unwrap();
        assert_eq!((full.len(), full.size(), full.rank()), (3, 12, 2));
        let b = BlockConfiguration::from_strs(3, &[&["100"], &["010"]]).unwrap();
        assert_eq!(b.rank(), 2);
        assert_eq!(
            BlockConfiguration::from_strs(1, &[&[], &["0"]]),
            Err(CtpError::EmptyBlock(1))
        );
        assert_eq!(BlockConfiguration::new(2, vec![]), Err(CtpError::NoBlocks));
        assert!(BlockConfiguration::from_strs(2, &[&["01"], &["1"]]).is_err());
    }

    #[test]
    fn full_examples() {
        for (d, n) in [(1, 3), (2, 2), (3, 4)] {
            let f = BlockConfiguration::full(d, n).unwrap();
            assert_eq!(f.size(), n << d);
            assert_eq!(f.rank(), d);
        }
        let f = BlockConfiguration::full(1, 3).unwrap();
        for i in 0..3 {
            assert_eq!(f.block(i), &[bv("0"), bv("1")]);
        }
        assert!(BlockConfiguration::full(25, 2).unwrap_err().is_cap_exceeded());
    }

    #[test]
    fn coordinate_layout() {
        let b = BlockConfiguration::from_strs(2, &[&["11", "00"], &["10"], &["01", "10", "11"]]).unwrap();
        let coords: Vec<_> = b.coords().collect();
        assert_eq!(coords.len(), 6);
        assert_eq!(coords[0], CoordIndex::new(0, bv("00")));
        assert_eq!(coords[1], CoordIndex::new(0, bv("11")));
        assert_eq!(coords[3], CoordIndex::new(2, bv("10")));
        for (k, c) in coords.iter().enumerate() {
            assert_eq!(b.index_of(c), Some(k));
            assert_eq!(b.coord(k), *c);
        }
        assert_eq!(b.index_of(&CoordIndex::new(1, bv("01"))), None);
    }

    #[test]
    fn shift_examples() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["10", "01"], &["11"]]).unwrap();
        let zero = vec![BitVec::zero(2); 3];
        assert_eq!(b.shift(&zero, true).unwrap(), b);
        let sigma = vec![bv("11"), bv("10"), bv("01")];
        assert_eq!(b.shift(&sigma, true).unwrap().shift(&sigma, true).unwrap(), b);
        let bad = vec![bv("11"), bv("00"), bv("00")];
        assert!(matches!(b.shift(&bad, true), Err(CtpError::NotCyclic(_))));
        assert!(b.shift(&bad, false).is_ok());
        assert!(b.shift(&sigma[..2], true).is_err());
    }

    #[test]
    fn image_examples() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["10", "01"]]).unwrap();
        assert_eq!(b.image(&BitMatrix::identity(2)).unwrap(), b);
        let zero = b.image(&BitMatrix::zero(1, 2)).unwrap();
        assert!(zero.blocks().iter().all(|blk| blk == &[BitVec::zero(1)]));
        let parity = b.image(&BitMatrix::from_strs(2, &["11"]).unwrap()).unwrap();
        assert_eq!(parity, BlockConfiguration::from_strs(1, &[&["0"], &["1"]]).unwrap());
    }

    #[test]
    fn induced_map_examples() {
        let b = BlockConfiguration::full(2, 3).unwrap();
        let x = RationalPoint((0..12).map(int).collect());
        let (img, y) = b.induced_map_apply(&BitMatrix::identity(2), &x).unwrap();
        assert_eq!(img, b);
        assert_eq!(y, x);
        let (img, y) = b.induced_map_apply(&BitMatrix::zero(1, 2), &x).unwrap();
        assert_eq!(img.size(), 3);
        assert_eq!(y, RationalPoint::from_ints(&[6, 22, 38]));
    }

    #[test]
    fn embed_round_trip() {
        let b = BlockConfiguration::from_strs(2, &[&["00", "11"], &["10"], &["01", "10"]]).unwrap();
        let x = RationalPoint::from_ints(&[1, 2, 3, 4, 5]);
        let (full, y) = b.embed_into_full(&x).unwrap();
        assert_eq!(full.size(), 12);
        assert_eq!(y.iter().filter(|v| !v.is_zero()).count(), 5);
        assert_eq!(b.restrict_from_full(&y).unwrap(), x);
        let f = BlockConfiguration::full(2, 2).unwrap();
        let z = RationalPoint((0..8).map(int).collect());
        assert_eq!(f.embed_into_full(&z).unwrap().1, z);
    }

    #[test]
    fn product_examples() {
        let a = BlockConfiguration::from_strs(2, &[&["00", "10"], &["01", "11"]]).unwrap();
        let b = BlockConfiguration::from_strs(1, &[&["0", "1"], &["1"], &["0", "1"]]).unwrap();
        let p = BlockConfiguration::product(&a, &b).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p.size(), a.size() + b.size());
        assert_eq!(p.rank(), a.rank() + b.rank());
        assert_eq!(p.d(), 3);
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let b = BlockConfiguration::from_strs(3, &[&["110", "000"], &["011"], &["101", "011"]]).unwrap();
        let text = b.to_json();
        let back = BlockConfiguration::from_json(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"000\""));
    }

    #[test]
    fn point_json_round_trip() {
        let b = BlockConfiguration::full(2, 2).unwrap();
        let x = RationalPoint(vec![int(1) / int(2), int(0), int(1) / int(2), int(0), int(1), int(0), int(0), int(0)]);
        let text = b.point_to_json(&x).unwrap();
        assert!(text.contains("\"v\": \"1/2\""));
        assert_eq!(b.point_from_json(&text).unwrap(), x);
        let bad = r#"{"coords": [{"block": 3, "elem": "00", "v": "1"}]}"#;
        assert!(b.point_from_json(bad).is_err());
    }
}
