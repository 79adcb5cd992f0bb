//! Linear algebra over the two-element field.
//!
//! Vectors are packed into a single machine word together with their width.
//! Coordinate `j` (1-based in the text form, 0-based in the API) is bit `j`
//! of the integer encoding, so the encoding of `"110"` is `3`. This encoding
//! fixes the order of elements inside blocks everywhere else in the crate.

use std::fmt;
use std::str::FromStr;

use crate::{CtpError, Result};

/// Largest width a [`BitVec`] can hold.
pub const MAX_WIDTH: usize = 64;

/// An element of `F_2^d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    width: u8,
    bits: u64,
}

fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitVec {
    pub fn new(width: usize, bits: u64) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(CtpError::InvalidWidth(width));
        }
        if bits & !mask(width) != 0 {
            return Err(CtpError::DimensionMismatch(format!(
                "encoding {bits} does not fit into width {width}"
            )));
        }
        Ok(BitVec {
            width: width as u8,
            bits,
        })
    }

    /// Builds a vector from an encoding, truncating bits above `width`.
    pub(crate) fn from_bits(width: usize, bits: u64) -> Self {
        debug_assert!((1..=MAX_WIDTH).contains(&width));
        BitVec {
            width: width as u8,
            bits: bits & mask(width),
        }
    }

    pub fn zero(width: usize) -> Self {
        Self::from_bits(width, 0)
    }

    pub fn ones(width: usize) -> Self {
        Self::from_bits(width, u64::MAX)
    }

    /// Standard basis vector with a one at 0-based coordinate `j`.
    pub fn unit(width: usize, j: usize) -> Self {
        assert!(j < width, "coordinate {j} out of range for width {width}");
        Self::from_bits(width, 1u64 << j)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mut enc = 0u64;
        for (j, &b) in bits.iter().enumerate() {
            if b {
                enc |= 1 << j;
            }
        }
        Self::new(bits.len(), enc)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Little-endian integer encoding (coordinate 1 is the least significant bit).
    pub fn encoding(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.width(), "coordinate {j} out of range");
        (self.bits >> j) & 1 == 1
    }

    pub fn with_bit(self, j: usize, value: bool) -> Self {
        assert!(j < self.width(), "coordinate {j} out of range");
        let bits = if value {
            self.bits | (1 << j)
        } else {
            self.bits & !(1 << j)
        };
        BitVec { bits, ..self }
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    fn same_width(&self, other: &BitVec) -> Result<()> {
        if self.width != other.width {
            return Err(CtpError::WidthMismatch {
                expected: self.width(),
                found: other.width(),
            });
        }
        Ok(())
    }

    /// Component-wise XOR.
    pub fn add(&self, other: &BitVec) -> Result<BitVec> {
        self.same_width(other)?;
        Ok(self.xor(other))
    }

    /// Parity of the coordinate-wise product.
    pub fn dot(&self, other: &BitVec) -> Result<bool> {
        self.same_width(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn xor(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.width, other.width);
        BitVec {
            width: self.width,
            bits: self.bits ^ other.bits,
        }
    }

    pub(crate) fn dot_unchecked(&self, other: &BitVec) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// Concatenates `self` (low coordinates) with `other` (high coordinates).
    pub fn concat(&self, other: &BitVec) -> Result<BitVec> {
        let width = self.width() + other.width();
        BitVec::new(width, self.bits | (other.bits << self.width()))
    }

    /// Bitstring of length `d`; character `k` is coordinate `k`.
    pub fn to_bitstring(&self) -> String {
        (0..self.width())
            .map(|j| if self.get(j) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bitstring())
    }
}

impl FromStr for BitVec {
    type Err = CtpError;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        let mut width = 0usize;
        for (j, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' if j < MAX_WIDTH => bits |= 1 << j,
                '1' => {}
                _ => return Err(CtpError::Parse(format!("invalid bit character {c:?} in {s:?}"))),
            }
            width = j + 1;
        }
        BitVec::new(width, bits)
    }
}

impl serde::Serialize for BitVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bitstring())
    }
}

impl<'de> serde::Deserialize<'de> for BitVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn uniform_width(vectors: &[BitVec]) -> Result<Option<usize>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    for v in vectors {
        first.same_width(v)?;
    }
    Ok(Some(first.width()))
}

/// Reduces `vectors` to an echelon basis of their span. Each basis vector has
/// a distinct lowest set bit (its pivot), and no other basis vector has that
/// bit set.
pub(crate) fn echelon_basis(vectors: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            let pivot = b & b.wrapping_neg();
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let pivot = v & v.wrapping_neg();
            for b in basis.iter_mut() {
                if *b & pivot != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable_by_key(|b| b.trailing_zeros());
    basis
}

/// Dimension of the span of `vectors`.
pub fn rank(vectors: &[BitVec]) -> Result<usize> {
    uniform_width(vectors)?;
    Ok(echelon_basis(vectors.iter().map(|v| v.bits)).len())
}

/// Reduced echelon basis of the span, ordered by pivot coordinate.
pub fn basis(vectors: &[BitVec]) -> Result<Vec<BitVec>> {
    let Some(width) = uniform_width(vectors)? else {
        return Ok(Vec::new());
    };
    Ok(echelon_basis(vectors.iter().map(|v| v.bits))
        .into_iter()
        .map(|b| BitVec::from_bits(width, b))
        .collect())
}

pub(crate) fn span_of_basis(width: usize, basis: &[u64]) -> Vec<BitVec> {
    let mut out = Vec::with_capacity(1 << basis.len());
    for mask in 0u64..(1u64 << basis.len()) {
        let mut v = 0;
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                v ^= b;
            }
        }
        out.push(BitVec::from_bits(width, v));
    }
    out.sort_unstable();
    out
}

/// All elements of the span, sorted by encoding. The span of the empty list
/// is `{0}` when a width is supplied.
pub fn span(vectors: &[BitVec], width: usize) -> Result<Vec<BitVec>> {
    if let Some(w) = uniform_width(vectors)? {
        if w != width {
            return Err(CtpError::WidthMismatch {
                expected: width,
                found: w,
            });
        }
    }
    if width == 0 || width > MAX_WIDTH {
        return Err(CtpError::InvalidWidth(width));
    }
    let basis = echelon_basis(vectors.iter().map(|v| v.bits));
    Ok(span_of_basis(width, &basis))
}

/// A linear map `F_2^cols -> F_2^rows`, stored row-wise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    cols: u8,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        if cols == 0 || cols > MAX_WIDTH {
            return Err(CtpError::InvalidWidth(cols));
        }
        for r in rows {
            if r.width() != cols {
                return Err(CtpError::WidthMismatch {
                    expected: cols,
                    found: r.width(),
                });
            }
        }
        Ok(BitMatrix {
            cols: cols as u8,
            rows: rows.iter().map(|r| r.bits).collect(),
        })
    }

    /// Parses rows given as bitstrings, e.g. `["111"]`.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|s| s.parse()).collect::<Result<Vec<BitVec>>>()?;
        Self::from_rows(cols, &rows)
    }

    pub(crate) fn from_raw(cols: usize, rows: Vec<u64>) -> Self {
        let m = mask(cols);
        BitMatrix {
            cols: cols as u8,
            rows: rows.into_iter().map(|r| r & m).collect(),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_raw(d, (0..d).map(|j| 1u64 << j).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_raw(cols, vec![0; rows])
    }

    /// The `1 x d` matrix of the linear form `w -> eta . w`.
    pub fn linear_form(eta: &BitVec) -> Self {
        Self::from_raw(eta.width(), vec![eta.bits])
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols as usize
    }

    pub fn row(&self, k: usize) -> BitVec {
        BitVec::from_bits(self.ncols(), self.rows[k])
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.nrows()).map(|k| self.row(k))
    }

    pub fn entry(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> c & 1 == 1
    }

    /// Matrix-vector product over `F_2`.
    pub fn apply(&self, v: &BitVec) -> Result<BitVec> {
        if v.width() != self.ncols() {
            return Err(CtpError::DimensionMismatch(format!(
                "matrix has {} columns, vector has width {}",
                self.ncols(),
                v.width()
            )));
        }
        if self.rows.is_empty() {
            return Err(CtpError::DimensionMismatch(
                "a zero-row matrix has no image space".into(),
            ));
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &BitVec) -> BitVec {
        let mut out = 0u64;
        for (k, row) in self.rows.iter().enumerate() {
            if (row & v.bits).count_ones() % 2 == 1 {
                out |= 1 << k;
            }
        }
        BitVec::from_bits(self.nrows(), out)
    }

    /// The vector `phi^T eta`, i.e. the row combination selected by `eta`.
    pub fn transpose_apply(&self, eta: &BitVec) -> Result<BitVec> {
        if eta.width() != self.nrows() {
            return Err(CtpError::DimensionMismatch(format!(
                "matrix has {} rows, vector has width {}",
                self.nrows(),
                eta.width()
            )));
        }
        let mut out = 0u64;
        for (k, row) in self.rows.iter().enumerate() {
            if eta.get(k) {
                out ^= row;
            }
        }
        Ok(BitVec::from_bits(self.ncols(), out))
    }

    /// The composite `self ∘ inner`.
    pub fn compose(&self, inner: &BitMatrix) -> Result<BitMatrix> {
        if self.ncols() != inner.nrows() {
            return Err(CtpError::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.nrows(),
                self.ncols(),
                inner.nrows(),
                inner.ncols()
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                for (k, &r) in inner.rows.iter().enumerate() {
                    if row >> k & 1 == 1 {
                        acc ^= r;
                    }
                }
                acc
            })
            .collect();
        Ok(BitMatrix::from_raw(inner.ncols(), rows))
    }

    pub fn rank(&self) -> usize {
        echelon_basis(self.rows.iter().copied()).len()
    }

    /// Reduced row echelon form with zero rows dropped. Two maps have the same
    /// kernel (equivalently, differ by an invertible left factor once padded)
    /// iff their forms agree.
    pub fn row_echelon(&self) -> BitMatrix {
        BitMatrix::from_raw(self.ncols(), echelon_basis(self.rows.iter().copied()))
    }

    /// Basis of `{v : self v = 0}`, of size `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let d = self.ncols();
        let reduced = echelon_basis(self.rows.iter().copied());
        let pivots: Vec<usize> = reduced.iter().map(|r| r.trailing_zeros() as usize).collect();
        let mut out = Vec::new();
        for free in (0..d).filter(|c| !pivots.contains(c)) {
            let mut v = 1u64 << free;
            for (row, &p) in reduced.iter().zip(&pivots) {
                if row >> free & 1 == 1 {
                    v |= 1 << p;
                }
            }
            out.push(BitVec::from_bits(d, v));
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows().map(|r| r.to_bitstring()).collect();
        write!(f, "BitMatrix{:?}", rows)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows().map(|r| r.to_bitstring()).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Iterator over every `r x d` matrix, optionally restricted to one rank.
#[derive(Clone, Debug)]
pub struct MapIter {
    d: usize,
    r: usize,
    next: u128,
    end: u128,
    require_rank: Option<usize>,
}

impl Iterator for MapIter {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        while self.next < self.end {
            let code = self.next;
            self.next += 1;
            let m = mask(self.d) as u128;
            let rows = (0..self.r)
                .map(|k| ((code >> (k * self.d)) & m) as u64)
                .collect();
            let matrix = BitMatrix::from_raw(self.d, rows);
            match self.require_rank {
                Some(rk) if matrix.rank() != rk => continue,
                _ => return Some(matrix),
            }
        }
        None
    }
}

/// Enumerates all linear maps `F_2^d -> F_2^r`, each exactly once.
pub fn all_maps(d: usize, r: usize, require_rank: Option<usize>) -> MapIter {
    assert!(d >= 1 && r >= 1, "all_maps needs d >= 1 and r >= 1");
    assert!(d * r <= 64, "all_maps supports at most 2^64 matrices");
    let end = if require_rank.is_some_and(|rk| rk > d.min(r)) {
        0
    } else {
        1u128 << (d * r)
    };
    MapIter {
        d,
        r,
        next: 0,
        end,
        require_rank,
    }
}

/// One representative per `r`-dimensional subspace of row spaces: the rank-`r`
/// maps already in reduced row echelon form.
pub fn canonical_rank_maps(d: usize, r: usize) -> Vec<BitMatrix> {
    if r > d {
        return Vec::new();
    }
    all_maps(d, r, Some(r))
        .filter(|m| m.row_echelon() == *m)
        .collect()
}
