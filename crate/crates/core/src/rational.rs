//! Exact rational scalars and dense points.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{CtpError, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`; decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || CtpError::Parse(format!("invalid rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Always writes `"p/q"`, including `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A point of `R^m` with exact coordinates. Points over a block configuration
/// use the configuration's canonical coordinate order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    pub fn zeros(len: usize) -> Self {
        RationalPoint(vec![Rational::zero(); len])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        RationalPoint(values.iter().map(|&v| int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// Convex combination `sum_k weights[k] * points[k]`.
    pub fn combination(points: &[&RationalPoint], weights: &[Rational]) -> RationalPoint {
        assert_eq!(points.len(), weights.len());
        let len = points.first().map_or(0, |p| p.len());
        let mut out = vec![Rational::zero(); len];
        for (p, w) in points.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&p.0) {
                *o += w * v;
            }
        }
        RationalPoint(out)
    }

    pub fn midpoint(&self, other: &RationalPoint) -> RationalPoint {
        let half = ratio(1, 2);
        RationalPoint::combination(&[self, other], &[half.clone(), half])
    }

    pub fn barycenter(points: &[RationalPoint]) -> RationalPoint {
        let w = Rational::one() / int(points.len() as i64);
        let refs: Vec<&RationalPoint> = points.iter().collect();
        RationalPoint::combination(&refs, &vec![w; points.len()])
    }
}

impl Index<usize> for RationalPoint {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let r = parse_rational("-14/6").unwrap();
        assert_eq!(r, ratio(-7, 3));
        assert_eq!(format_rational(&r), "-7/3");
        assert_eq!(format_rational(&int(2)), "2/1");
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn midpoint_and_barycenter() {
        let a = RationalPoint::from_ints(&[0, 2]);
        let b = RationalPoint::from_ints(&[2, 0]);
        assert_eq!(a.midpoint(&b), RationalPoint::from_ints(&[1, 1]));
        let c = RationalPoint::barycenter(&[a, b, RationalPoint::from_ints(&[1, 1])]);
        assert_eq!(c, RationalPoint::from_ints(&[1, 1]));
    }
}
