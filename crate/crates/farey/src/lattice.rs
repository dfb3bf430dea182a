//! Exact integer lattice primitives.
//!
//! Integer points, content, integer lengths and volumes, integer sines of
//! pairs of planes, integer arctangents of three-dimensional cones and lattice
//! emptiness tests for simplices.

use std::fmt;
use std::ops::{Add, Index, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{FareyError, Result};
use crate::matrix::{rank, solve_in_span, IntMatrix};

/// Default number of lattice points an emptiness test may visit.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// A point or vector of the integer lattice with arbitrary-precision coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec(Vec<BigInt>);

impl IntVec {
    /// Wraps a list of coordinates.
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVec(coords)
    }

    /// Builds a vector from machine integers.
    pub fn from_i64s(coords: &[i64]) -> Self {
        IntVec(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The zero vector of length `n`.
    pub fn zero(n: usize) -> Self {
        IntVec(vec![BigInt::zero(); n])
    }

    /// The `i`-th basis vector of length `n` (zero based).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinates as a slice.
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    /// Iterator over coordinates.
    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    /// True when every coordinate vanishes.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Multiplies every coordinate by `t`.
    pub fn scale(&self, t: &BigInt) -> Self {
        IntVec(self.0.iter().map(|x| x * t).collect())
    }

    /// Divides every coordinate exactly by `t`.
    pub fn div_exact(&self, t: &BigInt) -> Self {
        IntVec(self.0.iter().map(|x| x / t).collect())
    }

    /// Sum of the coordinates.
    pub fn coordinate_sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// The primitive vector in the direction of `self`.
    pub fn primitive(&self) -> Result<Self> {
        let g = content(self)?;
        Ok(self.div_exact(&g))
    }

    /// Checked addition.
    pub fn checked_add(&self, other: &IntVec) -> Result<Self> {
        check_dims(self, other)?;
        Ok(IntVec(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Checked subtraction.
    pub fn checked_sub(&self, other: &IntVec) -> Result<Self> {
        check_dims(self, other)?;
        Ok(IntVec(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Exact rational copy of the vector.
    pub fn to_rat(&self) -> RatVec {
        RatVec(
            self.0
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    /// Approximate floating point coordinates, for rendering only.
    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

fn check_dims(a: &IntVec, b: &IntVec) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(FareyError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

impl Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &IntVec {
    type Output = IntVec;
    fn add(self, other: &IntVec) -> IntVec {
        self.checked_add(other).expect("vectors of equal length")
    }
}

impl Sub for &IntVec {
    type Output = IntVec;
    fn sub(self, other: &IntVec) -> IntVec {
        self.checked_sub(other).expect("vectors of equal length")
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for IntVec {
    type Err = FareyError;

    /// Parses `a,b,c`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<BigInt>()
                    .map_err(|e| FareyError::Parse(format!("{p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.len() < 2 {
            return Err(FareyError::Parse(
                "a vector needs at least two coordinates".into(),
            ));
        }
        Ok(IntVec(coords))
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

impl Serialize for IntVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

/// A vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatVec(Vec<BigRational>);

impl RatVec {
    /// Wraps a list of rational coordinates.
    pub fn new(coords: Vec<BigRational>) -> Self {
        RatVec(coords)
    }

    /// Coordinates as a slice.
    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Splits into the least common denominator and the integer vector of scaled numerators.
    pub fn to_scaled_int(&self) -> (BigInt, IntVec) {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let v = self
            .0
            .iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        (l, IntVec(v))
    }

    /// Central projection to the hyperplane where the coordinates sum to one.
    pub fn project_to_unit_sum(&self) -> Result<Self> {
        let s: BigRational = self.0.iter().cloned().sum();
        if s.is_zero() {
            return Err(FareyError::ZeroVector);
        }
        Ok(RatVec(self.0.iter().map(|x| x / &s).collect()))
    }

    /// Approximate floating point coordinates, for rendering only.
    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl Index<usize> for RatVec {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for RatVec {
    type Err = FareyError;

    /// Parses comma separated integers or fractions `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = t
            .split(',')
            .map(|p| parse_rational(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() < 2 {
            return Err(FareyError::Parse(
                "a vector needs at least two coordinates".into(),
            ));
        }
        Ok(RatVec(coords))
    }
}

fn parse_rational(p: &str) -> Result<BigRational> {
    let bad = |e: String| FareyError::Parse(format!("{p:?}: {e}"));
    match p.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let d: BigInt = d.trim().parse().map_err(|e| bad(format!("{e}")))?;
            if d.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            p.parse().map_err(|e| bad(format!("{e}")))?,
        )),
    }
}

/// Greatest common divisor of the absolute values of the coordinates.
///
/// The vector lies on the unit integer sphere exactly when this equals one.
pub fn content(v: &IntVec) -> Result<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(FareyError::UndefinedContent);
    }
    Ok(g)
}

/// Integer length of the segment `pq`: the number of interior lattice points plus one.
pub fn integer_length(p: &IntVec, q: &IntVec) -> Result<BigInt> {
    let d = q.checked_sub(p)?;
    if d.is_zero() {
        return Err(FareyError::DegenerateSegment);
    }
    content(&d)
}

/// Index of the sublattice generated by `vs` in the lattice of its linear span.
///
/// Computed as the greatest common divisor of all maximal minors, which is the
/// product of the invariant factors of the matrix with rows `vs`.
pub fn integer_volume(vs: &[IntVec]) -> Result<BigInt> {
    let k = vs.len();
    if k == 0 {
        return Ok(BigInt::one());
    }
    let n = vs[0].dim();
    for v in vs {
        check_dims(&vs[0], v)?;
    }
    if k > n || rank(vs) < k {
        return Err(FareyError::RankDeficient(format!(
            "{k} vectors of rank {}",
            rank(vs)
        )));
    }
    let mut g = BigInt::zero();
    for cols in combinations(n, k) {
        let rows: Vec<Vec<BigInt>> = vs
            .iter()
            .map(|v| cols.iter().map(|&c| v[c].clone()).collect())
            .collect();
        let d = IntMatrix::from_rows(&rows)?.det();
        g = g.gcd(&d);
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

/// Integer volume, returning zero for dependent families instead of failing.
pub fn integer_volume_or_zero(vs: &[IntVec]) -> BigInt {
    integer_volume(vs).unwrap_or_else(|_| BigInt::zero())
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Integer sine of two planes given by bases.
///
/// `w` spans the intersection of the planes, `u` and `v` complete `w` to
/// bases of the first and second plane. The value is
/// `iv(v,u,w) / (iv(v) iv(u) iv(w))`.
pub fn integer_sine(u: &[IntVec], v: &[IntVec], w: &[IntVec]) -> Result<BigRational> {
    let mut all: Vec<IntVec> = v.to_vec();
    all.extend_from_slice(u);
    all.extend_from_slice(w);
    let num = integer_volume(&all)?;
    let den = integer_volume(v)? * integer_volume(u)? * integer_volume(w)?;
    Ok(BigRational::new(num, den))
}

/// Affine dimension of a point set; `-1` for the empty set.
pub fn affine_dim(points: &[IntVec]) -> isize {
    match points.split_first() {
        None => -1,
        Some((p0, rest)) => {
            let diffs: Vec<IntVec> = rest.iter().map(|p| p - p0).collect();
            rank(&diffs) as isize
        }
    }
}

/// Greedily extracts a maximal independent subfamily, keeping the order.
pub fn independent_subset(vs: &[IntVec]) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = Vec::new();
    for v in vs {
        let mut trial = out.clone();
        trial.push(v.clone());
        if rank(&trial) == trial.len() {
            out = trial;
        }
    }
    out
}

/// Integer sine between the affine planes spanned by two lattice point sets.
///
/// The common points span the intersection; the remaining points of each set
/// complete it. The result is the sublattice index quotient
/// `iv(W,U,V) iv(W) / (iv(W,U) iv(W,V))`, which does not depend on the
/// chosen spanning sets. A dependent union gives zero. Returns `None` when
/// the point sets share no point.
pub fn face_sine(f1: &[IntVec], f2: &[IntVec]) -> Option<BigRational> {
    let common: Vec<&IntVec> = f1.iter().filter(|p| f2.contains(p)).collect();
    let (&p0, rest) = common.split_first()?;
    let w = independent_subset(&rest.iter().map(|p| *p - p0).collect::<Vec<_>>());
    let extend = |face: &[IntVec]| -> Vec<IntVec> {
        let mut fam = w.clone();
        fam.extend(face.iter().filter(|p| !common.contains(p)).map(|p| p - p0));
        independent_subset(&fam)[w.len()..].to_vec()
    };
    let u = extend(f1);
    let v = extend(f2);
    let mut wu = w.clone();
    wu.extend(u.iter().cloned());
    let mut wv = w.clone();
    wv.extend(v.iter().cloned());
    let mut all = wu.clone();
    all.extend(v.iter().cloned());
    let top = integer_volume_or_zero(&all);
    if top.is_zero() {
        return Some(BigRational::zero());
    }
    let num = top * integer_volume_or_zero(&w);
    let den = integer_volume_or_zero(&wu) * integer_volume_or_zero(&wv);
    Some(BigRational::new(num, den))
}

/// A rational cone in three-space with apex at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone3 {
    edges: [IntVec; 3],
}

impl Cone3 {
    /// Builds a cone from three edge directions, reducing each to content one.
    pub fn new(e1: &IntVec, e2: &IntVec, e3: &IntVec) -> Result<Self> {
        let edges = [e1.primitive()?, e2.primitive()?, e3.primitive()?];
        for e in &edges {
            if e.dim() != 3 {
                return Err(FareyError::UnsupportedDimension(e.dim()));
            }
        }
        if IntMatrix::from_columns(&edges)?.det().is_zero() {
            return Err(FareyError::RankDeficient("cone edges are coplanar".into()));
        }
        Ok(Cone3 { edges })
    }

    /// The primitive edge vectors.
    pub fn edges(&self) -> &[IntVec; 3] {
        &self.edges
    }
}

/// Row-style Hermite normal form of a square non-singular integer matrix.
///
/// Returns the upper triangular matrix `U * m` with positive diagonal and
/// entries above each pivot reduced to `0 <= x < pivot`, where `U` is
/// unimodular.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return Err(FareyError::DimensionMismatch {
            expected: n,
            found: m.cols(),
        });
    }
    let mut a = m.to_rows();
    for c in 0..n {
        loop {
            let nz: Vec<usize> = (c..n).filter(|&r| !a[r][c].is_zero()).collect();
            if nz.is_empty() {
                return Err(FareyError::RankDeficient("singular matrix".into()));
            }
            let p = *nz
                .iter()
                .min_by_key(|&&r| a[r][c].abs())
                .expect("non-empty");
            a.swap(c, p);
            let mut done = true;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[c][c]);
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[c][c].is_negative() {
            for x in a[c].iter_mut() {
                *x = -x.clone();
            }
        }
        for r in 0..c {
            let q = a[r][c].div_floor(&a[c][c]);
            let pivot_row = a[c].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
    }
    IntMatrix::from_rows(&a)
}

/// Integer arctangent of a cone: the Hermite normal form of its edge matrix.
///
/// The result has the shape `((1, a1, b1), (0, a2, b2), (0, 0, b3))` with
/// `0 <= a1 < a2` and `0 <= b1, b2 < b3`.
pub fn integer_arctangent(c: &Cone3) -> Result<IntMatrix> {
    let m = IntMatrix::from_columns(c.edges())?;
    let h = hermite_normal_form(&m)?;
    debug_assert!(h.get(0, 0).is_one());
    Ok(h)
}

/// True when the simplex spanned by `verts` contains no lattice point other than its vertices.
///
/// The vertices must be affinely independent. Every lattice point of the
/// bounding box is tested with exact barycentric coordinates; the box may
/// hold at most `budget` points.
pub fn is_empty_simplex(verts: &[IntVec], budget: u64) -> Result<bool> {
    let Some((v0, rest)) = verts.split_first() else {
        return Ok(true);
    };
    let n = v0.dim();
    let edges: Vec<IntVec> = rest.iter().map(|v| v - v0).collect();
    if rank(&edges) != edges.len() {
        return Err(FareyError::RankDeficient(
            "simplex vertices are affinely dependent".into(),
        ));
    }
    if edges.len() == n {
        return empty_full_simplex(&edges, budget);
    }
    let mut lo = v0.coords().to_vec();
    let mut hi = v0.coords().to_vec();
    for v in rest {
        for i in 0..n {
            if v[i] < lo[i] {
                lo[i] = v[i].clone();
            }
            if v[i] > hi[i] {
                hi[i] = v[i].clone();
            }
        }
    }
    let needed: BigInt = (0..n).map(|i| &hi[i] - &lo[i] + 1).product();
    if needed > BigInt::from(budget) {
        return Err(FareyError::BudgetExceeded {
            needed: needed.to_string(),
            budget,
        });
    }
    let mut p = lo.clone();
    loop {
        let point = IntVec::new(p.clone());
        if !verts.contains(&point) {
            if let Some(coeffs) = solve_in_span(&edges, &(&point - v0))? {
                let sum: BigRational = coeffs.iter().cloned().sum();
                if coeffs.iter().all(|c| !c.is_negative()) && sum <= BigRational::one() {
                    return Ok(false);
                }
            }
        }
        // Odometer increment over the bounding box.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(true);
            }
            if p[i] < hi[i] {
                p[i] += 1;
                break;
            }
            p[i] = lo[i].clone();
            i += 1;
        }
    }
}

/// Emptiness of a full-dimensional simplex from its edge vectors at one vertex.
///
/// The lattice points of the half-open parallelepiped spanned by the edges form
/// the group `Z^n / E Z^n`, generated by the fractional parts of `E^{-1} e_i`.
/// The simplex has an extra lattice point exactly when some nonzero group
/// element has coordinate sum at most one.
fn empty_full_simplex(edges: &[IntVec], budget: u64) -> Result<bool> {
    let n = edges.len();
    let det = IntMatrix::from_columns(edges)?.det().abs();
    if det > BigInt::from(budget) {
        return Err(FareyError::BudgetExceeded {
            needed: det.to_string(),
            budget,
        });
    }
    let frac = |c: &BigRational| c - c.floor();
    let mut gens = Vec::with_capacity(n);
    for i in 0..n {
        let c = solve_in_span(edges, &IntVec::basis(n, i))?
            .ok_or_else(|| FareyError::Internal("full-rank system without solution".into()))?;
        gens.push(c.iter().map(frac).collect::<Vec<_>>());
    }
    let zero = vec![BigRational::zero(); n];
    let mut seen = std::collections::HashSet::from([zero.clone()]);
    let mut queue = vec![zero];
    while let Some(c) = queue.pop() {
        for g in &gens {
            let next: Vec<BigRational> = c.iter().zip(g).map(|(a, b)| frac(&(a + b))).collect();
            if seen.insert(next.clone()) {
                if next.iter().cloned().sum::<BigRational>() <= BigRational::one() {
                    return Ok(false);
                }
                queue.push(next);
            }
        }
    }
    Ok(true)
}

/// Emptiness test with the default point budget.
pub fn is_empty_polytope(verts: &[IntVec]) -> Result<bool> {
    is_empty_simplex(verts, DEFAULT_POINT_BUDGET)
}

/// Serializes an arbitrary-precision integer as a decimal string.
pub(crate) fn ser_bigint<S: serde::Serializer>(
    x: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64s(x)
    }

    #[test]
    fn content_examples() {
        assert_eq!(content(&v(&[5, 7, 8])).unwrap(), BigInt::from(1));
        assert_eq!(content(&v(&[6, 14, 15])).unwrap(), BigInt::from(1));
        assert_eq!(content(&v(&[0, 0, 0])), Err(FareyError::UndefinedContent));
    }

    #[test]
    fn length_examples() {
        assert_eq!(
            integer_length(&v(&[0, 0, 0]), &v(&[2, 4, 6])).unwrap(),
            BigInt::from(2)
        );
        assert_eq!(
            integer_length(&v(&[1, 0, 0]), &v(&[1, 1, 1])).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            integer_length(&v(&[1, 0, 0]), &v(&[1, 0, 0])),
            Err(FareyError::DegenerateSegment)
        );
    }

    #[test]
    fn volume_examples() {
        assert_eq!(
            integer_volume(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            integer_volume(&[v(&[2, 0]), v(&[0, 2])]).unwrap(),
            BigInt::from(4)
        );
        assert!(integer_volume(&[v(&[1, 2]), v(&[2, 4])]).is_err());
        // Edge vectors of the base triangle span an index-one sublattice of their plane.
        assert_eq!(
            integer_volume(&[v(&[-1, 1, 0]), v(&[-1, 0, 1])]).unwrap(),
            BigInt::from(1)
        );
    }

    #[test]
    fn arctangent_shape() {
        let c = Cone3::new(&v(&[0, 1, 1]), &v(&[-1, -1, 0]), &v(&[3, 7, 11])).unwrap();
        let h = integer_arctangent(&c).unwrap();
        assert_eq!(
            h,
            IntMatrix::from_i64_rows(&[&[1, 0, 4], &[0, 1, 4], &[0, 0, 7]])
        );
    }

    #[test]
    fn emptiness_examples() {
        let std = [v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert!(is_empty_polytope(&std).unwrap());
        let fat = [v(&[0, 0, 0]), v(&[2, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert!(!is_empty_polytope(&fat).unwrap());
        let w = [
            v(&[16, 39, 42]),
            v(&[6, 14, 15]),
            v(&[5, 13, 14]),
            v(&[5, 12, 13]),
        ];
        assert!(is_empty_polytope(&w).unwrap());
    }

    #[test]
    fn group_emptiness_matches_box_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut tested = 0;
        while tested < 300 {
            let pts: Vec<IntVec> = (0..4)
                .map(|_| {
                    IntVec::from_i64s(&[
                        rng.gen_range(-3..4),
                        rng.gen_range(-3..4),
                        rng.gen_range(-3..4),
                    ])
                })
                .collect();
            let Ok(full) = is_empty_simplex(&pts, 1 << 20) else {
                continue;
            };
            // Embedded in four dimensions the simplex is no longer full-dimensional.
            let lifted: Vec<IntVec> = pts
                .iter()
                .map(|p| IntVec::new([p.coords(), &[BigInt::zero()]].concat()))
                .collect();
            assert_eq!(full, is_empty_simplex(&lifted, 1 << 20).unwrap(), "{pts:?}");
            tested += 1;
        }
    }

    #[test]
    fn face_sine_of_coordinate_planes() {
        let f1 = [v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0])];
        let f2 = [v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 2, 1])];
        assert_eq!(
            face_sine(&f1, &f2).unwrap(),
            BigRational::from_integer(BigInt::from(1))
        );
        let f3 = [v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 3])];
        assert_eq!(
            face_sine(&f1, &f3).unwrap(),
            BigRational::from_integer(BigInt::from(3))
        );
    }
}
