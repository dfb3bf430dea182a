//! Farey continuants, λ-lengths, Ptolemy constants and frieze patterns.
//!
//! All λ machinery works on three-dimensional prismatic diagrams whose
//! exponential LR sequence has no zero entries. A vertex label `(i, j)`
//! names the `j`-th vertex of the `i`-th exponential segment, with
//! `1 <= j <= a_i + 1`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::IntVec;
use crate::matrix::IntMatrix;
use crate::prismatic::{MastVertex, PrismaticDiagram};

/// A vertex label `(segment, position)`, both 1-based.
pub type Label = (usize, usize);

/// The Farey continuant `K_n(x_1, ..., x_n)`.
///
/// `K_0 = 1`, `K_1 = x_1`, `K_2 = (x_1 + 1) x_2` and
/// `K_n = x_n (K_{n-1} + K_{n-2}) + K_{n-3}`.
pub fn continuant(xs: &[BigInt]) -> BigInt {
    let n = xs.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut k = vec![BigInt::one(), xs[0].clone()];
    if n >= 2 {
        k.push((&xs[0] + 1) * &xs[1]);
    }
    for i in 3..=n {
        let next = &xs[i - 1] * (&k[i - 1] + &k[i - 2]) + &k[i - 3];
        k.push(next);
    }
    k.swap_remove(n)
}

/// The continuant by the recursion on the first arguments:
/// `K_n(x_1..) = x_1 K_{n-1}(x_2..) + x_2 K_{n-2}(x_3..) + K_{n-3}(x_4..)`.
pub fn continuant_anti(xs: &[BigInt]) -> BigInt {
    let n = xs.len();
    if n <= 2 {
        return continuant(xs);
    }
    // tail[i] = K(xs[i..]), computed from the back.
    let mut tail = vec![BigInt::zero(); n + 1];
    tail[n] = BigInt::one();
    tail[n - 1] = continuant(&xs[n - 1..]);
    tail[n - 2] = continuant(&xs[n - 2..]);
    for i in (0..n - 2).rev() {
        tail[i] = &xs[i] * &tail[i + 1] + &xs[i + 1] * &tail[i + 2] + &tail[i + 3];
    }
    tail.swap_remove(0)
}

/// Classical two-dimensional continuant `K_n = x_n K_{n-1} + K_{n-2}`.
pub fn classical_continuant(xs: &[BigInt]) -> BigInt {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for x in xs {
        let next = x * &cur + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Two-dimensional Ptolemy determinant
/// `K(x_1..x_n) K(x_2..x_{n-1}) - K(x_1..x_{n-1}) K(x_2..x_n)`, which is `(-1)^n`.
pub fn ptolemy_2d(xs: &[BigInt]) -> Result<BigInt> {
    let n = xs.len();
    if n < 2 {
        return Err(FareyError::Precondition(
            "need at least two arguments".into(),
        ));
    }
    Ok(
        classical_continuant(xs) * classical_continuant(&xs[1..n - 1])
            - classical_continuant(&xs[..n - 1]) * classical_continuant(&xs[1..]),
    )
}

/// The matrix `S(a) = ((a, 1, 0), (a, 0, 1), (1, 0, 0))`.
pub fn s_matrix(a: &BigInt) -> IntMatrix {
    let z = BigInt::zero;
    let o = BigInt::one;
    IntMatrix::from_rows(&[
        vec![a.clone(), o(), z()],
        vec![a.clone(), z(), o()],
        vec![o(), z(), z()],
    ])
    .expect("3x3")
}

/// The product `M_n = S(a_1) ... S(a_n)`.
pub fn m_matrix(xs: &[BigInt]) -> IntMatrix {
    xs.iter().fold(IntMatrix::identity(3), |m, a| {
        m.mul(&s_matrix(a)).expect("3x3")
    })
}

fn k_of(xs: &[BigInt], from: usize, to: usize) -> BigInt {
    // K(x_from, ..., x_to) with 1-based inclusive bounds; empty when to < from.
    if to < from {
        BigInt::one()
    } else {
        continuant(&xs[from - 1..to])
    }
}

/// The continuant vector `v_i(a_1, ..., a_i)`:
/// `(K_i(a_1..a_i), a_1 K_{i-1}(a_2..a_i) + K_{i-2}(a_3..a_i), K_{i-1}(a_2..a_i))`.
///
/// For `i = 0, -1, -2` this gives the columns of the identity, so that
/// `M_n` has columns `(v_n, v_{n-1}, v_{n-2})`.
pub fn continuant_vector(xs: &[BigInt]) -> IntVec {
    let i = xs.len();
    match i {
        0 => IntVec::from_i64s(&[1, 0, 0]),
        1 => IntVec::new(vec![xs[0].clone(), xs[0].clone(), BigInt::one()]),
        _ => {
            let second = &xs[0] * k_of(xs, 2, i)
                + if i >= 3 {
                    k_of(xs, 3, i)
                } else {
                    BigInt::one()
                };
            IntVec::new(vec![continuant(xs), second, k_of(xs, 2, i)])
        }
    }
}

/// Columns of `M_n` predicted by the continuant vectors: `(v_n, v_{n-1}, v_{n-2})`.
pub fn continuant_columns(xs: &[BigInt]) -> [IntVec; 3] {
    let n = xs.len();
    let v = |len: isize| -> IntVec {
        match len {
            -2 => IntVec::from_i64s(&[0, 0, 1]),
            -1 => IntVec::from_i64s(&[0, 1, 0]),
            l => continuant_vector(&xs[..l as usize]),
        }
    };
    [v(n as isize), v(n as isize - 1), v(n as isize - 2)]
}

fn check_exponents(exps: &[u64]) -> Result<()> {
    if exps.contains(&0) {
        return Err(FareyError::ZeroElement(
            "λ-lengths need positive exponents".into(),
        ));
    }
    Ok(())
}

fn big(exps: &[u64]) -> Vec<BigInt> {
    exps.iter().map(|&a| BigInt::from(a)).collect()
}

/// λ-length by labels: `λ(v_{i,j}, w_{k,l}) = K(a_i + 1 - j, a_{i+1}, ..., a_{k-1}, l - 1)` for `i < k`.
pub fn lambda_by_labels(exps: &[u64], v: Label, w: Label) -> Result<BigInt> {
    check_exponents(exps)?;
    for &(i, j) in [&v, &w] {
        if i == 0 || i > exps.len() {
            return Err(FareyError::OutOfRange {
                index: i,
                max: exps.len(),
            });
        }
        if j == 0 || j as u64 > exps[i - 1] + 1 {
            return Err(FareyError::OutOfRange {
                index: j,
                max: exps[i - 1] as usize + 1,
            });
        }
    }
    let ((i, j), (k, l)) = (v, w);
    if i >= k {
        return Err(FareyError::Precondition(format!(
            "label v_{{{i},{j}}} does not precede w_{{{k},{l}}}"
        )));
    }
    let mut args = vec![BigInt::from(exps[i - 1] + 1 - j as u64)];
    args.extend(big(&exps[i..k - 1]));
    args.push(BigInt::from(l - 1));
    Ok(continuant(&args))
}

/// λ-length of the geodesic between two vertices: 0 for equal vertices, 1 for
/// yard-connected ones, else the continuant of the geodesic slice's exponents.
pub fn lambda_length(d: &PrismaticDiagram, v: MastVertex, w: MastVertex) -> Result<BigInt> {
    require_3d_positive(d)?;
    if v == w {
        d.yard_interval(v)?;
        return Ok(BigInt::zero());
    }
    match d.geodesic(v, w)? {
        None => Ok(BigInt::one()),
        Some(s) => Ok(continuant(&big(&s.lr_sequence().exponents()))),
    }
}

fn require_3d_positive(d: &PrismaticDiagram) -> Result<()> {
    if d.k() != 3 {
        return Err(FareyError::UnsupportedDimension(d.k()));
    }
    check_exponents(&d.lr_sequence().exponents())
}

/// Chirality of a boundary triangle: two vertices on mast `m`, the third on `m + 1` (left) or `m - 1` (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chirality {
    /// Third vertex on the next mast.
    Left,
    /// Third vertex on the previous mast.
    Right,
}

/// A boundary triangle of a 3D diagram, cut off by one unit step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryTriangle {
    /// Index of the step (0-based) whose tetrahedron contains the triangle.
    pub step: usize,
    /// Segment of the step (1-based).
    pub segment: usize,
    /// Position of the step inside its segment (1-based).
    pub position: usize,
    /// Mast raised by the step.
    pub mast: usize,
    /// Chirality.
    pub chirality: Chirality,
    /// Lower and upper mast vertices, then the third vertex.
    pub vertices: [MastVertex; 3],
    /// The opposite vertex of the tetrahedron.
    pub opposite: MastVertex,
}

/// All side boundary triangles, two per step.
pub fn boundary_triangles(d: &PrismaticDiagram) -> Result<Vec<BoundaryTriangle>> {
    require_3d_positive(d)?;
    let exps = d.lr_sequence().exponents();
    let yards = d.yards();
    let mut out = Vec::new();
    let mut step = 0;
    for (s, &a) in exps.iter().enumerate() {
        let m = s % 3 + 1;
        for p in 1..=a as usize {
            let y = &yards[step];
            let low = y[m - 1];
            let high = (m, low.1 + 1);
            let next = y[m % 3];
            let prev = y[(m + 1) % 3];
            out.push(BoundaryTriangle {
                step,
                segment: s + 1,
                position: p,
                mast: m,
                chirality: Chirality::Left,
                vertices: [low, high, next],
                opposite: prev,
            });
            out.push(BoundaryTriangle {
                step,
                segment: s + 1,
                position: p,
                mast: m,
                chirality: Chirality::Right,
                vertices: [low, high, prev],
                opposite: next,
            });
            step += 1;
        }
    }
    Ok(out)
}

impl BoundaryTriangle {
    /// True when the triangle is not the deck and has no vertex of the nest.
    pub fn is_nice(&self, d: &PrismaticDiagram) -> bool {
        let nest = d.nest();
        !self.vertices.iter().any(|v| nest.contains(v))
    }

    /// Labels when the triangle plays the earlier role: own segment labels on
    /// the mast, the first label of the next segment on the third vertex's mast.
    pub fn earlier_labels(&self, exps: &[u64]) -> Option<[Label; 3]> {
        let third = match self.chirality {
            Chirality::Left => self.segment + 1,
            Chirality::Right => self.segment + 2,
        };
        (third <= exps.len()).then_some([
            (self.segment, self.position),
            (self.segment, self.position + 1),
            (third, 1),
        ])
    }

    /// Labels when the triangle plays the later role: own segment labels on the
    /// mast, the last label of the segment that created the third vertex.
    pub fn later_labels(&self, exps: &[u64]) -> Option<[Label; 3]> {
        let back = match self.chirality {
            Chirality::Left => 2,
            Chirality::Right => 1,
        };
        let third = self.segment.checked_sub(back).filter(|&s| s >= 1)?;
        Some([
            (self.segment, self.position),
            (self.segment, self.position + 1),
            (third, exps[third - 1] as usize + 1),
        ])
    }

    fn orientation(&self, d: &PrismaticDiagram, order: [usize; 3]) -> BigInt {
        let p: Vec<IntVec> = order
            .iter()
            .map(|&i| d.coordinates(self.vertices[i]))
            .collect();
        let q = d.coordinates(self.opposite);
        let rows = vec![
            (&p[1] - &p[0]).coords().to_vec(),
            (&p[2] - &p[0]).coords().to_vec(),
            (&q - &p[0]).coords().to_vec(),
        ];
        IntMatrix::from_rows(&rows).expect("3x3").det()
    }

    /// Vertex order `(0, 1, 2)` or `(0, 2, 1)` with the requested orientation
    /// sign relative to the interior of the diagram.
    fn oriented(&self, d: &PrismaticDiagram, negative: bool) -> [usize; 3] {
        let o = self.orientation(d, [0, 1, 2]);
        if o.is_negative() == negative {
            [0, 1, 2]
        } else {
            [0, 2, 1]
        }
    }
}

/// A Ptolemy pair: its λ matrix and determinant.
#[derive(Debug, Clone, Serialize)]
pub struct PtolemyPair {
    /// Earlier triangle labels, in row order.
    pub rows: [Label; 3],
    /// Later triangle labels, in column order.
    pub cols: [Label; 3],
    /// Chirality of the earlier triangle.
    pub chirality: Chirality,
    /// The λ matrix.
    pub matrix: IntMatrix,
    /// Its determinant.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub det: BigInt,
}

/// The Ptolemy constant of a pair of nice boundary triangles, `V` earlier than `W`.
///
/// `V` is ordered clockwise and `W` counter-clockwise seen from outside the
/// diagram. Fails when either triangle is not nice, when the triangles are
/// connected by a yard, or when some label pair does not span a step.
pub fn ptolemy_constant(
    d: &PrismaticDiagram,
    v: &BoundaryTriangle,
    w: &BoundaryTriangle,
) -> Result<PtolemyPair> {
    require_3d_positive(d)?;
    let exps = d.lr_sequence().exponents();
    if !v.is_nice(d) || !w.is_nice(d) {
        return Err(FareyError::Precondition("triangle is not nice".into()));
    }
    let yards = d.yards();
    if yards.iter().any(|y| {
        v.vertices.iter().any(|a| y.contains(a)) && w.vertices.iter().any(|b| y.contains(b))
    }) {
        return Err(FareyError::Precondition(
            "triangles are connected by a yard".into(),
        ));
    }
    let vl = v
        .earlier_labels(&exps)
        .ok_or_else(|| FareyError::Precondition("earlier triangle has no entry label".into()))?;
    let wl = w
        .later_labels(&exps)
        .ok_or_else(|| FareyError::Precondition("later triangle has no exit label".into()))?;
    let ro = v.oriented(d, true);
    // Rotate the columns to start at the upper mast vertex; the determinant is unchanged.
    let mut co = w.oriented(d, false);
    while co[0] != 1 {
        co.rotate_left(1);
    }
    let rows = [vl[ro[0]], vl[ro[1]], vl[ro[2]]];
    let cols = [wl[co[0]], wl[co[1]], wl[co[2]]];
    let mut m = Vec::with_capacity(3);
    for r in rows {
        let mut line = Vec::with_capacity(3);
        for c in cols {
            let steps = (exps[r.0 - 1] + 1 - r.1 as u64)
                + exps
                    .get(r.0..c.0.saturating_sub(1))
                    .map_or(0, |s| s.iter().sum::<u64>())
                + (c.1 as u64 - 1);
            if r.0 >= c.0 || steps == 0 {
                return Err(FareyError::Precondition(format!(
                    "labels ({},{}) and ({},{}) do not span a step",
                    r.0, r.1, c.0, c.1
                )));
            }
            line.push(lambda_by_labels(&exps, r, c)?);
        }
        m.push(line);
    }
    let matrix = IntMatrix::from_rows(&m)?;
    let det = matrix.det();
    Ok(PtolemyPair {
        rows,
        cols,
        chirality: v.chirality,
        matrix,
        det,
    })
}

/// Outcome of checking every admissible pair of a diagram.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PtolemyScan {
    /// Admissible pairs examined.
    pub pairs: usize,
    /// Pairs with a right earlier triangle and determinant 1.
    pub right_ones: usize,
    /// Pairs with a left earlier triangle and determinant 0.
    pub left_zeros: usize,
    /// Pairs whose determinant does not match the chirality.
    pub violations: Vec<PtolemyPair>,
}

/// Checks the Ptolemy relation on all admissible pairs of nice boundary triangles.
pub fn ptolemy_scan(d: &PrismaticDiagram) -> Result<PtolemyScan> {
    let tris = boundary_triangles(d)?;
    let nice: Vec<&BoundaryTriangle> = tris.iter().filter(|t| t.is_nice(d)).collect();
    let results: Vec<PtolemyPair> = nice
        .par_iter()
        .flat_map_iter(|v| {
            nice.iter()
                .filter(move |w| w.step > v.step)
                .filter_map(move |w| ptolemy_constant(d, v, w).ok())
        })
        .collect();
    let mut scan = PtolemyScan::default();
    for p in results {
        scan.pairs += 1;
        match (p.chirality, p.det.is_one(), p.det.is_zero()) {
            (Chirality::Right, true, _) => scan.right_ones += 1,
            (Chirality::Left, _, true) => scan.left_zeros += 1,
            _ => scan.violations.push(p),
        }
    }
    Ok(scan)
}

/// The row transformation `((0, 1, -a_1), (1, 0, 0), (1, 0, -1))`.
pub fn row_transform(a1: &BigInt) -> IntMatrix {
    IntMatrix::from_rows(&[
        vec![BigInt::zero(), BigInt::one(), -a1],
        vec![BigInt::one(), BigInt::zero(), BigInt::zero()],
        vec![BigInt::one(), BigInt::zero(), -BigInt::one()],
    ])
    .expect("3x3")
}

/// The column transformation `((1, 1, 0), (0, -1, 1), (0, -1, 0))`.
pub fn column_transform() -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, -1, 1], &[0, -1, 0]])
}

/// `M_Row · M_n · M_Col` for the exponents `a_1, ..., a_n`.
pub fn transformed_continuant_matrix(xs: &[BigInt]) -> Result<IntMatrix> {
    let a1 = xs
        .first()
        .ok_or(FareyError::Precondition("empty exponent list".into()))?;
    row_transform(a1)
        .mul(&m_matrix(xs))?
        .mul(&column_transform())
}

/// Compares `M_Row · M_n · M_Col` with the λ matrix of the right triangles
/// opening segment 1 and closing segment `n`.
///
/// The diagram is extended by three segments of length 2 so that the later
/// triangle is nice. Rows are compared up to the cyclic rotation that puts
/// the entry label first. Returns `Ok(None)` when the pair is not admissible.
pub fn transform_identity_holds(exps: &[u64]) -> Result<Option<bool>> {
    check_exponents(exps)?;
    let n = exps.len();
    if n < 3 {
        return Err(FareyError::Precondition(
            "need at least three exponents".into(),
        ));
    }
    let mut ext = exps.to_vec();
    ext.extend([2, 2, 2]);
    let d = PrismaticDiagram::from_exponents(3, &ext)?;
    let tris = boundary_triangles(&d)?;
    let find = |seg: usize, pos: usize| {
        tris.iter()
            .find(|t| t.segment == seg && t.position == pos && t.chirality == Chirality::Right)
            .ok_or_else(|| FareyError::Internal("missing boundary triangle".into()))
    };
    let v = find(1, 1)?;
    let w = find(n, exps[n - 1] as usize)?;
    let p = match ptolemy_constant(&d, v, w) {
        Ok(p) => p,
        Err(FareyError::Precondition(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let r = p.matrix.to_rows();
    let rotated = IntMatrix::from_rows(&[r[2].clone(), r[0].clone(), r[1].clone()])?;
    let xs = big(exps);
    Ok(Some(rotated == transformed_continuant_matrix(&xs)?))
}

/// One entry of a frieze pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FriezeEntry {
    /// Earlier label.
    pub v: Label,
    /// Later label.
    pub w: Label,
    /// λ-length.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub lambda: BigInt,
}

/// The λ table of a diagram over all label pairs.
#[derive(Debug, Clone, Serialize)]
pub struct FriezePattern {
    /// Exponential LR sequence of the diagram.
    pub exponents: Vec<u64>,
    /// Entries for all label pairs `(i, j)`, `(k, l)` with `i < k`.
    pub entries: Vec<FriezeEntry>,
}

impl FriezePattern {
    /// Looks up a value.
    pub fn get(&self, v: Label, w: Label) -> Option<&BigInt> {
        self.entries
            .iter()
            .find(|e| e.v == v && e.w == w)
            .map(|e| &e.lambda)
    }

    /// CSV rendering with one `i,j,k,l,lambda` line per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,k,l,lambda\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.v.0, e.v.1, e.w.0, e.w.1, e.lambda
            ));
        }
        out
    }
}

/// The frieze pattern: λ over all label pairs, with 0 for equal vertices and 1 for yard-connected ones.
pub fn frieze_pattern(d: &PrismaticDiagram) -> Result<FriezePattern> {
    require_3d_positive(d)?;
    let exps = d.lr_sequence().exponents();
    let labels: Vec<Label> = exps
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| (1..=a as usize + 1).map(move |j| (i + 1, j)))
        .collect();
    let yards = d.yards();
    let entries: Result<Vec<FriezeEntry>> = labels
        .par_iter()
        .flat_map_iter(|&v| {
            labels
                .iter()
                .filter(move |w| w.0 > v.0)
                .map(move |&w| (v, w))
        })
        .map(|(v, w)| {
            let pv = d.label(v.0, v.1)?;
            let pw = d.label(w.0, w.1)?;
            let lambda = if pv == pw {
                BigInt::zero()
            } else if yards.iter().any(|y| y.contains(&pv) && y.contains(&pw)) {
                BigInt::one()
            } else {
                lambda_by_labels(&exps, v, w)?
            };
            Ok(FriezeEntry { v, w, lambda })
        })
        .collect();
    Ok(FriezePattern {
        exponents: exps,
        entries: entries?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn continuant_values() {
        assert_eq!(continuant(&[]), BigInt::one());
        assert_eq!(continuant(&b(&[2, 3, 4])), BigInt::from(45));
        assert_eq!(
            continuant(&b(&[15, 2, 4, 32, 54, 7])),
            BigInt::from(2_800_350)
        );
        assert_eq!(
            continuant_anti(&b(&[15, 2, 4, 32, 54, 7])),
            BigInt::from(2_800_350)
        );
        assert_ne!(continuant(&b(&[1, 2, 3])), continuant(&b(&[3, 2, 1])));
    }

    #[test]
    fn m_matrix_columns() {
        let xs = b(&[3, 1, 2, 1, 2]);
        let m = m_matrix(&xs);
        let cols = continuant_columns(&xs);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(&m.column(j), c);
        }
    }

    #[test]
    fn example_pair() {
        let d = PrismaticDiagram::from_exponents(3, &[3, 1, 2, 1, 2, 3, 3, 1]).unwrap();
        let tris = boundary_triangles(&d).unwrap();
        let v = tris
            .iter()
            .find(|t| t.segment == 2 && t.position == 1 && t.chirality == Chirality::Right)
            .unwrap();
        let w = tris
            .iter()
            .find(|t| t.segment == 7 && t.position == 2 && t.chirality == Chirality::Left)
            .unwrap();
        let p = ptolemy_constant(&d, v, w).unwrap();
        assert_eq!(p.rows, [(2, 1), (2, 2), (4, 1)]);
        assert_eq!(p.cols, [(7, 3), (5, 3), (7, 2)]);
        let expect = IntMatrix::from_i64_rows(&[&[218, 21, 112], &[105, 10, 54], &[41, 4, 21]]);
        assert_eq!(p.matrix, expect);
        assert_eq!(p.det, BigInt::one());
    }

    #[test]
    fn two_dimensional_parity() {
        for n in 2..8 {
            let xs: Vec<BigInt> = (0..n).map(|i| BigInt::from(i % 3 + 1)).collect();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(ptolemy_2d(&xs).unwrap(), BigInt::from(sign));
        }
    }

    #[test]
    fn zero_elements_rejected() {
        assert!(lambda_by_labels(&[1, 0, 2], (1, 1), (3, 1)).is_err());
    }
}
