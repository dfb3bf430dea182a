//! Sails of three-dimensional Farey polyhedra and their LLS sequences.
//!
//! The sail opposite mast `j` keeps the vertices on the two other masts.
//! Each division simplex contributes its trace on the sail when that trace
//! loses at most one dimension; consecutive principal faces are joined by
//! their integer sine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::{affine_dim, face_sine, integer_arctangent, Cone3, IntVec};
use crate::matrix::IntMatrix;
use crate::reconstruct::{FareyPolyhedron, Generator, NoseProgram};
use crate::svg::{Stroke, SvgDoc};

/// Largest number of unit steps built when a word is expanded into a polyhedron.
pub const DEFAULT_UNIT_BUDGET: u64 = 1_000_000;

/// A principal face of a sail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SailFace {
    /// Vertex indices in the polyhedron.
    pub vertices: Vec<usize>,
    /// Affine dimension of the face.
    pub dim: isize,
    /// Affine dimension of the division simplex it comes from.
    pub division_dim: isize,
    /// Index of that division simplex.
    pub division_index: usize,
}

/// The sail opposite one mast.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sail {
    /// The excluded mast.
    pub opposite: usize,
    /// The two retained masts.
    pub masts: [usize; 2],
    /// Principal faces in order.
    pub faces: Vec<SailFace>,
    /// Vertices of each retained mast by increasing height.
    pub mast_vertices: Vec<Vec<usize>>,
}

fn check_3d(poly: &FareyPolyhedron, j: usize) -> Result<()> {
    if poly.dim != 3 {
        return Err(FareyError::UnsupportedDimension(poly.dim));
    }
    if !(1..=3).contains(&j) {
        return Err(FareyError::OutOfRange { index: j, max: 3 });
    }
    Ok(())
}

/// The sail of a three-dimensional polyhedron opposite mast `j`.
pub fn sail(poly: &FareyPolyhedron, j: usize) -> Result<Sail> {
    check_3d(poly, j)?;
    let pts = |vs: &[usize]| -> Vec<IntVec> {
        vs.iter().map(|&v| poly.vertices[v].point.clone()).collect()
    };
    let mut faces = Vec::new();
    for (idx, d) in poly.division_simplices().iter().enumerate() {
        let f: Vec<usize> = d
            .iter()
            .copied()
            .filter(|&v| poly.vertices[v].mast != j)
            .collect();
        if f.is_empty() {
            continue;
        }
        let dd = affine_dim(&pts(d));
        let fd = affine_dim(&pts(&f));
        if fd >= dd - 1 {
            faces.push(SailFace {
                vertices: f,
                dim: fd,
                division_dim: dd,
                division_index: idx,
            });
        }
    }
    let masts = match j {
        1 => [2, 3],
        2 => [1, 3],
        _ => [1, 2],
    };
    let mast_vertices = masts
        .iter()
        .map(|&m| {
            let mut vs: Vec<usize> = (0..poly.vertices.len())
                .filter(|&v| poly.vertices[v].mast == m)
                .collect();
            vs.sort_by_key(|&v| poly.vertices[v].height);
            vs
        })
        .collect();
    Ok(Sail {
        opposite: j,
        masts,
        faces,
        mast_vertices,
    })
}

/// An edge of an LLS sequence: two consecutive principal faces and their integer sine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LlsEdge {
    /// Integer sine between the planes of the faces; `None` when they share no point.
    #[serde(serialize_with = "ser_opt_rat")]
    pub sine: Option<BigRational>,
    /// Dimensions of the two faces.
    pub dims: (isize, isize),
    /// True for sine zero.
    pub dashed: bool,
    /// True when the dimension of the polyhedron drops between the faces.
    pub doubled: bool,
}

impl LlsEdge {
    /// Divisor of the edge: 2 when both faces are two-dimensional, else 1.
    pub fn divisor(&self) -> i64 {
        if self.dims == (2, 2) {
            2
        } else {
            1
        }
    }

    /// The sine divided by the divisor.
    pub fn reduced(&self) -> Option<BigRational> {
        self.sine
            .as_ref()
            .map(|s| s / BigRational::from_integer(BigInt::from(self.divisor())))
    }
}

fn ser_bigints<S: serde::Serializer>(
    x: &[BigInt; 4],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for v in x {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

fn ser_opt_rat<S: serde::Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// The LLS sequence of a sail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LlsSequence {
    /// The excluded mast.
    pub sail_index: usize,
    /// Principal faces.
    pub faces: Vec<SailFace>,
    /// Edges between consecutive principal faces.
    pub edges: Vec<LlsEdge>,
    /// Lengths of the maximal runs of unit steps on each retained mast.
    pub mast_segments: Vec<(usize, Vec<u64>)>,
}

/// Lengths of the maximal runs of consecutive unit steps on one mast.
pub fn mast_runs(poly: &FareyPolyhedron, m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut prev = None;
    for s in &poly.steps {
        if s.slot == m {
            if prev == Some(m) {
                *out.last_mut().expect("run started") += 1;
            } else {
                out.push(1);
            }
        }
        prev = Some(s.slot);
    }
    out
}

/// The LLS sequence of the sail opposite mast `j`.
pub fn lls_sequence(poly: &FareyPolyhedron, j: usize) -> Result<LlsSequence> {
    let s = sail(poly, j)?;
    let pts = |vs: &[usize]| -> Vec<IntVec> {
        vs.iter().map(|&v| poly.vertices[v].point.clone()).collect()
    };
    let edges = s
        .faces
        .windows(2)
        .map(|w| {
            let sine = face_sine(&pts(&w[0].vertices), &pts(&w[1].vertices));
            LlsEdge {
                dashed: sine.as_ref().is_some_and(|x| x.is_zero()),
                sine,
                dims: (w[0].dim, w[1].dim),
                doubled: w[1].division_dim < w[0].division_dim,
            }
        })
        .collect();
    let mast_segments = s.masts.iter().map(|&m| (m, mast_runs(poly, m))).collect();
    Ok(LlsSequence {
        sail_index: j,
        faces: s.faces,
        edges,
        mast_segments,
    })
}

/// Division simplex index of every unit step.
fn division_of_steps(poly: &FareyPolyhedron) -> Vec<usize> {
    let flags = poly.principal_flags();
    let principal: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
    let mut out = vec![principal.len().saturating_sub(1); poly.steps.len()];
    for (i, w) in principal.windows(2).enumerate() {
        for s in w[0]..w[1] {
            out[s] = i;
        }
    }
    out
}

/// Result of checking integer-length duality on one sail.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    /// Edges between principal faces of equal dimension without a dimension drop.
    pub checked: usize,
    /// Indices of edges whose sine differs from `k` times the excluded mast length.
    pub failures: Vec<usize>,
}

/// Checks that each LLS edge between two `k`-dimensional faces has sine `k`
/// times the number of unit steps of the excluded mast between the faces.
pub fn duality_report(poly: &FareyPolyhedron, j: usize) -> Result<DualityReport> {
    let lls = lls_sequence(poly, j)?;
    let dos = division_of_steps(poly);
    let mut report = DualityReport::default();
    for (i, (e, f)) in lls.edges.iter().zip(lls.faces.windows(2)).enumerate() {
        if e.dims.0 != e.dims.1 || e.doubled {
            continue;
        }
        let (d1, d2) = (f[0].division_index, f[1].division_index);
        let units = poly
            .steps
            .iter()
            .zip(&dos)
            .filter(|(st, &d)| st.slot == j && d > d1 && d <= d2)
            .count();
        let want = BigRational::from_integer(BigInt::from(e.dims.0) * BigInt::from(units));
        report.checked += 1;
        if e.sine.as_ref() != Some(&want) {
            report.failures.push(i);
        }
    }
    Ok(report)
}

/// Builds the polyhedron of a word in the generators.
pub fn polyhedron_of_word(word: &[(Generator, BigInt)]) -> Result<FareyPolyhedron> {
    NoseProgram::from_word(word)?.polyhedron(DEFAULT_UNIT_BUDGET)
}

/// A row of the duality dictionary between matrix decompositions and integer sines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableMatch {
    /// Row number, 1 to 9.
    pub row: u8,
    /// Exponents `(a, b, x, y)`; `x` and `y` are zero when absent.
    #[serde(serialize_with = "ser_bigints")]
    pub exponents: [BigInt; 4],
    /// The integer sine predicted by the row.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub expected: BigInt,
}

type Pattern = (u8, &'static [(char, usize, usize, char)]);

// Each factor is (kind, i, j, exponent name); A factors ignore j.
const PATTERNS: &[Pattern] = &[
    (1, &[('A', 1, 0, 'a'), ('A', 3, 0, 'b')]),
    (1, &[('B', 1, 3, 'a'), ('B', 3, 1, 'b')]),
    (2, &[('A', 1, 0, 'a'), ('B', 1, 3, 'b')]),
    (2, &[('A', 1, 0, 'a'), ('B', 3, 1, 'b')]),
    (2, &[('A', 1, 0, 'a'), ('B', 1, 2, 'b')]),
    (3, &[('A', 1, 0, 'a'), ('A', 2, 0, 'x'), ('A', 1, 0, 'b')]),
    (3, &[('A', 1, 0, 'a'), ('A', 2, 0, 'x'), ('A', 3, 0, 'b')]),
    (4, &[('B', 1, 2, 'a'), ('B', 2, 1, 'x'), ('B', 1, 2, 'b')]),
    (5, &[('A', 1, 0, 'a'), ('A', 2, 0, 'x'), ('B', 1, 2, 'b')]),
    (5, &[('A', 1, 0, 'a'), ('A', 2, 0, 'x'), ('B', 3, 2, 'b')]),
    (6, &[('A', 1, 0, 'a'), ('B', 2, 1, 'x'), ('B', 1, 2, 'b')]),
    (6, &[('A', 1, 0, 'a'), ('B', 2, 3, 'x'), ('B', 3, 2, 'b')]),
    (
        7,
        &[
            ('A', 1, 0, 'a'),
            ('A', 2, 0, 'x'),
            ('B', 2, 1, 'y'),
            ('B', 1, 2, 'b'),
        ],
    ),
    (
        7,
        &[
            ('A', 1, 0, 'a'),
            ('A', 2, 0, 'x'),
            ('B', 2, 3, 'y'),
            ('B', 3, 2, 'b'),
        ],
    ),
    (8, &[('A', 1, 0, 'a'), ('A', 2, 0, 'x'), ('B', 1, 3, 'b')]),
    (8, &[('A', 1, 0, 'a'), ('A', 2, 0, 'x'), ('B', 3, 1, 'b')]),
    (9, &[('A', 1, 0, 'a'), ('B', 3, 2, 'x'), ('B', 2, 3, 'b')]),
];

/// Matches a word against the rows of the duality dictionary.
///
/// Words start on mast 1 and all exponents must be positive. The predicted
/// sines are `0, 1, 2x, x, 2x-1, x-1, 2x+y-1, 1, 1` for rows 1 to 9.
pub fn classify_word(word: &[(Generator, BigInt)]) -> Result<TableMatch> {
    if word.iter().any(|(_, t)| !t.is_positive()) {
        return Err(FareyError::Precondition(
            "dictionary words need positive exponents".into(),
        ));
    }
    'pattern: for &(row, pat) in PATTERNS {
        if pat.len() != word.len() {
            continue;
        }
        let mut ex = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for (&(kind, i, j, name), (g, t)) in pat.iter().zip(word) {
            let ok = match (kind, *g) {
                ('A', Generator::A(gi)) => gi == i,
                ('B', Generator::B(gi, gj)) => gi == i && gj == j,
                _ => false,
            };
            if !ok {
                continue 'pattern;
            }
            let slot = match name {
                'a' => 0,
                'b' => 1,
                'x' => 2,
                _ => 3,
            };
            ex[slot] = t.clone();
        }
        let (x, y) = (&ex[2], &ex[3]);
        let expected = match row {
            1 => BigInt::zero(),
            2 | 8 | 9 => BigInt::one(),
            3 => x * 2,
            4 => x.clone(),
            5 => x * 2 - 1,
            6 => x - 1,
            _ => x * 2 + y - 1,
        };
        return Ok(TableMatch {
            row,
            exponents: ex,
            expected,
        });
    }
    Err(FareyError::UncataloguedPattern(
        crate::reconstruct::word_to_string(word),
    ))
}

/// Outcome of comparing a dictionary row with the computed LLS sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityOutcome {
    /// The matched row.
    pub table: TableMatch,
    /// First integer sine of the sail opposite mast 2.
    #[serde(serialize_with = "ser_opt_rat")]
    pub computed: Option<BigRational>,
}

impl DualityOutcome {
    /// True when the computed sine equals the predicted one.
    pub fn holds(&self) -> bool {
        self.computed.as_ref() == Some(&BigRational::from_integer(self.table.expected.clone()))
    }
}

/// Checks a word against the dictionary by building its polyhedron.
pub fn duality_check(word: &[(Generator, BigInt)]) -> Result<DualityOutcome> {
    let table = classify_word(word)?;
    let poly = polyhedron_of_word(word)?;
    let lls = lls_sequence(&poly, 2)?;
    let computed = lls.edges.first().and_then(|e| e.sine.clone());
    Ok(DualityOutcome { table, computed })
}

/// Hidden elements recovered from the integer arctangent of a sail cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HiddenRecovery {
    /// The integer arctangent.
    pub arctangent: IntMatrix,
    /// Recovered `x`.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub x: BigInt,
    /// Recovered `y`.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub y: BigInt,
}

fn mast_vertex(poly: &FareyPolyhedron, mast: usize, height: usize) -> Result<&IntVec> {
    poly.vertices
        .iter()
        .find(|v| v.mast == mast && v.height == height)
        .map(|v| &v.point)
        .ok_or_else(|| {
            FareyError::Precondition(format!("mast {mast} has no vertex at height {height}"))
        })
}

/// The sail cone of a polyhedron: the first unit segment of mast 1, the yard
/// segment from the base of mast 3 to the second vertex of mast 1, and the
/// first unit segment of mast 3.
pub fn sail_cone(poly: &FareyPolyhedron) -> Result<Cone3> {
    let e1 = mast_vertex(poly, 1, 0)?;
    let a1 = mast_vertex(poly, 1, 1)?;
    let e3 = mast_vertex(poly, 3, 0)?;
    let c1 = mast_vertex(poly, 3, 1)?;
    Cone3::new(&(a1 - e1), &(e3 - a1), &(c1 - e3))
}

/// Recovers `x` and `y` of a word `A_1^a A_2^x B_23^y B_32^b` from the sail cone.
///
/// The arctangent has last column `(icos13, icos23, isin2)` with
/// `icos23 = x + y - 1` and `isin2 = 2x + y - 1`.
pub fn hidden_element_recovery(word: &[(Generator, BigInt)]) -> Result<HiddenRecovery> {
    let shape = [
        Generator::A(1),
        Generator::A(2),
        Generator::B(2, 3),
        Generator::B(3, 2),
    ];
    if word.len() != 4 || word.iter().zip(shape).any(|((g, _), s)| *g != s) {
        return Err(FareyError::UncataloguedPattern(
            crate::reconstruct::word_to_string(word),
        ));
    }
    if word.iter().any(|(_, t)| !t.is_positive()) {
        return Err(FareyError::Precondition(
            "exponents must be positive".into(),
        ));
    }
    let poly = polyhedron_of_word(word)?;
    let arctangent = integer_arctangent(&sail_cone(&poly)?)?;
    let icos23 = arctangent.get(1, 2).clone();
    let isin2 = arctangent.get(2, 2).clone();
    let x = &isin2 - &icos23;
    let y: BigInt = &icos23 * 2 - &isin2 + 1;
    if !x.is_positive() || !y.is_positive() {
        return Err(FareyError::Precondition(
            "arctangent does not fit the pattern".into(),
        ));
    }
    Ok(HiddenRecovery { arctangent, x, y })
}

/// Schematic SVG of an LLS sequence: the two masts as horizontal lines with
/// their run lengths and the yard edges between principal faces with their sines.
pub fn lls_to_svg(poly: &FareyPolyhedron, lls: &LlsSequence, width: f64) -> String {
    let height = 200.0;
    let mut doc = SvgDoc::new(width, height);
    let s = sail(poly, lls.sail_index).expect("valid sail");
    let (top, bottom) = (50.0, 150.0);
    let y_of = |m: usize| if m == s.masts[0] { top } else { bottom };
    let max_h = poly
        .vertices
        .iter()
        .map(|v| v.height)
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let x_of = |v: usize| 40.0 + (width - 80.0) * poly.vertices[v].height as f64 / max_h;
    for (k, mv) in s.mast_vertices.iter().enumerate() {
        let y = if k == 0 { top } else { bottom };
        if let (Some(&a), Some(&b)) = (mv.first(), mv.last()) {
            doc.line((x_of(a), y), (x_of(b), y), "black", 2.0, Stroke::Solid);
        }
        for &v in mv {
            doc.circle((x_of(v), y), 3.0, "black");
        }
        doc.text((8.0, y + 4.0), 12.0, &format!("{}", s.masts[k]));
    }
    for (i, f) in s.faces.iter().enumerate() {
        // The yard edge of a face joins its highest vertices on the two masts.
        let pick = |m: usize| {
            f.vertices
                .iter()
                .copied()
                .filter(|&v| poly.vertices[v].mast == m)
                .max()
        };
        if let (Some(a), Some(b)) = (pick(s.masts[0]), pick(s.masts[1])) {
            let (pa, pb) = ((x_of(a), y_of(s.masts[0])), (x_of(b), y_of(s.masts[1])));
            let edge = lls.edges.get(i);
            let dashed = edge.is_some_and(|e| e.dashed);
            doc.line(
                pa,
                pb,
                "#1f4e9c",
                1.2,
                if dashed {
                    Stroke::Dashed
                } else {
                    Stroke::Solid
                },
            );
            if edge.is_some_and(|e| e.doubled) {
                doc.line(
                    (pa.0 + 3.0, pa.1),
                    (pb.0 + 3.0, pb.1),
                    "#1f4e9c",
                    1.2,
                    Stroke::Solid,
                );
            }
            if let Some(sine) = edge.and_then(|e| e.sine.as_ref()) {
                doc.text(
                    ((pa.0 + pb.0) / 2.0 + 4.0, (pa.1 + pb.1) / 2.0),
                    11.0,
                    &sine.to_string(),
                );
            }
        }
    }
    doc.render()
}

/// Converts a rational known to be an integer.
pub fn rational_to_u64(r: &BigRational) -> Option<u64> {
    r.is_integer().then(|| r.to_integer().to_u64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::NoseProgram;

    fn w(spec: &[(Generator, i64)]) -> Vec<(Generator, BigInt)> {
        spec.iter().map(|&(g, t)| (g, BigInt::from(t))).collect()
    }

    #[test]
    fn sail_of_5_7_8() {
        let cf = crate::meester::meester(&IntVec::from_i64s(&[5, 7, 8]), 100)
            .unwrap()
            .cf;
        let poly = NoseProgram::from_cf(&cf).polyhedron(100).unwrap();
        let s = sail(&poly, 2).unwrap();
        // Vertices are named by the number of completed mast segments; inner segment points are skipped.
        let name = |v: usize| -> Option<String> {
            let pv = &poly.vertices[v];
            let mut ends = vec![0usize];
            for r in mast_runs(&poly, pv.mast) {
                ends.push(ends.last().unwrap() + r as usize);
            }
            let k = ends.iter().position(|&e| e == pv.height)?;
            Some(format!("{}{}", ["A", "B", "C"][pv.mast - 1], k))
        };
        let faces: Vec<Vec<String>> = s
            .faces
            .iter()
            .map(|f| {
                let mut n: Vec<String> = f.vertices.iter().filter_map(|&v| name(v)).collect();
                n.sort();
                n
            })
            .collect();
        assert_eq!(
            faces,
            vec![
                vec!["A0", "A1", "C0"],
                vec!["A1", "C0", "C1"],
                vec!["A1", "A2", "C1"]
            ]
        );
    }

    #[test]
    fn dictionary_rows() {
        use Generator::*;
        let cases = [
            (w(&[(A(1), 2), (A(3), 3)]), 1, 0),
            (w(&[(B(1, 2), 1), (B(2, 1), 3), (B(1, 2), 2)]), 4, 3),
            (w(&[(A(1), 1), (A(2), 2), (B(2, 3), 3), (B(3, 2), 1)]), 7, 6),
        ];
        for (word, row, sine) in cases {
            let out = duality_check(&word).unwrap();
            assert_eq!(out.table.row, row);
            assert_eq!(out.table.expected, BigInt::from(sine));
            assert!(out.holds(), "{out:?}");
        }
        assert!(matches!(
            classify_word(&w(&[(A(2), 1), (A(1), 1)])),
            Err(FareyError::UncataloguedPattern(_))
        ));
    }

    #[test]
    fn hidden_elements() {
        use Generator::*;
        let r = hidden_element_recovery(&w(&[(A(1), 2), (A(2), 3), (B(2, 3), 2), (B(3, 2), 1)]))
            .unwrap();
        assert_eq!((r.x, r.y), (BigInt::from(3), BigInt::from(2)));
        assert_eq!(r.arctangent.get(2, 2), &BigInt::from(7));
    }
}
