//! Prismatic diagrams: the combinatorial invariant of Farey polyhedra.
//!
//! A prismatic diagram of base dimension `k` is a path-triangulated prism
//! over a `(k-1)`-simplex. Each step of the path raises one mast by one unit,
//! so the diagram is determined by its LR sequence: the list of raised masts.
//! Vertices are written as `(mast, height)` pairs and embedded canonically at
//! `E_mast + height * (1, ..., 1)`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::IntVec;
use crate::meester::FareyCF;
use crate::svg::{Stroke, SvgDoc};

/// A vertex of a prismatic diagram: its mast and its height on that mast.
pub type MastVertex = (usize, usize);

/// The sequence of masts raised at the steps of a path triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LRSequence {
    k: usize,
    raw: Vec<usize>,
}

impl LRSequence {
    /// Builds a sequence from raw mast indices in `1..=k`.
    pub fn from_raw(k: usize, raw: Vec<usize>) -> Result<Self> {
        if k < 2 {
            return Err(FareyError::UnsupportedDimension(k));
        }
        if let Some(&m) = raw.iter().find(|&&m| m == 0 || m > k) {
            return Err(FareyError::Precondition(format!(
                "mast {m} outside 1..={k}"
            )));
        }
        Ok(LRSequence { k, raw })
    }

    /// Builds a sequence from the exponential form `1^{a_1} 2^{a_2} ... k^{a_k} 1^{a_{k+1}} ...`.
    pub fn from_exponential(k: usize, exps: &[u64]) -> Result<Self> {
        let mut raw = Vec::new();
        for (i, &a) in exps.iter().enumerate() {
            raw.extend(std::iter::repeat_n(i % k + 1, a as usize));
        }
        LRSequence::from_raw(k, raw)
    }

    /// Number of masts.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Raw mast indices, one per step.
    pub fn raw(&self) -> &[usize] {
        &self.raw
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    /// True for the sequence of the empty diagram.
    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Exponential form over masts cycling `1, 2, ..., k`, with zero exponents for skipped masts.
    pub fn exponents(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        for &m in &self.raw {
            if out.last().is_some() && (out.len() - 1) % self.k + 1 == m {
                *out.last_mut().expect("non-empty") += 1;
            } else {
                while out.len() % self.k + 1 != m {
                    out.push(0);
                }
                out.push(1);
            }
        }
        out
    }

    /// Exponential form as `(mast, exponent)` pairs.
    pub fn exponential(&self) -> Vec<(usize, u64)> {
        self.exponents()
            .into_iter()
            .enumerate()
            .map(|(i, a)| (i % self.k + 1, a))
            .collect()
    }

    /// Number of raises of each mast.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.k];
        for &m in &self.raw {
            h[m - 1] += 1;
        }
        h
    }
}

/// A canonical prismatic diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrismaticDiagram {
    lr: LRSequence,
    /// Names of the masts in an enclosing structure, `mast_names[m - 1]` for mast `m`.
    mast_names: Vec<usize>,
}

/// An ordered path triangulation given by abstract vertex identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathTriangulation {
    /// Ordered vertices of the deck; their positions name the masts.
    pub deck: Vec<usize>,
    /// Simplices in path order, each with `deck.len() + 1` vertices.
    pub simplices: Vec<Vec<usize>>,
    /// Vertices of the nest face.
    pub nest: Vec<usize>,
}

impl PrismaticDiagram {
    /// Diagram with the given LR sequence.
    pub fn new(lr: LRSequence) -> Self {
        let mast_names = (1..=lr.k).collect();
        PrismaticDiagram { lr, mast_names }
    }

    /// Diagram with the given exponential LR form.
    pub fn from_exponents(k: usize, exps: &[u64]) -> Result<Self> {
        Ok(Self::new(LRSequence::from_exponential(k, exps)?))
    }

    /// Number of masts.
    pub fn k(&self) -> usize {
        self.lr.k
    }

    /// The LR sequence.
    pub fn lr_sequence(&self) -> &LRSequence {
        &self.lr
    }

    /// Names of the masts in the structure the diagram was cut from.
    pub fn mast_names(&self) -> &[usize] {
        &self.mast_names
    }

    /// Number of simplices.
    pub fn length(&self) -> usize {
        self.lr.len()
    }

    /// Mast heights `D = (d_1, ..., d_k)`.
    pub fn heights(&self) -> Vec<usize> {
        self.lr.heights()
    }

    /// Yards `T_0, ..., T_d`: the tops of all masts before each step and at the end.
    pub fn yards(&self) -> Vec<Vec<MastVertex>> {
        let k = self.k();
        let mut h = vec![0usize; k];
        let mut out = Vec::with_capacity(self.length() + 1);
        out.push((1..=k).map(|m| (m, 0)).collect());
        for &m in self.lr.raw() {
            h[m - 1] += 1;
            out.push((1..=k).map(|j| (j, h[j - 1])).collect());
        }
        out
    }

    /// The deck face.
    pub fn deck(&self) -> Vec<MastVertex> {
        (1..=self.k()).map(|m| (m, 0)).collect()
    }

    /// The nest face.
    pub fn nest(&self) -> Vec<MastVertex> {
        self.heights()
            .iter()
            .enumerate()
            .map(|(i, &h)| (i + 1, h))
            .collect()
    }

    /// Simplices in path order: the yard before each step and the new vertex.
    pub fn simplices(&self) -> Vec<Vec<MastVertex>> {
        let yards = self.yards();
        self.lr
            .raw()
            .iter()
            .enumerate()
            .map(|(t, &m)| {
                let mut s = yards[t].clone();
                s.push((m, yards[t + 1][m - 1].1));
                s
            })
            .collect()
    }

    /// All vertices, mast by mast.
    pub fn vertices(&self) -> Vec<MastVertex> {
        let h = self.heights();
        (1..=self.k())
            .flat_map(|m| (0..=h[m - 1]).map(move |j| (m, j)))
            .collect()
    }

    /// Canonical coordinates `E_mast + height * (1, ..., 1)` of a vertex.
    pub fn coordinates(&self, v: MastVertex) -> IntVec {
        let k = self.k();
        let c: Vec<i64> = (0..k)
            .map(|i| v.1 as i64 + i64::from(i + 1 == v.0))
            .collect();
        IntVec::from_i64s(&c)
    }

    /// Mast edges: consecutive vertices of each mast.
    pub fn mast_edges(&self) -> Vec<(MastVertex, MastVertex)> {
        let h = self.heights();
        (1..=self.k())
            .flat_map(|m| (0..h[m - 1]).map(move |j| ((m, j), (m, j + 1))))
            .collect()
    }

    /// The vertex with label `v_{i,j}`: the `j`-th vertex (from 1) of the `i`-th exponential segment.
    ///
    /// The segment runs on mast `(i - 1) mod k + 1` and `j` ranges over
    /// `1..=a_i + 1`, so segment end points carry two labels.
    pub fn label(&self, i: usize, j: usize) -> Result<MastVertex> {
        let exps = self.lr.exponents();
        if i == 0 || i > exps.len() {
            return Err(FareyError::OutOfRange {
                index: i,
                max: exps.len(),
            });
        }
        let a = exps[i - 1] as usize;
        if j == 0 || j > a + 1 {
            return Err(FareyError::OutOfRange {
                index: j,
                max: a + 1,
            });
        }
        let k = self.k();
        let m = (i - 1) % k + 1;
        let before: u64 = exps[..i - 1]
            .iter()
            .enumerate()
            .filter(|(p, _)| p % k + 1 == m)
            .map(|(_, &x)| x)
            .sum();
        Ok((m, before as usize + j - 1))
    }

    /// Interval of yard indices containing a vertex.
    pub fn yard_interval(&self, v: MastVertex) -> Result<(usize, usize)> {
        let yards = self.yards();
        let hits: Vec<usize> = (0..yards.len())
            .filter(|&t| yards[t].contains(&v))
            .collect();
        match (hits.first(), hits.last()) {
            (Some(&a), Some(&b)) => Ok((a, b)),
            _ => Err(FareyError::Precondition(format!(
                "({}, {}) is not a vertex",
                v.0, v.1
            ))),
        }
    }

    /// The `(i, j)`-slice: the simplices between yards `T_i` and `T_j`, with `T_i` as deck.
    ///
    /// Yards are numbered from 0 (the deck) to the length (the nest). The
    /// masts are renamed cyclically so that the first raised mast becomes mast 1.
    pub fn slice(&self, i: usize, j: usize) -> Result<PrismaticDiagram> {
        let d = self.length();
        if j > d {
            return Err(FareyError::OutOfRange { index: j, max: d });
        }
        if i >= j {
            return Err(FareyError::Precondition(format!(
                "slice ({i}, {j}) contains no simplex"
            )));
        }
        let k = self.k();
        let shift = self.lr.raw()[i] - 1;
        let raw: Vec<usize> = self.lr.raw()[i..j]
            .iter()
            .map(|&m| (m - 1 + k - shift) % k + 1)
            .collect();
        let mast_names = (0..k).map(|p| self.mast_names[(p + shift) % k]).collect();
        Ok(PrismaticDiagram {
            lr: LRSequence::from_raw(k, raw)?,
            mast_names,
        })
    }

    /// The smallest slice containing both vertices, or `None` when a single yard contains both.
    pub fn geodesic(&self, v: MastVertex, w: MastVertex) -> Result<Option<PrismaticDiagram>> {
        let (a1, b1) = self.yard_interval(v)?;
        let (a2, b2) = self.yard_interval(w)?;
        if a2 <= b1 && a1 <= b2 {
            return Ok(None);
        }
        let (i, j) = if b1 < a2 { (b1, a2) } else { (b2, a1) };
        self.slice(i, j).map(Some)
    }

    /// True when some yard contains both vertices.
    pub fn yard_connected(&self, v: MastVertex, w: MastVertex) -> bool {
        self.yards()
            .iter()
            .any(|y| y.contains(&v) && y.contains(&w))
    }

    /// The diagram as an abstract path triangulation with vertices numbered in creation order.
    pub fn to_path_triangulation(&self) -> PathTriangulation {
        let k = self.k();
        let mut top: Vec<usize> = (0..k).collect();
        let mut simplices = Vec::new();
        for (next, &m) in (k..).zip(self.lr.raw()) {
            let mut s = top.clone();
            s.push(next);
            simplices.push(s);
            top[m - 1] = next;
        }
        PathTriangulation {
            deck: (0..k).collect(),
            simplices,
            nest: top,
        }
    }

    /// Recovers the canonical diagram of an ordered path triangulation.
    ///
    /// Every simplex must consist of the current yard and one new vertex;
    /// the yard vertex left out of the next shared face determines the
    /// raised mast.
    pub fn canonicalize(t: &PathTriangulation) -> Result<PrismaticDiagram> {
        let k = t.deck.len();
        let mut yard = t.deck.clone();
        let mut seen: BTreeSet<usize> = yard.iter().copied().collect();
        if seen.len() != k {
            return Err(FareyError::Precondition("repeated deck vertex".into()));
        }
        let mut raw = Vec::new();
        for (idx, s) in t.simplices.iter().enumerate() {
            let set: BTreeSet<usize> = s.iter().copied().collect();
            if set.len() != k + 1 || !yard.iter().all(|v| set.contains(v)) {
                return Err(FareyError::Precondition(format!(
                    "simplex {idx} does not contain the current yard"
                )));
            }
            let new = *set
                .iter()
                .find(|v| !yard.contains(v))
                .expect("one extra vertex");
            if !seen.insert(new) {
                return Err(FareyError::Precondition(format!(
                    "simplex {idx} revisits a vertex"
                )));
            }
            // The face shared with the next simplex (or the nest) decides the replaced vertex.
            let next_face: &[usize] = match t.simplices.get(idx + 1) {
                Some(nx) => nx,
                None => &t.nest,
            };
            let out: Vec<usize> = yard
                .iter()
                .copied()
                .filter(|v| !next_face.contains(v))
                .collect();
            if out.len() != 1 || !next_face.contains(&new) {
                return Err(FareyError::Precondition(format!(
                    "simplex {idx} does not share a facet through its new vertex with its successor"
                )));
            }
            let pos = yard.iter().position(|&v| v == out[0]).expect("in yard");
            raw.push(pos + 1);
            yard[pos] = new;
        }
        let nest: BTreeSet<usize> = t.nest.iter().copied().collect();
        if nest != yard.iter().copied().collect() {
            return Err(FareyError::Precondition(
                "nest is not the final yard".into(),
            ));
        }
        Ok(PrismaticDiagram::new(LRSequence::from_raw(k, raw)?))
    }

    /// Schematic SVG: masts as horizontal lines, yard edges between them.
    pub fn to_svg(&self, width: f64) -> String {
        let k = self.k();
        let d = self.length().max(1) as f64;
        let row = 60.0;
        let height = row * (k as f64 + 1.0);
        let mut doc = SvgDoc::new(width, height);
        let x_of = |t: usize| 40.0 + (width - 80.0) * t as f64 / d;
        let y_of = |m: usize| row * m as f64;
        // Creation time of every vertex.
        let mut born = vec![vec![0usize]; k];
        for (t, &m) in self.lr.raw().iter().enumerate() {
            born[m - 1].push(t + 1);
        }
        for m in 1..=k {
            let last = *born[m - 1].last().expect("deck vertex");
            doc.line(
                (x_of(0), y_of(m)),
                (x_of(last), y_of(m)),
                "black",
                2.0,
                Stroke::Solid,
            );
            for &t in &born[m - 1] {
                doc.circle((x_of(t), y_of(m)), 3.0, "black");
            }
            doc.text(
                (16.0, y_of(m) + 4.0),
                12.0,
                &format!("{}", self.mast_names[m - 1]),
            );
        }
        for y in self.yards() {
            for a in 0..k {
                for b in a + 1..k {
                    let (va, vb) = (y[a], y[b]);
                    let pa = (x_of(born[va.0 - 1][va.1]), y_of(va.0));
                    let pb = (x_of(born[vb.0 - 1][vb.1]), y_of(vb.0));
                    doc.line(pa, pb, "#777777", 0.8, Stroke::Solid);
                }
            }
        }
        doc.render()
    }
}

/// One part of a flag diagram: a prismatic diagram on a subset of the masts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagPart {
    /// The diagram, with local masts `1..=k_i`.
    pub diagram: PrismaticDiagram,
    /// Global masts in the cyclic order used by the local masts.
    pub masts: Vec<usize>,
}

/// A prismatic flag diagram: prismatic diagrams of decreasing dimension glued along their faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagDiagram {
    /// Ambient dimension.
    pub dim: usize,
    /// Parts in order.
    pub parts: Vec<FlagPart>,
}

impl FlagDiagram {
    /// Simplices of all parts as lists of global `(mast, height)` vertices.
    pub fn simplices(&self) -> Vec<Vec<MastVertex>> {
        let mut base = vec![0usize; self.dim + 1];
        let mut out = Vec::new();
        for part in &self.parts {
            for s in part.diagram.simplices() {
                out.push(
                    s.iter()
                        .map(|&(m, h)| (part.masts[m - 1], base[part.masts[m - 1]] + h))
                        .collect(),
                );
            }
            for (i, &h) in part.diagram.heights().iter().enumerate() {
                base[part.masts[i]] += h;
            }
        }
        out
    }

    /// Total mast heights by global mast.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.dim];
        for part in &self.parts {
            for (i, &x) in part.diagram.heights().iter().enumerate() {
                h[part.masts[i] - 1] += x;
            }
        }
        h
    }
}

/// The canonical flag diagram of a finite continued fraction.
///
/// Parts are separated by the drops before the final step. Part `i` acts on
/// the masts alive during it, listed cyclically from the first mast it raises.
pub fn diagram_of_cf(cf: &FareyCF) -> Result<FlagDiagram> {
    if !cf.terminated() {
        return Err(FareyError::Precondition(
            "infinite continued fraction".into(),
        ));
    }
    let n = cf.dim();
    let slots = cf.active_slots();
    let len = cf.len();
    let mut cuts: Vec<usize> = cf
        .drops()
        .iter()
        .map(|d| d.step)
        .filter(|&s| s > 0 && s < len)
        .collect();
    cuts.dedup();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(len);
    let mut parts = Vec::new();
    for w in bounds.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let alive = cf.alive_after(s0);
        let start = slots.get(s0).copied().unwrap_or(alive[0]);
        let p = alive
            .iter()
            .position(|&m| m == start)
            .ok_or_else(|| FareyError::Internal("dead active slot".into()))?;
        let masts: Vec<usize> = (0..alive.len())
            .map(|q| alive[(p + q) % alive.len()])
            .collect();
        let mut raw = Vec::new();
        for i in s0..s1 {
            let local = masts.iter().position(|&m| m == slots[i]).expect("alive") + 1;
            let a = cf.elements()[i]
                .to_usize()
                .ok_or_else(|| FareyError::Precondition("element too large".into()))?;
            raw.extend(std::iter::repeat_n(local, a));
        }
        if alive.len() < 2 {
            break;
        }
        parts.push(FlagPart {
            diagram: PrismaticDiagram::new(LRSequence::from_raw(alive.len(), raw)?),
            masts,
        });
    }
    Ok(FlagDiagram { dim: n, parts })
}

/// All LR sequences of length `d` on `k` masts, one canonical diagram each.
pub fn enumerate_diagrams(k: usize, d: usize) -> Result<Vec<PrismaticDiagram>> {
    let total = k
        .checked_pow(d as u32)
        .ok_or_else(|| FareyError::Precondition("too many diagrams".into()))?;
    (0..total)
        .map(|mut code| {
            let mut raw = vec![0; d];
            for r in raw.iter_mut().rev() {
                *r = code % k + 1;
                code /= k;
            }
            Ok(PrismaticDiagram::new(LRSequence::from_raw(k, raw)?))
        })
        .collect()
}

/// Diagrams with the given mast heights, one per arrangement of the raises.
pub fn diagrams_with_heights(heights: &[usize]) -> Result<Vec<PrismaticDiagram>> {
    let k = heights.len();
    let d: usize = heights.iter().sum();
    Ok(enumerate_diagrams(k, d)?
        .into_iter()
        .filter(|p| p.heights() == heights)
        .collect())
}

/// Number of geometrically distinct triangulations among all LR sequences of length `d`.
///
/// Triangulations are compared as sets of simplices in canonical coordinates.
pub fn count_distinct_triangulations(k: usize, d: usize) -> Result<usize> {
    let mut seen: BTreeSet<Vec<Vec<IntVec>>> = BTreeSet::new();
    for p in enumerate_diagrams(k, d)? {
        let mut simplices: Vec<Vec<IntVec>> = p
            .simplices()
            .iter()
            .map(|s| {
                let mut c: Vec<IntVec> = s.iter().map(|&v| p.coordinates(v)).collect();
                c.sort();
                c
            })
            .collect();
        simplices.sort();
        seen.insert(simplices);
    }
    Ok(seen.len())
}

/// JSON-friendly description of a diagram.
pub fn describe(d: &PrismaticDiagram) -> serde_json::Value {
    let mut labels = String::new();
    for (i, (m, a)) in d.lr.exponential().iter().enumerate() {
        let _ = write!(labels, "{}{}^{}", if i > 0 { " " } else { "" }, m, a);
    }
    serde_json::json!({
        "k": d.k(),
        "lr_raw": d.lr.raw(),
        "lr_exponential": d.lr.exponents(),
        "lr_text": labels,
        "heights": d.heights(),
        "masts": d.mast_names(),
        "simplices": d.simplices(),
        "deck": d.deck(),
        "nest": d.nest(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_form_roundtrip() {
        let lr = LRSequence::from_exponential(3, &[3, 1, 2, 1, 2, 3, 3, 1]).unwrap();
        assert_eq!(lr.exponents(), vec![3, 1, 2, 1, 2, 3, 3, 1]);
        let lr = LRSequence::from_exponential(3, &[0, 2, 0, 1]).unwrap();
        assert_eq!(lr.raw(), &[2, 2, 1]);
        assert_eq!(lr.exponents(), vec![0, 2, 0, 1]);
    }

    #[test]
    fn labels_follow_segments() {
        let d = PrismaticDiagram::from_exponents(3, &[3, 1, 2, 1, 2, 3, 3, 1]).unwrap();
        assert_eq!(d.label(1, 4).unwrap(), (1, 3));
        assert_eq!(d.label(4, 1).unwrap(), (1, 3));
        assert_eq!(d.label(2, 2).unwrap(), (2, 1));
        assert_eq!(d.label(7, 3).unwrap(), (1, 6));
        assert!(d.label(9, 1).is_err());
    }

    #[test]
    fn canonicalize_inverts_path_triangulation() {
        for p in enumerate_diagrams(3, 4).unwrap() {
            let t = p.to_path_triangulation();
            assert_eq!(PrismaticDiagram::canonicalize(&t).unwrap(), p);
        }
        let mut t = PrismaticDiagram::from_exponents(3, &[1, 1, 1])
            .unwrap()
            .to_path_triangulation();
        t.simplices.swap(0, 2);
        assert!(PrismaticDiagram::canonicalize(&t).is_err());
    }

    #[test]
    fn slices_and_geodesics() {
        let d = PrismaticDiagram::from_exponents(3, &[3, 1, 2, 1, 2, 3, 3, 1]).unwrap();
        assert_eq!(
            d.slice(0, d.length()).unwrap().lr_sequence(),
            d.lr_sequence()
        );
        assert!(d.slice(2, 2).is_err());
        let s = d.slice(3, 14).unwrap();
        assert_eq!(s.lr_sequence().exponents(), vec![1, 2, 1, 2, 3, 2]);
        assert_eq!(s.mast_names(), &[2, 3, 1]);
        let v = d.label(2, 1).unwrap();
        let w = d.label(7, 3).unwrap();
        assert_eq!(
            d.geodesic(v, w).unwrap().unwrap().lr_sequence().exponents(),
            vec![1, 2, 1, 2, 3, 2]
        );
        assert!(d.geodesic(v, v).unwrap().is_none());
    }

    #[test]
    fn canonical_count_is_k_to_the_d() {
        for d in 0..=4 {
            assert_eq!(
                count_distinct_triangulations(3, d).unwrap(),
                3usize.pow(d as u32)
            );
        }
    }
}
