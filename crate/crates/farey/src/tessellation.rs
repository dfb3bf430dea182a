//! The Farey tessellation of the positive orthant and the geometric Farey
//! summation run of a ray.
//!
//! The run follows the ray through the tessellation face by face using exact
//! barycentric coordinates, independently of the Meester algorithm, so the
//! two serve as oracles for each other.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::{self, IntVec, RatVec};
use crate::matrix::solve_in_span;
use crate::meester::{canonical_stage_two, Drop, FareyCF, FareyForm};
use crate::svg::{barycentric_to_screen, Stroke, SvgDoc};

/// Default cap on the construction depth of a tessellation.
pub const DEFAULT_MAX_DEPTH: usize = 8;

/// Role of a simplex in a Farey summation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SimplexKind {
    /// A Farey pyramid `S_i`.
    Pyramid,
    /// An intermediate yard `T_i`.
    Yard,
    /// The starting face.
    Deck,
    /// The last yard before the pennant.
    Nest,
    /// A simplex of the tessellation or a division simplex.
    Cell,
}

/// A simplex given by its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FareySimplex {
    /// Vertices in construction order.
    pub vertices: Vec<IntVec>,
    /// Role of the simplex.
    pub kind: SimplexKind,
}

impl FareySimplex {
    /// Builds a simplex.
    pub fn new(vertices: Vec<IntVec>, kind: SimplexKind) -> Self {
        FareySimplex { vertices, kind }
    }

    /// Dimension, one less than the number of vertices.
    pub fn dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Vertices in sorted order, for comparisons independent of construction order.
    pub fn sorted_vertices(&self) -> Vec<IntVec> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }

    /// Integer volume of the edge vectors from the first vertex.
    pub fn edge_volume(&self) -> Result<BigInt> {
        let base = &self.vertices[0];
        let edges: Vec<IntVec> = self.vertices[1..].iter().map(|v| v - base).collect();
        lattice::integer_volume(&edges)
    }

    /// Integer volume of the pyramid with apex at the origin over the vertices.
    pub fn origin_volume(&self) -> Result<BigInt> {
        lattice::integer_volume(&self.vertices)
    }
}

/// Farey sum of a non-empty list of vectors: their componentwise sum.
pub fn farey_sum(vs: &[IntVec]) -> Result<IntVec> {
    let first = vs
        .first()
        .ok_or_else(|| FareyError::Precondition("empty Farey sum".into()))?;
    vs[1..]
        .iter()
        .try_fold(first.clone(), |acc, v| acc.checked_add(v))
}

/// The faces generated by a bounded number of construction steps.
#[derive(Debug, Clone, Serialize)]
pub struct Tessellation {
    /// Ambient dimension.
    pub dim: usize,
    /// Number of construction steps.
    pub depth: usize,
    /// All faces of every dimension, each with sorted vertices.
    pub faces: Vec<Vec<IntVec>>,
    /// Farey pyramids over the full-size faces: the top-dimensional tessellation simplices.
    pub maximal: Vec<FareySimplex>,
    /// Full-size faces created at the last step (the basis simplex at depth zero).
    pub frontier: Vec<Vec<IntVec>>,
}

/// Builds the Farey tessellation of the positive orthant of `Z^n` to the given depth.
///
/// Starting from all faces of the basis simplex, every step adds the side
/// faces of the Farey pyramid of each face added by the previous step.
pub fn tessellate(n: usize, depth: usize) -> Result<Tessellation> {
    if n < 2 {
        return Err(FareyError::UnsupportedDimension(n));
    }
    if depth > DEFAULT_MAX_DEPTH {
        return Err(FareyError::BudgetExceeded {
            needed: depth.to_string(),
            budget: DEFAULT_MAX_DEPTH as u64,
        });
    }
    let basis: Vec<IntVec> = (0..n).map(|i| IntVec::basis(n, i)).collect();
    let mut all: BTreeSet<Vec<IntVec>> = BTreeSet::new();
    let mut fresh: Vec<Vec<IntVec>> = Vec::new();
    for k in 1..=n {
        for c in lattice::combinations(n, k) {
            let f: Vec<IntVec> = c.iter().map(|&i| basis[i].clone()).collect();
            all.insert(f.clone());
            fresh.push(f);
        }
    }
    let mut full_faces: Vec<Vec<IntVec>> = vec![basis.clone()];
    let mut frontier = vec![basis];
    for _ in 0..depth {
        let produced: Vec<Vec<Vec<IntVec>>> = fresh.par_iter().map(|f| side_faces(f)).collect();
        let mut next = Vec::new();
        for f in produced.into_iter().flatten() {
            if all.insert(f.clone()) {
                next.push(f);
            }
        }
        frontier = next.iter().filter(|f| f.len() == n).cloned().collect();
        full_faces.extend(frontier.iter().cloned());
        fresh = next;
    }
    let maximal = full_faces
        .iter()
        .map(|f| {
            let mut vs = vec![farey_sum(f).expect("non-empty")];
            vs.extend(f.iter().cloned());
            FareySimplex::new(vs, SimplexKind::Cell)
        })
        .collect();
    Ok(Tessellation {
        dim: n,
        depth,
        faces: all.into_iter().collect(),
        maximal,
        frontier,
    })
}

/// Side faces of the Farey pyramid of a face, with sorted vertices.
fn side_faces(face: &[IntVec]) -> Vec<Vec<IntVec>> {
    if face.len() < 2 {
        return Vec::new();
    }
    let w = farey_sum(face).expect("non-empty face");
    let mut out = Vec::new();
    for k in 0..face.len() {
        for c in lattice::combinations(face.len(), k) {
            let mut f: Vec<IntVec> = c.iter().map(|&i| face[i].clone()).collect();
            f.push(w.clone());
            f.sort();
            out.push(f);
        }
    }
    out
}

/// Central projection to the plane `x_1 + ... + x_n = 1`, keeping the first two coordinates.
fn project2(v: &IntVec) -> (BigRational, BigRational) {
    let s = v.coordinate_sum();
    (
        BigRational::new(v[0].clone(), s.clone()),
        BigRational::new(v[1].clone(), s),
    )
}

fn cross(
    o: &(BigRational, BigRational),
    a: &(BigRational, BigRational),
    b: &(BigRational, BigRational),
) -> BigRational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Twice the signed area of a projected triangle.
fn projected_area2(t: &[IntVec]) -> BigRational {
    let p: Vec<_> = t.iter().map(project2).collect();
    cross(&p[0], &p[1], &p[2])
}

/// True when two projected triangles have disjoint interiors, by separating edge lines.
fn projected_interiors_disjoint(a: &[IntVec], b: &[IntVec]) -> bool {
    let pa: Vec<_> = a.iter().map(project2).collect();
    let pb: Vec<_> = b.iter().map(project2).collect();
    let separated_by = |p: &[(BigRational, BigRational)], q: &[(BigRational, BigRational)]| {
        (0..3).any(|i| {
            let (o, e) = (&p[i], &p[(i + 1) % 3]);
            let inside = cross(o, e, &p[(i + 2) % 3]);
            // q lies weakly on the far side of the edge line.
            q.iter().all(|x| {
                let c = cross(o, e, x);
                c.is_zero() || c.is_positive() != inside.is_positive()
            })
        })
    };
    separated_by(&pa, &pb) || separated_by(&pb, &pa)
}

/// Outcome of the structural checks on a three-dimensional tessellation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct TessellationReport {
    /// Number of top-dimensional simplices checked.
    pub maximal_checked: usize,
    /// Simplices whose edge volume is not 2.
    pub bad_edge_volume: usize,
    /// Simplices with a face spanning a non-unimodular cone.
    pub bad_origin_volume: usize,
    /// Simplices containing extra lattice points.
    pub non_empty: usize,
    /// Pairs of frontier triangles whose projections overlap.
    pub overlapping_pairs: usize,
    /// True when the projected frontier triangles exactly cover the basis triangle.
    pub covers_basis: bool,
}

impl TessellationReport {
    /// True when no violation was found.
    pub fn is_clean(&self) -> bool {
        self.bad_edge_volume == 0
            && self.bad_origin_volume == 0
            && self.non_empty == 0
            && self.overlapping_pairs == 0
            && self.covers_basis
    }
}

impl Tessellation {
    /// Checks volumes, emptiness and the projected tiling in dimension three.
    pub fn check_properties(&self) -> Result<TessellationReport> {
        if self.dim != 3 {
            return Err(FareyError::UnsupportedDimension(self.dim));
        }
        let per: Vec<(bool, bool, bool)> = self
            .maximal
            .par_iter()
            .map(|s| {
                let edge_ok = s
                    .edge_volume()
                    .map(|v| v == BigInt::from(2))
                    .unwrap_or(false);
                let origin_ok = lattice::combinations(4, 3).iter().all(|c| {
                    let f: Vec<IntVec> = c.iter().map(|&i| s.vertices[i].clone()).collect();
                    lattice::integer_volume(&f)
                        .map(|v| v == BigInt::from(1))
                        .unwrap_or(false)
                });
                let empty = lattice::is_empty_polytope(&s.vertices).unwrap_or(false);
                (edge_ok, origin_ok, empty)
            })
            .collect();
        let mut r = TessellationReport {
            maximal_checked: per.len(),
            ..Default::default()
        };
        for (e, o, m) in per {
            r.bad_edge_volume += usize::from(!e);
            r.bad_origin_volume += usize::from(!o);
            r.non_empty += usize::from(!m);
        }
        let f = &self.frontier;
        r.overlapping_pairs = (0..f.len())
            .into_par_iter()
            .map(|i| {
                (i + 1..f.len())
                    .filter(|&j| !projected_interiors_disjoint(&f[i], &f[j]))
                    .count()
            })
            .sum();
        let total: BigRational = f.iter().map(|t| projected_area2(t).abs()).sum();
        let basis: Vec<IntVec> = (0..3).map(|i| IntVec::basis(3, i)).collect();
        r.covers_basis = total == projected_area2(&basis).abs();
        Ok(r)
    }

    /// SVG picture of all edges projected to the plane `x_1 + x_2 + x_3 = 1`.
    pub fn to_svg(&self, size: f64) -> Result<String> {
        if self.dim != 3 {
            return Err(FareyError::UnsupportedDimension(self.dim));
        }
        let mut doc = SvgDoc::new(size, size);
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            let p = screen(&f[0], size);
            let q = screen(&f[1], size);
            doc.line(p, q, "black", 0.6, Stroke::Solid);
        }
        Ok(doc.render())
    }
}

fn screen(v: &IntVec, size: f64) -> (f64, f64) {
    let c = v.to_f64();
    barycentric_to_screen([c[0], c[1], c[2]], size)
}

/// One unit step of the geometric run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunStep {
    /// Slot of the yard replaced by the new apex.
    pub slot: usize,
    /// The Farey sum of the yard.
    pub apex: IntVec,
    /// Slots leaving the yard at this step.
    pub dropped: Vec<usize>,
}

/// A maximal block of consecutive unit steps on one slot.
///
/// During a block every step adds the same vector (the sum of the other
/// yard vertices) to the stretched slot, so the block is stored in closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunBlock {
    /// Stretched slot.
    pub slot: usize,
    /// Number of unit steps.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub units: BigInt,
    /// Yard before the block as `(slot, vertex)` pairs.
    pub yard: Vec<(usize, IntVec)>,
    /// Slots leaving the yard at the last step of the block.
    pub dropped: Vec<usize>,
}

impl RunBlock {
    /// Sum of the yard vertices other than the stretched one.
    pub fn increment(&self) -> IntVec {
        let n = self.yard[0].1.dim();
        self.yard
            .iter()
            .filter(|(s, _)| *s != self.slot)
            .fold(IntVec::zero(n), |acc, (_, v)| &acc + v)
    }

    /// The stretched vertex at the start of the block.
    pub fn base(&self) -> &IntVec {
        &self
            .yard
            .iter()
            .find(|(s, _)| *s == self.slot)
            .expect("slot in yard")
            .1
    }

    /// Apex of the last unit step.
    pub fn last_apex(&self) -> IntVec {
        self.base() + &self.increment().scale(&self.units)
    }
}

/// The path of a ray through the Farey tessellation, stored block by block.
#[derive(Debug, Clone, Serialize)]
pub struct SummationRun {
    /// Ambient dimension.
    pub dim: usize,
    /// The ray direction as a primitive integer vector.
    pub target: IntVec,
    /// Slots of the deck.
    pub deck: Vec<usize>,
    /// Blocks of unit steps in order.
    pub blocks: Vec<RunBlock>,
    /// Yard reached when a step budget stopped an unfinished run.
    pub open_yard: Option<Vec<(usize, IntVec)>>,
    /// The final vertex when the run terminates.
    pub pennant: Option<IntVec>,
}

/// Runs the Farey summation algorithm along the ray through `v`.
///
/// The ray is located in the current yard by exact barycentric coordinates
/// `v = sum c_i V_i`. With `m = min c_i`, the ray meets the side face of the
/// Farey pyramid spanned by its apex and the vertices with `c_i > m`, and
/// the coordinates update to `m` for the apex and `c_i - m` for the rest.
/// A yard whose coordinates are all equal sends the ray through the apex,
/// which is the pennant. The slot given to the apex is the current slot
/// when it stays among the minima without an immediate drop, otherwise the
/// first minimum found cyclically after the previous slot. Consecutive steps
/// on one slot are grouped: the stretched slot keeps coefficient `m` while
/// the others lose `m` per step, so the block lasts `min floor(c_i / m)` steps.
///
/// `max_units` bounds the total number of unit steps.
pub fn farey_summation_run(v: &RatVec, max_units: &BigInt) -> Result<SummationRun> {
    let (_, iv) = v.to_scaled_int();
    farey_summation_run_int(&iv, max_units)
}

/// Integer version of [`farey_summation_run`].
pub fn farey_summation_run_int(v: &IntVec, max_units: &BigInt) -> Result<SummationRun> {
    let n = v.dim();
    if n < 2 {
        return Err(FareyError::UnsupportedDimension(n));
    }
    if let Some(i) = v.iter().position(Signed::is_negative) {
        return Err(FareyError::NegativeCoordinate(i));
    }
    let target = v.primitive()?;
    let deck: Vec<usize> = (0..n).filter(|&i| !target[i].is_zero()).collect();
    let mut slots: Vec<Option<IntVec>> = vec![None; n];
    for &i in &deck {
        slots[i] = Some(IntVec::basis(n, i));
    }
    let cols: Vec<IntVec> = deck.iter().map(|&i| IntVec::basis(n, i)).collect();
    let sol = solve_in_span(&cols, &target)?
        .ok_or_else(|| FareyError::Internal("ray outside the deck".into()))?;
    let mut coef: Vec<Option<BigRational>> = vec![None; n];
    for (k, &i) in deck.iter().enumerate() {
        coef[i] = Some(sol[k].clone());
    }
    let mut blocks: Vec<RunBlock> = Vec::new();
    let mut used = BigInt::zero();
    let mut prev_slot = 0usize;
    let mut just_dropped = false;
    let mut pennant = None;
    let mut open_yard = None;
    loop {
        let idx: Vec<usize> = (0..n).filter(|&i| slots[i].is_some()).collect();
        let yard: Vec<(usize, IntVec)> = idx
            .iter()
            .map(|&i| (i + 1, slots[i].clone().expect("live")))
            .collect();
        if idx.len() == 1 {
            if blocks.is_empty() {
                pennant = Some(yard[0].1.clone());
            }
            break;
        }
        if &used >= max_units {
            open_yard = Some(yard);
            break;
        }
        let m = idx
            .iter()
            .map(|&i| coef[i].clone().expect("live"))
            .min()
            .expect("non-empty");
        if !m.is_positive() {
            return Err(FareyError::Internal("ray left the open yard".into()));
        }
        let mins: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&i| coef[i].as_ref() == Some(&m))
            .collect();
        let keeper = match prev_slot.checked_sub(1) {
            Some(c) if mins.contains(&c) && !just_dropped => c,
            _ => (0..n)
                .map(|k| (prev_slot + k) % n)
                .find(|i| mins.contains(i))
                .expect("a minimum"),
        };
        // Steps on the keeper continue while it stays a minimum.
        let mut units = idx
            .iter()
            .filter(|&&i| i != keeper)
            .map(|&i| (coef[i].clone().expect("live") / &m).floor().to_integer())
            .min()
            .expect("another slot");
        let budget_left = max_units - &used;
        let cut = units > budget_left;
        if cut {
            units = budget_left;
        }
        let units_q = BigRational::from_integer(units.clone());
        let mut dropped = Vec::new();
        for &i in &idx {
            if i != keeper {
                let c = coef[i].take().expect("live") - &m * &units_q;
                if c.is_zero() {
                    dropped.push(i + 1);
                } else {
                    coef[i] = Some(c);
                }
            }
        }
        let block = RunBlock {
            slot: keeper + 1,
            units: units.clone(),
            yard,
            dropped: dropped.clone(),
        };
        let apex = block.last_apex();
        for &d in &dropped {
            slots[d - 1] = None;
        }
        slots[keeper] = Some(apex.clone());
        blocks.push(block);
        used += units;
        just_dropped = !dropped.is_empty();
        prev_slot = keeper + 1;
        if slots.iter().flatten().count() == 1 {
            pennant = Some(apex);
            break;
        }
        if cut {
            let idx: Vec<usize> = (0..n).filter(|&i| slots[i].is_some()).collect();
            open_yard = Some(
                idx.iter()
                    .map(|&i| (i + 1, slots[i].clone().expect("live")))
                    .collect(),
            );
            break;
        }
    }
    if let Some(p) = &pennant {
        if *p != target {
            return Err(FareyError::Internal(format!(
                "run ended at {p} instead of {target}"
            )));
        }
    }
    Ok(SummationRun {
        dim: n,
        target,
        deck: deck.iter().map(|i| i + 1).collect(),
        blocks,
        open_yard,
        pennant,
    })
}

/// The unit-step simplices of a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSimplices {
    /// Unit steps in order.
    pub steps: Vec<RunStep>,
    /// Farey pyramids `S_1, ..., S_N`.
    pub pyramids: Vec<FareySimplex>,
    /// Yards `T_0, ..., T_{N-1}`, the deck first and the nest last; an
    /// unfinished run also lists the yard it stopped in.
    pub yards: Vec<FareySimplex>,
    /// Slots of the yard vertices, parallel to `yards`.
    pub yard_slots: Vec<Vec<usize>>,
    /// Principal flag of every yard.
    pub principal: Vec<bool>,
    /// Division simplices.
    pub division_simplices: Vec<FareySimplex>,
    /// The final vertex when the run terminates.
    pub pennant: Option<IntVec>,
}

impl SummationRun {
    /// Number of Farey pyramids, the total number of unit steps.
    pub fn pyramid_count(&self) -> BigInt {
        self.blocks.iter().map(|b| &b.units).sum()
    }

    /// True when the run reached its pennant.
    pub fn terminated(&self) -> bool {
        self.pennant.is_some()
    }

    /// Expands the blocks into unit steps, failing beyond `max_units` steps.
    pub fn simplices(&self, max_units: u64) -> Result<RunSimplices> {
        let total = self.pyramid_count();
        if total > BigInt::from(max_units) {
            return Err(FareyError::BudgetExceeded {
                needed: total.to_string(),
                budget: max_units,
            });
        }
        let mut steps = Vec::new();
        let mut pyramids = Vec::new();
        let mut yards = Vec::new();
        let mut yard_slots = Vec::new();
        for b in &self.blocks {
            let inc = b.increment();
            let mut yard = b.yard.clone();
            let pos = yard
                .iter()
                .position(|(s, _)| *s == b.slot)
                .expect("slot in yard");
            let units = num_traits::ToPrimitive::to_u64(&b.units).expect("bounded");
            for u in 0..units {
                let apex = &yard[pos].1 + &inc;
                let verts: Vec<IntVec> = yard.iter().map(|(_, v)| v.clone()).collect();
                let mut pyr = verts.clone();
                pyr.push(apex.clone());
                pyramids.push(FareySimplex::new(pyr, SimplexKind::Pyramid));
                yards.push(FareySimplex::new(verts, SimplexKind::Yard));
                yard_slots.push(yard.iter().map(|(s, _)| *s).collect());
                let dropped = if u + 1 == units {
                    b.dropped.clone()
                } else {
                    vec![]
                };
                steps.push(RunStep {
                    slot: b.slot,
                    apex: apex.clone(),
                    dropped,
                });
                yard[pos].1 = apex;
            }
        }
        if let Some(y) = &self.open_yard {
            yards.push(FareySimplex::new(
                y.iter().map(|(_, v)| v.clone()).collect(),
                SimplexKind::Yard,
            ));
            yard_slots.push(y.iter().map(|(s, _)| *s).collect());
        }
        if yards.is_empty() {
            let deck: Vec<IntVec> = self
                .deck
                .iter()
                .map(|&s| IntVec::basis(self.dim, s - 1))
                .collect();
            yards.push(FareySimplex::new(deck, SimplexKind::Deck));
            yard_slots.push(self.deck.clone());
        }
        if self.terminated() {
            if let Some(last) = yards.last_mut() {
                last.kind = SimplexKind::Nest;
            }
        }
        yards[0].kind = SimplexKind::Deck;
        let m = yards.len();
        let principal: Vec<bool> = (0..m)
            .map(|i| {
                if i == 0 || i + 1 == m {
                    return true;
                }
                let changed = steps.get(i).map(|s: &RunStep| s.slot)
                    != steps.get(i - 1).map(|s: &RunStep| s.slot);
                changed || yards[i].vertices.len() < yards[i - 1].vertices.len()
            })
            .collect();
        let marks: Vec<usize> = (0..m).filter(|&i| principal[i]).collect();
        let mut division_simplices = Vec::new();
        for w in marks.windows(2) {
            let mut set: Vec<IntVec> = yards[w[0]].vertices.clone();
            for p in &pyramids[w[0]..w[1]] {
                for v in &p.vertices {
                    if !set.contains(v) {
                        set.push(v.clone());
                    }
                }
            }
            division_simplices.push(FareySimplex::new(set, SimplexKind::Cell));
        }
        if let (Some(p), Some(&last)) = (&self.pennant, marks.last()) {
            if !pyramids.is_empty() {
                let mut set = yards[last].vertices.clone();
                set.push(p.clone());
                division_simplices.push(FareySimplex::new(set, SimplexKind::Cell));
            }
        }
        Ok(RunSimplices {
            steps,
            pyramids,
            yards,
            yard_slots,
            principal,
            division_simplices,
            pennant: self.pennant.clone(),
        })
    }

    /// Meester continued fraction read off the slots of the run.
    ///
    /// An active pointer cycles over the slots still in the yard; every
    /// block is an element, and every live slot passed over contributes a zero.
    pub fn meester_cf(&self) -> Result<FareyCF> {
        let n = self.dim;
        let mut alive = vec![false; n];
        for &s in &self.deck {
            alive[s - 1] = true;
        }
        let mut drops: Vec<Drop> = (0..n)
            .filter(|&i| !alive[i])
            .map(|i| Drop {
                step: 0,
                coord: i + 1,
            })
            .collect();
        let mut elements: Vec<BigInt> = Vec::new();
        let mut pointer = 0usize;
        for b in &self.blocks {
            loop {
                pointer = pointer % n + 1;
                if !alive[pointer - 1] {
                    continue;
                }
                if pointer == b.slot {
                    break;
                }
                elements.push(BigInt::zero());
            }
            elements.push(b.units.clone());
            for &d in &b.dropped {
                alive[d - 1] = false;
                drops.push(Drop {
                    step: elements.len(),
                    coord: d,
                });
            }
        }
        FareyCF::new(n, elements, drops, self.terminated())
    }

    /// Two-stage Farey form tabulated directly from the blocks of a three-dimensional run.
    ///
    /// Stage one places the blocks on positions cycling through 1, 2, 3 up to
    /// the first drop, then pads with zeros until its length is congruent to
    /// the dropped slot. Stage two places the remaining blocks on positions
    /// alternating between the two following slots.
    pub fn farey_form(&self) -> Result<FareyForm> {
        if self.dim != 3 {
            return Err(FareyError::UnsupportedDimension(self.dim));
        }
        let terminated = self.terminated();
        let initial: Vec<usize> = (1..=3).filter(|s| !self.deck.contains(s)).collect();
        let mut a: Vec<BigInt> = Vec::new();
        let mut first_drop = (!initial.is_empty()).then(|| initial.clone());
        let mut i = 0;
        while first_drop.is_none() && i < self.blocks.len() {
            let b = &self.blocks[i];
            while a.len() % 3 + 1 != b.slot {
                a.push(BigInt::zero());
            }
            a.push(b.units.clone());
            if !b.dropped.is_empty() {
                first_drop = Some(b.dropped.clone());
            }
            i += 1;
        }
        let Some(dropped) = first_drop else {
            return Ok(FareyForm {
                a,
                b: vec![],
                split: false,
                terminated,
            });
        };
        if dropped.len() == 2 {
            return Ok(FareyForm {
                a,
                b: vec![],
                split: true,
                terminated,
            });
        }
        let d = dropped[0];
        while a.len() % 3 != d % 3 {
            a.push(BigInt::zero());
        }
        let k = a.len();
        let pos = [k % 3 + 1, (k + 1) % 3 + 1];
        let mut b: Vec<BigInt> = Vec::new();
        for blk in &self.blocks[i..] {
            while pos[b.len() % 2] != blk.slot {
                b.push(BigInt::zero());
            }
            b.push(blk.units.clone());
        }
        let b = if terminated {
            canonical_stage_two(b)
        } else {
            b
        };
        Ok(FareyForm {
            a,
            b,
            split: true,
            terminated,
        })
    }

    /// SVG picture of the yards projected to the plane `x_1 + x_2 + x_3 = 1`.
    pub fn to_svg(&self, size: f64, max_units: u64) -> Result<String> {
        if self.dim != 3 {
            return Err(FareyError::UnsupportedDimension(self.dim));
        }
        let s = self.simplices(max_units)?;
        let mut doc = SvgDoc::new(size, size);
        let basis: Vec<(f64, f64)> = (0..3).map(|i| screen(&IntVec::basis(3, i), size)).collect();
        doc.polygon(&basis, "none", "black", 1.0);
        for (i, y) in s.yards.iter().enumerate() {
            let pts: Vec<(f64, f64)> = y.vertices.iter().map(|v| screen(v, size)).collect();
            let color = if s.principal[i] { "#1f5fbf" } else { "#9fb7df" };
            if pts.len() >= 3 {
                doc.polygon(&pts, "none", color, 1.2);
            } else if pts.len() == 2 {
                doc.line(pts[0], pts[1], color, 1.2, Stroke::Solid);
            }
        }
        if let Some(p) = &self.pennant {
            doc.circle(screen(p, size), 3.0, "#c03030");
        }
        Ok(doc.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meester::{meester, to_farey_form};

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64s(x)
    }

    #[test]
    fn farey_sums() {
        let e: Vec<IntVec> = (0..3).map(|i| IntVec::basis(3, i)).collect();
        assert_eq!(farey_sum(&e).unwrap(), v(&[1, 1, 1]));
        assert_eq!(
            farey_sum(&[v(&[1, 1, 1]), v(&[4, 6, 7])]).unwrap(),
            v(&[5, 7, 8])
        );
        assert!(farey_sum(&[v(&[1, 1]), v(&[1, 1, 1])]).is_err());
    }

    #[test]
    fn run_for_5_7_8() {
        let run = farey_summation_run_int(&v(&[5, 7, 8]), &BigInt::from(100)).unwrap();
        let s = run.simplices(100).unwrap();
        let apexes: Vec<IntVec> = s.steps.iter().map(|s| s.apex.clone()).collect();
        assert_eq!(
            apexes,
            vec![
                v(&[1, 1, 1]),
                v(&[1, 2, 2]),
                v(&[2, 3, 4]),
                v(&[4, 6, 7]),
                v(&[5, 7, 8])
            ]
        );
        assert_eq!(s.principal, vec![true, true, true, false, true]);
        assert_eq!(
            s.yards[4].sorted_vertices(),
            vec![v(&[1, 1, 1]), v(&[4, 6, 7])]
        );
        assert_eq!(s.yards[4].kind, SimplexKind::Nest);
        assert_eq!(run.pennant, Some(v(&[5, 7, 8])));
        assert_eq!(run.farey_form().unwrap().to_string(), "[1;1:2:0:0 | 1]");
        assert_eq!(run.meester_cf().unwrap().to_string(), "[1;1:2 |_2 1]");
    }

    #[test]
    fn trivial_runs() {
        let run = farey_summation_run_int(&v(&[1, 0, 0]), &BigInt::from(10)).unwrap();
        assert!(run.simplices(10).unwrap().pyramids.is_empty());
        assert_eq!(run.pennant, Some(v(&[1, 0, 0])));
        assert!(run.meester_cf().unwrap().is_empty());
        let run = farey_summation_run_int(&v(&[1, 1, 1]), &BigInt::from(10)).unwrap();
        assert_eq!(run.pyramid_count(), BigInt::from(1));
        assert_eq!(
            run.meester_cf().unwrap(),
            meester(&v(&[1, 1, 1]), 10).unwrap().cf
        );
    }

    #[test]
    fn run_matches_meester_on_examples() {
        for x in [
            [55, 10, 67],
            [6, 14, 15],
            [16, 39, 42],
            [5, 0, 7],
            [3, 3, 5],
            [2, 1, 1],
            [7, 7, 7],
        ] {
            let run = farey_summation_run_int(&v(&x), &BigInt::from(10_000)).unwrap();
            let cf = meester(&v(&x), 10_000).unwrap().cf;
            assert_eq!(run.meester_cf().unwrap(), cf, "{x:?}");
            assert_eq!(
                run.farey_form().unwrap(),
                to_farey_form(&cf).unwrap(),
                "{x:?}"
            );
        }
    }

    #[test]
    fn small_tessellation_is_clean() {
        let t = tessellate(3, 2).unwrap();
        assert_eq!(t.maximal.len(), 1 + 3 + 9);
        assert!(t.check_properties().unwrap().is_clean());
        let t0 = tessellate(3, 0).unwrap();
        assert_eq!(t0.faces.len(), 7);
    }
}
