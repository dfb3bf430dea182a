//! Reconstruction of Farey polyhedra from continued fractions.
//!
//! A continued fraction is compiled into a nose stretching program: a list
//! of Farey additions on vector slots and erasures of slots. Running the
//! program yields the chain of slot states, the Farey polyhedron with its
//! yards, pyramids, masts and pennant, and in three dimensions the product of
//! generator matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::IntVec;
use crate::matrix::IntMatrix;
use crate::meester::{FareyCF, FareyForm};

/// One instruction of a nose stretching program. Slots are numbered from one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NoseOp {
    /// `V_slot += times * (sum of the other live slots)`, one Farey pyramid per unit.
    Add {
        /// Slot being stretched.
        slot: usize,
        /// Number of unit steps.
        #[serde(serialize_with = "crate::lattice::ser_bigint")]
        times: BigInt,
    },
    /// Replace the listed slots with zero vectors.
    Erase {
        /// Slots being erased.
        slots: Vec<usize>,
    },
}

/// A nose stretching program in a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoseProgram {
    /// Ambient dimension.
    pub dim: usize,
    /// Instructions in order.
    pub ops: Vec<NoseOp>,
    /// For a finite program, the slot holding the pennant; all others are erased at the end.
    pub keep: Option<usize>,
}

impl NoseProgram {
    /// Program of a Meester continued fraction.
    pub fn from_cf(cf: &FareyCF) -> Self {
        let slots = cf.active_slots();
        let mut ops = Vec::new();
        let initial: Vec<usize> = cf
            .drops()
            .iter()
            .filter(|d| d.step == 0)
            .map(|d| d.coord)
            .collect();
        let len = cf.len();
        let terminal_at_zero = cf.terminated() && len == 0;
        if !initial.is_empty() && !terminal_at_zero {
            ops.push(NoseOp::Erase { slots: initial });
        }
        for (i, a) in cf.elements().iter().enumerate() {
            ops.push(NoseOp::Add {
                slot: slots[i],
                times: a.clone(),
            });
            let step = i + 1;
            let dropped: Vec<usize> = cf
                .drops()
                .iter()
                .filter(|d| d.step == step)
                .map(|d| d.coord)
                .collect();
            if !dropped.is_empty() && !(cf.terminated() && step == len) {
                ops.push(NoseOp::Erase { slots: dropped });
            }
        }
        let keep = if cf.terminated() {
            Some(match slots.last() {
                Some(&s) => s,
                None => cf.alive_after(0)[0],
            })
        } else {
            None
        };
        NoseProgram {
            dim: cf.dim(),
            ops,
            keep,
        }
    }

    /// Program of a three-dimensional Farey form.
    ///
    /// Stage one acts on coordinates `1, 2, 3, 1, ...`; the dropped coordinate
    /// is erased before stage two, which alternates between `s` and `t`.
    pub fn from_farey_form(f: &FareyForm) -> Self {
        let mut ops = Vec::new();
        let mut last_changed = None;
        for (i, a) in f.a.iter().enumerate() {
            let slot = i % 3 + 1;
            ops.push(NoseOp::Add {
                slot,
                times: a.clone(),
            });
            if !a.is_zero() {
                last_changed = Some(slot);
            }
        }
        if f.split && !f.b.is_empty() {
            ops.push(NoseOp::Erase {
                slots: vec![f.dropped_coord()],
            });
            let (s, t) = f.stage_two_coords();
            for (i, b) in f.b.iter().enumerate() {
                let slot = if i % 2 == 0 { s } else { t };
                ops.push(NoseOp::Add {
                    slot,
                    times: b.clone(),
                });
                if !b.is_zero() {
                    last_changed = Some(slot);
                }
            }
        }
        let keep = if f.terminated {
            Some(last_changed.unwrap_or(1))
        } else {
            None
        };
        NoseProgram { dim: 3, ops, keep }
    }

    /// Program of a word in the generators `A_i` and `B_ij`.
    ///
    /// A `B_ij` factor met while three slots are alive first erases the third slot.
    pub fn from_word(word: &[(Generator, BigInt)]) -> Result<Self> {
        let mut ops = Vec::new();
        let mut alive = vec![1usize, 2, 3];
        let mut last_changed = None;
        for (g, t) in word {
            if t.is_negative() {
                return Err(FareyError::Precondition("negative exponent".into()));
            }
            match *g {
                Generator::A(i) => {
                    if alive.len() != 3 {
                        return Err(FareyError::Precondition(format!(
                            "A_{i} after the dimension dropped"
                        )));
                    }
                    ops.push(NoseOp::Add {
                        slot: i,
                        times: t.clone(),
                    });
                    if !t.is_zero() {
                        last_changed = Some(i);
                    }
                }
                Generator::B(i, j) => {
                    if alive.len() == 3 {
                        let third = 6 - i - j;
                        alive.retain(|&s| s != third);
                        ops.push(NoseOp::Erase { slots: vec![third] });
                    } else if !(alive.contains(&i) && alive.contains(&j)) {
                        return Err(FareyError::Precondition(format!(
                            "B_{i}{j} acts on an erased slot"
                        )));
                    }
                    ops.push(NoseOp::Add {
                        slot: i,
                        times: t.clone(),
                    });
                    if !t.is_zero() {
                        last_changed = Some(i);
                    }
                }
            }
        }
        Ok(NoseProgram {
            dim: 3,
            ops,
            keep: Some(last_changed.unwrap_or(1)),
        })
    }

    /// Runs the program, recording the slot state after every instruction.
    pub fn run(&self) -> Result<NoseChain> {
        let n = self.dim;
        let mut cur: Vec<Option<IntVec>> = (0..n).map(|i| Some(IntVec::basis(n, i))).collect();
        let mut states = vec![NoseState {
            vectors: cur.clone(),
        }];
        for op in &self.ops {
            match op {
                NoseOp::Add { slot, times } => {
                    let s = slot_index(*slot, n)?;
                    let Some(base) = cur[s].clone() else {
                        return Err(FareyError::MalformedCf(format!(
                            "stretching erased slot {slot}"
                        )));
                    };
                    let others = sum_others(&cur, s, n);
                    cur[s] = Some(&base + &others.scale(times));
                }
                NoseOp::Erase { slots } => {
                    for &slot in slots {
                        let s = slot_index(slot, n)?;
                        if cur[s].take().is_none() {
                            return Err(FareyError::MalformedCf(format!(
                                "slot {slot} erased twice"
                            )));
                        }
                    }
                }
            }
            states.push(NoseState {
                vectors: cur.clone(),
            });
        }
        if let Some(k) = self.keep {
            let s = slot_index(k, n)?;
            if cur[s].is_none() {
                return Err(FareyError::MalformedCf(format!("kept slot {k} was erased")));
            }
            for (i, c) in cur.iter_mut().enumerate() {
                if i != s {
                    *c = None;
                }
            }
            states.push(NoseState {
                vectors: cur.clone(),
            });
        }
        Ok(NoseChain {
            states,
            pennant: self.keep.and_then(|k| cur[k - 1].clone()),
        })
    }

    /// Builds the Farey polyhedron by expanding every addition into unit steps.
    ///
    /// Each unit step contributes one vertex, so the cost is proportional to
    /// the sum of the exponents; `max_units` guards against huge exponents.
    pub fn polyhedron(&self, max_units: u64) -> Result<FareyPolyhedron> {
        FareyPolyhedron::build(self, max_units)
    }
}

fn slot_index(slot: usize, n: usize) -> Result<usize> {
    if slot == 0 || slot > n {
        return Err(FareyError::MalformedCf(format!(
            "slot {slot} outside 1..={n}"
        )));
    }
    Ok(slot - 1)
}

fn sum_others(cur: &[Option<IntVec>], s: usize, n: usize) -> IntVec {
    let mut acc = IntVec::zero(n);
    for (i, v) in cur.iter().enumerate() {
        if i != s {
            if let Some(v) = v {
                acc = &acc + v;
            }
        }
    }
    acc
}

/// Slot vectors at one moment of nose stretching; `None` marks an erased slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoseState {
    /// One entry per slot.
    pub vectors: Vec<Option<IntVec>>,
}

impl NoseState {
    /// The state as a matrix whose columns are the slots, erased slots being zero columns.
    pub fn matrix(&self) -> IntMatrix {
        let n = self.vectors.len();
        let cols: Vec<IntVec> = self
            .vectors
            .iter()
            .map(|v| v.clone().unwrap_or_else(|| IntVec::zero(n)))
            .collect();
        IntMatrix::from_columns(&cols).expect("equal lengths")
    }

    /// Live vectors, forming the current yard.
    pub fn yard(&self) -> Vec<IntVec> {
        self.vectors.iter().flatten().cloned().collect()
    }
}

/// The sequence of states produced by a nose stretching program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoseChain {
    /// Initial state followed by the state after each instruction, and after the final erasure.
    pub states: Vec<NoseState>,
    /// The single surviving vector of a finite program.
    pub pennant: Option<IntVec>,
}

/// Runs nose stretching for a Meester continued fraction.
pub fn nose_stretch(cf: &FareyCF) -> Result<NoseChain> {
    NoseProgram::from_cf(cf).run()
}

/// Pennant of a finite continued fraction.
pub fn pennant_of_cf(cf: &FareyCF) -> Result<IntVec> {
    nose_stretch(cf)?
        .pennant
        .ok_or_else(|| FareyError::Precondition("infinite continued fraction".into()))
}

/// A vertex of a Farey polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyVertex {
    /// Lattice point.
    pub point: IntVec,
    /// Slot (mast) the vertex belongs to.
    pub mast: usize,
    /// Number of unit steps on the mast before this vertex; deck vertices have height 0.
    pub height: usize,
}

/// One unit Farey addition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitStep {
    /// Stretched slot.
    pub slot: usize,
    /// Index of the new vertex.
    pub apex: usize,
    /// Index of the instruction this step belongs to.
    pub op: usize,
}

/// Farey polyhedron: deck, yards, pyramids, masts and pennant.
///
/// Yards `T_0, ..., T_{N-1}` are the live slots before each unit step, so
/// that pyramid `S_i` is `T_{i-1}` plus the apex of step `i`. The apex of
/// the final step of a finite polyhedron is the pennant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FareyPolyhedron {
    /// Ambient dimension.
    pub dim: usize,
    /// All vertices; the first `dim` are the basis vectors.
    pub vertices: Vec<PolyVertex>,
    /// Unit steps in order.
    pub steps: Vec<UnitStep>,
    /// Yards as lists of `(slot, vertex index)`, one before each unit step.
    pub yards: Vec<Vec<(usize, usize)>>,
    /// Index of the pennant vertex for a finite polyhedron.
    pub pennant: Option<usize>,
}

impl FareyPolyhedron {
    fn build(program: &NoseProgram, max_units: u64) -> Result<Self> {
        let n = program.dim;
        let total: BigInt = program
            .ops
            .iter()
            .map(|op| match op {
                NoseOp::Add { times, .. } => times.clone(),
                NoseOp::Erase { .. } => BigInt::zero(),
            })
            .sum();
        if total > BigInt::from(max_units) {
            return Err(FareyError::BudgetExceeded {
                needed: total.to_string(),
                budget: max_units,
            });
        }
        let mut vertices: Vec<PolyVertex> = (0..n)
            .map(|i| PolyVertex {
                point: IntVec::basis(n, i),
                mast: i + 1,
                height: 0,
            })
            .collect();
        let mut cur: Vec<Option<usize>> = (0..n).map(Some).collect();
        let mut heights = vec![0usize; n];
        let mut steps = Vec::new();
        let mut yards = Vec::new();
        for (oi, op) in program.ops.iter().enumerate() {
            match op {
                NoseOp::Add { slot, times } => {
                    let s = slot_index(*slot, n)?;
                    if cur[s].is_none() {
                        return Err(FareyError::MalformedCf(format!(
                            "stretching erased slot {slot}"
                        )));
                    }
                    let units = times.to_u64().expect("bounded by max_units");
                    for _ in 0..units {
                        yards.push(live(&cur));
                        let mut p = IntVec::zero(n);
                        for c in cur.iter().flatten() {
                            p = &p + &vertices[*c].point;
                        }
                        heights[s] += 1;
                        vertices.push(PolyVertex {
                            point: p,
                            mast: s + 1,
                            height: heights[s],
                        });
                        cur[s] = Some(vertices.len() - 1);
                        steps.push(UnitStep {
                            slot: s + 1,
                            apex: vertices.len() - 1,
                            op: oi,
                        });
                    }
                }
                NoseOp::Erase { slots } => {
                    for &slot in slots {
                        let s = slot_index(slot, n)?;
                        if cur[s].take().is_none() {
                            return Err(FareyError::MalformedCf(format!(
                                "slot {slot} erased twice"
                            )));
                        }
                    }
                }
            }
        }
        let pennant = match program.keep {
            Some(k) => {
                let s = slot_index(k, n)?;
                let id = cur[s]
                    .ok_or_else(|| FareyError::MalformedCf(format!("kept slot {k} was erased")))?;
                if steps.is_empty() {
                    // Nothing was built: the pennant is the kept basis vector itself.
                    Some(id)
                } else {
                    if steps.last().map(|st| st.apex) != Some(id) {
                        return Err(FareyError::MalformedCf(
                            "the kept slot was not stretched last".into(),
                        ));
                    }
                    Some(id)
                }
            }
            None => {
                yards.push(live(&cur));
                None
            }
        };
        Ok(FareyPolyhedron {
            dim: n,
            vertices,
            steps,
            yards,
            pennant,
        })
    }

    /// Number of unit steps, equal to the number of Farey pyramids.
    pub fn pyramid_count(&self) -> usize {
        self.steps.len()
    }

    /// Points of yard `i`.
    pub fn yard_points(&self, i: usize) -> Vec<IntVec> {
        self.yards[i]
            .iter()
            .map(|&(_, v)| self.vertices[v].point.clone())
            .collect()
    }

    /// Vertex indices of pyramid `S_i` (one based): yard `T_{i-1}` and the apex of step `i`.
    pub fn pyramid(&self, i: usize) -> Vec<usize> {
        let mut p: Vec<usize> = self.yards[i - 1].iter().map(|&(_, v)| v).collect();
        p.push(self.steps[i - 1].apex);
        p
    }

    /// Points of the pennant, if finite.
    pub fn pennant_point(&self) -> Option<&IntVec> {
        self.pennant.map(|p| &self.vertices[p].point)
    }

    /// Flags of principal yards.
    ///
    /// The deck and the nest are principal; an intermediate yard is principal
    /// when the next step stretches another slot or the yard lost a vertex.
    pub fn principal_flags(&self) -> Vec<bool> {
        let m = self.yards.len();
        (0..m)
            .map(|i| {
                if i == 0 || i + 1 == m {
                    return true;
                }
                let changed =
                    self.steps.get(i).map(|s| s.slot) != self.steps.get(i - 1).map(|s| s.slot);
                changed || self.yards[i].len() < self.yards[i - 1].len()
            })
            .collect()
    }

    /// Vertex sets of the division simplices.
    ///
    /// Between consecutive principal yards the division simplex collects the
    /// vertices of every intermediate pyramid; a final one joins the nest and
    /// the pennant.
    pub fn division_simplices(&self) -> Vec<Vec<usize>> {
        let flags = self.principal_flags();
        let principal: Vec<usize> = (0..flags.len()).filter(|&i| flags[i]).collect();
        let mut out = Vec::new();
        for w in principal.windows(2) {
            let (pa, pb) = (w[0], w[1]);
            let mut set: Vec<usize> = self.yards[pa].iter().map(|&(_, v)| v).collect();
            for i in pa + 1..=pb {
                for v in self.pyramid(i) {
                    if !set.contains(&v) {
                        set.push(v);
                    }
                }
            }
            out.push(set);
        }
        if let (Some(p), Some(&last)) = (self.pennant, principal.last()) {
            if !self.steps.is_empty() {
                let mut set: Vec<usize> = self.yards[last].iter().map(|&(_, v)| v).collect();
                set.push(p);
                out.push(set);
            }
        }
        out
    }
}

fn live(cur: &[Option<usize>]) -> Vec<(usize, usize)> {
    cur.iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|v| (i + 1, v)))
        .collect()
}

/// Generators of the three-dimensional matrix semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    /// `A_i`: column `i` gains the sum of the other columns.
    A(usize),
    /// `B_ij`: column `i` gains column `j`.
    B(usize, usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A(i) => write!(f, "A{i}"),
            Generator::B(i, j) => write!(f, "B{i}{j}"),
        }
    }
}

/// `g^t` for a non-negative integer exponent `t`.
///
/// `A_i^t` is the identity with `t` in the off-diagonal entries of column
/// `i`; `B_ij^t` is the identity with `t` at row `j`, column `i`. Multiplying
/// a matrix on the right by them performs the corresponding column update.
pub fn generator_power(g: Generator, t: &BigInt) -> IntMatrix {
    let mut m = IntMatrix::identity(3);
    match g {
        Generator::A(i) => {
            for r in 0..3 {
                if r != i - 1 {
                    m.set(r, i - 1, t.clone());
                }
            }
        }
        Generator::B(i, j) => m.set(j - 1, i - 1, t.clone()),
    }
    m
}

/// `g^t` for a non-negative rational exponent, the analytic continuation of integer powers.
pub fn real_power_matrix(g: Generator, t: &BigRational) -> Result<Vec<Vec<BigRational>>> {
    if t.is_negative() {
        return Err(FareyError::Precondition("negative exponent".into()));
    }
    let mut m: Vec<Vec<BigRational>> = (0..3)
        .map(|r| {
            (0..3)
                .map(|c| {
                    if r == c {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    match g {
        Generator::A(i) => {
            for (r, row) in m.iter_mut().enumerate() {
                if r != i - 1 {
                    row[i - 1] = t.clone();
                }
            }
        }
        Generator::B(i, j) => m[j - 1][i - 1] = t.clone(),
    }
    Ok(m)
}

/// The generator word of a Farey form: `A_1^{a_1} A_2^{a_2} ... B_st^{b_1} B_ts^{b_2} ...`.
pub fn word_of_farey_form(f: &FareyForm) -> Vec<(Generator, BigInt)> {
    let mut w: Vec<(Generator, BigInt)> =
        f.a.iter()
            .enumerate()
            .map(|(i, a)| (Generator::A(i % 3 + 1), a.clone()))
            .collect();
    let (s, t) = f.stage_two_coords();
    for (i, b) in f.b.iter().enumerate() {
        let g = if i % 2 == 0 {
            Generator::B(s, t)
        } else {
            Generator::B(t, s)
        };
        w.push((g, b.clone()));
    }
    w
}

/// Human readable word such as `A1 A2 A3^2 B31`.
pub fn word_to_string(w: &[(Generator, BigInt)]) -> String {
    w.iter()
        .map(|(g, t)| {
            if t.is_one() {
                g.to_string()
            } else {
                format!("{g}^{t}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// The continued fraction matrix: the product of the generator powers of the word.
pub fn cf_matrix(f: &FareyForm) -> IntMatrix {
    partial_quotient_matrix(f, usize::MAX)
}

/// Product of the first `i` generator powers of the word of `f`.
pub fn partial_quotient_matrix(f: &FareyForm, i: usize) -> IntMatrix {
    word_of_farey_form(f)
        .iter()
        .take(i)
        .fold(IntMatrix::identity(3), |m, (g, t)| {
            m.mul(&generator_power(*g, t)).expect("3x3")
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meester::{meester, to_farey_form};

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64s(x)
    }

    #[test]
    fn chain_for_5_7_8() {
        let cf = FareyCF::parse("[1;1:2 |_2 1]", 3).unwrap();
        let chain = nose_stretch(&cf).unwrap();
        let expected: [&[&[i64]]; 7] = [
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
            &[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]],
            &[&[1, 1, 0], &[1, 2, 0], &[1, 2, 1]],
            &[&[1, 1, 4], &[1, 2, 6], &[1, 2, 7]],
            &[&[1, 0, 4], &[1, 0, 6], &[1, 0, 7]],
            &[&[5, 0, 4], &[7, 0, 6], &[8, 0, 7]],
            &[&[5, 0, 0], &[7, 0, 0], &[8, 0, 0]],
        ];
        assert_eq!(chain.states.len(), 7);
        for (s, e) in chain.states.iter().zip(expected) {
            assert_eq!(s.matrix(), IntMatrix::from_i64_rows(e));
        }
        assert_eq!(chain.pennant, Some(v(&[5, 7, 8])));
    }

    #[test]
    fn matrix_of_5_7_8() {
        let f = to_farey_form(&meester(&v(&[5, 7, 8]), 100).unwrap().cf).unwrap();
        assert_eq!(
            word_to_string(&word_of_farey_form(&f)),
            "A1 A2 A3^2 A1^0 A2^0 B31"
        );
        let m = cf_matrix(&f);
        assert!(m.columns().contains(&v(&[5, 7, 8])));
        assert_eq!(m.det(), BigInt::one());
    }

    #[test]
    fn polyhedron_of_5_7_8() {
        let cf = FareyCF::parse("[1;1:2 |_2 1]", 3).unwrap();
        let p = NoseProgram::from_cf(&cf).polyhedron(1000).unwrap();
        let apexes: Vec<IntVec> = p
            .steps
            .iter()
            .map(|s| p.vertices[s.apex].point.clone())
            .collect();
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
        assert_eq!(p.principal_flags(), vec![true, true, true, false, true]);
        assert_eq!(p.pennant_point(), Some(&v(&[5, 7, 8])));
    }

    #[test]
    fn real_powers_extend_integer_powers() {
        let a = generator_power(Generator::A(1), &BigInt::from(1));
        assert_eq!(
            a.mul(&a).unwrap(),
            generator_power(Generator::A(1), &BigInt::from(2))
        );
        let r =
            real_power_matrix(Generator::A(1), &BigRational::from_integer(BigInt::zero())).unwrap();
        assert_eq!(r[1][0], BigRational::zero());
        assert!(real_power_matrix(
            Generator::A(1),
            &BigRational::from_integer(BigInt::from(-1))
        )
        .is_err());
    }
}
