//! Divergence cells of the Meester algorithm and the cubic non-periodicity demonstration.
//!
//! Once one coordinate of a three-dimensional remainder exceeds the sum of
//! the others it stays so, and the algorithm cannot converge. The cells where
//! this happens after an admissible prefix are triangles on the section
//! `x_1 + x_2 + x_3 = 1`.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::{IntVec, RatVec};
use crate::meester::{meester, FareyForm};
use crate::reconstruct::NoseProgram;
use crate::svg::{barycentric_to_screen, Stroke, SvgDoc};

/// A removed corner triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovedCell {
    /// The generating prefix `(a_1, ..., a_n)`.
    #[serde(serialize_with = "ser_bigints")]
    pub prefix: Vec<BigInt>,
    /// Corner generators `[a | 1]`, `[a:0 | 1]`, `[a:0:0 | 1]`.
    pub corners: [IntVec; 3],
    /// Centre generator `[a | ]`.
    pub centre: IntVec,
    /// Corners projected to the plane section.
    pub triangle: [RatVec; 3],
    /// Centre projected to the plane section.
    pub centre_point: RatVec,
}

fn ser_bigints<S: serde::Serializer>(x: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(x.iter().map(|v| v.to_string()))
}

/// Prefixes with element sum at most `bound`, last element non-zero and no
/// two consecutive zeros except a leading pair.
pub fn admissible_prefixes(bound: u64) -> Vec<Vec<u64>> {
    fn extend(cur: &mut Vec<u64>, left: u64, out: &mut Vec<Vec<u64>>) {
        if cur.last().is_some_and(|&x| x != 0) {
            out.push(cur.clone());
        }
        let n = cur.len();
        for x in 0..=left {
            let zero_pair = x == 0 && n >= 1 && cur[n - 1] == 0;
            if zero_pair && !(n == 1) {
                continue;
            }
            // A leading pair of zeros must be followed by a positive element.
            if x == 0 && n == 2 && cur[0] == 0 && cur[1] == 0 {
                continue;
            }
            cur.push(x);
            extend(cur, left - x, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), bound, &mut out);
    out
}

fn pennant_of_form(a: &[BigInt], b: &[BigInt]) -> Result<IntVec> {
    let f = FareyForm {
        a: a.to_vec(),
        b: b.to_vec(),
        split: true,
        terminated: true,
    };
    NoseProgram::from_farey_form(&f)
        .run()?
        .pennant
        .ok_or_else(|| FareyError::Internal("finite form without pennant".into()))
}

/// The removed cell of one prefix.
pub fn removed_cell(prefix: &[u64]) -> Result<RemovedCell> {
    if prefix.last().is_none_or(|&x| x == 0) {
        return Err(FareyError::Inadmissible(
            "prefix must end with a non-zero element".into(),
        ));
    }
    let a: Vec<BigInt> = prefix.iter().map(|&x| BigInt::from(x)).collect();
    let one = [BigInt::one()];
    let mut corners = Vec::with_capacity(3);
    for pad in 0..3 {
        let mut ap = a.clone();
        ap.extend(std::iter::repeat_n(BigInt::zero(), pad));
        corners.push(pennant_of_form(&ap, &one)?);
    }
    let centre = pennant_of_form(&a, &[])?;
    let proj = |v: &IntVec| v.to_rat().project_to_unit_sum();
    let corners: [IntVec; 3] = corners.try_into().expect("three corners");
    Ok(RemovedCell {
        prefix: a,
        triangle: [proj(&corners[0])?, proj(&corners[1])?, proj(&corners[2])?],
        centre_point: proj(&centre)?,
        corners,
        centre,
    })
}

/// All removed cells for prefixes with element sum at most `bound`.
pub fn divergence_cells(bound: u64) -> Result<Vec<RemovedCell>> {
    admissible_prefixes(bound)
        .par_iter()
        .map(|p| removed_cell(p))
        .collect()
}

/// Outcome of sampling points inside a cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PersistenceReport {
    /// Sample points examined.
    pub samples: usize,
    /// Smallest number of steps observed after the dominance first appeared.
    pub min_steps_after_entry: usize,
    /// True when every sample, once dominated, stayed dominated.
    pub persistent: bool,
}

fn dominated(c: &IntVec) -> bool {
    let max = c.iter().max().expect("non-empty");
    let sum = c.coordinate_sum();
    max * 2 > sum
}

/// Samples integer points inside the cone of a cell and checks that the
/// Meester remainder keeps one coordinate above the sum of the others.
///
/// Each sample is a random positive combination of the corner generators
/// with weights of about `digits` decimal digits, so that the run lasts long
/// enough to observe `min_steps` steps after entering the cell.
pub fn persistence_check(
    cell: &RemovedCell,
    samples: usize,
    digits: u32,
    seed: u64,
) -> Result<PersistenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hi = BigInt::from(10).pow(digits);
    let lo = BigInt::from(10).pow(digits.saturating_sub(1));
    let mut min_after = usize::MAX;
    let mut persistent = true;
    for _ in 0..samples {
        let mut v = IntVec::zero(3);
        for c in &cell.corners {
            let w = rng.gen_bigint_range(&lo, &hi);
            v = &v + &c.scale(&w);
        }
        let trace = meester(&v, 100_000)?;
        let Some(entry) = trace.states.iter().position(dominated) else {
            persistent = false;
            continue;
        };
        // The final state of an integer run has a single survivor and is always dominated.
        let last = trace.states.len() - 1;
        if trace.states[entry..].iter().any(|s| !dominated(s)) {
            persistent = false;
        }
        min_after = min_after.min(last - entry);
    }
    Ok(PersistenceReport {
        samples,
        min_steps_after_entry: if samples == 0 { 0 } else { min_after },
        persistent,
    })
}

/// SVG of removed cells on the section, with dashed lines from the basis vertices to the centres.
pub fn cells_to_svg(cells: &[RemovedCell], size: f64) -> String {
    let mut doc = SvgDoc::new(size, size);
    let pt = |r: &RatVec| {
        let f = r.to_f64();
        barycentric_to_screen([f[0], f[1], f[2]], size)
    };
    let basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let b: Vec<(f64, f64)> = basis
        .iter()
        .map(|&p| barycentric_to_screen(p, size))
        .collect();
    doc.polygon(&b, "none", "black", 1.0);
    for c in cells {
        let pts: Vec<(f64, f64)> = c.triangle.iter().map(pt).collect();
        doc.polygon(&pts, "#c0392b", "#7b241c", 0.5);
        let centre = pt(&c.centre_point);
        for &corner in &b {
            doc.line(corner, centre, "#888888", 0.4, Stroke::Dashed);
        }
    }
    doc.render()
}

/// Outcome of the cubic demonstration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicDemo {
    /// Decimal digits of the approximation.
    pub digits: u32,
    /// Approximate Perron eigenvector `(x, y, 1)` as decimal strings.
    pub eigenvector: [String; 3],
    /// Meester elements agreeing between two precisions.
    #[serde(serialize_with = "ser_bigints")]
    pub elements: Vec<BigInt>,
    /// The elements with zeros removed.
    #[serde(serialize_with = "ser_bigints")]
    pub zero_removed: Vec<BigInt>,
    /// Regular continued fraction of `x`, agreeing between two precisions.
    #[serde(serialize_with = "ser_bigints")]
    pub ratio_cf: Vec<BigInt>,
    /// True when `steps` elements were certified.
    pub complete: bool,
}

/// Largest root of `t^3 - 20 t^2 + 100 t - 1`, to within `10^-digits`, by bisection.
pub fn perron_root(digits: u32) -> BigRational {
    let p = |t: &BigRational| -> BigRational {
        let c = |x: i64| BigRational::from_integer(BigInt::from(x));
        t * t * t - c(20) * t * t + c(100) * t - c(1)
    };
    let mut lo = BigRational::from_integer(BigInt::from(10));
    let mut hi = BigRational::from_integer(BigInt::from(11));
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits + 2));
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / &two;
        if p(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Integer vector approximating the eigenvector `(l (l - 10), l, 1)` scaled by `10^digits`.
fn eigen_integers(digits: u32) -> (IntVec, BigRational) {
    let l = perron_root(digits);
    let ten = BigRational::from_integer(BigInt::from(10));
    let x = &l * (&l - &ten);
    let scale = BigRational::from_integer(BigInt::from(10).pow(digits));
    let round = |r: BigRational| (r * &scale).round().to_integer();
    (
        IntVec::new(vec![round(x.clone()), round(l), round(BigRational::one())]),
        x,
    )
}

/// Regular continued fraction of a positive rational, at most `max` terms.
pub fn regular_cf(r: &BigRational, max: usize) -> Vec<BigInt> {
    let (mut p, mut q) = (r.numer().clone(), r.denom().clone());
    let mut out = Vec::new();
    while !q.is_zero() && out.len() < max {
        let (a, rem) = p.div_mod_floor(&q);
        out.push(a);
        p = q;
        q = rem;
    }
    out
}

fn common_prefix(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .zip(b)
        .take_while(|(x, y)| x == y)
        .map(|(x, _)| x.clone())
        .collect()
}

/// Runs the Meester algorithm on the eigenvector approximation at two
/// precisions and keeps the elements on which both agree.
pub fn cubic_demo(digits: u32, steps: usize) -> Result<CubicDemo> {
    if digits == 0 {
        return Err(FareyError::Precondition("digits must be positive".into()));
    }
    let (v1, x1) = eigen_integers(digits);
    let (v2, x2) = eigen_integers(digits + 20);
    let e1 = meester(&v1, steps)?.cf.elements().to_vec();
    let e2 = meester(&v2, steps)?.cf.elements().to_vec();
    let elements = common_prefix(&e1, &e2);
    let zero_removed: Vec<BigInt> = elements.iter().filter(|x| !x.is_zero()).cloned().collect();
    let ratio_cf = common_prefix(&regular_cf(&x1, steps), &regular_cf(&x2, steps));
    let dec = |v: &BigInt| {
        let s = v.to_string();
        let cut = s.len().saturating_sub(digits as usize);
        format!("{}.{}", if cut == 0 { "0" } else { &s[..cut] }, &s[cut..])
    };
    Ok(CubicDemo {
        digits,
        eigenvector: [dec(&v1[0]), dec(&v1[1]), dec(&v1[2])],
        complete: elements.len() >= steps,
        elements,
        zero_removed,
        ratio_cf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes() {
        assert!(admissible_prefixes(0).is_empty());
        let p1 = admissible_prefixes(1);
        assert!(p1.contains(&vec![1]) && p1.contains(&vec![0, 0, 1]) && p1.contains(&vec![0, 1]));
        assert!(!p1.iter().any(|p| p.windows(2).skip(1).any(|w| w == [0, 0])));
    }

    #[test]
    fn cells_are_dominated_corners() {
        for c in divergence_cells(2).unwrap() {
            let r = persistence_check(&c, 2, 30, 1).unwrap();
            assert!(r.persistent, "{:?}", c.prefix);
        }
    }

    #[test]
    fn cubic_prefix() {
        let d = cubic_demo(60, 22).unwrap();
        // Independent 80-digit evaluation gives 7 as the 22nd element.
        let want = [
            0, 0, 3, 4, 0, 1, 2, 0, 1, 3, 0, 1, 3, 0, 1, 1, 0, 2, 1, 0, 1, 7,
        ];
        let got: Vec<BigInt> = d.elements.iter().take(22).cloned().collect();
        assert_eq!(
            got,
            want.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()
        );
        let ratio: Vec<BigInt> = [3, 4, 1, 2, 1, 3, 1, 3, 1, 1, 2, 1, 1, 7, 1, 1, 35]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(d.ratio_cf[..17], ratio[..]);
        assert!(d.eigenvector[0].starts_with("3.21113935"));
        assert_eq!(d.zero_removed[..14], d.ratio_cf[..14]);
    }
}
