//! The Meester subtractive algorithm and Farey summation continued fractions.
//!
//! A run of the algorithm produces a [`FareyCF`]: the element sequence
//! together with the steps at which coordinates vanish. The same data can be
//! tabulated in the two-stage Farey form ([`FareyForm`]) for three
//! dimensional inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{FareyError, Result};
use crate::lattice::{IntVec, RatVec};

/// A coordinate reaching zero after a given number of emitted elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Drop {
    /// Number of elements emitted before the drop; zero for coordinates that vanish initially.
    pub step: usize,
    /// Index of the vanishing coordinate, starting at one.
    pub coord: usize,
}

/// A Farey summation continued fraction in Meester form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FareyCF {
    dim: usize,
    elements: Vec<BigInt>,
    drops: Vec<Drop>,
    terminated: bool,
}

impl FareyCF {
    /// Builds and validates a continued fraction.
    ///
    /// Drops must be sorted by step, name distinct coordinates in `1..=dim`,
    /// and a terminated fraction must carry exactly `dim - 1` drops.
    pub fn new(
        dim: usize,
        elements: Vec<BigInt>,
        drops: Vec<Drop>,
        terminated: bool,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(FareyError::UnsupportedDimension(dim));
        }
        if elements.iter().any(Signed::is_negative) {
            return Err(FareyError::MalformedCf("negative element".into()));
        }
        let mut seen = vec![false; dim + 1];
        for (i, d) in drops.iter().enumerate() {
            if d.coord == 0 || d.coord > dim {
                return Err(FareyError::MalformedCf(format!(
                    "drop coordinate {} outside 1..={dim}",
                    d.coord
                )));
            }
            if seen[d.coord] {
                return Err(FareyError::MalformedCf(format!(
                    "coordinate {} dropped twice",
                    d.coord
                )));
            }
            seen[d.coord] = true;
            if d.step > elements.len() {
                return Err(FareyError::MalformedCf(format!(
                    "drop after step {} beyond the last element",
                    d.step
                )));
            }
            if i > 0 && drops[i - 1].step > d.step {
                return Err(FareyError::MalformedCf(
                    "drops are not ordered by step".into(),
                ));
            }
        }
        if drops.len() >= dim {
            return Err(FareyError::MalformedCf("every coordinate dropped".into()));
        }
        if terminated && drops.len() != dim - 1 {
            return Err(FareyError::MalformedCf(format!(
                "a finite cf needs {} drops, found {}",
                dim - 1,
                drops.len()
            )));
        }
        let cf = FareyCF {
            dim,
            elements,
            drops,
            terminated,
        };
        let slots = cf.active_slots();
        for d in &cf.drops {
            if d.step > 0 && slots[d.step - 1] == d.coord {
                return Err(FareyError::MalformedCf(format!(
                    "coordinate {} dropped right after being active",
                    d.coord
                )));
            }
        }
        if terminated
            && !cf.drops.is_empty()
            && cf.drops[cf.drops.len() - 1].step != cf.elements.len()
        {
            return Err(FareyError::MalformedCf(
                "the last drop must happen at the final step".into(),
            ));
        }
        Ok(cf)
    }

    /// Builds a finite continued fraction, inferring the drops at the final step.
    ///
    /// All coordinates still alive after `drops`, except the last active one,
    /// are dropped after the last element. Without any element the first alive
    /// coordinate is kept.
    pub fn finite_with_inferred_end(
        dim: usize,
        elements: Vec<BigInt>,
        mut drops: Vec<Drop>,
    ) -> Result<Self> {
        let probe = FareyCF {
            dim,
            elements: elements.clone(),
            drops: drops.clone(),
            terminated: false,
        };
        let alive = probe.alive_after(elements.len());
        let keep = match probe.active_slots().last() {
            Some(&s) => s,
            None => *alive
                .first()
                .ok_or_else(|| FareyError::MalformedCf("no coordinate left".into()))?,
        };
        if !alive.contains(&keep) {
            return Err(FareyError::MalformedCf(format!(
                "final active coordinate {keep} is already dropped"
            )));
        }
        for c in alive {
            if c != keep {
                drops.push(Drop {
                    step: elements.len(),
                    coord: c,
                });
            }
        }
        FareyCF::new(dim, elements, drops, true)
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The elements `a_1, a_2, ...`.
    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }

    /// Drop events in order.
    pub fn drops(&self) -> &[Drop] {
        &self.drops
    }

    /// True when the algorithm reached a single non-zero coordinate.
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// True when there are no elements.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sum of all elements, the number of Farey pyramids of the run.
    pub fn element_sum(&self) -> BigInt {
        self.elements.iter().sum()
    }

    /// Coordinates (one based) not dropped after `step` elements.
    pub fn alive_after(&self, step: usize) -> Vec<usize> {
        (1..=self.dim)
            .filter(|&c| !self.drops.iter().any(|d| d.coord == c && d.step <= step))
            .collect()
    }

    /// The coordinate acted on by each element.
    ///
    /// The active coordinate cycles through the coordinates that are still
    /// alive, starting from the first one.
    pub fn active_slots(&self) -> Vec<usize> {
        let n = self.dim;
        let mut alive = vec![true; n + 1];
        for d in self.drops.iter().filter(|d| d.step == 0) {
            alive[d.coord] = false;
        }
        let mut prev = 0;
        let mut out = Vec::with_capacity(self.elements.len());
        for i in 1..=self.elements.len() {
            let mut s = prev;
            let mut found = 0;
            for _ in 0..n {
                s = s % n + 1;
                if alive[s] {
                    found = s;
                    break;
                }
            }
            if found == 0 {
                break;
            }
            out.push(found);
            prev = found;
            for d in self.drops.iter().filter(|d| d.step == i) {
                alive[d.coord] = false;
            }
        }
        out
    }

    /// The finite continued fraction made of the first `i` elements.
    pub fn truncated(&self, i: usize) -> Result<Self> {
        if i > self.len() {
            return Err(FareyError::OutOfRange {
                index: i,
                max: self.len(),
            });
        }
        let drops: Vec<Drop> = self
            .drops
            .iter()
            .copied()
            .filter(|d| d.step < i || (d.step == 0 && i == 0))
            .collect();
        if i == self.len() && self.terminated {
            return Ok(self.clone());
        }
        FareyCF::finite_with_inferred_end(self.dim, self.elements[..i].to_vec(), drops)
    }

    /// Parses Meester text such as `[1;1:2 |_2 1]` for the given dimension.
    ///
    /// Drops at the final step may be omitted; they are then inferred. A
    /// trailing `...` marks an unterminated expansion.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let toks = tokenize(text)?;
        let mut elements = Vec::new();
        let mut drops = Vec::new();
        let mut open = false;
        for t in toks {
            match t {
                Token::Num(x) => elements.push(x),
                Token::Bar(None) => {
                    return Err(FareyError::Parse(
                        "plain `|` belongs to the Farey form".into(),
                    ));
                }
                Token::Bar(Some(cs)) => {
                    for c in cs {
                        drops.push(Drop {
                            step: elements.len(),
                            coord: c,
                        });
                    }
                }
                Token::Ellipsis => open = true,
            }
        }
        if open {
            FareyCF::new(dim, elements, drops, false)
        } else if drops.len() == dim - 1 {
            FareyCF::new(dim, elements, drops, true)
        } else {
            FareyCF::finite_with_inferred_end(dim, elements, drops)
        }
    }

    /// Number of coordinates alive before the final element.
    fn alive_before_last(&self) -> usize {
        self.alive_after(self.len().saturating_sub(1)).len()
    }
}

impl fmt::Display for FareyCF {
    /// Meester notation: drops shown as `|_j` or `|_{i,j}`.
    ///
    /// A single drop at the final step of a finite fraction is not shown.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.len();
        let final_drops = self.drops.iter().filter(|d| d.step == len).count();
        let shown: Vec<&Drop> = self
            .drops
            .iter()
            .filter(|d| !(self.terminated && d.step == len && final_drops == 1))
            .collect();
        // Split elements into segments separated by markers.
        let mut steps: Vec<usize> = shown.iter().map(|d| d.step).collect();
        steps.dedup();
        let mut segments: Vec<&[BigInt]> = Vec::new();
        let mut start = 0;
        for &s in &steps {
            segments.push(&self.elements[start..s]);
            start = s;
        }
        segments.push(&self.elements[start..]);
        let mut out = String::from("[");
        for (k, seg) in segments.iter().enumerate() {
            if k > 0 {
                let coords: Vec<String> = shown
                    .iter()
                    .filter(|d| d.step == steps[k - 1])
                    .map(|d| d.coord.to_string())
                    .collect();
                if !segments[k - 1].is_empty() || (k > 1) {
                    out.push(' ');
                }
                if coords.len() == 1 {
                    out.push_str(&format!("|_{}", coords[0]));
                } else {
                    out.push_str(&format!("|_{{{}}}", coords.join(",")));
                }
                if !seg.is_empty() {
                    out.push(' ');
                }
            }
            let parts: Vec<String> = seg.iter().map(|x| x.to_string()).collect();
            if k == 0 && parts.len() >= 2 {
                out.push_str(&format!("{};{}", parts[0], parts[1..].join(":")));
            } else {
                out.push_str(&parts.join(":"));
            }
        }
        if !self.terminated {
            if len > 0 && segments.last().is_some_and(|s| !s.is_empty()) {
                out.push(':');
            }
            out.push_str("...");
        }
        out.push(']');
        f.write_str(&out)
    }
}

impl Serialize for FareyCF {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FareyCF", 5)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field(
            "elements",
            &self
                .elements
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>(),
        )?;
        st.serialize_field("drops", &self.drops)?;
        st.serialize_field("terminated", &self.terminated)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    Bar(Option<Vec<usize>>),
    Ellipsis,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| FareyError::Parse(format!("expected brackets around {t:?}")))?;
    let chars: Vec<char> = inner.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    // Separators are only legal between numbers.
    let mut expect_number_after_sep = false;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if matches!(toks.last(), Some(Token::Num(_))) && !expect_number_after_sep {
                return Err(FareyError::Parse("two numbers without a separator".into()));
            }
            toks.push(Token::Num(s.parse().expect("digits")));
            expect_number_after_sep = false;
        } else if c == ';' || c == ':' {
            if !matches!(toks.last(), Some(Token::Num(_))) {
                return Err(FareyError::Parse(format!(
                    "separator {c:?} without a preceding element"
                )));
            }
            expect_number_after_sep = true;
            i += 1;
            // A separator may be followed directly by an ellipsis.
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == '\u{2026}') {
                expect_number_after_sep = false;
            }
        } else if c == '|' {
            if expect_number_after_sep {
                return Err(FareyError::Parse("separator before `|`".into()));
            }
            i += 1;
            if i < chars.len() && chars[i] == '_' {
                i += 1;
                let mut coords = Vec::new();
                if i < chars.len() && chars[i] == '{' {
                    let close = chars[i..]
                        .iter()
                        .position(|&ch| ch == '}')
                        .ok_or_else(|| FareyError::Parse("unclosed `{`".into()))?;
                    let body: String = chars[i + 1..i + close].iter().collect();
                    for p in body.split(',') {
                        coords.push(parse_index(p)?);
                    }
                    i += close + 1;
                } else {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    coords.push(parse_index(&s)?);
                }
                toks.push(Token::Bar(Some(coords)));
            } else {
                toks.push(Token::Bar(None));
            }
        } else if c == '.' {
            if chars[i..].iter().take(3).collect::<String>() != "..." {
                return Err(FareyError::Parse("stray `.`".into()));
            }
            i += 3;
            toks.push(Token::Ellipsis);
            expect_number_after_sep = false;
        } else if c == '\u{2026}' {
            i += 1;
            toks.push(Token::Ellipsis);
            expect_number_after_sep = false;
        } else {
            return Err(FareyError::Parse(format!("unexpected character {c:?}")));
        }
    }
    if expect_number_after_sep {
        return Err(FareyError::Parse("trailing separator".into()));
    }
    if let Some(p) = toks.iter().position(|t| *t == Token::Ellipsis) {
        if p + 1 != toks.len() {
            return Err(FareyError::Parse("`...` must come last".into()));
        }
    }
    Ok(toks)
}

fn parse_index(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|e| FareyError::Parse(format!("drop index {s:?}: {e}")))
}

/// A complete run of the Meester algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeesterTrace {
    /// Remainders after each emitted element, scaled to integers; entry 0 is the input.
    pub states: Vec<IntVec>,
    /// Common denominator the input was multiplied by.
    #[serde(serialize_with = "crate::lattice::ser_bigint")]
    pub scale: BigInt,
    /// Coordinate acted on by each element.
    pub actives: Vec<usize>,
    /// The resulting continued fraction.
    pub cf: FareyCF,
}

impl MeesterTrace {
    /// Remainder after `i` elements, in the units of the input.
    pub fn remainder(&self, i: usize) -> Result<RatVec> {
        let s = self.states.get(i).ok_or(FareyError::OutOfRange {
            index: i,
            max: self.states.len() - 1,
        })?;
        Ok(RatVec::new(
            s.iter()
                .map(|x| BigRational::new(x.clone(), self.scale.clone()))
                .collect(),
        ))
    }

    /// The last remainder; for a finished run on integers its single non-zero entry is the gcd.
    pub fn final_state(&self) -> &IntVec {
        self.states.last().expect("at least the input state")
    }
}

/// Runs the Meester algorithm on a non-negative integer vector.
///
/// At most `max_steps` elements are emitted; a run cut short is returned
/// with an unterminated continued fraction.
pub fn meester(v: &IntVec, max_steps: usize) -> Result<MeesterTrace> {
    meester_scaled(v.clone(), BigInt::one(), max_steps)
}

/// Runs the Meester algorithm on a non-negative rational vector.
///
/// The input is multiplied by the common denominator; the elements do not
/// depend on that scaling.
pub fn meester_rational(v: &RatVec, max_steps: usize) -> Result<MeesterTrace> {
    let (scale, iv) = v.to_scaled_int();
    meester_scaled(iv, scale, max_steps)
}

fn meester_scaled(v: IntVec, scale: BigInt, max_steps: usize) -> Result<MeesterTrace> {
    let n = v.dim();
    if n < 2 {
        return Err(FareyError::UnsupportedDimension(n));
    }
    if let Some(i) = v.iter().position(Signed::is_negative) {
        return Err(FareyError::NegativeCoordinate(i));
    }
    if v.is_zero() {
        return Err(FareyError::ZeroVector);
    }
    let mut c: Vec<BigInt> = v.coords().to_vec();
    let mut drops: Vec<Drop> = (0..n)
        .filter(|&k| c[k].is_zero())
        .map(|k| Drop {
            step: 0,
            coord: k + 1,
        })
        .collect();
    let mut states = vec![v];
    let mut elements = Vec::new();
    let mut actives = Vec::new();
    let mut j = n - 1;
    let alive_count = |c: &[BigInt]| c.iter().filter(|x| !x.is_zero()).count();
    while alive_count(&c) > 1 && elements.len() < max_steps {
        j = (j + 1) % n;
        if c[j].is_zero() {
            continue;
        }
        let a = (0..n)
            .filter(|&k| k != j && !c[k].is_zero())
            .map(|k| c[k].div_floor(&c[j]))
            .min()
            .expect("another non-zero coordinate");
        let sub = &a * &c[j];
        for k in 0..n {
            if k != j && !c[k].is_zero() {
                c[k] -= &sub;
                if c[k].is_zero() {
                    drops.push(Drop {
                        step: elements.len() + 1,
                        coord: k + 1,
                    });
                }
            }
        }
        elements.push(a);
        actives.push(j + 1);
        states.push(IntVec::new(c.clone()));
    }
    let terminated = alive_count(&c) == 1;
    let cf = FareyCF::new(n, elements, drops, terminated)?;
    debug_assert_eq!(cf.active_slots(), actives);
    Ok(MeesterTrace {
        states,
        scale,
        actives,
        cf,
    })
}

/// A three-dimensional continued fraction in the two-stage Farey form `[a_1;...:a_k | b_1:...:b_l]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FareyForm {
    /// Stage-one elements, acting cyclically on coordinates 1, 2, 3.
    pub a: Vec<BigInt>,
    /// Stage-two elements, alternating between the two remaining coordinates.
    pub b: Vec<BigInt>,
    /// True when the `|` separator is present, that is, stage two was reached.
    pub split: bool,
    /// True for a finite continued fraction.
    pub terminated: bool,
}

impl FareyForm {
    /// The coordinate dropped between the stages: the one congruent to `k` modulo 3.
    pub fn dropped_coord(&self) -> usize {
        match self.a.len() % 3 {
            0 => 3,
            r => r,
        }
    }

    /// The two stage-two coordinates `(s, t)` following `k = a.len()` cyclically.
    pub fn stage_two_coords(&self) -> (usize, usize) {
        let k = self.a.len();
        (k % 3 + 1, (k + 1) % 3 + 1)
    }

    /// Sum of all elements.
    pub fn element_sum(&self) -> BigInt {
        self.a.iter().chain(self.b.iter()).sum()
    }

    /// Converts back to Meester form.
    ///
    /// Trailing zeros of stage one are padding; stage two is re-aligned to
    /// the coordinate the Meester algorithm visits first after the drop.
    pub fn to_meester(&self) -> Result<FareyCF> {
        if !self.split {
            let cf = FareyCF {
                dim: 3,
                elements: self.a.clone(),
                drops: vec![],
                terminated: false,
            };
            return if self.terminated {
                FareyCF::finite_with_inferred_end(3, self.a.clone(), vec![])
            } else {
                Ok(cf)
            };
        }
        let k1 = self
            .a
            .iter()
            .rposition(|x| !x.is_zero())
            .map_or(0, |p| p + 1);
        let mut elements: Vec<BigInt> = self.a[..k1].to_vec();
        if self.b.is_empty() {
            if k1 != self.a.len() {
                return Err(FareyError::Inadmissible(
                    "empty second stage after padding zeros".into(),
                ));
            }
            return if self.terminated {
                FareyCF::finite_with_inferred_end(3, elements, vec![])
            } else {
                Err(FareyError::MalformedCf(
                    "unterminated form with empty second stage".into(),
                ))
            };
        }
        let d = self.dropped_coord();
        let last = if k1 == 0 { 0 } else { (k1 - 1) % 3 + 1 };
        if last == d {
            return Err(FareyError::Inadmissible(format!(
                "coordinate {d} dropped right after being active"
            )));
        }
        let drops = vec![Drop { step: k1, coord: d }];
        let (s, t) = self.stage_two_coords();
        // First coordinate the Meester algorithm visits after the drop.
        let mut next = last % 3 + 1;
        if next == d {
            next = next % 3 + 1;
        }
        let mut b = self.b.clone();
        if next == t {
            if b[0].is_zero() && b.len() > 1 {
                b.remove(0);
            } else if !(b.len() == 1 && b[0].is_one()) {
                b.insert(0, BigInt::zero());
            }
        } else {
            debug_assert_eq!(next, s);
        }
        elements.extend(b);
        if self.terminated {
            FareyCF::finite_with_inferred_end(3, elements, drops)
        } else {
            FareyCF::new(3, elements, drops, false)
        }
    }
}

impl fmt::Display for FareyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        let mut out = String::from("[");
        if a.len() >= 2 {
            out.push_str(&format!("{};{}", a[0], a[1..].join(":")));
        } else {
            out.push_str(&a.join(""));
        }
        if self.split {
            if !a.is_empty() {
                out.push(' ');
            }
            out.push('|');
            out.push(' ');
            out.push_str(&b.join(":"));
        }
        if !self.terminated {
            let tail_nonempty = if self.split {
                !b.is_empty()
            } else {
                !a.is_empty()
            };
            if tail_nonempty {
                out.push(':');
            }
            out.push_str("...");
        }
        out.push(']');
        f.write_str(&out)
    }
}

impl FromStr for FareyForm {
    type Err = FareyError;

    /// Parses `[a_1;...:a_k | b_1:...:b_l]`, with an optional trailing `...`.
    fn from_str(text: &str) -> Result<Self> {
        let toks = tokenize(text)?;
        let mut form = FareyForm {
            a: vec![],
            b: vec![],
            split: false,
            terminated: true,
        };
        for t in toks {
            match t {
                Token::Num(x) if form.split => form.b.push(x),
                Token::Num(x) => form.a.push(x),
                Token::Bar(None) if !form.split => form.split = true,
                Token::Bar(None) => {
                    return Err(FareyError::Parse("more than one `|` in Farey form".into()))
                }
                Token::Bar(Some(_)) => {
                    return Err(FareyError::Parse(
                        "`|_j` belongs to the Meester form".into(),
                    ))
                }
                Token::Ellipsis => form.terminated = false,
            }
        }
        Ok(form)
    }
}

impl Serialize for FareyForm {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FareyForm", 5)?;
        st.serialize_field(
            "a",
            &self.a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        )?;
        st.serialize_field(
            "b",
            &self.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        )?;
        st.serialize_field("split", &self.split)?;
        st.serialize_field("terminated", &self.terminated)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// Canonical stage-two sequence: leading `0:0` pairs removed and `0:1` written as `1`.
pub(crate) fn canonical_stage_two(mut b: Vec<BigInt>) -> Vec<BigInt> {
    while b.len() >= 2 && b[0].is_zero() && b[1].is_zero() {
        b.drain(..2);
    }
    if b.len() == 2 && b[0].is_zero() && b[1].is_one() {
        b = vec![BigInt::one()];
    }
    b
}

/// Rewrites a three-dimensional Meester continued fraction in Farey form.
///
/// Stage one ends with the element causing the first drop; zeros are
/// appended until its length is congruent to the dropped coordinate. Stage
/// two starts on the coordinate following the padded stage one, with a
/// leading zero when the Meester algorithm visits the other coordinate first.
pub fn to_farey_form(cf: &FareyCF) -> Result<FareyForm> {
    if cf.dim() != 3 {
        return Err(FareyError::UnsupportedDimension(cf.dim()));
    }
    let Some(first) = cf.drops().first() else {
        return Ok(FareyForm {
            a: cf.elements().to_vec(),
            b: vec![],
            split: false,
            terminated: cf.terminated(),
        });
    };
    let s1 = first.step;
    let mut a: Vec<BigInt> = cf.elements()[..s1].to_vec();
    let simultaneous = cf.drops().len() == 2 && cf.drops()[1].step == s1;
    if simultaneous {
        return Ok(FareyForm {
            a,
            b: vec![],
            split: true,
            terminated: cf.terminated(),
        });
    }
    let d = first.coord;
    while a.len() % 3 != d % 3 {
        a.push(BigInt::zero());
    }
    let k = a.len();
    let (s, t) = (k % 3 + 1, (k + 1) % 3 + 1);
    let slots = cf.active_slots();
    let mut b: Vec<BigInt> = cf.elements()[s1..].to_vec();
    if let Some(&first_slot) = slots.get(s1) {
        if first_slot == t {
            b.insert(0, BigInt::zero());
        } else {
            debug_assert_eq!(first_slot, s);
        }
    }
    let b = if cf.terminated() {
        canonical_stage_two(b)
    } else {
        b
    };
    Ok(FareyForm {
        a,
        b,
        split: true,
        terminated: cf.terminated(),
    })
}

/// Equivalent expansions obtained by rewriting the last element `a_N` as `a_N - 1, 0, ..., 0, 1`.
///
/// The number of inserted zeros ranges over `0..=m-2`, where `m` is the
/// number of coordinates alive at the final step.
pub fn extended_forms(cf: &FareyCF) -> Result<Vec<FareyCF>> {
    if !cf.terminated() {
        return Err(FareyError::NotExtendable(
            "infinite continued fraction".into(),
        ));
    }
    let Some(last) = cf.elements().last() else {
        return Err(FareyError::NotExtendable("no elements".into()));
    };
    if last.is_zero() {
        return Err(FareyError::NotExtendable("last element is zero".into()));
    }
    if cf.len() == 1 && last.is_one() {
        return Err(FareyError::NotExtendable(
            "single element 1 would start with a zero".into(),
        ));
    }
    let n_alive = cf.alive_before_last();
    let len = cf.len();
    let kept: Vec<Drop> = cf
        .drops()
        .iter()
        .copied()
        .filter(|d| d.step < len)
        .collect();
    let mut out = Vec::new();
    for zeros in 0..=n_alive.saturating_sub(2) {
        let mut el = cf.elements()[..len - 1].to_vec();
        el.push(last - 1u32);
        el.extend(std::iter::repeat_n(BigInt::zero(), zeros));
        el.push(BigInt::one());
        out.push(FareyCF::finite_with_inferred_end(
            cf.dim(),
            el,
            kept.clone(),
        )?);
    }
    Ok(out)
}

/// The `i`-th convergent: the pennant of the continued fraction truncated after `i` elements.
pub fn convergent(cf: &FareyCF, i: usize) -> Result<IntVec> {
    let t = cf.truncated(i)?;
    crate::reconstruct::pennant_of_cf(&t)
}

/// Either notation of a continued fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedCf {
    /// Meester notation with indexed drops.
    Meester(FareyCF),
    /// Two-stage Farey notation.
    Farey(FareyForm),
}

impl ParsedCf {
    /// Parses either notation. Text with a plain `|` is read as Farey form,
    /// everything else as Meester form in dimension `dim`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let toks = tokenize(text)?;
        if toks.contains(&Token::Bar(None)) {
            if dim != 3 {
                return Err(FareyError::UnsupportedDimension(dim));
            }
            Ok(ParsedCf::Farey(text.parse()?))
        } else {
            Ok(ParsedCf::Meester(FareyCF::parse(text, dim)?))
        }
    }

    /// Meester form of the parsed fraction.
    pub fn to_meester(&self) -> Result<FareyCF> {
        match self {
            ParsedCf::Meester(cf) => Ok(cf.clone()),
            ParsedCf::Farey(f) => f.to_meester(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64s(x)
    }

    fn els(cf: &FareyCF) -> Vec<i64> {
        cf.elements()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn worked_example_55_10_67() {
        let t = meester(&v(&[55, 10, 67]), 1000).unwrap();
        assert_eq!(els(&t.cf), vec![0, 5, 0, 2, 0, 1, 2, 2]);
        assert_eq!(
            t.cf.drops(),
            &[Drop { step: 4, coord: 2 }, Drop { step: 8, coord: 3 }]
        );
        assert_eq!(t.cf.to_string(), "[0;5:0:2 |_2 0:1:2:2]");
        assert_eq!(t.remainder(6).unwrap(), v(&[5, 0, 2]).to_rat());
        assert_eq!(
            to_farey_form(&t.cf).unwrap().to_string(),
            "[0;5:0:2:0 | 0:1:2:2]"
        );
    }

    #[test]
    fn worked_example_5_7_8() {
        let t = meester(&v(&[5, 7, 8]), 1000).unwrap();
        assert_eq!(t.cf.to_string(), "[1;1:2 |_2 1]");
        assert_eq!(to_farey_form(&t.cf).unwrap().to_string(), "[1;1:2:0:0 | 1]");
        let ext = extended_forms(&t.cf).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].to_string(), "[1;1:2 |_2 0:1]");
    }

    #[test]
    fn basis_vector_has_empty_cf() {
        let t = meester(&v(&[1, 0, 0]), 10).unwrap();
        assert!(t.cf.is_empty());
        assert!(t.cf.terminated());
        assert_eq!(t.cf.to_string(), "[|_{2,3}]");
        assert_eq!(FareyCF::parse("[]", 3).unwrap(), t.cf);
    }

    #[test]
    fn simultaneous_drops_are_shown() {
        let t = meester(&v(&[16, 39, 42]), 100).unwrap();
        assert_eq!(t.cf.to_string(), "[2;1:2:0:3 |_{1,3}]");
        let t = meester(&v(&[1, 1, 1]), 100).unwrap();
        assert_eq!(t.cf.to_string(), "[1 |_{2,3}]");
    }

    #[test]
    fn parse_roundtrip_and_inference() {
        for s in [
            "[1;1:2 |_2 1]",
            "[0;5:0:2 |_2 0:1:2:2]",
            "[2;1:2:0:3 |_{1,3}]",
            "[1 |_{2,3}]",
            "[|_2 1:2:2]",
        ] {
            let cf = FareyCF::parse(s, 3).unwrap();
            assert_eq!(cf.to_string(), s);
        }
        let cf = FareyCF::parse("[1;1:2 |_2 1]", 3).unwrap();
        assert_eq!(cf.drops().last(), Some(&Drop { step: 4, coord: 3 }));
        let open = FareyCF::parse("[0;0:3:4:...]", 3).unwrap();
        assert!(!open.terminated());
        assert_eq!(open.to_string(), "[0;0:3:4:...]");
    }

    #[test]
    fn farey_form_roundtrip() {
        for s in [
            "[1;1:2:0:0 | 1]",
            "[0;5:0:2:0 | 0:1:2:2]",
            "[2;1:2:0:3 | ]",
            "[11;12:13 | 100:200]",
        ] {
            let f: FareyForm = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn farey_to_meester_inverts_tabulation() {
        for x in [
            [5, 7, 8],
            [55, 10, 67],
            [6, 14, 15],
            [16, 39, 42],
            [5, 0, 7],
            [1, 1, 2],
            [0, 5, 7],
        ] {
            let cf = meester(&v(&x), 1000).unwrap().cf;
            let f = to_farey_form(&cf).unwrap();
            let back = f.to_meester().unwrap();
            assert_eq!(to_farey_form(&back).unwrap(), f, "{x:?}");
        }
    }

    #[test]
    fn rejects_negative_input() {
        assert_eq!(
            meester(&v(&[1, -1, 2]), 10).unwrap_err(),
            FareyError::NegativeCoordinate(1)
        );
    }
}
