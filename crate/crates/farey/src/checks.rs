//! Reproducible checks of the worked examples and structural properties.
//!
//! Each check returns a pass flag and a short detail line. The acceptance
//! test target and the command-line `check-paper` subcommand share them.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::explore::{cells_to_svg, cubic_demo, divergence_cells, persistence_check, regular_cf};
use crate::frieze::{
    boundary_triangles, continuant, continuant_anti, continuant_columns, continuant_vector,
    m_matrix, ptolemy_constant, ptolemy_scan, Chirality,
};
use crate::lattice::{content, is_empty_simplex, IntVec, DEFAULT_POINT_BUDGET};
use crate::matrix::IntMatrix;
use crate::meester::{meester, to_farey_form, FareyCF, FareyForm};
use crate::prismatic::PrismaticDiagram;
use crate::reconstruct::{nose_stretch, Generator, NoseProgram};
use crate::sails::{duality_check, duality_report, polyhedron_of_word};
use crate::tessellation::{farey_summation_run_int, tessellate};

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    /// Criterion number.
    pub id: u8,
    /// Short title.
    pub title: &'static str,
    /// Whether the criterion holds.
    pub passed: bool,
    /// Details of what was compared.
    pub detail: String,
    /// Wall-clock time in milliseconds.
    pub millis: u128,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:>2} {} ({} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.millis,
            self.detail
        )
    }
}

type Check = (u8, &'static str, fn() -> Result<(bool, String)>);

const CHECKS: &[Check] = &[
    (1, "Meester worked examples", check_meester_examples),
    (2, "large Meester example", check_large_example),
    (3, "nose stretching chain for (5,7,8)", check_nose_chain),
    (4, "geometric run for (5,7,8)", check_geometric_run),
    (
        5,
        "run, Meester and nose stretching agree",
        check_oracle_equivalence,
    ),
    (6, "tessellation properties", check_tessellation),
    (7, "continuants", check_continuants),
    (8, "Ptolemy relation", check_ptolemy),
    (9, "duality dictionary", check_duality),
    (10, "counterexample vectors", check_counterexample),
    (11, "cubic demonstration", check_cubic),
    (12, "two-dimensional reduction", check_two_dimensional),
    (13, "divergence cells", check_divergence),
];

/// Runs one check by number.
pub fn run_check(id: u8) -> Option<CheckOutcome> {
    let &(id, title, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CheckOutcome {
        id,
        title,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    })
}

/// Runs all checks in order.
pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS.iter().filter_map(|c| run_check(c.0)).collect()
}

fn v(xs: &[i64]) -> IntVec {
    IntVec::from_i64s(xs)
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn check_meester_examples() -> Result<(bool, String)> {
    let (t1, d1) = timed(|| meester(&v(&[55, 10, 67]), 1000));
    let cf = t1?.cf;
    let elems_ok = cf.elements() == big(&[0, 5, 0, 2, 0, 1, 2, 2]).as_slice();
    let drops: Vec<(usize, usize)> = cf.drops().iter().map(|d| (d.step, d.coord)).collect();
    let drops_ok = drops == vec![(4, 2), (8, 3)];
    let text_ok = cf.to_string() == "[0;5:0:2 |_2 0:1:2:2]";
    let (t2, d2) = timed(|| meester(&v(&[5, 7, 8]), 1000));
    let cf2 = t2?.cf;
    let m_ok = cf2.to_string() == "[1;1:2 |_2 1]";
    let f_ok = to_farey_form(&cf2)?.to_string() == "[1;1:2:0:0 | 1]";
    let fast = d1 < Duration::from_millis(1) && d2 < Duration::from_millis(1);
    Ok((
        elems_ok && drops_ok && text_ok && m_ok && f_ok && fast,
        format!(
            "{cf} drops {drops:?}; {cf2} = {}; {:?} / {:?}",
            to_farey_form(&cf2)?,
            d1,
            d2
        ),
    ))
}

fn check_large_example() -> Result<(bool, String)> {
    let x: IntVec = "(1656812331613081,18353000512178816,19770900109601816)".parse()?;
    let (t, d) = timed(|| meester(&x, 100_000));
    let cf = t?.cf;
    let form = to_farey_form(&cf)?;
    let want = "[11;12:13:14:15:16:17 | 100:200:300:400]";
    let ok = (form.to_string() == want || cf.to_string() == want) && d < Duration::from_millis(10);
    Ok((
        ok,
        format!("computed {cf} = {form}, expected {want}; {d:?}"),
    ))
}

fn check_nose_chain() -> Result<(bool, String)> {
    let cf = FareyCF::parse("[1;1:2 |_2 1]", 3)?;
    let chain = nose_stretch(&cf)?;
    let expected: [&[&[i64]]; 7] = [
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
        &[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]],
        &[&[1, 1, 0], &[1, 2, 0], &[1, 2, 1]],
        &[&[1, 1, 4], &[1, 2, 6], &[1, 2, 7]],
        &[&[1, 0, 4], &[1, 0, 6], &[1, 0, 7]],
        &[&[5, 0, 4], &[7, 0, 6], &[8, 0, 7]],
        &[&[5, 0, 0], &[7, 0, 0], &[8, 0, 0]],
    ];
    let same = chain.states.len() == 7
        && chain
            .states
            .iter()
            .zip(expected)
            .all(|(s, e)| s.matrix() == IntMatrix::from_i64_rows(e));
    let ok = same && chain.pennant == Some(v(&[5, 7, 8]));
    Ok((
        ok,
        format!(
            "{} states, pennant {:?}",
            chain.states.len(),
            chain.pennant.map(|p| p.to_string())
        ),
    ))
}

fn check_geometric_run() -> Result<(bool, String)> {
    let run = farey_summation_run_int(&v(&[5, 7, 8]), &BigInt::from(100))?;
    let s = run.simplices(100)?;
    let apexes: Vec<IntVec> = s.steps.iter().map(|st| st.apex.clone()).collect();
    let want = vec![
        v(&[1, 1, 1]),
        v(&[1, 2, 2]),
        v(&[2, 3, 4]),
        v(&[4, 6, 7]),
        v(&[5, 7, 8]),
    ];
    let nest_ok = s.yards.len() == 5 && s.yards[4].kind == crate::tessellation::SimplexKind::Nest;
    let ok = apexes == want
        && s.principal.get(3) == Some(&false)
        && s.principal.get(4) == Some(&true)
        && nest_ok;
    let text: Vec<String> = apexes.iter().map(|a| a.to_string()).collect();
    Ok((
        ok,
        format!("apexes {}, principal {:?}", text.join(" "), s.principal),
    ))
}

fn random_primitive(rng: &mut ChaCha8Rng, max: i64) -> Result<IntVec> {
    loop {
        let x = v(&[
            rng.gen_range(1..=max),
            rng.gen_range(1..=max),
            rng.gen_range(1..=max),
        ]);
        if content(&x)?.is_one() {
            return Ok(x);
        }
    }
}

fn check_oracle_equivalence() -> Result<(bool, String)> {
    use rayon::prelude::*;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let vectors: Vec<IntVec> = (0..1000)
        .map(|_| random_primitive(&mut rng, 1_000_000))
        .collect::<Result<_>>()?;
    let start = Instant::now();
    let failures: usize = vectors
        .par_iter()
        .map(|x| -> Result<usize> {
            let cf = meester(x, 10_000_000)?.cf;
            let run = farey_summation_run_int(x, &BigInt::from(u64::MAX))?;
            let ok = run.farey_form()? == to_farey_form(&cf)?
                && nose_stretch(&cf)?.pennant.as_ref() == Some(x)
                && run.pyramid_count() == cf.element_sum();
            Ok(usize::from(!ok))
        })
        .sum::<Result<usize>>()?;
    let elapsed = start.elapsed();
    Ok((
        failures == 0 && elapsed < Duration::from_secs(60),
        format!("1000 vectors, {failures} failures, {elapsed:?}"),
    ))
}

fn check_tessellation() -> Result<(bool, String)> {
    let mut details = Vec::new();
    let mut ok = true;
    for depth in 0..=5 {
        let r = tessellate(3, depth)?.check_properties()?;
        ok &= r.is_clean();
        details.push(format!(
            "d{depth}:{}{}",
            r.maximal_checked,
            if r.is_clean() { "" } else { "!" }
        ));
    }
    Ok((
        ok,
        format!("maximal simplices checked {}", details.join(" ")),
    ))
}

/// Polynomials over the integers in variables `x_1, x_2, ...`; monomials are sorted variable lists.
type Poly = BTreeMap<Vec<u8>, BigInt>;

fn p_const(c: i64) -> Poly {
    let mut p = Poly::new();
    if c != 0 {
        p.insert(vec![], BigInt::from(c));
    }
    p
}

fn p_var(i: u8) -> Poly {
    let mut p = Poly::new();
    p.insert(vec![i], BigInt::one());
    p
}

fn p_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(m.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            out.remove(m);
        }
    }
    out
}

fn p_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            m.extend(mb);
            m.sort_unstable();
            let e = out.entry(m).or_insert_with(BigInt::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Symbolic forward continuant in the variables `vars`.
fn sym_forward(vars: &[u8]) -> Poly {
    let n = vars.len();
    let mut k = vec![p_const(1)];
    if n >= 1 {
        k.push(p_var(vars[0]));
    }
    if n >= 2 {
        k.push(p_mul(&p_add(&p_var(vars[0]), &p_const(1)), &p_var(vars[1])));
    }
    for i in 3..=n {
        let next = p_add(
            &p_mul(&p_var(vars[i - 1]), &p_add(&k[i - 1], &k[i - 2])),
            &k[i - 3],
        );
        k.push(next);
    }
    k.swap_remove(n)
}

/// Symbolic continuant by the recursion on the first arguments.
fn sym_anti(vars: &[u8]) -> Poly {
    if vars.len() <= 2 {
        return sym_forward(vars);
    }
    let a = p_mul(&p_var(vars[0]), &sym_anti(&vars[1..]));
    let b = p_mul(&p_var(vars[1]), &sym_anti(&vars[2..]));
    p_add(&p_add(&a, &b), &sym_anti(&vars[3..]))
}

fn p_eval(p: &Poly, xs: &[BigInt]) -> BigInt {
    p.iter()
        .map(|(m, c)| m.iter().fold(c.clone(), |acc, &i| acc * &xs[i as usize]))
        .sum()
}

fn check_continuants() -> Result<(bool, String)> {
    let mut ok = continuant(&big(&[2, 3, 4])) == BigInt::from(45)
        && continuant(&big(&[15, 2, 4, 32, 54, 7])) == BigInt::from(2_800_350)
        && continuant(&[]) == BigInt::one();
    // Identity of the two recursions as polynomials, which covers every argument list.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 0..=12u8 {
        let vars: Vec<u8> = (0..n).collect();
        let f = sym_forward(&vars);
        ok &= f == sym_anti(&vars);
        for _ in 0..20 {
            let xs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(0..=9))).collect();
            ok &= p_eval(&f, &xs) == continuant(&xs) && continuant(&xs) == continuant_anti(&xs);
        }
    }
    // Literal exhaustive comparison for short lists.
    let mut exhaustive = 0usize;
    for n in 0..=5u32 {
        for code in 0..10usize.pow(n) {
            let xs: Vec<BigInt> = (0..n)
                .map(|i| BigInt::from(code / 10usize.pow(i) % 10))
                .collect();
            ok &= continuant(&xs) == continuant_anti(&xs);
            exhaustive += 1;
        }
    }
    // M_n has columns (v_n, v_{n-1}, v_{n-2}).
    for _ in 0..500 {
        let n = rng.gen_range(1..=8);
        let xs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(0..=9))).collect();
        let m = m_matrix(&xs);
        let cols = continuant_columns(&xs);
        ok &= (0..3).all(|j| m.column(j) == cols[j]);
    }
    // Extended forms give the same vector; reversed, it is the pennant of [a_1;...:a_n | ].
    let mut pennants = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let mut xs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(1..=6))).collect();
        xs[n - 1] += 1;
        let vn = continuant_vector(&xs);
        let mut e1 = xs.clone();
        e1[n - 1] -= 1;
        e1.push(BigInt::one());
        let mut e2 = xs.clone();
        e2[n - 1] -= 1;
        e2.extend([BigInt::zero(), BigInt::one()]);
        ok &= continuant_vector(&e1) == vn && continuant_vector(&e2) == vn;
        let f = FareyForm {
            a: xs.clone(),
            b: vec![],
            split: true,
            terminated: true,
        };
        let p = NoseProgram::from_farey_form(&f).run()?.pennant;
        let reversed = IntVec::new(vn.coords().iter().rev().cloned().collect());
        ok &= p.as_ref() == Some(&reversed);
        pennants += 1;
    }
    Ok((ok, format!("polynomial identity n<=12, {exhaustive} exhaustive lists, 500 matrices, {pennants} extended forms")))
}

fn check_ptolemy() -> Result<(bool, String)> {
    let d = PrismaticDiagram::from_exponents(3, &[3, 1, 2, 1, 2, 3, 3, 1])?;
    let tris = boundary_triangles(&d)?;
    let find = |seg, pos, ch| {
        tris.iter()
            .find(|t| t.segment == seg && t.position == pos && t.chirality == ch)
    };
    let (Some(vt), Some(wt)) = (find(2, 1, Chirality::Right), find(7, 2, Chirality::Left)) else {
        return Ok((false, "example triangles not found".into()));
    };
    let p = ptolemy_constant(&d, vt, wt)?;
    let want = IntMatrix::from_i64_rows(&[&[218, 21, 112], &[105, 10, 54], &[41, 4, 21]]);
    let mut ok = p.matrix == want && p.det.is_one();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut pairs, mut bad) = (0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let exps: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let scan = ptolemy_scan(&PrismaticDiagram::from_exponents(3, &exps)?)?;
        pairs += scan.pairs;
        bad += scan.violations.len();
    }
    ok &= bad == 0 && pairs > 0;
    Ok((
        ok,
        format!(
            "example det {}, {pairs} random pairs, {bad} violations",
            p.det
        ),
    ))
}

fn table_words(a: i64, b: i64, x: i64, y: i64) -> Vec<Vec<(Generator, BigInt)>> {
    use Generator::*;
    let w = |f: &[(Generator, i64)]| {
        f.iter()
            .map(|&(g, t)| (g, BigInt::from(t)))
            .collect::<Vec<_>>()
    };
    vec![
        w(&[(A(1), a), (A(3), b)]),
        w(&[(B(1, 3), a), (B(3, 1), b)]),
        w(&[(A(1), a), (B(1, 3), b)]),
        w(&[(A(1), a), (B(3, 1), b)]),
        w(&[(A(1), a), (B(1, 2), b)]),
        w(&[(A(1), a), (A(2), x), (A(1), b)]),
        w(&[(A(1), a), (A(2), x), (A(3), b)]),
        w(&[(B(1, 2), a), (B(2, 1), x), (B(1, 2), b)]),
        w(&[(A(1), a), (A(2), x), (B(1, 2), b)]),
        w(&[(A(1), a), (A(2), x), (B(3, 2), b)]),
        w(&[(A(1), a), (B(2, 1), x), (B(1, 2), b)]),
        w(&[(A(1), a), (B(2, 3), x), (B(3, 2), b)]),
        w(&[(A(1), a), (A(2), x), (B(2, 1), y), (B(1, 2), b)]),
        w(&[(A(1), a), (A(2), x), (B(2, 3), y), (B(3, 2), b)]),
        w(&[(A(1), a), (A(2), x), (B(1, 3), b)]),
        w(&[(A(1), a), (A(2), x), (B(3, 1), b)]),
        w(&[(A(1), a), (B(3, 2), x), (B(2, 3), b)]),
    ]
}

fn check_duality() -> Result<(bool, String)> {
    let mut rows = std::collections::BTreeSet::new();
    let (mut checked, mut bad) = (0, 0);
    for a in 1..=3 {
        for b in 1..=3 {
            for x in 1..=3 {
                for y in 1..=3 {
                    for word in table_words(a, b, x, y) {
                        let out = duality_check(&word)?;
                        rows.insert(out.table.row);
                        checked += 1;
                        if !out.holds() {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut edges, mut dual_bad) = (0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(3..=9);
        let mut word: Vec<(Generator, BigInt)> = (0..n)
            .map(|i| (Generator::A(i % 3 + 1), BigInt::from(rng.gen_range(1..=4))))
            .collect();
        if rng.gen_bool(0.5) {
            let (i, j) = (n % 3 + 1, (n + 1) % 3 + 1);
            for t in 0..rng.gen_range(1..4) {
                let g = if t % 2 == 0 {
                    Generator::B(i, j)
                } else {
                    Generator::B(j, i)
                };
                word.push((g, BigInt::from(rng.gen_range(1..=4))));
            }
        }
        let poly = polyhedron_of_word(&word)?;
        for j in 1..=3 {
            let r = duality_report(&poly, j)?;
            edges += r.checked;
            dual_bad += r.failures.len();
        }
    }
    let ok = bad == 0 && rows.len() == 9 && dual_bad == 0 && edges > 0;
    Ok((ok, format!("{checked} dictionary words over {} rows, {bad} mismatches; duality on {edges} edges, {dual_bad} failures", rows.len())))
}

fn check_counterexample() -> Result<(bool, String)> {
    let c1 = meester(&v(&[6, 14, 15]), 1000)?.cf;
    let c2 = meester(&v(&[16, 39, 42]), 1000)?.cf;
    let ok1 = c1.to_string() == "[2;1:2 |_2 0:0:2]";
    let ok2 = c2.to_string() == "[2;1:2:0:3 |_{1,3}]";
    let (v1, v2, v3) = (v(&[6, 14, 15]), v(&[5, 13, 14]), v(&[5, 12, 13]));
    let w = &(&v1 + &v2) + &v3;
    let empty = is_empty_simplex(
        &[w.clone(), v1.clone(), v2.clone(), v3.clone()],
        DEFAULT_POINT_BUDGET,
    )?;
    let mut base = vec![v1, v2, v3];
    base.sort();
    let run = farey_summation_run_int(&w, &BigInt::from(10_000))?.simplices(10_000)?;
    let base_is_yard = run.yards.iter().any(|y| y.sorted_vertices() == base);
    let ok = ok1 && ok2 && empty && !base_is_yard && w == v(&[16, 39, 42]);
    Ok((
        ok,
        format!(
            "(6,14,15) -> {c1} (expected [2;1:2 |_2 0:0:2]); (16,39,42) -> {c2}; tetrahedron empty: {empty}; base is a yard: {base_is_yard}"
        ),
    ))
}

fn check_cubic() -> Result<(bool, String)> {
    let d = cubic_demo(60, 22)?;
    let want = big(&[
        0, 0, 3, 4, 0, 1, 2, 0, 1, 3, 0, 1, 3, 0, 1, 1, 0, 2, 1, 0, 1, 19,
    ]);
    let ratio = big(&[3, 4, 1, 2, 1, 3, 1, 3, 1, 1, 2, 1, 1, 19]);
    let got: Vec<BigInt> = d.elements.iter().take(22).cloned().collect();
    let prefix_ok = got == want;
    let removed_ok =
        d.zero_removed.len() >= ratio.len() && d.zero_removed[..ratio.len()] == ratio[..];
    let show = |xs: &[BigInt]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(":")
    };
    Ok((
        prefix_ok && removed_ok,
        format!(
            "approximation to 60 digits; elements {}; zero-removed {}; ratio cf {}",
            show(&got),
            show(&d.zero_removed[..d.zero_removed.len().min(14)]),
            show(&d.ratio_cf[..d.ratio_cf.len().min(14)])
        ),
    ))
}

/// The regular continued fraction with its last term split as `[..., a - 1, 1]`.
fn split_last(cf: &[BigInt]) -> Vec<BigInt> {
    let mut out = cf.to_vec();
    if let Some(last) = out.last_mut() {
        *last -= 1;
        out.push(BigInt::one());
    }
    out
}

fn check_two_dimensional() -> Result<(bool, String)> {
    let mut pairs = 0;
    let mut bad = Vec::new();
    for p in 1..=200i64 {
        for q in 1..=200i64 {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            pairs += 1;
            let cf = meester(&v(&[p, q]), 10_000)?.cf;
            let euclid = regular_cf(&BigRational::new(BigInt::from(q), BigInt::from(p)), 10_000);
            let e = cf.elements();
            if e != euclid.as_slice() && e != split_last(&euclid).as_slice() {
                bad.push((p, q));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{pairs} coprime pairs, mismatches {:?}",
            &bad[..bad.len().min(5)]
        ),
    ))
}

fn check_divergence() -> Result<(bool, String)> {
    let mut ok = true;
    let mut counts = Vec::new();
    let mut min_steps = usize::MAX;
    for bound in [3, 4] {
        let cells = divergence_cells(bound)?;
        let svg = cells_to_svg(&cells, 600.0);
        ok &= !cells.is_empty() && svg.matches("<polygon").count() == cells.len() + 1;
        counts.push(cells.len());
        for (i, c) in cells.iter().enumerate() {
            let r = persistence_check(c, 2, 60, i as u64)?;
            ok &= r.persistent;
            min_steps = min_steps.min(r.min_steps_after_entry);
        }
    }
    ok &= counts == vec![DIVERGENCE_CELLS_3, DIVERGENCE_CELLS_4] && min_steps >= 50;
    Ok((
        ok,
        format!("cells for bounds 3 and 4: {counts:?}; at least {min_steps} steps after entry"),
    ))
}

/// Number of removed cells with element sum at most 3.
pub const DIVERGENCE_CELLS_3: usize = 39;
/// Number of removed cells with element sum at most 4.
pub const DIVERGENCE_CELLS_4: usize = 120;
