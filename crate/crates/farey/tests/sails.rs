//! Sails and LLS sequences of Farey polyhedra.

use farey::meester::meester;
use farey::reconstruct::{Generator, NoseProgram};
use farey::sails::{
    duality_report, hidden_element_recovery, lls_sequence, polyhedron_of_word, DEFAULT_UNIT_BUDGET,
};
use farey::IntVec;
use num_bigint::BigInt;
use num_rational::BigRational;

fn long_example() -> farey::reconstruct::FareyPolyhedron {
    let v: IntVec = "(1656812331613081,18353000512178816,19770900109601816)"
        .parse()
        .unwrap();
    let cf = meester(&v, 100_000).unwrap().cf;
    assert_eq!(cf.to_string(), "[11;12:13:14:15:16 |_1 100:200:300:400]");
    NoseProgram::from_cf(&cf)
        .polyhedron(DEFAULT_UNIT_BUDGET)
        .unwrap()
}

fn sines(poly: &farey::reconstruct::FareyPolyhedron, j: usize) -> Vec<Option<BigRational>> {
    lls_sequence(poly, j)
        .unwrap()
        .edges
        .iter()
        .map(|e| e.sine.clone())
        .collect()
}

fn int(x: i64) -> Option<BigRational> {
    Some(BigRational::from_integer(BigInt::from(x)))
}

#[test]
fn long_example_sail_opposite_mast_three() {
    let poly = long_example();
    let s = sines(&poly, 3);
    assert_eq!(s, vec![int(0), int(26), int(0), int(31), int(200)]);
    let edges = lls_sequence(&poly, 3).unwrap().edges;
    assert_eq!(edges[3].dims, (2, 1));
    assert!(edges[3].doubled);
}

#[test]
fn long_example_duality_holds_on_every_sail() {
    let poly = long_example();
    for j in 1..=3 {
        let r = duality_report(&poly, j).unwrap();
        assert!(r.checked > 0 && r.failures.is_empty(), "sail {j}: {r:?}");
    }
}

#[test]
fn hidden_elements_are_recovered() {
    use Generator::*;
    for a in 1..=3i64 {
        for x in 1..=3i64 {
            for y in 1..=3i64 {
                for b in 1..=3i64 {
                    let word: Vec<(Generator, BigInt)> =
                        [(A(1), a), (A(2), x), (B(2, 3), y), (B(3, 2), b)]
                            .iter()
                            .map(|&(g, t)| (g, BigInt::from(t)))
                            .collect();
                    let r = hidden_element_recovery(&word).unwrap();
                    assert_eq!(
                        (r.x, r.y),
                        (BigInt::from(x), BigInt::from(y)),
                        "{a} {x} {y} {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn words_outside_the_shape_are_rejected() {
    use Generator::*;
    let word = vec![(A(1), BigInt::from(1)), (A(3), BigInt::from(2))];
    assert!(hidden_element_recovery(&word).is_err());
    assert!(polyhedron_of_word(&word).is_ok());
}
