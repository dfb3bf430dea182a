//! Property tests of the core invariants.

use farey::explore::regular_cf;
use farey::frieze::{
    column_transform, continuant, continuant_anti, m_matrix, row_transform,
    transformed_continuant_matrix,
};
use farey::meester::{meester, to_farey_form};
use farey::prismatic::PrismaticDiagram;
use farey::reconstruct::{pennant_of_cf, NoseProgram};
use farey::{FareyCF, IntVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn bigs(xs: &[u64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn continuant_recursions_agree(xs in prop::collection::vec(0u64..50, 0..12)) {
        prop_assert_eq!(continuant(&bigs(&xs)), continuant_anti(&bigs(&xs)));
    }

    #[test]
    fn continuant_matrix_is_unimodular(xs in prop::collection::vec(0u64..20, 1..10)) {
        prop_assert!(m_matrix(&bigs(&xs)).det().abs().is_one());
    }

    #[test]
    fn transforms_multiply_determinants(xs in prop::collection::vec(1u64..9, 2..8)) {
        let xs = bigs(&xs);
        let t = transformed_continuant_matrix(&xs).unwrap();
        prop_assert_eq!(t.det(), row_transform(&xs[0]).det() * m_matrix(&xs).det() * column_transform().det());
    }

    #[test]
    fn meester_then_nose_stretching_returns_the_vector(a in 1i64..1_000_000, b in 1i64..1_000_000, c in 1i64..1_000_000) {
        let v = IntVec::from_i64s(&[a, b, c]).primitive().unwrap();
        let cf = meester(&v, 10_000_000).unwrap().cf;
        prop_assert_eq!(pennant_of_cf(&cf).unwrap(), v.clone());
        let form = to_farey_form(&cf).unwrap();
        prop_assert_eq!(NoseProgram::from_farey_form(&form).run().unwrap().pennant, Some(v));
    }

    #[test]
    fn meester_text_round_trips(a in 1i64..100_000, b in 1i64..100_000, c in 1i64..100_000) {
        let cf = meester(&IntVec::from_i64s(&[a, b, c]), 1_000_000).unwrap().cf;
        prop_assert_eq!(FareyCF::parse(&cf.to_string(), 3).unwrap(), cf);
    }

    #[test]
    fn two_dimensional_meester_is_euclid(p in 1i64..100_000, q in 1i64..100_000) {
        let v = IntVec::from_i64s(&[p, q]).primitive().unwrap();
        let cf = meester(&v, 1_000_000).unwrap().cf;
        let (p, q) = (v.coords()[0].clone(), v.coords()[1].clone());
        let euclid = regular_cf(&BigRational::new(q, p), 1_000_000);
        let mut split = euclid.clone();
        *split.last_mut().unwrap() -= 1;
        split.push(BigInt::one());
        prop_assert!(cf.elements() == euclid.as_slice() || cf.elements() == split.as_slice());
    }

    #[test]
    fn path_triangulations_canonicalize_back(exps in prop::collection::vec(1u64..4, 0..8)) {
        let d = PrismaticDiagram::from_exponents(3, &exps).unwrap();
        prop_assert_eq!(PrismaticDiagram::canonicalize(&d.to_path_triangulation()).unwrap(), d);
    }

    #[test]
    fn segment_ends_meet_the_next_segment_on_the_mast(exps in prop::collection::vec(1u64..5, 4..10)) {
        let d = PrismaticDiagram::from_exponents(3, &exps).unwrap();
        for i in 1..=exps.len() - 3 {
            prop_assert_eq!(d.label(i, exps[i - 1] as usize + 1).unwrap(), d.label(i + 3, 1).unwrap());
        }
    }

    #[test]
    fn slices_keep_the_middle_of_the_sequence(exps in prop::collection::vec(1u64..4, 1..7), i in 0usize..20, j in 0usize..20) {
        let d = PrismaticDiagram::from_exponents(3, &exps).unwrap();
        let n = d.length();
        let (i, j) = (i % (n + 1), j % (n + 1));
        if i < j {
            let s = d.slice(i, j).unwrap();
            prop_assert_eq!(s.length(), j - i);
        } else {
            prop_assert!(d.slice(i, j).is_err());
        }
    }
}
