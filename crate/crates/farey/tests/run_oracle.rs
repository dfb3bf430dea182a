//! The geometric run, the Meester algorithm and nose stretching agree on random rays.

use farey::lattice::{content, IntVec};
use farey::meester::{meester, to_farey_form};
use farey::reconstruct::{nose_stretch, NoseProgram};
use farey::tessellation::farey_summation_run_int;
use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_primitive(rng: &mut ChaCha8Rng, max: i64) -> IntVec {
    loop {
        let v = IntVec::from_i64s(&[
            rng.gen_range(1..=max),
            rng.gen_range(1..=max),
            rng.gen_range(1..=max),
        ]);
        if content(&v).unwrap().is_one() {
            return v;
        }
    }
}

fn sorted(mut v: Vec<IntVec>) -> Vec<IntVec> {
    v.sort();
    v
}

#[test]
fn run_meester_and_nose_stretching_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let v = random_primitive(&mut rng, 1_000_000);
        let cf = meester(&v, 1_000_000).unwrap().cf;
        let run = farey_summation_run_int(&v, &BigInt::from(u64::MAX)).unwrap();
        assert_eq!(run.meester_cf().unwrap(), cf, "{v}");
        assert_eq!(
            run.farey_form().unwrap(),
            to_farey_form(&cf).unwrap(),
            "{v}"
        );
        assert_eq!(run.pyramid_count(), cf.element_sum(), "{v}");
        assert_eq!(nose_stretch(&cf).unwrap().pennant, Some(v.clone()));
    }
}

#[test]
fn run_and_polyhedron_have_the_same_yards() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let v = random_primitive(&mut rng, 300);
        let cf = meester(&v, 100_000).unwrap().cf;
        let run = farey_summation_run_int(&v, &BigInt::from(u64::MAX))
            .unwrap()
            .simplices(1_000_000)
            .unwrap();
        let poly = NoseProgram::from_cf(&cf).polyhedron(1_000_000).unwrap();
        assert_eq!(poly.yards.len(), run.yards.len(), "{v}");
        for i in 0..run.yards.len() {
            assert_eq!(
                sorted(poly.yard_points(i)),
                run.yards[i].sorted_vertices(),
                "{v} yard {i}"
            );
        }
        for i in 1..=run.pyramids.len() {
            let p: Vec<IntVec> = poly
                .pyramid(i)
                .iter()
                .map(|&k| poly.vertices[k].point.clone())
                .collect();
            assert_eq!(
                sorted(p),
                run.pyramids[i - 1].sorted_vertices(),
                "{v} pyramid {i}"
            );
        }
        assert_eq!(poly.principal_flags(), run.principal, "{v}");
        let dp: Vec<Vec<IntVec>> = poly
            .division_simplices()
            .iter()
            .map(|d| sorted(d.iter().map(|&k| poly.vertices[k].point.clone()).collect()))
            .collect();
        let dr: Vec<Vec<IntVec>> = run
            .division_simplices
            .iter()
            .map(|d| d.sorted_vertices())
            .collect();
        assert_eq!(dp, dr, "{v}");
    }
}
