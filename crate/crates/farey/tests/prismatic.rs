//! Prismatic diagrams: enumeration, canonical forms and agreement with reconstruction.

use farey::meester::meester;
use farey::prismatic::{
    count_distinct_triangulations, diagram_of_cf, diagrams_with_heights, enumerate_diagrams,
    PrismaticDiagram,
};
use farey::reconstruct::NoseProgram;
use farey::IntVec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn canonical_diagrams_number_k_to_the_d() {
    for d in 0..=5 {
        assert_eq!(
            count_distinct_triangulations(3, d).unwrap(),
            3usize.pow(d as u32),
            "k=3 d={d}"
        );
    }
    for d in 0..=6 {
        assert_eq!(
            count_distinct_triangulations(2, d).unwrap(),
            2usize.pow(d as u32),
            "k=2 d={d}"
        );
    }
    assert_eq!(enumerate_diagrams(4, 3).unwrap().len(), 64);
}

#[test]
fn two_masts_with_heights_one_and_three() {
    let ds = diagrams_with_heights(&[1, 3]).unwrap();
    // Every placement of the single step on mast 1 among the four steps.
    assert_eq!(ds.len(), 4);
    assert!(ds.iter().all(|d| d.heights() == vec![1, 3]));
    let raws: Vec<Vec<usize>> = ds.iter().map(|d| d.lr_sequence().raw().to_vec()).collect();
    assert!(raws.contains(&vec![1, 2, 2, 2]));
}

#[test]
fn yards_are_consecutive_and_simplices_join_them() {
    let d = PrismaticDiagram::from_exponents(3, &[3, 1, 2, 1, 2, 3, 3, 1]).unwrap();
    let yards = d.yards();
    assert_eq!(yards.len(), d.length() + 1);
    assert_eq!(yards[0], d.deck());
    assert_eq!(yards[d.length()], d.nest());
    for (i, s) in d.simplices().iter().enumerate() {
        assert_eq!(s.len(), 4);
        assert!(yards[i].iter().all(|v| s.contains(v)));
        assert!(yards[i + 1].iter().all(|v| s.contains(v)));
    }
}

#[test]
fn diagram_of_cf_matches_polyhedron() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let v = IntVec::from_i64s(&[
            rng.gen_range(1..300),
            rng.gen_range(1..300),
            rng.gen_range(1..300),
        ]);
        let Ok(v) = v.primitive() else { continue };
        let cf = meester(&v, 100_000).unwrap().cf;
        let flag = diagram_of_cf(&cf).unwrap();
        let poly = NoseProgram::from_cf(&cf).polyhedron(1_000_000).unwrap();
        assert_eq!(flag.simplices().len(), poly.steps.len(), "{v}");
        let mut top = vec![0usize; 3];
        for pv in &poly.vertices {
            top[pv.mast - 1] = top[pv.mast - 1].max(pv.height);
        }
        assert_eq!(flag.heights(), top, "{v}");
    }
}

#[test]
fn geodesics_are_symmetric_slices() {
    let d = PrismaticDiagram::from_exponents(3, &[2, 1, 3, 2, 1, 1, 2]).unwrap();
    let verts = d.vertices();
    for &v in &verts {
        for &w in &verts {
            let g = d.geodesic(v, w).unwrap();
            let h = d.geodesic(w, v).unwrap();
            assert_eq!(g.is_none(), d.yard_connected(v, w));
            assert_eq!(g.map(|x| x.length()), h.map(|x| x.length()));
        }
    }
}

#[test]
fn svg_draws_every_simplex_edge() {
    let d = PrismaticDiagram::from_exponents(3, &[1, 2, 1]).unwrap();
    let svg = d.to_svg(400.0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}
