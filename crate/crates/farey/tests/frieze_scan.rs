//! Ptolemy relation over random all-positive diagrams.

use farey::frieze::{ptolemy_scan, Chirality};
use farey::prismatic::PrismaticDiagram;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn ptolemy_constants_match_chirality() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut rights, mut lefts) = (0, 0, 0);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let exps: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let d = PrismaticDiagram::from_exponents(3, &exps).unwrap();
        let scan = ptolemy_scan(&d).unwrap();
        pairs += scan.pairs;
        rights += scan.right_ones;
        lefts += scan.left_zeros;
        for v in scan.violations {
            bad.push((
                exps.clone(),
                v.rows,
                v.cols,
                v.chirality == Chirality::Right,
                v.det.to_string(),
            ));
        }
    }
    for b in bad.iter().take(20) {
        eprintln!("{b:?}");
    }
    eprintln!("pairs {pairs}, violations {}", bad.len());
    assert!(pairs > 0);
    assert!(rights > 0 && lefts > 0);
    assert!(bad.is_empty());
}

#[test]
fn transformed_continuant_matrix_is_a_ptolemy_matrix() {
    use farey::frieze::transform_identity_holds;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..300 {
        let n = rng.gen_range(3..=8);
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        if let Some(ok) = transform_identity_holds(&a).unwrap() {
            assert!(ok, "{a:?}");
            checked += 1;
        }
    }
    assert!(checked > 50);
}
