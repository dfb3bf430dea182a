//! Divergence cells and the cubic demonstration.

use farey::explore::{
    admissible_prefixes, cells_to_svg, divergence_cells, persistence_check, regular_cf,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Brute-force count of admissible prefixes by filtering all short tuples.
fn brute_force(bound: u64) -> usize {
    let mut count = 0;
    for len in 1..=(2 * bound as usize + 2) {
        let total = (bound as usize + 1).pow(len as u32);
        for code in 0..total {
            let s: Vec<u64> = (0..len)
                .map(|i| (code / (bound as usize + 1).pow(i as u32) % (bound as usize + 1)) as u64)
                .collect();
            let zero_pairs_ok = (0..len - 1).all(|i| !(s[i] == 0 && s[i + 1] == 0) || i == 0);
            if s.iter().sum::<u64>() <= bound && s[len - 1] != 0 && zero_pairs_ok {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn prefix_counts_match_brute_force() {
    for bound in 1..=4 {
        assert_eq!(
            admissible_prefixes(bound).len(),
            brute_force(bound),
            "bound {bound}"
        );
    }
    assert_eq!(divergence_cells(3).unwrap().len(), 39);
    assert_eq!(divergence_cells(4).unwrap().len(), 120);
}

#[test]
fn cell_points_lie_in_the_unit_sum_plane() {
    for c in divergence_cells(3).unwrap() {
        for p in c.triangle.iter().chain(std::iter::once(&c.centre_point)) {
            let s: BigRational = p.coords().iter().cloned().sum();
            assert_eq!(s, BigRational::from_integer(BigInt::from(1)));
        }
    }
}

#[test]
fn dominance_persists_for_bound_three() {
    for (i, c) in divergence_cells(3).unwrap().iter().enumerate() {
        let r = persistence_check(c, 2, 60, i as u64).unwrap();
        assert!(
            r.persistent && r.min_steps_after_entry >= 50,
            "{:?}: {r:?}",
            c.prefix
        );
    }
}

#[test]
fn svg_has_one_polygon_per_cell_and_the_frame() {
    let cells = divergence_cells(2).unwrap();
    assert_eq!(
        cells_to_svg(&cells, 300.0).matches("<polygon").count(),
        cells.len() + 1
    );
}

#[test]
fn regular_cf_of_rationals() {
    let r = BigRational::new(BigInt::from(67), BigInt::from(29));
    let cf: Vec<i64> = regular_cf(&r, 10)
        .iter()
        .map(|x| x.try_into().unwrap())
        .collect();
    assert_eq!(cf, vec![2, 3, 4, 2]);
    assert!(regular_cf(&BigRational::zero(), 5)
        .iter()
        .all(|x| x.is_zero()));
}
