//! Structural invariants of the graph families.

use proptest::prelude::*;
use swcp_core::topology::{
    big_world_ball_size, big_world_neighbors, big_world_short_neighbors, km_neighbors,
    make_small_world, BigWorldAddress, KmAddress, Sign,
};

/// Strategy for valid big-world addresses: interior offsets nonzero.
fn arb_address(d: u32) -> impl Strategy<Value = BigWorldAddress> {
    let interior = (1i64..=4, prop::bool::ANY).prop_map(|(v, neg)| if neg { -v } else { v });
    let block = prop::collection::vec(interior, d as usize);
    let last = prop::collection::vec(-4i64..=4, d as usize);
    (prop::bool::ANY, prop::collection::vec(block, 0..4), last).prop_map(
        move |(minus, interior_blocks, last)| {
            let mut coords = Vec::new();
            for b in interior_blocks {
                coords.extend(b);
            }
            coords.extend(last);
            let sign = if minus { Sign::Minus } else { Sign::Plus };
            BigWorldAddress::new(sign, coords, d).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn long_neighbor_is_fixed_point_free_involution(a in arb_address(1)) {
        let l = a.long_neighbor();
        prop_assert_ne!(&l, &a);
        prop_assert_eq!(l.long_neighbor(), a);
    }

    #[test]
    fn long_neighbor_involution_d2(a in arb_address(2)) {
        let l = a.long_neighbor();
        prop_assert_ne!(&l, &a);
        prop_assert_eq!(l.long_neighbor(), a);
    }

    #[test]
    fn short_neighbors_are_symmetric(a in arb_address(1), m in 1u32..=3) {
        let shorts = big_world_short_neighbors(&a, m, 1);
        prop_assert_eq!(shorts.len() as u64, 2 * m as u64);
        for b in &shorts {
            let back = big_world_short_neighbors(b, m, 1);
            prop_assert!(back.contains(&a), "{} not a short neighbor of {}", a, b);
        }
    }

    #[test]
    fn degree_is_regular(a in arb_address(2)) {
        prop_assert_eq!(big_world_neighbors(&a, 1, 2).len(), 9);
    }

    #[test]
    fn address_text_round_trip(a in arb_address(2)) {
        let s = a.to_string();
        let b: BigWorldAddress = s.parse().unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn long_neighbor_involution_bulk() {
    // 10^4 pseudo-random valid addresses via the neighbor maps themselves:
    // follow a deterministic walk and check the involution at every stop.
    let mut a = BigWorldAddress::origin(1);
    let mut rng = swcp_core::rng::SeqRng::new(99);
    for i in 0..10_000 {
        let l = a.long_neighbor();
        assert_ne!(l, a, "fixed point at step {i}");
        assert_eq!(l.long_neighbor(), a, "involution broken at step {i}");
        let neighbors = big_world_neighbors(&a, 1, 1);
        a = neighbors[rng.next_below(neighbors.len() as u64) as usize].clone();
    }
}

#[test]
fn adjacency_symmetry_on_km() {
    let m_sites = 5;
    let mut frontier = vec![KmAddress::root()];
    let mut seen = std::collections::HashSet::new();
    seen.insert(frontier[0].clone());
    for _ in 0..4 {
        let mut next = Vec::new();
        for a in &frontier {
            for b in km_neighbors(a, m_sites).unwrap() {
                assert!(
                    km_neighbors(&b, m_sites).unwrap().contains(a),
                    "{a:?} -> {b:?} not symmetric"
                );
                if seen.insert(b.clone()) {
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
}

#[test]
fn good_site_fraction_obeys_ball_cube_bound() {
    // P(x is bad at radius K) < N_K^3 / n. Averaged over several
    // matchings of a large torus the empirical fraction must respect the
    // bound with Monte Carlo slack.
    let side = 10_000u32;
    let k = 2u32;
    let n_k = big_world_ball_size(1, 1, k).unwrap();
    assert_eq!(n_k, 10);
    let bound = (n_k.pow(3) as f64) / side as f64;
    let seeds = 5u64;
    let mut fractions = Vec::new();
    for seed in 0..seeds {
        let g = make_small_world(side, 1, 1, seed).unwrap();
        let bad = (0..side).filter(|&v| !g.is_ball_treelike(v, k)).count();
        fractions.push(bad as f64 / side as f64);
    }
    let mean = swcp_core::stats::mean(&fractions);
    let se = swcp_core::stats::stderr_of_mean(&fractions);
    assert!(
        mean <= bound + 3.0 * se.max(1e-4),
        "bad-site fraction {mean} vs bound {bound} (se {se})"
    );
}

#[test]
fn treelike_fraction_shrinks_with_system_size() {
    let k = 2u32;
    let frac = |side: u32| {
        let g = make_small_world(side, 1, 1, 3).unwrap();
        (0..side).filter(|&v| !g.is_ball_treelike(v, k)).count() as f64 / side as f64
    };
    assert!(frac(8192) < frac(64));
}
