use proptest::prelude::*;

use ils_core::constructions::construct_general;
use ils_core::io::{read_square, square_from_grid, square_to_grid, square_to_json, to_pretty};
use ils_core::latin::{idempotent_square, inflate};
use ils_core::necessary::{check_necessary, decide_with, evaluate_sets, DecideOptions, Status};
use ils_core::outline::reduce_modulo;
use ils_core::solver::{brute_force_ils, SearchOutcome};
use ils_core::{Composition, LatinSquare};

fn parts_and_order(max_k: usize, max_part: usize, max_slack: usize) -> impl Strategy<Value = (Vec<usize>, usize)> {
    (prop::collection::vec(1..=max_part, 1..=max_k), 0..=max_slack).prop_map(|(mut parts, slack)| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let n = parts.iter().sum::<usize>() + slack;
        (parts, n)
    })
}

fn composition_of(n: usize) -> impl Strategy<Value = Composition> {
    prop::collection::vec(1..=3usize, n).prop_map(move |steps| {
        let mut parts = Vec::new();
        let mut left = n;
        for s in steps {
            if left == 0 {
                break;
            }
            let h = s.min(left);
            parts.push(h);
            left -= h;
        }
        Composition::new(parts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_and_grid_roundtrip(n in 1usize..10, shift in 0usize..10) {
        let sq = LatinSquare::cyclic(n);
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let sq = sq.permuted(&perm, &(0..n).collect::<Vec<_>>(), &perm);
        let json = to_pretty(&square_to_json(&sq, &[]));
        prop_assert_eq!(&read_square(&json).unwrap().0, &sq);
        prop_assert_eq!(&square_from_grid(&square_to_grid(&sq)).unwrap(), &sq);
    }

    #[test]
    fn certificates_replay((parts, n) in parts_and_order(6, 8, 6)) {
        if let Some(v) = check_necessary(&parts, n).unwrap() {
            let (lhs, rhs) = evaluate_sets(&parts, n, [&v.a, &v.b, &v.c, &v.d]).unwrap();
            prop_assert_eq!((lhs, rhs), (v.lhs, v.rhs));
            prop_assert!(lhs < rhs);
        }
    }

    #[test]
    fn general_construction_is_sound((parts, _) in parts_and_order(6, 6, 0), extra in 0usize..4) {
        let n = parts[0] + parts.iter().sum::<usize>() + extra;
        let c = construct_general(&parts, n).unwrap();
        prop_assert_eq!(c.square.order(), n);
        prop_assert!(c.square.verify_ils(&parts).is_ok());
        prop_assert!(check_necessary(&parts, n).unwrap().is_none());
    }

    #[test]
    fn inflated_idempotent_has_diagonal_blocks(k in 3usize..8, h in 1usize..4) {
        let base = idempotent_square(k).unwrap();
        prop_assert!(base.validate().is_ok());
        for i in 0..k {
            prop_assert_eq!(base.get(i, i) as usize, i + 1);
        }
        let sq = inflate(&base, h);
        prop_assert!(sq.verify_ils(&vec![h; k]).is_ok());
    }

    #[test]
    fn lift_inverts_reduce((p, perm) in (1usize..10).prop_flat_map(|n| {
        (composition_of(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })) {
        let sq = LatinSquare::cyclic(p.total()).permuted(&perm, &perm, &perm);
        let o = reduce_modulo(&sq, &p, &p, &p).unwrap();
        let lifted = o.lift().unwrap();
        prop_assert!(lifted.validate().is_ok());
        prop_assert_eq!(reduce_modulo(&lifted, &p, &p, &p).unwrap(), o);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn decide_agrees_with_search((parts, n) in parts_and_order(4, 3, 3)) {
        prop_assume!(n <= 8);
        let opts = DecideOptions { oracle_bound: 0, budget: 10_000_000 };
        let v = decide_with(&parts, n, &opts).unwrap();
        let truth = brute_force_ils(&parts, n, 200_000_000).outcome;
        match v.status {
            Status::Exists => prop_assert!(matches!(truth, SearchOutcome::Found(_))),
            Status::NotExists => prop_assert!(matches!(truth, SearchOutcome::Infeasible)),
            Status::Unknown => {}
        }
    }
}
