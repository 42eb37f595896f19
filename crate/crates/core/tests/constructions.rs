use ils_core::constructions::{
    construct_case_a, construct_general, construct_ils_k2, construct_ils_k3, construct_ils_uniform,
    construct_main, k3_condition, lemma_outline_arrays, realization_even_r, unit_block_square,
    K3Branch, LemmaVariant,
};
use ils_core::necessary::{decide, Status};
use ils_core::Error;

#[test]
fn two_subsquares_boundary() {
    let c = construct_ils_k2(3, 2, 8).unwrap();
    assert!(c.square.verify_ils(&[3, 2]).is_ok());
    assert!(matches!(construct_ils_k2(3, 2, 7), Err(Error::Infeasible(_))));
}

#[test]
fn three_subsquare_branches() {
    assert!(matches!(k3_condition(2, 2, 2, 8), Ok((K3Branch::Large, _))));
    assert!(k3_condition(3, 2, 2, 8).is_err());
    for (h, n) in [([2, 2, 2], 8), ([4, 3, 1], 12), ([3, 3, 3], 12), ([5, 4, 3], 16)] {
        if k3_condition(h[0], h[1], h[2], n).is_ok() {
            let c = construct_ils_k3(h[0], h[1], h[2], n).unwrap();
            assert!(c.square.verify_ils(&h).is_ok(), "{h:?}, n = {n}");
        }
    }
}

#[test]
fn uniform_parts() {
    for (h, k, n) in [(2, 3, 6), (2, 4, 9), (3, 3, 11), (1, 5, 5), (2, 5, 12)] {
        let c = construct_ils_uniform(h, k, n, 50_000_000).unwrap();
        assert!(c.square.verify_ils(&vec![h; k]).is_ok(), "{h}^{k}, n = {n}");
    }
}

#[test]
fn even_realization_and_main_cases() {
    let c = realization_even_r(&[4, 2, 2, 2, 1, 1]).unwrap();
    assert!(c.square.verify_ils(&[4, 2, 2, 2, 1, 1]).is_ok());
    for h in [vec![3, 3, 1, 1], vec![4, 4, 4, 4, 2, 1], vec![6, 6, 3, 3, 3, 1], vec![4, 4, 3, 2, 1]] {
        let c = construct_main(&h).unwrap();
        assert!(c.square.verify_ils(&h[1..]).is_ok(), "{h:?}");
    }
    let c = construct_case_a(&[4, 4, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
    assert_eq!(c.square.order(), 16);
    assert!(c.square.verify_ils(&[4, 1, 1, 1, 1, 1, 1, 1, 1]).is_ok());
}

#[test]
fn general_construction_orders() {
    for (g, n) in [(vec![4, 2, 1], 11), (vec![3, 3, 3, 3], 15), (vec![7, 1], 16)] {
        let c = construct_general(&g, n).unwrap();
        assert!(c.square.verify_ils(&g).is_ok(), "{g:?}, n = {n}");
        assert!(c.trace.size() >= 1);
    }
    assert!(matches!(construct_general(&[4, 2], 9), Err(Error::Precondition(_))));
}

#[test]
fn lemma_arrays_and_unit_blocks() {
    let sq = unit_block_square(4, 2).unwrap();
    assert!(sq.verify_ils(&[1, 1, 1, 1, 2]).is_ok());
    lemma_outline_arrays(3, 4, 1, &[2, 1], LemmaVariant::Plain).unwrap();
    assert!(lemma_outline_arrays(1, 4, 1, &[2], LemmaVariant::Plain).is_err());
}

#[test]
fn decide_known_instances() {
    let v = decide(&[3, 2, 2, 1], 8).unwrap();
    assert_eq!(v.status, Status::NotExists);
    let v = decide(&[2, 2, 2], 8).unwrap();
    assert_eq!(v.status, Status::Exists);
    assert!(v.witness.unwrap().verify_ils(&[2, 2, 2]).is_ok());
    let v = decide(&[2, 2], 5).unwrap();
    assert_eq!(v.status, Status::NotExists);
}
