use num_traits::{One, Zero};
use proptest::prelude::*;
use slicelab::constructions::{build_b_eps, build_stages, doubled_stage, squeezed_box, verify_ledger, StageLedger};
use slicelab::error::Error;
use slicelab::polytope::{contains, gauge, support, Caps};
use slicelab::scalar::big;
use slicelab::seqspace::{Functional, SeqVector};
use slicelab::Scalar;
use std::sync::OnceLock;

fn ledger() -> &'static StageLedger<Scalar> {
    static L: OnceLock<StageLedger<Scalar>> = OnceLock::new();
    L.get_or_init(|| build_stages(3, 3, 4, &Caps::default()).unwrap())
}

#[test]
fn stage_sizes_follow_the_recursion() {
    let l = build_stages::<Scalar>(4, 3, 4, &Caps::default()).unwrap();
    let ms: Vec<usize> = l.stages.iter().map(|s| s.m).collect();
    let ls: Vec<usize> = l.stages.iter().map(|s| s.l).collect();
    assert_eq!(ms, vec![1, 2, 5, 10]);
    assert_eq!(ls, vec![1, 3, 5, 10]);
    assert_eq!(l.nets.len(), 10);
    for w in l.stages.windows(2).skip(1) {
        assert!(w[1].eps_running_min <= w[0].eps_running_min);
    }
    verify_ledger(&l).unwrap();
}

#[test]
fn bumps_are_vertices_of_the_next_stage() {
    let l = ledger();
    for n in 2..l.depth() {
        let st = l.stage(n).unwrap();
        let next = &l.stage(n + 1).unwrap().body;
        for i in 1..=st.l {
            let g = l.net_point(i, next.model.dim).unwrap();
            let bump = g.add(&SeqVector::unit(next.model.dim, false, st.m + i).unwrap()).unwrap();
            assert!(next.vertices.contains(&bump));
        }
    }
}

#[test]
fn caps_are_enforced() {
    let tight = Caps {
        max_vertices: 4,
        ..Caps::default()
    };
    assert!(matches!(
        build_stages::<Scalar>(3, 3, 4, &tight),
        Err(Error::CapExceeded { .. })
    ));
    assert!(matches!(
        build_stages::<Scalar>(1, 3, 4, &Caps::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn b_eps_is_symmetric_and_contains_the_box() {
    let ball = build_b_eps(ledger(), &big(1, 4), &Caps::default()).unwrap();
    for v in &ball.vertices {
        assert!(contains(&ball, &v.neg()).unwrap());
    }
    let m = ball.model.dim;
    let e1 = SeqVector::unit(m, true, 1).unwrap();
    assert_eq!(gauge(&ball, &e1).unwrap(), Scalar::one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn b_eps_support_is_the_max_over_generators(coeffs in proptest::collection::vec(-3i64..=3, 6)) {
        let l = ledger();
        let eps = big(1, 4);
        let caps = Caps::default();
        let ball = build_b_eps(l, &eps, &caps).unwrap();
        let m = ball.model.dim;
        let f = Functional::new(coeffs[..m].iter().map(|&c| big(c, 1)).collect(), big(coeffs[m], 1));
        let a = doubled_stage(l).unwrap();
        let bx = squeezed_box(m, &eps, &caps).unwrap();
        let want = support(&a, &f).unwrap()
            .max(support(&a.neg(), &f).unwrap())
            .max(support(&bx, &f).unwrap());
        let got = support(&ball, &f).unwrap();
        prop_assert_eq!(got.clone(), want);
        prop_assert!(f.is_zero() || got > Scalar::zero());
    }
}
