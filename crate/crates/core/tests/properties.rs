//! Property tests for the geometry kernel, the solver and the market layer.

mod common;

use conerisk::acceptance::{
    augment, check_axioms, terminal_cone_acceptance, worst_case_acceptance,
};
use conerisk::lp::{solve, support_value, LinearProgram, LpStatus, Sense, SupportValue};
use conerisk::market::{bidask_cone, eligible_initial_cone, frictionless_cone};
use conerisk::polyhedra::{Constraint, HRep, Polyhedron, VRep};
use conerisk::rational::{dot, qvec, rat, QVec, Rat};
use conerisk::riskmeasure::{evaluate, pair_inverse, pair_transform, scalarize, set_expectation};
use conerisk::superhedge::{consistent_pricing_generators, strict_cpp_exists};
use proptest::prelude::*;

fn small_vec(dim: usize) -> impl Strategy<Value = QVec> {
    proptest::collection::vec(-3i64..=3, dim).prop_map(|v| qvec(&v))
}

fn hrep_strategy() -> impl Strategy<Value = HRep> {
    (1usize..=6).prop_flat_map(|dim| {
        let rows = proptest::collection::vec((small_vec(dim), -4i64..=4), 1..=12);
        let eqs = proptest::collection::vec((small_vec(dim), -2i64..=2), 0..=2);
        (Just(dim), rows, eqs).prop_map(|(dim, rows, eqs)| {
            let mut h = HRep::new(dim);
            for (n, b) in rows {
                h.inequalities.push(Constraint::new(n, rat(b)));
            }
            for (n, b) in eqs {
                h.equalities.push(Constraint::new(n, rat(b)));
            }
            h
        })
    })
}

fn cone_strategy() -> impl Strategy<Value = Polyhedron> {
    (1usize..=4).prop_flat_map(|dim| {
        let rays = proptest::collection::vec(small_vec(dim), 1..=6);
        let lin = proptest::collection::vec(small_vec(dim), 0..=1);
        (Just(dim), rays, lin)
            .prop_map(|(dim, rays, lin)| Polyhedron::from_vrep(VRep::cone(dim, rays, lin)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_h_to_v_to_h(h in hrep_strategy()) {
        let p = Polyhedron::from_hrep(h);
        let via_v = Polyhedron::from_vrep(p.vrep().clone());
        let via_h = Polyhedron::from_hrep(p.hrep().clone());
        prop_assert_eq!(&via_v, &p);
        prop_assert_eq!(&via_h, &p);
        prop_assert!(p.same_set(&via_v).unwrap());
    }

    #[test]
    fn dual_cone_involution_and_sum_rule(c1 in cone_strategy(), c2 in cone_strategy()) {
        let dd = c1.dual_cone(None).unwrap().dual_cone(None).unwrap();
        prop_assert_eq!(&dd, &c1);

        if c1.dim() == c2.dim() {
            // dual of an intersection is the (closed) sum of the duals
            let meet = c1.intersect(&c2).unwrap();
            let lhs = meet.dual_cone(None).unwrap();
            let rhs = c1
                .dual_cone(None)
                .unwrap()
                .minkowski_sum(&c2.dual_cone(None).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn minkowski_sum_laws(h in hrep_strategy()) {
        let p = Polyhedron::from_hrep(h);
        let dim = p.dim();
        let zero = Polyhedron::single_point(conerisk::rational::zeros(dim));
        prop_assert_eq!(&p.minkowski_sum(&zero).unwrap(), &p);

        let orthant = Polyhedron::orthant(dim);
        let ab = p.minkowski_sum(&orthant).unwrap();
        let ba = orthant.minkowski_sum(&p).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn projection_composes(h in hrep_strategy()) {
        let p = Polyhedron::from_hrep(h);
        let dim = p.dim();
        let all: Vec<usize> = (0..dim).collect();
        prop_assert_eq!(&p.project(&all).unwrap(), &p);
        if dim >= 2 {
            let once = p.project(&[0, 1]).unwrap();
            let twice = once.project(&[0]).unwrap();
            let direct = p.project(&[0]).unwrap();
            prop_assert_eq!(twice, direct);
        }
    }

    #[test]
    fn lp_value_invariant_under_row_order(h in hrep_strategy(), obj in small_vec(6)) {
        let p = h.clone();
        let obj = obj[..h.dim].to_vec();
        let forward = solve(&LinearProgram {
            objective: obj.clone(),
            constraints: p.clone(),
            sense: Sense::Minimize,
        });
        let mut reversed = p.clone();
        reversed.inequalities.reverse();
        reversed.equalities.reverse();
        let backward = solve(&LinearProgram {
            objective: obj,
            constraints: reversed,
            sense: Sense::Minimize,
        });
        prop_assert_eq!(forward.status, backward.status);
        if forward.status == LpStatus::Optimal {
            prop_assert_eq!(forward.value, backward.value);
        }
    }

    #[test]
    fn support_value_positively_homogeneous(c in cone_strategy(), dir in small_vec(4), k in 1i64..=5) {
        let dir = dir[..c.dim()].to_vec();
        let s1 = support_value(&c, &dir).unwrap();
        let scaled: QVec = dir.iter().map(|x| x * rat(k)).collect();
        let s2 = support_value(&c, &scaled).unwrap();
        match (s1, s2) {
            (SupportValue::Finite(a), SupportValue::Finite(b)) => prop_assert_eq!(a * rat(k), b),
            (SupportValue::Infinite, SupportValue::Infinite) => {}
            other => prop_assert!(false, "homogeneity mismatch: {:?}", other),
        }
    }
}

#[test]
fn determinism_across_reconstruction() {
    let mut rng = common::rng(0xd5e1);
    for _ in 0..20 {
        let m = common::random_consistent_market(&mut rng, 2, 3);
        let a = worst_case_acceptance(&m).unwrap();
        let b = worst_case_acceptance(&m).unwrap();
        assert_eq!(a, b);
        let r = a.regions()[0].clone();
        assert_eq!(Polyhedron::from_hrep(r.hrep().clone()), r);
    }
}

#[test]
fn bidask_unit_rates_match_frictionless_unit_prices() {
    for d in 2..=4usize {
        let rates = vec![vec![Some(rat(1)); d]; d];
        let ba = bidask_cone(&rates).unwrap();
        let prices = vec![rat(1); d];
        let fl = frictionless_cone(&prices).unwrap();
        assert_eq!(ba.cone(), fl.cone());
    }
}

#[test]
fn eligible_dual_routes_agree_on_random_markets() {
    // eligible_initial_cone verifies the within-subspace dual against the
    // ambient formula internally and errors on disagreement
    let mut rng = common::rng(0xe116);
    for case in 0..25 {
        let d = 2 + case % 3;
        let m = common::random_consistent_market(&mut rng, d, 2);
        match eligible_initial_cone(&m) {
            Ok(ec) => {
                assert!(!ec.cone_m.is_empty());
                assert!(!ec.dual_m.is_empty());
            }
            Err(e) => panic!("route disagreement or degenerate cone: {e}"),
        }
    }
}

#[test]
fn augment_is_idempotent_and_monotone_on_random_markets() {
    let mut rng = common::rng(0xa06);
    for _ in 0..10 {
        let m = common::random_consistent_market(&mut rng, 2, 2);
        let pre = terminal_cone_acceptance(&m);
        let aug = augment(&pre).unwrap();
        assert_eq!(augment(&aug).unwrap(), aug);
        assert!(pre.regions()[0].subset(&aug.regions()[0]).unwrap());
        let rep = check_axioms(&aug);
        assert!(rep.kt_compatible && rep.ki_compatible);
    }
}

#[test]
fn pair_round_trip_preserves_halfspace_map() {
    let mut rng = common::rng(0xfa17);
    for _ in 0..10 {
        let m = common::random_consistent_market(&mut rng, 2, 3);
        // build a density from the terminal dual cones with nonzero weight
        let mut values = Vec::new();
        for k in &m.k_terminal {
            let dual = k.dual();
            values.push(dual.vrep().rays[0].clone());
        }
        let y = conerisk::market::RandomPortfolio::new(values);
        let w = y.expectation(&m.space);
        let v = m.eligible.project(&w);
        if v.iter().all(num::Zero::is_zero) {
            continue;
        }
        let Ok(pair) = pair_transform(&m, &y, &v) else {
            continue; // v outside the admissible dual part
        };
        let (y2, v2) = pair_inverse(&m, &pair);
        assert_eq!(y2, y);
        assert_eq!(v2, v);
        // the induced halfspace maps agree on sampled claims
        for _ in 0..3 {
            let x = common::random_claim(&mut rng, m.scenarios(), m.assets());
            let lhs = set_expectation(&m, &y, &v, &x).unwrap();
            let rhs = set_expectation(&m, &y2, &v2, &x).unwrap();
            assert!(lhs.same_as(&rhs));
        }
    }
}

#[test]
fn scalarization_consistent_under_augmentation() {
    let mut rng = common::rng(0x5ca1);
    for _ in 0..8 {
        let m = common::random_consistent_market(&mut rng, 2, 2);
        let pre = terminal_cone_acceptance(&m);
        let aug = augment(&pre).unwrap();
        // price against directions in the dual of the initial cone
        for v in &m.k_initial.dual().vrep().rays {
            for _ in 0..2 {
                let x = common::random_claim(&mut rng, 2, 2);
                let a = scalarize(&pre, &x, v).unwrap();
                let b = scalarize(&aug, &x, v).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn strict_process_routes_agree() {
    let mut rng = common::rng(0x57c1);
    // strict-feasibility program and generator-interior test decide alike
    for case in 0..6 {
        let tree = common::random_two_period_tree(&mut rng, 2, 2);
        let lp_route = strict_cpp_exists(&tree);
        let gens = consistent_pricing_generators(&tree);
        let gen_route = !gens.is_empty()
            && (0..tree.len()).all(|v| {
                let total = gens
                    .iter()
                    .fold(conerisk::rational::zeros(tree.assets()), |acc, g| {
                        conerisk::rational::add(&acc, &g.z[v])
                    });
                tree.node(v)
                    .cone
                    .cone()
                    .vrep()
                    .rays
                    .iter()
                    .all(|r| num::Signed::is_positive(&dot(r, &total)))
            });
        assert_eq!(lp_route, gen_route, "routes disagree on tree {case}");
    }

    // an arbitrage tree is rejected by both routes
    let bad = conerisk::superhedge::ScenarioTree::new(vec![
        conerisk::superhedge::TreeNode {
            parent: None,
            prob: rat(1),
            cone: frictionless_cone(&qvec(&[1, 1])).unwrap(),
        },
        conerisk::superhedge::TreeNode {
            parent: Some(0),
            prob: rat(1),
            cone: frictionless_cone(&[rat(1), Rat::new(1.into(), 3.into())]).unwrap(),
        },
    ])
    .unwrap();
    assert!(!strict_cpp_exists(&bad));
    assert!(consistent_pricing_generators(&bad).is_empty());
}

#[test]
fn worst_case_dual_cone_characterization() {
    // the dual of the worst-case region is exactly the blockwise terminal
    // dual cone cut by the weight condition on the block sum
    let mut rng = common::rng(0xdc44);
    for _ in 0..6 {
        let m = common::random_consistent_market(&mut rng, 2, 3);
        let a = worst_case_acceptance(&m).unwrap();
        let dual = a.regions()[0].dual_cone(None).unwrap();

        let (n, d) = (m.scenarios(), m.assets());
        let mut h = HRep::new(n * d);
        for (w, k) in m.k_terminal.iter().enumerate() {
            let kd = k.dual();
            for c in &kd.hrep().inequalities {
                let mut nrm = conerisk::rational::zeros(n * d);
                nrm[w * d..(w + 1) * d].clone_from_slice(&c.normal);
                h.inequalities.push(Constraint::homogeneous(nrm));
            }
            for c in &kd.hrep().equalities {
                let mut nrm = conerisk::rational::zeros(n * d);
                nrm[w * d..(w + 1) * d].clone_from_slice(&c.normal);
                h.equalities.push(Constraint::homogeneous(nrm));
            }
        }
        let weight_cone = m
            .k_initial
            .dual()
            .minkowski_sum(&Polyhedron::cone_from_generators(
                d,
                Vec::new(),
                m.eligible.orthocomplement(),
            ))
            .unwrap();
        for c in &weight_cone.hrep().inequalities {
            let mut nrm = conerisk::rational::zeros(n * d);
            for blk in 0..n {
                nrm[blk * d..(blk + 1) * d].clone_from_slice(&c.normal);
            }
            h.inequalities.push(Constraint::homogeneous(nrm));
        }
        for c in &weight_cone.hrep().equalities {
            let mut nrm = conerisk::rational::zeros(n * d);
            for blk in 0..n {
                nrm[blk * d..(blk + 1) * d].clone_from_slice(&c.normal);
            }
            h.equalities.push(Constraint::homogeneous(nrm));
        }
        assert_eq!(dual, Polyhedron::from_hrep(h));
    }
}

#[test]
fn var_tolerance_axioms_do_not_grant_properness() {
    // a tolerance set ignoring the deposit assets leaves every eligible
    // portfolio acceptable; the axiom report exposes the failure
    let k = conerisk::market::SolvencyCone::new(Polyhedron::orthant(2)).unwrap();
    let m = conerisk::market::OnePeriodMarket::new(
        conerisk::market::ScenarioSpace::uniform(2),
        k.clone(),
        vec![k.clone(), k],
        conerisk::market::EligibleSpace::new(2, vec![qvec(&[1, 0])]).unwrap(),
    )
    .unwrap();
    let d_alpha = vec![Polyhedron::halfspace(qvec(&[0, 1]), rat(0)); 2];
    let v = conerisk::acceptance::var_acceptance(&m, &rat(0), Some(d_alpha), false).unwrap();
    let rep = check_axioms(&v);
    assert!(!rep.a1b);
}

#[test]
fn var_membership_matches_scenario_counting() {
    // independent oracle: u compensates X at level alpha iff the scenarios
    // where X(w) + u lies in the tolerance cone carry probability >= 1-alpha
    let m = conerisk::testfix::toy_market();
    let x = conerisk::testfix::toy_claim();
    let alpha = conerisk::rational::ratio(1, 3);
    let v = conerisk::acceptance::var_acceptance(&m, &alpha, None, false).unwrap();
    let risk = evaluate(&v, &x).unwrap();

    let mut rng = common::rng(0x7a11);
    let threshold = rat(1) - &alpha;
    for _ in 0..60 {
        let u = common::rat_vec(&mut rng, 2);
        let mut covered = conerisk::rational::Rat::from_integer(0.into());
        for w in 0..3 {
            let shifted = conerisk::rational::add(x.value(w), &u);
            if m.k_terminal[w].cone().contains(&shifted).unwrap() {
                covered += m.space.prob(w);
            }
        }
        let oracle = covered >= threshold;
        assert_eq!(
            risk.contains_m(&u).unwrap(),
            oracle,
            "disagreement at {u:?}"
        );
    }
}

#[test]
fn harness_handles_var_unions() {
    let m = conerisk::testfix::toy_market();
    let v = conerisk::acceptance::var_acceptance(&m, &conerisk::rational::ratio(1, 3), None, false)
        .unwrap();
    let claims = vec![conerisk::testfix::toy_claim()];
    let shifts = vec![qvec(&[2, -1])];
    let rep = conerisk::riskmeasure::axiom_harness(&v, &claims, &shifts).unwrap();
    assert!(rep.translative);
    assert!(rep.monotone);
    assert!(rep.positively_homogeneous);
    assert!(!rep.convex);
    assert!(rep.subadditive.is_none()); // unions carry no single-region certificate
    assert!(rep.graph_identity);
}

#[test]
fn minkowski_sum_associates() {
    let a = Polyhedron::from_hrep(
        HRep::new(2)
            .ineq(qvec(&[1, 2]), rat(16))
            .ineq(qvec(&[2, 1]), rat(14)),
    );
    let b = Polyhedron::halfspace(qvec(&[1, 1]), rat(0));
    let c = Polyhedron::orthant(2);
    let left = a.minkowski_sum(&b).unwrap().minkowski_sum(&c).unwrap();
    let right = a.minkowski_sum(&b.minkowski_sum(&c).unwrap()).unwrap();
    assert_eq!(left, right);
}

#[test]
fn risk_zero_recession_property_on_random_markets() {
    let mut rng = common::rng(0x07ec);
    for _ in 0..6 {
        let m = common::random_consistent_market(&mut rng, 2, 2);
        let a = worst_case_acceptance(&m).unwrap();
        let r0 = evaluate(&a, &conerisk::market::RandomPortfolio::zero(2, 2)).unwrap();
        let x = common::random_claim(&mut rng, 2, 2);
        let rx = evaluate(&a, &x).unwrap();
        if rx.is_empty() {
            continue;
        }
        // R(0) is a cone inside the recession cone of every value
        assert!(r0.single_m().is_cone());
        assert!(r0
            .single_m()
            .subset(&rx.single_m().recession_cone())
            .unwrap());
    }
}
