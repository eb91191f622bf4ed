//! Acceptance suite: one test per exit criterion, each printing a PASS line
//! with its runtime and asserting the stated time budget.

mod common;

use std::time::{Duration, Instant};

use conerisk::acceptance::{
    augment, avar_acceptance, check_axioms, no_arbitrage, terminal_cone_acceptance, var_acceptance,
    worst_case_acceptance, AcceptanceError,
};
use conerisk::market::{scenario_cone, RandomPortfolio};
use conerisk::model_io;
use conerisk::polyhedra::{HRep, Polyhedron};
use conerisk::rational::{qvec, rat, ratio, QVec, Rat};
use conerisk::riskmeasure::{
    accepts, axiom_harness, evaluate, primal_dual_check, scalarize, Scalarization,
};
use conerisk::superhedge::{strict_cpp_exists, superhedge_dual, superhedge_set, ScenarioTree};
use conerisk::testfix;

fn fixture(name: &str) -> model_io::ModelDocument {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).expect("fixture file present");
    model_io::parse(&text).expect("fixture parses")
}

fn report(criterion: &str, what: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("criterion {criterion} ({what}): PASS in {elapsed:?}");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its budget: {elapsed:?} >= {budget:?}"
    );
}

#[test]
fn criterion_1_two_asset_three_scenario_reproduction() {
    let start = Instant::now();
    let doc = fixture("toy.json");
    let m = doc.market().expect("toy fixture is a market").clone();
    assert_eq!(m, testfix::toy_market());
    let x = doc.claim("demo").unwrap().portfolio();

    // (a) pre-acceptance risk set: exactly the two stated inequalities
    let pre = terminal_cone_acceptance(&m);
    let risk = evaluate(&pre, &x).unwrap();
    let expected = Polyhedron::from_hrep(
        HRep::new(2)
            .ineq(qvec(&[1, 2]), rat(16))
            .ineq(qvec(&[2, 1]), rat(14)),
    );
    assert_eq!(risk.single_m(), &expected);
    assert_eq!(risk.single_m().hrep().inequalities.len(), 2);

    // (b) the unique minimal vertex under the initial-exchange preorder
    let ki = m.k_initial.cone().clone();
    let minimal = risk.single_m().minimal_points(&ki).unwrap();
    assert_eq!(minimal, vec![qvec(&[4, 6])]);

    // (c) scalarization 10 before and after augmentation
    let aug = augment(&pre).unwrap();
    let v = qvec(&[1, 1]);
    assert_eq!(
        scalarize(&pre, &x, &v).unwrap(),
        Scalarization::Finite(rat(10))
    );
    assert_eq!(
        scalarize(&aug, &x, &v).unwrap(),
        Scalarization::Finite(rat(10))
    );

    // (d) the augmented risk set carries the whole solution line
    let augmented_risk = evaluate(&aug, &x).unwrap();
    let vrep = augmented_risk.single_m().vrep();
    assert_eq!(vrep.lineality, vec![qvec(&[1, -1])]);
    assert_eq!(vrep.vertices.len(), 1);
    let base = &vrep.vertices[0];
    assert_eq!(base[0].clone() + &base[1], rat(10)); // base point on u1 + u2 = 10

    report("1", "toy reproduction", start, Duration::from_secs(1));
}

#[test]
fn criterion_2_primal_dual_equality_randomized() {
    let start = Instant::now();
    let mut rng = common::rng(0x5eed_0002);
    let mut done = 0;
    let mut attempts = 0;
    while done < 20 {
        attempts += 1;
        assert!(attempts < 100, "instance generation stalled");
        let d = 2 + (attempts % 2);
        let n = 2 + (attempts % 3);
        let m = common::random_consistent_market(&mut rng, d, n);
        let a = worst_case_acceptance(&m).unwrap();
        let rep = check_axioms(&a);
        if !(rep.a1a && rep.a1b && rep.market_compatible() && rep.cone) {
            continue;
        }
        let claims: Vec<RandomPortfolio> = (0..5)
            .map(|_| common::random_claim(&mut rng, n, d))
            .collect();
        let check = primal_dual_check(&a, &claims).unwrap();
        assert!(
            check.all_equal(),
            "primal/dual mismatch on instance {done} (d={d}, n={n})"
        );
        done += 1;
    }
    report(
        "2",
        "dual representation on 20 random coherent instances",
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_3_duality_kernel_soundness() {
    let start = Instant::now();
    let mut rng = common::rng(0x5eed_0003);

    for case in 0..100 {
        let d = 1 + (case % 6);
        let cone = common::random_solvency_cone(&mut rng, d);
        let p = cone.cone();

        // H <-> V round trip: rebuilding from either representation is exact
        let from_v = Polyhedron::from_vrep(p.vrep().clone());
        let from_h = Polyhedron::from_hrep(p.hrep().clone());
        assert_eq!(&from_v, p);
        assert_eq!(&from_h, p);
        assert!(p.same_set(&from_v).unwrap() && p.same_set(&from_h).unwrap());

        // dual-cone involution
        let dual = p.dual_cone(None).unwrap();
        assert_eq!(&dual.dual_cone(None).unwrap(), p);
    }

    // product-cone duality: the dual of the scenario cone is the product of
    // the blockwise duals, exactly
    for _ in 0..10 {
        let d = 2 + (rng.gen_bool_usize(2));
        let n = 2 + (rng.gen_bool_usize(3));
        let m = common::random_market(&mut rng, d, n);
        let sc = scenario_cone(&m);
        let dual = sc.dual_cone(None).unwrap();
        let mut rays = Vec::new();
        let mut lineality = Vec::new();
        for (w, k) in m.k_terminal.iter().enumerate() {
            let kd = k.dual();
            for r in &kd.vrep().rays {
                let mut v = conerisk::rational::zeros(n * d);
                v[w * d..(w + 1) * d].clone_from_slice(r);
                rays.push(v);
            }
            for l in &kd.vrep().lineality {
                let mut v = conerisk::rational::zeros(n * d);
                v[w * d..(w + 1) * d].clone_from_slice(l);
                lineality.push(v);
            }
        }
        let product =
            Polyhedron::from_vrep(conerisk::polyhedra::VRep::cone(n * d, rays, lineality));
        assert_eq!(dual, product);
    }

    report(
        "3",
        "duality kernel on 100 random cones",
        start,
        Duration::from_secs(30),
    );
}

// tiny helper so criterion 3 can vary sizes without an extra dependency
trait RangeExt {
    fn gen_bool_usize(&mut self, m: usize) -> usize;
}
impl RangeExt for rand_chacha::ChaCha8Rng {
    fn gen_bool_usize(&mut self, m: usize) -> usize {
        use rand::Rng;
        self.gen_range(0..m)
    }
}

#[test]
fn criterion_4_correspondence_suite() {
    let start = Instant::now();
    let mut rng = common::rng(0x5eed_0004);

    let m = testfix::toy_market();
    let wc = worst_case_acceptance(&m).unwrap();
    let pre = terminal_cone_acceptance(&m);

    // membership equivalence accepts(X) iff 0 in R(X), on sampled claims
    for _ in 0..20 {
        let x = common::random_claim(&mut rng, 3, 2);
        for a in [&wc, &pre] {
            let zero = conerisk::rational::zeros(2);
            assert_eq!(
                accepts(a, &x).unwrap(),
                evaluate(a, &x).unwrap().contains_m(&zero).unwrap()
            );
        }
    }

    // exact translativity and monotonicity via the harness
    let claims = vec![
        testfix::toy_claim(),
        common::random_claim(&mut rng, 3, 2),
        common::random_claim(&mut rng, 3, 2),
    ];
    let shifts = vec![qvec(&[3, -1]), qvec(&[0, 5]), common::rat_vec(&mut rng, 2)];
    for a in [&wc, &pre] {
        let rep = axiom_harness(a, &claims, &shifts).unwrap();
        assert!(rep.translative, "{:?}", rep.failures);
        assert!(rep.monotone);
        assert!(rep.graph_identity);
    }

    // the incompatibility verdict: eligible initially, rejected terminally
    let bad = terminal_cone_acceptance(&testfix::incompatible_market());
    let rep = check_axioms(&bad);
    assert!(rep.kt_compatible);
    assert!(!rep.ki_compatible);
    let witness = RandomPortfolio::constant(2, &testfix::incompatible_witness());
    assert!(!accepts(&bad, &witness).unwrap());
    assert!(accepts(&bad, &RandomPortfolio::zero(2, 2)).unwrap());

    report(
        "4",
        "correspondence and incompatibility",
        start,
        Duration::from_secs(10),
    );
}

/// Independent replication oracle for a binary frictionless tree: one-step
/// martingale weights from the asset-2 prices, backward induction on cash
/// values. No polyhedral code involved.
fn binary_replication_price(tree: &ScenarioTree, prices: &[Rat], leaf_cash: &[Rat]) -> Rat {
    let leaves = tree.leaves();
    let mut value: Vec<Option<Rat>> = vec![None; tree.len()];
    for (pos, &leaf) in leaves.iter().enumerate() {
        value[leaf] = Some(leaf_cash[pos].clone());
    }
    for v in (0..tree.len()).rev() {
        if tree.is_leaf(v) {
            continue;
        }
        let ch = tree.children(v);
        assert_eq!(ch.len(), 2, "oracle supports binary trees");
        let (up, dn) = (ch[0], ch[1]);
        let q = (&prices[v] - &prices[dn]) / (&prices[up] - &prices[dn]);
        let val = &q * value[up].as_ref().unwrap()
            + (Rat::from_integer(1.into()) - &q) * value[dn].as_ref().unwrap();
        value[v] = Some(val);
    }
    value[0].clone().unwrap()
}

#[test]
fn criterion_5_superhedging_consistency() {
    let start = Instant::now();

    // (a) one-period tree equals the worst-case risk set on the toy fixture
    let m = testfix::toy_market();
    let tree = ScenarioTree::one_period(&m);
    let claim: Vec<QVec> = testfix::toy_claim().neg().values().to_vec();
    let sh = superhedge_set(&tree, &claim).unwrap();
    let wc = worst_case_acceptance(&m).unwrap();
    let risk = evaluate(&wc, &testfix::toy_claim()).unwrap();
    assert_eq!(&sh, risk.single_m());

    // (b) primal = dual on randomized two-period trees; the generator
    // guarantees a strictly consistent process, and superhedge_dual refuses
    // on its own if that precondition ever failed
    let mut rng = common::rng(0x5eed_0005);
    for case in 0..10 {
        let (d, branching) = match case % 3 {
            0 => (2, 2),
            1 => (2, 3),
            _ => (3, 2),
        };
        let tree = common::random_two_period_tree(&mut rng, d, branching);
        let leaves = tree.leaves().len();
        for _ in 0..2 {
            let x: Vec<QVec> = (0..leaves).map(|_| common::rat_vec(&mut rng, d)).collect();
            let primal = superhedge_set(&tree, &x).unwrap();
            let dual = superhedge_dual(&tree, &x).unwrap();
            assert_eq!(primal, dual, "superhedge mismatch on tree {case}");
        }
    }
    // the strict no-arbitrage test itself passes on the one-period fixture
    assert!(strict_cpp_exists(&tree));

    // (c) binary frictionless tree: boundary matches the replication price
    let doc = fixture("bin2.json");
    let bin = doc.tree().unwrap();
    let call = &doc.claim("call").unwrap().values;
    let prices = vec![
        rat(1),
        rat(2),
        ratio(1, 2),
        rat(4),
        rat(1),
        rat(1),
        ratio(1, 4),
    ];
    let leaf_cash: Vec<Rat> = bin
        .leaves()
        .iter()
        .enumerate()
        .map(|(pos, &leaf)| call[pos][0].clone() + &prices[leaf] * &call[pos][1])
        .collect();
    let p0 = binary_replication_price(bin, &prices, &leaf_cash);
    assert_eq!(p0, ratio(1, 3));
    let sh = superhedge_set(bin, call).unwrap();
    let expected = Polyhedron::halfspace(vec![rat(1), prices[0].clone()], p0);
    assert_eq!(sh, expected);
    assert_eq!(superhedge_dual(bin, call).unwrap(), sh);

    report(
        "5",
        "superhedging primal/dual and replication",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_var_avar_behavior() {
    let start = Instant::now();
    let m = testfix::toy_market();

    // V@R at level zero is the pre-augmentation worst-case acceptance set
    let v0 = var_acceptance(&m, &rat(0), None, false).unwrap();
    assert_eq!(v0.regions(), terminal_cone_acceptance(&m).regions());
    let x = testfix::toy_claim();
    let r0 = evaluate(&v0, &x).unwrap();
    assert_eq!(
        r0.single_m(),
        evaluate(&terminal_cone_acceptance(&m), &x)
            .unwrap()
            .single_m()
    );

    // non-convexity certificate: two members, a convex combination escapes
    let v13 = var_acceptance(&m, &ratio(1, 3), None, false).unwrap();
    let risk = evaluate(&v13, &x).unwrap();
    let u1 = qvec(&[0, 8]);
    let u2 = qvec(&[7, 0]);
    let mid = vec![ratio(7, 2), rat(4)];
    assert!(risk.contains_m(&u1).unwrap());
    assert!(risk.contains_m(&u2).unwrap());
    assert!(!risk.contains_m(&mid).unwrap());
    assert!(!check_axioms(&v13).convex);

    // single-scenario average value at risk at lambda = 1: -X + orthant
    let single = testfix::single_scenario_market();
    let (a, _) = avar_acceptance(&single, &[rat(1), rat(1)]).unwrap();
    let xs = RandomPortfolio::new(vec![qvec(&[5, -3])]);
    let r = evaluate(&a, &xs).unwrap();
    let expected = Polyhedron::orthant(2).translate(&qvec(&[-5, 3])).unwrap();
    assert_eq!(r.single_m(), &expected);

    // the toy market's dual family is empty for every lambda: refused
    assert_eq!(
        avar_acceptance(&m, &[rat(1), rat(1)]).unwrap_err(),
        AcceptanceError::EmptyDualSet
    );

    // no-arbitrage precheck holds on the fixtures used above
    assert!(no_arbitrage(&m));
    assert!(no_arbitrage(&single));

    report(
        "6",
        "value-at-risk families",
        start,
        Duration::from_secs(10),
    );
}
