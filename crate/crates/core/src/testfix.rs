//! Shared fixtures for unit tests.

use crate::market::{
    frictionless_cone, EligibleSpace, OnePeriodMarket, RandomPortfolio, ScenarioSpace, SolvencyCone,
};
use crate::polyhedra::{HRep, Polyhedron};
use crate::rational::{qvec, rat, ratio, QVec};

/// Two assets, three scenarios, one-to-one initial exchange and scenario
/// dependent frictionless terminal rates; uniform probabilities; M = R^2.
pub fn toy_market() -> OnePeriodMarket {
    let ki = frictionless_cone(&qvec(&[1, 1])).unwrap();
    let kt = vec![
        frictionless_cone(&qvec(&[1, 2])).unwrap(),
        frictionless_cone(&qvec(&[1, 1])).unwrap(),
        frictionless_cone(&[rat(1), ratio(1, 2)]).unwrap(),
    ];
    OnePeriodMarket::new(ScenarioSpace::uniform(3), ki, kt, EligibleSpace::full(2)).unwrap()
}

/// The claim evaluated throughout the toy example.
pub fn toy_claim() -> RandomPortfolio {
    RandomPortfolio::new(vec![qvec(&[-16, 0]), qvec(&[1, 0]), qvec(&[-7, 0])])
}

/// All cones equal to the nonnegative orthant: no trading at all.
pub fn illiquid_market(d: usize, n: usize) -> OnePeriodMarket {
    let k = SolvencyCone::new(Polyhedron::orthant(d)).unwrap();
    OnePeriodMarket::new(
        ScenarioSpace::uniform(n),
        k.clone(),
        vec![k; n],
        EligibleSpace::full(d),
    )
    .unwrap()
}

/// One scenario, orthant cones, M = R^2.
pub fn single_scenario_market() -> OnePeriodMarket {
    illiquid_market(2, 1)
}

/// Initial cone allows a trade the terminal cones never accept, so the
/// plain terminal-cone acceptance set fails initial-cone compatibility.
pub fn incompatible_market() -> OnePeriodMarket {
    let ki = SolvencyCone::new(Polyhedron::from_hrep(
        HRep::new(2)
            .ineq(qvec(&[2, 1]), rat(0))
            .ineq(qvec(&[0, 1]), rat(0)),
    ))
    .unwrap();
    let kt = SolvencyCone::new(Polyhedron::from_hrep(
        HRep::new(2)
            .ineq(qvec(&[1, 2]), rat(0))
            .ineq(qvec(&[1, 0]), rat(0)),
    ))
    .unwrap();
    OnePeriodMarket::new(
        ScenarioSpace::uniform(2),
        ki,
        vec![kt.clone(), kt],
        EligibleSpace::full(2),
    )
    .unwrap()
}

/// The eligible portfolio from the incompatibility example: inside K_I but
/// outside every terminal cone.
pub fn incompatible_witness() -> QVec {
    qvec(&[-1, 4])
}
