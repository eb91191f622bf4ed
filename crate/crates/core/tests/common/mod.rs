//! Deterministic random-instance generation shared by the integration
//! suites. Everything is seeded, so failures reproduce exactly.
#![allow(dead_code)] // each test binary uses its own subset
#![allow(clippy::needless_range_loop)]

use conerisk::market::{
    EligibleSpace, OnePeriodMarket, RandomPortfolio, ScenarioSpace, SolvencyCone,
};
use conerisk::polyhedra::{Polyhedron, VRep};
use conerisk::rational::{QVec, Rat};
use conerisk::superhedge::{ScenarioTree, TreeNode};
use num::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=3);
    Rat::new(num.into(), den.into())
}

pub fn positive_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(1i64..=4);
    let den = rng.gen_range(1i64..=3);
    Rat::new(num.into(), den.into())
}

pub fn rat_vec(rng: &mut ChaCha8Rng, d: usize) -> QVec {
    (0..d).map(|_| small_rat(rng)).collect()
}

/// A random solvency cone: the orthant plus a few mixed-sign rays, rejected
/// when it degenerates to the whole space. In one dimension the orthant is
/// the only admissible cone.
pub fn random_solvency_cone(rng: &mut ChaCha8Rng, d: usize) -> SolvencyCone {
    if d == 1 {
        return SolvencyCone::new(Polyhedron::orthant(1)).expect("halfline is a cone");
    }
    loop {
        let mut rays = conerisk::linalg::identity(d);
        let extras = rng.gen_range(1..=d);
        for _ in 0..extras {
            let mut v: QVec = rat_vec(rng, d);
            // force at least one negative component so the ray adds a trade
            if v.iter().all(|c| !num::Signed::is_negative(c)) {
                let i = rng.gen_range(0..d);
                v[i] = -positive_rat(rng);
            }
            rays.push(v);
        }
        let p = Polyhedron::from_vrep(VRep::cone(d, rays, Vec::new()));
        if !p.is_whole_space() {
            return SolvencyCone::new(p).expect("generated set is a cone");
        }
    }
}

pub fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> ScenarioSpace {
    let weights: Vec<Rat> = (0..n).map(|_| positive_rat(rng)).collect();
    let total: Rat = weights.iter().sum();
    ScenarioSpace::new(weights.into_iter().map(|w| w / &total).collect())
        .expect("positive weights normalize")
}

/// A random eligible subspace guaranteed to meet the nonnegative orthant:
/// full space, or the span of a nonnegative vector plus an optional extra.
pub fn random_eligible(rng: &mut ChaCha8Rng, d: usize) -> EligibleSpace {
    if rng.gen_bool(0.5) {
        return EligibleSpace::full(d);
    }
    loop {
        let nonneg: QVec = (0..d)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Rat::one() * positive_rat(rng)
                } else {
                    Rat::new(0.into(), 1.into())
                }
            })
            .collect();
        if nonneg.iter().all(num::Zero::is_zero) {
            continue;
        }
        let mut basis = vec![nonneg];
        if d > 2 && rng.gen_bool(0.5) {
            basis.push(rat_vec(rng, d));
        }
        if let Ok(e) = EligibleSpace::new(d, basis) {
            if e.meets_orthant() {
                return e;
            }
        }
    }
}

/// A random market passing every validity check.
pub fn random_market(rng: &mut ChaCha8Rng, d: usize, n: usize) -> OnePeriodMarket {
    loop {
        let space = random_probs(rng, n);
        let ki = random_solvency_cone(rng, d);
        let kt: Vec<SolvencyCone> = (0..n).map(|_| random_solvency_cone(rng, d)).collect();
        let eligible = random_eligible(rng, d);
        let Ok(m) = OnePeriodMarket::new(space, ki, kt, eligible) else {
            continue;
        };
        if conerisk::market::validate_market(&m).is_empty() {
            return m;
        }
    }
}

pub fn random_claim(rng: &mut ChaCha8Rng, n: usize, d: usize) -> RandomPortfolio {
    RandomPortfolio::new((0..n).map(|_| rat_vec(rng, d)).collect())
}

/// Strictly positive price vector with small rational entries.
pub fn random_prices(rng: &mut ChaCha8Rng, d: usize) -> QVec {
    (0..d).map(|_| positive_rat(rng)).collect()
}

/// A solvency cone whose dual contains the given price vector: either the
/// frictionless halfspace of those prices or a bid-ask cone with rates
/// widened by random proportional costs.
pub fn cone_around_prices(rng: &mut ChaCha8Rng, prices: &QVec) -> SolvencyCone {
    let d = prices.len();
    if rng.gen_bool(0.5) {
        return SolvencyCone::new(Polyhedron::halfspace(prices.clone(), num::Zero::zero()))
            .expect("halfspace is a cone");
    }
    let mut rays = conerisk::linalg::identity(d);
    for i in 0..d {
        for j in 0..d {
            if i == j || rng.gen_bool(0.25) {
                continue; // occasionally leave a pair illiquid
            }
            // strictly positive spread keeps the prices in the relative
            // interior of the dual cone
            let theta = Rat::new(rng.gen_range(1i64..=3).into(), 2.into());
            let rate = &prices[j] / &prices[i] * (Rat::one() + theta);
            let mut g: QVec = vec![num::Zero::zero(); d];
            g[i] = rate;
            g[j] = -Rat::one();
            rays.push(g);
        }
    }
    SolvencyCone::new(Polyhedron::from_vrep(VRep::cone(d, rays, Vec::new())))
        .expect("generated set is a cone")
}

/// A random market built around a consistent price system: terminal prices
/// are random and the initial price is their expectation, so a strictly
/// consistent pricing process exists by construction and the worst-case
/// acceptance set is proper.
pub fn random_consistent_market(rng: &mut ChaCha8Rng, d: usize, n: usize) -> OnePeriodMarket {
    loop {
        let space = random_probs(rng, n);
        let terminal_prices: Vec<QVec> = (0..n).map(|_| random_prices(rng, d)).collect();
        let mut initial = vec![Rat::new(0.into(), 1.into()); d];
        for (p, s) in space.probs().iter().zip(&terminal_prices) {
            for (acc, si) in initial.iter_mut().zip(s) {
                *acc += p * si;
            }
        }
        let ki = cone_around_prices(rng, &initial);
        let kt: Vec<SolvencyCone> = terminal_prices
            .iter()
            .map(|s| cone_around_prices(rng, s))
            .collect();
        let eligible = random_eligible(rng, d);
        let Ok(m) = OnePeriodMarket::new(space, ki, kt, eligible) else {
            continue;
        };
        if conerisk::market::validate_market(&m).is_empty() {
            return m;
        }
    }
}

/// A random two-period tree around a consistent price system: random leaf
/// prices, inner prices by childwise expectation, cones widened around the
/// node prices. A strictly consistent process exists by construction.
pub fn random_two_period_tree(rng: &mut ChaCha8Rng, d: usize, branching: usize) -> ScenarioTree {
    let b = branching as i64;
    let child_prob = Rat::new(1.into(), b.into());
    let total = 1 + branching + branching * branching;
    // indices: 0 root; 1..=branching level one; the rest leaves in order
    let mut prices: Vec<Option<QVec>> = vec![None; total];
    for leaf in (1 + branching)..total {
        prices[leaf] = Some(random_prices(rng, d));
    }
    for mid in (1..=branching).rev() {
        let mut avg = vec![Rat::new(0.into(), 1.into()); d];
        for k in 0..branching {
            let child = 1 + branching + (mid - 1) * branching + k;
            for (a, s) in avg.iter_mut().zip(prices[child].as_ref().unwrap()) {
                *a += &child_prob * s;
            }
        }
        prices[mid] = Some(avg);
    }
    let mut root_avg = vec![Rat::new(0.into(), 1.into()); d];
    for mid in 1..=branching {
        for (a, s) in root_avg.iter_mut().zip(prices[mid].as_ref().unwrap()) {
            *a += &child_prob * s;
        }
    }
    prices[0] = Some(root_avg);

    let mut nodes = vec![TreeNode {
        parent: None,
        prob: Rat::one(),
        cone: cone_around_prices(rng, prices[0].as_ref().unwrap()),
    }];
    for mid in 1..=branching {
        nodes.push(TreeNode {
            parent: Some(0),
            prob: child_prob.clone(),
            cone: cone_around_prices(rng, prices[mid].as_ref().unwrap()),
        });
    }
    for mid in 1..=branching {
        for k in 0..branching {
            let leaf = 1 + branching + (mid - 1) * branching + k;
            nodes.push(TreeNode {
                parent: Some(mid),
                prob: child_prob.clone(),
                cone: cone_around_prices(rng, prices[leaf].as_ref().unwrap()),
            });
        }
    }
    ScenarioTree::new(nodes).expect("constructed tree is well-formed")
}
