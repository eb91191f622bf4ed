//! Acceptance sets over scenario space: polyhedral regions (or finite unions
//! for value at risk), axiom reports, market augmentation, and the concrete
//! families: worst-case, V@R, AV@R.

use crate::lp::{feasible_point, strict_feasible};
use crate::market::{
    embedded_eligible_cone, scenario_cone, MarketError, OnePeriodMarket, RandomPortfolio,
};
use crate::polyhedra::{Constraint, GeomError, HRep, Polyhedron};
use crate::rational::{dot, zeros, QMat, QVec, Rat};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AcceptanceError {
    #[error("operation not defined on acceptance-set unions; use the per-member variant")]
    UnionNotSupported,
    #[error("scenario-set condition violated: {0}")]
    AxiomViolation(String),
    #[error("lambda components must lie in (0, 1]")]
    LambdaOutOfRange,
    #[error(
        "no admissible dual variable: every candidate weight is orthogonal to the eligible space"
    )]
    EmptyDualSet,
    #[error("subset enumeration supports at most {0} scenarios")]
    TooManyScenarios(usize),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Market(#[from] MarketError),
}

/// A set of acceptable terminal portfolios, kept as one polyhedron in
/// flattened scenario coordinates or a finite union of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptanceSet {
    market: OnePeriodMarket,
    regions: Vec<Polyhedron>,
}

impl AcceptanceSet {
    pub fn single(market: OnePeriodMarket, region: Polyhedron) -> Self {
        assert_eq!(region.dim(), market.scenario_dim());
        AcceptanceSet {
            market,
            regions: vec![region],
        }
    }

    /// Build a union; empty members are dropped and duplicates merged.
    pub fn union(market: OnePeriodMarket, regions: Vec<Polyhedron>) -> Self {
        let mut kept: Vec<Polyhedron> = Vec::new();
        for r in regions {
            assert_eq!(r.dim(), market.scenario_dim());
            if !r.is_empty() && !kept.contains(&r) {
                kept.push(r);
            }
        }
        if kept.is_empty() {
            kept.push(Polyhedron::empty(market.scenario_dim()));
        }
        AcceptanceSet {
            market,
            regions: kept,
        }
    }

    pub fn market(&self) -> &OnePeriodMarket {
        &self.market
    }

    pub fn regions(&self) -> &[Polyhedron] {
        &self.regions
    }

    pub fn is_union(&self) -> bool {
        self.regions.len() > 1
    }

    /// The single region of a non-union set.
    pub fn region(&self) -> Result<&Polyhedron, AcceptanceError> {
        if self.is_union() {
            return Err(AcceptanceError::UnionNotSupported);
        }
        Ok(&self.regions[0])
    }

    pub fn contains(&self, x: &RandomPortfolio) -> Result<bool, AcceptanceError> {
        let flat = x.flatten();
        for r in &self.regions {
            if r.contains(&flat)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The terminal-trading acceptance set {X : X(w) in K_T(w) a.s.}.
pub fn terminal_cone_acceptance(m: &OnePeriodMarket) -> AcceptanceSet {
    AcceptanceSet::single(m.clone(), scenario_cone(m))
}

/// Exact axiom report for an acceptance set. On unions the convexity flag is
/// decided for the union itself (hull comparison); monotonicity and the two
/// compatibility flags are evaluated member-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// some deterministic portfolio is accepted
    pub nonempty_det: bool,
    /// some deterministic portfolio is rejected
    pub proper_det: bool,
    /// adding componentwise-nonnegative noise keeps positions acceptable
    pub monotone: bool,
    /// some eligible portfolio is accepted
    pub a1a: bool,
    /// some eligible portfolio is rejected
    pub a1b: bool,
    pub convex: bool,
    pub cone: bool,
    pub kt_compatible: bool,
    pub ki_compatible: bool,
}

impl AxiomReport {
    pub fn is_acceptance_set(&self) -> bool {
        self.nonempty_det && self.proper_det && self.monotone
    }

    pub fn market_compatible(&self) -> bool {
        self.kt_compatible && self.ki_compatible
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.nonempty_det {
            v.push("no deterministic portfolio is accepted");
        }
        if !self.proper_det {
            v.push("every deterministic portfolio is accepted");
        }
        if !self.monotone {
            v.push("not monotone under componentwise dominance");
        }
        if !self.a1a {
            v.push("no eligible portfolio is accepted (A1a)");
        }
        if !self.a1b {
            v.push("every eligible portfolio is accepted (A1b)");
        }
        v
    }
}

/// Matrix of the embedding u -> (u, u, ..., u) from R^d into R^{n*d}.
fn repeat_identity(n: usize, d: usize) -> QMat {
    let mut rows = Vec::with_capacity(n * d);
    for _ in 0..n {
        for j in 0..d {
            let mut r = zeros(d);
            r[j] = Rat::one();
            rows.push(r);
        }
    }
    rows
}

/// {x in R^k : map x (flattened) lies in the region}.
fn embedding_preimage(region: &Polyhedron, map_rows: &QMat, k: usize) -> Polyhedron {
    let nd = region.dim();
    region
        .affine_preimage(map_rows, &zeros(nd), k)
        .expect("embedding has matching dimensions")
}

/// Does the union of the members cover `within` (the whole space if None)?
/// Decided exactly: a point outside every member, if one exists, is found by
/// enumerating one violated constraint per member and solving a strict
/// feasibility program.
fn union_covers(members: &[Polyhedron], within: Option<&Polyhedron>) -> bool {
    // options per member: strict rows (normal, offset) meaning normal.x > offset
    let mut choices: Vec<Vec<Constraint>> = Vec::new();
    for mem in members {
        if mem.is_empty() {
            continue; // violating an empty member is free
        }
        let h = mem.hrep();
        if h.inequalities.is_empty() && h.equalities.is_empty() {
            return true; // a whole-space member covers everything
        }
        let mut opts = Vec::new();
        for c in &h.inequalities {
            opts.push(Constraint::new(
                crate::rational::neg(&c.normal),
                -c.offset.clone(),
            ));
        }
        for c in &h.equalities {
            opts.push(Constraint::new(
                crate::rational::neg(&c.normal),
                -c.offset.clone(),
            ));
            opts.push(c.clone());
        }
        choices.push(opts);
    }
    if choices.is_empty() {
        // no nonempty member: covered only if the ambient set is empty
        return within.is_some_and(|p| p.is_empty());
    }
    let dim = members[0].dim();
    let mut index = vec![0usize; choices.len()];
    loop {
        let mut h = HRep::new(dim);
        for (m, &i) in index.iter().enumerate() {
            let c = &choices[m][i];
            h.inequalities.push(c.clone());
        }
        let strict: Vec<usize> = (0..h.inequalities.len()).collect();
        if let Some(p) = within {
            h = h.concat(p.hrep());
        }
        if strict_feasible(&h, &strict).is_some() {
            return false;
        }
        // next tuple
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return true;
            }
            index[pos] += 1;
            if index[pos] < choices[pos].len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Convex hull of a finite union.
fn union_hull(members: &[Polyhedron]) -> Polyhedron {
    let dim = members[0].dim();
    let mut v = crate::polyhedra::VRep::new(dim);
    for m in members {
        v.vertices.extend(m.vrep().vertices.iter().cloned());
        v.rays.extend(m.vrep().rays.iter().cloned());
        v.lineality.extend(m.vrep().lineality.iter().cloned());
    }
    Polyhedron::from_vrep(v)
}

pub fn check_axioms(a: &AcceptanceSet) -> AxiomReport {
    let m = a.market();
    let n = m.scenarios();
    let d = m.assets();
    let members = a.regions();

    let det_map = repeat_identity(n, d);
    let det_pre: Vec<Polyhedron> = members
        .iter()
        .map(|r| embedding_preimage(r, &det_map, d))
        .collect();
    let elig_map = crate::market::eligible_embedding_matrix(m);
    let elig_pre: Vec<Polyhedron> = members
        .iter()
        .map(|r| embedding_preimage(r, &elig_map, m.eligible.rank()))
        .collect();

    let nonempty_det = det_pre.iter().any(|p| feasible_point(p.hrep()).is_some());
    let proper_det = !union_covers(&det_pre, None);
    let a1a = elig_pre.iter().any(|p| feasible_point(p.hrep()).is_some());
    let a1b = !union_covers(&elig_pre, None);

    let orthant = Polyhedron::orthant(m.scenario_dim());
    let monotone = members.iter().all(|r| {
        orthant
            .subset(&r.recession_cone())
            .expect("dimensions agree")
    });

    let convex = if members.len() == 1 {
        true
    } else {
        union_covers(members, Some(&union_hull(members)))
    };
    let cone = members.iter().all(|r| r.is_cone());

    let sc = scenario_cone(m);
    let kt_compatible = members
        .iter()
        .all(|r| sc.subset(&r.recession_cone()).expect("dimensions agree"));
    let ki_compatible = match embedded_eligible_cone(m) {
        Ok(kc) => members
            .iter()
            .all(|r| kc.subset(&r.recession_cone()).expect("dimensions agree")),
        Err(_) => false,
    };

    AxiomReport {
        nonempty_det,
        proper_det,
        monotone,
        a1a,
        a1b,
        convex,
        cone,
        kt_compatible,
        ki_compatible,
    }
}

/// Market augmentation A + L(K_T) + K_I^M 1 of a single-region set. Sums of
/// finitely generated sets are closed, so no closure step is needed.
pub fn augment(a: &AcceptanceSet) -> Result<AcceptanceSet, AcceptanceError> {
    let region = a.region()?;
    let m = a.market();
    let augmented = region
        .minkowski_sum(&scenario_cone(m))?
        .minkowski_sum(&embedded_eligible_cone(m)?)?;
    Ok(AcceptanceSet::single(m.clone(), augmented))
}

/// Member-wise augmentation of a union.
pub fn augment_union(a: &AcceptanceSet) -> Result<AcceptanceSet, AcceptanceError> {
    let m = a.market();
    let sc = scenario_cone(m);
    let kc = embedded_eligible_cone(m)?;
    let regions = a
        .regions()
        .iter()
        .map(|r| Ok(r.minkowski_sum(&sc)?.minkowski_sum(&kc)?))
        .collect::<Result<Vec<_>, AcceptanceError>>()?;
    Ok(AcceptanceSet::union(m.clone(), regions))
}

/// The smallest market-compatible acceptance set: L(K_T) + K_I^M 1.
pub fn worst_case_acceptance(m: &OnePeriodMarket) -> Result<AcceptanceSet, AcceptanceError> {
    let region = scenario_cone(m).minkowski_sum(&embedded_eligible_cone(m)?)?;
    Ok(AcceptanceSet::single(m.clone(), region))
}

/// No-arbitrage for the one-period market: positions reachable at zero cost,
/// (L(K_T) + K_I 1), meet the nonpositive orthant only in zero.
pub fn no_arbitrage(m: &OnePeriodMarket) -> bool {
    let d = m.assets();
    let n = m.scenarios();
    let embed = repeat_identity(n, d);
    let ki_embedded = m
        .k_initial
        .cone()
        .linear_image(&embed)
        .expect("embedding has matching dimensions");
    let reachable = scenario_cone(m)
        .minkowski_sum(&ki_embedded)
        .expect("dimensions agree");
    let neg_orthant = Polyhedron::orthant(n * d).negate();
    let meet = reachable.intersect(&neg_orthant).expect("dimensions agree");
    meet.is_zero_cone()
}

/// Scenario-wise tolerance sets for value at risk with their axioms checked:
/// nonempty, containing the nonnegative orthant, disjoint from the negative
/// open orthant, and closed under adding nonnegative positions.
fn check_var_tolerance(d_alpha: &[Polyhedron], d: usize) -> Result<(), AcceptanceError> {
    let orthant = Polyhedron::orthant(d);
    for (w, dw) in d_alpha.iter().enumerate() {
        if dw.is_empty() {
            return Err(AcceptanceError::AxiomViolation(format!(
                "(D0) tolerance set in scenario {w} is empty"
            )));
        }
        if !orthant.subset(dw).expect("dimensions agree") {
            return Err(AcceptanceError::AxiomViolation(format!(
                "(D1a) tolerance set in scenario {w} misses the nonnegative orthant"
            )));
        }
        // (D1b): no point with all coordinates strictly negative
        let mut h = dw.hrep().clone();
        let start = h.inequalities.len();
        for j in 0..d {
            let mut nrm = zeros(d);
            nrm[j] = -Rat::one();
            h.inequalities.push(Constraint::homogeneous(nrm));
        }
        let strict: Vec<usize> = (start..start + d).collect();
        if strict_feasible(&h, &strict).is_some() {
            return Err(AcceptanceError::AxiomViolation(format!(
                "(D1b) tolerance set in scenario {w} meets the open negative orthant"
            )));
        }
        if !orthant
            .subset(&dw.recession_cone())
            .expect("dimensions agree")
        {
            return Err(AcceptanceError::AxiomViolation(format!(
                "(D2) tolerance set in scenario {w} is not closed under adding nonnegative positions"
            )));
        }
    }
    Ok(())
}

const MAX_VAR_SCENARIOS: usize = 16;

/// Value at risk acceptance set at level alpha: the union over
/// inclusion-minimal scenario sets S with P(S) >= 1 - alpha of
/// {X : X(w) in D(w) for all w in S}. `d_alpha` defaults to the terminal
/// cones; `ki_augment` adds K_I^M 1 to every member.
pub fn var_acceptance(
    m: &OnePeriodMarket,
    alpha: &Rat,
    d_alpha: Option<Vec<Polyhedron>>,
    ki_augment: bool,
) -> Result<AcceptanceSet, AcceptanceError> {
    if alpha.is_negative() || alpha > &Rat::one() {
        return Err(AcceptanceError::AxiomViolation(
            "alpha must lie in [0, 1]".into(),
        ));
    }
    let n = m.scenarios();
    let d = m.assets();
    if n > MAX_VAR_SCENARIOS {
        return Err(AcceptanceError::TooManyScenarios(MAX_VAR_SCENARIOS));
    }
    let tolerance: Vec<Polyhedron> = match d_alpha {
        Some(v) => {
            if v.len() != n || v.iter().any(|p| p.dim() != d) {
                return Err(AcceptanceError::Market(MarketError::ShapeMismatch));
            }
            v
        }
        None => m.k_terminal.iter().map(|k| k.cone().clone()).collect(),
    };
    check_var_tolerance(&tolerance, d)?;

    let threshold = Rat::one() - alpha;
    let prob_of = |mask: u32| -> Rat {
        let mut p = Rat::zero();
        for w in 0..n {
            if mask & (1 << w) != 0 {
                p += m.space.prob(w);
            }
        }
        p
    };

    let mut members = Vec::new();
    for mask in 0..(1u32 << n) {
        if prob_of(mask) < threshold {
            continue;
        }
        // inclusion-minimal: dropping any scenario falls below the threshold
        let minimal = (0..n)
            .filter(|w| mask & (1 << w) != 0)
            .all(|w| prob_of(mask & !(1 << w)) < threshold);
        if !minimal {
            continue;
        }
        let mut h = HRep::new(n * d);
        for w in 0..n {
            if mask & (1 << w) == 0 {
                continue;
            }
            for c in &tolerance[w].hrep().inequalities {
                let mut nrm = zeros(n * d);
                nrm[w * d..(w + 1) * d].clone_from_slice(&c.normal);
                h.inequalities.push(Constraint::new(nrm, c.offset.clone()));
            }
            for c in &tolerance[w].hrep().equalities {
                let mut nrm = zeros(n * d);
                nrm[w * d..(w + 1) * d].clone_from_slice(&c.normal);
                h.equalities.push(Constraint::new(nrm, c.offset.clone()));
            }
        }
        members.push(Polyhedron::from_hrep(h));
    }

    if ki_augment {
        let kc = embedded_eligible_cone(m)?;
        members = members
            .into_iter()
            .map(|r| r.minkowski_sum(&kc))
            .collect::<Result<Vec<_>, _>>()?;
    }
    Ok(AcceptanceSet::union(m.clone(), members))
}

/// The polyhedral cone of admissible dual masses for AV@R at level lambda:
/// Z with Z(w) in K_T^+(w), the tail-bound rows, and sum Z in K_I^+ + M_perp.
pub fn avar_dual_mass_cone(
    m: &OnePeriodMarket,
    lambda: &[Rat],
) -> Result<Polyhedron, AcceptanceError> {
    let d = m.assets();
    let n = m.scenarios();
    if lambda.len() != d {
        return Err(AcceptanceError::Market(MarketError::ShapeMismatch));
    }
    if lambda.iter().any(|l| !l.is_positive() || l > &Rat::one()) {
        return Err(AcceptanceError::LambdaOutOfRange);
    }
    let mu: QVec = lambda.iter().map(|l| l.recip()).collect();
    let nd = n * d;
    let mut h = HRep::new(nd);

    let duals: Vec<Polyhedron> = m.k_terminal.iter().map(|k| k.dual()).collect();
    for (w, dual) in duals.iter().enumerate() {
        // block membership Z(w) in K_T^+(w)
        for c in &dual.hrep().inequalities {
            let mut nrm = zeros(nd);
            nrm[w * d..(w + 1) * d].clone_from_slice(&c.normal);
            h.inequalities.push(Constraint::homogeneous(nrm));
        }
        for c in &dual.hrep().equalities {
            let mut nrm = zeros(nd);
            nrm[w * d..(w + 1) * d].clone_from_slice(&c.normal);
            h.equalities.push(Constraint::homogeneous(nrm));
        }
        // tail bound: diag(mu) sum_v Z(v) - Z(w)/p_w in K_T^+(w)
        let pw = m.space.prob(w);
        let push_row = |c: &Constraint| -> QVec {
            let mut nrm = zeros(nd);
            for v in 0..n {
                for j in 0..d {
                    let mut coef = &c.normal[j] * &mu[j];
                    if v == w {
                        coef -= &c.normal[j] / pw;
                    }
                    nrm[v * d + j] = coef;
                }
            }
            nrm
        };
        for c in &dual.hrep().inequalities {
            h.inequalities.push(Constraint::homogeneous(push_row(c)));
        }
        for c in &dual.hrep().equalities {
            h.equalities.push(Constraint::homogeneous(push_row(c)));
        }
    }

    // weight condition: sum_w Z(w) in K_I^+ + M_perp
    let ki_dual = m.k_initial.dual();
    let mperp_cone = Polyhedron::cone_from_generators(d, Vec::new(), m.eligible.orthocomplement());
    let weight_cone = ki_dual.minkowski_sum(&mperp_cone)?;
    for c in &weight_cone.hrep().inequalities {
        let mut nrm = zeros(nd);
        for v in 0..n {
            nrm[v * d..(v + 1) * d].clone_from_slice(&c.normal);
        }
        h.inequalities.push(Constraint::homogeneous(nrm));
    }
    for c in &weight_cone.hrep().equalities {
        let mut nrm = zeros(nd);
        for v in 0..n {
            nrm[v * d..(v + 1) * d].clone_from_slice(&c.normal);
        }
        h.equalities.push(Constraint::homogeneous(nrm));
    }

    Ok(Polyhedron::from_hrep(h))
}

/// AV@R acceptance set: the dual cone of the admissible-mass cone. Fails
/// with `EmptyDualSet` when no admissible mass has a weight outside the
/// orthocomplement of the eligible space.
pub fn avar_acceptance(
    m: &OnePeriodMarket,
    lambda: &[Rat],
) -> Result<(AcceptanceSet, Polyhedron), AcceptanceError> {
    let d = m.assets();
    let n = m.scenarios();
    let mass_cone = avar_dual_mass_cone(m, lambda)?;
    let admissible = mass_cone.vrep().rays.iter().any(|z| {
        let mut sum = zeros(d);
        for w in 0..n {
            for j in 0..d {
                sum[j] += &z[w * d + j];
            }
        }
        !m.eligible.basis().iter().all(|b| dot(b, &sum).is_zero())
    });
    if !admissible {
        return Err(AcceptanceError::EmptyDualSet);
    }
    let region = mass_cone.dual_cone(None)?;
    Ok((AcceptanceSet::single(m.clone(), region), mass_cone))
}
