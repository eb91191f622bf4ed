//! Set-valued risk evaluation: primal risk sets, scalarization, dual
//! variables (vector probability measures with weight vectors), penalty
//! values, and the exact primal/dual comparison for coherent and convex
//! market-compatible acceptance sets.
//!
//! Conventions. Scenario-space vectors on the dual side are handled in
//! "mass" coordinates Z(w) = p_w Y(w), so E[X^T Y] is the plain inner
//! product of flattened vectors and dual cones computed by the geometry
//! kernel need no reweighting. Densities Y enter and leave through
//! [`DualPair`] and [`set_expectation`].

use crate::acceptance::{check_axioms, AcceptanceError, AcceptanceSet};
use crate::lp::{solve, support_value, LinearProgram, LpStatus, Sense, SupportValue};
use crate::market::{
    eligible_embedding_matrix, eligible_initial_cone, MarketError, OnePeriodMarket, RandomPortfolio,
};
use crate::polyhedra::{Constraint, GeomError, HRep, Polyhedron};
use crate::rational::{dot, sub, zeros, QVec, Rat};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RiskError {
    #[error("portfolio shape does not match the acceptance set's market")]
    ShapeMismatch,
    #[error("dual family is empty")]
    EmptyDualFamily,
    #[error("invalid dual variable: {0}")]
    InvalidDualVariable(String),
    #[error("acceptance region is not a cone")]
    NotACone,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Acceptance(#[from] AcceptanceError),
    #[error(transparent)]
    Market(#[from] MarketError),
}

/// Value of a set-valued risk measure: polyhedra in eligible-basis
/// coordinates together with their images in ambient asset coordinates.
/// A union carries one entry per member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiskSet {
    members_m: Vec<Polyhedron>,
    members_ambient: Vec<Polyhedron>,
}

impl RiskSet {
    pub fn new(m: &OnePeriodMarket, members_m: Vec<Polyhedron>) -> Self {
        let rows = m.eligible.matrix_rows();
        let mut kept: Vec<Polyhedron> = Vec::new();
        for r in members_m {
            if !r.is_empty() && !kept.contains(&r) {
                kept.push(r);
            }
        }
        if kept.is_empty() {
            kept.push(Polyhedron::empty(m.eligible.rank()));
        }
        let ambient = kept
            .iter()
            .map(|p| p.linear_image(&rows).expect("basis dimensions agree"))
            .collect();
        RiskSet {
            members_m: kept,
            members_ambient: ambient,
        }
    }

    /// Members in eligible-basis coordinates.
    pub fn members_m(&self) -> &[Polyhedron] {
        &self.members_m
    }

    /// The same members embedded into R^d.
    pub fn members_ambient(&self) -> &[Polyhedron] {
        &self.members_ambient
    }

    pub fn is_union(&self) -> bool {
        self.members_m.len() > 1
    }

    pub fn single_m(&self) -> &Polyhedron {
        assert!(!self.is_union(), "risk set is a union");
        &self.members_m[0]
    }

    pub fn is_empty(&self) -> bool {
        self.members_m.iter().all(|p| p.is_empty())
    }

    pub fn is_whole_m(&self) -> bool {
        self.members_m.iter().any(|p| p.is_whole_space())
    }

    pub fn contains_m(&self, z: &[Rat]) -> Result<bool, GeomError> {
        for p in &self.members_m {
            if p.contains(z)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Equality as sets of members (canonical polyhedra, order-free).
    pub fn same_as(&self, other: &RiskSet) -> bool {
        self.members_m.len() == other.members_m.len()
            && self.members_m.iter().all(|p| other.members_m.contains(p))
    }

    /// The translate R - u, all members shifted.
    pub fn shift_m(&self, m: &OnePeriodMarket, u: &[Rat]) -> RiskSet {
        let neg: QVec = u.iter().map(|c| -c).collect();
        let shifted = self
            .members_m
            .iter()
            .map(|p| p.translate(&neg).expect("dimensions agree"))
            .collect();
        RiskSet::new(m, shifted)
    }
}

/// R_A(X) = {u in M : X + u 1 in A}, exactly, in basis coordinates.
pub fn evaluate(a: &AcceptanceSet, x: &RandomPortfolio) -> Result<RiskSet, RiskError> {
    let m = a.market();
    if !x.matches(m) {
        return Err(RiskError::ShapeMismatch);
    }
    let rows = eligible_embedding_matrix(m);
    let flat = x.flatten();
    let members = a
        .regions()
        .iter()
        .map(|r| r.affine_preimage(&rows, &flat, m.eligible.rank()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RiskSet::new(m, members))
}

/// X is acceptable without extra endowment: 0 in R_A(X).
pub fn accepts(a: &AcceptanceSet, x: &RandomPortfolio) -> Result<bool, RiskError> {
    if !x.matches(a.market()) {
        return Err(RiskError::ShapeMismatch);
    }
    Ok(a.contains(x)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalarization {
    Finite(Rat),
    /// risk set empty: infimum over nothing
    PlusInfinity,
    /// risk set unbounded in the pricing direction
    MinusInfinity,
}

/// inf {v . u : u in R_A(X)} for an ambient pricing vector v.
pub fn scalarize(
    a: &AcceptanceSet,
    x: &RandomPortfolio,
    v: &[Rat],
) -> Result<Scalarization, RiskError> {
    let m = a.market();
    if v.len() != m.assets() {
        return Err(RiskError::ShapeMismatch);
    }
    let risk = evaluate(a, x)?;
    // v . (B z) = (B^T v) . z
    let obj: QVec = m.eligible.basis().iter().map(|b| dot(b, v)).collect();
    let mut best: Option<Rat> = None;
    for member in risk.members_m() {
        if member.is_empty() {
            continue;
        }
        let out = solve(&LinearProgram {
            objective: obj.clone(),
            constraints: member.hrep().clone(),
            sense: Sense::Minimize,
        });
        match out.status {
            LpStatus::Unbounded => return Ok(Scalarization::MinusInfinity),
            LpStatus::Optimal => {
                let val = out.value.expect("optimal value present");
                best = Some(match best {
                    None => val,
                    Some(b) => b.min(val),
                });
            }
            LpStatus::Infeasible => unreachable!("nonempty member"),
        }
    }
    Ok(best.map_or(Scalarization::PlusInfinity, Scalarization::Finite))
}

/// The halfspace-valued expectation {u in M : E[X^T Y] <= v . u} for a
/// density Y and a direction v in the eligible space; the whole space or the
/// empty set when v vanishes on M.
pub fn set_expectation(
    m: &OnePeriodMarket,
    y: &RandomPortfolio,
    v: &[Rat],
    x: &RandomPortfolio,
) -> Result<RiskSet, RiskError> {
    if !y.matches(m) || !x.matches(m) || v.len() != m.assets() {
        return Err(RiskError::ShapeMismatch);
    }
    if !m.eligible.contains(v) {
        return Err(RiskError::InvalidDualVariable(
            "direction v does not lie in the eligible space".into(),
        ));
    }
    let mdim = m.eligible.rank();
    let mut e = Rat::zero();
    for w in 0..m.scenarios() {
        e += m.space.prob(w) * dot(x.value(w), y.value(w));
    }
    let obj: QVec = m.eligible.basis().iter().map(|b| dot(b, v)).collect();
    let member = if obj.iter().all(|c| c.is_zero()) {
        if e.is_positive() {
            Polyhedron::empty(mdim)
        } else {
            Polyhedron::whole_space(mdim)
        }
    } else {
        Polyhedron::halfspace(obj, e)
    };
    Ok(RiskSet::new(m, vec![member]))
}

/// A vector probability measure with a weight vector. Column i of `q` is a
/// probability measure on the scenarios; `w` weighs the components. The
/// derived density is Y_i(w) = w_i q_i(w) / p_w, the derived mass is
/// Z_i(w) = w_i q_i(w).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPair {
    q: Vec<QVec>,
    w: QVec,
}

impl DualPair {
    pub fn new(m: &OnePeriodMarket, q: Vec<QVec>, w: QVec) -> Result<Self, RiskError> {
        let n = m.scenarios();
        let d = m.assets();
        if q.len() != n || q.iter().any(|row| row.len() != d) || w.len() != d {
            return Err(RiskError::ShapeMismatch);
        }
        for row in &q {
            if row.iter().any(|p| p.is_negative()) {
                return Err(RiskError::InvalidDualVariable(
                    "measure components must be nonnegative".into(),
                ));
            }
        }
        for i in 0..d {
            let total: Rat = q.iter().map(|row| row[i].clone()).sum();
            if !total.is_one() {
                return Err(RiskError::InvalidDualVariable(format!(
                    "component measure {i} has total mass {total}, expected 1"
                )));
            }
        }
        let pair = DualPair { q, w };
        pair.validate_against(m)?;
        Ok(pair)
    }

    fn validate_against(&self, m: &OnePeriodMarket) -> Result<(), RiskError> {
        if m.eligible.basis().iter().all(|b| dot(b, &self.w).is_zero()) {
            return Err(RiskError::InvalidDualVariable(
                "weight w is orthogonal to the eligible space".into(),
            ));
        }
        // w must decompose into a dual initial price plus an orthogonal part
        let ki_dual = m.k_initial.dual();
        let mperp =
            Polyhedron::cone_from_generators(m.assets(), Vec::new(), m.eligible.orthocomplement());
        let admissible = ki_dual.minkowski_sum(&mperp).expect("dimensions agree");
        if !admissible.contains(&self.w)? {
            return Err(RiskError::InvalidDualVariable(
                "weight w is not an initial dual price modulo the eligible orthocomplement".into(),
            ));
        }
        let y = self.density(m);
        for (w_idx, k) in m.k_terminal.iter().enumerate() {
            if !k.dual().contains(y.value(w_idx))? {
                return Err(RiskError::InvalidDualVariable(format!(
                    "weighted density leaves the terminal dual cone in scenario {w_idx}"
                )));
            }
        }
        Ok(())
    }

    pub fn q(&self) -> &[QVec] {
        &self.q
    }

    pub fn w(&self) -> &QVec {
        &self.w
    }

    /// The density Y_i(w) = w_i q_i(w) / p_w.
    pub fn density(&self, m: &OnePeriodMarket) -> RandomPortfolio {
        let values = self
            .q
            .iter()
            .enumerate()
            .map(|(w_idx, row)| {
                let p = m.space.prob(w_idx);
                row.iter()
                    .zip(&self.w)
                    .map(|(qi, wi)| wi * qi / p)
                    .collect()
            })
            .collect();
        RandomPortfolio::new(values)
    }

    /// Flattened mass Z_i(w) = w_i q_i(w).
    pub fn mass(&self) -> QVec {
        let mut out = Vec::with_capacity(self.q.len() * self.w.len());
        for row in &self.q {
            for (qi, wi) in row.iter().zip(&self.w) {
                out.push(wi * qi);
            }
        }
        out
    }

    /// The direction v induced on the eligible space: the orthogonal
    /// projection of w, which is the unique element of (w + M_perp) and M.
    pub fn induced_v(&self, m: &OnePeriodMarket) -> QVec {
        m.eligible.project(&self.w)
    }

    /// `E^Q[X]` componentwise.
    pub fn expectation(&self, x: &RandomPortfolio) -> QVec {
        let d = self.w.len();
        let mut e = zeros(d);
        for (row, xv) in self.q.iter().zip(x.values()) {
            for i in 0..d {
                e[i] += &row[i] * &xv[i];
            }
        }
        e
    }

    /// Build the pair carried by a dual mass vector: w = sum of blocks,
    /// q_i = Z_i / w_i (uniform in P where w_i = 0).
    pub fn from_mass(m: &OnePeriodMarket, z: &[Rat]) -> Result<DualPair, RiskError> {
        let n = m.scenarios();
        let d = m.assets();
        if z.len() != n * d {
            return Err(RiskError::ShapeMismatch);
        }
        let mut w = zeros(d);
        for blk in 0..n {
            for i in 0..d {
                w[i] += &z[blk * d + i];
            }
        }
        let q: Vec<QVec> = (0..n)
            .map(|blk| {
                (0..d)
                    .map(|i| {
                        if w[i].is_zero() {
                            m.space.prob(blk).clone()
                        } else {
                            &z[blk * d + i] / &w[i]
                        }
                    })
                    .collect()
            })
            .collect();
        DualPair::new(m, q, w)
    }
}

/// Change of variables: from a terminal-dual density Y and an
/// admissible direction v to the pair (Q, w) with `w = E[Y]`.
pub fn pair_transform(
    m: &OnePeriodMarket,
    y: &RandomPortfolio,
    v: &[Rat],
) -> Result<DualPair, RiskError> {
    if !y.matches(m) || v.len() != m.assets() {
        return Err(RiskError::ShapeMismatch);
    }
    for (w_idx, k) in m.k_terminal.iter().enumerate() {
        if !k.dual().contains(y.value(w_idx))? {
            return Err(RiskError::InvalidDualVariable(format!(
                "density leaves the terminal dual cone in scenario {w_idx}"
            )));
        }
    }
    let w = y.expectation(&m.space);
    let diff = sub(v, &w);
    if !m.eligible.in_orthocomplement(&diff) {
        return Err(RiskError::InvalidDualVariable(
            "v - E[Y] is not orthogonal to the eligible space".into(),
        ));
    }
    if !m.eligible.contains(v) {
        return Err(RiskError::InvalidDualVariable(
            "v does not lie in the eligible space".into(),
        ));
    }
    if v.iter().all(|c| c.is_zero()) {
        return Err(RiskError::InvalidDualVariable(
            "v vanishes; the induced constraint would be trivial".into(),
        ));
    }
    let ec = eligible_initial_cone(m)?;
    let v_coords = m.eligible.coords(v).expect("v lies in the eligible space");
    if !ec.dual_m.contains(&v_coords)? {
        return Err(RiskError::InvalidDualVariable(
            "v is not a dual price of the eligible initial cone".into(),
        ));
    }
    let n = m.scenarios();
    let d = m.assets();
    let q: Vec<QVec> = (0..n)
        .map(|blk| {
            let p = m.space.prob(blk);
            (0..d)
                .map(|i| {
                    if w[i].is_zero() {
                        p.clone()
                    } else {
                        p * &y.value(blk)[i] / &w[i]
                    }
                })
                .collect()
        })
        .collect();
    DualPair::new(m, q, w)
}

/// Inverse change of variables: density Y = diag(w) dQ/dP and the induced
/// direction v (orthogonal projection of w onto the eligible space).
pub fn pair_inverse(m: &OnePeriodMarket, pair: &DualPair) -> (RandomPortfolio, QVec) {
    (pair.density(m), pair.induced_v(m))
}

/// A penalty value: the halfspace {u in M : v . u >= offset} for the pair's
/// induced direction v, all of M, or the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PenaltyValue {
    Halfspace(Rat),
    WholeM,
    Empty,
}

/// Set-valued conjugate of the acceptance set at (y, v), where y follows the
/// conjugate-side convention (it is the negative of a terminal-dual
/// density). The value is {u in M : v . u >= -s} with s the support of the
/// region in the mass direction of y; all of M when the support is infinite.
pub fn conjugate(
    a: &AcceptanceSet,
    y: &RandomPortfolio,
    v: &[Rat],
) -> Result<PenaltyValue, RiskError> {
    let m = a.market();
    if !y.matches(m) || v.len() != m.assets() {
        return Err(RiskError::ShapeMismatch);
    }
    if v.iter().all(|c| c.is_zero()) {
        return Err(RiskError::InvalidDualVariable("v must be nonzero".into()));
    }
    let region = a.region()?;
    if region.is_empty() {
        return Ok(PenaltyValue::Empty);
    }
    let mut mass = Vec::with_capacity(m.scenario_dim());
    for (w_idx, val) in y.values().iter().enumerate() {
        let p = m.space.prob(w_idx);
        mass.extend(val.iter().map(|c| c * p));
    }
    match support_value(region, &mass)? {
        SupportValue::Infinite => Ok(PenaltyValue::WholeM),
        SupportValue::Finite(s) => Ok(PenaltyValue::Halfspace(-s)),
    }
}

/// Minimal penalty of a pair: the conjugate evaluated at the reflected
/// inverse density (the conjugate's own variable runs over negatives of
/// terminal-dual densities).
pub fn penalty_min(a: &AcceptanceSet, pair: &DualPair) -> Result<PenaltyValue, RiskError> {
    let m = a.market();
    let (y, v) = pair_inverse(m, pair);
    conjugate(a, &y.neg(), &v)
}

/// A degenerate dual constraint: a mass direction whose weight is
/// orthogonal to the eligible space. Its member is all of M or the empty
/// set depending on the claim, so it acts as a feasibility gate
/// <X, mass> >= offset rather than a halfspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityGate {
    pub mass: QVec,
    pub offset: Rat,
}

impl FeasibilityGate {
    pub fn admits(&self, x: &RandomPortfolio) -> bool {
        dot(&x.flatten(), &self.mass) >= self.offset
    }
}

/// A finite dual description: proper pairs with their penalties, plus the
/// degenerate gates contributed by dual directions with weights in the
/// orthocomplement of the eligible space.
#[derive(Clone, Debug)]
pub struct DualFamily {
    pub pairs: Vec<DualPair>,
    pub penalties: Vec<PenaltyValue>,
    pub gates: Vec<FeasibilityGate>,
}

impl DualFamily {
    pub fn evaluate(&self, m: &OnePeriodMarket, x: &RandomPortfolio) -> Result<RiskSet, RiskError> {
        if !self.gates.iter().all(|g| g.admits(x)) {
            return Ok(RiskSet::new(m, vec![Polyhedron::empty(m.eligible.rank())]));
        }
        if self.pairs.is_empty() {
            // every member degenerated to a gate and all gates pass
            return Ok(RiskSet::new(
                m,
                vec![Polyhedron::whole_space(m.eligible.rank())],
            ));
        }
        dual_evaluate(m, &self.pairs, &self.penalties, x)
    }
}

fn weight_of_mass(m: &OnePeriodMarket, z: &[Rat]) -> QVec {
    let mut w = zeros(m.assets());
    for blk in 0..m.scenarios() {
        for i in 0..m.assets() {
            w[i] += &z[blk * m.assets() + i];
        }
    }
    w
}

/// Finite dual family of a coherent acceptance set: one pair per extreme ray
/// of the dual cone of the region. Rays whose weight is orthogonal to the
/// eligible space carry no pair (their direction v vanishes); they surface
/// as zero-offset feasibility gates in [`coherent_dual_family`].
pub fn dual_generators(a: &AcceptanceSet) -> Result<Vec<DualPair>, RiskError> {
    Ok(coherent_dual_family(a)?.pairs)
}

/// The full finite dual description of a coherent acceptance set.
pub fn coherent_dual_family(a: &AcceptanceSet) -> Result<DualFamily, RiskError> {
    let m = a.market();
    let region = a.region()?;
    if !region.is_cone() {
        return Err(RiskError::NotACone);
    }
    let dual = region.dual_cone(None)?;
    let mut ray_list: Vec<QVec> = dual.vrep().rays.clone();
    for l in &dual.vrep().lineality {
        ray_list.push(l.clone());
        ray_list.push(crate::rational::neg(l));
    }
    let mut pairs = Vec::new();
    let mut gates = Vec::new();
    for z in &ray_list {
        let w = weight_of_mass(m, z);
        if m.eligible.basis().iter().all(|b| dot(b, &w).is_zero()) {
            gates.push(FeasibilityGate {
                mass: z.clone(),
                offset: Rat::zero(),
            });
            continue;
        }
        pairs.push(DualPair::from_mass(m, z)?);
    }
    let penalties = coherent_penalties(&pairs);
    Ok(DualFamily {
        pairs,
        penalties,
        gates,
    })
}

/// Intersection of the dual members over the given pairs and penalties:
/// each member is the penalty halfspace shifted by the pair's expectation
/// of -X. Whole-space penalties contribute nothing; an empty penalty makes
/// the result empty.
pub fn dual_evaluate(
    m: &OnePeriodMarket,
    pairs: &[DualPair],
    penalties: &[PenaltyValue],
    x: &RandomPortfolio,
) -> Result<RiskSet, RiskError> {
    if pairs.is_empty() {
        return Err(RiskError::EmptyDualFamily);
    }
    if pairs.len() != penalties.len() || !x.matches(m) {
        return Err(RiskError::ShapeMismatch);
    }
    let mdim = m.eligible.rank();
    let flat = x.flatten();
    let mut h = HRep::new(mdim);
    for (pair, pen) in pairs.iter().zip(penalties) {
        let offset = match pen {
            PenaltyValue::WholeM => continue,
            PenaltyValue::Empty => {
                return Ok(RiskSet::new(m, vec![Polyhedron::empty(mdim)]));
            }
            PenaltyValue::Halfspace(o) => o,
        };
        // member: {z : (B^T w) . z >= offset - <X, Z>}
        let nz: QVec = m.eligible.basis().iter().map(|b| dot(b, &pair.w)).collect();
        let rhs = offset - dot(&flat, &pair.mass());
        h.inequalities.push(Constraint::new(nz, rhs));
    }
    Ok(RiskSet::new(m, vec![Polyhedron::from_hrep(h)]))
}

/// Zero-offset penalties for a coherent family.
pub fn coherent_penalties(pairs: &[DualPair]) -> Vec<PenaltyValue> {
    pairs
        .iter()
        .map(|_| PenaltyValue::Halfspace(Rat::zero()))
        .collect()
}

/// Dual family for a convex (not necessarily conical) polyhedral region:
/// one pair per canonical facet row, with the row offset as its minimal
/// penalty. Rows whose weight is orthogonal to the eligible space become
/// feasibility gates.
pub fn convex_dual_family(a: &AcceptanceSet) -> Result<DualFamily, RiskError> {
    let m = a.market();
    let region = a.region()?;
    if !region.hrep().equalities.is_empty() {
        return Err(RiskError::PreconditionViolated(
            "acceptance region is not full-dimensional".into(),
        ));
    }
    let mut pairs = Vec::new();
    let mut penalties = Vec::new();
    let mut gates = Vec::new();
    for c in &region.hrep().inequalities {
        let w = weight_of_mass(m, &c.normal);
        if m.eligible.basis().iter().all(|b| dot(b, &w).is_zero()) {
            gates.push(FeasibilityGate {
                mass: c.normal.clone(),
                offset: c.offset.clone(),
            });
            continue;
        }
        pairs.push(DualPair::from_mass(m, &c.normal)?);
        penalties.push(PenaltyValue::Halfspace(c.offset.clone()));
    }
    if pairs.is_empty() && gates.is_empty() {
        return Err(RiskError::EmptyDualFamily);
    }
    Ok(DualFamily {
        pairs,
        penalties,
        gates,
    })
}

#[derive(Clone, Debug)]
pub struct PrimalDualEntry {
    pub claim_index: usize,
    pub equal: bool,
    pub primal_h: HRep,
    pub dual_h: HRep,
}

#[derive(Clone, Debug)]
pub struct PrimalDualReport {
    pub entries: Vec<PrimalDualEntry>,
}

impl PrimalDualReport {
    pub fn all_equal(&self) -> bool {
        self.entries.iter().all(|e| e.equal)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &PrimalDualEntry> {
        self.entries.iter().filter(|e| !e.equal)
    }
}

/// Compare the primal evaluation with the dual intersection on every claim.
/// Requires a convex, market-compatible acceptance set that accepts some
/// eligible portfolio but not all of them.
pub fn primal_dual_check(
    a: &AcceptanceSet,
    xs: &[RandomPortfolio],
) -> Result<PrimalDualReport, RiskError> {
    let report = check_axioms(a);
    if !report.a1a {
        return Err(RiskError::PreconditionViolated(
            "no eligible portfolio is accepted (A1a)".into(),
        ));
    }
    if !report.a1b {
        return Err(RiskError::PreconditionViolated(
            "every eligible portfolio is accepted (A1b)".into(),
        ));
    }
    if !report.kt_compatible {
        return Err(RiskError::PreconditionViolated(
            "acceptance set is not terminal-cone compatible".into(),
        ));
    }
    if !report.ki_compatible {
        return Err(RiskError::PreconditionViolated(
            "acceptance set is not initial-cone compatible".into(),
        ));
    }
    if !report.convex {
        return Err(RiskError::PreconditionViolated(
            "acceptance set is not convex".into(),
        ));
    }
    let m = a.market();
    let family = if report.cone {
        let family = coherent_dual_family(a)?;
        if family.pairs.is_empty() && family.gates.is_empty() {
            return Err(RiskError::EmptyDualFamily);
        }
        family
    } else {
        convex_dual_family(a)?
    };

    let mut entries = Vec::new();
    for (idx, x) in xs.iter().enumerate() {
        let primal = evaluate(a, x)?;
        let dual = family.evaluate(m, x)?;
        let equal = primal.same_as(&dual);
        entries.push(PrimalDualEntry {
            claim_index: idx,
            equal,
            primal_h: primal.members_m()[0].hrep().clone(),
            dual_h: dual.members_m()[0].hrep().clone(),
        });
    }
    Ok(PrimalDualReport { entries })
}

#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub translative: bool,
    pub monotone: bool,
    pub convex: bool,
    pub positively_homogeneous: bool,
    pub subadditive: Option<bool>,
    pub graph_identity: bool,
    pub failures: Vec<String>,
}

/// Structural and sampled checks of the risk measure induced by an
/// acceptance set: exact translativity on sampled pairs, acceptance-side
/// certificates for monotonicity/convexity/homogeneity, sampled
/// subadditivity (single regions only) and the membership identity
/// `accepts(X) iff 0 in R(X)`.
pub fn axiom_harness(
    a: &AcceptanceSet,
    xs: &[RandomPortfolio],
    shifts: &[QVec],
) -> Result<HarnessReport, RiskError> {
    let m = a.market();
    let rep = check_axioms(a);
    let mut failures = Vec::new();

    let mut translative = true;
    for (i, x) in xs.iter().enumerate() {
        let base = evaluate(a, x)?;
        for (j, u) in shifts.iter().enumerate() {
            let u_ambient = m.eligible.embed(u);
            let moved = x.add(&RandomPortfolio::constant(m.scenarios(), &u_ambient));
            let lhs = evaluate(a, &moved)?;
            let rhs = base.shift_m(m, u);
            if !lhs.same_as(&rhs) {
                translative = false;
                failures.push(format!("translativity fails at claim {i}, shift {j}"));
            }
        }
    }

    let mut subadditive = None;
    if !a.is_union() {
        let region = a.region()?;
        let mut ok = region.minkowski_sum(region)?.subset(region)?;
        for (i, x) in xs.iter().enumerate() {
            for (j, x2) in xs.iter().enumerate().skip(i + 1) {
                let rx = evaluate(a, x)?;
                let ry = evaluate(a, x2)?;
                let rsum = evaluate(a, &x.add(x2))?;
                let minksum = rx.single_m().minkowski_sum(ry.single_m())?;
                if !minksum.subset(rsum.single_m())? {
                    ok = false;
                    failures.push(format!("subadditivity fails at claims {i}, {j}"));
                }
            }
        }
        subadditive = Some(ok);
    }

    let mut graph_identity = true;
    for (i, x) in xs.iter().enumerate() {
        let zero = zeros(m.eligible.rank());
        let member = evaluate(a, x)?.contains_m(&zero)?;
        if member != accepts(a, x)? {
            graph_identity = false;
            failures.push(format!("membership identity fails at claim {i}"));
        }
    }

    Ok(HarnessReport {
        translative,
        monotone: rep.monotone,
        convex: rep.convex,
        positively_homogeneous: rep.cone,
        subadditive,
        graph_identity,
        failures,
    })
}
