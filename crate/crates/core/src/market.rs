//! One-period conical market models on finite scenario spaces: exchange
//! cones at initial and terminal time, eligible subspaces, and random
//! portfolios in physical units.

use crate::linalg::{gram, inverse, rank};
use crate::lp::{solve, LinearProgram, LpStatus, Sense};
use crate::polyhedra::{span_orthocomplement, GeomError, HRep, Polyhedron, VRep};
use crate::rational::{dot, zeros, QMat, QVec, Rat};
use num::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MarketError {
    #[error("scenario space needs at least one scenario")]
    NoScenarios,
    #[error("scenario probabilities must be positive")]
    NonpositiveProbability,
    #[error("scenario probabilities must sum to one")]
    ProbabilitiesDontSumToOne,
    #[error("price vector must be strictly positive")]
    NonpositivePrice,
    #[error("price of the leading asset must be one")]
    LeadingPriceNotOne,
    #[error("exchange rates must be positive with unit diagonal")]
    InvalidRates,
    #[error("eligible basis must consist of d-vectors of full column rank")]
    BadEligibleBasis,
    #[error("solvency cone must be a cone")]
    NotACone,
    #[error("the eligible part of the initial cone is {{0}}")]
    DegenerateEligibleCone,
    #[error("terminal cone count differs from scenario count")]
    TerminalCountMismatch,
    #[error("portfolio shape does not match the market")]
    ShapeMismatch,
    #[error("point is not in the eligible subspace")]
    NotInEligibleSpace,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Finite probability space with strictly positive rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioSpace {
    probs: Vec<Rat>,
}

impl ScenarioSpace {
    pub fn new(probs: Vec<Rat>) -> Result<Self, MarketError> {
        if probs.is_empty() {
            return Err(MarketError::NoScenarios);
        }
        if probs.iter().any(|p| !p.is_positive()) {
            return Err(MarketError::NonpositiveProbability);
        }
        if probs.iter().sum::<Rat>() != Rat::one() {
            return Err(MarketError::ProbabilitiesDontSumToOne);
        }
        Ok(ScenarioSpace { probs })
    }

    pub fn uniform(n: usize) -> Self {
        let p = Rat::new(1.into(), (n as i64).into());
        ScenarioSpace { probs: vec![p; n] }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, omega: usize) -> &Rat {
        &self.probs[omega]
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }
}

/// Subspace of eligible (deposit) portfolios, stored as a basis of ambient
/// d-vectors. Coordinates "in M" always refer to this basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EligibleSpace {
    dim: usize,
    basis: Vec<QVec>,
}

impl EligibleSpace {
    pub fn new(dim: usize, basis: Vec<QVec>) -> Result<Self, MarketError> {
        if basis.is_empty()
            || basis.len() > dim
            || basis.iter().any(|b| b.len() != dim)
            || rank(&basis) != basis.len()
        {
            return Err(MarketError::BadEligibleBasis);
        }
        Ok(EligibleSpace { dim, basis })
    }

    pub fn full(dim: usize) -> Self {
        EligibleSpace {
            dim,
            basis: crate::linalg::identity(dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension m of the subspace.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// The d x m matrix whose columns are the basis vectors, as rows.
    pub fn matrix_rows(&self) -> QMat {
        let mut rows = vec![zeros(self.basis.len()); self.dim];
        for (k, b) in self.basis.iter().enumerate() {
            for (j, rowj) in rows.iter_mut().enumerate() {
                rowj[k] = b[j].clone();
            }
        }
        rows
    }

    pub fn embed(&self, z: &[Rat]) -> QVec {
        debug_assert_eq!(z.len(), self.basis.len());
        let mut x = zeros(self.dim);
        for (c, b) in z.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += c * bi;
            }
        }
        x
    }

    /// Basis coordinates of an ambient vector, if it lies in the subspace.
    pub fn coords(&self, x: &[Rat]) -> Result<QVec, MarketError> {
        let rows = self.matrix_rows();
        let z = crate::linalg::solve(&rows, x).ok_or(MarketError::NotInEligibleSpace)?;
        if self.embed(&z) == x.to_vec() {
            Ok(z)
        } else {
            Err(MarketError::NotInEligibleSpace)
        }
    }

    /// Orthogonal projection of an ambient vector onto the subspace.
    pub fn project(&self, x: &[Rat]) -> QVec {
        crate::linalg::project_onto_span(&self.basis, x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.coords(x).is_ok()
    }

    /// x is orthogonal to the whole subspace.
    pub fn in_orthocomplement(&self, x: &[Rat]) -> bool {
        self.basis.iter().all(|b| dot(b, x).is_zero())
    }

    pub fn orthocomplement(&self) -> Vec<QVec> {
        span_orthocomplement(self.dim, &self.basis)
    }

    /// Whether span(M) meets the nonnegative orthant outside the origin,
    /// decided by maximizing the coordinate sum over the capped cone.
    pub fn meets_orthant(&self) -> bool {
        let m = self.basis.len();
        let rows = self.matrix_rows();
        let mut h = HRep::new(m);
        let mut sum = zeros(m);
        for row in &rows {
            h.inequalities
                .push(crate::polyhedra::Constraint::homogeneous(row.clone()));
            for (s, r) in sum.iter_mut().zip(row) {
                *s += r;
            }
        }
        h.inequalities.push(crate::polyhedra::Constraint::new(
            crate::rational::neg(&sum),
            -Rat::one(),
        ));
        let out = solve(&LinearProgram {
            objective: sum,
            constraints: h,
            sense: Sense::Maximize,
        });
        out.status == LpStatus::Optimal && out.value.is_some_and(|v| v.is_positive())
    }
}

/// A closed convex cone of solvent positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvencyCone {
    cone: Polyhedron,
}

impl SolvencyCone {
    pub fn new(cone: Polyhedron) -> Result<Self, MarketError> {
        if !cone.is_cone() {
            return Err(MarketError::NotACone);
        }
        Ok(SolvencyCone { cone })
    }

    pub fn cone(&self) -> &Polyhedron {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn dual(&self) -> Polyhedron {
        self.cone.dual_cone(None).expect("solvency cone is a cone")
    }
}

/// Frictionless exchange at strictly positive prices: the halfspace
/// {x : prices . x >= 0} with the leading price normalized to one.
pub fn frictionless_cone(prices: &[Rat]) -> Result<SolvencyCone, MarketError> {
    if prices.iter().any(|p| !p.is_positive()) {
        return Err(MarketError::NonpositivePrice);
    }
    if prices.is_empty() || !prices[0].is_one() {
        return Err(MarketError::LeadingPriceNotOne);
    }
    SolvencyCone::new(Polyhedron::halfspace(prices.to_vec(), Rat::zero()))
}

/// Bid-ask exchange cone generated by {e_i} and {rate(i,j) e_i - e_j} for
/// every quoted pair. `None` entries mark pairs that cannot be exchanged
/// (the generator is simply omitted); the diagonal must be one.
pub fn bidask_cone(rates: &[Vec<Option<Rat>>]) -> Result<SolvencyCone, MarketError> {
    let d = rates.len();
    if d == 0 || rates.iter().any(|row| row.len() != d) {
        return Err(MarketError::InvalidRates);
    }
    let mut rays = crate::linalg::identity(d);
    for (i, row) in rates.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if i == j {
                match entry {
                    Some(r) if r.is_one() => {}
                    _ => return Err(MarketError::InvalidRates),
                }
                continue;
            }
            match entry {
                None => {}
                Some(r) if r.is_positive() => {
                    let mut g = zeros(d);
                    g[i] = r.clone();
                    g[j] = -Rat::one();
                    rays.push(g);
                }
                Some(_) => return Err(MarketError::InvalidRates),
            }
        }
    }
    SolvencyCone::new(Polyhedron::cone_from_generators(d, rays, Vec::new()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePeriodMarket {
    pub space: ScenarioSpace,
    pub k_initial: SolvencyCone,
    pub k_terminal: Vec<SolvencyCone>,
    pub eligible: EligibleSpace,
}

impl OnePeriodMarket {
    pub fn new(
        space: ScenarioSpace,
        k_initial: SolvencyCone,
        k_terminal: Vec<SolvencyCone>,
        eligible: EligibleSpace,
    ) -> Result<Self, MarketError> {
        if k_terminal.len() != space.len() {
            return Err(MarketError::TerminalCountMismatch);
        }
        let d = k_initial.dim();
        if eligible.ambient_dim() != d || k_terminal.iter().any(|k| k.dim() != d) {
            return Err(MarketError::ShapeMismatch);
        }
        Ok(OnePeriodMarket {
            space,
            k_initial,
            k_terminal,
            eligible,
        })
    }

    pub fn assets(&self) -> usize {
        self.k_initial.dim()
    }

    pub fn scenarios(&self) -> usize {
        self.space.len()
    }

    pub fn scenario_dim(&self) -> usize {
        self.assets() * self.scenarios()
    }
}

/// Random terminal portfolio: row per scenario, physical units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomPortfolio {
    values: Vec<QVec>,
}

impl RandomPortfolio {
    pub fn new(values: Vec<QVec>) -> Self {
        RandomPortfolio { values }
    }

    pub fn zero(n: usize, d: usize) -> Self {
        RandomPortfolio {
            values: vec![zeros(d); n],
        }
    }

    /// Deterministic portfolio u in every scenario.
    pub fn constant(n: usize, u: &[Rat]) -> Self {
        RandomPortfolio {
            values: vec![u.to_vec(); n],
        }
    }

    pub fn scenarios(&self) -> usize {
        self.values.len()
    }

    pub fn assets(&self) -> usize {
        self.values.first().map_or(0, |v| v.len())
    }

    pub fn value(&self, omega: usize) -> &QVec {
        &self.values[omega]
    }

    pub fn values(&self) -> &[QVec] {
        &self.values
    }

    pub fn matches(&self, m: &OnePeriodMarket) -> bool {
        self.scenarios() == m.scenarios() && self.values.iter().all(|v| v.len() == m.assets())
    }

    /// Scenario-major flattening into R^{n*d}.
    pub fn flatten(&self) -> QVec {
        let mut out = Vec::with_capacity(self.scenarios() * self.assets());
        for v in &self.values {
            out.extend(v.iter().cloned());
        }
        out
    }

    pub fn unflatten(flat: &[Rat], n: usize, d: usize) -> Self {
        debug_assert_eq!(flat.len(), n * d);
        RandomPortfolio {
            values: (0..n).map(|w| flat[w * d..(w + 1) * d].to_vec()).collect(),
        }
    }

    pub fn add(&self, other: &RandomPortfolio) -> RandomPortfolio {
        RandomPortfolio {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| crate::rational::add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> RandomPortfolio {
        RandomPortfolio {
            values: self
                .values
                .iter()
                .map(|v| crate::rational::neg(v))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RandomPortfolio {
        RandomPortfolio {
            values: self
                .values
                .iter()
                .map(|v| crate::rational::scale(v, c))
                .collect(),
        }
    }

    /// `E[X] = sum_w p_w X(w)`.
    pub fn expectation(&self, space: &ScenarioSpace) -> QVec {
        let d = self.assets();
        let mut e = zeros(d);
        for (p, v) in space.probs().iter().zip(&self.values) {
            for (ei, vi) in e.iter_mut().zip(v) {
                *ei += p * vi;
            }
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarketViolation {
    InitialConeMissesOrthant,
    InitialConeIsWholeSpace,
    TerminalConeMissesOrthant(usize),
    TerminalConeIsWholeSpace(usize),
    EligibleMissesOrthant,
    EligibleInitialConeDegenerate,
}

impl fmt::Display for MarketViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarketViolation::InitialConeMissesOrthant => {
                write!(
                    f,
                    "initial solvency cone does not contain the nonnegative orthant"
                )
            }
            MarketViolation::InitialConeIsWholeSpace => {
                write!(
                    f,
                    "initial solvency cone is the whole space (K != R^d violated)"
                )
            }
            MarketViolation::TerminalConeMissesOrthant(w) => write!(
                f,
                "terminal solvency cone in scenario {w} does not contain the nonnegative orthant"
            ),
            MarketViolation::TerminalConeIsWholeSpace(w) => write!(
                f,
                "terminal solvency cone in scenario {w} is the whole space (K != R^d violated)"
            ),
            MarketViolation::EligibleMissesOrthant => {
                write!(
                    f,
                    "eligible subspace meets the nonnegative orthant only at zero"
                )
            }
            MarketViolation::EligibleInitialConeDegenerate => {
                write!(f, "K_I restricted to the eligible subspace is {{0}}")
            }
        }
    }
}

/// Check every market invariant; an empty report means the model is valid.
pub fn validate_market(m: &OnePeriodMarket) -> Vec<MarketViolation> {
    let d = m.assets();
    let orthant = Polyhedron::orthant(d);
    let mut report = Vec::new();
    if !orthant
        .subset(m.k_initial.cone())
        .expect("dimensions agree")
    {
        report.push(MarketViolation::InitialConeMissesOrthant);
    }
    if m.k_initial.cone().is_whole_space() {
        report.push(MarketViolation::InitialConeIsWholeSpace);
    }
    for (w, k) in m.k_terminal.iter().enumerate() {
        if !orthant.subset(k.cone()).expect("dimensions agree") {
            report.push(MarketViolation::TerminalConeMissesOrthant(w));
        }
        if k.cone().is_whole_space() {
            report.push(MarketViolation::TerminalConeIsWholeSpace(w));
        }
    }
    if !m.eligible.meets_orthant() {
        report.push(MarketViolation::EligibleMissesOrthant);
    }
    if let Err(MarketError::DegenerateEligibleCone) = eligible_initial_cone(m) {
        report.push(MarketViolation::EligibleInitialConeDegenerate);
    }
    report
}

/// K_I^M and its dual, both in eligible-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EligibleCone {
    /// K_I intersected with the eligible subspace, in basis coordinates
    pub cone_m: Polyhedron,
    /// dual cone of `cone_m` taken within the subspace (ambient pairing)
    pub dual_m: Polyhedron,
}

/// Intersect the initial cone with the eligible subspace and dualize within
/// it. The dual is computed twice: through the basis Gram matrix and through
/// the ambient sum with the orthocomplement; both routes must agree exactly.
pub fn eligible_initial_cone(m: &OnePeriodMarket) -> Result<EligibleCone, MarketError> {
    let d = m.assets();
    let mdim = m.eligible.rank();
    let rows = m.eligible.matrix_rows();
    let cone_m = m.k_initial.cone().affine_preimage(&rows, &zeros(d), mdim)?;
    if cone_m.is_zero_cone() {
        return Err(MarketError::DegenerateEligibleCone);
    }

    // route 1: dual in coordinates, corrected by the Gram matrix
    let coord_dual = cone_m.dual_cone(None)?;
    let g = gram(m.eligible.basis());
    let ginv = inverse(&g).expect("basis has full column rank");
    let dual_m = coord_dual.linear_image(&ginv)?;

    // route 2: (K_I^+ + M_perp) intersected with M, re-expressed in coordinates
    let ki_dual = m.k_initial.dual();
    let mperp = m.eligible.orthocomplement();
    let sum = ki_dual.minkowski_sum(&Polyhedron::cone_from_generators(d, Vec::new(), mperp))?;
    let mut subspace_h = HRep::new(d);
    for nrm in m.eligible.orthocomplement() {
        subspace_h
            .equalities
            .push(crate::polyhedra::Constraint::homogeneous(nrm));
    }
    let within_m = sum.intersect(&Polyhedron::from_hrep(subspace_h))?;
    let ambient_route = within_m.affine_preimage(&rows, &zeros(d), mdim)?;

    debug_assert!(
        dual_m.same_set(&ambient_route).unwrap_or(false),
        "dual-within-subspace routes disagree"
    );
    if dual_m != ambient_route {
        // both routes are canonical, so disagreement is representation-exact
        return Err(MarketError::Geometry(GeomError::DimensionMismatch(0, 0)));
    }
    Ok(EligibleCone { cone_m, dual_m })
}

/// The product cone {X : X(w) in K_T(w) for all w} in flattened coordinates.
pub fn scenario_cone(m: &OnePeriodMarket) -> Polyhedron {
    let d = m.assets();
    let nd = m.scenario_dim();
    let mut rays = Vec::new();
    let mut lineality = Vec::new();
    for (w, k) in m.k_terminal.iter().enumerate() {
        for r in &k.cone().vrep().rays {
            let mut v = zeros(nd);
            v[w * d..(w + 1) * d].clone_from_slice(r);
            rays.push(v);
        }
        for l in &k.cone().vrep().lineality {
            let mut v = zeros(nd);
            v[w * d..(w + 1) * d].clone_from_slice(l);
            lineality.push(v);
        }
    }
    Polyhedron::from_vrep(VRep::cone(nd, rays, lineality))
}

/// The cone {1 k : k in K_I^M} in flattened scenario coordinates (the same
/// eligible trade repeated in every scenario).
pub fn eligible_embedding_matrix(m: &OnePeriodMarket) -> QMat {
    let rows = m.eligible.matrix_rows();
    let mut e = Vec::with_capacity(m.scenario_dim());
    for _ in 0..m.scenarios() {
        for row in &rows {
            e.push(row.clone());
        }
    }
    e
}

pub fn embedded_eligible_cone(m: &OnePeriodMarket) -> Result<Polyhedron, MarketError> {
    let ec = eligible_initial_cone(m)?;
    let e = eligible_embedding_matrix(m);
    Ok(ec.cone_m.linear_image(&e)?)
}
