//! Superhedging on finite scenario trees: self-financing feasibility cones,
//! superhedging price sets, consistent pricing processes, and the
//! strict-process no-arbitrage test.

use crate::lp::strict_feasible;
use crate::market::{OnePeriodMarket, SolvencyCone};
use crate::polyhedra::{Constraint, GeomError, HRep, Polyhedron};
use crate::rational::{dot, zeros, QMat, QVec, Rat};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SuperhedgeError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("claim shape does not match the tree's leaves")]
    ShapeMismatch,
    #[error("no strictly consistent pricing process: the dual representation hypothesis fails")]
    NoArbitrageViolated,
    #[error("invalid pricing process: {0}")]
    InvalidProcess(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    /// parent index; None only for the root (node 0)
    pub parent: Option<usize>,
    /// conditional branch probability given the parent; 1 at the root
    pub prob: Rat,
    /// solvency cone at this node
    pub cone: SolvencyCone,
}

/// A finite scenario tree: nodes in parent-before-child order, node 0 the
/// root, all leaves at the same depth, children probabilities summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioTree {
    nodes: Vec<TreeNode>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    horizon: usize,
    assets: usize,
}

impl ScenarioTree {
    pub fn new(nodes: Vec<TreeNode>) -> Result<Self, SuperhedgeError> {
        if nodes.is_empty() {
            return Err(SuperhedgeError::InvalidTree("no nodes".into()));
        }
        if nodes[0].parent.is_some() {
            return Err(SuperhedgeError::InvalidTree(
                "node 0 must be the root".into(),
            ));
        }
        if !nodes[0].prob.is_one() {
            return Err(SuperhedgeError::InvalidTree(
                "root probability must be one".into(),
            ));
        }
        let assets = nodes[0].cone.dim();
        let mut children = vec![Vec::new(); nodes.len()];
        let mut depth = vec![0usize; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            if node.cone.dim() != assets {
                return Err(SuperhedgeError::InvalidTree(
                    "all cones must share the asset dimension".into(),
                ));
            }
            if !node.prob.is_positive() {
                return Err(SuperhedgeError::InvalidTree(
                    "branch probabilities must be positive".into(),
                ));
            }
            if let Some(p) = node.parent {
                if p >= i {
                    return Err(SuperhedgeError::InvalidTree(
                        "parents must precede children".into(),
                    ));
                }
                children[p].push(i);
                depth[i] = depth[p] + 1;
            } else if i != 0 {
                return Err(SuperhedgeError::InvalidTree("two roots".into()));
            }
        }
        for (i, ch) in children.iter().enumerate() {
            if !ch.is_empty() {
                let total: Rat = ch.iter().map(|&c| nodes[c].prob.clone()).sum();
                if !total.is_one() {
                    return Err(SuperhedgeError::InvalidTree(format!(
                        "children of node {i} have total probability {total}"
                    )));
                }
            }
        }
        let horizon = depth.iter().max().copied().unwrap_or(0);
        if horizon == 0 {
            return Err(SuperhedgeError::InvalidTree(
                "tree must have at least one period".into(),
            ));
        }
        for (i, ch) in children.iter().enumerate() {
            if ch.is_empty() && depth[i] != horizon {
                return Err(SuperhedgeError::InvalidTree(format!(
                    "leaf {i} sits at depth {} instead of the horizon {horizon}",
                    depth[i]
                )));
            }
        }
        Ok(ScenarioTree {
            nodes,
            children,
            depth,
            horizon,
            assets,
        })
    }

    /// One-period tree of a market: the initial cone at the root, one leaf
    /// per scenario.
    pub fn one_period(m: &OnePeriodMarket) -> ScenarioTree {
        let mut nodes = vec![TreeNode {
            parent: None,
            prob: Rat::one(),
            cone: m.k_initial.clone(),
        }];
        for (w, k) in m.k_terminal.iter().enumerate() {
            nodes.push(TreeNode {
                parent: Some(0),
                prob: m.space.prob(w).clone(),
                cone: k.clone(),
            });
        }
        ScenarioTree::new(nodes).expect("a market is a valid one-period tree")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn assets(&self) -> usize {
        self.assets
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    /// Leaf node indices in ascending order.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    /// Unconditional probability of reaching a node.
    pub fn path_prob(&self, i: usize) -> Rat {
        let mut p = self.nodes[i].prob.clone();
        let mut cur = i;
        while let Some(par) = self.nodes[cur].parent {
            p *= &self.nodes[par].prob;
            cur = par;
        }
        p
    }

    /// Node indices on the path from the root to `i`, inclusive.
    pub fn path(&self, i: usize) -> Vec<usize> {
        let mut path = vec![i];
        let mut cur = i;
        while let Some(par) = self.nodes[cur].parent {
            path.push(par);
            cur = par;
        }
        path.reverse();
        path
    }
}

/// The feasibility cone of self-financing trading: variables (u, k_v per
/// node) with k_v in the node cone; the terminal map sends them to the
/// portfolio u - sum of path increments held at each leaf.
#[derive(Clone, Debug)]
pub struct SelfFinancingCone {
    /// polyhedron over (u, k_0, ..., k_{N-1}) in R^{d(1+N)}
    pub feasible: Polyhedron,
    /// one row block of d rows per leaf: terminal holdings as a linear map
    pub terminal_map: QMat,
    /// leaf order used by `terminal_map`
    pub leaves: Vec<usize>,
}

pub fn selffinancing_cone(tree: &ScenarioTree) -> SelfFinancingCone {
    let d = tree.assets();
    let n = tree.len();
    let dim = d * (1 + n);
    let mut h = HRep::new(dim);
    for v in 0..n {
        let block = d * (1 + v);
        for c in &tree.node(v).cone.cone().hrep().inequalities {
            let mut nrm = zeros(dim);
            nrm[block..block + d].clone_from_slice(&c.normal);
            h.inequalities.push(Constraint::homogeneous(nrm));
        }
        for c in &tree.node(v).cone.cone().hrep().equalities {
            let mut nrm = zeros(dim);
            nrm[block..block + d].clone_from_slice(&c.normal);
            h.equalities.push(Constraint::homogeneous(nrm));
        }
    }
    let leaves = tree.leaves();
    let mut terminal_map = Vec::with_capacity(leaves.len() * d);
    for &leaf in &leaves {
        let path = tree.path(leaf);
        for j in 0..d {
            let mut row = zeros(dim);
            row[j] = Rat::one();
            for &v in &path {
                row[d * (1 + v) + j] = -Rat::one();
            }
            terminal_map.push(row);
        }
    }
    SelfFinancingCone {
        feasible: Polyhedron::from_hrep(h),
        terminal_map,
        leaves,
    }
}

fn check_claim(tree: &ScenarioTree, x: &[QVec]) -> Result<(), SuperhedgeError> {
    let leaves = tree.leaves();
    if x.len() != leaves.len() || x.iter().any(|v| v.len() != tree.assets()) {
        return Err(SuperhedgeError::ShapeMismatch);
    }
    Ok(())
}

/// Initial endowments superhedging the leaf-indexed claim: those u for which
/// a self-financing process reaches the claim exactly. Computed by
/// eliminating the trade variables leaf-upward (each step is an exact
/// intersection plus a cone sum in R^d).
pub fn superhedge_set(tree: &ScenarioTree, x: &[QVec]) -> Result<Polyhedron, SuperhedgeError> {
    check_claim(tree, x)?;
    let leaves = tree.leaves();
    let leaf_pos = |i: usize| leaves.iter().position(|&l| l == i).expect("leaf index");
    let mut sets: Vec<Option<Polyhedron>> = vec![None; tree.len()];
    for v in (0..tree.len()).rev() {
        let inner = if tree.is_leaf(v) {
            Polyhedron::single_point(x[leaf_pos(v)].clone())
        } else {
            let mut it = tree.children(v).iter();
            let first = *it.next().expect("internal node has children");
            let mut inter = sets[first].clone().expect("child already computed");
            for &c in it {
                inter = inter.intersect(sets[c].as_ref().expect("child computed"))?;
            }
            inter
        };
        sets[v] = Some(inner.minkowski_sum(tree.node(v).cone.cone())?);
    }
    Ok(sets[0].take().expect("root computed"))
}

/// The same set by literal projection of the full feasibility polyhedron;
/// exponentially more expensive, kept as the definitional cross-check.
pub fn superhedge_set_by_projection(
    tree: &ScenarioTree,
    x: &[QVec],
) -> Result<Polyhedron, SuperhedgeError> {
    check_claim(tree, x)?;
    let d = tree.assets();
    let sf = selffinancing_cone(tree);
    let mut h = sf.feasible.hrep().clone();
    for (pos, _) in sf.leaves.iter().enumerate() {
        for j in 0..d {
            let row = sf.terminal_map[pos * d + j].clone();
            h.equalities.push(Constraint::new(row, x[pos][j].clone()));
        }
    }
    Ok(Polyhedron::from_hrep(h).project(&(0..d).collect::<Vec<_>>())?)
}

/// A node-indexed candidate pricing process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PricingProcess {
    pub z: Vec<QVec>,
}

impl PricingProcess {
    /// Exact invariant check: martingale identities and membership of every
    /// node value in the node's dual cone.
    pub fn verify(&self, tree: &ScenarioTree) -> Result<(), SuperhedgeError> {
        if self.z.len() != tree.len() || self.z.iter().any(|v| v.len() != tree.assets()) {
            return Err(SuperhedgeError::ShapeMismatch);
        }
        for v in 0..tree.len() {
            if !tree.is_leaf(v) {
                let mut expect = zeros(tree.assets());
                for &c in tree.children(v) {
                    for (e, zc) in expect.iter_mut().zip(&self.z[c]) {
                        *e += &tree.node(c).prob * zc;
                    }
                }
                if expect != self.z[v] {
                    return Err(SuperhedgeError::InvalidProcess(format!(
                        "martingale identity fails at node {v}"
                    )));
                }
            }
            if !tree.node(v).cone.dual().contains(&self.z[v])? {
                return Err(SuperhedgeError::InvalidProcess(format!(
                    "value at node {v} leaves the dual cone"
                )));
            }
        }
        Ok(())
    }

    /// Every node value nonzero (the pricing-process requirement).
    pub fn is_everywhere_nonzero(&self) -> bool {
        self.z.iter().all(|v| v.iter().any(|c| !c.is_zero()))
    }
}

/// H-representation of the cone of candidate processes, with the indices of
/// the rows that a strictly consistent process must satisfy strictly.
fn cpp_cone_rows(tree: &ScenarioTree) -> (HRep, Vec<usize>) {
    let d = tree.assets();
    let n = tree.len();
    let dim = d * n;
    let mut h = HRep::new(dim);
    let mut strict = Vec::new();
    for v in 0..n {
        let cone = tree.node(v).cone.cone();
        for r in &cone.vrep().rays {
            let mut nrm = zeros(dim);
            nrm[v * d..(v + 1) * d].clone_from_slice(r);
            strict.push(h.inequalities.len());
            h.inequalities.push(Constraint::homogeneous(nrm));
        }
        for l in &cone.vrep().lineality {
            let mut nrm = zeros(dim);
            nrm[v * d..(v + 1) * d].clone_from_slice(l);
            h.equalities.push(Constraint::homogeneous(nrm));
        }
        if !tree.is_leaf(v) {
            for j in 0..d {
                let mut nrm = zeros(dim);
                nrm[v * d + j] = Rat::one();
                for &c in tree.children(v) {
                    nrm[c * d + j] = -tree.node(c).prob.clone();
                }
                h.equalities.push(Constraint::homogeneous(nrm));
            }
        }
    }
    (h, strict)
}

/// Extreme rays of the consistent-pricing cone, one process per ray. The
/// list may be empty.
pub fn consistent_pricing_generators(tree: &ScenarioTree) -> Vec<PricingProcess> {
    let d = tree.assets();
    let (h, _) = cpp_cone_rows(tree);
    let poly = Polyhedron::from_hrep(h);
    debug_assert!(poly.vrep().lineality.is_empty(), "pricing cone is pointed");
    poly.vrep()
        .rays
        .iter()
        .map(|ray| PricingProcess {
            z: (0..tree.len())
                .map(|v| ray[v * d..(v + 1) * d].to_vec())
                .collect(),
        })
        .collect()
}

/// Operational robust no-arbitrage: a process strictly inside every node's
/// dual cone (strict on all ray-generated rows, equal on lineality rows),
/// decided by a strict-feasibility program on the pricing cone.
pub fn strict_cpp_exists(tree: &ScenarioTree) -> bool {
    let (h, strict) = cpp_cone_rows(tree);
    strict_feasible(&h, &strict).is_some()
}

/// The same predicate from an already enumerated generator list: the sum of
/// all extreme rays lies in the relative interior of the pointed pricing
/// cone, so a strictly consistent process exists iff that sum satisfies
/// every node's strict rows.
fn strict_among_generators(tree: &ScenarioTree, gens: &[PricingProcess]) -> bool {
    if gens.is_empty() {
        return false;
    }
    let d = tree.assets();
    let mut total = vec![zeros(d); tree.len()];
    for g in gens {
        for (t, z) in total.iter_mut().zip(&g.z) {
            for (ti, zi) in t.iter_mut().zip(z) {
                *ti += zi;
            }
        }
    }
    (0..tree.len()).all(|v| {
        tree.node(v)
            .cone
            .cone()
            .vrep()
            .rays
            .iter()
            .all(|r| dot(r, &total[v]).is_positive())
    })
}

/// Dual superhedging set: intersection over the pricing generators Z of
/// {u : E[X . Z_T] <= u . Z_0}. Requires the strict no-arbitrage property;
/// the result then equals `superhedge_set` exactly.
pub fn superhedge_dual(tree: &ScenarioTree, x: &[QVec]) -> Result<Polyhedron, SuperhedgeError> {
    check_claim(tree, x)?;
    let gens = consistent_pricing_generators(tree);
    if !strict_among_generators(tree, &gens) {
        return Err(SuperhedgeError::NoArbitrageViolated);
    }
    let d = tree.assets();
    let leaves = tree.leaves();
    let mut h = HRep::new(d);
    for proc in &gens {
        let mut rhs = Rat::zero();
        for (pos, &leaf) in leaves.iter().enumerate() {
            rhs += tree.path_prob(leaf) * dot(&x[pos], &proc.z[leaf]);
        }
        h.inequalities.push(Constraint::new(proc.z[0].clone(), rhs));
    }
    Ok(Polyhedron::from_hrep(h))
}

/// The measure/weight pair induced by a pricing process: w = Z_0 and one
/// probability measure per asset built from the leaf values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDualPair {
    /// per leaf (in ascending leaf order), the d measure masses
    pub q: Vec<QVec>,
    pub w: QVec,
}

/// Change of variables from a verified pricing process to its pair, checking
/// the dynamic coupling: the conditional expectations of diag(w) dQ/dP
/// reproduce the process at every node.
pub fn cpp_to_dualpair(
    tree: &ScenarioTree,
    proc: &PricingProcess,
) -> Result<TreeDualPair, SuperhedgeError> {
    proc.verify(tree)?;
    let d = tree.assets();
    let leaves = tree.leaves();
    let w = proc.z[0].clone();
    let q: Vec<QVec> = leaves
        .iter()
        .map(|&leaf| {
            let pp = tree.path_prob(leaf);
            (0..d)
                .map(|i| {
                    if w[i].is_zero() {
                        pp.clone()
                    } else {
                        &pp * &proc.z[leaf][i] / &w[i]
                    }
                })
                .collect()
        })
        .collect();
    // dynamic coupling: conditional expectations of the leaf masses agree
    // with the process (this is the martingale identity, re-derived from q)
    for v in 0..tree.len() {
        let pv = tree.path_prob(v);
        let mut cond = zeros(d);
        for (pos, &leaf) in leaves.iter().enumerate() {
            if !tree.path(leaf).contains(&v) {
                continue;
            }
            let pl = tree.path_prob(leaf);
            for i in 0..d {
                let density = if w[i].is_zero() {
                    Rat::zero()
                } else {
                    &w[i] * &q[pos][i] / &pl
                };
                cond[i] += &pl / &pv * density;
            }
        }
        for i in 0..d {
            let expected = if w[i].is_zero() {
                Rat::zero()
            } else {
                proc.z[v][i].clone()
            };
            if cond[i] != expected {
                return Err(SuperhedgeError::InvalidProcess(format!(
                    "dynamic coupling fails at node {v}, component {i}"
                )));
            }
        }
    }
    Ok(TreeDualPair { q, w })
}

/// Inverse change of variables: Z_T = diag(w) dQ/dP on the leaves, inner
/// nodes by conditional expectation.
pub fn dualpair_to_cpp(tree: &ScenarioTree, pair: &TreeDualPair) -> PricingProcess {
    let d = tree.assets();
    let leaves = tree.leaves();
    let mut z = vec![zeros(d); tree.len()];
    for (pos, &leaf) in leaves.iter().enumerate() {
        let pp = tree.path_prob(leaf);
        for i in 0..d {
            z[leaf][i] = &pair.w[i] * &pair.q[pos][i] / &pp;
        }
    }
    for v in (0..tree.len()).rev() {
        if tree.is_leaf(v) {
            continue;
        }
        let mut e = zeros(d);
        for &c in tree.children(v) {
            for (ei, zc) in e.iter_mut().zip(&z[c]) {
                *ei += &tree.node(c).prob * zc;
            }
        }
        z[v] = e;
    }
    PricingProcess { z }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::frictionless_cone;
    use crate::polyhedra::Polyhedron;
    use crate::rational::{qvec, rat, ratio};
    use crate::testfix;

    pub fn toy_tree() -> ScenarioTree {
        ScenarioTree::one_period(&testfix::toy_market())
    }

    /// Binary two-period frictionless tree: asset-2 price 1, up factor 2,
    /// down factor 1/2, branch probabilities 1/2.
    pub fn bin2_tree() -> ScenarioTree {
        let price = |s: Rat| frictionless_cone(&[rat(1), s]).unwrap();
        let half = ratio(1, 2);
        let nodes = vec![
            TreeNode {
                parent: None,
                prob: rat(1),
                cone: price(rat(1)),
            },
            TreeNode {
                parent: Some(0),
                prob: half.clone(),
                cone: price(rat(2)),
            },
            TreeNode {
                parent: Some(0),
                prob: half.clone(),
                cone: price(half.clone()),
            },
            TreeNode {
                parent: Some(1),
                prob: half.clone(),
                cone: price(rat(4)),
            },
            TreeNode {
                parent: Some(1),
                prob: half.clone(),
                cone: price(rat(1)),
            },
            TreeNode {
                parent: Some(2),
                prob: half.clone(),
                cone: price(rat(1)),
            },
            TreeNode {
                parent: Some(2),
                prob: half,
                cone: price(ratio(1, 4)),
            },
        ];
        ScenarioTree::new(nodes).unwrap()
    }

    #[test]
    fn tree_validation() {
        assert!(toy_tree().horizon() == 1);
        let bad = ScenarioTree::new(vec![TreeNode {
            parent: None,
            prob: rat(1),
            cone: frictionless_cone(&qvec(&[1, 1])).unwrap(),
        }]);
        assert!(bad.is_err()); // no period

        // children probabilities must sum to one
        let err = ScenarioTree::new(vec![
            TreeNode {
                parent: None,
                prob: rat(1),
                cone: frictionless_cone(&qvec(&[1, 1])).unwrap(),
            },
            TreeNode {
                parent: Some(0),
                prob: ratio(1, 2),
                cone: frictionless_cone(&qvec(&[1, 1])).unwrap(),
            },
        ]);
        assert!(err.is_err());
    }

    #[test]
    fn one_period_superhedge_matches_worst_case() {
        let m = testfix::toy_market();
        let tree = toy_tree();
        let claim: Vec<_> = testfix::toy_claim().neg().values().to_vec();
        let sh = superhedge_set(&tree, &claim).unwrap();
        let wc = crate::acceptance::worst_case_acceptance(&m).unwrap();
        let risk = crate::riskmeasure::evaluate(&wc, &testfix::toy_claim()).unwrap();
        assert_eq!(&sh, risk.single_m());
        assert_eq!(sh, Polyhedron::halfspace(qvec(&[1, 1]), rat(10)));
    }

    #[test]
    fn projection_route_agrees_with_backward_induction() {
        let tree = toy_tree();
        let claim: Vec<_> = testfix::toy_claim().neg().values().to_vec();
        let a = superhedge_set(&tree, &claim).unwrap();
        let b = superhedge_set_by_projection(&tree, &claim).unwrap();
        assert_eq!(a, b);

        let bin = bin2_tree();
        let call = vec![qvec(&[3, 0]), qvec(&[0, 0]), qvec(&[0, 0]), qvec(&[0, 0])];
        let c = superhedge_set(&bin, &call).unwrap();
        let d = superhedge_set_by_projection(&bin, &call).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn orthant_cones_mean_componentwise_domination() {
        let k = crate::market::SolvencyCone::new(Polyhedron::orthant(2)).unwrap();
        let nodes = vec![
            TreeNode {
                parent: None,
                prob: rat(1),
                cone: k.clone(),
            },
            TreeNode {
                parent: Some(0),
                prob: ratio(1, 2),
                cone: k.clone(),
            },
            TreeNode {
                parent: Some(0),
                prob: ratio(1, 2),
                cone: k,
            },
        ];
        let tree = ScenarioTree::new(nodes).unwrap();
        let claim = vec![qvec(&[1, -2]), qvec(&[0, 3])];
        let sh = superhedge_set(&tree, &claim).unwrap();
        let expected = Polyhedron::from_hrep(
            HRep::new(2)
                .ineq(qvec(&[1, 0]), rat(1))
                .ineq(qvec(&[0, 1]), rat(3)),
        );
        assert_eq!(sh, expected);
    }

    #[test]
    fn superhedging_zero_needs_nothing_beyond_disposal() {
        let tree = toy_tree();
        let claim = vec![qvec(&[0, 0]); 3];
        let sh = superhedge_set(&tree, &claim).unwrap();
        let k0 = testfix::toy_market().k_initial;
        assert!(k0.cone().subset(&sh).unwrap());
        assert!(sh.contains(&qvec(&[0, 0])).unwrap());
    }

    #[test]
    fn toy_pricing_generators_match_one_period_duals() {
        let tree = toy_tree();
        let gens = consistent_pricing_generators(&tree);
        assert_eq!(gens.len(), 2);
        for g in &gens {
            g.verify(&tree).unwrap();
        }
        // flattened canonical rays: (z_root | z_leaf1 | z_leaf2 | z_leaf3)
        let flat: Vec<QVec> = gens
            .iter()
            .map(|g| g.z.iter().flatten().cloned().collect())
            .collect();
        assert_eq!(flat[0], qvec(&[1, 1, 0, 0, 3, 3, 0, 0]));
        assert_eq!(flat[1], qvec(&[1, 1, 1, 2, 0, 0, 2, 1]));
    }

    #[test]
    fn strict_process_tests() {
        assert!(strict_cpp_exists(&toy_tree()));
        assert!(strict_cpp_exists(&bin2_tree()));

        // a one-to-one initial exchange against a deterministic 3:1 terminal
        // rate admits no consistent process at all
        let nodes = vec![
            TreeNode {
                parent: None,
                prob: rat(1),
                cone: frictionless_cone(&qvec(&[1, 1])).unwrap(),
            },
            TreeNode {
                parent: Some(0),
                prob: rat(1),
                cone: frictionless_cone(&[rat(1), ratio(1, 3)]).unwrap(),
            },
        ];
        let tree = ScenarioTree::new(nodes).unwrap();
        assert!(!strict_cpp_exists(&tree));
        assert!(consistent_pricing_generators(&tree).is_empty());
        assert_eq!(
            superhedge_dual(&tree, &[qvec(&[0, 0])]).unwrap_err(),
            SuperhedgeError::NoArbitrageViolated
        );
    }

    #[test]
    fn dual_superhedge_equals_primal_on_toy_and_bin2() {
        let tree = toy_tree();
        let claim: Vec<_> = testfix::toy_claim().neg().values().to_vec();
        assert_eq!(
            superhedge_dual(&tree, &claim).unwrap(),
            superhedge_set(&tree, &claim).unwrap()
        );

        let bin = bin2_tree();
        let call = vec![qvec(&[3, 0]), qvec(&[0, 0]), qvec(&[0, 0]), qvec(&[0, 0])];
        assert_eq!(
            superhedge_dual(&bin, &call).unwrap(),
            superhedge_set(&bin, &call).unwrap()
        );
    }

    #[test]
    fn bin2_call_matches_replication_price() {
        // risk-neutral up-probability 1/3 at every node; the cash value of
        // the call with strike 1 on asset 2 is 3 at the top leaf, so the
        // replication price is (1/3)^2 * 3 = 1/3 and the superhedging set is
        // the halfspace u1 + 1 * u2 >= 1/3.
        let bin = bin2_tree();
        let call = vec![qvec(&[3, 0]), qvec(&[0, 0]), qvec(&[0, 0]), qvec(&[0, 0])];
        let sh = superhedge_set(&bin, &call).unwrap();
        let expected = Polyhedron::halfspace(qvec(&[1, 1]), ratio(1, 3));
        assert_eq!(sh, expected);
    }

    #[test]
    fn superhedge_translativity_and_monotonicity() {
        let tree = toy_tree();
        let claim: Vec<_> = testfix::toy_claim().neg().values().to_vec();
        let base = superhedge_set(&tree, &claim).unwrap();

        let shift = qvec(&[3, -1]);
        let shifted_claim: Vec<QVec> = claim
            .iter()
            .map(|v| crate::rational::add(v, &shift))
            .collect();
        let shifted = superhedge_set(&tree, &shifted_claim).unwrap();
        assert_eq!(shifted, base.translate(&shift).unwrap());

        // dominated claims are easier to hedge
        let smaller: Vec<QVec> = claim
            .iter()
            .map(|v| crate::rational::sub(v, &qvec(&[1, 0])))
            .collect();
        let sh_small = superhedge_set(&tree, &smaller).unwrap();
        assert!(base.subset(&sh_small).unwrap());
    }

    #[test]
    fn pair_round_trip() {
        let tree = toy_tree();
        let gens = consistent_pricing_generators(&tree);
        for g in &gens {
            let pair = cpp_to_dualpair(&tree, g).unwrap();
            assert_eq!(pair.w, g.z[0]);
            let back = dualpair_to_cpp(&tree, &pair);
            assert_eq!(&back, g);
        }

        // a constant process has the reference measure in every component
        let k = crate::market::SolvencyCone::new(Polyhedron::orthant(2)).unwrap();
        let nodes = vec![
            TreeNode {
                parent: None,
                prob: rat(1),
                cone: k.clone(),
            },
            TreeNode {
                parent: Some(0),
                prob: ratio(1, 3),
                cone: k.clone(),
            },
            TreeNode {
                parent: Some(0),
                prob: ratio(2, 3),
                cone: k,
            },
        ];
        let tree2 = ScenarioTree::new(nodes).unwrap();
        let constant = PricingProcess {
            z: vec![qvec(&[2, 5]); 3],
        };
        let pair = cpp_to_dualpair(&tree2, &constant).unwrap();
        assert_eq!(pair.w, qvec(&[2, 5]));
        assert_eq!(pair.q[0], vec![ratio(1, 3), ratio(1, 3)]);
        assert_eq!(pair.q[1], vec![ratio(2, 3), ratio(2, 3)]);
    }

    #[test]
    fn deterministic_single_branch_tree() {
        // one path, constant cone: the pricing generators are the constant
        // dual-ray processes
        let k = frictionless_cone(&qvec(&[1, 2])).unwrap();
        let nodes = vec![
            TreeNode {
                parent: None,
                prob: rat(1),
                cone: k.clone(),
            },
            TreeNode {
                parent: Some(0),
                prob: rat(1),
                cone: k.clone(),
            },
            TreeNode {
                parent: Some(1),
                prob: rat(1),
                cone: k,
            },
        ];
        let tree = ScenarioTree::new(nodes).unwrap();
        let gens = consistent_pricing_generators(&tree);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].z, vec![qvec(&[1, 2]); 3]);
        assert!(strict_cpp_exists(&tree));
    }

    #[test]
    fn selffinancing_cone_structure() {
        let tree = toy_tree();
        let sf = selffinancing_cone(&tree);
        assert_eq!(sf.feasible.dim(), 2 * (1 + 4));
        assert_eq!(sf.leaves, vec![1, 2, 3]);
        assert_eq!(sf.terminal_map.len(), 6);
        // a pure-disposal plan: u = 0 and all increments 0 is feasible
        assert!(sf.feasible.contains(&zeros(10)).unwrap());
    }
}
