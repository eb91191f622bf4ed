//! Text model format: markets or trees, claims and task blocks in JSON with
//! every rational written as a string `"p/q"`, plus canonical serialization
//! of polyhedra, risk sets and reports. Output field order is fixed by the
//! struct definitions, so serialized results are byte-stable.

use crate::market::{
    EligibleSpace, MarketError, OnePeriodMarket, RandomPortfolio, ScenarioSpace, SolvencyCone,
};
use crate::polyhedra::{Constraint, GeomError, HRep, Polyhedron, VRep};
use crate::rational::{dot, format_rat, parse_rat, QVec, Rat};
use crate::riskmeasure::RiskSet;
use crate::superhedge::{ScenarioTree, SuperhedgeError, TreeNode};
use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    Structure(String),
    #[error("invalid market: {0}")]
    Market(#[from] MarketError),
    #[error("invalid tree: {0}")]
    Tree(#[from] SuperhedgeError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

fn rats(path: &str, xs: &[String]) -> Result<QVec, IoError> {
    xs.iter()
        .map(|s| parse_rat(s).map_err(|e| IoError::Parse(format!("{path}: {e}"))))
        .collect()
}

fn rat1(path: &str, s: &str) -> Result<Rat, IoError> {
    parse_rat(s).map_err(|e| IoError::Parse(format!("{path}: {e}")))
}

// ---------------------------------------------------------------- schema --

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct DocDto {
    version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    eligible: Option<EligibleDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    market: Option<MarketDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<TreeDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    claims: Vec<ClaimDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tasks: Vec<TaskSpec>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct EligibleDto {
    basis: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct MarketDto {
    probs: Vec<String>,
    k_initial: ConeDto,
    k_terminal: Vec<ConeDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct TreeDto {
    nodes: Vec<NodeDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct NodeDto {
    parent: Option<usize>,
    prob: String,
    cone: ConeDto,
}

/// A cone block: either inequality/equality normals or generators.
#[derive(Serialize, Deserialize, Debug, Clone, Default)]
#[serde(deny_unknown_fields)]
struct ConeDto {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inequalities: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    equalities: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generators: Option<GeneratorsDto>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct GeneratorsDto {
    #[serde(default)]
    rays: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    lineality: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct ClaimDto {
    name: String,
    values: Vec<Vec<String>>,
}

/// Task blocks as they appear in model files.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TaskSpec {
    Validate,
    Risk {
        claim: String,
        #[serde(default)]
        measure: MeasureKind,
    },
    Dual {
        claim: String,
        #[serde(default)]
        measure: MeasureKind,
    },
    Scalarize {
        claim: String,
        v: Vec<String>,
        #[serde(default)]
        measure: MeasureKind,
    },
    Var {
        claim: String,
        alpha: String,
        #[serde(default)]
        ki_augment: bool,
    },
    Avar {
        claim: String,
        lambda: Vec<String>,
    },
    Superhedge {
        claim: String,
        #[serde(default)]
        dual: bool,
    },
    Check {
        what: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        claims: Option<Vec<String>>,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    #[default]
    WorstCase,
    TerminalCone,
}

// ----------------------------------------------------------------- model --

#[derive(Clone, Debug)]
pub enum ModelKind {
    Market(OnePeriodMarket),
    Tree(ScenarioTree),
}

#[derive(Clone, Debug)]
pub struct NamedClaim {
    pub name: String,
    pub values: Vec<QVec>,
}

impl NamedClaim {
    pub fn portfolio(&self) -> RandomPortfolio {
        RandomPortfolio::new(self.values.clone())
    }
}

#[derive(Clone, Debug)]
pub struct ModelDocument {
    pub version: String,
    pub model: ModelKind,
    pub claims: Vec<NamedClaim>,
    pub tasks: Vec<TaskSpec>,
}

impl ModelDocument {
    pub fn market(&self) -> Option<&OnePeriodMarket> {
        match &self.model {
            ModelKind::Market(m) => Some(m),
            ModelKind::Tree(_) => None,
        }
    }

    pub fn tree(&self) -> Option<&ScenarioTree> {
        match &self.model {
            ModelKind::Tree(t) => Some(t),
            ModelKind::Market(_) => None,
        }
    }

    pub fn claim(&self, name: &str) -> Option<&NamedClaim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

fn cone_from_dto(path: &str, dto: &ConeDto, dim: Option<usize>) -> Result<Polyhedron, IoError> {
    let has_rows = !dto.inequalities.is_empty() || !dto.equalities.is_empty();
    let poly = match (&dto.generators, has_rows) {
        (Some(_), true) => {
            return Err(IoError::Structure(format!(
                "{path}: a cone carries either generators or inequalities, not both"
            )))
        }
        (Some(g), false) => {
            let rays = g
                .rays
                .iter()
                .enumerate()
                .map(|(i, r)| rats(&format!("{path}.generators.rays[{i}]"), r))
                .collect::<Result<Vec<_>, _>>()?;
            let lineality = g
                .lineality
                .iter()
                .enumerate()
                .map(|(i, r)| rats(&format!("{path}.generators.lineality[{i}]"), r))
                .collect::<Result<Vec<_>, _>>()?;
            let d = rays
                .first()
                .or(lineality.first())
                .map(|v| v.len())
                .or(dim)
                .ok_or_else(|| {
                    IoError::Structure(format!("{path}: cannot infer the cone dimension"))
                })?;
            Polyhedron::from_vrep(VRep::cone(d, rays, lineality))
        }
        (None, true) => {
            let d = dto
                .inequalities
                .first()
                .or(dto.equalities.first())
                .map(|v| v.len())
                .or(dim)
                .ok_or_else(|| {
                    IoError::Structure(format!("{path}: cannot infer the cone dimension"))
                })?;
            let mut h = HRep::new(d);
            for (i, row) in dto.inequalities.iter().enumerate() {
                h.inequalities.push(Constraint::homogeneous(rats(
                    &format!("{path}.inequalities[{i}]"),
                    row,
                )?));
            }
            for (i, row) in dto.equalities.iter().enumerate() {
                h.equalities.push(Constraint::homogeneous(rats(
                    &format!("{path}.equalities[{i}]"),
                    row,
                )?));
            }
            Polyhedron::from_hrep(h)
        }
        (None, false) => return Err(IoError::Structure(format!("{path}: empty cone block"))),
    };
    if let Some(d) = dim {
        if poly.dim() != d {
            return Err(IoError::Structure(format!(
                "{path}: cone dimension {} does not match the model dimension {d}",
                poly.dim()
            )));
        }
    }
    Ok(poly)
}

fn cone_to_dto(p: &Polyhedron) -> ConeDto {
    ConeDto {
        inequalities: p
            .hrep()
            .inequalities
            .iter()
            .map(|c| c.normal.iter().map(format_rat).collect())
            .collect(),
        equalities: p
            .hrep()
            .equalities
            .iter()
            .map(|c| c.normal.iter().map(format_rat).collect())
            .collect(),
        generators: None,
    }
}

/// Parse and structurally validate a model document. Every rational literal
/// is read exactly; no floating point is involved at any stage.
pub fn parse(text: &str) -> Result<ModelDocument, IoError> {
    let dto: DocDto = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if dto.version != "1" {
        return Err(IoError::Structure(format!(
            "unsupported version `{}`",
            dto.version
        )));
    }
    let model = match (&dto.market, &dto.tree) {
        (Some(_), Some(_)) => {
            return Err(IoError::Structure(
                "a document holds either a market or a tree, not both".into(),
            ))
        }
        (None, None) => {
            return Err(IoError::Structure(
                "a document needs a market or a tree".into(),
            ))
        }
        (Some(mk), None) => {
            let probs = rats("market.probs", &mk.probs)?;
            let space = ScenarioSpace::new(probs)?;
            let ki = SolvencyCone::new(cone_from_dto("market.k_initial", &mk.k_initial, None)?)?;
            let d = ki.dim();
            let kt = mk
                .k_terminal
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    Ok(SolvencyCone::new(cone_from_dto(
                        &format!("market.k_terminal[{i}]"),
                        c,
                        Some(d),
                    )?)?)
                })
                .collect::<Result<Vec<_>, IoError>>()?;
            let eligible = match &dto.eligible {
                None => EligibleSpace::full(d),
                Some(e) => {
                    let basis = e
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(i, b)| rats(&format!("eligible.basis[{i}]"), b))
                        .collect::<Result<Vec<_>, _>>()?;
                    EligibleSpace::new(d, basis)?
                }
            };
            ModelKind::Market(OnePeriodMarket::new(space, ki, kt, eligible)?)
        }
        (None, Some(tr)) => {
            if dto.eligible.is_some() {
                return Err(IoError::Structure(
                    "tree models fix the eligible space to the full asset space".into(),
                ));
            }
            let nodes = tr
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let path = format!("tree.nodes[{i}]");
                    Ok(TreeNode {
                        parent: n.parent,
                        prob: rat1(&format!("{path}.prob"), &n.prob)?,
                        cone: SolvencyCone::new(cone_from_dto(
                            &format!("{path}.cone"),
                            &n.cone,
                            None,
                        )?)?,
                    })
                })
                .collect::<Result<Vec<_>, IoError>>()?;
            ModelKind::Tree(ScenarioTree::new(nodes)?)
        }
    };

    let (rows, d) = match &model {
        ModelKind::Market(m) => (m.scenarios(), m.assets()),
        ModelKind::Tree(t) => (t.leaves().len(), t.assets()),
    };
    let mut claims = Vec::new();
    for (i, c) in dto.claims.iter().enumerate() {
        let path = format!("claims[{i}]");
        if claims.iter().any(|k: &NamedClaim| k.name == c.name) {
            return Err(IoError::Structure(format!(
                "{path}: duplicate claim name `{}`",
                c.name
            )));
        }
        if c.values.len() != rows {
            return Err(IoError::Structure(format!(
                "{path}: {} rows, model expects {rows}",
                c.values.len()
            )));
        }
        let values = c
            .values
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let v = rats(&format!("{path}.values[{j}]"), row)?;
                if v.len() != d {
                    return Err(IoError::Structure(format!(
                        "{path}.values[{j}]: {} components, model has {d} assets",
                        v.len()
                    )));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        claims.push(NamedClaim {
            name: c.name.clone(),
            values,
        });
    }

    for (i, t) in dto.tasks.iter().enumerate() {
        let named = |name: &str| -> Result<(), IoError> {
            if claims.iter().any(|c| c.name == name) {
                Ok(())
            } else {
                Err(IoError::Structure(format!(
                    "tasks[{i}] refers to unknown claim `{name}`"
                )))
            }
        };
        match t {
            TaskSpec::Risk { claim, .. }
            | TaskSpec::Dual { claim, .. }
            | TaskSpec::Var { claim, .. }
            | TaskSpec::Avar { claim, .. }
            | TaskSpec::Superhedge { claim, .. } => named(claim)?,
            TaskSpec::Scalarize { claim, v, .. } => {
                named(claim)?;
                if v.len() != d {
                    return Err(IoError::Structure(format!(
                        "tasks[{i}]: pricing vector has {} components, model has {d} assets",
                        v.len()
                    )));
                }
            }
            TaskSpec::Check { what, claims: cs } => {
                if what != "primal-dual" {
                    return Err(IoError::Structure(format!(
                        "tasks[{i}]: unknown check `{what}`"
                    )));
                }
                if let Some(cs) = cs {
                    for c in cs {
                        named(c)?;
                    }
                }
            }
            TaskSpec::Validate => {}
        }
    }

    Ok(ModelDocument {
        version: dto.version,
        model,
        claims,
        tasks: dto.tasks,
    })
}

/// Canonical re-emission of a document: cones as canonical inequality
/// blocks, rationals as strings. parse(serialize(doc)) reproduces the
/// document exactly.
pub fn serialize_document(doc: &ModelDocument) -> String {
    let (eligible, market, tree) = match &doc.model {
        ModelKind::Market(m) => {
            let eligible = if m.eligible.is_full() {
                None
            } else {
                Some(EligibleDto {
                    basis: m
                        .eligible
                        .basis()
                        .iter()
                        .map(|b| b.iter().map(format_rat).collect())
                        .collect(),
                })
            };
            let market = MarketDto {
                probs: m.space.probs().iter().map(format_rat).collect(),
                k_initial: cone_to_dto(m.k_initial.cone()),
                k_terminal: m.k_terminal.iter().map(|k| cone_to_dto(k.cone())).collect(),
            };
            (eligible, Some(market), None)
        }
        ModelKind::Tree(t) => {
            let tree = TreeDto {
                nodes: (0..t.len())
                    .map(|i| NodeDto {
                        parent: t.node(i).parent,
                        prob: format_rat(&t.node(i).prob),
                        cone: cone_to_dto(t.node(i).cone.cone()),
                    })
                    .collect(),
            };
            (None, None, Some(tree))
        }
    };
    let dto = DocDto {
        version: doc.version.clone(),
        eligible,
        market,
        tree,
        claims: doc
            .claims
            .iter()
            .map(|c| ClaimDto {
                name: c.name.clone(),
                values: c
                    .values
                    .iter()
                    .map(|row| row.iter().map(format_rat).collect())
                    .collect(),
            })
            .collect(),
        tasks: doc.tasks.clone(),
    };
    serde_json::to_string_pretty(&dto).expect("document serialization cannot fail")
}

// --------------------------------------------------------------- results --

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ConstraintDoc {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct HRepDoc {
    pub inequalities: Vec<ConstraintDoc>,
    pub equalities: Vec<ConstraintDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct VRepDoc {
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    pub lineality: Vec<Vec<String>>,
}

/// Ordered boundary walk of a pointed two-dimensional polyhedron.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WalkDoc {
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_ray: Option<Vec<String>>,
    pub chain: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_ray: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PolyhedronDoc {
    pub dim: usize,
    pub empty: bool,
    pub hrep: HRepDoc,
    pub vrep: VRepDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkDoc>,
}

fn fmt_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

pub fn polyhedron_doc(p: &Polyhedron) -> PolyhedronDoc {
    PolyhedronDoc {
        dim: p.dim(),
        empty: p.is_empty(),
        hrep: HRepDoc {
            inequalities: p
                .hrep()
                .inequalities
                .iter()
                .map(|c| ConstraintDoc {
                    normal: fmt_vec(&c.normal),
                    offset: format_rat(&c.offset),
                })
                .collect(),
            equalities: p
                .hrep()
                .equalities
                .iter()
                .map(|c| ConstraintDoc {
                    normal: fmt_vec(&c.normal),
                    offset: format_rat(&c.offset),
                })
                .collect(),
        },
        vrep: VRepDoc {
            vertices: p.vrep().vertices.iter().map(|v| fmt_vec(v)).collect(),
            rays: p.vrep().rays.iter().map(|v| fmt_vec(v)).collect(),
            lineality: p.vrep().lineality.iter().map(|v| fmt_vec(v)).collect(),
        },
        walk: walk_2d(p),
    }
}

/// Boundary walk of a pointed 2-D polyhedron: the vertex chain in order,
/// with the escaping rays attached at the open ends. None when the set is
/// empty, not two-dimensional, or has lineality.
fn walk_2d(p: &Polyhedron) -> Option<WalkDoc> {
    if p.dim() != 2 || p.is_empty() || !p.vrep().lineality.is_empty() {
        return None;
    }
    let verts = &p.vrep().vertices;
    let rays = &p.vrep().rays;
    let active = |c: &Constraint, v: &QVec| dot(&c.normal, v) == c.offset;
    let ray_active = |c: &Constraint, r: &QVec| dot(&c.normal, r).is_zero();

    if verts.len() == 1 {
        let mut rs = rays.clone();
        rs.sort_by(|a, b| crate::rational::lex_cmp(a, b));
        let (start, end) = match rs.len() {
            0 => (None, None),
            1 => (None, Some(rs[0].clone())),
            _ => (Some(rs[0].clone()), Some(rs[1].clone())),
        };
        return Some(WalkDoc {
            closed: false,
            start_ray: start.map(|r| fmt_vec(&r)),
            chain: vec![fmt_vec(&verts[0])],
            end_ray: end.map(|r| fmt_vec(&r)),
        });
    }

    // vertex adjacency along facets
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for c in &p.hrep().inequalities {
        let on: Vec<usize> = (0..verts.len()).filter(|&i| active(c, &verts[i])).collect();
        if on.len() == 2 {
            nbrs[on[0]].push(on[1]);
            nbrs[on[1]].push(on[0]);
        }
    }
    // attach rays to their vertices
    let mut vertex_rays: Vec<Vec<QVec>> = vec![Vec::new(); verts.len()];
    for r in rays {
        for c in &p.hrep().inequalities {
            if !ray_active(c, r) {
                continue;
            }
            if let Some(i) = (0..verts.len()).find(|&i| active(c, &verts[i])) {
                // the facet is unbounded in direction r; it touches exactly
                // one vertex (two on-vertices would make it a bounded edge)
                vertex_rays[i].push(r.clone());
            }
        }
    }

    // one-dimensional set: two vertices with no facet edge between them
    if verts.len() == 2 && nbrs.iter().all(|n| n.is_empty()) {
        return Some(WalkDoc {
            closed: false,
            start_ray: vertex_rays[0].first().map(|r| fmt_vec(r)),
            chain: verts.iter().map(|v| fmt_vec(v)).collect(),
            end_ray: vertex_rays[1].first().map(|r| fmt_vec(r)),
        });
    }

    let ends: Vec<usize> = (0..verts.len()).filter(|&i| nbrs[i].len() == 1).collect();
    let (mut order, closed) = if ends.is_empty() {
        // closed polygon: start at vertex 0 (lex-smallest), pick the smaller neighbor
        let mut order = vec![0usize];
        let mut prev = 0usize;
        let mut cur = *nbrs[0]
            .iter()
            .min_by(|&&a, &&b| crate::rational::lex_cmp(&verts[a], &verts[b]))?;
        while cur != 0 {
            order.push(cur);
            let next = *nbrs[cur].iter().find(|&&x| x != prev)?;
            prev = cur;
            cur = next;
        }
        (order, true)
    } else {
        let start = *ends
            .iter()
            .min_by(|&&a, &&b| crate::rational::lex_cmp(&verts[a], &verts[b]))?;
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = nbrs[start][0];
        loop {
            order.push(cur);
            let Some(&next) = nbrs[cur].iter().find(|&&x| x != prev) else {
                break;
            };
            prev = cur;
            cur = next;
        }
        (order, false)
    };
    if closed {
        return Some(WalkDoc {
            closed: true,
            start_ray: None,
            chain: order.iter().map(|&i| fmt_vec(&verts[i])).collect(),
            end_ray: None,
        });
    }
    let first = *order.first()?;
    let last = *order.last()?;
    let start_ray = vertex_rays[first].first().cloned();
    let end_ray = vertex_rays[last].first().cloned();
    // orient deterministically: smaller attached ray at the start
    if let (Some(a), Some(b)) = (&start_ray, &end_ray) {
        if crate::rational::lex_cmp(a, b) == std::cmp::Ordering::Greater {
            order.reverse();
            return Some(WalkDoc {
                closed: false,
                start_ray: Some(fmt_vec(b)),
                chain: order.iter().map(|&i| fmt_vec(&verts[i])).collect(),
                end_ray: Some(fmt_vec(a)),
            });
        }
    }
    Some(WalkDoc {
        closed: false,
        start_ray: start_ray.map(|r| fmt_vec(&r)),
        chain: order.iter().map(|&i| fmt_vec(&verts[i])).collect(),
        end_ray: end_ray.map(|r| fmt_vec(&r)),
    })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RiskSetDoc {
    /// members in eligible-basis coordinates
    pub members: Vec<PolyhedronDoc>,
    /// the same members embedded in ambient asset coordinates
    pub ambient: Vec<PolyhedronDoc>,
}

pub fn riskset_doc(r: &RiskSet) -> RiskSetDoc {
    RiskSetDoc {
        members: r.members_m().iter().map(polyhedron_doc).collect(),
        ambient: r.members_ambient().iter().map(polyhedron_doc).collect(),
    }
}

pub fn to_json_pretty<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("result serialization cannot fail")
}
