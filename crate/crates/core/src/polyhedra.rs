//! Exact polyhedra with dual representations.
//!
//! A [`Polyhedron`] always carries both a canonical H-representation
//! (inequalities `normal . x >= offset` plus equalities) and a canonical
//! V-representation (vertices, rays, lineality). Constructors convert via
//! double description in both directions, so equality of canonical
//! representations is equality of point sets and all outputs are
//! deterministic across runs.
//!
//! Canonical form:
//! * inequality rows scaled to primitive integers (positive factor), sorted;
//! * equality rows in reduced row echelon form, primitive, leading entry
//!   positive, sorted;
//! * lineality in reduced row echelon form, primitive, leading entry positive;
//! * rays and vertices reduced modulo the lineality span by exact orthogonal
//!   projection; rays scaled primitive; everything sorted lexicographically.
//!
//! The empty set is an ordinary value: no generators, and the marker row
//! `0 . x >= 1` as its H-representation.

use crate::dd::{cone_dd, ConeRow};
use crate::linalg::{project_onto_span, rref};
use crate::rational::{
    add, dot, is_zero_vec, lex_cmp, primitive, primitive_signed, scale, sub, zeros, QVec, Rat,
};
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operand is not a cone (it has a vertex other than the origin)")]
    NotACone,
    #[error("operation undefined on the empty set")]
    EmptySet,
    #[error("invalid coordinate index {index} for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
}

/// One affine condition `normal . x >= offset` (or `= offset` in context).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: QVec,
    pub offset: Rat,
}

impl Constraint {
    pub fn new(normal: QVec, offset: Rat) -> Self {
        Constraint { normal, offset }
    }

    pub fn homogeneous(normal: QVec) -> Self {
        Constraint {
            normal,
            offset: Rat::zero(),
        }
    }

    fn augmented(&self) -> QVec {
        let mut v = self.normal.clone();
        v.push(self.offset.clone());
        v
    }

    fn from_augmented(mut v: QVec) -> Self {
        let offset = v.pop().expect("augmented row is nonempty");
        Constraint { normal: v, offset }
    }
}

/// H-representation: `{x : normal.x >= offset for all inequalities,
/// normal.x = offset for all equalities}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HRep {
    pub dim: usize,
    pub inequalities: Vec<Constraint>,
    pub equalities: Vec<Constraint>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn ineq(mut self, normal: QVec, offset: Rat) -> Self {
        self.inequalities.push(Constraint::new(normal, offset));
        self
    }

    pub fn eq(mut self, normal: QVec, offset: Rat) -> Self {
        self.equalities.push(Constraint::new(normal, offset));
        self
    }

    /// The canonical marker of the empty polyhedron: 0 . x >= 1.
    pub fn infeasible(dim: usize) -> Self {
        HRep::new(dim).ineq(zeros(dim), Rat::one())
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.inequalities
            .iter()
            .all(|c| dot(&c.normal, x) >= c.offset)
            && self
                .equalities
                .iter()
                .all(|c| dot(&c.normal, x) == c.offset)
    }

    pub fn concat(mut self, other: &HRep) -> Self {
        self.inequalities.extend(other.inequalities.iter().cloned());
        self.equalities.extend(other.equalities.iter().cloned());
        self
    }
}

/// V-representation: conv(vertices) + cone(rays) + span(lineality).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VRep {
    pub dim: usize,
    pub vertices: Vec<QVec>,
    pub rays: Vec<QVec>,
    pub lineality: Vec<QVec>,
}

impl VRep {
    pub fn new(dim: usize) -> Self {
        VRep {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
        }
    }

    /// A cone is represented with the origin as its single vertex.
    pub fn cone(dim: usize, rays: Vec<QVec>, lineality: Vec<QVec>) -> Self {
        VRep {
            dim,
            vertices: vec![zeros(dim)],
            rays,
            lineality,
        }
    }

    pub fn points(dim: usize, vertices: Vec<QVec>) -> Self {
        VRep {
            dim,
            vertices,
            rays: Vec::new(),
            lineality: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.rays.is_empty() && self.lineality.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    hrep: HRep,
    vrep: VRep,
}

impl Polyhedron {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> &HRep {
        &self.hrep
    }

    pub fn vrep(&self) -> &VRep {
        &self.vrep
    }

    pub fn is_empty(&self) -> bool {
        self.vrep.vertices.is_empty()
    }

    /// A cone in canonical form has exactly the origin as vertex.
    pub fn is_cone(&self) -> bool {
        self.vrep.vertices.len() == 1 && is_zero_vec(&self.vrep.vertices[0])
    }

    pub fn is_whole_space(&self) -> bool {
        self.hrep.inequalities.is_empty() && self.hrep.equalities.is_empty() && !self.is_empty()
    }

    /// The zero cone {0}.
    pub fn is_zero_cone(&self) -> bool {
        self.is_cone() && self.vrep.rays.is_empty() && self.vrep.lineality.is_empty()
    }

    pub fn empty(dim: usize) -> Polyhedron {
        Polyhedron {
            dim,
            hrep: HRep::infeasible(dim),
            vrep: VRep::new(dim),
        }
    }

    pub fn whole_space(dim: usize) -> Polyhedron {
        Polyhedron::from_vrep(VRep::cone(dim, Vec::new(), crate::linalg::identity(dim)))
    }

    pub fn orthant(dim: usize) -> Polyhedron {
        Polyhedron::from_vrep(VRep::cone(dim, crate::linalg::identity(dim), Vec::new()))
    }

    pub fn single_point(v: QVec) -> Polyhedron {
        let dim = v.len();
        Polyhedron::from_vrep(VRep::points(dim, vec![v]))
    }

    pub fn halfspace(normal: QVec, offset: Rat) -> Polyhedron {
        let dim = normal.len();
        Polyhedron::from_hrep(HRep::new(dim).ineq(normal, offset))
    }

    pub fn cone_from_generators(dim: usize, rays: Vec<QVec>, lineality: Vec<QVec>) -> Polyhedron {
        Polyhedron::from_vrep(VRep::cone(dim, rays, lineality))
    }

    /// Double-description conversion from an H-representation; the result
    /// carries both canonical representations.
    pub fn from_hrep(h: HRep) -> Polyhedron {
        let dim = h.dim;
        match preprocess(&h) {
            Preprocessed::Empty => Polyhedron::empty(dim),
            Preprocessed::Rows(rows) => match hrep_to_generators(dim, &rows) {
                None => Polyhedron::empty(dim),
                Some(raw) => finish_from_raw_vrep(dim, raw),
            },
        }
    }

    /// Double-description conversion from a V-representation.
    ///
    /// Generators without any vertex are read as a cone based at the origin;
    /// no generators at all is the empty set.
    pub fn from_vrep(v: VRep) -> Polyhedron {
        let dim = v.dim;
        if v.is_empty() {
            return Polyhedron::empty(dim);
        }
        let v = if v.vertices.is_empty() {
            VRep {
                vertices: vec![zeros(dim)],
                ..v
            }
        } else {
            v
        };
        let hrep = generators_to_hrep(dim, &v);
        let rows = hrep_rows(&hrep);
        let raw =
            hrep_to_generators(dim, &rows).expect("a polyhedron built from generators is nonempty");
        let vrep = canonicalize_vrep(dim, raw);
        Polyhedron { dim, hrep, vrep }
    }

    pub fn contains(&self, x: &[Rat]) -> Result<bool, GeomError> {
        if x.len() != self.dim {
            return Err(GeomError::DimensionMismatch(x.len(), self.dim));
        }
        Ok(self.hrep.satisfied_by(x))
    }

    /// Exact subset decision: every generator of `self` satisfies every
    /// constraint of `other` (rays and lineality against the homogeneous
    /// parts). The empty set is a subset of everything.
    pub fn subset(&self, other: &Polyhedron) -> Result<bool, GeomError> {
        if self.dim != other.dim {
            return Err(GeomError::DimensionMismatch(self.dim, other.dim));
        }
        if self.is_empty() {
            return Ok(true);
        }
        let h = &other.hrep;
        for v in &self.vrep.vertices {
            if !h.satisfied_by(v) {
                return Ok(false);
            }
        }
        for r in &self.vrep.rays {
            if h.inequalities
                .iter()
                .any(|c| dot(&c.normal, r).is_negative())
                || h.equalities.iter().any(|c| !dot(&c.normal, r).is_zero())
            {
                return Ok(false);
            }
        }
        for l in &self.vrep.lineality {
            if h.inequalities.iter().any(|c| !dot(&c.normal, l).is_zero())
                || h.equalities.iter().any(|c| !dot(&c.normal, l).is_zero())
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &Polyhedron) -> Result<bool, GeomError> {
        Ok(self.subset(other)? && other.subset(self)?)
    }

    /// Positive dual cone {v : v.x >= 0 for all x in self}, optionally taken
    /// within the span of `ambient_subspace` (vectors spanning the subspace).
    pub fn dual_cone(&self, ambient_subspace: Option<&[QVec]>) -> Result<Polyhedron, GeomError> {
        if !self.is_cone() {
            return Err(GeomError::NotACone);
        }
        let mut h = HRep::new(self.dim);
        for r in &self.vrep.rays {
            h.inequalities.push(Constraint::homogeneous(r.clone()));
        }
        for l in &self.vrep.lineality {
            h.equalities.push(Constraint::homogeneous(l.clone()));
        }
        if let Some(basis) = ambient_subspace {
            for n in span_orthocomplement(self.dim, basis) {
                h.equalities.push(Constraint::homogeneous(n));
            }
        }
        Ok(Polyhedron::from_hrep(h))
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron, GeomError> {
        if self.dim != other.dim {
            return Err(GeomError::DimensionMismatch(self.dim, other.dim));
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut v = VRep::new(self.dim);
        for a in &self.vrep.vertices {
            for b in &other.vrep.vertices {
                v.vertices.push(add(a, b));
            }
        }
        v.rays.extend(self.vrep.rays.iter().cloned());
        v.rays.extend(other.vrep.rays.iter().cloned());
        v.lineality.extend(self.vrep.lineality.iter().cloned());
        v.lineality.extend(other.vrep.lineality.iter().cloned());
        Ok(Polyhedron::from_vrep(v))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, GeomError> {
        if self.dim != other.dim {
            return Err(GeomError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Polyhedron::from_hrep(self.hrep.clone().concat(&other.hrep)))
    }

    /// Exact image under the coordinate projection keeping `keep` (in order).
    pub fn project(&self, keep: &[usize]) -> Result<Polyhedron, GeomError> {
        let mut seen = vec![false; self.dim];
        for &i in keep {
            if i >= self.dim {
                return Err(GeomError::BadIndex {
                    index: i,
                    dim: self.dim,
                });
            }
            if seen[i] {
                return Err(GeomError::BadIndex {
                    index: i,
                    dim: self.dim,
                });
            }
            seen[i] = true;
        }
        let pick = |v: &QVec| -> QVec { keep.iter().map(|&i| v[i].clone()).collect() };
        if self.is_empty() {
            return Ok(Polyhedron::empty(keep.len()));
        }
        let v = VRep {
            dim: keep.len(),
            vertices: self.vrep.vertices.iter().map(&pick).collect(),
            rays: drop_zero(self.vrep.rays.iter().map(&pick).collect()),
            lineality: drop_zero(self.vrep.lineality.iter().map(&pick).collect()),
        };
        Ok(Polyhedron::from_vrep(v))
    }

    /// Exact image under x -> M x with M given as rows (k x dim).
    pub fn linear_image(&self, map_rows: &[QVec]) -> Result<Polyhedron, GeomError> {
        let k = map_rows.len();
        for row in map_rows {
            if row.len() != self.dim {
                return Err(GeomError::DimensionMismatch(row.len(), self.dim));
            }
        }
        if self.is_empty() {
            return Ok(Polyhedron::empty(k));
        }
        let apply = |v: &QVec| -> QVec { map_rows.iter().map(|r| dot(r, v)).collect() };
        let v = VRep {
            dim: k,
            vertices: self.vrep.vertices.iter().map(&apply).collect(),
            rays: drop_zero(self.vrep.rays.iter().map(&apply).collect()),
            lineality: drop_zero(self.vrep.lineality.iter().map(&apply).collect()),
        };
        Ok(Polyhedron::from_vrep(v))
    }

    /// Exact preimage {z : M z + x0 in self} with M given as rows (dim x k).
    pub fn affine_preimage(
        &self,
        map_rows: &[QVec],
        x0: &[Rat],
        k: usize,
    ) -> Result<Polyhedron, GeomError> {
        if map_rows.len() != self.dim || x0.len() != self.dim {
            return Err(GeomError::DimensionMismatch(map_rows.len(), self.dim));
        }
        let pull = |c: &Constraint| -> Constraint {
            // normal.(Mz + x0) >= offset  <=>  (M^T normal).z >= offset - normal.x0
            let mut n = zeros(k);
            for (row, coef) in map_rows.iter().zip(&c.normal) {
                for (nj, rj) in n.iter_mut().zip(row) {
                    *nj += coef * rj;
                }
            }
            Constraint::new(n, &c.offset - dot(&c.normal, x0))
        };
        let mut h = HRep::new(k);
        h.inequalities = self.hrep.inequalities.iter().map(&pull).collect();
        h.equalities = self.hrep.equalities.iter().map(&pull).collect();
        Ok(Polyhedron::from_hrep(h))
    }

    pub fn translate(&self, shift: &[Rat]) -> Result<Polyhedron, GeomError> {
        if shift.len() != self.dim {
            return Err(GeomError::DimensionMismatch(shift.len(), self.dim));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        let v = VRep {
            dim: self.dim,
            vertices: self.vrep.vertices.iter().map(|x| add(x, shift)).collect(),
            rays: self.vrep.rays.clone(),
            lineality: self.vrep.lineality.clone(),
        };
        Ok(Polyhedron::from_vrep(v))
    }

    /// Recession cone; {0} for the empty set.
    pub fn recession_cone(&self) -> Polyhedron {
        Polyhedron::from_vrep(VRep::cone(
            self.dim,
            self.vrep.rays.clone(),
            self.vrep.lineality.clone(),
        ))
    }

    pub fn negate(&self) -> Polyhedron {
        let flip: Vec<QVec> = (0..self.dim)
            .map(|i| {
                let mut row = zeros(self.dim);
                row[i] = -Rat::one();
                row
            })
            .collect();
        self.linear_image(&flip)
            .expect("negation preserves dimension")
    }

    /// Vertices of `self` that are minimal with respect to the preorder
    /// generated by `cone`: v is minimal iff (v - cone) meets `self` only
    /// in v itself.
    pub fn minimal_points(&self, cone: &Polyhedron) -> Result<Vec<QVec>, GeomError> {
        if !cone.is_cone() {
            return Err(GeomError::NotACone);
        }
        let neg_cone = cone.negate();
        let mut out = Vec::new();
        for v in &self.vrep.vertices {
            let shifted = neg_cone.translate(v)?;
            let inter = self.intersect(&shifted)?;
            let single = inter.vrep.vertices.len() == 1
                && inter.vrep.rays.is_empty()
                && inter.vrep.lineality.is_empty()
                && inter.vrep.vertices[0] == *v;
            if single {
                out.push(v.clone());
            }
        }
        Ok(out)
    }
}

fn drop_zero(vs: Vec<QVec>) -> Vec<QVec> {
    vs.into_iter().filter(|v| !is_zero_vec(v)).collect()
}

/// Normals spanning the orthogonal complement of span(basis).
pub fn span_orthocomplement(dim: usize, basis: &[QVec]) -> Vec<QVec> {
    if basis.is_empty() {
        return crate::linalg::identity(dim);
    }
    crate::linalg::nullspace(basis, dim)
}

enum Preprocessed {
    Empty,
    Rows(Vec<ConeRow>),
}

/// Drop trivial rows, detect explicit infeasibility markers and homogenize.
fn preprocess(h: &HRep) -> Preprocessed {
    let mut rows = Vec::new();
    for c in &h.equalities {
        if is_zero_vec(&c.normal) {
            if !c.offset.is_zero() {
                return Preprocessed::Empty;
            }
            continue;
        }
        let mut n = c.normal.clone();
        n.push(-c.offset.clone());
        rows.push(ConeRow::eq(n));
    }
    // homogenization variable t >= 0
    let mut t_row = zeros(h.dim);
    t_row.push(Rat::one());
    rows.push(ConeRow::ineq(t_row));
    for c in &h.inequalities {
        if is_zero_vec(&c.normal) {
            if c.offset.is_positive() {
                return Preprocessed::Empty;
            }
            continue;
        }
        let mut n = c.normal.clone();
        n.push(-c.offset.clone());
        rows.push(ConeRow::ineq(n));
    }
    Preprocessed::Rows(rows)
}

fn hrep_rows(h: &HRep) -> Vec<ConeRow> {
    match preprocess(h) {
        Preprocessed::Empty => vec![ConeRow::ineq({
            let mut r = zeros(h.dim);
            r.push(-Rat::one());
            r
        })],
        Preprocessed::Rows(rows) => rows,
    }
}

/// Homogenized DD: split generators of the lifted cone back into vertices,
/// rays and lineality of the polyhedron. None means the set is empty.
fn hrep_to_generators(dim: usize, rows: &[ConeRow]) -> Option<VRep> {
    let gens = cone_dd(dim + 1, rows);
    let mut v = VRep::new(dim);
    for r in &gens.rays {
        let t = &r[dim];
        if t.is_zero() {
            let x = r[..dim].to_vec();
            if !is_zero_vec(&x) {
                v.rays.push(x);
            }
        } else {
            debug_assert!(t.is_positive());
            v.vertices.push(scale(&r[..dim], &t.recip()));
        }
    }
    for l in &gens.lineality {
        debug_assert!(l[dim].is_zero(), "lineality escapes the t >= 0 halfspace");
        v.lineality.push(l[..dim].to_vec());
    }
    if v.vertices.is_empty() {
        None
    } else {
        Some(v)
    }
}

/// Dual-side DD: from generators to the canonical H-representation.
fn generators_to_hrep(dim: usize, v: &VRep) -> HRep {
    let mut rows = Vec::new();
    for l in &v.lineality {
        if is_zero_vec(l) {
            continue;
        }
        let mut n = l.clone();
        n.push(Rat::zero());
        rows.push(ConeRow::eq(n));
    }
    for vert in &v.vertices {
        let mut n = vert.clone();
        n.push(Rat::one());
        rows.push(ConeRow::ineq(n));
    }
    for r in &v.rays {
        if is_zero_vec(r) {
            continue;
        }
        let mut n = r.clone();
        n.push(Rat::zero());
        rows.push(ConeRow::ineq(n));
    }
    let polar = cone_dd(dim + 1, &rows);
    // reduce the polar's rays modulo its lineality so equivalent facet
    // normals of lower-dimensional sets get one canonical representative
    let polar = canonicalize_vrep(
        dim + 1,
        VRep {
            dim: dim + 1,
            vertices: vec![zeros(dim + 1)],
            rays: polar.rays,
            lineality: polar.lineality,
        },
    );

    let mut h = HRep::new(dim);
    for ray in &polar.rays {
        let (a, b) = (ray[..dim].to_vec(), &ray[dim]);
        if is_zero_vec(&a) {
            debug_assert!(!b.is_negative());
            continue; // 0.x >= -b with b >= 0 is vacuous
        }
        h.inequalities.push(Constraint::new(a, -b.clone()));
    }
    for lin in &polar.lineality {
        let (a, b) = (lin[..dim].to_vec(), &lin[dim]);
        if is_zero_vec(&a) {
            debug_assert!(b.is_zero());
            continue;
        }
        h.equalities.push(Constraint::new(a, -b.clone()));
    }
    canonicalize_hrep(h)
}

fn canonicalize_hrep(mut h: HRep) -> HRep {
    // equalities: RREF over augmented rows gives a unique canonical system
    if !h.equalities.is_empty() {
        let mut aug: Vec<QVec> = h.equalities.iter().map(|c| c.augmented()).collect();
        // RREF works on normal.x = offset written as (normal | offset)
        rref(&mut aug);
        h.equalities = aug
            .into_iter()
            .filter(|row| !is_zero_vec(row))
            .map(|row| Constraint::from_augmented(primitive_signed(&row)))
            .collect();
        h.equalities
            .sort_by(|a, b| lex_cmp(&a.augmented(), &b.augmented()));
    }
    // an inequality whose normal lies in the span of the equality normals is
    // constant on the set, hence vacuous for a nonempty polyhedron
    let eq_normals: Vec<QVec> = h.equalities.iter().map(|c| c.normal.clone()).collect();
    let eq_rank = crate::linalg::rank(&eq_normals);
    let mut ineqs: Vec<Constraint> = h
        .inequalities
        .iter()
        .filter(|c| {
            if eq_normals.is_empty() {
                return true;
            }
            let mut ext = eq_normals.clone();
            ext.push(c.normal.clone());
            crate::linalg::rank(&ext) > eq_rank
        })
        .map(|c| Constraint::from_augmented(primitive(&c.augmented())))
        .collect();
    ineqs.sort_by(|a, b| lex_cmp(&a.augmented(), &b.augmented()));
    ineqs.dedup();
    h.inequalities = ineqs;
    h
}

fn canonicalize_vrep(dim: usize, raw: VRep) -> VRep {
    // lineality: unique RREF basis
    let mut lin: Vec<QVec> = raw.lineality;
    let lineality: Vec<QVec> = if lin.is_empty() {
        Vec::new()
    } else {
        rref(&mut lin);
        let mut out: Vec<QVec> = lin
            .into_iter()
            .filter(|v| !is_zero_vec(v))
            .map(|v| primitive_signed(&v))
            .collect();
        out.sort_by(|a, b| lex_cmp(a, b));
        out
    };

    let reduce = |v: &QVec| -> QVec {
        if lineality.is_empty() {
            v.clone()
        } else {
            sub(v, &project_onto_span(&lineality, v))
        }
    };

    let mut rays: Vec<QVec> = raw
        .rays
        .iter()
        .map(&reduce)
        .filter(|v| !is_zero_vec(v))
        .map(|v| primitive(&v))
        .collect();
    rays.sort_by(|a, b| lex_cmp(a, b));
    rays.dedup();

    let mut vertices: Vec<QVec> = raw.vertices.iter().map(&reduce).collect();
    vertices.sort_by(|a, b| lex_cmp(a, b));
    vertices.dedup();

    VRep {
        dim,
        vertices,
        rays,
        lineality,
    }
}

fn finish_from_raw_vrep(dim: usize, raw: VRep) -> Polyhedron {
    let vrep = canonicalize_vrep(dim, raw);
    let hrep = generators_to_hrep(dim, &vrep);
    Polyhedron { dim, hrep, vrep }
}
