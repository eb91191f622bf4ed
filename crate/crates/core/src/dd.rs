//! Double description on polyhedral cones over exact rationals.
//!
//! The state is a pair (rays, lineality) generating the cone cut out by the
//! rows processed so far. Constraints are inserted one at a time; extreme
//! rays are maintained with the algebraic adjacency test (rank of the common
//! active rows), never a numeric tolerance. Inputs and outputs are plain
//! rational vectors; callers do all canonical scaling and ordering.

use crate::rational::{add_scaled, dot, is_zero_vec, neg, primitive, primitive_signed, QVec};
use num::bigint::BigInt;
use num::{Integer, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Inequality,
    Equality,
}

#[derive(Clone, Debug)]
pub struct ConeRow {
    pub normal: QVec,
    pub kind: RowKind,
}

impl ConeRow {
    pub fn ineq(normal: QVec) -> Self {
        ConeRow {
            normal,
            kind: RowKind::Inequality,
        }
    }
    pub fn eq(normal: QVec) -> Self {
        ConeRow {
            normal,
            kind: RowKind::Equality,
        }
    }
}

/// Generators of {x : rows hold}: cone(rays) + span(lineality).
#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub rays: Vec<QVec>,
    pub lineality: Vec<QVec>,
}

#[derive(Clone)]
struct Ray {
    vec: QVec,
    /// bitset over input row indices active (tight) at this ray
    zero: Vec<u64>,
}

impl Ray {
    fn set_bit(&mut self, i: usize) {
        self.zero[i / 64] |= 1 << (i % 64);
    }
}

fn common_bits(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

fn bit_indices(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        (0..64)
            .filter(move |b| word & (1 << b) != 0)
            .map(move |b| w * 64 + b)
    })
}

/// Primitive integer version of a rational row (positive scaling only).
fn integer_row(v: &[crate::rational::Rat]) -> Vec<BigInt> {
    primitive(v).iter().map(|x| x.numer().clone()).collect()
}

/// Rank of a set of integer rows by fraction-free elimination with gcd
/// reduction. This is the hot path of the adjacency test; integer
/// arithmetic avoids the per-operation normalization of rationals.
fn integer_rank(rows: &[&Vec<BigInt>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| (*r).clone()).collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let (pivot_rows, rest) = m.split_at_mut(row + 1);
        let piv_row = &pivot_rows[row];
        let piv = piv_row[col].clone();
        for r in rest.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            let mut g = BigInt::zero();
            for j in 0..cols {
                r[j] = &r[j] * &piv - &piv_row[j] * &f;
                g = g.gcd(&r[j]);
            }
            if !g.is_zero() && g != BigInt::from(1) {
                for x in r.iter_mut() {
                    *x /= &g;
                }
            }
        }
        row += 1;
        rank += 1;
        if row == m.len() {
            break;
        }
    }
    rank
}

/// Enumerate the generators of the cone {x in R^dim : rows}.
pub fn cone_dd(dim: usize, rows: &[ConeRow]) -> ConeGenerators {
    let words = rows.len() / 64 + 1;
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(&r.normal)).collect();
    let mut lineality: Vec<QVec> = crate::linalg::identity(dim);
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, row) in rows.iter().enumerate() {
        let a = &row.normal;
        debug_assert_eq!(a.len(), dim);

        // pivot case: some lineality direction crosses the hyperplane
        if let Some(i0) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(i0);
            let mut d0 = dot(a, &l0);
            if d0.is_negative() {
                l0 = neg(&l0);
                d0 = -d0;
            }
            for l in lineality.iter_mut() {
                let c = -dot(a, l) / &d0;
                if !c.is_zero() {
                    *l = add_scaled(l, &c, &l0);
                }
                *l = primitive_signed(l);
            }
            for r in rays.iter_mut() {
                let c = -dot(a, &r.vec) / &d0;
                if !c.is_zero() {
                    r.vec = primitive(&add_scaled(&r.vec, &c, &l0));
                }
                r.set_bit(idx); // every adjusted ray lies on the hyperplane
            }
            if row.kind == RowKind::Inequality {
                // l0 survives as the one generator with a.l0 > 0; it is tight
                // on every previously processed row (it was in the lineality)
                let mut newray = Ray {
                    vec: primitive(&l0),
                    zero: vec![0; words],
                };
                for j in 0..idx {
                    newray.set_bit(j);
                }
                rays.push(newray);
            }
            continue;
        }

        // the whole lineality is inside the hyperplane: partition the rays
        let dots: Vec<_> = rays.iter().map(|r| dot(a, &r.vec)).collect();
        let mut pos_idx: Vec<usize> = Vec::new();
        let mut neg_idx: Vec<usize> = Vec::new();
        for (i, d) in dots.iter().enumerate() {
            if d.is_positive() {
                pos_idx.push(i);
            } else if d.is_negative() {
                neg_idx.push(i);
            } else {
                rays[i].set_bit(idx);
            }
        }

        let need = (dim - lineality.len()).saturating_sub(2);
        let mut created: Vec<Ray> = Vec::new();
        for &pi in &pos_idx {
            for &ni in &neg_idx {
                let common = common_bits(&rays[pi].zero, &rays[ni].zero);
                if popcount(&common) < need {
                    continue;
                }
                // domination pre-filter: a third ray tight on every common
                // row rules the pair out without touching the rank test
                let dominated = rays.iter().enumerate().any(|(k, r)| {
                    k != pi && k != ni && common.iter().zip(&r.zero).all(|(c, z)| c & z == *c)
                });
                if dominated {
                    continue;
                }
                // the algebraic adjacency test decides
                let active: Vec<&Vec<BigInt>> =
                    bit_indices(&common).map(|j| &int_rows[j]).collect();
                if integer_rank(&active, dim) != need {
                    continue;
                }
                // dp*n - dn*p is a conic combination tight on the new row
                let mut w = add_scaled(
                    &crate::rational::scale(&rays[ni].vec, &dots[pi]),
                    &-dots[ni].clone(),
                    &rays[pi].vec,
                );
                debug_assert!(!is_zero_vec(&w));
                w = primitive(&w);
                let mut r = Ray {
                    vec: w,
                    zero: common,
                };
                r.set_bit(idx);
                created.push(r);
            }
        }

        let keep_pos = row.kind == RowKind::Inequality;
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, r) in rays.into_iter().enumerate() {
            if dots[i].is_zero() || (keep_pos && dots[i].is_positive()) {
                kept.push(r);
            }
        }
        kept.extend(created);
        rays = kept;
    }

    ConeGenerators {
        rays: rays.into_iter().map(|r| r.vec).collect(),
        lineality,
    }
}
