//! Exact rational scalars and dense rational vectors.
//!
//! Every number in this crate is a `BigRational` kept in lowest terms with a
//! positive denominator (the representation the `num` crate guarantees).
//! There is no floating point anywhere in the computational path: model files
//! carry rationals as strings like `"-7/3"` and results are emitted the same
//! way.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::cmp::Ordering;

pub type Rat = BigRational;
pub type QVec = Vec<Rat>;
pub type QMat = Vec<QVec>;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for n/d. Panics on d == 0.
pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational written as `"p"` or `"p/q"` with optional sign, exactly.
///
/// Decimal notation is rejected on purpose: `0.1` has no exact binary or
/// decimal-free reading in this format, so callers must write `1/10`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    let mut parts = s.splitn(2, '/');
    let num_part = parts.next().unwrap();
    let num: BigInt = num_part
        .parse()
        .map_err(|_| format!("invalid integer `{num_part}` in rational `{s}`"))?;
    match parts.next() {
        None => Ok(BigRational::from_integer(num)),
        Some(den_part) => {
            let den: BigInt = den_part
                .parse()
                .map_err(|_| format!("invalid integer `{den_part}` in rational `{s}`"))?;
            if den.is_zero() {
                return Err(format!("zero denominator in rational `{s}`"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Format as `"p"` or `"p/q"`, the inverse of [`parse_rat`] on canonical values.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn add(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Rat]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale(a: &[Rat], c: &Rat) -> QVec {
    a.iter().map(|x| x * c).collect()
}

/// a + c*b
pub fn add_scaled(a: &[Rat], c: &Rat, b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Total lexicographic order on rational vectors, used for canonical sorting.
pub fn lex_cmp(a: &[Rat], b: &[Rat]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Scale a nonzero rational vector by a positive factor so the entries become
/// coprime integers. Direction is preserved (rays, inequality normals).
pub fn primitive(v: &[Rat]) -> QVec {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

/// Like [`primitive`] but additionally flips sign so the leading nonzero
/// entry is positive (lines, lineality vectors, equality normals).
pub fn primitive_signed(v: &[Rat]) -> QVec {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => neg(&p),
        _ => p,
    }
}
