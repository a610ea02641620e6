//! Simultaneous relations `P(ℓ, r) = m·P(ℓ, s) = n·P(ℓ, t)`.
//!
//! With `a = 2(ℓ−2)`, `b = ℓ−4` and `u = ar − b`, `v = as − b`,
//! `w = at − b`, the two relations read
//!
//! ```text
//! u² − m·v² = −(m−1)·b²
//! u² − n·w² = −(n−1)·b²
//! ```
//!
//! Setting `X = m²n·v²` gives `X − A = mn·u²` and `X − B = mn²·w²` where
//! `A = mn(m−1)·b²`, `B = mn(m−n)·b²`, so `(X, Y = m²n²·uvw)` is an integer
//! point on `Y² = X(X − A)(X − B)`. That curve has finitely many integer
//! points, but no effective bound is known: every search here is complete
//! only up to its stated bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{exact_sqrt, exact_sqrt_u128};
use crate::error::{Error, Result};
use crate::gonal::{fits_u128, polygonal_number, SmallPolygonal};

pub const DEFAULT_V_BOUND: u64 = 1_000_000;

/// `Y² = X(X − A)(X − B)` for a given `(ℓ, m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub ell: u64,
    pub m: u64,
    pub n: u64,
    /// `2(ℓ − 2)`.
    pub a: i64,
    /// `ℓ − 4`, signed.
    pub b: i64,
    /// `mn(m − 1)·b²`.
    pub big_a: BigInt,
    /// `mn(m − n)·b²`.
    pub big_b: BigInt,
}

impl CurveSpec {
    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        y * y == self.rhs(x)
    }

    fn rhs(&self, x: &BigInt) -> BigInt {
        x * (x - &self.big_a) * (x - &self.big_b)
    }

    /// `m²n`, which divides `X` at every point coming from a triple.
    pub fn x_divisor(&self) -> BigInt {
        BigInt::from(self.m) * self.m * self.n
    }

    /// `m²n²`, which divides `Y` at every point coming from a triple.
    pub fn y_divisor(&self) -> BigInt {
        self.x_divisor() * self.n
    }
}

pub fn curve_params(ell: u64, m: u64, n: u64) -> Result<CurveSpec> {
    if ell < 3 {
        return Err(Error::InvalidInput(format!("ell must be >= 3, got {ell}")));
    }
    if ell == 4 {
        return Err(Error::UnsupportedEll(ell));
    }
    if !(m > n && n > 1) {
        return Err(Error::InvalidOrdering { m, n });
    }
    let a = 2 * (ell as i64 - 2);
    let b = ell as i64 - 4;
    let mn_b2 = BigInt::from(m) * n * b * b;
    Ok(CurveSpec {
        ell,
        m,
        n,
        a,
        b,
        big_a: &mn_b2 * (m - 1),
        big_b: mn_b2 * (m - n),
    })
}

/// The affine images `u = ar − b`, `v = as − b`, `w = at − b`, up to sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleWitness {
    pub u: BigInt,
    pub v: BigInt,
    pub w: BigInt,
}

impl TripleWitness {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, w: impl Into<BigInt>) -> Self {
        Self {
            u: u.into(),
            v: v.into(),
            w: w.into(),
        }
    }

    /// `X = m²n·v²`.
    pub fn x(&self, spec: &CurveSpec) -> BigInt {
        spec.x_divisor() * &self.v * &self.v
    }

    /// `Y = m²n²·uvw`.
    pub fn y(&self, spec: &CurveSpec) -> BigInt {
        spec.y_divisor() * &self.u * &self.v * &self.w
    }
}

/// An integer point with `m²n | X` and `m²n² | Y`, found at `X = m²n·v²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedPoint {
    pub x: BigInt,
    /// Non-negative; `(X, −Y)` is also on the curve.
    pub y: BigInt,
    pub v: u64,
    /// Present when `X − A = mn·u²` and `X − B = mn²·w²` with integers
    /// `u, w ≥ 0`.
    pub witness: Option<TripleWitness>,
}

fn exact_quotient_sqrt(num: &BigInt, den: &BigInt) -> Option<BigInt> {
    let (q, rem) = num.div_rem(den);
    if rem.is_zero() {
        exact_sqrt(&q)
    } else {
        None
    }
}

/// `X(X − A)(X − B) = m⁴n³v²·αβ` with `α = mv² − (m−1)b²` and
/// `β = mv² − (m−n)b²`, so for `v > 0` the right side is a square iff `nαβ`
/// is. Returns `false` when that certainly fails; overflow defers to the
/// exact path.
fn may_be_point(spec: &CurveSpec, v: u64) -> bool {
    let eval = || -> Option<Option<bool>> {
        let (m, n, b, v) = (spec.m as i128, spec.n as i128, spec.b as i128, v as i128);
        let mv2 = m.checked_mul(v)?.checked_mul(v)?;
        let b2 = b * b;
        let alpha = mv2.checked_sub((m - 1).checked_mul(b2)?)?;
        let beta = mv2.checked_sub((m - n).checked_mul(b2)?)?;
        let prod = n.checked_mul(alpha)?.checked_mul(beta)?;
        Some(
            u128::try_from(prod)
                .ok()
                .map(|p| exact_sqrt_u128(p).is_some()),
        )
    };
    v == 0 || eval().is_none_or(|r| r.unwrap_or(false))
}

fn point_at(spec: &CurveSpec, v: u64) -> Option<ConstrainedPoint> {
    if !may_be_point(spec, v) {
        return None;
    }
    let vb = BigInt::from(v);
    let x = spec.x_divisor() * &vb * &vb;
    let y = exact_sqrt(&spec.rhs(&x))?;
    if !(&y % spec.y_divisor()).is_zero() {
        return None;
    }
    let witness = if v == 0 {
        None
    } else {
        let mn = BigInt::from(spec.m) * spec.n;
        let mn2 = &mn * spec.n;
        exact_quotient_sqrt(&(&x - &spec.big_a), &mn)
            .zip(exact_quotient_sqrt(&(&x - &spec.big_b), &mn2))
            .map(|(u, w)| TripleWitness { u, v: vb, w })
    };
    Some(ConstrainedPoint { x, y, v, witness })
}

/// Scans `X = m²n·v²` for `v = 0..=v_bound` and keeps the integer points
/// with `m²n² | Y`. Ordered by `v`.
///
/// All `v` are scanned rather than only `v ≡ ±b (mod a)`: the residue
/// condition is enforced by [`recover_rst`], and the full scan also reports
/// points such as `(0, 0)` that carry no triple.
pub fn constrained_integer_points(spec: &CurveSpec, v_bound: u64) -> Vec<ConstrainedPoint> {
    (0..=v_bound)
        .into_par_iter()
        .filter_map(|v| point_at(spec, v))
        .collect()
}

/// Tries every sign of `(u, v, w)` and returns the indices
/// `r = (u + b)/a`, `s = (v + b)/a`, `t = (w + b)/a` when all three are
/// positive integers. At most one sign choice can qualify, since
/// `ar − b ≥ a − b > 0` for every `r ≥ 1`.
pub fn recover_rst(witness: &TripleWitness, spec: &CurveSpec) -> Option<(BigInt, BigInt, BigInt)> {
    let a = BigInt::from(spec.a);
    let index = |z: &BigInt| -> Option<BigInt> {
        [z.clone(), -z].into_iter().find_map(|signed| {
            let (k, rem) = (signed + spec.b).div_rem(&a);
            (rem.is_zero() && k.is_positive()).then_some(k)
        })
    };
    Some((index(&witness.u)?, index(&witness.v)?, index(&witness.w)?))
}

/// `P = m·P' = n·P''` with `P = P(ℓ, r)`, `P' = P(ℓ, s)`, `P'' = P(ℓ, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimultaneousTriple {
    pub ell: u64,
    pub m: u64,
    pub n: u64,
    pub r: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub p: BigInt,
    pub p_prime: BigInt,
    pub p_double_prime: BigInt,
}

impl SimultaneousTriple {
    /// Evaluates the three polygonal numbers and checks both relations.
    pub fn new(ell: u64, m: u64, n: u64, r: BigInt, s: BigInt, t: BigInt) -> Result<Self> {
        let p = polygonal_number(ell, &r)?;
        let p_prime = polygonal_number(ell, &s)?;
        let p_double_prime = polygonal_number(ell, &t)?;
        if p != &p_prime * m || p != &p_double_prime * n {
            return Err(Error::InvalidInput(format!(
                "({r}, {s}, {t}) does not satisfy P = {m}P' = {n}P'' for ell = {ell}"
            )));
        }
        Ok(Self {
            ell,
            m,
            n,
            r,
            s,
            t,
            p,
            p_prime,
            p_double_prime,
        })
    }
}

/// All triples whose curve point has `v ≤ v_bound`, ordered by `r`.
pub fn solve_simultaneous(
    ell: u64,
    m: u64,
    n: u64,
    v_bound: u64,
) -> Result<Vec<SimultaneousTriple>> {
    let spec = curve_params(ell, m, n)?;
    let mut found = BTreeMap::new();
    for point in constrained_integer_points(&spec, v_bound) {
        let Some(witness) = &point.witness else {
            continue;
        };
        let Some((r, s, t)) = recover_rst(witness, &spec) else {
            continue;
        };
        let triple = SimultaneousTriple::new(ell, m, n, r.clone(), s, t)?;
        found.insert(r, triple);
    }
    Ok(found.into_values().collect())
}

/// Scans `r = 1..=r_max` and keeps `r` with both `P(ℓ, r)/m` and
/// `P(ℓ, r)/n` polygonal. Independent of the curve reduction.
pub fn brute_force_simultaneous(ell: u64, m: u64, n: u64, r_max: u64) -> Vec<SimultaneousTriple> {
    if ell < 3 || m == 0 || n == 0 {
        return Vec::new();
    }
    let triple = |r: u128, s: u128, t: u128| {
        SimultaneousTriple::new(ell, m, n, r.into(), s.into(), t.into())
            .expect("scan checked both relations")
    };
    if fits_u128(ell, 1, r_max) {
        let small = SmallPolygonal::new(ell);
        let (mw, nw) = (m as u128, n as u128);
        (1..=r_max)
            .into_par_iter()
            .filter_map(|r| {
                let p = small.value(r as u128);
                if !p.is_multiple_of(mw) || !p.is_multiple_of(nw) {
                    return None;
                }
                let s = small.index(p / mw)?;
                let t = small.index(p / nw)?;
                Some(triple(r as u128, s, t))
            })
            .collect()
    } else {
        (1..=r_max)
            .into_par_iter()
            .filter_map(|r| {
                let r = BigInt::from(r);
                let p = polygonal_number(ell, &r).ok()?;
                let (ps, rem_s) = p.div_rem(&BigInt::from(m));
                let (pt, rem_t) = p.div_rem(&BigInt::from(n));
                if !rem_s.is_zero() || !rem_t.is_zero() {
                    return None;
                }
                let s = crate::gonal::polygonal_index(ell, &ps).ok()??;
                let t = crate::gonal::polygonal_index(ell, &pt).ok()??;
                SimultaneousTriple::new(ell, m, n, r, s, t).ok()
            })
            .collect()
    }
}
