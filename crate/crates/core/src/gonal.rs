//! Polygonal numbers `P(ℓ, r) = ((ℓ−2)·r² − (ℓ−4)·r) / 2` and the relation
//! `P(ℓ, r) = m·P(ℓ, s)`.
//!
//! Completing the square turns the relation into a generalized Pell equation
//!
//! ```text
//! X² − m·Y² = (1 − m)·c²,   X = q·r − c,   Y = q·s − c
//! ```
//!
//! with `(q, c)` depending on `ℓ mod 4` (see [`transform_for`]). The two
//! obvious solutions `(c, c)` and `(−c, c)` composed with Pell units give
//! infinitely many more; those that land on `X ≡ Y ≡ −c (mod q)` map back to
//! polygonal indices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{exact_sqrt, exact_sqrt_u128, is_square_u64};
use crate::congruence::find_satisfying_power;
use crate::error::{Error, Result};
use crate::pell::{fundamental_solution, validate_multiplier, PellSolution, QuadraticInteger};

/// Default cap on the Pell power used by the unit constructions.
pub const DEFAULT_MAX_POWER: u64 = 64;
/// Default bound for brute-force scans.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

const SCAN_CHUNK: u64 = 1 << 16;

fn validate_ell(ell: u64) -> Result<()> {
    if ell < 3 {
        Err(Error::InvalidInput(format!("ell must be >= 3, got {ell}")))
    } else {
        Ok(())
    }
}

pub fn polygonal_number(ell: u64, r: &BigInt) -> Result<BigInt> {
    validate_ell(ell)?;
    if !r.is_positive() {
        return Err(Error::InvalidInput(format!("index must be >= 1, got {r}")));
    }
    Ok(polygonal_unchecked(ell, r))
}

fn polygonal_unchecked(ell: u64, r: &BigInt) -> BigInt {
    let (l2, l4) = (BigInt::from(ell) - 2, BigInt::from(ell) - 4);
    (l2 * r * r - l4 * r) / 2
}

/// Inverse of [`polygonal_number`]: the `r ≥ 1` with `P(ℓ, r) = v`, if any.
///
/// `r = ((ℓ−4) + √((ℓ−4)² + 8(ℓ−2)·v)) / (2(ℓ−2))`, accepted only when the
/// root is exact and the division is exact.
pub fn polygonal_index(ell: u64, v: &BigInt) -> Result<Option<BigInt>> {
    validate_ell(ell)?;
    if !v.is_positive() {
        return Err(Error::InvalidInput(format!("value must be >= 1, got {v}")));
    }
    Ok(index_unchecked(ell, v))
}

fn index_unchecked(ell: u64, v: &BigInt) -> Option<BigInt> {
    let (l2, l4) = (BigInt::from(ell) - 2, BigInt::from(ell) - 4);
    let disc = &l4 * &l4 + BigInt::from(8) * &l2 * v;
    let root = exact_sqrt(&disc)?;
    let num: BigInt = l4 + root;
    let (r, rem) = num.div_rem(&(BigInt::from(2) * l2));
    (rem.is_zero() && r.is_positive()).then_some(r)
}

/// `u128` fast path for scans. Callers guarantee no overflow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SmallPolygonal {
    l2: u128,
    l4: i128,
}

impl SmallPolygonal {
    pub(crate) fn new(ell: u64) -> Self {
        Self {
            l2: ell as u128 - 2,
            l4: ell as i128 - 4,
        }
    }

    pub(crate) fn value(&self, r: u128) -> u128 {
        ((self.l2 * r * r) as i128 - self.l4 * r as i128) as u128 / 2
    }

    pub(crate) fn index(&self, v: u128) -> Option<u128> {
        let disc = (self.l4 * self.l4) as u128 + 8 * self.l2 * v;
        let root = exact_sqrt_u128(disc)?;
        let num = root as i128 + self.l4;
        let den = 2 * self.l2 as i128;
        (num > 0 && num % den == 0).then(|| (num / den) as u128)
    }
}

/// Whether `u128` arithmetic is safe for `r, s ≤ r_max` with multiplier
/// `m`: the largest intermediate is the discriminant `8(ℓ−2)·P(ℓ, r_max)`.
pub(crate) fn fits_u128(ell: u64, m: u64, r_max: u64) -> bool {
    let l = ell as u128;
    let r = r_max as u128;
    l.checked_mul(r)
        .and_then(|v| v.checked_mul(r))
        .and_then(|v| v.checked_mul(8 * l))
        .and_then(|v| v.checked_mul(m.max(1) as u128))
        .is_some()
}

/// Constants mapping `P(ℓ, r) = m·P(ℓ, s)` to `X² − m·Y² = rhs` with
/// `X = q·r − c`, `Y = q·s − c`, `rhs = (1 − m)·c²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalTransform {
    pub ell: u64,
    pub m: u64,
    pub q: u64,
    pub c: i64,
    pub rhs: BigInt,
}

impl GonalTransform {
    /// `X = q·r − c`.
    pub fn to_x(&self, r: &BigInt) -> BigInt {
        BigInt::from(self.q) * r - self.c
    }

    /// `r = (X + c) / q` when exact and `r ≥ 1`.
    pub fn to_index(&self, x: &BigInt) -> Option<BigInt> {
        let (r, rem) = (x + self.c).div_rem(&BigInt::from(self.q));
        (rem.is_zero() && r.is_positive()).then_some(r)
    }

    /// The base solutions `(|c|, |c|)` and `(−|c|, |c|)` composed with `s`:
    /// `(|c|(x + m·y), |c|(x + y))` and `(|c|(m·y − x), |c|(x − y))`.
    pub fn compose_bases(&self, s: &PellSolution) -> [QuadraticInteger; 2] {
        let c = self.c.unsigned_abs();
        let plus = QuadraticInteger::new(self.m, c, c);
        let minus = QuadraticInteger::new(self.m, -BigInt::from(c), c);
        [
            plus.compose(s.as_quadratic()).expect("same m"),
            minus.compose(s.as_quadratic()).expect("same m"),
        ]
    }

    /// Maps a solution of the generalized equation back to `(r, s)`.
    pub fn to_indices(&self, sol: &QuadraticInteger) -> Option<(BigInt, BigInt)> {
        if !(sol.x().is_positive() && sol.y().is_positive()) {
            return None;
        }
        Some((self.to_index(sol.x())?, self.to_index(sol.y())?))
    }
}

/// Per-`ℓ` constants:
///
/// | `ℓ mod 4` | `q`       | `c`         |
/// |-----------|-----------|-------------|
/// | odd       | `2ℓ − 4`  | `ℓ − 4`     |
/// | 2         | `ℓ − 2`   | `(ℓ − 4)/2` |
/// | 0         | `ℓ/2 − 1` | `(ℓ − 4)/4` |
///
/// The even cases divide `X` by the common factor 2 or 4. `gcd(c, q) = 1`
/// in every case.
pub fn transform_for(ell: u64, m: u64) -> Result<GonalTransform> {
    validate_ell(ell)?;
    if ell == 4 {
        return Err(Error::UnsupportedEll(ell));
    }
    validate_multiplier(m)?;
    let e = ell as i64;
    let (q, c) = match ell % 4 {
        1 | 3 => (2 * ell - 4, e - 4),
        2 => (ell - 2, (e - 4) / 2),
        _ => (ell / 2 - 1, (e - 4) / 4),
    };
    let rhs = (BigInt::one() - m) * BigInt::from(c) * c;
    Ok(GonalTransform { ell, m, q, c, rhs })
}

/// `P(ℓ, r) = m·P(ℓ, s)` with `value_big = P(ℓ, r)`, `value_small = P(ℓ, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GonalPair {
    pub ell: u64,
    pub m: u64,
    pub r: BigInt,
    pub s: BigInt,
    pub value_big: BigInt,
    pub value_small: BigInt,
}

impl GonalPair {
    /// Evaluates both sides and checks the relation exactly.
    pub fn new(ell: u64, m: u64, r: BigInt, s: BigInt) -> Result<Self> {
        let value_big = polygonal_number(ell, &r)?;
        let value_small = polygonal_number(ell, &s)?;
        if value_big != &value_small * m {
            return Err(Error::InvalidInput(format!(
                "P({ell}, {r}) = {value_big} is not {m} * P({ell}, {s}) = {m} * {value_small}"
            )));
        }
        Ok(Self {
            ell,
            m,
            r,
            s,
            value_big,
            value_small,
        })
    }

    pub fn is_valid(&self) -> bool {
        Self::new(self.ell, self.m, self.r.clone(), self.s.clone()).as_ref() == Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Compose base solutions with `g^n`, `n = 0..=max_power`.
    Theorem { max_power: u64 },
    /// Brute force over `s = 1..=s_bound`.
    Search { s_bound: u64 },
}

/// First `count` pairs, ordered by `r`.
pub fn solve_multiple(ell: u64, m: u64, count: usize, mode: SolveMode) -> Result<Vec<GonalPair>> {
    let t = transform_for(ell, m)?;
    match mode {
        SolveMode::Theorem { max_power } => {
            let mut pairs = theorem_pairs(&t, max_power, None)?;
            pairs.truncate(count);
            Ok(pairs)
        }
        SolveMode::Search { s_bound } => Ok(search_pairs(ell, m, s_bound, count)),
    }
}

/// Every theorem-mode pair with `r ≤ r_max`. Candidate `X` values grow
/// strictly with the Pell power, so the enumeration stops once both
/// variants pass `r_max`; `max_power` is a safety cap.
pub fn theorem_pairs_up_to(
    ell: u64,
    m: u64,
    r_max: &BigInt,
    max_power: u64,
) -> Result<Vec<GonalPair>> {
    let t = transform_for(ell, m)?;
    theorem_pairs(&t, max_power, Some(r_max))
}

fn theorem_pairs(
    t: &GonalTransform,
    max_power: u64,
    r_max: Option<&BigInt>,
) -> Result<Vec<GonalPair>> {
    if find_satisfying_power(t.m, t.q)?.is_none() {
        return Err(Error::NoTheoremSolutions {
            ell: t.ell,
            m: t.m,
            q: t.q,
        });
    }
    let g = fundamental_solution(t.m)?;
    let mut found = BTreeMap::new();
    let mut unit = PellSolution::identity(t.m);
    for n in 0..=max_power {
        let candidates = t.compose_bases(&unit);
        if let Some(r_max) = r_max {
            // Both X sequences are increasing from n = 1 on.
            let x_bound = t.to_x(r_max);
            if n >= 1 && candidates.iter().all(|c| c.x() > &x_bound) {
                break;
            }
        }
        for cand in &candidates {
            let Some((r, s)) = t.to_indices(cand) else {
                continue;
            };
            if r_max.is_some_and(|bound| &r > bound) {
                continue;
            }
            let pair = GonalPair::new(t.ell, t.m, r.clone(), s.clone())
                .expect("unit construction yields valid pairs");
            found.insert((r, s), pair);
        }
        unit = unit.compose(&g)?;
    }
    Ok(found.into_values().collect())
}

fn search_pairs(ell: u64, m: u64, s_bound: u64, count: usize) -> Vec<GonalPair> {
    // r > s, so bounding r by m·s_bound (√m·s would do) keeps u128 honest.
    let fast = fits_u128(ell, m, s_bound.saturating_mul(m));
    let small = SmallPolygonal::new(ell);
    let mut out = Vec::new();
    let mut start = 1u64;
    while start <= s_bound && out.len() < count {
        let end = start.saturating_add(SCAN_CHUNK - 1).min(s_bound);
        let chunk: Vec<GonalPair> = (start..=end)
            .into_par_iter()
            .filter_map(|s| {
                if fast {
                    let big = small.value(s as u128) * m as u128;
                    let r = small.index(big)?;
                    Some(pair_from_indices(ell, m, r, s as u128))
                } else {
                    let s = BigInt::from(s);
                    let big = polygonal_unchecked(ell, &s) * m;
                    let r = index_unchecked(ell, &big)?;
                    GonalPair::new(ell, m, r, s).ok()
                }
            })
            .collect();
        out.extend(chunk);
        start = end.saturating_add(1);
        if end == u64::MAX {
            break;
        }
    }
    out.truncate(count);
    out
}

fn pair_from_indices(ell: u64, m: u64, r: u128, s: u128) -> GonalPair {
    GonalPair::new(ell, m, BigInt::from(r), BigInt::from(s)).expect("scan checked the relation")
}

/// Exhaustive scan over `r = 1..=r_max`: whenever `m | P(ℓ, r)`, test
/// whether the quotient is polygonal. Independent of the Pell machinery.
pub fn enumerate_multiples_oracle(ell: u64, m: u64, r_max: u64) -> Vec<GonalPair> {
    if ell < 3 || m == 0 {
        return Vec::new();
    }
    if fits_u128(ell, 1, r_max) {
        let small = SmallPolygonal::new(ell);
        let m_wide = m as u128;
        (1..=r_max)
            .into_par_iter()
            .filter_map(|r| {
                let v = small.value(r as u128);
                if !v.is_multiple_of(m_wide) {
                    return None;
                }
                let s = small.index(v / m_wide)?;
                Some(pair_from_indices(ell, m, r as u128, s))
            })
            .collect()
    } else {
        (1..=r_max)
            .into_par_iter()
            .filter_map(|r| {
                let r = BigInt::from(r);
                let (quot, rem) = polygonal_unchecked(ell, &r).div_rem(&BigInt::from(m));
                if !rem.is_zero() || !quot.is_positive() {
                    return None;
                }
                let s = index_unchecked(ell, &quot)?;
                GonalPair::new(ell, m, r, s).ok()
            })
            .collect()
    }
}

/// `a·Δ(r) = b·Δ(s)` for triangular numbers `Δ(k) = k(k+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangularRatioPair {
    pub a: u64,
    pub b: u64,
    pub r: BigInt,
    pub s: BigInt,
    /// `Δ(r)`.
    pub delta: BigInt,
    /// `Δ(s)`.
    pub delta_prime: BigInt,
}

fn is_square_free(n: u64) -> bool {
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

fn triangular(k: &BigInt) -> BigInt {
    k * (k + 1) / 2
}

/// Solutions of `a·Δ = b·Δ'`, first `count` by `r`.
///
/// Multiplying `a·r(r+1) = b·s(s+1)` by `4a` gives
/// `(a(2r+1))² − ab·(2s+1)² = a(a − b)`, solved by composing `(a, ±1)` with
/// the Pell units of `ab` up to `g^max_power` and keeping the candidates
/// with `X/a` and `Y` odd. Every pair is re-verified exactly.
pub fn solve_triangular_ratio(
    a: u64,
    b: u64,
    count: usize,
    max_power: u64,
) -> Result<Vec<TriangularRatioPair>> {
    if !(a > b && b >= 1) {
        return Err(Error::InvalidInput(format!(
            "need a > b >= 1, got a = {a}, b = {b}"
        )));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::InvalidInput(format!("{a} and {b} are not coprime")));
    }
    if !is_square_free(a) || !is_square_free(b) {
        return Err(Error::InvalidInput(format!(
            "{a} and {b} must be square-free"
        )));
    }
    let m = a
        .checked_mul(b)
        .ok_or_else(|| Error::InvalidInput("a * b overflows".into()))?;
    if is_square_u64(m) {
        return Err(Error::InvalidInput(format!(
            "a * b = {m} is a perfect square"
        )));
    }
    let g = fundamental_solution(m)?;
    let bases = [
        QuadraticInteger::new(m, a, 1),
        QuadraticInteger::new(m, a, -1),
    ];
    let a_big = BigInt::from(a);
    let mut found = BTreeMap::new();
    let mut unit = PellSolution::identity(m);
    for _ in 0..=max_power {
        for base in &bases {
            let cand = base.compose(unit.as_quadratic())?;
            let (x, y) = (cand.x().abs(), cand.y().abs());
            let (xa, rem) = x.div_rem(&a_big);
            if !rem.is_zero() || xa.is_even() || y.is_even() {
                continue;
            }
            let r: BigInt = (xa - 1) / 2;
            let s: BigInt = (y - 1) / 2;
            if !r.is_positive() || !s.is_positive() {
                continue;
            }
            let (delta, delta_prime) = (triangular(&r), triangular(&s));
            if &delta * a != &delta_prime * b {
                continue;
            }
            found.insert(
                (r.clone(), s.clone()),
                TriangularRatioPair {
                    a,
                    b,
                    r,
                    s,
                    delta,
                    delta_prime,
                },
            );
        }
        unit = unit.compose(&g)?;
    }
    Ok(found.into_values().take(count).collect())
}

/// `P(ℓ, r)` for small `r`, used by the CLI and tests.
pub fn polygonal_u64(ell: u64, r: u64) -> Result<BigInt> {
    polygonal_number(ell, &BigInt::from(r))
}
