//! Pell solutions reduced modulo `q`.
//!
//! Reducing the powers `g, g², g³, …` of the fundamental solution modulo `q`
//! gives a finite cyclic group `G(m, q)`. Its order `g_m(q)` bounds how many
//! powers need checking against the two congruence conditions that turn a
//! Pell solution into a polygonal solution:
//!
//! ```text
//! XY:       x + m·y ≡ −1  and  x + y ≡ −1   (mod q)
//! XminusY:  m·y − x ≡ −1  and  x − y ≡ −1   (mod q)
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::pell::{fundamental_solution, PellSolution, QuadraticInteger};

fn validate_modulus(q: u64) -> Result<()> {
    if q < 2 {
        Err(Error::InvalidModulus(q))
    } else {
        Ok(())
    }
}

fn residue(v: &BigInt, q: u64) -> u64 {
    v.mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("residue is below q")
}

/// Residues `(x mod q, y mod q)` of a pair, both in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CongruenceClass {
    pub q: u64,
    pub xr: u64,
    pub yr: u64,
}

impl CongruenceClass {
    pub fn identity(q: u64) -> Self {
        Self {
            q,
            xr: 1 % q,
            yr: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.q)
    }

    fn minus_one(&self) -> u128 {
        (self.q - 1) as u128
    }

    /// Group law of `Z[√m]` carried out on residues.
    pub fn compose(&self, other: &Self, m: u64) -> Self {
        assert_eq!(self.q, other.q, "classes for different moduli");
        let q = self.q as u128;
        let m = m as u128 % q;
        let (x1, y1) = (self.xr as u128, self.yr as u128);
        let (x2, y2) = (other.xr as u128, other.yr as u128);
        Self {
            q: self.q,
            xr: ((x1 * x2 % q + m * (y1 * y2 % q)) % q) as u64,
            yr: ((x1 * y2 + x2 * y1) % q) as u64,
        }
    }

    /// `x² − m·y² mod q`.
    pub fn norm_residue(&self, m: u64) -> u64 {
        let q = self.q as u128;
        let (x, y) = (self.xr as u128, self.yr as u128);
        let my2 = (m as u128 % q) * (y * y % q) % q;
        ((x * x % q + q - my2) % q) as u64
    }

    /// `x + m·y ≡ −1` and `x + y ≡ −1 (mod q)`.
    pub fn satisfies_xy(&self, m: u64) -> bool {
        let q = self.q as u128;
        let (x, y) = (self.xr as u128, self.yr as u128);
        let m = m as u128 % q;
        (x + m * y) % q == self.minus_one() && (x + y) % q == self.minus_one()
    }

    /// `m·y − x ≡ −1` and `x − y ≡ −1 (mod q)`.
    pub fn satisfies_x_minus_y(&self, m: u64) -> bool {
        let q = self.q as u128;
        let (x, y) = (self.xr as u128, self.yr as u128);
        let m = m as u128 % q;
        (m * y + q - x) % q == self.minus_one() && (x + q - y) % q == self.minus_one()
    }

    /// The variant this class satisfies, preferring `XY` when both hold.
    pub fn satisfied_variant(&self, m: u64) -> Option<Variant> {
        if self.satisfies_xy(m) {
            Some(Variant::Xy)
        } else if self.satisfies_x_minus_y(m) {
            Some(Variant::XMinusY)
        } else {
            None
        }
    }
}

impl fmt::Display for CongruenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) mod {}", self.xr, self.yr, self.q)
    }
}

/// Which congruence condition a Pell solution satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `x + m·y ≡ x + y ≡ −1`; pairs with the base solution `(c, c)`.
    Xy,
    /// `m·y − x ≡ x − y ≡ −1`; pairs with the base solution `(−c, c)`.
    XMinusY,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Xy => "XY",
            Variant::XMinusY => "XminusY",
        })
    }
}

/// The cyclic group of Pell solutions modulo `q`, listed as the residues of
/// `g¹, g², …, g^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceGroupInfo {
    pub m: u64,
    pub q: u64,
    pub order: u64,
    pub classes: Vec<CongruenceClass>,
}

impl CongruenceGroupInfo {
    /// Residue class of `g^n`, for any `n ≥ 0`.
    pub fn class_of_power(&self, n: u64) -> CongruenceClass {
        if n.is_multiple_of(self.order) {
            CongruenceClass::identity(self.q)
        } else {
            self.classes[(n % self.order - 1) as usize]
        }
    }
}

/// A power `g^exponent` of the fundamental solution meeting a condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatisfyingPower {
    pub exponent: u64,
    pub variant: Variant,
    pub class: CongruenceClass,
}

pub fn reduce_mod(s: &QuadraticInteger, q: u64) -> Result<CongruenceClass> {
    validate_modulus(q)?;
    Ok(CongruenceClass {
        q,
        xr: residue(s.x(), q),
        yr: residue(s.y(), q),
    })
}

/// Iterates powers of the fundamental solution modulo `q` until the
/// identity recurs. The class of `g` is invertible (its conjugate is its
/// inverse), so the sequence is purely periodic and this terminates.
pub fn group_info(m: u64, q: u64) -> Result<CongruenceGroupInfo> {
    validate_modulus(q)?;
    let g = fundamental_solution(m)?;
    let generator = reduce_mod(g.as_quadratic(), q)?;
    let mut classes = vec![generator];
    while !classes.last().unwrap().is_identity() {
        let next = classes.last().unwrap().compose(&generator, m);
        classes.push(next);
    }
    Ok(CongruenceGroupInfo {
        m,
        q,
        order: classes.len() as u64,
        classes,
    })
}

pub fn check_xy_condition(s: &PellSolution, q: u64) -> Result<bool> {
    Ok(reduce_mod(s.as_quadratic(), q)?.satisfies_xy(s.m()))
}

pub fn check_x_minus_y_condition(s: &PellSolution, q: u64) -> Result<bool> {
    Ok(reduce_mod(s.as_quadratic(), q)?.satisfies_x_minus_y(s.m()))
}

/// Smallest `n` in `1..=g_m(q)` whose power satisfies either condition.
///
/// `None` is a proof that no power of the fundamental solution does, since
/// classes repeat with period `g_m(q)`.
pub fn find_satisfying_power(m: u64, q: u64) -> Result<Option<SatisfyingPower>> {
    let info = group_info(m, q)?;
    Ok(first_satisfying(&info))
}

pub(crate) fn first_satisfying(info: &CongruenceGroupInfo) -> Option<SatisfyingPower> {
    info.classes.iter().enumerate().find_map(|(i, class)| {
        class
            .satisfied_variant(info.m)
            .map(|variant| SatisfyingPower {
                exponent: i as u64 + 1,
                variant,
                class: *class,
            })
    })
}

/// The residue classes that can satisfy the `XY` condition together with
/// `x² − m·y² ≡ 1`: always `(−1, 0)`, plus `(q/2 − 1, q/2)` when
/// `gcd(m − 1, q)` is even.
pub fn xy_candidate_classes(m: u64, q: u64) -> Result<Vec<CongruenceClass>> {
    validate_modulus(q)?;
    let mut out = vec![CongruenceClass {
        q,
        xr: q - 1,
        yr: 0,
    }];
    let d = (m.wrapping_sub(1)).gcd(&q);
    if d.is_multiple_of(2) {
        out.push(CongruenceClass {
            q,
            xr: (q / 2 + q - 1) % q,
            yr: q / 2,
        });
    }
    Ok(out)
}
