//! Exact integer square roots and square detection.

use num_bigint::{BigInt, Sign};
use num_integer::Roots;
use num_traits::Zero;

// Quadratic residues mod 64, as a bitmask.
const SQUARES_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// `⌊√n⌋` for `n ≥ 0`.
///
/// Panics on negative input.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(n.sign() != Sign::Minus, "isqrt of negative number");
    n.sqrt()
}

/// Returns `Some(√n)` when `n` is a perfect square (including 0), `None`
/// otherwise. Negative inputs are never squares.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    match n.sign() {
        Sign::Minus => return None,
        Sign::NoSign => return Some(BigInt::zero()),
        Sign::Plus => {}
    }
    let low = n.iter_u64_digits().next().unwrap_or(0);
    if SQUARES_MOD_64 & (1 << (low & 63)) == 0 {
        return None;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        Some(root)
    } else {
        None
    }
}

pub fn exact_sqrt_u128(n: u128) -> Option<u128> {
    if SQUARES_MOD_64 & (1 << (n & 63)) == 0 {
        return None;
    }
    let root = n.sqrt();
    (root * root == n).then_some(root)
}

pub fn is_square_u64(n: u64) -> bool {
    exact_sqrt_u128(n as u128).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_and_non_squares() {
        for k in 0u64..2000 {
            assert_eq!(exact_sqrt(&BigInt::from(k * k)), Some(BigInt::from(k)));
            assert_eq!(exact_sqrt_u128((k * k) as u128), Some(k as u128));
            if k > 1 {
                assert_eq!(exact_sqrt(&BigInt::from(k * k + 1)), None);
                assert_eq!(exact_sqrt(&BigInt::from(k * k - 1)), None);
            }
        }
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
    }

    #[test]
    fn big_square() {
        let r: BigInt = "109931986732829734979866232821433543901088049"
            .parse()
            .unwrap();
        let sq = &r * &r;
        assert_eq!(exact_sqrt(&sq), Some(r.clone()));
        assert_eq!(exact_sqrt(&(sq + 1)), None);
        assert_eq!(isqrt(&(&r * &r + &r)), r);
    }
}
