//! Size bounds for TPP triples, all evaluated as exact integer predicates.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

/// Smallest `c` with `c^3 >= n`.
pub fn cube_root_ceil(n: u64) -> u64 {
    if n <= 1 {
        return n;
    }
    let cube = |c: u64| (c as u128).pow(3);
    // the float estimate is only a starting point
    let mut c = (n as f64).cbrt().round() as u64;
    while cube(c) < n as u128 {
        c += 1;
    }
    while c > 0 && cube(c - 1) >= n as u128 {
        c -= 1;
    }
    c
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    /// `n <= mpq` for maximal triples.
    pub mult_lower: u64,
    /// Exclusive upper bound on `mpq`, reported as `n^3` for the test `mpq^2 < n^3`.
    pub mult_upper_cube: u128,
    pub cube_root_ceil: u64,
    /// `3 * ceil(n^(1/3))`.
    pub add_lower: u64,
    pub add_upper: u64,
    pub indiv_lower: u64,
    pub indiv_upper: u64,
    #[serde(serialize_with = "as_decimal")]
    pub search_space: BigUint,
}

pub fn bounds_for(n: u64) -> BoundsReport {
    let c = cube_root_ceil(n);
    BoundsReport {
        n,
        mult_lower: n,
        mult_upper_cube: (n as u128).pow(3),
        cube_root_ceil: c,
        add_lower: 3 * c,
        add_upper: n + 3,
        indiv_lower: 2,
        indiv_upper: n.saturating_sub(1),
        search_space: search_space(n),
    }
}

/// `(2^n - (n+1))^3`, the subset-triple count used for the search space.
///
/// The count `2^n - (n+1)` includes the full group itself, so this is not
/// exactly the number of triples of proper subsets of size at least two.
pub fn search_space(n: u64) -> BigUint {
    let subsets = (BigUint::one() << n as usize) - BigUint::from(n + 1);
    subsets.pow(3)
}

/// Strict upper test `mpq < n^(3/2)`, i.e. `mpq^2 < n^3`.
pub fn below_mult_ceiling(n: u64, mpq: u64) -> bool {
    let mpq = BigUint::from(mpq);
    let n = BigUint::from(n);
    &mpq * &mpq < n.pow(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultiplicativeVerdict {
    pub mpq: u64,
    /// `n <= mpq`; only evaluated for maximal triples.
    pub lower_ok: Option<bool>,
    /// `mpq^2 < n^3`.
    pub upper_ok: bool,
    pub pass: bool,
}

pub fn check_multiplicative(n: u64, m: u64, p: u64, q: u64, maximal: bool) -> MultiplicativeVerdict {
    let mpq = m * p * q;
    let lower_ok = maximal.then_some(n <= mpq);
    let upper_ok = below_mult_ceiling(n, mpq);
    MultiplicativeVerdict {
        mpq,
        lower_ok,
        upper_ok,
        pass: upper_ok && lower_ok.unwrap_or(true),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdditiveVerdict {
    pub sum: u64,
    pub lower: u64,
    pub upper: u64,
    pub pass: bool,
    pub violated: Option<Side>,
}

/// `3*ceil(n^(1/3)) <= m+p+q <= n+3`; the lower side is only checked when
/// `maximal` is set.
pub fn check_additive(n: u64, m: u64, p: u64, q: u64, maximal: bool) -> AdditiveVerdict {
    let sum = m + p + q;
    let (lower, upper) = (3 * cube_root_ceil(n), n + 3);
    let violated = if maximal && sum < lower {
        Some(Side::Lower)
    } else if sum > upper {
        Some(Side::Upper)
    } else {
        None
    };
    AdditiveVerdict {
        sum,
        lower,
        upper,
        pass: violated.is_none(),
        violated,
    }
}

/// Unrounded form of the additive lower bound, `3 n^(1/3) <= s`, i.e. `27 n <= s^3`.
pub fn meets_unrounded_additive_lower(n: u64, sum: u64) -> bool {
    27 * n as u128 <= (sum as u128).pow(3)
}
