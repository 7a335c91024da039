//! Binomial coefficients and colexicographic ranking of fixed-size subsets.
//!
//! Subsets of `{0, .., n-1}` are stored as `u64` bit masks. Colex order on
//! `k`-subsets coincides with numeric order of their masks, so the rank of a
//! subset is also its position among all `k`-popcount integers below `2^n`.

/// `C(n, k)`, or `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) is always divisible by i
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// Binomial coefficient for arguments whose value is known to fit.
pub(crate) fn small_binomial(n: u64, k: u64) -> u64 {
    binomial(n, k)
        .and_then(|v| u64::try_from(v).ok())
        .expect("binomial coefficient overflows u64")
}

/// Colex rank of the subset with bit mask `mask`.
pub fn colex_rank(mask: u64) -> u64 {
    let mut rank = 0;
    let mut rest = mask;
    let mut i = 1;
    while rest != 0 {
        let elem = rest.trailing_zeros() as u64;
        rank += small_binomial(elem, i);
        rest &= rest - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`colex_rank`] for `k`-subsets of `{0, .., 63}`; `None` when
/// `rank >= C(64, k)`.
pub fn colex_unrank(mut rank: u64, k: u32) -> Option<u64> {
    if k == 0 || k > 64 || binomial(64, k as u64)? <= rank as u128 {
        return (k == 0 && rank == 0).then_some(0);
    }
    let mut mask = 0u64;
    for i in (1..=k as u64).rev() {
        // largest s with C(s, i) <= rank
        let mut s = i - 1;
        while binomial(s + 1, i).is_some_and(|c| c <= rank as u128) {
            s += 1;
        }
        rank -= small_binomial(s, i);
        mask |= 1 << s;
    }
    Some(mask)
}

/// Next integer with the same popcount (Gosper's hack); successor in colex order.
pub(crate) fn next_same_popcount(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Elements of `mask` as 1-based labels, ascending.
pub fn labels(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b as usize + 1)
        .collect()
}

/// Mask of a set of 1-based labels, or `None` if a label is out of `1..=64`
/// or repeated.
pub fn mask_of(labels: &[usize]) -> Option<u64> {
    let mut mask = 0u64;
    for &l in labels {
        if !(1..=64).contains(&l) || mask >> (l - 1) & 1 == 1 {
            return None;
        }
        mask |= 1 << (l - 1);
    }
    Some(mask)
}
