//! Subset and multiset enumeration primitives: checked binomials,
//! Gosper's hack over bit masks, and unranking for deterministic
//! parallel chunking.

use num_bigint::BigUint;

/// C(n, k) in u128, None on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128; // exact: product of i+1 consecutive integers
    }
    Some(acc)
}

/// C(n, k) in u64, None on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial_u128(n, k).and_then(|v| u64::try_from(v).ok())
}

/// C(n, k) exactly.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Number of k-permutations P(n, k) = n! / (n-k)!, None on overflow.
pub fn permutations_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
    }
    Some(acc)
}

/// Number of size-k multisets over an alphabet of `a` letters.
pub fn multiset_count(a: u64, k: u64) -> Option<u128> {
    binomial_u128(a + k - 1, k)
}

/// Next mask with the same popcount in ascending numeric order
/// (Gosper's hack); ascending masks enumerate k-sets in colex order.
fn gosper_next(mask: u128) -> Option<u128> {
    debug_assert!(mask != 0);
    let c = mask & mask.wrapping_neg();
    let r = mask.checked_add(c)?;
    Some((((r ^ mask) >> 2) / c) | r)
}

/// Iterates the k-element sub-masks of `universe` in colex order.
pub fn sub_masks(universe: u128, k: u32) -> SubMasks {
    let positions: Vec<u32> = (0..128).filter(|&i| universe >> i & 1 == 1).collect();
    let count = positions.len() as u32;
    let state = if k > count {
        None
    } else if k == 0 {
        Some(0)
    } else if k == 128 {
        Some(u128::MAX)
    } else {
        Some((1u128 << k) - 1)
    };
    SubMasks { positions, k, state }
}

pub struct SubMasks {
    positions: Vec<u32>,
    k: u32,
    // index mask over positions; None when exhausted
    state: Option<u128>,
}

impl SubMasks {
    fn spread(&self, index_mask: u128) -> u128 {
        let mut out = 0u128;
        let mut rest = index_mask;
        while rest != 0 {
            let j = rest.trailing_zeros();
            out |= 1u128 << self.positions[j as usize];
            rest &= rest - 1;
        }
        out
    }
}

impl Iterator for SubMasks {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        let cur = self.state?;
        let out = self.spread(cur);
        self.state = if self.k == 0 {
            None
        } else {
            let fits = |next: u128| match 1u128.checked_shl(self.positions.len() as u32) {
                Some(limit) => next < limit,
                None => true,
            };
            gosper_next(cur).filter(|&next| fits(next))
        };
        Some(out)
    }
}

/// Colex rank of a k-set given as an index mask.
pub fn colex_rank(index_mask: u128) -> u128 {
    let mut rank = 0u128;
    let mut i = 0u64;
    let mut rest = index_mask;
    while rest != 0 {
        let c = rest.trailing_zeros() as u64;
        i += 1;
        rank += binomial_u128(c, i).expect("rank fits u128");
        rest &= rest - 1;
    }
    rank
}

/// Inverse of `colex_rank` for k-sets over `universe_size` indices.
pub fn colex_unrank(rank: u128, k: u32, universe_size: u32) -> u128 {
    let mut rest = rank;
    let mut mask = 0u128;
    let mut c = universe_size as u64;
    for i in (1..=k as u64).rev() {
        // largest c with C(c, i) <= rest
        while binomial_u128(c, i).map_or(true, |b| b > rest) {
            c -= 1;
        }
        rest -= binomial_u128(c, i).unwrap();
        mask |= 1u128 << c;
    }
    debug_assert_eq!(rest, 0);
    mask
}

/// Multiplicity vector of the rank-th size-k multiset over `alphabet`
/// letters, in ascending lexicographic order of multiplicity vectors.
pub fn multiset_unrank_lex(rank: u128, k: u32, alphabet: u32) -> Vec<u32> {
    let mut out = vec![0u32; alphabet as usize];
    let mut rest = rank;
    let mut remaining = k;
    for slot in 0..alphabet as usize {
        if slot + 1 == alphabet as usize {
            out[slot] = remaining;
            break;
        }
        let letters_left = (alphabet as u64) - (slot as u64) - 1;
        for c in 0..=remaining {
            let block = multiset_count(letters_left, (remaining - c) as u64)
                .expect("multiset count fits u128");
            if rest < block {
                out[slot] = c;
                remaining -= c;
                break;
            }
            rest -= block;
        }
    }
    out
}
