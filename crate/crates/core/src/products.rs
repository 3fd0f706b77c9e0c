//! Product sets of distinct elements.
//!
//! Pi_k(S) is the set of all products of k distinct elements of S, over
//! every choice and ordering, each word evaluated left to right. Two facts
//! drive the fast paths, both consequences of the evaluation convention:
//!
//! * a word with t y-type factors multiplies out to
//!   x^(sum of signed x-exponents + floor(t/2)*m) * y^(t mod 2), where the
//!   i-th y-type factor takes sign (-1)^(i-1), so exactly ceil(t/2) of the
//!   y-exponents enter with a plus sign;
//! * when t >= 1, each x-type factor can be placed before or after the
//!   first y-type factor, so its sign is free and independent.
//!
//! The oracle below checks the fast paths by walking every ordered word.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Element, GroupParams};
use crate::subset::{check_enum_size, Subset};

/// Residue-set rotation: shifts a set of exponents mod n by `shift`.
pub(crate) fn rotate(mask: u64, shift: i64, n: u32) -> u64 {
    let s = shift.rem_euclid(n as i64) as u32;
    if s == 0 {
        return mask;
    }
    let ones = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    ((mask << s) | (mask >> (n - s))) & ones
}

/// A product set: members of one group, all arising as length-k products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductSet {
    group: GroupParams,
    k: u32,
    bits: u128,
}

impl ProductSet {
    pub(crate) fn from_bits(group: GroupParams, k: u32, bits: u128) -> Self {
        ProductSet { group, k, bits }
    }

    pub(crate) fn from_residues(group: GroupParams, k: u32, residues: u64, eps: bool) -> Self {
        let bits = (residues as u128) << if eps { group.n() } else { 0 };
        ProductSet { group, k, bits }
    }

    pub fn group(&self) -> GroupParams {
        self.group
    }

    /// Product length this set represents.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits >> e.index(&self.group) & 1 == 1
    }

    pub fn contains_identity(&self) -> bool {
        self.bits & 1 == 1
    }

    /// True iff the set is all 2n elements.
    pub fn is_full_group(&self) -> bool {
        self.len() as u64 == self.group.order()
    }

    /// Shared eps of the members, None when empty or mixed.
    pub fn common_eps(&self) -> Option<bool> {
        let n = self.group.n();
        let x_part = if n == 128 { self.bits } else { self.bits & ((1u128 << n) - 1) };
        let y_part = self.bits >> n;
        match (x_part != 0, y_part != 0) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        }
    }

    /// Members in canonical index order.
    pub fn members(&self) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut bits = self.bits;
        while bits != 0 {
            out.push(Element::from_index(bits.trailing_zeros(), &self.group));
            bits &= bits - 1;
        }
        out
    }

    pub fn element_strings(&self) -> Vec<String> {
        self.members().iter().map(Element::to_string).collect()
    }
}

impl Serialize for ProductSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings = self.element_strings();
        let mut seq = serializer.serialize_seq(Some(strings.len()))?;
        for s in &strings {
            seq.serialize_element(s)?;
        }
        seq.end()
    }
}

/// Signed sums of a multiset of exponents: { sum of +-e_i mod n }.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedProductSet {
    group: GroupParams,
    s: u32,
    residues: u64,
}

impl SignedProductSet {
    pub fn group(&self) -> GroupParams {
        self.group
    }

    /// Number of summands.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn residues(&self) -> u64 {
        self.residues
    }

    pub fn len(&self) -> u32 {
        self.residues.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.residues == 0
    }

    pub fn contains_exponent(&self, r: u32) -> bool {
        self.residues >> (r % self.group.n()) & 1 == 1
    }

    /// Exponents in ascending order.
    pub fn exponents(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut bits = self.residues;
        while bits != 0 {
            out.push(bits.trailing_zeros());
            bits &= bits - 1;
        }
        out
    }

    /// View as a product set of x-type elements.
    pub fn as_product_set(&self) -> ProductSet {
        ProductSet::from_residues(self.group, self.s, self.residues, false)
    }
}

/// Exhaustive Pi_k(S): walks every ordered word of k distinct elements,
/// sharing prefix products across words. `budget` caps the number of
/// multiplications (one per word prefix).
pub fn product_set_oracle(s: &Subset, k: u32, budget: u64) -> Result<ProductSet> {
    if k > s.len() {
        return Err(Error::Precondition(format!(
            "product length {k} exceeds subset size {}",
            s.len()
        )));
    }
    let mut levels = oracle_impl(s, k, budget)?;
    Ok(levels.swap_remove(k as usize))
}

/// Pi_k(S) for every k = 0..=|S| in one walk; index = k.
pub fn product_set_oracle_all(s: &Subset, budget: u64) -> Result<Vec<ProductSet>> {
    oracle_impl(s, s.len(), budget)
}

fn oracle_impl(s: &Subset, max_depth: u32, budget: u64) -> Result<Vec<ProductSet>> {
    let g = s.group();
    // the walk visits sum over d of (len choose d falling factorial) nodes
    let len = s.len() as u128;
    let mut cost: u128 = 0;
    let mut level: u128 = 1;
    for d in 1..=max_depth as u128 {
        level = level.saturating_mul(len - d + 1);
        cost = cost.saturating_add(level);
    }
    if cost > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: u64::try_from(cost).unwrap_or(u64::MAX),
            budget,
        });
    }
    let elems = s.elements();
    let mut bits = vec![0u128; max_depth as usize + 1];
    bits[0] = 1u128 << g.identity().index(&g);
    oracle_walk(&g, &elems, 0, g.identity(), &mut bits);
    Ok(bits
        .into_iter()
        .enumerate()
        .map(|(k, b)| ProductSet::from_bits(g, k as u32, b))
        .collect())
}

fn oracle_walk(g: &GroupParams, elems: &[Element], used: u128, prefix: Element, bits: &mut [u128]) {
    let depth = used.count_ones() as usize;
    if depth + 1 == bits.len() {
        return;
    }
    for (i, &e) in elems.iter().enumerate() {
        if used & (1u128 << i) != 0 {
            continue;
        }
        let p = g.mul(prefix, e);
        bits[depth + 1] |= 1u128 << p.index(g);
        oracle_walk(g, elems, used | (1u128 << i), p, bits);
    }
}

/// All signed sums +-e_1 +- ... +- e_s mod n, by subset-sum DP.
pub fn signed_products(g: &GroupParams, exps: &[u32]) -> Result<SignedProductSet> {
    check_enum_size(g)?;
    let n = g.n();
    let mut mask: u64 = 1;
    for &e in exps {
        let e = (e % n) as i64;
        mask = rotate(mask, e, n) | rotate(mask, -e, n);
    }
    Ok(SignedProductSet { group: *g, s: exps.len() as u32, residues: mask })
}

/// Pi_t over t distinct y-type elements with the given exponents:
/// every ordering assigns plus signs to exactly ceil(t/2) of the alphas
/// and adds floor(t/2)*m. DP over (number of plus signs used, residue).
pub fn y_products(g: &GroupParams, alphas: &[u32]) -> Result<ProductSet> {
    y_products_impl(g, alphas, false)
}

/// Weighted variant: each factor may be replaced by its inverse first,
/// which shifts its exponent from alpha to alpha - m.
pub fn weighted_y_products(g: &GroupParams, alphas: &[u32]) -> Result<ProductSet> {
    y_products_impl(g, alphas, true)
}

fn y_products_impl(g: &GroupParams, alphas: &[u32], weighted: bool) -> Result<ProductSet> {
    check_enum_size(g)?;
    let n = g.n();
    let m = g.m() as i64;
    let t = alphas.len() as u32;
    let plus_total = t.div_ceil(2) as usize;
    let mut dp = vec![0u64; plus_total + 1];
    dp[0] = 1;
    for &alpha in alphas {
        let a = (alpha % n) as i64;
        let mut next = vec![0u64; plus_total + 1];
        for j in 0..=plus_total {
            if dp[j] == 0 {
                continue;
            }
            if j + 1 <= plus_total {
                next[j + 1] |= rotate(dp[j], a, n);
                if weighted {
                    next[j + 1] |= rotate(dp[j], a - m, n);
                }
            }
            next[j] |= rotate(dp[j], -a, n);
            if weighted {
                next[j] |= rotate(dp[j], m - a, n);
            }
        }
        dp = next;
    }
    let shifted = rotate(dp[plus_total], (t as i64 / 2) * m, n);
    Ok(ProductSet::from_residues(*g, t, shifted, t % 2 == 1))
}

/// Pi_k(S) for the full subset (k = |S|). For t = 0 the product is the
/// single plain sum; for t >= 1 it is the signed sums of the betas
/// composed with the y-part products.
pub fn mixed_products(s: &Subset) -> ProductSet {
    mixed_products_impl(s, false)
}

/// Weighted full-subset products: factors may be replaced by inverses.
/// With t = 0 the inversions supply the signs, so the x-only case is the
/// signed-sum set rather than a singleton.
pub fn weighted_mixed_products(s: &Subset) -> ProductSet {
    mixed_products_impl(s, true)
}

fn mixed_products_impl(s: &Subset, weighted: bool) -> ProductSet {
    let g = s.group();
    let n = g.n();
    let k = s.len();
    let betas = s.betas();
    let alphas = s.alphas();
    // subset construction already enforced the size cap
    if alphas.is_empty() {
        if weighted {
            let sp = signed_products(&g, &betas).expect("size checked");
            return ProductSet::from_residues(g, k, sp.residues(), false);
        }
        let sum = betas.iter().map(|&b| b as u64).sum::<u64>() % n as u64;
        return ProductSet::from_residues(g, k, 1u64 << sum, false);
    }
    let sp = signed_products(&g, &betas).expect("size checked");
    let yp = if weighted {
        weighted_y_products(&g, &alphas).expect("size checked")
    } else {
        y_products(&g, &alphas).expect("size checked")
    };
    let y_residues = (yp.bits() >> if yp.common_eps() == Some(true) { n } else { 0 }) as u64;
    let mut residues = 0u64;
    let mut sp_bits = sp.residues();
    while sp_bits != 0 {
        let b = sp_bits.trailing_zeros();
        residues |= rotate(y_residues, b as i64, n);
        sp_bits &= sp_bits - 1;
    }
    ProductSet::from_residues(g, k, residues, alphas.len() % 2 == 1)
}

/// Pi_k(S) for any k <= |S|: union of full-subset products over all
/// k-element subsets of S.
pub fn product_set(s: &Subset, k: u32) -> Result<ProductSet> {
    if k > s.len() {
        return Err(Error::Precondition(format!(
            "product length {k} exceeds subset size {}",
            s.len()
        )));
    }
    let mut bits = 0u128;
    for sub in s.k_subsets(k) {
        bits |= mixed_products(&sub).bits();
    }
    Ok(ProductSet::from_bits(s.group(), k, bits))
}

/// Elementwise product A*B of two product sets, with the saturation flag
/// |A| + |B| >= |N| + 1 for a containing coset pair of a subgroup of
/// size `n_size`. When saturated, A*B is the whole target coset.
#[derive(Debug, Clone, Copy)]
pub struct CosetProduct {
    pub set: ProductSet,
    pub saturated: bool,
}

pub fn coset_product(a: &ProductSet, b: &ProductSet, n_size: u32) -> Result<CosetProduct> {
    if a.group() != b.group() {
        return Err(Error::Precondition(
            "coset product of sets from different groups".into(),
        ));
    }
    let g = a.group();
    let mut bits = 0u128;
    for u in a.members() {
        for v in b.members() {
            bits |= 1u128 << g.mul(u, v).index(&g);
        }
    }
    let saturated = a.len() + b.len() >= n_size + 1;
    Ok(CosetProduct {
        set: ProductSet::from_bits(g, a.k() + b.k(), bits),
        saturated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, m: i64) -> GroupParams {
        GroupParams::new(n, m).unwrap()
    }

    fn strings(p: &ProductSet) -> Vec<String> {
        p.element_strings()
    }

    #[test]
    fn oracle_examples() {
        let h = g(5, 0);
        let s = Subset::parse(h, "x^0*y, x^1*y").unwrap();
        let p = product_set_oracle(&s, 2, 1000).unwrap();
        assert_eq!(strings(&p), vec!["x^1", "x^4"]);

        let p0 = product_set_oracle(&s, 0, 1000).unwrap();
        assert_eq!(strings(&p0), vec!["x^0"]);

        let h = g(4, 0);
        let s = Subset::parse(h, "x^0*y, x^2*y").unwrap();
        let p = product_set_oracle(&s, 2, 1000).unwrap();
        assert_eq!(strings(&p), vec!["x^2"]);
    }

    #[test]
    fn oracle_all_matches_per_k() {
        let h = g(4, 2);
        let s = Subset::parse(h, "1, x^1, x^0*y, x^3*y").unwrap();
        let all = product_set_oracle_all(&s, 100_000).unwrap();
        assert_eq!(all.len(), 5);
        for (k, p) in all.iter().enumerate() {
            assert_eq!(p, &product_set_oracle(&s, k as u32, 100_000).unwrap());
            assert_eq!(p.k(), k as u32);
        }
    }

    #[test]
    fn oracle_rejects_bad_requests() {
        let h = g(5, 0);
        let s = Subset::parse(h, "x^0*y, x^1*y").unwrap();
        assert!(matches!(
            product_set_oracle(&s, 3, 1000),
            Err(Error::Precondition(_))
        ));
        let big = Subset::full(h).unwrap();
        assert!(matches!(
            product_set_oracle(&big, 10, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn signed_product_examples() {
        let h = g(8, 0);
        let sp = signed_products(&h, &[1, 2]).unwrap();
        assert_eq!(sp.exponents(), vec![1, 3, 5, 7]);

        let sp = signed_products(&h, &[]).unwrap();
        assert_eq!(sp.exponents(), vec![0]);

        let h = g(4, 0);
        let sp = signed_products(&h, &[0, 2]).unwrap();
        assert_eq!(sp.exponents(), vec![2]);
    }

    #[test]
    fn y_product_examples() {
        // single factor: the element itself
        let h = g(6, 2);
        let p = y_products(&h, &[3]).unwrap();
        assert_eq!(strings(&p), vec!["x^3*y"]);

        let h = g(5, 0);
        let p = y_products(&h, &[0, 1]).unwrap();
        assert_eq!(strings(&p), vec!["x^1", "x^4"]);

        // all four y's of H(4,2) multiply to 1 in some order
        let h = g(4, 2);
        let p = y_products(&h, &[0, 1, 2, 3]).unwrap();
        assert!(p.contains_identity());
        assert_eq!(p.common_eps(), Some(false));
    }

    #[test]
    fn mixed_product_examples() {
        let h = g(4, 2);
        let s = Subset::parse(h, "1, x^1, x^0*y, x^1*y").unwrap();
        let p = mixed_products(&s);
        assert!(p.contains_identity());

        // no y part: the plain sum singleton
        let s = Subset::parse(h, "1, x^1, x^2, x^3").unwrap();
        let p = mixed_products(&s);
        assert_eq!(strings(&p), vec!["x^2"]);

        // weighted x-only: inversions make the signs free
        let wp = weighted_mixed_products(&s);
        assert_eq!(wp.common_eps(), Some(false));
        assert!(wp.len() > 1);
    }

    #[test]
    fn product_set_unions_sub_subsets() {
        let h = g(4, 2);
        let s = Subset::parse(h, "1, x^1, x^0*y").unwrap();
        let p = product_set(&s, 2).unwrap();
        let oracle = product_set_oracle(&s, 2, 10_000).unwrap();
        assert_eq!(p, oracle);
        assert!(product_set(&s, 4).is_err());
    }

    #[test]
    fn coset_product_examples() {
        let h = g(4, 0);
        let a = ProductSet::from_residues(h, 1, 0b0101, false); // {1, x^2}
        let b = ProductSet::from_residues(h, 1, 0b0100, false); // {x^2}
        let cp = coset_product(&a, &b, 2).unwrap();
        assert!(cp.saturated);
        assert_eq!(strings(&cp.set), vec!["x^0", "x^2"]);
        assert_eq!(cp.set.k(), 2);

        let h = g(6, 0);
        let a = Subset::parse(h, "x^0*y, x^2*y").unwrap();
        let a = ProductSet::from_bits(h, 1, a.bits());
        let b = Subset::parse(h, "x^1*y").unwrap();
        let b = ProductSet::from_bits(h, 1, b.bits());
        let cp = coset_product(&a, &b, 3).unwrap();
        assert!(!cp.saturated);
        assert_eq!(strings(&cp.set), vec!["x^1", "x^5"]);
    }

    #[test]
    fn saturated_coset_products_cover_the_coset() {
        // subsets of cosets of <x^2> in H(6,0) and H(8,2)
        for (n, m) in [(6i64, 0i64), (8, 2)] {
            let h = g(n, m);
            let half = (n / 2) as u32;
            let evens: Vec<u32> = (0..n as u32).step_by(2).collect();
            // A inside x <x^2>, B inside <x^2> y
            let a_all: Vec<Element> = evens.iter().map(|&e| Element::new(e as i64 + 1, false, &h)).collect();
            let b_all: Vec<Element> = evens.iter().map(|&e| Element::new(e as i64, true, &h)).collect();
            for a_bits in 1u32..(1 << half) {
                for b_bits in 1u32..(1 << half) {
                    let a: Vec<Element> = a_all
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| a_bits >> i & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect();
                    let b: Vec<Element> = b_all
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| b_bits >> i & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect();
                    let pa = ProductSet::from_bits(h, 1, Subset::from_elements(h, &a).unwrap().bits());
                    let pb = ProductSet::from_bits(h, 1, Subset::from_elements(h, &b).unwrap().bits());
                    let cp = coset_product(&pa, &pb, half).unwrap();
                    if cp.saturated {
                        assert_eq!(cp.set.len(), half, "saturated product must fill the coset");
                    }
                    assert!(cp.set.len() >= pa.len().max(pb.len()));
                }
            }
        }
    }
}
