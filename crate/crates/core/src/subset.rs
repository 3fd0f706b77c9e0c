//! Subsets of H(n,m) as 2n-bit masks over canonical element indices.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::combinatorics::sub_masks;
use crate::error::{Error, Result, MAX_ENUM_N};
use crate::group::{Element, GroupParams};

/// A set of distinct elements of one group. Bit i of `bits` is the element
/// with canonical index i; x-type elements occupy the low n bits, y-type
/// the high n bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subset {
    group: GroupParams,
    bits: u128,
}

/// Rejects groups whose subsets do not fit the 128-bit masks.
pub(crate) fn check_enum_size(g: &GroupParams) -> Result<()> {
    if g.n() > MAX_ENUM_N {
        Err(Error::GroupTooLarge { n: g.n(), max: MAX_ENUM_N })
    } else {
        Ok(())
    }
}

impl Subset {
    pub fn empty(group: GroupParams) -> Result<Self> {
        check_enum_size(&group)?;
        Ok(Subset { group, bits: 0 })
    }

    /// The whole group as a subset.
    pub fn full(group: GroupParams) -> Result<Self> {
        check_enum_size(&group)?;
        let order = group.order() as u32;
        let bits = if order == 128 { u128::MAX } else { (1u128 << order) - 1 };
        Ok(Subset { group, bits })
    }

    pub fn from_bits(group: GroupParams, bits: u128) -> Result<Self> {
        let full = Self::full(group)?;
        if bits & !full.bits != 0 {
            return Err(Error::InvalidParams(format!(
                "subset mask {bits:#x} has bits outside the {} canonical indices",
                group.order()
            )));
        }
        Ok(Subset { group, bits })
    }

    pub fn from_elements(group: GroupParams, elements: &[Element]) -> Result<Self> {
        check_enum_size(&group)?;
        let mut bits = 0u128;
        for e in elements {
            bits |= 1u128 << e.index(&group);
        }
        Ok(Subset { group, bits })
    }

    /// Parses a comma separated element list such as "1, x^2, x^0*y".
    pub fn parse(group: GroupParams, s: &str) -> Result<Self> {
        let elements = s
            .split(',')
            .filter(|part| !part.trim().is_empty())
            .map(|part| Element::parse(part, &group))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(group, &elements)
    }

    pub fn group(&self) -> GroupParams {
        self.group
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

    fn x_mask(&self) -> u128 {
        let n = self.group.n();
        if n == 128 { u128::MAX } else { (1u128 << n) - 1 }
    }

    /// Number of x-type members.
    pub fn s(&self) -> u32 {
        (self.bits & self.x_mask()).count_ones()
    }

    /// Number of y-type members.
    pub fn t(&self) -> u32 {
        (self.bits >> self.group.n()).count_ones()
    }

    /// Exponents of the x-type members, ascending.
    pub fn betas(&self) -> Vec<u32> {
        let lo = self.bits & self.x_mask();
        bit_positions(lo)
    }

    /// Exponents of the y-type members, ascending.
    pub fn alphas(&self) -> Vec<u32> {
        bit_positions(self.bits >> self.group.n())
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits >> e.index(&self.group) & 1 == 1
    }

    /// Members in canonical index order.
    pub fn elements(&self) -> Vec<Element> {
        bit_positions(self.bits)
            .into_iter()
            .map(|i| Element::from_index(i, &self.group))
            .collect()
    }

    pub fn element_strings(&self) -> Vec<String> {
        self.elements().iter().map(Element::to_string).collect()
    }

    /// All k-element subsets of this subset, in colex order of index sets.
    pub fn k_subsets(&self, k: u32) -> impl Iterator<Item = Subset> + '_ {
        sub_masks(self.bits, k).map(move |bits| Subset { group: self.group, bits })
    }
}

fn bit_positions(mut bits: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        out.push(bits.trailing_zeros());
        bits &= bits - 1;
    }
    out
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.element_strings().join(", "))
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings = self.element_strings();
        let mut seq = serializer.serialize_seq(Some(strings.len()))?;
        for s in &strings {
            seq.serialize_element(s)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64, m: i64) -> GroupParams {
        GroupParams::new(n, m).unwrap()
    }

    #[test]
    fn parts_and_exponents() {
        let h = g(6, 2);
        let s = Subset::parse(h, "1, x^2, x^5, x^0*y, x^3*y").unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.s(), 3);
        assert_eq!(s.t(), 2);
        assert_eq!(s.betas(), vec![0, 2, 5]);
        assert_eq!(s.alphas(), vec![0, 3]);
        assert!(s.contains(Element::new(2, false, &h)));
        assert!(!s.contains(Element::new(1, false, &h)));
        assert_eq!(s.to_string(), "{x^0, x^2, x^5, x^0*y, x^3*y}");
    }

    #[test]
    fn full_and_bounds() {
        let h = g(4, 0);
        assert_eq!(Subset::full(h).unwrap().len(), 8);
        let too_big = g(65, 0);
        assert!(matches!(Subset::full(too_big), Err(Error::GroupTooLarge { .. })));
        assert!(Subset::from_bits(h, 1 << 8).is_err());
    }

    #[test]
    fn k_subsets_counts() {
        let h = g(4, 2);
        let s = Subset::full(h).unwrap();
        assert_eq!(s.k_subsets(2).count(), 28);
        assert_eq!(s.k_subsets(0).count(), 1);
        assert_eq!(s.k_subsets(9).count(), 0);
    }

    #[test]
    fn serializes_as_sorted_element_strings() {
        let h = g(4, 2);
        let s = Subset::parse(h, "x^1*y, 1, x^3").unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["x^0","x^3","x^1*y"]"#);
    }
}
