//! Lower bounds on y-type product sets, their equality structure, and
//! the plus-minus analogue for x-type elements.
//!
//! For t distinct y-type elements, |Pi_t| is at least t when n is odd,
//! t/2 when n and t are even, and (t+1)/2 when n is even and t is odd.
//! Equality forces the exponents into a single residue class modulo n/t
//! (or n/(t+1) with one member missing), and then Pi_t itself is an
//! arithmetic progression with an explicitly computable offset. The
//! plus-minus products of x-type elements obey the same bounds; the
//! claimed sharpened equality condition there restricts the class offset,
//! and this module records where that claim agrees with brute force.

use serde::Serialize;

use crate::error::{charge, Error, Result};
use crate::group::GroupParams;
use crate::products::{signed_products, y_products, ProductSet};
use crate::subset::check_enum_size;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    NOdd,
    NEvenTEven,
    NEvenTOdd,
}

pub fn parity_case(n: u32, t: u32) -> ParityCase {
    if n % 2 == 1 {
        ParityCase::NOdd
    } else if t % 2 == 0 {
        ParityCase::NEvenTEven
    } else {
        ParityCase::NEvenTOdd
    }
}

/// The proven lower bound on |Pi_t| over t distinct y-type elements.
pub fn product_lower_bound(n: u32, t: u32) -> u32 {
    match parity_case(n, t) {
        ParityCase::NOdd => t,
        ParityCase::NEvenTEven => t / 2,
        ParityCase::NEvenTOdd => (t + 1) / 2,
    }
}

fn same_class(exps: &[u32], d: u32) -> bool {
    exps.windows(2).all(|w| w[0] % d == w[1] % d)
}

/// Whether the bound is attained, for every t. Outside the characterized
/// ranges (t >= 4, 2, 5 by case) this encodes the directly computed
/// small-t behavior: odd n attains for t <= 3 always, even n attains for
/// t = 1 always and for t = 3 exactly when two exponents differ by n/2.
pub fn predicted_equality(n: u32, t: u32, alphas: &[u32]) -> bool {
    match parity_case(n, t) {
        ParityCase::NOdd => match t {
            0 => false,
            1..=3 => true,
            _ => n % t == 0 && same_class(alphas, n / t),
        },
        ParityCase::NEvenTEven => t != 0 && n % t == 0 && same_class(alphas, n / t),
        ParityCase::NEvenTOdd => match t {
            1 => true,
            3 => alphas
                .iter()
                .any(|&a| alphas.contains(&((a + n / 2) % n))),
            _ => n % (t + 1) == 0 && same_class(alphas, n / (t + 1)),
        },
    }
}

/// Whether any t-set of exponents can attain the bound at all: t must be
/// 2, 3, or a divisor of n (n odd); a divisor of n (n, t even); or 3, or
/// one less than a divisor of n (n even, t odd).
pub fn sharpness_allowed(n: u32, t: u32) -> bool {
    if t == 0 || t > n {
        return false;
    }
    if n % 2 == 1 {
        t == 2 || t == 3 || n % t == 0
    } else if t % 2 == 0 {
        n % t == 0
    } else {
        t == 3 || n % (t + 1) == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaCase {
    pub group: GroupParams,
    pub t: u32,
    pub alphas: Vec<u32>,
    pub parity_case: ParityCase,
    pub bound: u32,
    pub achieved: u32,
    pub equality: bool,
    pub predicted_equality: bool,
}

fn validated_alphas(g: &GroupParams, alphas: &[u32]) -> Result<Vec<u32>> {
    let n = g.n();
    let mut sorted = alphas.to_vec();
    sorted.sort_unstable();
    if sorted.iter().any(|&a| a >= n) {
        return Err(Error::InvalidParams(format!(
            "exponent out of range for {g}: {sorted:?}"
        )));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParams(format!(
            "exponents must be distinct: {sorted:?}"
        )));
    }
    Ok(sorted)
}

/// Evaluates |Pi_t| against the lower bound for one exponent set.
pub fn check_bound(g: &GroupParams, alphas: &[u32]) -> Result<LemmaCase> {
    check_enum_size(g)?;
    let alphas = validated_alphas(g, alphas)?;
    let n = g.n();
    let t = alphas.len() as u32;
    let achieved = y_products(g, &alphas)?.len();
    let bound = product_lower_bound(n, t);
    Ok(LemmaCase {
        group: *g,
        t,
        parity_case: parity_case(n, t),
        bound,
        achieved,
        equality: achieved == bound,
        predicted_equality: predicted_equality(n, t, &alphas),
        alphas,
    })
}

/// The predicted shape of Pi_t when the equality conditions hold: an
/// arithmetic progression of x-exponents starting at the alternating sum
/// of the sorted exponents plus floor(t/2)*m.
fn equality_form(g: &GroupParams, alphas: &[u32]) -> ProductSet {
    let n = g.n();
    let t = alphas.len() as u32;
    let half = (t / 2) as usize;
    let top: u64 = alphas[alphas.len() - ((t + 1) / 2) as usize..]
        .iter()
        .map(|&a| a as u64)
        .sum();
    let bottom: u64 = alphas[..half].iter().map(|&a| a as u64).sum();
    let alpha =
        ((top + (half as u64) * g.m() as u64 + (n as u64) * (t as u64)) - bottom) % n as u64;
    let (step, count) = match parity_case(n, t) {
        ParityCase::NOdd => (n / t, t),
        ParityCase::NEvenTEven => (2 * n / t, t / 2),
        ParityCase::NEvenTOdd => (2 * n / (t + 1), (t + 1) / 2),
    };
    let mut residues = 0u64;
    for k in 0..count as u64 {
        residues |= 1 << ((alpha + k * step as u64) % n as u64);
    }
    ProductSet::from_residues(*g, t, residues, t % 2 == 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualityFormCheck {
    pub case: LemmaCase,
    /// t lies in the range where the characterization is asserted and the
    /// divisibility condition holds.
    pub in_characterized_range: bool,
    /// Whether Pi_t equals the predicted progression; None out of range
    /// or when equality itself fails.
    pub form_ok: Option<bool>,
}

/// Checks the explicit progression form of Pi_t at an equality case.
pub fn check_equality_form(g: &GroupParams, alphas: &[u32]) -> Result<EqualityFormCheck> {
    let case = check_bound(g, alphas)?;
    let n = g.n();
    let t = case.t;
    let in_range = match case.parity_case {
        ParityCase::NOdd => t >= 4 && n % t == 0,
        ParityCase::NEvenTEven => t >= 2 && n % t == 0,
        ParityCase::NEvenTOdd => t >= 5 && n % (t + 1) == 0,
    };
    let form_ok = if in_range && case.equality {
        let expected = equality_form(g, &case.alphas);
        let actual = y_products(g, &case.alphas)?;
        Some(actual == expected)
    } else {
        None
    };
    Ok(EqualityFormCheck { case, in_characterized_range: in_range, form_ok })
}

/// First exponent set (in mask order) of size t attaining the bound.
pub fn find_bound_achiever(g: &GroupParams, t: u32, budget: u64) -> Result<Option<Vec<u32>>> {
    check_enum_size(g)?;
    let n = g.n();
    if t > n {
        return Ok(None);
    }
    charge(0, 1u128 << n, budget)?;
    let bound = product_lower_bound(n, t);
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() != t {
            continue;
        }
        let alphas: Vec<u32> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
        if y_products(g, &alphas)?.len() == bound {
            return Ok(Some(alphas));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionCheck {
    pub group: GroupParams,
    pub t: u32,
    pub sharp_allowed: bool,
    pub achiever: Option<Vec<u32>>,
    /// An achiever exists exactly when the divisibility test allows one.
    pub consistent: bool,
}

/// Confirms that the bound is attainable for exactly the allowed t.
pub fn check_divisibility_obstruction(g: &GroupParams, t: u32, budget: u64) -> Result<ObstructionCheck> {
    let allowed = sharpness_allowed(g.n(), t);
    let achiever = find_bound_achiever(g, t, budget)?;
    Ok(ObstructionCheck {
        group: *g,
        t,
        sharp_allowed: allowed,
        consistent: achiever.is_some() == allowed,
        achiever,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PmCase {
    pub group: GroupParams,
    pub s: u32,
    pub betas: Vec<u32>,
    pub parity_case: ParityCase,
    pub bound: u32,
    pub achieved: u32,
    pub equality: bool,
    /// The claimed offset-restricted equality condition, within its
    /// stated range; the product itself does not depend on m.
    pub claimed_equality: Option<bool>,
    pub agreement: Option<bool>,
}

/// The claimed equality condition for plus-minus products: the class
/// condition of the y-type lemma with the class offset further pinned to
/// 0 (n odd), {0, n/2s} (n, s even), or {0, n/2(s+1)} (n even, s odd).
fn claimed_pm_equality(n: u32, s: u32, betas: &[u32]) -> Option<bool> {
    let offset_ok = |d: u32, extra_num: u32, extra_den: u32| {
        let b = betas[0] % d;
        b == 0 || (n % extra_den == 0 && b == extra_num)
    };
    match parity_case(n, s) {
        ParityCase::NOdd if s >= 4 => {
            Some(n % s == 0 && same_class(betas, n / s) && betas[0] % (n / s) == 0)
        }
        ParityCase::NEvenTEven if s >= 2 => Some(
            n % s == 0
                && same_class(betas, n / s)
                && offset_ok(n / s, n / (2 * s), 2 * s),
        ),
        ParityCase::NEvenTOdd if s >= 5 => Some(
            n % (s + 1) == 0
                && same_class(betas, n / (s + 1))
                && offset_ok(n / (s + 1), n / (2 * (s + 1)), 2 * (s + 1)),
        ),
        _ => None,
    }
}

/// Evaluates |signed products| against the bound and the claimed
/// offset-restricted equality condition.
pub fn check_pm_equality(g: &GroupParams, betas: &[u32]) -> Result<PmCase> {
    check_enum_size(g)?;
    let betas = validated_alphas(g, betas)?;
    let n = g.n();
    let s = betas.len() as u32;
    let achieved = signed_products(g, &betas)?.len();
    let bound = product_lower_bound(n, s);
    let equality = achieved == bound && s != 0;
    let claimed = claimed_pm_equality(n, s, &betas);
    Ok(PmCase {
        group: *g,
        s,
        parity_case: parity_case(n, s),
        bound,
        achieved,
        equality,
        claimed_equality: claimed,
        agreement: claimed.map(|c| c == equality),
        betas,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaRecord {
    pub n: u32,
    pub m: u32,
    pub t: u32,
    pub alphas: Vec<u32>,
    pub bound: u32,
    pub achieved: u32,
    pub predicted_equality: bool,
    pub actual_equality: bool,
    pub equality_form_ok: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaSweepSummary {
    pub group: GroupParams,
    pub records: u64,
    pub bound_violations: u64,
    pub equality_mismatches: u64,
    pub form_failures: u64,
}

/// Evaluates every exponent set of every size against the bound, the
/// equality characterization, and the progression form.
pub fn lemma_sweep_group(
    g: &GroupParams,
    budget: u64,
) -> Result<(Vec<LemmaRecord>, LemmaSweepSummary)> {
    check_enum_size(g)?;
    let n = g.n();
    charge(0, 1u128 << n, budget)?;
    let mut records = Vec::with_capacity(1 << n);
    let mut bound_violations = 0;
    let mut equality_mismatches = 0;
    let mut form_failures = 0;
    for mask in 0u64..(1u64 << n) {
        let alphas: Vec<u32> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
        let form = check_equality_form(g, &alphas)?;
        let case = form.case;
        if case.achieved < case.bound {
            bound_violations += 1;
        }
        if case.equality != case.predicted_equality {
            equality_mismatches += 1;
        }
        if form.form_ok == Some(false) {
            form_failures += 1;
        }
        records.push(LemmaRecord {
            n,
            m: g.m(),
            t: case.t,
            alphas: case.alphas,
            bound: case.bound,
            achieved: case.achieved,
            predicted_equality: case.predicted_equality,
            actual_equality: case.equality,
            equality_form_ok: form.form_ok,
        });
    }
    let summary = LemmaSweepSummary {
        group: *g,
        records: records.len() as u64,
        bound_violations,
        equality_mismatches,
        form_failures,
    };
    Ok((records, summary))
}

#[derive(Debug, Clone, Serialize)]
pub struct PmRecord {
    pub n: u32,
    pub s: u32,
    pub betas: Vec<u32>,
    pub bound: u32,
    pub achieved: u32,
    pub actual_equality: bool,
    pub claimed_equality: Option<bool>,
    pub agreement: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PmSweepSummary {
    pub n: u32,
    pub records: u64,
    pub bound_violations: u64,
    /// Cases in range where the claimed condition and brute force differ.
    pub disagreements: u64,
}

/// Evaluates every exponent set against the plus-minus bound and the
/// claimed equality condition. Independent of m.
pub fn pm_sweep_group(g: &GroupParams, budget: u64) -> Result<(Vec<PmRecord>, PmSweepSummary)> {
    check_enum_size(g)?;
    let n = g.n();
    charge(0, 1u128 << n, budget)?;
    let mut records = Vec::with_capacity(1 << n);
    let mut bound_violations = 0;
    let mut disagreements = 0;
    for mask in 0u64..(1u64 << n) {
        let betas: Vec<u32> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
        let case = check_pm_equality(g, &betas)?;
        if case.achieved < case.bound {
            bound_violations += 1;
        }
        if case.agreement == Some(false) {
            disagreements += 1;
        }
        records.push(PmRecord {
            n,
            s: case.s,
            betas: case.betas,
            bound: case.bound,
            achieved: case.achieved,
            actual_equality: case.equality,
            claimed_equality: case.claimed_equality,
            agreement: case.agreement,
        });
    }
    let summary = PmSweepSummary {
        n,
        records: records.len() as u64,
        bound_violations,
        disagreements,
    };
    Ok((records, summary))
}
