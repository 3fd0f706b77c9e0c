//! End-to-end claim suite: every closed form, classification rule,
//! counting formula, product bound, and zero-product constant in the
//! library, each checked against an independent brute-force computation
//! and reported as one labelled result.
//!
//! Claims are identified by stable snake_case ids (`harborth_value_n6_m2`,
//! `failing_count_trend`, ...) so callers can filter by substring. A
//! status of `finding` marks a claim whose stated side condition
//! disagrees with enumeration in a reproducible, verified way; `fail`
//! marks a broken claim or an unverifiable discrepancy.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::{binomial_big, multiset_count, multiset_unrank_lex};
use crate::egz::{
    egz_bruteforce, egz_bruteforce_for_length, egz_conjecture_check, egz_witness_lower,
    sequence_zero_product_oracle, ConjectureStatus, SequenceOverG,
};
use crate::error::{Result, DEFAULT_BUDGET, DEFAULT_ORACLE_BUDGET};
use crate::group::GroupParams;
use crate::harborth::{
    classification_scan, count_failing_size_n, full_product_check, half_masks,
    harborth_bruteforce, harborth_closed_form, subset_passes, weighted_harborth_bruteforce,
    weighted_subset_passes, HarborthResult, ScanReport, ScanSize,
};
use crate::lemma::{check_divisibility_obstruction, lemma_sweep_group, pm_sweep_group};
use crate::products::{product_set, product_set_oracle_all};
use crate::subset::Subset;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Substring filter on claim ids; `None` runs everything.
    pub only: Option<String>,
    pub budget: u64,
    pub oracle_budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            only: None,
            budget: DEFAULT_BUDGET,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    /// A reproducible, brute-force-verified disagreement with a stated
    /// side condition. Recorded rather than failed.
    Finding,
    Fail,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Pass => "pass",
            ClaimStatus::Finding => "finding",
            ClaimStatus::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub status: ClaimStatus,
    pub detail: String,
}

/// Even groups small enough for exhaustive subset scans.
const EVEN_GROUPS: [(u32, u32); 10] = [
    (2, 0),
    (4, 0),
    (4, 2),
    (6, 0),
    (6, 2),
    (6, 4),
    (8, 0),
    (8, 2),
    (8, 4),
    (8, 6),
];

struct Ctx {
    config: SuiteConfig,
    results: Vec<ClaimResult>,
    harborth: BTreeMap<(u32, u32), HarborthResult>,
    scans: BTreeMap<(u32, u32, u32), ScanReport>,
}

impl Ctx {
    fn wants(&self, id: &str) -> bool {
        match &self.config.only {
            Some(f) => id.contains(f.as_str()),
            None => true,
        }
    }

    fn record(&mut self, id: &str, status: ClaimStatus, detail: String) {
        self.results.push(ClaimResult {
            id: id.to_string(),
            status,
            detail,
        });
    }

    fn pass_fail(&mut self, id: &str, ok: bool, detail: String) {
        let status = if ok {
            ClaimStatus::Pass
        } else {
            ClaimStatus::Fail
        };
        self.record(id, status, detail);
    }

    fn harborth(&mut self, n: u32, m: u32) -> Result<HarborthResult> {
        if !self.harborth.contains_key(&(n, m)) {
            let g = GroupParams::new(n as i64, m as i64)?;
            let r = harborth_bruteforce(&g, self.config.budget)?;
            self.harborth.insert((n, m), r);
        }
        Ok(self.harborth[&(n, m)].clone())
    }

    fn scan(&mut self, n: u32, m: u32, size: ScanSize) -> Result<ScanReport> {
        let key = (n, m, size.subset_size(n));
        if !self.scans.contains_key(&key) {
            let g = GroupParams::new(n as i64, m as i64)?;
            let r = classification_scan(&g, size, self.config.budget)?;
            self.scans.insert(key, r);
        }
        Ok(self.scans[&key].clone())
    }
}

/// Runs every claim whose id passes the filter, in a fixed order.
/// Budget exhaustion aborts the run with an error; a false claim is a
/// `fail` result, not an error.
pub fn run_suite(config: SuiteConfig) -> Result<Vec<ClaimResult>> {
    let mut ctx = Ctx {
        config,
        results: Vec::new(),
        harborth: BTreeMap::new(),
        scans: BTreeMap::new(),
    };
    claims_harborth_values(&mut ctx)?;
    claims_dihedral_table(&mut ctx)?;
    claims_classification(&mut ctx)?;
    claims_counting(&mut ctx)?;
    claims_lemma(&mut ctx)?;
    claims_obstruction(&mut ctx)?;
    claims_pm(&mut ctx)?;
    claims_full_product(&mut ctx)?;
    claims_weighted(&mut ctx)?;
    claims_egz(&mut ctx)?;
    claims_oracle_equivalence(&mut ctx)?;
    claims_size_n1_ratio(&mut ctx)?;
    Ok(ctx.results)
}

const BRANCH_NAMES: [&str; 5] = [
    "odd n",
    "n = 0 mod 4 with odd m",
    "n = 2 mod 4 with odd m",
    "n = 2 with even m",
    "even n >= 4 with even m",
];

fn closed_form_branch(n: u32, m: u32) -> usize {
    if n % 2 == 1 {
        0
    } else if m % 2 == 1 {
        if n % 4 == 0 {
            1
        } else {
            2
        }
    } else if n == 2 {
        3
    } else {
        4
    }
}

/// The closed form for the Harborth constant against per-group brute
/// force, over every group with n <= 8.
fn claims_harborth_values(ctx: &mut Ctx) -> Result<()> {
    let mut hit = [false; 5];
    for n in 2..=8u32 {
        for m in 0..n {
            hit[closed_form_branch(n, m)] = true;
            let id = format!("harborth_value_n{n}_m{m}");
            if !ctx.wants(&id) {
                continue;
            }
            let g = GroupParams::new(n as i64, m as i64)?;
            let closed = harborth_closed_form(&g);
            let brute = ctx.harborth(n, m)?;
            ctx.pass_fail(
                &id,
                closed == brute.g,
                format!("closed form {closed}, brute force {}", brute.g),
            );
        }
    }
    let id = "harborth_case_coverage";
    if ctx.wants(id) {
        let missing: Vec<&str> = BRANCH_NAMES
            .iter()
            .zip(hit)
            .filter(|(_, h)| !h)
            .map(|(name, _)| *name)
            .collect();
        let detail = if missing.is_empty() {
            "the n <= 8 grid exercises all five formula branches".to_string()
        } else {
            format!("branches never exercised: {}", missing.join(", "))
        };
        ctx.pass_fail(id, missing.is_empty(), detail);
    }
    Ok(())
}

/// The dihedral specialization: 2n + 1 for odd n, n + 2 for even n.
fn claims_dihedral_table(ctx: &mut Ctx) -> Result<()> {
    for n in 3..=8u32 {
        let id = format!("dihedral_value_n{n}");
        if !ctx.wants(&id) {
            continue;
        }
        let expected = if n % 2 == 0 { n + 2 } else { 2 * n + 1 };
        let brute = ctx.harborth(n, 0)?;
        ctx.pass_fail(
            &id,
            brute.g == expected,
            format!(
                "dihedral group of order {}: expected {expected}, brute force {}",
                2 * n,
                brute.g
            ),
        );
    }
    Ok(())
}

/// The failure-form classification at sizes n and n + 1 against the
/// product-set ground truth, for every even group with n <= 8 and two
/// groups at n = 12, plus the half-set rule that replaces the published
/// odd-exponent exception.
fn claims_classification(ctx: &mut Ctx) -> Result<()> {
    let groups = EVEN_GROUPS.iter().copied().chain([(12u32, 0u32), (12, 2)]);
    for (n, m) in groups {
        let id = format!("failing_classification_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let at_n = ctx.scan(n, m, ScanSize::N)?;
        let at_n1 = ctx.scan(n, m, ScanSize::NPlus1)?;
        let ok = at_n.mismatch_count == 0 && at_n1.mismatch_count == 0;
        ctx.pass_fail(
            &id,
            ok,
            format!(
                "size {n}: {}/{} failing, {} mismatches; size {}: {}/{} failing, {} mismatches",
                at_n.failing,
                at_n.total,
                at_n.mismatch_count,
                n + 1,
                at_n1.failing,
                at_n1.total,
                at_n1.mismatch_count
            ),
        );
    }
    // sets made of one full x-parity class and one full y-parity class
    // are the only candidates for failing size-n sets beyond the two
    // parity forms; enumeration settles which of them actually fail
    let id = "failing_classification_half_sets";
    if ctx.wants(id) {
        let mut bad = Vec::new();
        for n in [4u32, 8, 12, 20] {
            for m in [0u32, 2] {
                let g = GroupParams::new(n as i64, m as i64)?;
                let (ex, ox, ey, oy) = half_masks(n);
                for (label, bits) in [
                    ("even-x+even-y", ex | ey),
                    ("even-x+odd-y", ex | oy),
                    ("odd-x+even-y", ox | ey),
                    ("odd-x+odd-y", ox | oy),
                ] {
                    let s = Subset::from_bits(g, bits)?;
                    let passes = subset_passes(&s)?;
                    let should_fail = n % 8 == 4 && m % 4 == 2 && bits & ox == 0;
                    if passes == should_fail {
                        bad.push(format!(
                            "H({n},{m}) {label}: {}",
                            if passes { "passes" } else { "fails" }
                        ));
                    }
                }
            }
        }
        if bad.is_empty() {
            ctx.record(
                id,
                ClaimStatus::Finding,
                "the odd-x half-sets pass for every even m (in H(4,0), \
                 x * x^2y * x^3 * y = 1), against the stated exception for \
                 m = 0 mod 4; the even-x half-sets fail exactly when \
                 n = 4 mod 8 and m = 2 mod 4 (checked n in {4,8,12,20}, \
                 m in {0,2})"
                    .into(),
            );
        } else {
            ctx.record(
                id,
                ClaimStatus::Fail,
                format!("half-set rule disagrees with enumeration: {}", bad.join("; ")),
            );
        }
    }
    Ok(())
}

fn ratio_str(r: &BigRational) -> String {
    format!("{:.5}", r.to_f64().unwrap_or(f64::NAN))
}

/// The closed count of failing size-n subsets against enumeration, and
/// the monotone approach of the failing fraction to 3/4 from both sides.
fn claims_counting(ctx: &mut Ctx) -> Result<()> {
    let groups = EVEN_GROUPS.iter().copied().chain([(12u32, 0u32), (12, 2)]);
    for (n, m) in groups {
        let id = format!("failing_count_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n as i64, m as i64)?;
        let formula = count_failing_size_n(&g)?;
        let scan = ctx.scan(n, m, ScanSize::N)?;
        ctx.pass_fail(
            &id,
            formula == BigUint::from(scan.failing),
            format!("formula {formula}, enumeration {}", scan.failing),
        );
    }
    let id = "failing_count_trend";
    if ctx.wants(id) {
        let ratio = |n: u32| -> Result<BigRational> {
            let g = GroupParams::new(n as i64, 0)?;
            let c = count_failing_size_n(&g)?;
            let total = binomial_big(2 * n as u64, n as u64);
            Ok(BigRational::new(c.into(), total.into()))
        };
        let limit = BigRational::new(3.into(), 4.into());
        let below = [ratio(4)?, ratio(8)?, ratio(12)?];
        let above = [ratio(2)?, ratio(6)?, ratio(10)?];
        let ok = below[0] < below[1]
            && below[1] < below[2]
            && below[2] < limit
            && above[0] > above[1]
            && above[1] > above[2]
            && above[2] > limit;
        ctx.pass_fail(
            id,
            ok,
            format!(
                "failing fractions close in on 3/4: {} < {} < {} < 0.75 < {} < {} < {}",
                ratio_str(&below[0]),
                ratio_str(&below[1]),
                ratio_str(&below[2]),
                ratio_str(&above[2]),
                ratio_str(&above[1]),
                ratio_str(&above[0])
            ),
        );
    }
    Ok(())
}

/// The product-set lower bound, its equality characterization, and the
/// progression shape of equality cases, swept over every exponent set
/// for n <= 12 at several values of m.
fn claims_lemma(ctx: &mut Ctx) -> Result<()> {
    for n in 2..=12u32 {
        let ids = [
            format!("product_bound_n{n}"),
            format!("equality_characterization_n{n}"),
            format!("equality_form_n{n}"),
        ];
        if !ids.iter().any(|i| ctx.wants(i)) {
            continue;
        }
        let mut spots = vec![0, 1, n / 2];
        spots.sort_unstable();
        spots.dedup();
        let mut records = 0u64;
        let (mut violations, mut mismatches, mut form_failures) = (0u64, 0u64, 0u64);
        for &m in &spots {
            let g = GroupParams::new(n as i64, m as i64)?;
            let (_, summary) = lemma_sweep_group(&g, ctx.config.budget)?;
            records += summary.records;
            violations += summary.bound_violations;
            mismatches += summary.equality_mismatches;
            form_failures += summary.form_failures;
        }
        let scope = format!("{records} exponent sets across m in {spots:?}");
        if ctx.wants(&ids[0]) {
            ctx.pass_fail(
                &ids[0],
                violations == 0,
                format!("{scope}: {violations} bound violations"),
            );
        }
        if ctx.wants(&ids[1]) {
            ctx.pass_fail(
                &ids[1],
                mismatches == 0,
                format!("{scope}: {mismatches} equality-characterization mismatches"),
            );
        }
        if ctx.wants(&ids[2]) {
            ctx.pass_fail(
                &ids[2],
                form_failures == 0,
                format!("{scope}: {form_failures} progression-form failures"),
            );
        }
    }
    Ok(())
}

/// Attainability of the bound matches the divisibility condition for
/// every set size.
fn claims_obstruction(ctx: &mut Ctx) -> Result<()> {
    for n in 2..=12u32 {
        let id = format!("divisibility_obstruction_n{n}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n as i64, 0)?;
        let mut inconsistent = Vec::new();
        for t in 0..=n {
            let check = check_divisibility_obstruction(&g, t, ctx.config.budget)?;
            if !check.consistent {
                inconsistent.push(t);
            }
        }
        ctx.pass_fail(
            &id,
            inconsistent.is_empty(),
            if inconsistent.is_empty() {
                format!("achievers exist exactly where allowed, t = 0..={n}")
            } else {
                format!("attainability disagrees with the divisibility condition at t in {inconsistent:?}")
            },
        );
    }
    Ok(())
}

/// The sign-free product bound, plus the claimed equality condition; any
/// verified disagreement with the latter is recorded as a finding.
fn claims_pm(ctx: &mut Ctx) -> Result<()> {
    let want_findings = ctx.wants("pm_equality_findings");
    let mut disagreements = 0u64;
    let mut scanned = 0u64;
    let mut examples: Vec<String> = Vec::new();
    for n in 2..=12u32 {
        let id = format!("pm_bound_n{n}");
        let want_bound = ctx.wants(&id);
        if !want_bound && !want_findings {
            continue;
        }
        let g = GroupParams::new(n as i64, 0)?;
        let (records, summary) = pm_sweep_group(&g, ctx.config.budget)?;
        if want_bound {
            ctx.pass_fail(
                &id,
                summary.bound_violations == 0,
                format!(
                    "{} exponent sets: {} bound violations",
                    summary.records, summary.bound_violations
                ),
            );
        }
        scanned += summary.records;
        disagreements += summary.disagreements;
        for r in records.iter().filter(|r| r.agreement == Some(false)) {
            if examples.len() >= 4 {
                break;
            }
            let claimed = if r.claimed_equality == Some(true) {
                "equality"
            } else {
                "a strict bound"
            };
            examples.push(format!(
                "n={} exponents {:?}: condition says {claimed}, enumeration gives size {} against bound {}",
                r.n, r.betas, r.achieved, r.bound
            ));
        }
    }
    if want_findings {
        if disagreements == 0 {
            ctx.record(
                "pm_equality_findings",
                ClaimStatus::Pass,
                format!("claimed equality condition agrees with enumeration on all {scanned} sets"),
            );
        } else {
            ctx.record(
                "pm_equality_findings",
                ClaimStatus::Finding,
                format!(
                    "{disagreements} sets disagree with the claimed equality condition: {}",
                    examples.join("; ")
                ),
            );
        }
    }
    Ok(())
}

/// Every subset two past size n multiplies out to the whole group.
fn claims_full_product(ctx: &mut Ctx) -> Result<()> {
    for (n, m) in EVEN_GROUPS {
        if n < 4 {
            continue;
        }
        let id = format!("full_product_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n as i64, m as i64)?;
        let report = full_product_check(&g, ctx.config.budget)?;
        ctx.pass_fail(
            &id,
            report.ok,
            match &report.witness {
                None => format!(
                    "all {} subsets of size {} reach the full group",
                    report.subsets_checked,
                    n + 2
                ),
                Some(w) => format!("subset {w:?} misses part of the group"),
            },
        );
    }
    Ok(())
}

/// The sign-weighted constant equals n + 2 on the covered groups and the
/// two hand-picked size-(n+1) subsets fail the weighted test.
fn claims_weighted(ctx: &mut Ctx) -> Result<()> {
    for (n, m) in [(6u32, 0u32), (6, 2), (6, 4), (8, 0), (8, 2)] {
        let id = format!("weighted_value_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n as i64, m as i64)?;
        let weighted = weighted_harborth_bruteforce(&g, ctx.config.budget)?;
        let plain = ctx.harborth(n, m)?;
        let ok = weighted.g == n + 2 && weighted.g <= plain.g;
        ctx.pass_fail(
            &id,
            ok,
            format!(
                "weighted constant {} (expected {}), plain constant {}",
                weighted.g,
                n + 2,
                plain.g
            ),
        );
    }
    let id = "weighted_witnesses";
    if ctx.wants(id) {
        let mut failures = Vec::new();
        for (n, text) in [
            (6i64, "1, x^1, x^2, x^3, x^4, x^5, x^0*y"),
            (8, "1, x^1, x^2, x^3, x^4, x^5, x^0*y, x^2*y, x^4*y"),
        ] {
            let g = GroupParams::new(n, 0)?;
            let s = Subset::parse(g, text)?;
            if weighted_subset_passes(&s)? {
                failures.push(format!("n={n} subset {text}"));
            }
        }
        ctx.pass_fail(
            id,
            failures.is_empty(),
            if failures.is_empty() {
                "both size-(n+1) witness subsets fail the weighted test".to_string()
            } else {
                format!("witness unexpectedly passes: {}", failures.join("; "))
            },
        );
    }
    Ok(())
}

/// Zero-product constants on the small groups, and the 3n value on the
/// smallest group it is conjectured for.
/// Asks the ordered-word oracle whether every sequence of the given
/// length carries a zero product of k terms, exhaustively over all
/// multisets. Used to double-check a decisive scan level.
fn oracle_confirms_level(g: &GroupParams, length: u32, k: u32, budget: u64) -> Result<bool> {
    let count = multiset_count(g.order(), length as u64).unwrap_or(u128::MAX);
    let total = u64::try_from(count).expect("level sizes checked by caller fit u64");
    for rank in 0..total {
        let mult = multiset_unrank_lex(rank as u128, length, g.order() as u32);
        let seq = SequenceOverG::new(*g, mult)?;
        if !sequence_zero_product_oracle(&seq, k, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn claims_egz(ctx: &mut Ctx) -> Result<()> {
    for (n, m, expected) in [(2i64, 0i64, 5u32), (2, 1, 7), (3, 0, 9)] {
        let id = format!("egz_value_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n, m)?;
        let r = egz_bruteforce(&g, expected, ctx.config.budget)?;
        let found = r
            .s
            .map_or_else(|| format!("none at or below {expected}"), |v| v.to_string());
        ctx.pass_fail(
            &id,
            r.s == Some(expected),
            format!("expected {expected}, scan gives {found}"),
        );
    }
    for (n, m, s) in [(2i64, 0i64, 5u32), (2, 1, 7), (3, 0, 9)] {
        let id = format!("egz_witness_invariant_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n, m)?;
        let below = egz_witness_lower(&g, s - 1, ctx.config.budget)?;
        let at = egz_witness_lower(&g, s, ctx.config.budget)?;
        ctx.pass_fail(
            &id,
            below.is_some() && at.is_none(),
            format!(
                "some length-{} sequence must fail and no length-{s} sequence may",
                s - 1
            ),
        );
    }
    for (n, m) in [(4i64, 0i64), (4, 2)] {
        let id = format!("egz_conjecture_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n, m)?;
        let report = egz_conjecture_check(&g, ctx.config.budget)?;
        let (status, detail) = match &report.status {
            ConjectureStatus::Confirmed { value } => {
                if report.witness_verified == Some(false) {
                    (
                        ClaimStatus::Fail,
                        format!("constant {value} matches 3n but the oracle disputes the decisive witness"),
                    )
                } else {
                    (
                        ClaimStatus::Pass,
                        format!(
                            "constant {value} matches 3n; decisive length-{} witness re-checked",
                            value - 1
                        ),
                    )
                }
            }
            ConjectureStatus::RefutedBelow { value } if report.witness_verified == Some(true) => {
                // the refutation stands on two legs: the decisive failing
                // witness (already oracle-checked), and the claim that one
                // length later nothing fails, re-proved here by the oracle
                // alone over every multiset of that length
                let exp = g.exponent() as u32;
                if oracle_confirms_level(&g, *value, exp, ctx.config.oracle_budget)? {
                    (
                        ClaimStatus::Finding,
                        format!(
                            "constant is {value}, below the conjectured {}; failing \
                             length-{} witness and the full length-{value} level were \
                             re-checked by the ordered-word oracle",
                            report.expected,
                            value - 1
                        ),
                    )
                } else {
                    (
                        ClaimStatus::Fail,
                        format!("scan says every length-{value} sequence passes but the oracle found one that fails"),
                    )
                }
            }
            ConjectureStatus::RefutedAbove { failing_length }
                if report.witness_verified == Some(true) =>
            {
                (
                    ClaimStatus::Finding,
                    format!(
                        "a length-{failing_length} sequence still fails; witness oracle-verified"
                    ),
                )
            }
            other => (
                ClaimStatus::Fail,
                format!("unverified refutation: {other:?}"),
            ),
        };
        ctx.record(&id, status, detail);
    }
    // with products of length |G| = 2n instead of exp(G) = n, the
    // dihedral-style value 3n does hold at n = 4
    for (n, m) in [(4i64, 0i64), (4, 2)] {
        let id = format!("egz_order_length_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let g = GroupParams::new(n, m)?;
        let order = g.order() as u32;
        let expected = 3 * g.n();
        let r = egz_bruteforce_for_length(&g, order, expected, ctx.config.budget)?;
        match r.s {
            Some(v) if v == expected => ctx.record(
                &id,
                ClaimStatus::Pass,
                format!("length-{order} products: constant {v} = 3n"),
            ),
            Some(v) => ctx.record(
                &id,
                ClaimStatus::Finding,
                format!("length-{order} products give {v}, not the dihedral-style {expected}"),
            ),
            None => ctx.record(
                &id,
                ClaimStatus::Finding,
                format!("length-{order} products: no level at or below {expected} passes"),
            ),
        }
    }
    Ok(())
}

/// The structured product-set computation against the ordered-word
/// oracle, over every subset of at most six elements.
fn claims_oracle_equivalence(ctx: &mut Ctx) -> Result<()> {
    for n in 2..=8u32 {
        for m in 0..n {
            let id = format!("oracle_equivalence_n{n}_m{m}");
            if !ctx.wants(&id) {
                continue;
            }
            let g = GroupParams::new(n as i64, m as i64)?;
            let full = Subset::full(g)?;
            let j_max = 6.min(2 * n);
            let mut checked = 0u64;
            let mut mismatch: Option<String> = None;
            'group: for j in 1..=j_max {
                for sub in full.k_subsets(j) {
                    let oracle = product_set_oracle_all(&sub, ctx.config.oracle_budget)?;
                    for k in 1..=j {
                        let fast = product_set(&sub, k)?;
                        checked += 1;
                        if fast.bits() != oracle[k as usize].bits() {
                            mismatch =
                                Some(format!("subset {:?} at k = {k}", sub.element_strings()));
                            break 'group;
                        }
                    }
                }
            }
            ctx.pass_fail(
                &id,
                mismatch.is_none(),
                match mismatch {
                    None => format!("{checked} (subset, k) pairs agree with the oracle"),
                    Some(w) => format!("disagreement at {w}"),
                },
            );
        }
    }
    Ok(())
}

/// The failing fraction one past size n stays within 2 * sqrt(n / 2^n),
/// checked exactly in integers.
fn claims_size_n1_ratio(ctx: &mut Ctx) -> Result<()> {
    for (n, m) in EVEN_GROUPS {
        if n < 4 {
            continue;
        }
        let id = format!("size_n1_ratio_n{n}_m{m}");
        if !ctx.wants(&id) {
            continue;
        }
        let scan = ctx.scan(n, m, ScanSize::NPlus1)?;
        let count = BigUint::from(scan.failing);
        let total = binomial_big(2 * n as u64, n as u64 + 1);
        // count/total <= 2 sqrt(n/2^n)  <=>  count^2 * 2^n <= 4n * total^2
        let lhs = &count * &count * (BigUint::from(1u32) << n);
        let rhs = BigUint::from(4 * n) * &total * &total;
        let ratio = scan.failing as f64 / total.to_f64().unwrap_or(f64::NAN);
        let bound = 2.0 * ((n as f64) / (2f64).powi(n as i32)).sqrt();
        ctx.pass_fail(
            &id,
            lhs <= rhs,
            format!(
                "failing fraction {ratio:.5} (= {}/{total}), bound {bound:.5}",
                scan.failing
            ),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn statuses(results: &[ClaimResult]) -> BTreeMap<String, ClaimStatus> {
        results
            .iter()
            .map(|r| (r.id.clone(), r.status))
            .collect()
    }

    #[test]
    fn filter_selects_matching_claims() {
        let config = SuiteConfig {
            only: Some("dihedral".to_string()),
            ..SuiteConfig::default()
        };
        let results = run_suite(config).unwrap();
        assert_eq!(results.len(), 6);
        assert!(results.iter().all(|r| r.id.starts_with("dihedral_value_n")));
        assert!(results.iter().all(|r| r.status == ClaimStatus::Pass));
    }

    #[test]
    fn small_value_claims_pass() {
        let config = SuiteConfig {
            only: Some("harborth_value_n4".to_string()),
            ..SuiteConfig::default()
        };
        let results = run_suite(config).unwrap();
        assert_eq!(results.len(), 4);
        assert!(results.iter().all(|r| r.status == ClaimStatus::Pass));
    }

    #[test]
    fn counting_trend_passes() {
        let config = SuiteConfig {
            only: Some("failing_count_trend".to_string()),
            ..SuiteConfig::default()
        };
        let results = run_suite(config).unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].status, ClaimStatus::Pass);
        assert!(results[0].detail.contains("0.75"));
    }

    #[test]
    fn pm_findings_are_recorded_not_failed() {
        let config = SuiteConfig {
            only: Some("pm_equality_findings".to_string()),
            ..SuiteConfig::default()
        };
        let results = run_suite(config).unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].status, ClaimStatus::Finding);
        assert!(results[0].detail.contains("n=8"));
    }

    #[test]
    fn case_coverage_claim_sees_all_branches() {
        let config = SuiteConfig {
            only: Some("harborth_case_coverage".to_string()),
            ..SuiteConfig::default()
        };
        let results = run_suite(config).unwrap();
        let map = statuses(&results);
        assert_eq!(map["harborth_case_coverage"], ClaimStatus::Pass);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let config = SuiteConfig {
            only: Some("harborth_value_n8_m0".to_string()),
            budget: 10,
            ..SuiteConfig::default()
        };
        assert!(run_suite(config).is_err());
    }
}
