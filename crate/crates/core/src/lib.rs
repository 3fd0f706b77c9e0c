//! Metacyclic groups H(n,m) = <x, y | x^n = 1, y^2 = x^m, yx = x^-1 y>
//! and the combinatorics of their distinct-element product sets.
//!
//! The family covers dihedral (m = 0) and dicyclic (m = n/2) groups. The
//! crate provides exact element arithmetic, fast product-set engines with
//! exhaustive oracles, Harborth-style constants for plain and inverse-
//! weighted products, Erdos-Ginzburg-Ziv constants, and a verification
//! suite that replays every closed-form claim against brute force.

pub mod combinatorics;
pub mod egz;
pub mod error;
pub mod group;
pub mod harborth;
pub mod lemma;
pub mod products;
pub mod subset;
pub mod suite;

pub use egz::{
    egz_bruteforce, egz_bruteforce_for_length, egz_conjecture_check, egz_witness_lower,
    sequence_has_zero_product, sequence_zero_product_oracle, ConjectureReport, ConjectureStatus,
    EgzLevel, EgzResult, SequenceOverG,
};
pub use error::{Error, Result, DEFAULT_BUDGET, DEFAULT_ORACLE_BUDGET, MAX_ENUM_N};
pub use group::{Element, GroupParams};
pub use harborth::{
    classification_scan, classify_size_n, classify_size_n_plus_1, count_failing_size_n,
    failing_fraction_report, full_product_check, harborth_bruteforce, harborth_closed_form,
    subset_passes, weighted_harborth_bruteforce, weighted_subset_passes, FailureForm, FormCode,
    FractionReport, FullProductReport, HarborthResult, LevelStatus, ScanReport, ScanSize,
};
pub use lemma::{
    check_bound, check_divisibility_obstruction, check_equality_form, check_pm_equality,
    find_bound_achiever, lemma_sweep_group, parity_case, pm_sweep_group, predicted_equality,
    product_lower_bound, sharpness_allowed, EqualityFormCheck, LemmaCase, LemmaRecord,
    LemmaSweepSummary, ObstructionCheck, ParityCase, PmCase, PmRecord, PmSweepSummary,
};
pub use products::{
    coset_product, mixed_products, product_set, product_set_oracle, product_set_oracle_all,
    signed_products, weighted_mixed_products, weighted_y_products, y_products, CosetProduct,
    ProductSet, SignedProductSet,
};
pub use subset::Subset;
pub use suite::{run_suite, ClaimResult, ClaimStatus, SuiteConfig};
