//! Exact-arithmetic toolkit for balanced crossover designs.
//!
//! A crossover design assigns one of `v` treatments to each of `n` subjects
//! in each of `p` periods; a treatment produces a direct effect in its own
//! period and a carryover effect in the next one. This crate constructs the
//! classical balanced designs (Williams squares and friends), computes their
//! information matrices in exact rational arithmetic, and certifies the
//! optimality properties those designs are known for: symmetric-group
//! averaging identities, nonnegative-definite dominance over competing
//! designs, efficiency lower bounds, and a combined direct-plus-carryover
//! variance functional.
//!
//! Everything is exact: matrix entries are arbitrary-precision rationals,
//! definiteness is decided by pivoted elimination, and brute-force oracles
//! (permutation averages, contrast enumerations, exhaustive design sweeps)
//! back every closed form.
//!
//! ```
//! use patcross::catalog::{fixture_4_3_12, verify_patterson};
//! use patcross::infomat::is_connected;
//!
//! let design = fixture_4_3_12();
//! let report = verify_patterson(&design);
//! assert!(report.all_pass());
//! assert_eq!(report.params.unwrap().lambda, 2);
//! assert!(is_connected(&design));
//! ```

pub mod catalog;
pub mod design;
pub mod infomat;
pub mod optimality;
pub mod ratmat;
pub mod symmetry;
