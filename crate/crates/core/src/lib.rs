//! Exact, bounded search for sum subsystems whose finite sums and finite
//! products stay inside a decidable set, with independently checkable
//! certificates; finite IP / IP* experiments; and the ideal theory of finite
//! semigroups.
//!
//! ```
//! use ipstar::{parse_spec, search_subsystem, SearchBudget, Sequence};
//!
//! let x = Sequence::naturals(32).unwrap();
//! let a = parse_spec("mod(6,0)").unwrap();
//! let out = search_subsystem(&x, &a, SearchBudget::new(2, 32, 4, 10_000)).unwrap();
//! let cert = out.certificate().unwrap();
//! assert_eq!(cert.blocks.to_indices(), vec![vec![1, 2, 3], vec![6]]);
//! ```

pub mod certificate;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod fsfp;
pub mod partition;
pub mod search;
pub mod semigroup;
pub mod setspec;

pub use certificate::{verify_document, DocKind, Document};
pub use dsl::parse_spec;
pub use error::{Error, Result};
pub use fsfp::{
    finite_products, finite_sums, state_of, subsystem_sums, Block, BlockSystem, FsFpState, Sequence,
};
pub use partition::{
    find_fs_witness, hindman_finite, hindman_threshold, ip_star_refute, scale_witness, Coloring,
    FsWitness,
};
pub use search::{
    brute_force_subsystem, run_search, search_subsystem, stage_constraint, verify_certificate,
    Certificate, Execution, SearchBudget, SearchOutcome, SearchRun,
};
pub use semigroup::{
    group_check, ideal_structure, idempotent_order, idempotents, parse_table,
    product_formula_check, validate_table, FiniteSemigroup, IdealStructure, IdempotentOrder,
};
pub use setspec::SetSpec;
