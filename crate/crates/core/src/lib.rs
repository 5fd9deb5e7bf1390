//! Factorization of model sets over finite product spaces.
//!
//! A *product space* is a finite list of named coordinates, each with a
//! finite domain; a *model set* is a subset of the product over some scope
//! of coordinates. The crate answers structural questions about such sets:
//!
//! - does a given partition of the scope *factorize* the set — is the set
//!   exactly the recombination of its block-wise projections?
//!   ([`is_factorization`])
//! - what is the *finest* partition that does? ([`finest_factorization`],
//!   cross-checkable against the brute-force [`oracle_finest`])
//! - how does a propositional theory split into variable-disjoint
//!   components with the same joint models? ([`split_theory`])
//! - what survives minimal-change revision by new information, and does
//!   revision respect the factorization structure? ([`revise`])
//! - is factorizability an artifact of the chosen coding — is there a
//!   bijective recoding under which the set splits?
//!   ([`exists_factorable_recoding`], [`Recoding`])
//!
//! Sets are represented as bit tables indexed by mixed-radix rank, so
//! membership is O(1) and enumeration follows a single canonical order:
//! assignments are listed by coordinate order, earlier coordinates most
//! significant, domain values in declaration order. Every textual format in
//! the crate (model-set tables, partitions, formulas, recoding definitions)
//! round-trips through that order, which keeps outputs deterministic and
//! diffable.
//!
//! ```
//! use semfact::{finest_factorization, parse_model_set};
//!
//! // p and q agree; r is free. The set splits as {p,q} | {r}.
//! let x = parse_model_set("p q r\n0 0 0\n0 0 1\n1 1 0\n1 1 1\n")?;
//! let finest = finest_factorization(&x)?;
//! assert_eq!(finest.to_text(x.space()), "p,q|r");
//! # Ok::<(), semfact::Error>(())
//! ```

mod assignment;
mod error;
mod factorize;
mod logic;
mod model_set;
mod partition;
mod recoding;
mod revision;
mod space;

pub use assignment::Assignment;
pub use error::{Error, ParseError, Result};
pub use factorize::{
    compose_join, cylinder_extend, factorization_bipartitions, finest_factorization,
    is_factorization, oracle_finest, oracle_finest_with_bound, FactorizationReport,
    DEFAULT_ORACLE_COORD_BOUND,
};
pub use logic::{
    dnf_of, models_of, models_over, parse_formula, split_theory, variables_of, Formula,
    SplitComponent, SplitResult, Theory, DEFAULT_VAR_BOUND,
};
pub use model_set::{parse_model_set, parse_model_set_in, ModelSet};
pub use partition::{meet_many, parse_partition, Partition};
pub use recoding::{
    exists_factorable_recoding, parse_recoding_file, Recoding, DEFAULT_PRODUCT_BOUND,
};
pub use revision::{hamming_distance, revise, revise_by_formula, RevisionOutcome};
pub use space::{CoordId, CoordSet, ProductSpace, ValueId, MAX_TABLE_BITS};
