//! Partial Latin squares with prescribed row, column and symbol parameters.
//!
//! The crate decides whether a partial Latin square with given parameters
//! exists and, when it does, builds one:
//!
//! * [`square`]: the square type, validation, parameters, conjugates.
//! * [`matching`]: occupancy graphs and the matching merge used to lay
//!   symbols down one layer at a time.
//! * [`realization`]: cell sets with prescribed line counts.
//! * [`feasibility`]: exact existence criteria with witnesses.
//! * [`builder`]: the constructions.
//! * [`oracle`]: exhaustive search, used to check everything else.
//! * [`format`] and [`cli`]: the JSON documents and the `pls` command.
//!
//! ```
//! use pls::builder::build_theorem;
//!
//! let square = build_theorem(&[2, 1], &[2, 1], 3).unwrap();
//! let profile = square.parameters();
//! assert_eq!(profile.row_params, vec![2, 1]);
//! assert_eq!(profile.col_params, vec![2, 1]);
//! assert_eq!(profile.s(), 3);
//! ```

pub mod builder;
pub mod cli;
pub mod feasibility;
pub mod format;
pub mod matching;
pub mod oracle;
pub mod realization;
pub mod square;
pub mod sweep;

pub use square::{parameters_of, validate, CellSet, ParameterProfile, PartialLatinSquare, Triple};
