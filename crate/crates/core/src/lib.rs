//! Primitive central idempotents of rational group algebras of finite
//! abelian groups.
//!
//! The engine follows a composition chain of long generators and builds the
//! PCI-diagram level by level; every nontrivial idempotent it produces has the
//! factored form `K̂·(1 − e_z)`. An independent character-theoretic oracle
//! (Ramanujan sums over Galois orbits) and an element-order census are used
//! to certify the results.
//!
//! Module map:
//! - [`groupcore`]: abelian group specs, long generators, element arithmetic.
//! - [`exactalg`]: exact rational group-algebra arithmetic.
//! - [`cyclotome`]: cyclotomic fields, Galois action, Ramanujan sums.
//! - [`pcidiagram`]: the diagram engine and splitting-field idempotents.
//! - [`oracle`]: character oracle, order census, Wedderburn coefficients.
//! - [`shell`]: the command-line front end.

pub mod arith;
pub mod cyclotome;
pub mod error;
pub mod exactalg;
pub mod groupcore;
pub mod oracle;
pub mod pcidiagram;
pub mod shell;
pub mod verify;

pub use error::{Error, Result};
