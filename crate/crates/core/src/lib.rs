//! Linear algebra over `Z/m`, finitely presented modules, simplicial objects,
//! and comonadic resolutions, with a workbench for comparing homology methods.

pub mod comonad;
pub mod comparison;
pub mod error;
pub mod fpmod;
pub mod simplicial;
pub mod guard;
pub mod zmod;

pub use error::Error;
pub use guard::Guards;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
