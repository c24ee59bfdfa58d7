//! Exact spectral data for sheaves on elliptic surfaces.
//!
//! The crate works on an elliptic K3 surface with section or a product of
//! two elliptic curves, always through the rank-2 lattice spanned by the
//! section and fibre classes:
//!
//! - [`lattice`]: intersection form, genus, linear systems, suitable
//!   polarisations;
//! - [`chern_fm`]: Chern characters, the relative Fourier-Mukai action on
//!   them and the generator check of the duality square on a torus;
//! - [`elliptic_fibre`]: elliptic curves over `F_p` and fibrewise
//!   cohomology of degree-0 bundles;
//! - [`spectral`]: spectral divisors and the spectral-data constructor;
//! - [`simpson`]: Simpson stability of the resulting torsion sheaves;
//! - [`moduli`]: dimensions of the spectral fibration;
//! - [`cli`] and [`verify`]: the JSON front-end and the self-check suite.

pub mod chern_fm;
pub mod cli;
pub mod elliptic_fibre;
pub mod error;
pub mod lattice;
pub mod moduli;
pub mod oracle;
pub mod simpson;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, SurfaceKind, SurfaceModel};
