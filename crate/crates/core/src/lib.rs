//! Entanglement of bipartite anyonic pure states.
//!
//! The crate covers the whole pipeline from fusion rules to operational
//! entanglement rates:
//!
//! - [`model`]: anyon models, duals, quantum dimensions, primitivity;
//! - [`fusion`]: fusion-space dimensions, fusion trees, the `q_c` sector DP;
//! - [`state`]: total-charge-vacuum bipartite states stored by sector spectra;
//! - [`entanglement`]: single-copy entropy, asymptotic entanglement entropy,
//!   exact `N`-copy entropy and maximally entangled states;
//! - [`protocols`]: typical sets, type classes and desk-scale simulations of
//!   distillation and dilution;
//! - [`purification`]: states with non-vacuum total charge and their
//!   purification by a reference anti-charge.
//!
//! All logarithms are base 2.
//!
//! ```
//! use anyon_core::{catalog, entanglement, state::BipartiteState};
//!
//! let fib = catalog::fibonacci();
//! let tau = fib.charge("tau").unwrap();
//! let pair = BipartiteState::pure_sector(fib.into(), tau);
//! let phi = (1.0 + 5f64.sqrt()) / 2.0;
//! assert!((entanglement::aee(&pair) - phi.log2()).abs() < 1e-12);
//! ```

pub mod catalog;
pub mod config;
pub mod entanglement;
pub mod error;
pub mod fusion;
pub mod io;
pub mod model;
pub mod numeric;
pub mod protocols;
pub mod purification;
pub mod state;

pub use config::Limits;
pub use error::{Axiom, Error, Result};
pub use fusion::{Chain, FusionTree};
pub use model::{AnyonModel, Charge, ModelDescription};
pub use state::{BipartiteState, Side};
