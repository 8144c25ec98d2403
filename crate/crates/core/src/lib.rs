//! Joint centrality of node sets and optimal leader selection for noisy
//! leader-follower tracking networks.
//!
//! Followers run Laplacian consensus on an undirected connected graph while a
//! small set of leaders also measures an external signal, either with a finite
//! gain `k` or noise-free (`k -> inf`). The steady-state variance about the
//! signal (total system error) is expressed through graph quantities:
//!
//! ```text
//! total error = (sigma^2 / 2) * n / rho_S
//! ```
//!
//! where `rho_S` is the joint centrality of the leader set. Every closed form
//! in this crate is paired with a dense linear-algebra oracle (trace of an
//! inverse) in [`spectral`], and with an Euler-Maruyama simulator in
//! [`simulator`].
//!
//! Node ids are 0-indexed everywhere.

pub mod centrality;
pub mod error;
pub mod graph;
pub mod joint;
pub mod selection;
pub mod simulator;
pub mod spectral;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, LeaderMode, LeaderSet};
pub use spectral::{ErrorReport, GraphKernels};
