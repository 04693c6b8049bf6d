//! Recursive Bayesian filtering for single-object tracking.
//!
//! The tracked state is the relative displacement of the target center
//! between consecutive frames. A Brownian-motion prior over displacements
//! (Gaussian or Laplace kernel) is fused with a likelihood obtained from a
//! pluggable [`observation::Scorer`] through a distance-weighted softmax, and
//! the maximum a-posteriori candidate becomes the next box.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the evaluation driver live in the companion `dbf` crate.
//!
//! ```
//! use dbf_core::geometry::{BoundingBox, Displacement};
//! use dbf_core::system_model::SystemModelParams;
//!
//! let prev = BoundingBox::new(0.0, 0.0, 10.0, 10.0).unwrap();
//! let cur = prev.apply_displacement(Displacement::new(0.5, 0.0));
//! assert_eq!(prev.displacement_prev_norm(&cur), Displacement::new(0.5, 0.0));
//!
//! let params = SystemModelParams::default();
//! assert!(params.prior_density(Displacement::ZERO) > params.prior_density(Displacement::new(0.5, 0.0)));
//! ```
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod filter;
pub mod geometry;
pub mod metrics;
pub mod motion_fit;
pub mod observation;
pub mod simulator;
pub mod system_model;

pub use filter::{DiscreteBelief, FilterConfig, TrackState};
pub use geometry::{BoundingBox, Center, Displacement};
pub use observation::{Frame, ResponseScore, Scorer};
pub use system_model::{MotionFamily, SystemModelParams};
