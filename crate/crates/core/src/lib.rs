//! Training neural-network interatomic potentials from scarce high-fidelity
//! labels by borrowing supervision from cheap empirical potentials.
//!
//! The crate provides two strategies on top of a plain MSE baseline:
//!
//! * **Label augmentation** (`weaklabel`): an auxiliary classifier picks, per
//!   unlabeled configuration, the empirical potential most likely to match the
//!   high-fidelity energy. Selected configurations enter training with their
//!   surrogate energies under a robust Tukey loss whose scale is re-estimated
//!   every batch, so surrogate outliers are rejected from the gradient.
//! * **Multi-task pretraining** (`pretrain`): a shared representation is
//!   pretrained to predict every empirical potential jointly, then fine-tuned
//!   on the scarce high-fidelity labels with a fresh prediction head.
//!
//! Supporting machinery: periodic configurations and neighbor lists (`atoms`),
//! a small zoo of closed-form potentials with analytic forces plus the
//! synthetic high-fidelity oracle (`eip`), invariant atom representations
//! (`repr`), an MLP/Adam core with exact reverse-mode gradients (`net`),
//! training objectives (`loss`), synthetic dataset generation (`datagen`), and
//! the experiment harness behind the `wsnip` CLI (`harness`).
//!
//! Data-parallel inner loops (per-configuration labeling, descriptor
//! computation, independent training runs) go through [`parallel`] and use
//! rayon when the default `parallel` feature is enabled; disabling it yields
//! a fully sequential build with identical results.

pub mod atoms;
pub mod datagen;
pub mod eip;
pub mod error;
pub mod harness;
pub mod loss;
pub mod model;
pub mod net;
pub mod parallel;
pub mod pretrain;
pub mod repr;
pub mod train;
pub mod weaklabel;

pub use error::{Error, Result};
