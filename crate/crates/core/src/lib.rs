//! Very deep character-level convolutional networks for text, from scratch:
//! dense tensors, a reverse-mode autodiff tape, the temporal operator set
//! (convolution, batch norm, max / k-max pooling), configurable 9 to 49 layer
//! model assembly with optional residual shortcuts, and the SGD-with-momentum
//! update rule — all verifiable against central finite differences.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! instead of `std` there. File formats, dataset handling, and the CLI live
//! in the companion `vdcnn` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod gradcheck;
pub mod init;
pub mod model;
pub mod ops;
pub mod optim;
pub mod real;
pub mod tape;
pub mod tensor;
pub mod vocab;

pub use error::{Error, Result};
pub use gradcheck::{grad_check, grad_check_sampled, GradCheckReport};
pub use model::{depth_of, ArchSpec, Model, ParamCounts, PoolKind, Shortcut};
pub use real::Real;
pub use tape::{ParamId, Parameter, Parameters, Tape, Var};
pub use tensor::Tensor;
pub use vocab::Vocabulary;
