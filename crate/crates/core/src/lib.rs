//! Core library for a continual-learning laboratory: dense numerics with a
//! deterministic seeded random stream, a feed-forward classifier with manual
//! backpropagation, Adam plus distributional regularizers, continual task
//! streams, and curvature/plasticity diagnostics.
//!
//! Everything in this crate is pure computation over heap memory: no IO, no
//! clocks, no global state. The companion CLI crate carries file formats,
//! config parsing, and the experiment runner.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod diagnostics;
pub mod network;
pub mod numerics;
pub mod optim;
pub mod tasks;
