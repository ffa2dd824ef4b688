//! Signal-aligned network coding: precoders that align every interfering
//! stream onto a direction of transmitter 1's signal space, zero-forcing
//! receive filters, the resulting binary network-coding matrix and its
//! inversion at the central processor.

mod plan;
mod precode;
mod receive;
mod recover;

use num_complex::Complex64;
use thiserror::Error;

use crate::gf::GfError;

pub use plan::{binomial, theoretical_dof, DofTuple, ExtensionPlan, MAX_EXTENSION_LEN};
pub use precode::{
    build_precoders, check_precoder_ranks, cross_gain, precoder_ranks, verify_alignment,
    AlignmentCheck, PrecoderSet, RankReport, ALIGNMENT_REL_TOL, RANK_REL_TOL,
};
pub use receive::{
    build_effective_system, build_filters, EffectiveSystem, FilterSet, StreamRef, BINARY_TOL,
    MAX_CONDITION,
};
pub use recover::{cp_recover, Recovery};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SncError {
    #[error("invalid extension plan: {0}")]
    Plan(String),
    #[error("extension too large: {0}")]
    Capacity(String),
    #[error("degenerate channel at receiver {receiver}")]
    DegenerateChannel { receiver: usize },
    #[error("precoder of transmitter {transmitter} has rank {rank}, expected {expected}")]
    AlignmentDegenerate {
        transmitter: usize,
        rank: usize,
        expected: usize,
    },
    #[error("H V_1 at receiver {receiver} is ill-conditioned (cond {condition:.3e})")]
    IllConditioned { receiver: usize, condition: f64 },
    #[error("effective matrix entry ({row}, {col}) = {value} is not binary")]
    AlignmentViolation {
        row: usize,
        col: usize,
        value: Complex64,
    },
    #[error("no field size makes F full rank: {0}")]
    FieldSearch(GfError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("maximum transmit power must be positive and finite, got {0}")]
    InvalidPower(f64),
}
