//! Signal-aligned network coding (SNC) for K-user time-varying interference
//! channels whose receivers reach a central processor over limited links.
//!
//! * [`gf`] exact GF(q) linear algebra for the network-coded equations.
//! * [`channel`] extended channels, noise and MIMO virtual nodes.
//! * [`snc`] precoders, alignment, filters, the effective system, recovery.
//! * [`phy`] BPSK, transmission, PNC demodulation and rate accounting.
//! * [`cf`] the compute-and-forward baseline.
//! * [`harness`] seeded SNR sweeps, CLI parsing and CSV/JSON output.

pub mod cf;
pub mod channel;
pub mod gf;
pub mod harness;
pub mod linalg;
pub mod phy;
pub mod snc;
