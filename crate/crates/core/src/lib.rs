//! Shor's algorithm for discrete logarithms in prime fields: circuit
//! construction, exact simulation and resource estimation.

pub mod arith;
pub mod circuit;
pub mod estimate;
pub mod numtheory;
pub mod rng;
pub mod shor;
pub mod sim;
pub mod timing;

pub use arith::AdderKind;
pub use circuit::{Circuit, CircuitMetrics, Gate, Op};
pub use numtheory::DlpInstance;
pub use shor::{RegisterLayout, Variant};
pub use sim::StateVector;
