//! Positivity sets of planar hinge functions, decided and constructed exactly.

pub mod exact;
pub mod hinge;
pub mod cone;
pub mod planar;
pub mod synth;
