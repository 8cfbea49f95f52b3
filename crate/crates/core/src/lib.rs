//! Meme-and-Variations: agents on a toroidal grid invent, imitate and
//! mentally simulate six-locus action ideas.

pub mod error;
pub mod fitness;
pub mod harness;
pub mod idea;
pub mod network;
pub mod rng;
pub mod society;
pub mod variation;

pub use error::{MavError, Result};
pub use fitness::{fitness, optimal_set, FitnessBackend, FitnessParams, FitnessValue};
pub use idea::{Allele, AlleleVector, BodyPart, IdeaPattern};
pub use society::{run, MemoryBackend, MetricsRecord, Society, SocietyConfig};
