//! Prompt sampling for generation benchmarks and ligand-contact pocket
//! consensus over multiple structures of one protein sequence.

pub mod pockets;
pub mod prompts;

#[derive(Debug, thiserror::Error)]
pub enum DatagenError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("rule set admits no further prompt in this shard")]
    Exhausted,
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("structure {structure}: {message}")]
    Structure { structure: String, message: String },
    #[error("structure {structure} has no coordinates for residue {residue}")]
    MissingResidueCoordinates { structure: String, residue: String },
    #[error("geometry: {0}")]
    Geometry(String),
}
