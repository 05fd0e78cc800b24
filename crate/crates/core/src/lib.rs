//! Molecular-generation benchmark core: SMILES chemistry, classical
//! descriptors, circular fingerprints, reward scoring and rollout metrics.

pub mod chem;
pub mod descriptors;
pub mod metrics;
pub mod scoring;
pub mod simfp;
