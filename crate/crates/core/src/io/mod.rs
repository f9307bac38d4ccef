//! Dataset files, synthetic workloads and index archives.

mod archive;
mod attributes;
mod synth;
mod vecs;

pub use archive::{decode_index, encode_index, load_index, save_index, IndexArchive, ARCHIVE_MAGIC, ARCHIVE_VERSION};
pub use attributes::{read_attributes, read_attributes_from, write_attributes, AttributeColumn, AttributeSchema};
pub use synth::{generate_attributes, generate_query_attributes, generate_vectors, VectorDistribution};
pub use vecs::{
    flatten, parse_fvecs, parse_ivecs, read_fvecs, read_ground_truth, read_ivecs, write_fvecs, write_ground_truth, write_ivecs,
};
