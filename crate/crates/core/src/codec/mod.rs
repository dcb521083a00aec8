//! The sparse vector code chain: mapping, spreading, channel and detection.

mod channel;
mod mapping;
pub mod mmp;

pub use channel::{apply_channel, complex_gaussian, spread, ChannelKind, ChannelRealization};
pub use mapping::{
    min_length, sparse_demap, sparse_map, support_rank, support_unrank, SparseCodeParams,
    SupportSet,
};
pub use mmp::{mmp_decode, mmp_detect, Detection, Dictionary};
