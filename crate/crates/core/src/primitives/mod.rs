pub mod checksum;
pub mod gf;
pub mod inner_product;
pub mod syndrome;
pub mod universe_hash;

pub use checksum::{checksum, checksum_block, checksum_with, row_digest, row_digest_block};
pub use inner_product::{inner_product_test, keyed_test_row, test_bits, HashSpec};
pub use syndrome::SyndromeCodec;
pub use universe_hash::{pairwise_universe_hash, PairwiseHash};
