//! The guide in `book/` as doc-tests. Each chapter becomes an empty module
//! whose docs are the chapter, so `cargo test --doc` runs every listing.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/young-indices.md")]
pub mod young_indices {}
#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}
#[doc = include_str!("../../../book/src/symmetric-functions.md")]
pub mod symmetric_functions {}
#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}
#[doc = include_str!("../../../book/src/projectors.md")]
pub mod projectors {}
#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}
#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
