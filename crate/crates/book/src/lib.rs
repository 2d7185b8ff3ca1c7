//! Guide chapters, compiled so that `cargo test` runs their listings.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/sources.md")]
pub mod sources {}
#[doc = include_str!("../../../book/src/region.md")]
pub mod region {}
#[doc = include_str!("../../../book/src/corollaries.md")]
pub mod corollaries {}
#[doc = include_str!("../../../book/src/codec.md")]
pub mod codec {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
