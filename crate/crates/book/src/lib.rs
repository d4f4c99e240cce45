//! The guide under `book/src`, one module per chapter so that
//! `cargo test --doc` runs every snippet.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/rootdata.md")]
pub mod rootdata {}
#[doc = include_str!("../../../book/src/levels.md")]
pub mod levels {}
#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}
#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}
#[doc = include_str!("../../../book/src/convolution.md")]
pub mod convolution {}
#[doc = include_str!("../../../book/src/fle.md")]
pub mod fle {}
#[doc = include_str!("../../../book/src/torus.md")]
pub mod torus {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
