//! Doctests for the guide. Every Rust block in `book/src` compiles and runs
//! under `cargo test`.

#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/intro.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/modules.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/ilp.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/selection.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/colouring.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/routing.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/widths.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/checking.md"));
#[cfg(doctest)]
doc_comment::doc_comment!(include_str!("../../../book/src/cli.md"));
