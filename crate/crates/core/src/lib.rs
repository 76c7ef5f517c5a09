#![no_std]
extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod graph;
pub mod html;
pub mod labeling;
pub mod langid;
pub mod linalg;
pub mod powerlaw;
pub mod text;
pub mod topics;
