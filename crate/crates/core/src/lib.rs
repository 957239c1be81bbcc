pub mod algebra;
pub mod cli;
pub mod deformation;
pub mod field;
pub mod pipeline;
pub mod reeb;
mod union_find;

pub use union_find::UnionFind;
