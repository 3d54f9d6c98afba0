pub mod catalog;
pub mod cohomology;
pub mod format;
pub mod james;
pub mod linalg;
pub mod obstruction;
pub mod simplicial;
