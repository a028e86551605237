pub mod charnum;
pub mod equivariant;
pub mod error;
pub mod graded_chow;
pub mod moves;
pub mod poly;
pub mod report;
pub mod scalars;
pub mod suite;
pub mod symbol_chain;
pub mod towers;
