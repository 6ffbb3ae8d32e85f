pub mod algebra;
pub mod bell;
pub mod error;
pub mod graphs;
pub mod interacting;
pub mod kinematics;
pub mod offshell;
pub mod report;
pub mod suite;
pub mod trees;

pub use error::{Error, Result};
