//! Coupled fixed points on metric spaces valued in matrix C*-algebras.

pub mod algebra;
pub mod cli;
pub mod fredholm;
pub mod metric;
pub mod solver;
