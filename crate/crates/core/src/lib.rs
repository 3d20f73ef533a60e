pub mod cli;
pub mod dm;
pub mod gaussian;
pub mod geometry;
pub mod info;
pub mod sim;
