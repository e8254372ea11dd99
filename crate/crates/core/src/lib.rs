pub mod charsheaf_b4;
pub mod cli;
pub mod coxeter;
pub mod hecke;
pub mod laurent;
pub mod pieces;
