pub mod fc;
pub mod formula;
pub mod matrix;
pub mod nd;
pub mod relational;
pub mod tables;
