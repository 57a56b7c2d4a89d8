pub mod sample;
pub mod scan;
pub mod validate;
