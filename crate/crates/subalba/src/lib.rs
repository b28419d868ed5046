//! Front end for subalba-core: corpus generators, file formats and the CLI.

pub mod cli;
pub mod dto;
pub mod gen;
