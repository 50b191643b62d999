pub mod cli;
pub mod compare;
pub mod error;
pub mod hydro;
pub mod messep;
pub mod partitions;
pub mod symmetric;
pub mod simulator;
pub mod udbm;
pub mod verify;
