//! Netlists, phase schedules, sweeps and the command-line front end for
//! [`slhkit`].

pub mod angle;
pub mod commands;
pub mod format;
pub mod netlist;
pub mod schedule;
pub mod sweep;
pub mod verify;
