//! File formats, reference oracles, acceptance batteries and the command
//! line front end for `weaklog-core`.

pub mod cli;
pub mod format;
pub mod oracle;
pub mod suite;
