//! Command-line front end. The binary `toric` exits with 0 on success, 1
//! when a verification fails and 2 on any input error, printing a single
//! diagnostic line `error[CODE]: message`.

pub mod commands;
pub mod io;
pub mod render;

pub use commands::{error_code, run, Cli, CliError, Command};
pub use render::{render_svg, RenderError, RenderOptions};
