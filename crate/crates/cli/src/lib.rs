//! File formats, renderers and command dispatch for the `sadic` tool.

pub mod cli;
pub mod document;
pub mod error;
pub mod render;

pub use cli::{run, Outcome};
pub use document::{
    load_document, load_pattern, load_system, save_pattern, save_system, System, SystemDocument,
};
pub use error::{CliError, Result};
pub use render::{render, render_ascii, render_ppm, Format, Palette};
