//! Output formats: CSV tables, SVG charts, graph drawings and the run
//! manifest. Everything here is deterministic for identical input.

mod layout;
mod manifest;
mod svg;
mod table;

pub use layout::{force_layout, render_graph_svg, LAYOUT_ITERATIONS};
pub use manifest::Manifest;
pub use svg::{emit_svg_plot, render_svg, Axis, Plot, Series, Style};
pub use table::{emit_csv, fmt_float, Table};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
