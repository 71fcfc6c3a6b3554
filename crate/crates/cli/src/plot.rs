//! Two-column plot data: a `# x value` header, then one `x value` line per
//! sample.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    /// File stem; the file is `<name>.dat`.
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl PlotSeries {
    pub fn new(name: &str, points: Vec<(f64, f64)>) -> Self {
        PlotSeries { name: name.to_owned(), points }
    }

    pub fn render(&self) -> String {
        let mut s = String::from("# x value\n");
        for (x, v) in &self.points {
            s.push_str(&format!("{x:.16e} {v:.16e}\n"));
        }
        s
    }
}

/// Writes every series into `dir`, creating it if needed. Returns the paths
/// written, in input order.
pub fn emit_plot_data(series: &[PlotSeries], dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(series.len());
    for s in series {
        let path = dir.join(format!("{}.dat", s.name));
        let mut file = io::BufWriter::new(fs::File::create(&path)?);
        file.write_all(s.render().as_bytes())?;
        file.flush()?;
        written.push(path);
    }
    Ok(written)
}
