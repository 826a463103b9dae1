//! Output directory, manifest and the CSV layouts shared by commands.

use std::path::PathBuf;

use qsw_core::experiments::EfficiencyCurve;
use qsw_core::io::{emit_csv, emit_svg_plot, fmt_float, Manifest, Plot, Table};
use qsw_core::{Error, Result};

use crate::config::RunConfig;

pub struct Output {
    dir: PathBuf,
    pub manifest: Manifest,
    prefix: String,
}

impl Output {
    pub fn new(cfg: &RunConfig, prefix: &str, threads: usize, threads_from_env: bool) -> Result<Self> {
        let dir = cfg.cli.out.clone();
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
            path: dir.clone(),
            source: e,
        })?;
        let mut manifest = Manifest::new();
        manifest.set("command", format!("{:?}", cfg.cli.command).to_lowercase());
        manifest.set("master_seed", cfg.cli.seed);
        manifest.set(
            "threads",
            if threads_from_env {
                format!("{threads} (THREADS)")
            } else {
                threads.to_string()
            },
        );
        manifest.config = cfg.echo.clone();
        Ok(Self {
            dir,
            manifest,
            prefix: prefix.to_string(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let file = format!("{}{name}", self.prefix);
        self.manifest.outputs.push(file.clone());
        self.dir.join(file)
    }

    pub fn csv(&mut self, name: &str, table: &Table) -> Result<()> {
        let path = self.path(name);
        emit_csv(table, &path)
    }

    pub fn svg(&mut self, name: &str, plot: &Plot) -> Result<()> {
        let path = self.path(name);
        emit_svg_plot(plot, &path)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.path(name);
        std::fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        let path = self.dir.join(format!("{}manifest.txt", self.prefix));
        self.manifest.outputs.sort();
        self.manifest.write(&path)?;
        Ok(path)
    }
}

pub fn f(x: f64) -> String {
    fmt_float(x)
}

/// Means, one row per point, with leading label columns.
pub fn curve_means(labels: &[&str], rows: &[(Vec<String>, &EfficiencyCurve)]) -> Result<Table> {
    let x = rows.first().map_or("p", |r| r.1.abscissa.label());
    let mut header: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    header.extend([x.to_string(), "mean_efficiency".into(), "realizations".into(), "t_bar".into()]);
    let mut t = Table::new(header);
    for (lead, curve) in rows {
        for pt in &curve.points {
            let mut row = lead.clone();
            row.extend([f(pt.x), f(pt.mean), pt.per_seed.len().to_string(), f(curve.provenance.t_bar)]);
            t.push(row)?;
        }
    }
    Ok(t)
}

/// Every realization on its own row; the mean of `efficiency` over a point
/// reproduces `mean_efficiency` exactly.
pub fn curve_per_seed(labels: &[&str], rows: &[(Vec<String>, &EfficiencyCurve)]) -> Result<Table> {
    let x = rows.first().map_or("p", |r| r.1.abscissa.label());
    let mut header: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    header.extend([x.to_string(), "seed".into(), "efficiency".into()]);
    let mut t = Table::new(header);
    for (lead, curve) in rows {
        for pt in &curve.points {
            for (seed, e) in curve.provenance.seeds.iter().zip(&pt.per_seed) {
                let mut row = lead.clone();
                row.extend([f(pt.x), seed.to_string(), f(*e)]);
                t.push(row)?;
            }
        }
    }
    Ok(t)
}
