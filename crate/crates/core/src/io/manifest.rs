use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// Plain-text record of a run: `key = value` lines in insertion order,
/// followed by the echoed configuration and the list of files written.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
    /// Configuration lines exactly as parsed.
    pub config: Vec<String>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new() -> Self {
        let mut m = Self::default();
        m.set("version", concat!("qsw ", env!("CARGO_PKG_VERSION")));
        m
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string();
        match self.entries.iter_mut().find(|e| e.0 == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.0 == key).map(|e| e.1.as_str())
    }

    pub fn render(&self) -> String {
        let mut o = String::new();
        for (k, v) in &self.entries {
            writeln!(o, "{k} = {v}").expect("writing to a String");
        }
        o.push_str("\n[config]\n");
        for line in &self.config {
            writeln!(o, "{line}").expect("writing to a String");
        }
        o.push_str("\n[outputs]\n");
        for f in &self.outputs {
            writeln!(o, "{f}").expect("writing to a String");
        }
        o
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        super::write_file(path, &self.render())
    }
}
