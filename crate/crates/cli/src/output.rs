use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use anyhow::{Context, Result};
use propagators::PhysParams;

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV document: `#` comment header, column row, data rows, `#` trailer.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    columns: String,
    rows: Vec<String>,
    trailer: Vec<String>,
}

impl Table {
    pub fn new(command: &str, params: Option<&PhysParams>, columns: &[&str]) -> Self {
        let mut header = vec![format!("propagators {command}")];
        if let Some(p) = params {
            header.push(format!(
                "hbar = {}, mass = {}, omega = {}, n = {}, lambda = {}",
                num(p.hbar()),
                num(p.mass()),
                num(p.omega()),
                num(p.n()),
                num(p.lambda())
            ));
        }
        Table {
            header,
            columns: columns.join(","),
            ..Default::default()
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.header.push(line.into());
    }

    /// A `#` line among the data rows.
    pub fn comment(&mut self, line: impl AsRef<str>) {
        self.rows.push(format!("# {}", line.as_ref()));
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut line = String::new();
        for (j, f) in fields.into_iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(f.as_ref());
        }
        self.rows.push(line);
    }

    pub fn summary(&mut self, line: impl Into<String>) {
        self.trailer.push(line.into());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "# {h}");
        }
        let _ = writeln!(out, "{}", self.columns);
        for r in &self.rows {
            let _ = writeln!(out, "{r}");
        }
        for t in &self.trailer {
            let _ = writeln!(out, "# {t}");
        }
        out
    }

    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        let text = self.render();
        match path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}
