//! Tabular output in three flavours: an aligned plain-text table, comma
//! delimited text, and a markdown table.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// Aligned, human-readable columns.
    #[default]
    Table,
    /// Comma-delimited text with a header line.
    Csv,
    Markdown,
}

/// `--decimals 6` sets every numeric column, `--decimals deviation=6` one
/// column. Later flags win.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecimalsFlag {
    All(usize),
    Column(String, usize),
}

impl FromStr for DecimalsFlag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |n: &str| {
            n.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid decimal count {n:?}"))
        };
        match s.split_once('=') {
            Some((col, n)) if !col.trim().is_empty() => {
                Ok(Self::Column(col.trim().to_string(), parse(n)?))
            }
            Some(_) => Err(format!("missing column name in {s:?}")),
            None => Ok(Self::All(parse(s)?)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Decimals {
    all: Option<usize>,
    per_column: BTreeMap<String, usize>,
}

impl Decimals {
    pub fn from_flags(flags: &[DecimalsFlag]) -> Self {
        let mut out = Self::default();
        for flag in flags {
            match flag {
                DecimalsFlag::All(n) => {
                    out.all = Some(*n);
                    out.per_column.clear();
                }
                DecimalsFlag::Column(c, n) => {
                    out.per_column.insert(c.clone(), *n);
                }
            }
        }
        out
    }

    fn resolve(&self, column: &str, default: Option<usize>) -> Option<usize> {
        self.per_column
            .get(column)
            .copied()
            .or(self.all)
            .or(default)
    }

    pub fn unknown_columns<'a>(&'a self, headers: &'a [Header]) -> impl Iterator<Item = &'a str> {
        self.per_column
            .keys()
            .map(String::as_str)
            .filter(|k| !headers.iter().any(|h| h.name == *k))
    }
}

#[derive(Debug, Clone, Default)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` writes to standard output.
    pub destination: Option<PathBuf>,
    pub decimals: Decimals,
}

impl OutputSpec {
    /// Writes `body` to the destination file, or to `stdout` when none is set.
    pub fn emit(&self, body: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.destination {
            Some(path) => {
                fs::write(path, body).with_context(|| format!("writing {}", path.display()))
            }
            None => stdout
                .write_all(body.as_bytes())
                .context("writing to standard output"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    /// Rendered with the column's decimal count, or shortest round-trip
    /// form when none applies.
    Number(f64),
    Blank,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Blank, Cell::Number)
    }
}

#[derive(Debug, Clone)]
pub struct Header {
    pub name: String,
    pub default_decimals: Option<usize>,
    pub numeric: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<Header>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text_column(mut self, name: &str) -> Self {
        self.headers.push(Header {
            name: name.to_string(),
            default_decimals: None,
            numeric: false,
        });
        self
    }

    pub fn number_column(mut self, name: &str, default_decimals: Option<usize>) -> Self {
        self.headers.push(Header {
            name: name.to_string(),
            default_decimals,
            numeric: true,
        });
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn rendered_cells(&self, decimals: &Decimals) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.headers)
                    .map(|(cell, h)| match cell {
                        Cell::Text(s) => s.clone(),
                        Cell::Blank => String::new(),
                        Cell::Number(x) => match decimals.resolve(&h.name, h.default_decimals) {
                            Some(d) => format!("{x:.d$}"),
                            None => format!("{x}"),
                        },
                    })
                    .collect()
            })
            .collect()
    }

    pub fn render(&self, format: Format, decimals: &Decimals) -> Result<String> {
        if let Some(col) = decimals.unknown_columns(&self.headers).next() {
            bail!("--decimals names unknown column {col:?}");
        }
        let cells = self.rendered_cells(decimals);
        let names: Vec<&str> = self.headers.iter().map(|h| h.name.as_str()).collect();
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&names.join(","));
                out.push('\n');
                for row in &cells {
                    out.push_str(
                        &row.iter()
                            .map(|c| csv_field(c))
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                    out.push('\n');
                }
            }
            Format::Markdown => {
                out.push_str(&format!("| {} |\n", names.join(" | ")));
                let rule: Vec<&str> = self
                    .headers
                    .iter()
                    .map(|h| if h.numeric { "---:" } else { "---" })
                    .collect();
                out.push_str(&format!("| {} |\n", rule.join(" | ")));
                for row in &cells {
                    let escaped: Vec<String> = row.iter().map(|c| c.replace('|', "\\|")).collect();
                    out.push_str(&format!("| {} |\n", escaped.join(" | ")));
                }
            }
            Format::Table => {
                let widths: Vec<usize> = (0..names.len())
                    .map(|i| {
                        cells
                            .iter()
                            .map(|r| r[i].chars().count())
                            .chain([names[i].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |fields: &[&str]| {
                    let padded: Vec<String> = fields
                        .iter()
                        .zip(&widths)
                        .zip(&self.headers)
                        .map(|((f, &w), h)| {
                            if h.numeric {
                                format!("{f:>w$}")
                            } else {
                                format!("{f:<w$}")
                            }
                        })
                        .collect();
                    format!("{}\n", padded.join("  ").trim_end())
                };
                out.push_str(&line(&names));
                let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                out.push_str(&line(&rule.iter().map(String::as_str).collect::<Vec<_>>()));
                for row in &cells {
                    out.push_str(&line(&row.iter().map(String::as_str).collect::<Vec<_>>()));
                }
            }
        }
        Ok(out)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
