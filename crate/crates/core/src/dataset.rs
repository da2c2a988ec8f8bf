//! The ten-country parameter and equilibrium table.
//!
//! One line per country, one column per table row, comma separated, empty
//! field for a blank cell. Numbers are kept with the number of decimals they
//! were printed with so that comparisons can be made at printed precision.

use alloc::{
    borrow::ToOwned,
    format,
    string::{String, ToString},
    vec::Vec,
};
use core::fmt;

use crate::error::{Error, Result};
use crate::model::GoodwinParameters;

/// The bundled table, byte for byte.
pub const BUNDLED_TABLE: &str = include_str!("../data/table1.csv");

pub const COUNTRY_NAMES: [&str; 10] = [
    "Australia",
    "Canada",
    "Finland",
    "France",
    "Germany",
    "Greece",
    "Italy",
    "Norway",
    "UK",
    "US",
];

pub const HEADER: [&str; 17] = [
    "country",
    "alpha",
    "beta",
    "sigma",
    "gamma_harvie",
    "gamma_correct",
    "rho_harvie",
    "rho_correct",
    "u_star_harvie",
    "u_star_correct",
    "u_bar",
    "v_star_harvie",
    "v_star_correct",
    "v_bar",
    "t_harvie",
    "t_correct",
    "harvie_discrepancy",
];

/// A number together with the count of decimals it was printed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Printed {
    pub value: f64,
    pub decimals: u8,
}

impl Printed {
    pub const fn new(value: f64, decimals: u8) -> Self {
        Self { value, decimals }
    }

    /// Parses a plain decimal literal and insists that it prints back
    /// to the same text.
    pub fn parse(text: &str) -> Option<Self> {
        let digits = text.strip_prefix('-').unwrap_or(text);
        let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
        if int.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        if digits.contains('.') && frac.is_empty() {
            return None;
        }
        let value: f64 = text.parse().ok()?;
        let printed = Self {
            value,
            decimals: u8::try_from(frac.len()).ok()?,
        };
        (printed.to_string() == text).then_some(printed)
    }

    /// True when `x` rounds to this cell at its printed precision.
    pub fn matches(&self, x: f64) -> bool {
        format!("{:.*}", self.decimals as usize, x) == self.to_string()
    }
}

impl fmt::Display for Printed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.*}", self.decimals as usize, self.value)
    }
}

/// Which long-run coefficient was reported inconsistently with the
/// factor-of-100 relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discrepancy {
    Gamma,
    Rho,
}

impl Discrepancy {
    fn parse(text: &str) -> Option<Option<Self>> {
        match text {
            "" => Some(None),
            "gamma" => Some(Some(Self::Gamma)),
            "rho" => Some(Some(Self::Rho)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryRecord {
    pub name: String,
    pub alpha: Printed,
    pub beta: Printed,
    pub sigma: Printed,
    /// Reported long-run coefficients, percent scale.
    pub gamma_harvie: Printed,
    pub gamma_correct: Printed,
    pub rho_harvie: Printed,
    pub rho_correct: Printed,
    pub u_star_harvie: Option<Printed>,
    pub u_star_correct: Option<Printed>,
    pub u_bar: Printed,
    pub v_star_harvie: Option<Printed>,
    pub v_star_correct: Option<Printed>,
    pub v_bar: Printed,
    pub t_harvie: Option<Printed>,
    pub t_correct: Option<Printed>,
    pub harvie_discrepancy: Option<Discrepancy>,
}

impl CountryRecord {
    pub fn params_correct(&self) -> GoodwinParameters {
        GoodwinParameters::new(
            self.alpha.value,
            self.beta.value,
            self.sigma.value,
            self.gamma_correct.value,
            self.rho_correct.value,
        )
    }

    /// Parameters with the coefficients exactly as reported in percent units.
    pub fn params_harvie(&self) -> GoodwinParameters {
        self.params_correct()
            .with_phillips(self.gamma_harvie.value, self.rho_harvie.value)
    }

    /// Percent-scale coefficients with the recomputed values of
    /// [`HARVIE_RECOMPUTATIONS`] substituted, so that the only difference
    /// from [`Self::params_correct`] is the factor of 100.
    pub fn params_harvie_recomputed(&self) -> GoodwinParameters {
        let mut p = self.params_harvie();
        for rc in HARVIE_RECOMPUTATIONS
            .iter()
            .filter(|rc| rc.country == self.name)
        {
            match rc.coefficient {
                Discrepancy::Gamma => p.gamma = rc.recomputed,
                Discrepancy::Rho => p.rho = rc.recomputed,
            }
        }
        p
    }
}

/// A long-run coefficient recomputed from the original ARDL estimates that
/// differs from what was printed. These come from the published correction
/// and cannot be rederived without the original coefficient table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recomputation {
    pub country: &'static str,
    pub coefficient: Discrepancy,
    pub printed: f64,
    pub recomputed: f64,
}

pub const HARVIE_RECOMPUTATIONS: [Recomputation; 2] = [
    Recomputation {
        country: "Germany",
        coefficient: Discrepancy::Rho,
        printed: 65.55,
        recomputed: 92.44,
    },
    Recomputation {
        country: "US",
        coefficient: Discrepancy::Gamma,
        printed: 8.42,
        recomputed: -8.42,
    },
];

fn cell_error(row: &str, column: &str, reason: impl Into<String>) -> Error {
    Error::Dataset {
        row: row.to_owned(),
        column: column.to_owned(),
        reason: reason.into(),
    }
}

struct RowReader<'a> {
    row: &'a str,
    fields: Vec<&'a str>,
}

impl<'a> RowReader<'a> {
    fn field(&self, column: usize) -> &'a str {
        self.fields[column]
    }

    fn optional(&self, column: usize) -> Result<Option<Printed>> {
        let text = self.field(column);
        if text.is_empty() {
            return Ok(None);
        }
        Printed::parse(text).map(Some).ok_or_else(|| {
            cell_error(
                self.row,
                HEADER[column],
                format!("malformed number {text:?}"),
            )
        })
    }

    fn required(&self, column: usize) -> Result<Printed> {
        self.optional(column)?
            .ok_or_else(|| cell_error(self.row, HEADER[column], "missing value"))
    }
}

fn parse_row(line_no: usize, line: &str) -> Result<CountryRecord> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    let row = match fields.first() {
        Some(name) if !name.is_empty() => *name,
        _ => {
            return Err(cell_error(
                &format!("line {line_no}"),
                "country",
                "missing country name",
            ))
        }
    };
    if !COUNTRY_NAMES.contains(&row) {
        return Err(cell_error(row, "country", "unknown country"));
    }
    if fields.len() != HEADER.len() {
        return Err(cell_error(
            row,
            "*",
            format!("expected {} fields, found {}", HEADER.len(), fields.len()),
        ));
    }
    let r = RowReader { row, fields };
    let discrepancy = Discrepancy::parse(r.field(16)).ok_or_else(|| {
        cell_error(
            row,
            HEADER[16],
            format!("expected gamma, rho or empty, found {:?}", r.field(16)),
        )
    })?;
    let record = CountryRecord {
        name: row.to_string(),
        alpha: r.required(1)?,
        beta: r.required(2)?,
        sigma: r.required(3)?,
        gamma_harvie: r.required(4)?,
        gamma_correct: r.required(5)?,
        rho_harvie: r.required(6)?,
        rho_correct: r.required(7)?,
        u_star_harvie: r.optional(8)?,
        u_star_correct: r.optional(9)?,
        u_bar: r.required(10)?,
        v_star_harvie: r.optional(11)?,
        v_star_correct: r.optional(12)?,
        v_bar: r.required(13)?,
        t_harvie: r.optional(14)?,
        t_correct: r.optional(15)?,
        harvie_discrepancy: discrepancy,
    };
    validate(&record)?;
    Ok(record)
}

fn validate(rec: &CountryRecord) -> Result<()> {
    let row = rec.name.as_str();
    if !(rec.sigma.value > 0.0) {
        return Err(cell_error(
            row,
            "sigma",
            "capital-output ratio must be positive",
        ));
    }
    for (column, cell) in [("u_bar", rec.u_bar), ("v_bar", rec.v_bar)] {
        if !(cell.value > 0.0 && cell.value < 1.0) {
            return Err(cell_error(
                row,
                column,
                format!("{cell} is not a fraction in (0, 1)"),
            ));
        }
    }
    let pairs = [
        (
            Discrepancy::Gamma,
            "gamma_harvie",
            rec.gamma_harvie,
            rec.gamma_correct,
        ),
        (
            Discrepancy::Rho,
            "rho_harvie",
            rec.rho_harvie,
            rec.rho_correct,
        ),
    ];
    for (which, column, harvie, correct) in pairs {
        let consistent = harvie.matches(100.0 * correct.value);
        let flagged = rec.harvie_discrepancy == Some(which);
        if flagged && consistent {
            return Err(cell_error(
                row,
                column,
                "marked as a discrepancy but equals 100x the corrected value",
            ));
        }
        if !flagged && !consistent {
            return Err(cell_error(
                row,
                column,
                format!("{harvie} is not 100x the corrected value {correct} and carries no discrepancy marker"),
            ));
        }
    }
    Ok(())
}

/// Parses and validates the table. Records come back in canonical country
/// order regardless of row order in the source.
pub fn load_dataset(source: &str) -> Result<Vec<CountryRecord>> {
    let mut lines = source
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| cell_error("header", "*", "empty dataset"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    if columns != HEADER {
        let at = columns
            .iter()
            .zip(HEADER.iter())
            .position(|(a, b)| a != b)
            .unwrap_or(columns.len().min(HEADER.len()));
        let expected = HEADER.get(at).copied().unwrap_or("<end of header>");
        return Err(cell_error(
            "header",
            expected,
            format!("unexpected header {:?}", columns.get(at)),
        ));
    }

    let mut slots: [Option<CountryRecord>; 10] = Default::default();
    for (i, line) in lines {
        let record = parse_row(i + 1, line)?;
        let idx = COUNTRY_NAMES
            .iter()
            .position(|n| *n == record.name)
            .expect("checked in parse_row");
        if slots[idx].is_some() {
            return Err(cell_error(&record.name, "country", "duplicate country"));
        }
        slots[idx] = Some(record);
    }
    slots
        .into_iter()
        .zip(COUNTRY_NAMES)
        .map(|(slot, name)| slot.ok_or_else(|| cell_error(name, "country", "missing country")))
        .collect()
}

/// The bundled table; validated by the test suite, so this never fails.
pub fn bundled_dataset() -> Vec<CountryRecord> {
    load_dataset(BUNDLED_TABLE).expect("bundled table is valid")
}
