//! Sweep tables, their CSV/JSON forms, and log-log rate fits.
//!
//! CSV: header `parameter-name,column...`, one LF-terminated line per row,
//! numbers in shortest round-trip form. JSON mirrors the struct fields.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub values: Vec<f64>,
}

/// Least-squares fit of `log(value) = exponent * log(parameter) + log(prefactor)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub column: String,
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    parameter_name: String,
    columns: Vec<String>,
    rows: Vec<SweepRow>,
    fit: Option<RateFit>,
}

impl SweepReport {
    pub fn new(parameter_name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { parameter_name: parameter_name.into(), columns, rows: Vec::new(), fit: None }
    }

    pub fn parameter_name(&self) -> &str {
        &self.parameter_name
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn fit(&self) -> Option<&RateFit> {
        self.fit.as_ref()
    }

    /// Appends a row; parameters must increase strictly and every value must
    /// be finite.
    pub fn push_row(&mut self, parameter: f64, values: Vec<f64>) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values", self.columns.len()),
                actual: format!("{} values", values.len()),
            });
        }
        if !parameter.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite entry in row {parameter}")));
        }
        if let Some(last) = self.rows.last() {
            if parameter <= last.parameter {
                return Err(Error::InvalidInput(format!(
                    "parameter {parameter} does not increase past {}",
                    last.parameter
                )));
            }
        }
        self.rows.push(SweepRow { parameter, values });
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.parameter).collect()
    }

    /// Fits `column` and stores the result.
    pub fn fit_column(&mut self, column: &str) -> Result<&RateFit> {
        let fit = fit_rate(self, column)?;
        Ok(self.fit.insert(fit))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.parameter_name);
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{:?}", row.parameter).expect("string write");
            for v in &row.values {
                write!(out, ",{v:?}").expect("string write");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

pub fn fit_rate(report: &SweepReport, column: &str) -> Result<RateFit> {
    let ys = report
        .column(column)
        .ok_or_else(|| Error::InvalidInput(format!("no column named '{column}'")))?;
    let xs = report.parameters();
    if xs.len() < 4 {
        return Err(Error::InvalidInput(format!("rate fit needs at least 4 rows, got {}", xs.len())));
    }
    if let Some((x, y)) = xs.iter().zip(&ys).find(|(x, y)| **x <= 0.0 || **y <= 0.0) {
        return Err(Error::InvalidInput(format!(
            "rate fit needs positive data, got ({x}, {y}) in column '{column}'"
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot <= f64::EPSILON * n * my.abs().max(1.0) { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { column: column.to_string(), exponent, prefactor: intercept.exp(), r_squared })
}
