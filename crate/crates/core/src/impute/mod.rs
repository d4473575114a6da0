//! Imputation for exploration (mean, median, below-range) and single
//! imputation from a linear model. On nabular input the shadow is left
//! untouched, so the imputed cells stay identifiable.

mod ols;

pub use ols::{fit_ols, least_squares, FitResult, LinearModelSpec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::replace::Scope;
use crate::shadow::NabularTable;
use crate::table::{median_of, Column, StatsRow, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Mean,
    Median,
}

/// Random noise added below the imputed base value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterParams {
    pub enabled: bool,
    /// Width of the noise band as a fraction of the shift.
    pub magnitude: f64,
    pub seed: u64,
}

impl Default for JitterParams {
    fn default() -> Self {
        JitterParams { enabled: false, magnitude: 0.05, seed: 0 }
    }
}

impl JitterParams {
    pub fn seeded(seed: u64) -> Self {
        JitterParams { enabled: true, seed, ..Default::default() }
    }
}

pub const DEFAULT_SHIFT_FRACTION: f64 = 0.1;

/// Columns an imputation scope touches. `All` quietly keeps only numeric
/// columns; explicit scopes must name numeric columns.
fn numeric_scope(table: &Table, scope: &Scope) -> Result<Vec<usize>> {
    let cols = scope.resolve(table)?;
    match scope {
        Scope::All => Ok(cols.into_iter().filter(|&i| table.columns()[i].dtype().is_numeric()).collect()),
        _ => {
            for &i in &cols {
                table.columns()[i].require_f64()?;
            }
            Ok(cols)
        }
    }
}

fn observed(column: &Column) -> Result<Vec<f64>> {
    let values: Vec<f64> = column.require_f64()?.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(Error::EmptyDomain(format!("column `{}` has no observed values to impute from", column.name())));
    }
    Ok(values)
}

/// Replace the missing cells of column `idx` using `fill(row)`; the column
/// becomes numeric.
fn fill_column(table: &Table, idx: usize, mut fill: impl FnMut(usize) -> Option<f64>) -> Result<Table> {
    let col = &table.columns()[idx];
    let values = col.require_f64()?;
    let filled = values.into_iter().enumerate().map(|(r, v)| v.or_else(|| fill(r))).collect();
    table.with_replaced(idx, Column::numeric(col.name(), filled))
}

/// Fill missing cells with the column's observed mean or median.
pub fn impute_location<F: Frame>(target: &F, scope: &Scope, statistic: Location) -> Result<F> {
    let mut table = target.data().clone();
    for idx in numeric_scope(&table, scope)? {
        let col = &table.columns()[idx];
        if col.n_missing() == 0 {
            continue;
        }
        let values = observed(col)?;
        let fill = match statistic {
            Location::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Location::Median => median_of(&values).expect("non-empty"),
        };
        table = fill_column(&table, idx, |_| Some(fill))?;
    }
    target.with_data(table)
}

/// Base value and shift for below-range imputation: `min - shift` where
/// `shift = shift_fraction * range`, or 1 when the range is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BelowRange {
    pub min: f64,
    pub shift: f64,
    pub base: f64,
}

impl BelowRange {
    pub fn of(values: &[f64], shift_fraction: f64) -> Option<BelowRange> {
        let stats = StatsRow::from_values(values)?;
        let range = stats.max - stats.min;
        let shift = if range > 0.0 { shift_fraction * range } else { 1.0 };
        Some(BelowRange { min: stats.min, shift, base: stats.min - shift })
    }

    /// Upper end of the jitter band below `base`.
    pub fn jitter_width(&self, jitter: &JitterParams) -> f64 {
        if jitter.enabled {
            jitter.magnitude * self.shift
        } else {
            0.0
        }
    }
}

fn check_below_params(shift_fraction: f64, jitter: &JitterParams) -> Result<()> {
    if !(shift_fraction.is_finite() && shift_fraction > 0.0) {
        return Err(Error::Validation(format!("shift fraction must be positive, got {shift_fraction}")));
    }
    if !(jitter.magnitude.is_finite() && jitter.magnitude >= 0.0) {
        return Err(Error::Validation(format!("jitter magnitude must be non-negative, got {}", jitter.magnitude)));
    }
    Ok(())
}

/// Fill missing cells below the observed range: `min - shift`, minus
/// uniform noise in `[0, magnitude * shift]` when jitter is enabled.
/// One seeded stream is drawn in scope-then-row order.
pub fn impute_below<F: Frame>(target: &F, scope: &Scope, shift_fraction: f64, jitter: JitterParams) -> Result<F> {
    check_below_params(shift_fraction, &jitter)?;
    let mut rng = ChaCha8Rng::seed_from_u64(jitter.seed);
    let mut table = target.data().clone();
    for idx in numeric_scope(&table, scope)? {
        let col = &table.columns()[idx];
        if col.n_missing() == 0 {
            continue;
        }
        let below = BelowRange::of(&observed(col)?, shift_fraction).expect("non-empty");
        let width = below.jitter_width(&jitter);
        table = fill_column(&table, idx, |_| {
            let noise = if width > 0.0 { rng.gen_range(0.0..=width) } else { 0.0 };
            Some(below.base - noise)
        })?;
    }
    target.with_data(table)
}

/// Result of a linear-model imputation.
#[derive(Debug, Clone)]
pub struct LmImputation<F> {
    pub output: F,
    pub fit: FitResult,
    pub n_imputed: usize,
    /// Response cells left missing because a predictor was missing.
    pub still_missing: usize,
}

/// Fit `spec` on complete rows and fill missing response cells whose
/// predictors are all present. The response column becomes numeric.
pub fn impute_lm<F: Frame>(target: &F, spec: &LinearModelSpec) -> Result<LmImputation<F>> {
    let table = target.data();
    let fit = fit_ols(table, spec)?;
    let idx = table.index_of(&spec.response)?;
    let xs = spec.predictors.iter().map(|p| table.column(p)?.require_f64()).collect::<Result<Vec<_>>>()?;
    if table.columns()[idx].n_missing() == 0 {
        return Ok(LmImputation { output: target.with_data(table.clone())?, fit, n_imputed: 0, still_missing: 0 });
    }
    let mut n_imputed = 0;
    let mut still_missing = 0;
    let filled = fill_column(table, idx, |r| match xs.iter().map(|x| x[r]).collect::<Option<Vec<f64>>>() {
        Some(row) => {
            n_imputed += 1;
            Some(fit.predict(&row))
        }
        None => {
            still_missing += 1;
            None
        }
    })?;
    Ok(LmImputation { output: target.with_data(filled)?, fit, n_imputed, still_missing })
}

/// Statistics of a variable split by the row-level shadow label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingnessStats {
    pub variable: String,
    /// Rows that had any missing value (`None` when there are none).
    pub missing: Option<StatsRow>,
    /// Rows that were complete.
    pub not_missing: Option<StatsRow>,
}

/// Compare previously-missing rows with complete rows on an imputed
/// variable. Uses the `any_missing` annotation when present, otherwise the
/// shadow.
pub fn summarize_by_missingness(nab: &NabularTable, var: &str) -> Result<MissingnessStats> {
    let col = nab.data().column(var)?;
    let values = col.require_f64()?;
    if col.n_missing() > 0 {
        return Err(Error::Validation(format!(
            "column `{var}` still has {} missing cells; impute it first",
            col.n_missing()
        )));
    }
    let labels: Vec<bool> = match nab.annotation(crate::augment::LABEL_COLUMN) {
        Some(ann) => (0..ann.len()).map(|r| ann.render(r, "") == "Missing").collect(),
        None => nab.any_missing_rows(),
    };
    let split = |want: bool| -> Vec<f64> {
        values.iter().zip(&labels).filter(|(_, &l)| l == want).filter_map(|(v, _)| *v).collect()
    };
    Ok(MissingnessStats {
        variable: var.to_string(),
        missing: StatsRow::from_values(&split(true)),
        not_missing: StatsRow::from_values(&split(false)),
    })
}
