//! Plot payloads and their builders.
//!
//! Every builder is a pure function returning plain serializable data; the
//! SVG and text renderers only ever consume these payloads, so the numbers
//! behind a figure are always available on their own.

mod svg;
mod text;

pub use svg::{render_svg, RenderOptions};
pub use text::render_text;

use serde::Serialize;

use crate::augment::Dendrogram;
use crate::error::{Error, Result};
use crate::impute::{impute_below, BelowRange, JitterParams};
use crate::replace::Scope;
use crate::shadow::{NabularTable, ShadowMatrix, NOT_MISSING};
use crate::summaries::{rate_missing, RateForm, Unit};
use crate::table::Table;

pub const PAYLOAD_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bar {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarData {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub bars: Vec<Bar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarUnit {
    Var,
    Case,
}

/// Missing counts per variable or per case, largest first.
pub fn miss_overview_bars(table: &Table, unit: BarUnit) -> BarData {
    let mut bars: Vec<Bar> = match unit {
        BarUnit::Var => {
            table.columns().iter().map(|c| Bar { label: c.name().to_string(), value: c.n_missing() as f64 }).collect()
        }
        BarUnit::Case => table
            .missing_rows()
            .iter()
            .enumerate()
            .map(|(r, row)| Bar { label: (r + 1).to_string(), value: row.iter().filter(|&&m| m).count() as f64 })
            .collect(),
    };
    bars.sort_by(|a, b| b.value.total_cmp(&a.value));
    let (title, x_label) = match unit {
        BarUnit::Var => ("Missing values per variable", "variable"),
        BarUnit::Case => ("Missing values per case", "case"),
    };
    BarData { title: title.into(), x_label: x_label.into(), y_label: "n_miss".into(), bars }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapData {
    /// Variables in display order.
    pub variables: Vec<String>,
    /// 1-based case numbers in display order.
    pub cases: Vec<usize>,
    /// `cells[i][j]`: whether displayed case `i` is missing displayed variable `j`.
    pub cells: Vec<Vec<bool>>,
    /// Percent missing per displayed variable.
    pub column_pct: Vec<f64>,
    pub pct_missing: f64,
    pub pct_present: f64,
}

/// Missingness grid in data layout. `cluster` orders rows by the
/// missingness dendrogram's leaf order; `sort_vars` orders columns by
/// missing count, largest first.
pub fn vis_miss_data(table: &Table, cluster: bool, sort_vars: bool) -> HeatmapData {
    let grid = table.missing_rows();
    let rows: Vec<usize> = if cluster { Dendrogram::build(&grid).leaf_order() } else { (0..table.n_rows()).collect() };
    let mut cols: Vec<usize> = (0..table.n_cols()).collect();
    if sort_vars {
        cols.sort_by(|&a, &b| table.columns()[b].n_missing().cmp(&table.columns()[a].n_missing()));
    }
    let n = table.n_rows().max(1) as f64;
    let pct_missing = rate_missing(table, Unit::Cell, RateForm::Percent, false).unwrap_or(0.0);
    HeatmapData {
        variables: cols.iter().map(|&j| table.columns()[j].name().to_string()).collect(),
        cases: rows.iter().map(|r| r + 1).collect(),
        cells: rows.iter().map(|&r| cols.iter().map(|&j| grid[r][j]).collect()).collect(),
        column_pct: cols.iter().map(|&j| 100.0 * table.columns()[j].n_missing() as f64 / n).collect(),
        pct_missing,
        pct_present: if table.n_rows() * table.n_cols() == 0 { 0.0 } else { 100.0 - pct_missing },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpsetPattern {
    /// Variables missing together, in column order.
    pub variables: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpsetTotal {
    pub variable: String,
    pub n_miss: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpsetData {
    pub patterns: Vec<UpsetPattern>,
    /// Variables with at least one missing value, in column order.
    pub totals: Vec<UpsetTotal>,
}

/// Exact co-missingness patterns over variables that have any missing
/// value. Patterns are ordered by count (largest first), then by size
/// (smallest first), then lexicographically.
pub fn upset_data(shadow: &ShadowMatrix) -> Result<UpsetData> {
    let involved: Vec<usize> =
        (0..shadow.n_cols()).filter(|&j| (0..shadow.n_rows()).any(|r| shadow.is_missing(r, j))).collect();
    if involved.is_empty() {
        return Err(Error::EmptyDomain("no missing values to intersect".into()));
    }
    let names: Vec<String> = involved.iter().map(|&j| shadow.columns()[j].variable().to_string()).collect();
    let mut patterns: Vec<UpsetPattern> = Vec::new();
    for r in 0..shadow.n_rows() {
        let set: Vec<String> =
            involved.iter().zip(&names).filter(|(&j, _)| shadow.is_missing(r, j)).map(|(_, n)| n.clone()).collect();
        if set.is_empty() {
            continue;
        }
        match patterns.iter_mut().find(|p| p.variables == set) {
            Some(p) => p.count += 1,
            None => patterns.push(UpsetPattern { variables: set, count: 1 }),
        }
    }
    patterns.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(a.variables.len().cmp(&b.variables.len()))
            .then_with(|| a.variables.cmp(&b.variables))
    });
    let totals = involved
        .iter()
        .zip(names)
        .map(|(&j, variable)| UpsetTotal {
            variable,
            n_miss: (0..shadow.n_rows()).filter(|&r| shadow.is_missing(r, j)).count(),
        })
        .collect();
    Ok(UpsetData { patterns, totals })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistSeries {
    /// Shadow level of the conditioning variable.
    pub label: String,
    pub counts: Vec<usize>,
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitHistogramData {
    pub variable: String,
    pub condition: String,
    /// `bins + 1` strictly increasing edges.
    pub edges: Vec<f64>,
    /// One series per level in the shadow registry.
    pub series: Vec<HistSeries>,
}

/// Histogram of `plot_var` split by the shadow level of `condition_var`.
/// Equal-width bins over the observed range, right-open except the last.
pub fn split_histogram_data(
    nab: &NabularTable,
    plot_var: &str,
    condition_var: &str,
    bins: usize,
    density: bool,
) -> Result<SplitHistogramData> {
    if bins == 0 {
        return Err(Error::Validation("need at least one bin".into()));
    }
    let values = nab.data().column(plot_var)?.require_f64()?;
    let cond = nab.shadow().column(condition_var)?;
    let observed: Vec<f64> = values.iter().flatten().copied().collect();
    let (lo, hi) = observed
        .iter()
        .fold(None, |acc: Option<(f64, f64)>, &v| match acc {
            None => Some((v, v)),
            Some((a, b)) => Some((a.min(v), b.max(v))),
        })
        .ok_or_else(|| Error::EmptyDomain(format!("column `{plot_var}` has no observed values")))?;
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
    let bin_of = |v: f64| (((v - lo) / width).floor() as usize).min(bins - 1);

    let registry = nab.registry();
    let mut series: Vec<HistSeries> = registry
        .levels()
        .iter()
        .map(|l| HistSeries { label: l.to_string(), counts: vec![0; bins], total: 0, density: None })
        .collect();
    for (r, v) in values.iter().enumerate() {
        if let Some(v) = v {
            let s = &mut series[cond.codes()[r] as usize];
            s.counts[bin_of(*v)] += 1;
            s.total += 1;
        }
    }
    if density {
        for s in &mut series {
            s.density = Some(
                s.counts
                    .iter()
                    .map(|&c| if s.total == 0 { 0.0 } else { c as f64 / (s.total as f64 * width) })
                    .collect(),
            );
        }
    }
    Ok(SplitHistogramData { variable: plot_var.to_string(), condition: condition_var.to_string(), edges, series })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointLabel {
    Observed,
    ImputedX,
    ImputedY,
    ImputedBoth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub x: f64,
    pub y: f64,
    pub label: PointLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterMissData {
    pub x_var: String,
    pub y_var: String,
    pub points: Vec<ScatterPoint>,
    pub shift_fraction: f64,
    pub x_below: BelowRange,
    pub y_below: BelowRange,
    pub jitter: bool,
    pub jitter_magnitude: f64,
    pub seed: u64,
}

/// Scatter of two variables with missing coordinates placed below each
/// axis's range; labels come from the shadow.
pub fn scatter_miss_data(
    nab: &NabularTable,
    x_var: &str,
    y_var: &str,
    shift_fraction: f64,
    jitter: JitterParams,
) -> Result<ScatterMissData> {
    let data = nab.data();
    let below_of = |var: &str| -> Result<BelowRange> {
        let values: Vec<f64> = data.column(var)?.require_f64()?.into_iter().flatten().collect();
        BelowRange::of(&values, shift_fraction)
            .ok_or_else(|| Error::EmptyDomain(format!("column `{var}` has no observed values")))
    };
    let x_below = below_of(x_var)?;
    let y_below = below_of(y_var)?;
    let scope = Scope::At(vec![x_var.to_string(), y_var.to_string()]);
    let filled = impute_below(data, &scope, shift_fraction, jitter)?;
    let xs = filled.column(x_var)?.require_f64()?;
    let ys = filled.column(y_var)?.require_f64()?;
    let sx = nab.shadow().column(x_var)?;
    let sy = nab.shadow().column(y_var)?;
    let points = (0..data.n_rows())
        .map(|r| ScatterPoint {
            x: xs[r].expect("imputed"),
            y: ys[r].expect("imputed"),
            label: match (sx.is_missing(r), sy.is_missing(r)) {
                (false, false) => PointLabel::Observed,
                (true, false) => PointLabel::ImputedX,
                (false, true) => PointLabel::ImputedY,
                (true, true) => PointLabel::ImputedBoth,
            },
        })
        .collect();
    Ok(ScatterMissData {
        x_var: x_var.to_string(),
        y_var: y_var.to_string(),
        points,
        shift_fraction,
        x_below,
        y_below,
        jitter: jitter.enabled,
        jitter_magnitude: jitter.magnitude,
        seed: jitter.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelCoordsData {
    pub variables: Vec<String>,
    /// `series[j][i]`: scaled value of variable `j` for case `i`; missing
    /// cells are `None`.
    pub series: Vec<Vec<Option<f64>>>,
    pub color_variable: String,
    /// Shadow level of the color variable per case.
    pub labels: Vec<String>,
}

/// Min-max scale `values` using the cells flagged in `reference`; constant
/// reference values map to 0.5.
pub fn scale_unit(values: &[Option<f64>], reference: &[bool]) -> Vec<Option<f64>> {
    let bounds = values.iter().zip(reference).filter_map(|(v, &keep)| v.filter(|_| keep)).fold(
        None,
        |acc: Option<(f64, f64)>, v| match acc {
            None => Some((v, v)),
            Some((a, b)) => Some((a.min(v), b.max(v))),
        },
    );
    values
        .iter()
        .map(|v| {
            v.map(|x| match bounds {
                Some((lo, hi)) if hi > lo => (x - lo) / (hi - lo),
                _ => 0.5,
            })
        })
        .collect()
}

/// Numeric variables scaled to [0, 1] over their originally observed values
/// (shadow `!NA`), colored by one variable's shadow level. Imputed values
/// may fall outside [0, 1].
pub fn parallel_coords_data(nab: &NabularTable, color_shadow_var: &str) -> Result<ParallelCoordsData> {
    let color = nab.shadow().column(color_shadow_var)?;
    let data = nab.data();
    let numeric: Vec<usize> = (0..data.n_cols()).filter(|&j| data.columns()[j].dtype().is_numeric()).collect();
    if numeric.len() < 2 {
        return Err(Error::Validation("parallel coordinates need at least two numeric variables".into()));
    }
    let series = numeric
        .iter()
        .map(|&j| {
            let values = data.columns()[j].as_f64().expect("numeric");
            let codes = nab.shadow().columns()[j].codes();
            let observed: Vec<bool> = codes.iter().map(|&c| c == NOT_MISSING).collect();
            let reference = if values.iter().zip(&observed).any(|(v, &o)| o && v.is_some()) {
                observed
            } else {
                vec![true; values.len()]
            };
            scale_unit(&values, &reference)
        })
        .collect();
    Ok(ParallelCoordsData {
        variables: numeric.iter().map(|&j| data.columns()[j].name().to_string()).collect(),
        series,
        color_variable: color_shadow_var.to_string(),
        labels: color.codes().iter().map(|&c| nab.registry().level(c).to_string()).collect(),
    })
}

/// Any plot payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlotData {
    Bar(BarData),
    Heatmap(HeatmapData),
    Upset(UpsetData),
    SplitHistogram(SplitHistogramData),
    Scatter(ScatterMissData),
    ParallelCoords(ParallelCoordsData),
}

#[derive(Serialize)]
struct Versioned<'a> {
    payload_version: u32,
    #[serde(flatten)]
    data: &'a PlotData,
}

impl PlotData {
    /// JSON value carrying `payload_version` and `kind` alongside the data.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(Versioned { payload_version: PAYLOAD_VERSION, data: self })
            .expect("plot payloads serialize")
    }
}
