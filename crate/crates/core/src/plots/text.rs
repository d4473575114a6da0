use std::fmt::Write;

use crate::error::{Error, Result};

use super::{BarData, HeatmapData, PlotData};

const BAR_WIDTH: usize = 40;

/// Fixed-width rendering for bar and heatmap payloads.
pub fn render_text(data: &PlotData) -> Result<String> {
    match data {
        PlotData::Bar(d) => Ok(bar(d)),
        PlotData::Heatmap(d) => Ok(heatmap(d)),
        _ => Err(Error::Validation("text output supports bar and heatmap plots only".into())),
    }
}

fn bar(d: &BarData) -> String {
    let mut out = format!("{}\n", d.title);
    let label_w = d.bars.iter().map(|b| b.label.chars().count()).max().unwrap_or(0);
    let max = d.bars.iter().map(|b| b.value).fold(0.0, f64::max);
    for b in &d.bars {
        let len = if max > 0.0 { (b.value / max * BAR_WIDTH as f64).round() as usize } else { 0 };
        let _ = writeln!(out, "{:<label_w$} | {:<BAR_WIDTH$} {}", b.label, "#".repeat(len), b.value);
    }
    out
}

fn heatmap(d: &HeatmapData) -> String {
    let mut out = format!("Legend: '#' missing ({:.1}%), '.' present ({:.1}%)\n", d.pct_missing, d.pct_present);
    for (j, (name, pct)) in d.variables.iter().zip(&d.column_pct).enumerate() {
        let _ = writeln!(out, "  [{}] {name} ({pct:.1}%)", j + 1);
    }
    let case_w = d.cases.iter().map(|c| c.to_string().len()).max().unwrap_or(1);
    for (case, row) in d.cases.iter().zip(&d.cells) {
        let glyphs: String = row.iter().map(|&m| if m { '#' } else { '.' }).collect();
        let _ = writeln!(out, "{case:>case_w$} {glyphs}");
    }
    out
}
