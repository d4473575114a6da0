use std::fmt::Write;

use crate::error::{Error, Result};

use super::{
    BarData, HeatmapData, ParallelCoordsData, PlotData, PointLabel, ScatterMissData, SplitHistogramData, UpsetData,
};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub font_size: f64,
    pub missing_color: String,
    pub present_color: String,
    pub bar_color: String,
    /// Series colors, cycled.
    pub palette: Vec<String>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 720.0,
            height: 480.0,
            margin: 48.0,
            font_size: 11.0,
            missing_color: "#404040".into(),
            present_color: "#d9d9d9".into(),
            bar_color: "#4c72b0".into(),
            palette: ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"].map(String::from).to_vec(),
        }
    }
}

impl RenderOptions {
    fn validate(&self) -> Result<()> {
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        if !finite_pos(self.width) || !finite_pos(self.height) {
            return Err(Error::Validation(format!(
                "canvas must have positive area, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.margin.is_finite() && self.margin >= 0.0) || 2.0 * self.margin >= self.width.min(self.height) {
            return Err(Error::Validation(format!("margin {} leaves no drawing area", self.margin)));
        }
        if !finite_pos(self.font_size) {
            return Err(Error::Validation("font size must be positive".into()));
        }
        if self.palette.is_empty() {
            return Err(Error::Validation("palette must not be empty".into()));
        }
        Ok(())
    }

    fn series_color(&self, i: usize) -> &str {
        &self.palette[i % self.palette.len()]
    }
}

/// Render a payload as a standalone SVG document.
pub fn render_svg(data: &PlotData, opts: &RenderOptions) -> Result<String> {
    opts.validate()?;
    let mut c = Canvas::new(opts);
    match data {
        PlotData::Bar(d) => bar(&mut c, d),
        PlotData::Heatmap(d) => heatmap(&mut c, d),
        PlotData::Upset(d) => upset(&mut c, d),
        PlotData::SplitHistogram(d) => histogram(&mut c, d),
        PlotData::Scatter(d) => scatter(&mut c, d),
        PlotData::ParallelCoords(d) => parcoords(&mut c, d),
    }
    Ok(c.finish())
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

/// Fixed two-decimal coordinates keep output byte-stable.
fn n(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

struct Canvas<'a> {
    opts: &'a RenderOptions,
    body: String,
    left: f64,
    top: f64,
    right: f64,
    bottom: f64,
}

impl<'a> Canvas<'a> {
    fn new(opts: &'a RenderOptions) -> Self {
        Canvas {
            opts,
            body: String::new(),
            left: opts.margin,
            top: opts.margin,
            right: opts.width - opts.margin,
            bottom: opts.height - opts.margin,
        }
    }

    fn inner_w(&self) -> f64 {
        self.right - self.left
    }

    fn inner_h(&self) -> f64 {
        self.bottom - self.top
    }

    fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            n(x),
            n(y),
            n(w.max(0.0)),
            n(h.max(0.0)),
            escape(fill)
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64) {
        let _ = writeln!(
            self.body,
            r##"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>"##,
            n(x1),
            n(y1),
            n(x2),
            n(y2)
        );
    }

    fn circle(&mut self, class: &str, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            n(x),
            n(y),
            n(r),
            escape(fill)
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, fill: &str, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" text-anchor="{anchor}" fill="{}">{}</text>"#,
            n(x),
            n(y),
            escape(fill),
            escape(s)
        );
    }

    fn vtext(&mut self, x: f64, y: f64, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{0}" y="{1}" text-anchor="end" transform="rotate(-90 {0} {1})">{2}</text>"#,
            n(x),
            n(y),
            escape(s)
        );
    }

    fn axes(&mut self) {
        let (l, b, r, t) = (self.left, self.bottom, self.right, self.top);
        self.line(l, b, r, b);
        self.line(l, b, l, t);
    }

    fn finish(self) -> String {
        let o = self.opts;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" \
             font-family=\"sans-serif\" font-size=\"{f}\">\n{body}</svg>\n",
            w = n(o.width),
            h = n(o.height),
            f = n(o.font_size),
            body = self.body
        )
    }
}

fn bar(c: &mut Canvas, d: &BarData) {
    let fs = c.opts.font_size;
    c.text(c.opts.width / 2.0, fs * 1.5, "middle", "#000000", &d.title);
    let max = d.bars.iter().map(|b| b.value).fold(0.0, f64::max);
    let band = c.inner_w() / d.bars.len().max(1) as f64;
    let color = c.opts.bar_color.clone();
    for (i, b) in d.bars.iter().enumerate() {
        let h = if max > 0.0 { c.inner_h() * b.value / max } else { 0.0 };
        let x = c.left + band * i as f64;
        c.rect("bar", x + band * 0.1, c.bottom - h, band * 0.8, h, &color);
        c.vtext(x + band / 2.0 + fs / 3.0, c.bottom + 4.0, &b.label);
    }
    c.axes();
    c.text(c.left - 4.0, c.bottom, "end", "#000000", "0");
    c.text(c.left - 4.0, c.top + fs / 2.0, "end", "#000000", &format!("{max}"));
    c.text(c.left, c.top - fs / 2.0, "start", "#000000", &d.y_label);
    c.text(c.right, c.opts.height - fs / 2.0, "end", "#000000", &d.x_label);
}

fn heatmap(c: &mut Canvas, d: &HeatmapData) {
    let fs = c.opts.font_size;
    let n_cols = d.variables.len().max(1) as f64;
    let n_rows = d.cases.len().max(1) as f64;
    let cw = c.inner_w() / n_cols;
    let ch = c.inner_h() / n_rows;
    for (j, (name, pct)) in d.variables.iter().zip(&d.column_pct).enumerate() {
        let x = c.left + cw * (j as f64 + 0.5);
        c.text(x, c.top - fs / 2.0, "middle", "#000000", &format!("{name} ({pct:.1}%)"));
    }
    let (miss, pres) = (c.opts.missing_color.clone(), c.opts.present_color.clone());
    for (i, row) in d.cells.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            let fill = if m { &miss } else { &pres };
            c.rect("cell", c.left + cw * j as f64, c.top + ch * i as f64, cw, ch, fill);
        }
    }
    let y = c.opts.height - fs / 2.0;
    c.text(c.left, y, "start", &miss, &format!("Missing ({:.1}%)", d.pct_missing));
    c.text(c.right, y, "end", &pres, &format!("Present ({:.1}%)", d.pct_present));
}

fn upset(c: &mut Canvas, d: &UpsetData) {
    let fs = c.opts.font_size;
    let label_w = c.inner_w() * 0.25;
    let plot_l = c.left + label_w;
    let plot_w = c.inner_w() - label_w;
    let bars_h = c.inner_h() * 0.6;
    let bars_bottom = c.top + bars_h;
    let matrix_top = bars_bottom + fs;
    let row_h = (c.bottom - matrix_top) / d.totals.len().max(1) as f64;
    let band = plot_w / d.patterns.len().max(1) as f64;
    let max = d.patterns.iter().map(|p| p.count).max().unwrap_or(0).max(1) as f64;
    let max_total = d.totals.iter().map(|t| t.n_miss).max().unwrap_or(0).max(1) as f64;
    let bar_color = c.opts.bar_color.clone();
    let (on, off) = (c.opts.missing_color.clone(), c.opts.present_color.clone());

    for (i, p) in d.patterns.iter().enumerate() {
        let h = bars_h * p.count as f64 / max;
        let x = plot_l + band * i as f64;
        c.rect("pattern", x + band * 0.15, bars_bottom - h, band * 0.7, h, &bar_color);
        c.text(x + band / 2.0, bars_bottom - h - 2.0, "middle", "#000000", &p.count.to_string());
        for (k, t) in d.totals.iter().enumerate() {
            let inside = p.variables.contains(&t.variable);
            let cy = matrix_top + row_h * (k as f64 + 0.5);
            let r = (band.min(row_h) * 0.3).max(1.0);
            c.circle("dot", x + band / 2.0, cy, r, if inside { &on } else { &off });
        }
    }
    for (k, t) in d.totals.iter().enumerate() {
        let y = matrix_top + row_h * k as f64;
        let w = (label_w * 0.5) * t.n_miss as f64 / max_total;
        c.rect("total", plot_l - w, y + row_h * 0.2, w, row_h * 0.6, &bar_color);
        c.text(c.left, y + row_h / 2.0 + fs / 3.0, "start", "#000000", &t.variable);
    }
    c.line(plot_l, bars_bottom, c.right, bars_bottom);
}

fn histogram(c: &mut Canvas, d: &SplitHistogramData) {
    let fs = c.opts.font_size;
    let bins = d.edges.len().saturating_sub(1).max(1);
    let heights: Vec<Vec<f64>> = d
        .series
        .iter()
        .map(|s| match &s.density {
            Some(dens) => dens.clone(),
            None => s.counts.iter().map(|&k| k as f64).collect(),
        })
        .collect();
    let max = heights.iter().flatten().copied().fold(0.0, f64::max);
    let band = c.inner_w() / bins as f64;
    let slot = band / d.series.len().max(1) as f64;
    for (si, (s, hs)) in d.series.iter().zip(&heights).enumerate() {
        let color = c.opts.series_color(si).to_string();
        for (b, &v) in hs.iter().enumerate() {
            let h = if max > 0.0 { c.inner_h() * v / max } else { 0.0 };
            let x = c.left + band * b as f64 + slot * si as f64;
            c.rect("bin", x, c.bottom - h, slot, h, &color);
        }
        let ly = c.top + fs * (si as f64 + 1.0);
        c.text(c.right, ly, "end", &color, &format!("{}_NA = {}", d.condition, s.label));
    }
    c.axes();
    if let (Some(lo), Some(hi)) = (d.edges.first(), d.edges.last()) {
        c.text(c.left, c.bottom + fs * 1.2, "start", "#000000", &format!("{lo}"));
        c.text(c.right, c.bottom + fs * 1.2, "end", "#000000", &format!("{hi}"));
    }
    c.text(c.left + c.inner_w() / 2.0, c.opts.height - fs / 2.0, "middle", "#000000", &d.variable);
}

fn scatter(c: &mut Canvas, d: &ScatterMissData) {
    let fs = c.opts.font_size;
    let bounds = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        }
    };
    let (x0, x1) = bounds(&mut d.points.iter().map(|p| p.x));
    let (y0, y1) = bounds(&mut d.points.iter().map(|p| p.y));
    let r = (fs / 4.0).max(1.5);
    for p in &d.points {
        let px = c.left + c.inner_w() * (p.x - x0) / (x1 - x0);
        let py = c.bottom - c.inner_h() * (p.y - y0) / (y1 - y0);
        let color = if p.label == PointLabel::Observed {
            c.opts.series_color(0).to_string()
        } else {
            c.opts.series_color(1).to_string()
        };
        c.circle("point", px, py, r, &color);
    }
    c.axes();
    let legend = [(0, "Not Missing"), (1, "Missing")];
    for (k, (ci, label)) in legend.into_iter().enumerate() {
        let color = c.opts.series_color(ci).to_string();
        c.text(c.right, c.top + fs * (k as f64 + 1.0), "end", &color, label);
    }
    c.text(c.left + c.inner_w() / 2.0, c.opts.height - fs / 2.0, "middle", "#000000", &d.x_var);
    c.vtext(fs * 1.2, c.top + c.inner_h() / 2.0, &d.y_var);
}

fn parcoords(c: &mut Canvas, d: &ParallelCoordsData) {
    let fs = c.opts.font_size;
    let k = d.variables.len();
    let step = if k > 1 { c.inner_w() / (k - 1) as f64 } else { 0.0 };
    let (lo, hi) = d.series.iter().flatten().flatten().fold((0.0f64, 1.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    let y_of = |v: f64, c: &Canvas| c.bottom - c.inner_h() * (v - lo) / (hi - lo);

    let mut levels: Vec<&str> = Vec::new();
    for l in &d.labels {
        if !levels.contains(&l.as_str()) {
            levels.push(l);
        }
    }
    let n_cases = d.labels.len();
    for i in 0..n_cases {
        let mut path = String::new();
        let mut pen_down = false;
        for (j, s) in d.series.iter().enumerate() {
            match s[i] {
                Some(v) => {
                    let _ = write!(
                        path,
                        "{}{} {} ",
                        if pen_down { "L" } else { "M" },
                        n(c.left + step * j as f64),
                        n(y_of(v, c))
                    );
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        if path.is_empty() {
            continue;
        }
        let li = levels.iter().position(|l| *l == d.labels[i]).unwrap_or(0);
        let color = c.opts.series_color(li).to_string();
        let _ =
            writeln!(c.body, r#"<path class="case" d="{}" fill="none" stroke="{}"/>"#, path.trim_end(), escape(&color));
    }
    for (j, name) in d.variables.iter().enumerate() {
        let x = c.left + step * j as f64;
        let (t, b) = (c.top, c.bottom);
        c.line(x, b, x, t);
        c.text(x, b + fs * 1.2, "middle", "#000000", name);
    }
    for (li, l) in levels.iter().enumerate() {
        let color = c.opts.series_color(li).to_string();
        c.text(c.right, fs * (li as f64 + 1.0), "end", &color, &format!("{}_NA = {l}", d.color_variable));
    }
}
