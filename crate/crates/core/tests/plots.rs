mod common;

use common::{airquality, dat_ms};
use tidymiss::impute::JitterParams;
use tidymiss::plots::*;
use tidymiss::shadow::{as_shadow, nabular};
use tidymiss::summaries::{miss_case_table, miss_var_summary};
use tidymiss::table::{Column, Table};

fn count(svg: &str, tag: &str, class: Option<&str>) -> usize {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    doc.descendants().filter(|n| n.has_tag_name(tag) && class.is_none_or(|c| n.attribute("class") == Some(c))).count()
}

fn svg(data: &PlotData) -> String {
    render_svg(data, &RenderOptions::default()).unwrap()
}

#[test]
fn bar_svg_has_one_rect_per_bar() {
    let t = Table::new((0..6).map(|j| Column::integer(format!("c{j}"), vec![Some(1), None])).collect()).unwrap();
    let bars = miss_overview_bars(&t, BarUnit::Var);
    assert_eq!(bars.bars.len(), 6);
    let s = svg(&PlotData::Bar(bars));
    assert_eq!(count(&s, "rect", None), 6);
}

#[test]
fn case_bars_sorted_desc() {
    let bars = miss_overview_bars(&airquality(), BarUnit::Case);
    assert_eq!(bars.bars.len(), 153);
    assert_eq!(bars.bars[0].label, "5");
    assert_eq!(bars.bars[0].value, 2.0);
    assert!(bars.bars.windows(2).all(|w| w[0].value >= w[1].value));
}

#[test]
fn heatmap_grid_matches_shadow_and_cell_count() {
    let t = airquality();
    let hm = vis_miss_data(&t, false, false);
    let shadow = as_shadow(&t).unwrap();
    assert_eq!(hm.cells, shadow.missing_rows());
    assert!((hm.pct_missing - 100.0 * 44.0 / 918.0).abs() < 1e-12);
    let s = svg(&PlotData::Heatmap(hm));
    assert_eq!(count(&s, "rect", Some("cell")), 918);
    assert_eq!(count(&s, "rect", None), 918);
}

#[test]
fn clustered_heatmap_is_a_row_permutation() {
    let t = airquality();
    let plain = vis_miss_data(&t, false, false);
    let hm = vis_miss_data(&t, true, true);
    assert_eq!(hm.variables[..2], ["Ozone".to_string(), "Solar.R".to_string()]);
    let mut cases = hm.cases.clone();
    cases.sort();
    assert_eq!(cases, (1..=153).collect::<Vec<_>>());
    let n_miss: usize = hm.cells.iter().flatten().filter(|&&m| m).count();
    assert_eq!(n_miss, 44);
    // rows with the same pattern sit together
    for (i, case) in hm.cases.iter().enumerate() {
        let orig = &plain.cells[case - 1];
        let shown: Vec<bool> = plain
            .variables
            .iter()
            .map(|v| {
                let j = hm.variables.iter().position(|w| w == v).unwrap();
                hm.cells[i][j]
            })
            .collect();
        assert_eq!(&shown, orig);
    }
    let patterns: Vec<&Vec<bool>> = hm.cells.iter().collect();
    let changes = patterns.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(changes, 3);
}

#[test]
fn upset_reconciles_with_summaries() {
    let t = airquality();
    let u = upset_data(&as_shadow(&t).unwrap()).unwrap();
    let per_var = miss_var_summary(&t);
    for total in &u.totals {
        let row = per_var.iter().find(|r| r.variable == total.variable).unwrap();
        assert_eq!(row.n_miss, total.n_miss);
    }
    let with_missing: usize = miss_case_table(&t).iter().filter(|r| r.n_miss_in_unit > 0).map(|r| r.n_units).sum();
    assert_eq!(u.patterns.iter().map(|p| p.count).sum::<usize>(), with_missing);
    let s = svg(&PlotData::Upset(u.clone()));
    assert_eq!(count(&s, "rect", Some("pattern")), u.patterns.len());
    assert_eq!(count(&s, "rect", Some("total")), u.totals.len());
    assert_eq!(count(&s, "circle", Some("dot")), u.patterns.len() * u.totals.len());
}

#[test]
fn upset_single_column() {
    let t = Table::new(vec![Column::integer("a", vec![None, Some(1), None, None])]).unwrap();
    let u = upset_data(&as_shadow(&t).unwrap()).unwrap();
    assert_eq!(u.patterns.len(), 1);
    assert_eq!(u.patterns[0].count, 3);
}

#[test]
fn split_histogram_on_airquality() {
    let nab = nabular(&airquality()).unwrap();
    let h = split_histogram_data(&nab, "Temp", "Ozone", 10, false).unwrap();
    assert_eq!(h.series.len(), 2);
    assert_eq!(h.series[0].label, "!NA");
    assert_eq!(h.series[1].label, "NA");
    assert_eq!(h.series[1].total, 37);
    assert_eq!(h.series[0].total, 116);
    assert_eq!(h.edges.len(), 11);
    assert_eq!((h.edges[0], h.edges[10]), (56.0, 97.0));
    let s = svg(&PlotData::SplitHistogram(h));
    assert_eq!(count(&s, "rect", Some("bin")), 20);

    let full = split_histogram_data(&nab, "Ozone", "Temp", 5, false).unwrap();
    assert_eq!(full.series[1].total, 0);
    assert_eq!(full.series[0].total, 116);

    let t =
        Table::new(vec![Column::numeric("a", vec![None, None]), Column::numeric("b", vec![Some(1.0), None])]).unwrap();
    let nab = nabular(&t).unwrap();
    assert!(matches!(split_histogram_data(&nab, "a", "b", 3, false), Err(tidymiss::Error::EmptyDomain(_))));
}

#[test]
fn scatter_labels_on_airquality() {
    let t = airquality();
    let nab = nabular(&t).unwrap();
    let sc = scatter_miss_data(&nab, "Ozone", "Solar.R", 0.1, JitterParams::default()).unwrap();
    assert_eq!(sc.points.len(), 153);
    let n = |l: PointLabel| sc.points.iter().filter(|p| p.label == l).count();
    assert_eq!(n(PointLabel::ImputedX), 35);
    assert_eq!(n(PointLabel::ImputedY), 5);
    assert_eq!(n(PointLabel::ImputedBoth), 2);
    assert_eq!(n(PointLabel::Observed), 111);
    // no jitter: every imputed x sits at the base
    assert!((sc.x_below.base - (1.0 - 16.7)).abs() < 1e-12);
    for p in &sc.points {
        if matches!(p.label, PointLabel::ImputedX | PointLabel::ImputedBoth) {
            assert_eq!(p.x, sc.x_below.base);
        }
    }
    assert_eq!(nabular(&t).unwrap(), nab);
    let s = svg(&PlotData::Scatter(sc));
    assert_eq!(count(&s, "circle", Some("point")), 153);

    let jittered = scatter_miss_data(&nab, "Ozone", "Solar.R", 0.1, JitterParams::seeded(9)).unwrap();
    let again = scatter_miss_data(&nab, "Ozone", "Solar.R", 0.1, JitterParams::seeded(9)).unwrap();
    assert_eq!(jittered, again);
    let width = jittered.x_below.shift * 0.05;
    for p in jittered.points.iter().filter(|p| p.label == PointLabel::ImputedX) {
        assert!(p.x <= jittered.x_below.base && p.x >= jittered.x_below.base - width);
    }
}

#[test]
fn parallel_coordinates_on_airquality() {
    let nab = nabular(&airquality()).unwrap();
    let pc = parallel_coords_data(&nab, "Ozone").unwrap();
    assert_eq!(pc.variables.len(), 6);
    assert_eq!(pc.labels.iter().filter(|l| *l == "NA").count(), 37);
    for s in &pc.series {
        for v in s.iter().flatten() {
            assert!((0.0..=1.0).contains(v));
        }
    }
    assert_eq!(pc.series[0].iter().filter(|v| v.is_none()).count(), 37);
    let s = svg(&PlotData::ParallelCoords(pc));
    assert_eq!(count(&s, "path", Some("case")), 153);
}

#[test]
fn renders_are_deterministic_and_escaped() {
    let t =
        Table::new(vec![Column::integer("a<&>\"'", vec![None, Some(1)]), Column::integer("b", vec![Some(1), Some(2)])])
            .unwrap();
    let nab = nabular(&t).unwrap();
    let payloads = [
        PlotData::Bar(miss_overview_bars(&t, BarUnit::Var)),
        PlotData::Bar(miss_overview_bars(&t, BarUnit::Case)),
        PlotData::Heatmap(vis_miss_data(&t, true, true)),
        PlotData::Upset(upset_data(nab.shadow()).unwrap()),
        PlotData::SplitHistogram(split_histogram_data(&nab, "b", "a<&>\"'", 3, true).unwrap()),
        PlotData::Scatter(scatter_miss_data(&nab, "a<&>\"'", "b", 0.1, JitterParams::seeded(1)).unwrap()),
        PlotData::ParallelCoords(parallel_coords_data(&nab, "a<&>\"'").unwrap()),
    ];
    for p in &payloads {
        let a = svg(p);
        assert_eq!(a, svg(p));
        roxmltree::Document::parse(&a).expect("well-formed");
        assert!(!a.contains("a<&>"));
        let json = p.to_json();
        assert_eq!(json["payload_version"], 1);
    }
    let zero = RenderOptions { height: 0.0, ..Default::default() };
    assert!(render_svg(&payloads[0], &zero).is_err());
}

#[test]
fn text_renderer_on_dat_ms() {
    let hm = vis_miss_data(&dat_ms(), false, false);
    let s = render_text(&PlotData::Heatmap(hm)).unwrap();
    assert!(s.contains("3 ##."));
    assert!(render_text(&PlotData::Upset(upset_data(&as_shadow(&dat_ms()).unwrap()).unwrap())).is_err());
}
