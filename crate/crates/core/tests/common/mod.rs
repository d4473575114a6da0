#![allow(dead_code)]
pub mod props;

use std::path::{Path, PathBuf};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use tidymiss::mechanisms::{amputate, MechanismSpec};
use tidymiss::table::{read_delimited, Column, NaTokenConfig, Table};

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Table {
    let bytes = std::fs::read(fixture_path(name)).unwrap();
    read_delimited(bytes.as_slice(), &NaTokenConfig::default()).unwrap()
}

pub fn airquality() -> Table {
    fixture("airquality.csv")
}

pub fn dat_ms() -> Table {
    fixture("dat_ms.csv")
}

/// 1000 cases from a fixed seed, no failure files.
pub fn config(seed: u64) -> Config {
    Config { cases: 1000, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Integer,
    Numeric,
    Text,
    Boolean,
}

/// Column recipe: kind, missingness rate, value seed.
pub type ColumnRecipe = (Kind, f64, u64);

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        3 => Just(Kind::Integer),
        3 => Just(Kind::Numeric),
        1 => Just(Kind::Text),
        1 => Just(Kind::Boolean),
    ]
}

pub fn recipes(max_cols: usize) -> impl Strategy<Value = (usize, Vec<ColumnRecipe>, u64)> {
    (1usize..40, prop::collection::vec((kind(), 0.0f64..0.7, any::<u64>()), 1..=max_cols), any::<u64>())
}

/// Complete data drawn from small domains (so codes like -99 recur), then
/// made missing column by column under MCAR.
pub fn build(n_rows: usize, cols: &[ColumnRecipe], seed: u64) -> Table {
    use rand::{Rng, SeedableRng};
    let mut columns = Vec::new();
    for (j, &(kind, _, vseed)) in cols.iter().enumerate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(vseed);
        let name = format!("v{j}");
        let codes = [-99i64, -98, 0, 1, 2, 3, 7, 42];
        let col = match kind {
            Kind::Integer => Column::integer(name, (0..n_rows).map(|_| Some(codes[rng.gen_range(0..8)])).collect()),
            Kind::Numeric => Column::numeric(
                name,
                (0..n_rows).map(|_| Some(if rng.gen_bool(0.2) { -99.0 } else { rng.gen_range(-50.0..50.0) })).collect(),
            ),
            Kind::Text => Column::text(
                name,
                (0..n_rows).map(|_| Some(["a", "b", "N/A", "missing"][rng.gen_range(0..4)])).collect(),
            ),
            Kind::Boolean => Column::boolean(name, (0..n_rows).map(|_| Some(rng.gen_bool(0.5))).collect()),
        };
        columns.push(col);
    }
    let mut table = Table::new(columns).unwrap();
    for (j, &(kind, psi, _)) in cols.iter().enumerate() {
        let name = format!("v{j}");
        table = match kind {
            Kind::Integer | Kind::Numeric => {
                amputate(&table, &MechanismSpec::mcar(&name, psi), seed.wrapping_add(j as u64)).unwrap()
            }
            // amputation needs a numeric target; mask other kinds from a numeric proxy
            _ => {
                let proxy = Table::new(vec![Column::numeric("p", vec![Some(0.0); n_rows])]).unwrap();
                let masked = amputate(&proxy, &MechanismSpec::mcar("p", psi), seed.wrapping_add(j as u64)).unwrap();
                let rows: Vec<usize> = (0..n_rows).filter(|&r| masked.columns()[0].is_missing(r)).collect();
                let idx = table.index_of(&name).unwrap();
                table.with_replaced(idx, table.columns()[idx].with_missing(rows)).unwrap()
            }
        };
    }
    table
}
