//! C ABI over the tidymiss core.
//!
//! Tables and nabular tables are opaque heap handles freed with their
//! `*_free` function. Every fallible call returns a [`TmStatus`]; on failure
//! [`tm_last_error_message`] describes the error for the calling thread.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`tm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tidymiss::impute::{impute_lm, LinearModelSpec};
use tidymiss::plots::{self, BarUnit, PlotData, RenderOptions};
use tidymiss::shadow::{recode_shadow, WhereClause};
use tidymiss::summaries::{self, RateForm, Unit};
use tidymiss::{nabular, Error, NaTokenConfig, NabularTable, Table};

/// Opaque table handle.
pub struct TmTable(Table);

/// Opaque nabular table handle.
pub struct TmNabular(NabularTable);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Schema = 4,
    UnknownColumn = 5,
    NameCollision = 6,
    Type = 7,
    EmptyDomain = 8,
    Validation = 9,
    Singular = 10,
    Io = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmUnit {
    Cell = 0,
    Case = 1,
    Var = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmSummary {
    Numbers = 0,
    Vars = 1,
    Cases = 2,
    VarTable = 3,
    CaseTable = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TmPlot {
    MissVar = 0,
    MissCase = 1,
    Heatmap = 2,
    Upset = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TmStatus {
    match e {
        Error::Parse { .. } => TmStatus::Parse,
        Error::Schema(_) => TmStatus::Schema,
        Error::UnknownColumn(_) => TmStatus::UnknownColumn,
        Error::NameCollision(_) => TmStatus::NameCollision,
        Error::Type(_) => TmStatus::Type,
        Error::EmptyDomain(_) => TmStatus::EmptyDomain,
        Error::Validation(_) => TmStatus::Validation,
        Error::Singular(_) => TmStatus::Singular,
        Error::Io(_) => TmStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TmStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer passed for `{what}`"));
            TmStatus::NullArgument
        }
        Ok(Err(Fail::Utf8(what))) => {
            set_error(&format!("`{what}` is not valid UTF-8"));
            TmStatus::InvalidUtf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            TmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Core(Error::Validation("output contains a nul byte".into())))?;
    put(out, c.into_raw(), "out")
}

unsafe fn na_config(tokens: *const c_char) -> Result<NaTokenConfig, Fail> {
    if tokens.is_null() {
        return Ok(NaTokenConfig::default());
    }
    let s = str_arg(tokens, "na_tokens")?;
    Ok(NaTokenConfig::new(s.split(','))?)
}

unsafe fn bytes_arg<'a>(data: *const u8, len: usize) -> Result<&'a [u8], Fail> {
    if data.is_null() {
        if len == 0 {
            return Ok(&[]);
        }
        return Err(Fail::Null("data"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse delimited text. `na_tokens` is a comma-separated token list, or
/// NULL for the default (`NA` and the empty string).
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_table_read_csv(
    data: *const u8,
    len: usize,
    na_tokens: *const c_char,
    out: *mut *mut TmTable,
) -> TmStatus {
    guard(|| {
        let config = na_config(na_tokens)?;
        let table = tidymiss::table::read_delimited(bytes_arg(data, len)?, &config)?;
        put(out, Box::into_raw(Box::new(TmTable(table))), "out")
    })
}

/// # Safety
/// `t` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn tm_table_free(t: *mut TmTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Row count; 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_table_n_rows(t: *const TmTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.n_rows())
}

/// Column count; 0 for NULL.
///
/// # Safety
/// `t` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tm_table_n_cols(t: *const TmTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.n_cols())
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_table_to_csv(t: *const TmTable, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        let t = handle(t, "table")?;
        let mut buf = Vec::new();
        tidymiss::table::write_delimited(&t.0, &mut buf, &NaTokenConfig::default())?;
        put_string(out, String::from_utf8(buf).expect("utf-8 output"))
    })
}

/// # Safety
/// `t` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_count_missing(t: *const TmTable, n_miss: *mut usize, n_complete: *mut usize) -> TmStatus {
    guard(|| {
        let counts = summaries::count_missing(&handle(t, "table")?.0);
        put(n_miss, counts.n_miss, "n_miss")?;
        put(n_complete, counts.n_complete, "n_complete")
    })
}

/// Missing (or, with `complement`, complete) rate at the given unit, as a
/// proportion or a percent.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_rate_missing(
    t: *const TmTable,
    unit: TmUnit,
    percent: bool,
    complement: bool,
    out: *mut f64,
) -> TmStatus {
    guard(|| {
        let unit = match unit {
            TmUnit::Cell => Unit::Cell,
            TmUnit::Case => Unit::Case,
            TmUnit::Var => Unit::Var,
        };
        let form = if percent { RateForm::Percent } else { RateForm::Proportion };
        let rate = summaries::rate_missing(&handle(t, "table")?.0, unit, form, complement)?;
        put(out, rate, "out")
    })
}

/// A summary as a JSON document at full precision.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_summary_json(t: *const TmTable, kind: TmSummary, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        let table = &handle(t, "table")?.0;
        let value = match kind {
            TmSummary::Numbers => serde_json::to_value(summaries::single_numbers(table)?),
            TmSummary::Vars => serde_json::to_value(summaries::miss_var_summary(table)),
            TmSummary::Cases => serde_json::to_value(summaries::miss_case_summary(table)),
            TmSummary::VarTable => serde_json::to_value(summaries::miss_var_table(table)),
            TmSummary::CaseTable => serde_json::to_value(summaries::miss_case_table(table)),
        }
        .expect("summaries serialize");
        put_string(out, value.to_string())
    })
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_nabular(t: *const TmTable, out: *mut *mut TmNabular) -> TmStatus {
    guard(|| {
        let nab = nabular(&handle(t, "table")?.0)?;
        put(out, Box::into_raw(Box::new(TmNabular(nab))), "out")
    })
}

/// Parse a nabular table written by [`tm_nabular_to_csv`].
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_nabular_read_csv(
    data: *const u8,
    len: usize,
    na_tokens: *const c_char,
    out: *mut *mut TmNabular,
) -> TmStatus {
    guard(|| {
        let config = na_config(na_tokens)?;
        let nab = NabularTable::read_delimited(bytes_arg(data, len)?, &config)?;
        put(out, Box::into_raw(Box::new(TmNabular(nab))), "out")
    })
}

/// # Safety
/// `n` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn tm_nabular_free(n: *mut TmNabular) {
    if !n.is_null() {
        drop(Box::from_raw(n));
    }
}

/// # Safety
/// `n` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_nabular_to_csv(n: *const TmNabular, out: *mut *mut c_char) -> TmStatus {
    guard(|| {
        let n = handle(n, "nabular")?;
        let mut buf = Vec::new();
        n.0.write_delimited(&mut buf, &NaTokenConfig::default())?;
        put_string(out, String::from_utf8(buf).expect("utf-8 output"))
    })
}

/// Mark rows matching `where_clause` (e.g. `x == -99`) with `NA_<suffix>`
/// in `var`'s shadow column. Returns a new handle.
///
/// # Safety
/// `n` must be a live handle; strings must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tm_recode_shadow(
    n: *const TmNabular,
    var: *const c_char,
    where_clause: *const c_char,
    suffix: *const c_char,
    out: *mut *mut TmNabular,
) -> TmStatus {
    guard(|| {
        let n = handle(n, "nabular")?;
        let clause: WhereClause = str_arg(where_clause, "where_clause")?.parse()?;
        let nab = recode_shadow(&n.0, str_arg(var, "var")?, &clause, str_arg(suffix, "suffix")?)?;
        put(out, Box::into_raw(Box::new(TmNabular(nab))), "out")
    })
}

/// Linear-model imputation of the formula's response (`y ~ a + b`); the
/// shadow is left untouched. Returns a new handle.
///
/// # Safety
/// `n` must be a live handle; `formula` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tm_nabular_impute_lm(
    n: *const TmNabular,
    formula: *const c_char,
    out: *mut *mut TmNabular,
) -> TmStatus {
    guard(|| {
        let n = handle(n, "nabular")?;
        let spec: LinearModelSpec = str_arg(formula, "formula")?.parse()?;
        let imputed = impute_lm(&n.0, &spec)?.output;
        put(out, Box::into_raw(Box::new(TmNabular(imputed))), "out")
    })
}

/// Render an overview plot of `t` as SVG.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tm_plot_svg(
    t: *const TmTable,
    kind: TmPlot,
    width: f64,
    height: f64,
    out: *mut *mut c_char,
) -> TmStatus {
    guard(|| {
        let table = &handle(t, "table")?.0;
        let payload = match kind {
            TmPlot::MissVar => PlotData::Bar(plots::miss_overview_bars(table, BarUnit::Var)),
            TmPlot::MissCase => PlotData::Bar(plots::miss_overview_bars(table, BarUnit::Case)),
            TmPlot::Heatmap => PlotData::Heatmap(plots::vis_miss_data(table, false, false)),
            TmPlot::Upset => PlotData::Upset(plots::upset_data(&tidymiss::shadow::as_shadow(table)?)?),
        };
        let opts = RenderOptions { width, height, ..RenderOptions::default() };
        put_string(out, plots::render_svg(&payload, &opts)?)
    })
}
